//! Independent routes to `K(n,m,t)`.
//!
//! None of these touch the Jacobi-polynomial closed form:
//!
//! * moments: `(-1)^{n+m} ∫ e^{-itλ} L_n L_m e^{-λ} dλ` expanded exactly,
//!   using `∫ λ^k e^{-(1+it)λ} dλ = k! / (1+it)^{k+1}`;
//! * Gauss–Laguerre quadrature of the same integral;
//! * finite section: `exp(-itH_N)` from the eigendecomposition of the
//!   truncated matrix, which knows nothing about special functions;
//! * the convolution `(1/2π) ∫ F_n(s) F_m(t-s) ds` with
//!   `F_n(s) = 2/(1+2is) ((1-2is)/(1+2is))^n`, the Fourier transform of
//!   `(-1)^n L_n(λ) e^{-λ/2}`;
//! * the terminating `2F1(-n,-m;-n-m;1+1/t²)` form of the Laplace transform.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::ExactComplexRational;
use crate::operator::build_h0;
use crate::polynomials::{binomial, binomial_exact, laguerre_eval, laguerre_exact};

/// Largest `n + m` accepted by the exact moment expansion.
pub const MAX_EXACT_DEGREE: usize = 80;

/// Exact kernel at rational `t` from the Laguerre moment expansion.
pub fn kernel_moment_exact(n: usize, m: usize, t: &BigRational) -> Result<ExactComplexRational> {
    if n + m > MAX_EXACT_DEGREE {
        return Err(Error::ExactDegreeTooLarge {
            limit: MAX_EXACT_DEGREE,
            got: n + m,
        });
    }
    let product = laguerre_exact(n).mul(&laguerre_exact(m));
    // w = 1/(1+it)
    let w = ExactComplexRational::new(BigRational::one(), t.clone()).inv();
    let mut w_power = w.clone();
    let mut factorial = BigInt::one();
    let mut sum = ExactComplexRational::zero();
    for (k, c) in product.coeffs().iter().enumerate() {
        if k > 0 {
            factorial *= BigInt::from(k);
            w_power = &w_power * &w;
        }
        let coeff = c * BigRational::from_integer(factorial.clone());
        sum = &sum + &w_power.scale(&coeff);
    }
    if (n + m) % 2 == 1 {
        sum = -&sum;
    }
    Ok(sum)
}

/// Gauss–Laguerre rule (weight `e^{-λ}`). Nodes are the eigenvalues of the
/// Jacobi matrix of the weight, which is `H0` itself (Golub–Welsch).
///
/// Weights come from the Christoffel function `1 / Σ_{k<N} L_k(x)²`
/// rather than from squared eigenvector components: the latter carry only
/// absolute accuracy, while the weights at the large nodes are far below
/// machine epsilon.
#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `ln Σ_{k<count} L_k(x)²`, rescaling as the recurrence grows.
fn ln_christoffel_sum(count: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut sum = 0.0;
    let mut ln_scale = 0.0;
    for k in 0..count {
        sum += cur * cur;
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > 1e100 {
            prev *= 1e-100;
            cur *= 1e-100;
            sum *= 1e-200;
            ln_scale += 200.0 * std::f64::consts::LN_10;
        }
    }
    sum.ln() + ln_scale
}

impl GaussLaguerre {
    pub fn new(count: usize) -> Result<Self> {
        let nodes = build_h0(count)?.eigenvalues();
        let weights = nodes.iter().map(|&x| (-ln_christoffel_sum(count, x)).exp()).collect();
        Ok(Self { nodes, weights })
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}

/// Oracle value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

fn quadrature_once(n: usize, m: usize, t: f64, nodes: usize) -> Result<Complex64> {
    let rule = GaussLaguerre::new(nodes)?;
    let sign = if (n + m).is_multiple_of(2) { 1.0 } else { -1.0 };
    let v = rule.integrate(|x| {
        Complex64::from_polar(laguerre_eval(n, x) * laguerre_eval(m, x), -t * x)
    });
    Ok(v * sign)
}

/// Gauss–Laguerre quadrature of the moment integral with `nodes` points,
/// checked against `2 * nodes`.
///
/// The integrand oscillates like `e^{-itλ}` while the largest node grows
/// like `4 * nodes`; the rule converges roughly like `(t²/(1+t²))^{nodes}`,
/// so moderate `|t|` (a few units) is the useful range.
pub fn kernel_quadrature(n: usize, m: usize, t: f64, nodes: usize, tolerance: f64) -> Result<Estimate> {
    if nodes < n + m + 1 {
        return Err(Error::InvalidArgument(format!(
            "need at least n + m + 1 = {} nodes, got {nodes}",
            n + m + 1
        )));
    }
    let coarse = quadrature_once(n, m, t, nodes)?;
    let fine = quadrature_once(n, m, t, 2 * nodes)?;
    let change = (fine - coarse).norm();
    if change > tolerance {
        return Err(Error::NotConverged {
            method: "Gauss-Laguerre quadrature",
            change,
            tolerance,
        });
    }
    Ok(Estimate {
        value: coarse,
        error: change,
    })
}

/// Eigendecomposition of `H_N`, reusable for any `(n, m, t)`.
#[derive(Debug, Clone)]
pub struct FiniteSection {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl FiniteSection {
    pub fn new(n_trunc: usize) -> Result<Self> {
        let spectrum = build_h0(n_trunc)?.spectrum();
        Ok(Self {
            eigenvalues: spectrum.eigenvalues,
            eigenvectors: spectrum.eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Entry `(n, m)` of `exp(-itH_N)`.
    pub fn kernel(&self, n: usize, m: usize, t: f64) -> Complex64 {
        assert!(n < self.dim() && m < self.dim(), "index outside the truncation");
        self.eigenvalues
            .iter()
            .enumerate()
            .map(|(k, &lambda)| {
                let weight = self.eigenvectors[(n, k)] * self.eigenvectors[(m, k)];
                Complex64::from_polar(weight, -t * lambda)
            })
            .sum()
    }
}

/// Default truncation `16 max(n, m, ⌈t²⌉) + 64`.
pub fn default_truncation(n: usize, m: usize, t: f64) -> usize {
    let t2 = (t * t).ceil().min(1e6) as usize;
    16 * n.max(m).max(t2) + 64
}

/// Entry `(n, m)` of `exp(-itH_N)` for one truncation.
pub fn kernel_expm(n: usize, m: usize, t: f64, n_trunc: usize) -> Result<Complex64> {
    if n.max(m) >= n_trunc {
        return Err(Error::InvalidArgument(format!(
            "truncation {n_trunc} does not contain index {}",
            n.max(m)
        )));
    }
    Ok(FiniteSection::new(n_trunc)?.kernel(n, m, t))
}

/// [`kernel_expm`] compared against the doubled truncation.
pub fn kernel_expm_checked(n: usize, m: usize, t: f64, n_trunc: usize, tolerance: f64) -> Result<Estimate> {
    let coarse = kernel_expm(n, m, t, n_trunc)?;
    let fine = kernel_expm(n, m, t, 2 * n_trunc)?;
    let change = (fine - coarse).norm();
    if change > tolerance {
        return Err(Error::NotConverged {
            method: "finite-section propagator",
            change,
            tolerance,
        });
    }
    Ok(Estimate {
        value: coarse,
        error: change,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FSample {
    pub t: f64,
    pub value: Complex64,
}

/// `F_n(t) = 2/(1+2it) ((1-2it)/(1+2it))^n`; the ratio is `e^{-2i atan 2t}`.
pub fn f_n(t: f64, n: usize) -> FSample {
    let base = Complex64::new(2.0, 0.0) / Complex64::new(1.0, 2.0 * t);
    let value = base * Complex64::from_polar(1.0, -2.0 * n as f64 * (2.0 * t).atan());
    FSample { t, value }
}

/// Convolution value with the bound on what the truncated integral and its
/// leading-order tail correction leave out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

pub fn default_window(t: f64) -> f64 {
    1e3 * (1.0 + t.abs())
}

pub const DEFAULT_PANELS: usize = 1_000_000;

/// `(1/2π) ∫ F_n(s) F_m(t-s) ds`.
///
/// Composite midpoint rule on `[-W, t+W]`. Outside, with `a = 1/(1+2is)`
/// and `b = 1/(1+2i(t-s))`, the integrand is `4(-1)^{n+m} ab` up to a
/// remainder below `(n+m)(1+1/W)^{n+m} |s|^{-3}`; the leading part is
/// integrated in closed form through `ab = (a+b)/(2+2it)` and the remainder
/// is reported as `tail_bound`.
pub fn kernel_convolution(
    n: usize,
    m: usize,
    t: f64,
    window: f64,
    panels: usize,
    tolerance: f64,
) -> Result<ConvolutionValue> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument("convolution form needs t > 0".into()));
    }
    if !(window > 0.0) || panels == 0 {
        return Err(Error::InvalidArgument("window and panel count must be positive".into()));
    }
    let lo = -window;
    let hi = t + window;
    let h = (hi - lo) / panels as f64;
    let chunk = 4096;
    // Chunk sums are combined in index order so the result does not depend
    // on how the work was split.
    let chunks: Vec<Complex64> = (0..panels.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let end = (start + chunk).min(panels);
            (start..end)
                .map(|j| {
                    let s = lo + (j as f64 + 0.5) * h;
                    f_n(s, n).value * f_n(t - s, m).value
                })
                .sum::<Complex64>()
        })
        .collect();
    let body = chunks.iter().sum::<Complex64>() * h;

    let i2 = Complex64::new(0.0, 2.0);
    let antiderivative = |s: f64| -> Complex64 {
        ((Complex64::new(1.0, 2.0 * s)).ln() - (Complex64::new(1.0, 2.0 * (t - s))).ln()) / i2
    };
    let half_pi = Complex64::new(std::f64::consts::FRAC_PI_2, 0.0);
    let tails = (half_pi - antiderivative(hi)) + (antiderivative(lo) + half_pi);
    let sign = if (n + m).is_multiple_of(2) { 1.0 } else { -1.0 };
    let leading = tails * 4.0 * sign / Complex64::new(2.0, 2.0 * t);

    let degree = (n + m) as f64;
    let remainder = degree * (1.0 + 1.0 / window).powf(degree) / (window * window);

    let two_pi = 2.0 * std::f64::consts::PI;
    let value = (body + leading) / two_pi;
    let tail_bound = remainder / two_pi;
    if tail_bound > tolerance {
        return Err(Error::NotConverged {
            method: "convolution tail",
            change: tail_bound,
            tolerance,
        });
    }
    Ok(ConvolutionValue { value, tail_bound })
}

/// Relative rounding budget for the floating ₂F₁ sum; past it
/// [`kernel_2f1`] switches to exact arithmetic.
pub const HYP2F1_FLOAT_BUDGET: f64 = 1e-13;

/// `1/(1+it) (-it/(1+it))^{n+m} binom(n+m, n) 2F1(-n,-m;-n-m;1+1/t²)`.
///
/// The series alternates with terms of size `binom(n+m,n) (1+1/t²)^k`
/// against a result of modulus at most `1/sqrt(1+t²)`. The floating sum is
/// kept when the absolute-term sum bounds its rounding error below
/// [`HYP2F1_FLOAT_BUDGET`]; otherwise the value comes from
/// [`kernel_2f1_exact`] at the exact binary value of `t`.
pub fn kernel_2f1(n: usize, m: usize, t: f64) -> Result<Complex64> {
    if t == 0.0 {
        return Err(Error::ZeroTime);
    }
    let p = Complex64::new(1.0, t);
    let lead = p.inv();
    if n + m == 0 {
        return Ok(lead);
    }
    let ratio = Complex64::new(0.0, -t) / p;
    let z = 1.0 + 1.0 / (t * t);
    let c = (n + m) as f64;
    let (mut term, mut sum, mut abs_sum) = (1.0f64, 1.0f64, 1.0f64);
    for k in 0..n.min(m) {
        let kf = k as f64;
        term *= z * (kf - n as f64) * (kf - m as f64) / ((kf - c) * (kf + 1.0));
        sum += term;
        abs_sum += term.abs();
    }
    let scale = lead.norm() * ratio.norm().powi((n + m) as i32) * binomial(n + m, n);
    let rounding = 4.0 * f64::EPSILON * (n.min(m) + 1) as f64 * scale * abs_sum;
    if rounding <= HYP2F1_FLOAT_BUDGET * lead.norm() {
        return Ok(lead * ratio.powu((n + m) as u32) * binomial(n + m, n) * sum);
    }
    let exact = BigRational::from_float(t)
        .ok_or_else(|| Error::InvalidArgument(format!("t must be finite, got {t}")))?;
    Ok(kernel_2f1_exact(n, m, &exact)?.to_complex64())
}

/// [`kernel_2f1`] in exact arithmetic at rational `t != 0`.
pub fn kernel_2f1_exact(n: usize, m: usize, t: &BigRational) -> Result<ExactComplexRational> {
    if t.is_zero() {
        return Err(Error::ZeroTime);
    }
    let one = BigRational::one();
    let p = ExactComplexRational::new(one.clone(), t.clone());
    let lead = p.inv();
    let ratio = &ExactComplexRational::new(BigRational::zero(), -t.clone()) / &p;
    let z = &one + (&one / (t * t));
    let mut term = one.clone();
    let mut sum = one;
    let c = (n + m) as i64;
    for k in 0..n.min(m) as i64 {
        let num = BigInt::from((k - n as i64) * (k - m as i64));
        let den = BigInt::from((k - c) * (k + 1));
        term = term * &z * BigRational::new(num, den);
        sum += &term;
    }
    let binom = BigRational::from_integer(BigInt::from(binomial_exact(n + m, n)));
    Ok((&lead * &ratio.pow(n + m)).scale(&(binom * sum)))
}
