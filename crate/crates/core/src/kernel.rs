//! Closed-form kernel of `exp(-itH0)`.
//!
//! For `n <= m`, with `x = (1-t²)/(1+t²)`,
//!
//! ```text
//! K(n,m,t) = 1/(1+it) ((i+t)/(i-t))^n (t/(i-t))^{m-n} P_n^{(m-n,0)}(x)
//!          = 1/(1+it) ω(n,m,t) g_n^{(m-n,0)}(x)
//! ```
//!
//! where `ω` is unimodular. Writing `θ = arg(t+i)` one has
//! `(i+t)/(i-t) = -e^{2iθ}` and `t/(i-t) = -sgn(t) e^{iθ} |t/(i-t)|`, so
//! `ω = (-1)^m sgn(t)^{m-n} e^{i(m+n)θ}`. Every factor of the second form is
//! bounded by one, which is why the production path never touches the raw
//! Jacobi value (it reaches `binom(m, n)` while `|t/(i-t)|^{m-n}` underflows).
//!
//! `(1-x)/2 = t²/(1+t²)` and `(1+x)/2 = 1/(1+t²)` are formed directly from `t`
//! so that small `t` loses nothing to cancellation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::EvolutionState;
use crate::error::{Error, Result};
use crate::exact::ExactComplexRational;
use crate::polynomials::{
    g_from_halves, jacobi_eval, jacobi_exact_sum, legendre_eval, JacobiRecurrence, PolyIndex,
};

/// Below this `|t|` the kernel is taken to be the identity.
pub const TIME_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelQuery {
    pub n: usize,
    pub m: usize,
    pub t: f64,
}

impl KernelQuery {
    pub fn new(n: usize, m: usize, t: f64) -> Self {
        Self { n, m, t }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMethod {
    ClosedForm,
    SpecialCase,
    OracleMoment,
    OracleQuadrature,
    OracleExpm,
    OracleConvolution,
    OracleHypergeometric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEntry {
    pub value: Complex64,
    pub method: KernelMethod,
}

impl KernelEntry {
    fn new(value: Complex64, method: KernelMethod) -> Self {
        Self { value, method }
    }
}

/// `1/sqrt(1+t²)`, the largest kernel modulus at time `t`.
pub fn sup_modulus(t: f64) -> f64 {
    1.0 / t.hypot(1.0)
}

/// Per-time constants shared by every entry.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TimeFactors {
    pub prefactor: Complex64,
    pub theta: f64,
    pub half_minus: f64,
    pub half_plus: f64,
    pub x: f64,
    negative: bool,
}

impl TimeFactors {
    pub(crate) fn new(t: f64) -> Self {
        let t2 = t * t;
        let denom = 1.0 + t2;
        Self {
            prefactor: Complex64::new(1.0, t).inv(),
            theta: 1f64.atan2(t),
            half_minus: t2 / denom,
            half_plus: 1.0 / denom,
            x: (1.0 - t2) / denom,
            negative: t < 0.0,
        }
    }

    /// `ω(n, m, t)` for `n <= m`.
    pub(crate) fn phase(&self, lo: usize, hi: usize) -> Complex64 {
        let mut sign = if hi.is_multiple_of(2) { 1.0 } else { -1.0 };
        if self.negative && (hi - lo) % 2 == 1 {
            sign = -sign;
        }
        Complex64::from_polar(sign, (lo + hi) as f64 * self.theta)
    }

    pub(crate) fn entry(&self, lo: usize, hi: usize, g: f64) -> Complex64 {
        self.prefactor * self.phase(lo, hi) * g
    }
}

/// `g_k^{(alpha,0)}(x)` for `k = 0..count`, in one degree sweep.
pub(crate) fn g_diagonal(alpha: usize, count: usize, f: &TimeFactors) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let ln_prefactor = if alpha == 0 {
        0.0
    } else if f.half_minus > 0.0 {
        0.5 * alpha as f64 * f.half_minus.ln()
    } else {
        f64::NEG_INFINITY
    };
    let mut rec = JacobiRecurrence::new(alpha, 0, f.x);
    let mut cached_scale = f64::NAN;
    let mut factor = 0.0;
    for k in 0..count {
        if k > 0 {
            rec.advance();
        }
        debug_assert_eq!(rec.degree(), k);
        let (mantissa, log_scale) = rec.scaled();
        if log_scale != cached_scale {
            cached_scale = log_scale;
            factor = (log_scale + ln_prefactor).exp();
        }
        out.push(mantissa * factor);
    }
    out
}

/// Production path: the g-normalized closed form.
pub fn kernel_closed_form(q: KernelQuery) -> KernelEntry {
    let (lo, hi) = if q.n <= q.m { (q.n, q.m) } else { (q.m, q.n) };
    if q.t.abs() < TIME_EPSILON {
        let v = if lo == hi { 1.0 } else { 0.0 };
        return KernelEntry::new(Complex64::new(v, 0.0), KernelMethod::ClosedForm);
    }
    let f = TimeFactors::new(q.t);
    let g = g_from_halves(PolyIndex::new(lo, hi - lo, 0), f.half_minus, f.half_plus);
    let value = f.entry(lo, hi, g);
    debug_assert!(value.norm() <= sup_modulus(q.t) * (1.0 + 1e-12) + 1e-300);
    KernelEntry::new(value, KernelMethod::ClosedForm)
}

pub fn kernel_value(n: usize, m: usize, t: f64) -> Complex64 {
    kernel_closed_form(KernelQuery::new(n, m, t)).value
}

/// `|K(n,m,t)| = |g_n^{(m-n,0)}(x)| / sqrt(1+t²)`.
pub fn kernel_modulus(n: usize, m: usize, t: f64) -> f64 {
    kernel_value(n, m, t).norm()
}

/// Unnormalized closed form evaluated literally, with the raw Jacobi
/// polynomial. Only meaningful while `binom(m, n)` is modest; kept as a
/// cross-check for the g-normalized path.
pub fn kernel_raw(q: KernelQuery) -> Complex64 {
    let (lo, hi) = if q.n <= q.m { (q.n, q.m) } else { (q.m, q.n) };
    let t = q.t;
    let i = Complex64::new(0.0, 1.0);
    let prefactor = Complex64::new(1.0, t).inv();
    let ratio = (i + t) / (i - t);
    let shift = t / (i - t);
    let x = (1.0 - t * t) / (1.0 + t * t);
    prefactor
        * ratio.powu(lo as u32)
        * shift.powu((hi - lo) as u32)
        * jacobi_eval(PolyIndex::new(lo, hi - lo, 0), x)
}

/// The same literal formula in exact arithmetic at rational `t`.
pub fn kernel_closed_form_exact(n: usize, m: usize, t: &BigRational) -> ExactComplexRational {
    let (lo, hi) = if n <= m { (n, m) } else { (m, n) };
    let one = BigRational::one();
    let tc = ExactComplexRational::from_real(t.clone());
    let i = ExactComplexRational::i();
    let prefactor = ExactComplexRational::new(one.clone(), t.clone()).inv();
    let i_minus_t = &i - &tc;
    let ratio = &(&i + &tc) / &i_minus_t;
    let shift = &tc / &i_minus_t;
    let t2 = t * t;
    let x = (&one - &t2) / (&one + &t2);
    let p = jacobi_exact_sum(lo, hi, &x).expect("lo <= hi");
    let poly = ExactComplexRational::from_real(p);
    &(&(&prefactor * &ratio.pow(lo)) * &shift.pow(hi - lo)) * &poly
}

/// Closed expressions for `min(n,m) ∈ {0, 1}` and `n = m`; `None` elsewhere.
pub fn kernel_special(q: KernelQuery) -> Option<KernelEntry> {
    let (lo, hi) = if q.n <= q.m { (q.n, q.m) } else { (q.m, q.n) };
    let t = q.t;
    let i = Complex64::new(0.0, 1.0);
    let prefactor = Complex64::new(1.0, t).inv();
    let shift = t / (i - t);
    match lo {
        0 => {
            let v = prefactor * shift.powu(hi as u32);
            Some(KernelEntry::new(v, KernelMethod::SpecialCase))
        }
        1 => {
            if t == 0.0 {
                return Some(kernel_closed_form(q));
            }
            let hf = hi as f64;
            let v = prefactor * shift.powu(hi as u32 + 1) * ((t * t - hf) / (t * t));
            Some(KernelEntry::new(v, KernelMethod::SpecialCase))
        }
        _ if lo == hi => {
            let x = (1.0 - t * t) / (1.0 + t * t);
            let ratio = (i + t) / (i - t);
            let v = prefactor * ratio.powu(lo as u32) * legendre_eval(lo, x);
            Some(KernelEntry::new(v, KernelMethod::SpecialCase))
        }
        _ => None,
    }
}

/// Dense `N x N` snapshot of the kernel at time `t`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    dim: usize,
    t: f64,
    entries: Vec<Complex64>,
}

impl KernelMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.entries[n * self.dim + m]
    }

    pub fn row(&self, n: usize) -> &[Complex64] {
        &self.entries[n * self.dim..(n + 1) * self.dim]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|n| (n + 1..self.dim).all(|m| self.get(n, m) == self.get(m, n)))
    }

    /// `K u` for `u` of length `dim`.
    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(u.len(), self.dim);
        self.entries
            .par_chunks(self.dim)
            .map(|row| row.iter().zip(u).map(|(k, v)| k * v).sum())
            .collect()
    }

    /// Matrix product of two snapshots of the same dimension.
    pub fn compose(&self, other: &KernelMatrix) -> Vec<Complex64> {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = vec![Complex64::default(); d * d];
        out.par_chunks_mut(d).enumerate().for_each(|(i, row)| {
            for k in 0..d {
                let a = self.get(i, k);
                if a == Complex64::default() {
                    continue;
                }
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot += a * other.get(k, j);
                }
            }
        });
        out
    }
}

/// Assembles the kernel on `0..N` by one Jacobi sweep per diagonal.
pub fn kernel_matrix(dim: usize, t: f64) -> Result<KernelMatrix> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut entries = vec![Complex64::default(); dim * dim];
    if t.abs() < TIME_EPSILON {
        for n in 0..dim {
            entries[n * dim + n] = Complex64::new(1.0, 0.0);
        }
        return Ok(KernelMatrix { dim, t, entries });
    }
    let f = TimeFactors::new(t);
    let diagonals: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|alpha| {
            let g = g_diagonal(alpha, dim - alpha, &f);
            g.iter()
                .enumerate()
                .map(|(k, &gk)| f.entry(k, k + alpha, gk))
                .collect()
        })
        .collect();
    for (alpha, diag) in diagonals.iter().enumerate() {
        for (k, &v) in diag.iter().enumerate() {
            entries[k * dim + k + alpha] = v;
            entries[(k + alpha) * dim + k] = v;
        }
    }
    Ok(KernelMatrix { dim, t, entries })
}

/// Result of [`apply_kernel`]: the propagated state on `0..M` and the
/// ℓ² mass it places on rows `M..2M`, computed from the kernel.
#[derive(Debug, Clone)]
pub struct Propagated {
    pub state: EvolutionState,
    pub tail: f64,
}

/// Default working dimension for data supported on `0..N`.
///
/// Row `0` decays like `(t²/(1+t²))^{n/2}`, which needs about `56(1+t²)`
/// rows to reach `1e-12`; mass starting at site `n` travels out to about
/// `n (t + sqrt(1+t²))²`. The result is
/// `max(2N, 2N (t + sqrt(1+t²))² + ⌈64(1+t²)⌉)`.
pub fn default_working_dim(support: usize, t: f64) -> usize {
    let t = t.abs();
    let stretch = (t + t.hypot(1.0)).powi(2);
    let want = 2.0 * support as f64 * stretch + (64.0 * (1.0 + t * t)).ceil();
    let want = if want.is_finite() && want < 1e9 { want as usize } else { 1_000_000_000 };
    (2 * support).max(want)
}

/// `(ψ_t)_n = Σ_m K(n,m,t) ψ_m` for `n < M`.
///
/// `working_dim` defaults to [`default_working_dim`]. Fails with
/// [`Error::TailTooLarge`] when the mass beyond `M` exceeds `tail_tolerance`.
pub fn apply_kernel(
    psi: &EvolutionState,
    t: f64,
    working_dim: Option<usize>,
    tail_tolerance: f64,
) -> Result<Propagated> {
    let amps = psi.amplitudes();
    let support = amps
        .iter()
        .rposition(|v| *v != Complex64::default())
        .map_or(0, |k| k + 1);
    let dim = working_dim
        .unwrap_or_else(|| default_working_dim(support.max(1), t))
        .max(amps.len());
    if t.abs() < TIME_EPSILON {
        let mut out = amps.to_vec();
        out.resize(dim, Complex64::default());
        return Ok(Propagated {
            state: EvolutionState::new(out, psi.time() + t),
            tail: 0.0,
        });
    }
    let rows = 2 * dim;
    let f = TimeFactors::new(t);
    let src = &amps[..support];
    let out = (0..rows)
        .into_par_iter()
        .fold(
            || vec![Complex64::default(); rows],
            |mut acc, alpha| {
                let count = support.min(rows.saturating_sub(alpha));
                let g = g_diagonal(alpha, count, &f);
                for (k, &gk) in g.iter().enumerate() {
                    if gk == 0.0 {
                        continue;
                    }
                    let v = f.entry(k, k + alpha, gk);
                    // lower triangle: row k + alpha, column k
                    acc[k + alpha] += v * src[k];
                    // upper triangle: row k, column k + alpha
                    if alpha > 0 && k + alpha < support {
                        acc[k] += v * src[k + alpha];
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![Complex64::default(); rows],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let tail = out[dim..].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if tail > tail_tolerance {
        return Err(Error::TailTooLarge {
            tail,
            tolerance: tail_tolerance,
            dim,
        });
    }
    let mut out = out;
    out.truncate(dim);
    Ok(Propagated {
        state: EvolutionState::new(out, psi.time() + t),
        tail,
    })
}

/// Rational `t` as a `BigRational`, for the exact paths.
pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}
