//! The Laguerre operator `H0` and its spectral data.
//!
//! `(τu)_0 = u_0 + u_1`, `(τu)_n = n u_{n-1} + (2n+1) u_n + (n+1) u_{n+1}`.
//! `H0 = (I+U) D (I+U*)` with `U` the forward shift and `D = diag(n+1)`,
//! which makes positivity explicit. The spectral measure is `e^{-λ} dλ` on
//! `[0, ∞)` and the Weyl function is `m0(z) = e^{-z} E1(-z)`.
//!
//! Second-kind polynomials `Q_n(z)` are produced by the forward recurrence.
//! Off the real axis the recurrence is dominated by the growing first-kind
//! solution `P_n(z) = (-1)^n L_n(z)`, so the Weyl solution
//! `Ψ_n = Q_n + m0 P_n`, which decays, is obtained with an absolute error of
//! order `ε |L_n(z)|^2`. For `z` at distance `O(1)` from `[0, ∞)` this stays
//! below `1e-8` up to `n ≈ 20`; on or near the spectrum `L_n` does not grow
//! exponentially and several hundred terms are fine.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polynomials::laguerre_table;

/// Top-left `N x N` block of `H0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    diagonal: Vec<f64>,
    offdiagonal: Vec<f64>,
}

/// Eigendecomposition of a truncation; column `k` of `eigenvectors` belongs
/// to `eigenvalues[k]`, sorted ascending.
#[derive(Debug, Clone)]
pub struct TruncatedSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl TruncatedOperator {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn offdiagonal(&self) -> &[f64] {
        &self.offdiagonal
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut a = DMatrix::zeros(n, n);
        for (i, &d) in self.diagonal.iter().enumerate() {
            a[(i, i)] = d;
        }
        for (i, &b) in self.offdiagonal.iter().enumerate() {
            a[(i, i + 1)] = b;
            a[(i + 1, i)] = b;
        }
        a
    }

    /// Matrix-vector product with the truncated matrix (Dirichlet cut-off).
    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(u.len(), n, "vector length must match the truncation");
        (0..n)
            .map(|i| {
                let mut acc = u[i] * self.diagonal[i];
                if i > 0 {
                    acc += u[i - 1] * self.offdiagonal[i - 1];
                }
                if i + 1 < n {
                    acc += u[i + 1] * self.offdiagonal[i];
                }
                acc
            })
            .collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self.to_dense().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    pub fn spectrum(&self) -> TruncatedSpectrum {
        let eig = SymmetricEigen::new(self.to_dense());
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let eigenvectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        TruncatedSpectrum {
            eigenvalues,
            eigenvectors,
        }
    }

    /// Solves `(H_N - z) x = rhs` by the tridiagonal (Thomas) elimination.
    pub fn solve_shifted(&self, z: Complex64, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(rhs.len(), n, "right-hand side length must match the truncation");
        let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
        let mut d_prime = vec![Complex64::new(0.0, 0.0); n];
        let mut denom = self.diagonal[0] - z;
        if n > 1 {
            c_prime[0] = self.offdiagonal[0] / denom;
        }
        d_prime[0] = rhs[0] / denom;
        for i in 1..n {
            let sub = self.offdiagonal[i - 1];
            denom = (self.diagonal[i] - z) - sub * c_prime[i - 1];
            if i + 1 < n {
                c_prime[i] = self.offdiagonal[i] / denom;
            }
            d_prime[i] = (rhs[i] - sub * d_prime[i - 1]) / denom;
        }
        let mut x = d_prime;
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] -= c_prime[i] * next;
        }
        x
    }

    /// Column `m` of `(H_N - z)^{-1}`.
    pub fn resolvent_column(&self, z: Complex64, m: usize) -> Vec<Complex64> {
        let mut rhs = vec![Complex64::new(0.0, 0.0); self.dim()];
        rhs[m] = Complex64::new(1.0, 0.0);
        self.solve_shifted(z, &rhs)
    }
}

/// Diagonal `2n+1`, off-diagonal `n+1`.
pub fn build_h0(dim: usize) -> Result<TruncatedOperator> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(TruncatedOperator {
        diagonal: (0..dim).map(|n| (2 * n + 1) as f64).collect(),
        offdiagonal: (0..dim - 1).map(|n| (n + 1) as f64).collect(),
    })
}

/// The difference expression `τ` applied to `u` (zero beyond its length).
/// The result has one more entry than `u`, since `(τu)_N = N u_{N-1}`.
pub fn apply_tau(u: &[Complex64]) -> Vec<Complex64> {
    let n = u.len();
    let at = |k: usize| u.get(k).copied().unwrap_or_default();
    (0..=n)
        .map(|k| {
            let kf = k as f64;
            let left = if k > 0 { at(k - 1) * kf } else { Complex64::default() };
            left + at(k) * (2.0 * kf + 1.0) + at(k + 1) * (kf + 1.0)
        })
        .collect()
}

/// `(I+U) D (I+U*) u`, same index range as [`apply_tau`].
pub fn factorization_apply(u: &[Complex64]) -> Vec<Complex64> {
    let n = u.len();
    let at = |k: usize| u.get(k).copied().unwrap_or_default();
    // v = D (I + U*) u
    let v: Vec<Complex64> = (0..n).map(|k| (at(k) + at(k + 1)) * (k + 1) as f64).collect();
    (0..=n)
        .map(|k| {
            let here = v.get(k).copied().unwrap_or_default();
            let below = if k > 0 { v[k - 1] } else { Complex64::default() };
            here + below
        })
        .collect()
}

/// `<H0 u, u> = ||sqrt(D) (I+U*) u||^2`, nonnegative by construction.
pub fn quadratic_form(u: &[Complex64]) -> f64 {
    let at = |k: usize| u.get(k).copied().unwrap_or_default();
    (0..u.len())
        .map(|k| (k + 1) as f64 * (at(k) + at(k + 1)).norm_sqr())
        .sum()
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_RADIUS: f64 = 4.0;

fn on_negative_axis(w: Complex64) -> bool {
    w.im == 0.0 && w.re <= 0.0
}

/// `E1(w) = -γ - ln w - Σ_{k>=1} (-w)^k / (k k!)`, principal branch.
pub fn e1_series(w: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0); // (-w)^k / k!
    for k in 1..2000 {
        power = power * (-w) / k as f64;
        let term = power / k as f64;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - w.ln() - sum
}

/// `e^w E1(w)` from the continued fraction
/// `1/(w+1- 1/(w+3- 4/(w+5- ...)))`, by the modified Lentz method.
/// `None` if it has not settled after the iteration cap, which only happens
/// close to the negative real axis.
pub fn e1_scaled_continued_fraction(w: Complex64) -> Option<Complex64> {
    const TINY: f64 = 1e-300;
    let mut b = w + 1.0;
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 1..20_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = an * d + b;
        if d.norm() < TINY {
            d = Complex64::new(TINY, 0.0);
        }
        c = b + an / c;
        if c.norm() < TINY {
            c = Complex64::new(TINY, 0.0);
        }
        d = Complex64::new(1.0, 0.0) / d;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            return Some(h);
        }
    }
    None
}

/// Principal-branch exponential integral `E1(w)`, `w` off `(-∞, 0]`.
/// Power series for `|w| <= 4`, continued fraction beyond.
pub fn exp_integral_e1(w: Complex64) -> Result<Complex64> {
    if on_negative_axis(w) {
        return Err(Error::BranchCut(w));
    }
    if w.norm() <= SERIES_RADIUS {
        return Ok(e1_series(w));
    }
    match e1_scaled_continued_fraction(w) {
        Some(scaled) => Ok(scaled * (-w).exp()),
        None => Ok(e1_series(w)),
    }
}

/// Value of the Weyl function at `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylValue {
    pub z: Complex64,
    pub value: Complex64,
}

/// `m0(z) = e^{-z} E1(-z)`, `z` off `[0, ∞)`.
pub fn weyl_m0(z: Complex64) -> Result<WeylValue> {
    let w = -z;
    if on_negative_axis(w) {
        return Err(Error::BranchCut(z));
    }
    let value = if w.norm() <= SERIES_RADIUS {
        e1_series(w) * w.exp()
    } else {
        match e1_scaled_continued_fraction(w) {
            Some(scaled) => scaled,
            None => e1_series(w) * w.exp(),
        }
    };
    Ok(WeylValue { z, value })
}

/// `Q_0(z), ..., Q_N(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondKindSeq {
    pub z: Complex64,
    pub values: Vec<Complex64>,
}

/// Second-kind polynomials, `Q_{n+1} = ((z - (2n+1)) Q_n - n Q_{n-1}) / (n+1)`.
pub fn second_kind_q(n_max: usize, z: Complex64) -> Result<SecondKindSeq> {
    if n_max == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(Complex64::new(0.0, 0.0));
    values.push(Complex64::new(1.0, 0.0));
    for n in 1..n_max {
        let nf = n as f64;
        let next = ((z - (2.0 * nf + 1.0)) * values[n] - nf * values[n - 1]) / (nf + 1.0);
        values.push(next);
    }
    Ok(SecondKindSeq { z, values })
}

/// First-kind polynomials `P_n(z) = (-1)^n L_n(z)`, `n = 0..=n_max`.
pub fn first_kind_p(n_max: usize, z: Complex64) -> Vec<Complex64> {
    laguerre_table(n_max, z)
        .into_iter()
        .enumerate()
        .map(|(n, l)| if n % 2 == 0 { l } else { -l })
        .collect()
}

const RATIO_START_MAX: usize = 1 << 22;

/// Ratios `Ψ_n / Ψ_{n-1}`, `n = 1..=n_max`, by the backward continued
/// fraction `r_n = -n / (2n+1-z + (n+1) r_{n+1})` started at `start`.
fn recessive_ratios(n_max: usize, z: Complex64, start: usize) -> Vec<Complex64> {
    let mut r = Complex64::new(0.0, 0.0);
    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for n in (1..=start).rev() {
        let nf = n as f64;
        r = -nf / (Complex64::new(2.0 * nf + 1.0, 0.0) - z + (nf + 1.0) * r);
        if n <= n_max {
            out[n] = r;
        }
    }
    out
}

/// Weyl solution `Ψ_n = Q_n + m0 P_n`, `n = 0..=n_max`.
///
/// Ψ is the recessive solution, so forming `Q_n + m0 P_n` directly cancels
/// catastrophically once `P_n` grows. The values are built instead from
/// `Ψ_0 = m0` and backward ratios, deepening the start until two passes
/// agree; next to the spectrum, where that never settles, the direct sum is
/// used.
pub fn weyl_solution(n_max: usize, z: Complex64) -> Result<Vec<Complex64>> {
    let m0 = weyl_m0(z)?.value;
    let mut start = 2 * n_max + 64;
    let mut ratios = recessive_ratios(n_max, z, start);
    while start < RATIO_START_MAX {
        start *= 2;
        let deeper = recessive_ratios(n_max, z, start);
        let settled = ratios
            .iter()
            .zip(&deeper)
            .all(|(a, b)| (a - b).norm() <= 1e-15 * b.norm());
        ratios = deeper;
        if settled {
            let mut psi = Vec::with_capacity(n_max + 1);
            psi.push(m0);
            for n in 1..=n_max {
                psi.push(psi[n - 1] * ratios[n]);
            }
            return Ok(psi);
        }
    }
    let q = second_kind_q(n_max.max(1), z)?.values;
    let p = first_kind_p(n_max, z);
    Ok((0..=n_max).map(|n| q[n] + m0 * p[n]).collect())
}

/// `G(z; n, m) = <(H0 - z)^{-1} δ_n, δ_m> = P_{min}(z) Ψ_{max}(z)`.
pub fn resolvent_kernel(z: Complex64, n: usize, m: usize) -> Result<Complex64> {
    let (lo, hi) = if n <= m { (n, m) } else { (m, n) };
    let psi = weyl_solution(hi, z)?;
    let p = first_kind_p(lo, z);
    Ok(p[lo] * psi[hi])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::laguerre_eval_complex;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn delta(k: usize, len: usize) -> Vec<Complex64> {
        let mut v = vec![c(0.0, 0.0); len];
        v[k] = c(1.0, 0.0);
        v
    }

    #[test]
    fn truncations_match_matrix_entries() {
        assert!(matches!(build_h0(0), Err(Error::ZeroDimension)));
        let h1 = build_h0(1).unwrap();
        assert_eq!(h1.diagonal(), &[1.0]);
        assert!(h1.offdiagonal().is_empty());
        let h3 = build_h0(3).unwrap();
        assert_eq!(h3.diagonal(), &[1.0, 3.0, 5.0]);
        assert_eq!(h3.offdiagonal(), &[1.0, 2.0]);
        let h = build_h0(40).unwrap();
        for n in 1..39 {
            assert_eq!(h.diagonal()[n], h.offdiagonal()[n - 1] + h.offdiagonal()[n]);
        }
    }

    #[test]
    fn factorization_reproduces_two_by_two_block() {
        // (I+U) D (I+U*) truncated to 2x2: [[1,1],[1,3]]
        let d = [1.0, 2.0];
        let dense = build_h0(2).unwrap().to_dense();
        let prod = |i: usize, j: usize| -> f64 {
            // (I+U)_{ik} = δ_ik + δ_{i,k+1}
            (0..2)
                .map(|k| {
                    let left = if i == k || i == k + 1 { 1.0 } else { 0.0 };
                    let right = if j == k || j == k + 1 { 1.0 } else { 0.0 };
                    left * d[k] * right
                })
                .sum()
        };
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(prod(i, j), dense[(i, j)]);
            }
        }
    }

    #[test]
    fn tau_on_unit_vectors() {
        let e0 = apply_tau(&delta(0, 4));
        assert_eq!(&e0[..3], &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let e1 = apply_tau(&delta(1, 4));
        assert_eq!(&e1[..4], &[c(1.0, 0.0), c(3.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(factorization_apply(&delta(0, 4))[..3], e0[..3]);
    }

    #[test]
    fn tau_and_factorization_agree() {
        let u: Vec<Complex64> = (0..64)
            .map(|k| c(((k * 37 % 11) as f64 - 5.0) / 3.0, ((k * 13 % 7) as f64 - 3.0) / 2.0))
            .collect();
        let a = apply_tau(&u);
        let b = factorization_apply(&u);
        for k in 0..63 {
            assert!((a[k] - b[k]).norm() <= 1e-13 * a[k].norm().max(1.0));
        }
        let form: Complex64 = a.iter().zip(&u).map(|(x, y)| x * y.conj()).sum();
        assert!((form.re - quadratic_form(&u)).abs() < 1e-9 * form.re.abs());
        assert!(quadratic_form(&u) >= 0.0);
    }

    #[test]
    fn domain_example_sequence() {
        // u_n = (-1)^n/(n+1): τu stays bounded in ℓ², Du does not.
        let norms = |len: usize| {
            let u: Vec<Complex64> = (0..len)
                .map(|n| c(if n % 2 == 0 { 1.0 } else { -1.0 } / (n + 1) as f64, 0.0))
                .collect();
            let tau: f64 = apply_tau(&u)[..len - 1].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            let du: f64 = u
                .iter()
                .enumerate()
                .map(|(n, v)| ((n + 1) as f64 * v).norm_sqr())
                .sum::<f64>()
                .sqrt();
            (tau, du)
        };
        let (tau_small, du_small) = norms(100);
        let (tau_big, du_big) = norms(10_000);
        assert!(tau_big < 1.0 && (tau_big - tau_small).abs() < 1e-2);
        assert!(du_big > 9.0 * du_small);
    }

    #[test]
    fn e1_reference_values() {
        // Independent alternating series at z = 1, summed to convergence.
        let mut s = 0.0;
        let mut fact = 1.0;
        for k in 1..40 {
            fact *= k as f64;
            s += (-1.0f64).powi(k as i32) / (k as f64 * fact);
        }
        let oracle = -EULER_GAMMA - s;
        let e1 = exp_integral_e1(c(1.0, 0.0)).unwrap();
        assert!((e1.re - oracle).abs() < 1e-15 && e1.im.abs() < 1e-300);
        assert!((e1.re - 0.219_383_934_395_520_27).abs() < 1e-15);

        let vals: Vec<f64> = [5.0, 10.0, 20.0]
            .iter()
            .map(|&x| exp_integral_e1(c(x, 0.0)).unwrap().re)
            .collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2] && vals[2] > 0.0);
        assert!(vals[2] < 1e-9);
    }

    #[test]
    fn e1_paths_agree_on_switch_ring() {
        for k in 0..24 {
            let theta = -0.8 * std::f64::consts::PI + 1.6 * std::f64::consts::PI * k as f64 / 23.0;
            let w = Complex64::from_polar(4.0, theta);
            let series = e1_series(w);
            let cf = e1_scaled_continued_fraction(w).unwrap() * (-w).exp();
            assert!((series - cf).norm() <= 1e-12 * series.norm(), "theta={theta}");
        }
    }

    #[test]
    fn e1_rejects_branch_cut() {
        assert!(matches!(exp_integral_e1(c(-2.0, 0.0)), Err(Error::BranchCut(_))));
        assert!(matches!(exp_integral_e1(c(0.0, 0.0)), Err(Error::BranchCut(_))));
        assert!(matches!(weyl_m0(c(3.0, 0.0)), Err(Error::BranchCut(_))));
        assert!(exp_integral_e1(c(-2.0, 1e-9)).is_ok());
    }

    #[test]
    fn weyl_function_values() {
        let m = weyl_m0(c(-1.0, 0.0)).unwrap().value;
        let expected = std::f64::consts::E * 0.219_383_934_395_520_27;
        assert!((m.re - expected).abs() < 1e-14);
        assert!((m.re - 0.596_347_362_323_194).abs() < 1e-12);

        let a = weyl_m0(c(-1e-4, 0.0)).unwrap().value.re;
        let b = weyl_m0(c(-1e-2, 0.0)).unwrap().value.re;
        assert!(a > b && b > m.re);

        let eps = 1e-6;
        let im = weyl_m0(c(1.0, eps)).unwrap().value.im / std::f64::consts::PI;
        assert!((im - (-1.0f64).exp()).abs() < 1e-4 * (-1.0f64).exp());
    }

    #[test]
    fn weyl_function_large_arguments_do_not_overflow() {
        let m = weyl_m0(c(-800.0, 0.0)).unwrap().value;
        // ∫ e^{-λ}/(λ+w) dλ ~ Σ (-1)^k k! / w^{k+1}
        let w = 800.0f64;
        let asymptotic: f64 = [1.0, -1.0, 2.0, -6.0, 24.0, -120.0]
            .iter()
            .enumerate()
            .map(|(k, c)| c / w.powi(k as i32 + 1))
            .sum();
        assert!((m.re - asymptotic).abs() < 1e-12 * asymptotic);
        assert_eq!(m.im, 0.0);
        let far = weyl_m0(c(30.0, 0.5)).unwrap().value;
        assert!(far.is_finite() && far.im > 0.0);
    }

    #[test]
    fn second_kind_start_and_first_step() {
        let z = c(0.7, -0.3);
        let q = second_kind_q(5, z).unwrap().values;
        assert_eq!(q[0], c(0.0, 0.0));
        assert_eq!(q[1], c(1.0, 0.0));
        assert!((q[2] - (z - 3.0) / 2.0).norm() < 1e-15);
        assert!(second_kind_q(0, z).is_err());
    }

    #[test]
    fn first_kind_solves_recurrence() {
        let z = c(2.5, 0.4);
        let p = first_kind_p(30, z);
        let h = build_h0(30).unwrap();
        let hp = h.apply(&p[..30]);
        for n in 0..29 {
            assert!((hp[n] - z * p[n]).norm() <= 1e-10 * p[n].norm().max(1.0));
        }
    }

    #[test]
    fn wronskian_near_spectrum() {
        let z = c(3.0, 0.02);
        let q = second_kind_q(101, z).unwrap().values;
        for n in 0..100 {
            let w = laguerre_eval_complex(n, z) * q[n + 1] + laguerre_eval_complex(n + 1, z) * q[n];
            let expected = if n % 2 == 0 { 1.0 } else { -1.0 } / (n + 1) as f64;
            assert!((w - expected).norm() <= 1e-12 * expected.abs(), "n={n}");
        }
    }

    #[test]
    fn resolvent_matches_truncated_inverse() {
        let z = c(-1.0, 0.0);
        let h = build_h0(512).unwrap();
        assert!((resolvent_kernel(z, 0, 0).unwrap() - weyl_m0(z).unwrap().value).norm() < 1e-15);
        for m in 0..=16 {
            let col = h.resolvent_column(z, m);
            for n in 0..=16 {
                let g = resolvent_kernel(z, n, m).unwrap();
                assert!((g - col[n]).norm() < 1e-8, "n={n} m={m}");
                assert_eq!(g, resolvent_kernel(z, m, n).unwrap());
            }
        }
    }

    #[test]
    fn weyl_solution_is_square_summable() {
        for z in [c(-1.0, 0.0), c(0.0, 1.0)] {
            let h = build_h0(1200).unwrap();
            // The minimal solution via the truncated solve: Ψ_n = G(z;0,n).
            let psi = h.resolvent_column(z, 0);
            let partial = |n: usize| psi[..=n].iter().map(|v| v.norm_sqr()).sum::<f64>();
            assert!((partial(400) - partial(200)).abs() < 1e-10);
            let direct = weyl_solution(12, z).unwrap();
            for n in 0..=12 {
                assert!((direct[n] - psi[n]).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn truncated_positivity() {
        let mut last = f64::INFINITY;
        for n in [8, 64, 512] {
            let low = build_h0(n).unwrap().eigenvalues()[0];
            assert!(low > 0.0 && low < last);
            last = low;
        }
        assert!(last < 1e-2);
    }
}
