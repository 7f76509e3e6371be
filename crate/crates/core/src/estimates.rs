//! Norm identities and dispersive inequalities, checked over grids.
//!
//! Every scan works with moduli only: `|K(n,m,t)| = |g_n^{(m-n,0)}(x)| / sqrt(1+t²)`,
//! so each diagonal `m - n = α` is one Jacobi sweep.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{g_diagonal, sup_modulus, TimeFactors};
use crate::output::format_float;

/// Relative slack for rounding when an inequality is attained with equality.
pub const ROUNDING_SLACK: f64 = 1e-12;

/// `C = 2 * 42^{1/4}` in `|K| <= C t^{-1/2} (n+m+1)^{-1/4}`.
pub fn decay_constant() -> f64 {
    2.0 * 42f64.powf(0.25)
}

/// Exponents of the weighted space `ℓ^p_σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedNormSpec {
    pub p: f64,
    pub sigma: f64,
}

impl WeightedNormSpec {
    pub fn new(p: f64, sigma: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::InvalidArgument(format!("p must be >= 1, got {p}")));
        }
        if !sigma.is_finite() {
            return Err(Error::InvalidArgument(format!("sigma must be finite, got {sigma}")));
        }
        Ok(Self { p, sigma })
    }
}

/// `(Σ (1+n)^{pσ} |u_n|^p)^{1/p}`, or `sup (1+n)^σ |u_n|` for `p = ∞`.
pub fn weighted_norm(u: &[Complex64], spec: WeightedNormSpec) -> Result<f64> {
    let spec = WeightedNormSpec::new(spec.p, spec.sigma)?;
    let weighted = u
        .iter()
        .enumerate()
        .map(|(n, v)| (1.0 + n as f64).powf(spec.sigma) * v.norm());
    if spec.p.is_infinite() {
        return Ok(weighted.fold(0.0, f64::max));
    }
    Ok(weighted.map(|w| w.powf(spec.p)).sum::<f64>().powf(1.0 / spec.p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `max |K|` against `1/sqrt(1+t²)`.
    SupNorm,
    /// `max |K| sqrt(t) (n+m+1)^{1/4}` against `2 * 42^{1/4}`.
    DecayBound,
    /// `max |K| sqrt(1+t²) / (1+|m-n|)` against 1.
    BandBound,
    /// `max_n |K(n,n,t)| sqrt(πt(n+1/2))` against 1.
    DiagonalBernstein,
    /// `max (1+n)^{-σ}(1+m)^{-σ} |K|` against `1/sqrt(1+t²)`.
    WeightedDecay,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::SupNorm => "sup_norm",
            Quantity::DecayBound => "decay_bound",
            Quantity::BandBound => "band_bound",
            Quantity::DiagonalBernstein => "diagonal_bernstein",
            Quantity::WeightedDecay => "weighted_decay",
        }
    }
}

/// One grid time. `argmax` is the smallest `(n, m)` with `n <= m` attaining
/// `observed`; `ties` counts matrix entries within rounding of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub t: f64,
    pub observed: f64,
    pub bound: f64,
    pub argmax: (usize, usize),
    pub ties: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub m: usize,
    pub t: f64,
    pub observed: f64,
    pub bound: f64,
}

/// Least-squares slope of `ln observed` against `ln t` on `[t_lo, t_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFit {
    pub t_lo: f64,
    pub t_hi: f64,
    pub power: f64,
}

/// Violations beyond this many are counted but not stored.
pub const MAX_STORED_VIOLATIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub quantity: Quantity,
    pub dim: usize,
    pub rows: Vec<ScanRow>,
    pub violations: Vec<Violation>,
    pub violation_count: usize,
    pub fit: Option<PowerFit>,
}

impl ScanReport {
    pub fn pass(&self) -> bool {
        self.violation_count == 0
    }

    pub fn t_grid(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    pub fn observed(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.observed).collect()
    }

    pub fn bound(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.bound).collect()
    }

    /// Largest `observed` over the grid.
    pub fn max_observed(&self) -> f64 {
        self.rows.iter().map(|r| r.observed).fold(f64::NEG_INFINITY, f64::max)
    }

    /// CSV with columns `t,quantity,observed,bound,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,quantity,observed,bound,pass\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                format_float(r.t),
                self.quantity.name(),
                format_float(r.observed),
                format_float(r.bound),
                r.pass
            ));
        }
        out
    }
}

/// `per_decade` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || per_decade == 0 {
        return Err(Error::InvalidArgument(format!("bad log grid [{lo}, {hi}]")));
    }
    let decades = (hi / lo).log10();
    let steps = (decades * per_decade as f64).round() as usize;
    if steps == 0 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..=steps)
        .map(|k| match k {
            0 => lo,
            k if k == steps => hi,
            k => 10f64.powf(a + (b - a) * k as f64 / steps as f64),
        })
        .collect())
}

pub const DEFAULT_PER_DECADE: usize = 40;

/// Reduction state for one time.
#[derive(Debug, Clone)]
struct Accumulator {
    max: f64,
    argmax: (usize, usize),
    ties: usize,
    violations: Vec<Violation>,
    violation_count: usize,
}

impl Accumulator {
    fn empty() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            argmax: (usize::MAX, usize::MAX),
            ties: 0,
            violations: Vec::new(),
            violation_count: 0,
        }
    }

    fn observe(&mut self, n: usize, m: usize, value: f64, multiplicity: usize) {
        if value > self.max * (1.0 + ROUNDING_SLACK) || self.ties == 0 {
            self.max = value;
            self.argmax = (n, m);
            self.ties = multiplicity;
        } else if value >= self.max * (1.0 - ROUNDING_SLACK) {
            self.max = self.max.max(value);
            self.argmax = self.argmax.min((n, m));
            self.ties += multiplicity;
        }
    }

    fn violate(&mut self, v: Violation) {
        self.violation_count += 1;
        if self.violations.len() < MAX_STORED_VIOLATIONS {
            self.violations.push(v);
        }
    }

    fn merge(mut self, other: Self) -> Self {
        if other.ties > 0 {
            if self.ties == 0 || other.max > self.max * (1.0 + ROUNDING_SLACK) {
                self.max = other.max;
                self.argmax = other.argmax;
                self.ties = other.ties;
            } else if other.max >= self.max * (1.0 - ROUNDING_SLACK) {
                self.max = self.max.max(other.max);
                self.argmax = self.argmax.min(other.argmax);
                self.ties += other.ties;
            }
        }
        self.violation_count += other.violation_count;
        let room = MAX_STORED_VIOLATIONS - self.violations.len();
        self.violations.extend(other.violations.into_iter().take(room));
        self
    }
}

/// Visits `|K(n,m,t)|` for `n <= m < dim`, one diagonal per task.
/// `measure(n, m, modulus)` returns `(observed, bound)`; `diagonal_only`
/// restricts to `m = n`.
fn scan_time<F>(t: f64, dim: usize, diagonal_only: bool, measure: F) -> Accumulator
where
    F: Fn(usize, usize, f64) -> (f64, f64) + Sync,
{
    let f = TimeFactors::new(t);
    let scale = sup_modulus(t);
    let diagonals = if diagonal_only { 1 } else { dim };
    let mut acc = (0..diagonals)
        .into_par_iter()
        .fold(Accumulator::empty, |mut acc, alpha| {
            let g = g_diagonal(alpha, dim - alpha, &f);
            let multiplicity = if alpha == 0 { 1 } else { 2 };
            for (k, gk) in g.into_iter().enumerate() {
                let (n, m) = (k, k + alpha);
                let (observed, bound) = measure(n, m, gk.abs() * scale);
                acc.observe(n, m, observed, multiplicity);
                if observed > bound * (1.0 + ROUNDING_SLACK) {
                    acc.violate(Violation { n, m, t, observed, bound });
                }
            }
            acc
        })
        .reduce(Accumulator::empty, Accumulator::merge);
    acc.violations.sort_by_key(|a| (a.n, a.m));
    acc
}

fn assemble<F>(quantity: Quantity, t_grid: &[f64], dim: usize, diagonal_only: bool, measure: F) -> ScanReport
where
    F: Fn(f64, usize, usize, f64) -> (f64, f64) + Sync,
{
    let mut rows = Vec::with_capacity(t_grid.len());
    let mut violations = Vec::new();
    let mut violation_count = 0;
    for &t in t_grid {
        let acc = scan_time(t, dim, diagonal_only, |n, m, modulus| measure(t, n, m, modulus));
        let bound = measure(t, acc.argmax.0, acc.argmax.1, f64::NAN).1;
        rows.push(ScanRow {
            t,
            observed: acc.max,
            bound,
            argmax: acc.argmax,
            ties: acc.ties,
            pass: acc.violation_count == 0,
        });
        violation_count += acc.violation_count;
        let room = MAX_STORED_VIOLATIONS.saturating_sub(violations.len());
        violations.extend(acc.violations.into_iter().take(room));
    }
    ScanReport {
        quantity,
        dim,
        rows,
        violations,
        violation_count,
        fit: None,
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(())
}

fn check_positive(t_grid: &[f64]) -> Result<()> {
    match t_grid.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        Some(t) => Err(Error::InvalidArgument(format!("times must be positive, got {t}"))),
        None => Ok(()),
    }
}

/// `max_{n,m<N} |K(n,m,t)|` against `1/sqrt(1+t²)`.
pub fn sup_norm_scan(t: f64, dim: usize) -> Result<ScanReport> {
    check_dim(dim)?;
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t must be finite, got {t}")));
    }
    let bound = sup_modulus(t);
    Ok(assemble(Quantity::SupNorm, &[t], dim, false, |_, _, _, modulus| {
        (modulus, bound)
    }))
}

/// `|K| <= C t^{-1/2} (n+m+1)^{-1/4}`, reported in the normalized form
/// `|K| sqrt(t) (n+m+1)^{1/4} <= C`. The report's largest `observed` is
/// the empirical constant over the scanned range.
pub fn decay_bound_check(t_grid: &[f64], dim: usize) -> Result<ScanReport> {
    check_dim(dim)?;
    check_positive(t_grid)?;
    let c = decay_constant();
    Ok(assemble(Quantity::DecayBound, t_grid, dim, false, move |t, n, m, modulus| {
        (modulus * t.sqrt() * ((n + m + 1) as f64).powf(0.25), c)
    }))
}

/// `|K| <= (1+|m-n|)/sqrt(1+t²)`, normalized to a bound of 1.
pub fn band_bound_check(t_grid: &[f64], dim: usize) -> Result<ScanReport> {
    check_dim(dim)?;
    Ok(assemble(Quantity::BandBound, t_grid, dim, false, |t, n, m, modulus| {
        (modulus / sup_modulus(t) / (1 + m.abs_diff(n)) as f64, 1.0)
    }))
}

/// `|K(n,n,t)| <= 1/sqrt(πt(n+1/2))`, normalized to a bound of 1. The
/// largest `observed` measures how sharp the bound is.
pub fn diagonal_bernstein_check(t_grid: &[f64], dim: usize) -> Result<ScanReport> {
    check_dim(dim)?;
    check_positive(t_grid)?;
    Ok(assemble(Quantity::DiagonalBernstein, t_grid, dim, true, |t, n, _, modulus| {
        (modulus * (std::f64::consts::PI * t * (n as f64 + 0.5)).sqrt(), 1.0)
    }))
}

/// `max (1+n)^{-σ}(1+m)^{-σ}|K(n,m,t)|` per time, with its power-law fit
/// over the top decade of the grid.
pub fn weighted_decay_scan(sigma: f64, t_grid: &[f64], dim: usize) -> Result<ScanReport> {
    check_dim(dim)?;
    check_positive(t_grid)?;
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma must be >= 0, got {sigma}")));
    }
    let mut report = assemble(Quantity::WeightedDecay, t_grid, dim, false, move |t, n, m, modulus| {
        let w = ((1 + n) as f64 * (1 + m) as f64).powf(-sigma);
        (w * modulus, sup_modulus(t))
    });
    report.fit = top_decade_fit(&report.t_grid(), &report.observed());
    Ok(report)
}

/// Fit over `[t_max/10, t_max]`; `None` with fewer than two points there.
pub fn top_decade_fit(t: &[f64], y: &[f64]) -> Option<PowerFit> {
    let t_hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let t_lo = t_hi / 10.0;
    let points: Vec<(f64, f64)> = t
        .iter()
        .zip(y)
        .filter(|(t, y)| **t >= t_lo * (1.0 - 1e-12) && **y > 0.0)
        .map(|(t, y)| (t.ln(), y.ln()))
        .collect();
    let power = loglog_slope(&points)?;
    Some(PowerFit { t_lo, t_hi, power })
}

/// Least-squares slope through `(x, y)` pairs.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
