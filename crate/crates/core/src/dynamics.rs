//! Linear and nonlinear Schrödinger dynamics driven by the exact kernel.
//!
//! The NLS `iψ' = H0 ψ - |ψ|^{2σ} ψ` is integrated by Strang splitting:
//! half a step of the nonlinear flow, a full step of the exact linear flow
//! `exp(-i dt H0)` (a kernel snapshot, no discretization error), and another
//! half nonlinear step. Both subflows preserve the ℓ² norm.
//!
//! On its own the nonlinear part is `ψ' = i |ψ|^{2σ} ψ`; `|ψ_n|` is constant
//! along it, so the exact flow is the phase rotation
//! `ψ_n ↦ exp(i dt |ψ_n|^{2σ}) ψ_n`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{apply_kernel, default_working_dim, kernel_matrix, sup_modulus, KernelMatrix};
use crate::output::format_float;

/// `ψ(t, ·)` on `0..N` with its time stamp and cached ℓ² norm.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionState {
    amplitudes: Vec<Complex64>,
    time: f64,
    l2_norm: f64,
}

fn l2(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

impl EvolutionState {
    pub fn new(amplitudes: Vec<Complex64>, time: f64) -> Self {
        let l2_norm = l2(&amplitudes);
        Self {
            amplitudes,
            time,
            l2_norm,
        }
    }

    /// `δ_k` on `0..max(dim, k+1)` at time zero.
    pub fn delta(k: usize, dim: usize) -> Self {
        let mut amps = vec![Complex64::default(); dim.max(k + 1)];
        amps[k] = Complex64::new(1.0, 0.0);
        Self::new(amps, 0.0)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Complex64::default(); dim], 0.0)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm
    }

    pub fn l1_norm(&self) -> f64 {
        self.amplitudes.iter().map(|v| v.norm()).sum()
    }

    pub fn linf_norm(&self) -> f64 {
        self.amplitudes.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Zero-pads (never truncates) to `dim`.
    pub fn padded(&self, dim: usize) -> Self {
        let mut amps = self.amplitudes.clone();
        if amps.len() < dim {
            amps.resize(dim, Complex64::default());
        }
        Self {
            amplitudes: amps,
            time: self.time,
            l2_norm: self.l2_norm,
        }
    }

    /// `Σ_{n >= from} |ψ_n|²`.
    pub fn mass_from(&self, from: usize) -> f64 {
        self.amplitudes.iter().skip(from).map(|v| v.norm_sqr()).sum()
    }

    /// Distance in ℓ², padding the shorter state with zeros.
    pub fn distance(&self, other: &EvolutionState) -> f64 {
        let len = self.dim().max(other.dim());
        (0..len)
            .map(|k| {
                let a = self.amplitudes.get(k).copied().unwrap_or_default();
                let b = other.amplitudes.get(k).copied().unwrap_or_default();
                (a - b).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Default tail tolerance for single linear propagations.
pub const LINEAR_TAIL_TOLERANCE: f64 = 1e-10;

const MAX_WORKING_DIM: usize = 1 << 20;

/// `exp(-itH0) ψ0`, growing the working dimension until the mass beyond it
/// is below `tail_tolerance`.
pub fn evolve_linear(
    psi0: &EvolutionState,
    t: f64,
    tail_tolerance: f64,
) -> Result<crate::kernel::Propagated> {
    let support = psi0.dim().max(1);
    let mut dim = default_working_dim(support, t);
    loop {
        match apply_kernel(psi0, t, Some(dim), tail_tolerance) {
            Err(Error::TailTooLarge { .. }) if dim < MAX_WORKING_DIM => dim *= 2,
            other => return other,
        }
    }
}

/// Exact flow of `iψ' = -|ψ|^{2σ} ψ` over `dt`.
pub fn nonlinear_substep(psi: &EvolutionState, dt: f64, sigma: u32) -> EvolutionState {
    let amps = psi
        .amplitudes
        .iter()
        .map(|&v| {
            let intensity = v.norm_sqr().powi(sigma as i32);
            v * Complex64::from_polar(1.0, dt * intensity)
        })
        .collect();
    // The phase rotation leaves every |ψ_n|, hence the norm, unchanged.
    EvolutionState {
        amplitudes: amps,
        time: psi.time,
        l2_norm: psi.l2_norm,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlsConfig {
    /// Power of the nonlinearity, `σ >= 1`.
    pub sigma: u32,
    pub dt: f64,
    pub t_final: f64,
    /// Initial working dimension; grows when mass reaches the boundary.
    pub dim: usize,
    /// `false` turns the nonlinear substeps off (pure linear flow).
    pub nonlinear: bool,
    /// Blow-up heuristic: abort when `||ψ||_∞` exceeds this.
    pub blowup_cap: f64,
}

impl NlsConfig {
    pub fn new(sigma: u32, dt: f64, t_final: f64, dim: usize) -> Self {
        Self {
            sigma,
            dt,
            t_final,
            dim,
            nonlinear: true,
            blowup_cap: 1e6,
        }
    }

    /// Number of steps; `dt` must divide `t_final` up to rounding.
    pub fn steps(&self) -> Result<usize> {
        if self.sigma < 1 {
            return Err(Error::InvalidArgument("sigma must be at least 1".into()));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument("dt must be positive".into()));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidArgument("final time must be nonnegative".into()));
        }
        if self.dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let steps = (self.t_final / self.dt).round();
        if (steps * self.dt - self.t_final).abs() > 1e-9 * self.t_final.max(self.dt) {
            return Err(Error::InvalidArgument(format!(
                "dt = {} does not divide T = {}",
                self.dt, self.t_final
            )));
        }
        Ok(steps as usize)
    }
}

/// Mass allowed to leave the working range in one linear step before the
/// range doubles.
const ESCAPE_MASS: f64 = 1e-12;

/// Exact linear flow over `dt` for states on `0..working`. The kernel is
/// assembled on the larger range `0..D` so the mass leaving `0..working`
/// can be measured instead of silently dropped.
struct LinearStep {
    matrix: KernelMatrix,
    working: usize,
}

impl LinearStep {
    fn new(working: usize, dt: f64) -> Result<Self> {
        let outer = default_working_dim(working, dt);
        Ok(Self {
            matrix: kernel_matrix(outer, dt)?,
            working,
        })
    }

    /// Propagated state on `0..working` and the ℓ² mass it sent beyond.
    fn apply(&self, psi: &EvolutionState) -> (EvolutionState, f64) {
        let src = &psi.amplitudes()[..self.working.min(psi.dim())];
        let rows: Vec<Complex64> = (0..self.matrix.dim())
            .into_par_iter()
            .map(|n| {
                let row = &self.matrix.row(n)[..src.len()];
                row.iter().zip(src).map(|(k, v)| k * v).sum()
            })
            .collect();
        let escaped = rows[self.working..].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let mut out = rows;
        out.truncate(self.working);
        (EvolutionState::new(out, psi.time + self.matrix.t()), escaped)
    }
}

/// Strang splitting with the exact linear flow; returns the states at
/// `0, dt, 2dt, ..., T`. The working range starts at `cfg.dim` and doubles
/// whenever a linear step would push more than `1e-12` of ℓ² mass past it.
pub fn evolve_nls(psi0: &EvolutionState, cfg: &NlsConfig) -> Result<Vec<EvolutionState>> {
    let steps = cfg.steps()?;
    let dim = cfg.dim.max(psi0.dim());
    let mut step = LinearStep::new(dim, cfg.dt)?;
    let mut psi = psi0.padded(dim);
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push(psi.clone());
    let half = 0.5 * cfg.dt;
    for k in 1..=steps {
        let next = loop {
            let mut cur = psi.padded(step.working);
            if cfg.nonlinear {
                cur = nonlinear_substep(&cur, half, cfg.sigma);
            }
            let (moved, escaped) = step.apply(&cur);
            if escaped > ESCAPE_MASS && step.working < MAX_WORKING_DIM {
                step = LinearStep::new(2 * step.working, cfg.dt)?;
                continue;
            }
            cur = moved;
            if cfg.nonlinear {
                cur = nonlinear_substep(&cur, half, cfg.sigma);
            }
            break cur;
        };
        // Pin the clock to the grid instead of accumulating rounding.
        psi = EvolutionState {
            time: psi0.time + k as f64 * cfg.dt,
            ..next
        };
        let linf = psi.linf_norm();
        if !(linf <= cfg.blowup_cap) {
            return Err(Error::BlowUp {
                linf,
                cap: cfg.blowup_cap,
                time: psi.time,
            });
        }
        trajectory.push(psi.clone());
    }
    Ok(trajectory)
}

/// One row of the dispersion table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionRow {
    pub t: f64,
    pub linf: f64,
    /// `||ψ0||_1 / sqrt(1+t²)`.
    pub bound: f64,
}

/// `(t, ||ψ(t)||_∞, ||ψ0||_1 / sqrt(1+t²))` over `t_grid`.
pub fn dispersion_experiment(psi0: &EvolutionState, t_grid: &[f64]) -> Result<Vec<DispersionRow>> {
    let l1 = psi0.l1_norm();
    t_grid
        .iter()
        .map(|&t| {
            let out = evolve_linear(psi0, t, LINEAR_TAIL_TOLERANCE)?;
            Ok(DispersionRow {
                t,
                linf: out.state.linf_norm(),
                bound: l1 * sup_modulus(t),
            })
        })
        .collect()
}

/// CSV with columns `t,n,re,im`.
pub fn trajectory_csv(trajectory: &[EvolutionState]) -> String {
    let mut out = String::from("t,n,re,im\n");
    for state in trajectory {
        for (n, v) in state.amplitudes().iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                format_float(state.time()),
                n,
                format_float(v.re),
                format_float(v.im)
            ));
        }
    }
    out
}

/// CSV with columns `t,l2,linf`.
pub fn summary_csv(trajectory: &[EvolutionState]) -> String {
    let mut out = String::from("t,l2,linf\n");
    for state in trajectory {
        out.push_str(&format!(
            "{},{},{}\n",
            format_float(state.time()),
            format_float(state.l2_norm()),
            format_float(state.linf_norm())
        ));
    }
    out
}
