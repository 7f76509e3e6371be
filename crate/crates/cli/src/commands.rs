use std::fmt::Write as _;

use anyhow::Result;
use laguerre_core::dynamics::{evolve_nls, summary_csv, trajectory_csv};
use laguerre_core::estimates::{
    band_bound_check, decay_bound_check, diagonal_bernstein_check, log_grid, sup_norm_scan, weighted_decay_scan,
    ScanReport,
};
use laguerre_core::kernel::{kernel_matrix, kernel_value, sup_modulus};
use laguerre_core::operator::resolvent_kernel;
use laguerre_core::oracles::{
    default_truncation, default_window, kernel_2f1, kernel_convolution, kernel_expm_checked, kernel_moment_exact,
    kernel_quadrature, DEFAULT_PANELS,
};
use laguerre_core::output::format_float;
use laguerre_core::{EvolutionState, NlsConfig};
use serde::Serialize;

use crate::args::{
    EvolveArgs, KernelArgs, MatrixArgs, Method, NormScanArgs, ResolventArgs, ScanQuantity, Series,
};
use crate::emit::{emit, Cplx};
use crate::parse::parse_state;

const ORACLE_TOLERANCE: f64 = 1e-8;
const CONVOLUTION_TOLERANCE: f64 = 1e-4;

#[derive(Serialize)]
struct ExactPair {
    re: String,
    im: String,
}

#[derive(Serialize)]
struct KernelPayload {
    n: usize,
    m: usize,
    t: f64,
    method: &'static str,
    re: f64,
    im: f64,
    modulus: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<ExactPair>,
}

fn method_name(method: Method) -> &'static str {
    match method {
        Method::Closed => "closed",
        Method::Moment => "moment",
        Method::Quadrature => "quadrature",
        Method::Expm => "expm",
        Method::Convolution => "convolution",
        Method::Hypergeometric => "hypergeometric",
    }
}

pub fn kernel(a: &KernelArgs) -> Result<bool> {
    let (n, m, t) = (a.n, a.m, a.t.value);
    let mut error_estimate = None;
    let mut exact = None;
    let value = match a.method {
        Method::Closed => kernel_value(n, m, t),
        Method::Moment => {
            let v = kernel_moment_exact(n, m, &a.t.exact)?;
            let z = v.to_complex64();
            exact = Some(ExactPair {
                re: v.re.to_string(),
                im: v.im.to_string(),
            });
            z
        }
        Method::Quadrature => {
            let nodes = (2 * (n + m + 1)).max(64);
            let est = kernel_quadrature(n, m, t, nodes, ORACLE_TOLERANCE)?;
            error_estimate = Some(est.error);
            est.value
        }
        Method::Expm => {
            let est = kernel_expm_checked(n, m, t, default_truncation(n, m, t), ORACLE_TOLERANCE)?;
            error_estimate = Some(est.error);
            est.value
        }
        Method::Convolution => {
            let v = kernel_convolution(n, m, t, default_window(t), DEFAULT_PANELS, CONVOLUTION_TOLERANCE)?;
            error_estimate = Some(v.tail_bound);
            v.value
        }
        Method::Hypergeometric => kernel_2f1(n, m, t)?,
    };
    let payload = KernelPayload {
        n,
        m,
        t,
        method: method_name(a.method),
        re: value.re,
        im: value.im,
        modulus: value.norm(),
        error_estimate,
        exact,
    };
    emit(&a.output, "kernel", &payload, || {
        format!(
            "n,m,t,method,re,im,modulus\n{},{},{},{},{},{},{}\n",
            n,
            m,
            format_float(t),
            payload.method,
            format_float(value.re),
            format_float(value.im),
            format_float(payload.modulus)
        )
    })?;
    Ok(true)
}

#[derive(Serialize)]
struct MatrixPayload {
    dim: usize,
    t: f64,
    entries: Vec<Vec<Cplx>>,
}

pub fn matrix(a: &MatrixArgs) -> Result<bool> {
    let k = kernel_matrix(a.dim, a.t.value)?;
    let payload = MatrixPayload {
        dim: k.dim(),
        t: k.t(),
        entries: (0..k.dim()).map(|n| k.row(n).iter().map(|&z| z.into()).collect()).collect(),
    };
    emit(&a.output, "matrix", &payload, || {
        let mut s = String::from("n,m,re,im\n");
        for n in 0..k.dim() {
            for (m, z) in k.row(n).iter().enumerate() {
                let _ = writeln!(s, "{n},{m},{},{}", format_float(z.re), format_float(z.im));
            }
        }
        s
    })?;
    Ok(true)
}

fn concat_reports(reports: Vec<ScanReport>) -> Option<ScanReport> {
    let mut iter = reports.into_iter();
    let mut out = iter.next()?;
    for r in iter {
        out.rows.extend(r.rows);
        out.violations.extend(r.violations);
        out.violation_count += r.violation_count;
    }
    Some(out)
}

#[derive(Serialize)]
struct ScanPayload<'a> {
    pass: bool,
    #[serde(flatten)]
    report: &'a ScanReport,
}

pub fn norm_scan(a: &NormScanArgs) -> Result<bool> {
    let grid = match &a.t {
        Some(t) => vec![t.value],
        None => log_grid(a.t_min, a.t_max, a.per_decade)?,
    };
    let report = match a.quantity {
        ScanQuantity::Sup => {
            let reports = grid.iter().map(|&t| sup_norm_scan(t, a.dim)).collect::<Result<Vec<_>, _>>()?;
            concat_reports(reports).expect("grid is nonempty")
        }
        ScanQuantity::Decay => decay_bound_check(&grid, a.dim)?,
        ScanQuantity::Band => band_bound_check(&grid, a.dim)?,
        ScanQuantity::Bernstein => diagonal_bernstein_check(&grid, a.dim)?,
        ScanQuantity::Weighted => weighted_decay_scan(a.sigma, &grid, a.dim)?,
    };
    let pass = report.pass();
    emit(&a.output, "norm-scan", &ScanPayload { pass, report: &report }, || report.to_csv())?;
    Ok(pass)
}

#[derive(Serialize)]
struct SummaryRow {
    t: f64,
    l2: f64,
    linf: f64,
    /// `||ψ0||_1 / sqrt(1+t²)`; only meaningful for the linear flow.
    #[serde(skip_serializing_if = "Option::is_none")]
    linf_bound: Option<f64>,
}

#[derive(Serialize)]
struct StateRow {
    t: f64,
    amplitudes: Vec<Cplx>,
}

#[derive(Serialize)]
struct EvolvePayload {
    init: String,
    nls: bool,
    sigma: Option<u32>,
    dt: f64,
    final_time: f64,
    final_dim: usize,
    bound_violations: usize,
    summary: Vec<SummaryRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trajectory: Option<Vec<StateRow>>,
}

pub fn evolve(a: &EvolveArgs) -> Result<bool> {
    let psi0: EvolutionState = parse_state(&a.init).map_err(anyhow::Error::msg)?;
    let mut cfg = NlsConfig::new(a.sigma, a.dt, a.t_final, a.dim);
    cfg.nonlinear = a.nls;
    let trajectory = evolve_nls(&psi0, &cfg)?;
    let l1 = psi0.l1_norm();
    let summary: Vec<SummaryRow> = trajectory
        .iter()
        .map(|s| SummaryRow {
            t: s.time(),
            l2: s.l2_norm(),
            linf: s.linf_norm(),
            linf_bound: (!a.nls).then(|| l1 * sup_modulus(s.time())),
        })
        .collect();
    let bound_violations = summary
        .iter()
        .filter(|r| r.linf_bound.is_some_and(|b| r.linf > b * (1.0 + 1e-12)))
        .count();
    let payload = EvolvePayload {
        init: a.init.clone(),
        nls: a.nls,
        sigma: a.nls.then_some(a.sigma),
        dt: a.dt,
        final_time: a.t_final,
        final_dim: trajectory.last().map_or(0, |s| s.dim()),
        bound_violations,
        summary,
        trajectory: (a.series == Series::Trajectory).then(|| {
            trajectory
                .iter()
                .map(|s| StateRow {
                    t: s.time(),
                    amplitudes: s.amplitudes().iter().map(|&z| z.into()).collect(),
                })
                .collect()
        }),
    };
    emit(&a.output, "evolve", &payload, || match a.series {
        Series::Summary => summary_csv(&trajectory),
        Series::Trajectory => trajectory_csv(&trajectory),
    })?;
    Ok(bound_violations == 0)
}

#[derive(Serialize)]
struct ResolventPayload {
    z: Cplx,
    n: usize,
    m: usize,
    value: Cplx,
}

pub fn resolvent(a: &ResolventArgs) -> Result<bool> {
    let value = resolvent_kernel(a.z, a.n, a.m)?;
    let payload = ResolventPayload {
        z: a.z.into(),
        n: a.n,
        m: a.m,
        value: value.into(),
    };
    emit(&a.output, "resolvent", &payload, || {
        format!(
            "z_re,z_im,n,m,re,im\n{},{},{},{},{},{}\n",
            format_float(a.z.re),
            format_float(a.z.im),
            a.n,
            a.m,
            format_float(value.re),
            format_float(value.im)
        )
    })?;
    Ok(true)
}
