//! Structural invariants of each layer, checked on fixed grids.

use laguerre_core::dynamics::{evolve_linear, evolve_nls, dispersion_experiment};
use laguerre_core::estimates::{log_grid, loglog_slope, sup_norm_scan};
use laguerre_core::kernel::{kernel_modulus, kernel_raw, kernel_value, rational, sup_modulus};
use laguerre_core::operator::{build_h0, first_kind_p, weyl_m0, weyl_solution};
use laguerre_core::oracles::{
    default_window, kernel_2f1, kernel_convolution, kernel_moment_exact, FiniteSection, DEFAULT_PANELS,
};
use laguerre_core::polynomials::{
    binomial, g_eval, g_sweep, jacobi_eval, jacobi_exact_poly, jacobi_exact_sum, laguerre_eval, legendre_eval,
    rational_to_f64, scan_grid,
};
use laguerre_core::{Complex64, EvolutionState, KernelQuery, NlsConfig, PolyIndex};
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn laguerre_recurrence_residual() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..50 {
        let x: f64 = rng.random_range(0.0..100.0);
        let l: Vec<f64> = (0..=201).map(|n| laguerre_eval(n, x)).collect();
        for n in 1..=200 {
            let nf = n as f64;
            let terms = [nf * l[n - 1], (2.0 * nf + 1.0) * l[n], (nf + 1.0) * l[n + 1], x * l[n]];
            let scale = terms.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let residual = x * l[n] + nf * l[n - 1] - (2.0 * nf + 1.0) * l[n] + (nf + 1.0) * l[n + 1];
            assert!(residual.abs() <= 1e-8 * scale, "x={x} n={n}");
        }
    }
}

#[test]
fn jacobi_recurrence_matches_exact_sum() {
    let points: Vec<BigRational> = (0..20).map(|k| rational(2 * k as i64 - 19, 19)).collect();
    let worst = (0..=60usize)
        .into_par_iter()
        .map(|m| {
            let mut worst: f64 = 0.0;
            for n in 0..=m {
                let idx = PolyIndex::new(n, m - n, 0);
                for p in &points {
                    let exact = rational_to_f64(&jacobi_exact_sum(n, m, p).unwrap());
                    let x = rational_to_f64(p);
                    let err = (jacobi_eval(idx, x) - exact).abs() / exact.abs().max(f64::MIN_POSITIVE);
                    worst = worst.max(err);
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst <= 1e-10, "{worst:e}");
}

#[test]
fn haagerup_schlichtkrull_bound() {
    let grid = scan_grid(1001, 1001);
    let cst = 2.0 * 168f64.powf(0.25);
    let worst = grid
        .par_iter()
        .map(|&x| {
            let weight = (1.0 - x * x).max(0.0).powf(0.25);
            let mut worst: f64 = 0.0;
            for a in 0..=20 {
                for b in 0..=20 {
                    for (n, g) in g_sweep(a, b, 101, x).into_iter().enumerate() {
                        let bound = cst / ((2 * n + a + b + 1) as f64).powf(0.25);
                        worst = worst.max(weight * g.abs() / bound);
                    }
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst <= 1.0, "{worst}");
}

#[test]
fn legendre_bernstein_bound() {
    let grid = scan_grid(1001, 1001);
    let worst = grid
        .par_iter()
        .map(|&x| {
            let weight = (1.0 - x * x).max(0.0).powf(0.25);
            g_sweep(0, 0, 501, x)
                .into_iter()
                .enumerate()
                .map(|(n, p)| weight * p.abs() * (std::f64::consts::PI * (2 * n + 1) as f64).sqrt() / 2.0)
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst <= 1.0, "{worst}");
    assert_eq!(g_sweep(0, 0, 8, 0.3)[7], legendre_eval(7, 0.3));
}

#[test]
fn jacobi_maximum_sits_at_one() {
    let grid = scan_grid(1001, 1001);
    for m in 0..=40 {
        for n in 0..=m {
            let idx = PolyIndex::new(n, m - n, 0);
            let (arg, max) = grid
                .iter()
                .map(|&x| (x, jacobi_eval(idx, x).abs()))
                .fold((0.0, -1.0), |best, cur| if cur.1 >= best.1 { cur } else { best });
            assert_eq!(arg, 1.0, "n={n} m={m}");
            assert!((max / binomial(m, n) - 1.0).abs() <= 5e-3, "n={n} m={m}");
        }
    }
}

#[test]
fn jacobi_slope_at_minus_one() {
    // d/dx P_n^{(m-n,0)}(-1) = (-1)^{n-1} n (m+1) / 2, from the derivative
    // identity; a variant with (-1)^n n (m-1) / 2 circulates and is wrong.
    let minus_one = rational(-1, 1);
    for m in 1..=15usize {
        for n in 1..=m {
            let p = jacobi_exact_poly(n, m).unwrap();
            let slope = p
                .coeffs()
                .iter()
                .enumerate()
                .skip(1)
                .fold(rational(0, 1), |acc, (k, c)| {
                    let power = if (k - 1) % 2 == 0 { rational(1, 1) } else { minus_one.clone() };
                    acc + c * BigRational::from_integer((k as i64).into()) * power
                });
            let sign = if n % 2 == 1 { 1 } else { -1 };
            assert_eq!(slope, rational(sign * (n * (m + 1)) as i64, 2), "n={n} m={m}");
            if m > 1 {
                assert_ne!(slope, rational(-sign * (n * (m - 1)) as i64, 2), "n={n} m={m}");
            }
        }
    }
}

#[test]
fn g_kernel_family_is_bounded_by_one() {
    let grid = scan_grid(1001, 0);
    let worst = grid
        .par_iter()
        .map(|&x| {
            (0..=300usize)
                .map(|a| g_sweep(a, 0, 301 - a, x).iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst <= 1.0 + 1e-12, "{worst}");
    assert_eq!(g_eval(PolyIndex::new(4, 0, 0), 1.0).value, 1.0);
}

#[test]
fn truncations_stay_positive_and_approach_zero() {
    let mut previous = f64::INFINITY;
    for dim in [8, 64, 512] {
        let lowest = build_h0(dim).unwrap().eigenvalues()[0];
        assert!(lowest > 0.0 && lowest < previous, "N={dim} λ_min={lowest}");
        previous = lowest;
    }
}

#[test]
fn weyl_function_is_herglotz() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..50 {
        let z = c(rng.random_range(-20.0..20.0), rng.random_range(1e-3..20.0));
        assert!(weyl_m0(z).unwrap().value.im > 0.0, "z={z}");
    }
}

#[test]
fn weyl_solution_partial_sums_settle() {
    for z in [c(-1.0, 0.0), c(0.0, 1.0)] {
        let psi = weyl_solution(400, z).unwrap();
        let tail: f64 = psi[201..=400].iter().map(|v| v.norm_sqr()).sum();
        assert!(tail < 1e-10, "z={z} tail={tail:e}");
    }
}

#[test]
fn first_kind_solves_truncated_recurrence() {
    let z = c(2.5, -0.7);
    let p = first_kind_p(30, z);
    let h = build_h0(30).unwrap();
    let hp = h.apply(&p[..30]);
    for n in 0..29 {
        assert!((hp[n] - z * p[n]).norm() <= 1e-9 * p[n + 1].norm().max(1.0), "n={n}");
    }
}

#[test]
fn kernel_symmetric_and_matches_raw_both_ways() {
    for n in 0..=40 {
        for m in 0..=40 {
            for t in [0.3, 1.0, 2.5] {
                let k = kernel_value(n, m, t);
                assert_eq!(k, kernel_value(m, n, t));
                if n + m <= 40 {
                    let raw = kernel_raw(KernelQuery::new(n.min(m), n.max(m), t));
                    assert!((k - raw).norm() <= 1e-10 * sup_modulus(t), "n={n} m={m} t={t}");
                }
            }
        }
    }
}

#[test]
fn negative_time_conjugates() {
    for n in 0..30 {
        for m in 0..30 {
            for t in [0.1, 0.8, 3.0, 20.0] {
                let diff = kernel_value(n, m, -t) - kernel_value(n, m, t).conj();
                assert!(diff.norm() <= 1e-13, "n={n} m={m} t={t}");
            }
        }
    }
}

#[test]
fn modulus_factorizes_through_g() {
    for n in 0..40 {
        for m in n..60 {
            for t in [0.2, 1.0, 4.0, 30.0] {
                let x = (1.0 - t * t) / (1.0 + t * t);
                let g = g_eval(PolyIndex::new(n, m - n, 0), x).value.abs();
                assert!((kernel_modulus(n, m, t) / sup_modulus(t) - g).abs() <= 1e-12, "n={n} m={m} t={t}");
            }
        }
    }
}

#[test]
fn large_time_limit_carries_parity_sign() {
    let (n, m) = (2, 5);
    let mut corrected: f64 = 0.0;
    for t in log_grid(10.0, 1000.0, 20).unwrap() {
        let k = kernel_value(n, m, t);
        let it = c(0.0, t);
        corrected = corrected.max((k + it.inv()).norm() * t * t);
        // Against +1/(it) the error tends to 2/t, not O(t⁻²).
        assert!((k - it.inv()).norm() * t > 1.5, "t={t}");
    }
    assert!(corrected < 100.0, "{corrected}");
}

#[test]
fn fixed_entries_decay_like_inverse_time() {
    let grid = log_grid(10.0, 100.0, 40).unwrap();
    for (n, m) in [(0, 0), (1, 1), (0, 3), (2, 5)] {
        let pts: Vec<(f64, f64)> = grid.iter().map(|&t| (t.ln(), kernel_modulus(n, m, t).ln())).collect();
        let slope = loglog_slope(&pts).unwrap();
        assert!((slope + 1.0).abs() <= 0.05, "n={n} m={m} slope={slope}");
    }
}

#[test]
fn sup_norm_has_no_truncation_dependence() {
    for dim in [2, 5, 33, 128] {
        for t in [0.05, 0.5, 3.0, 40.0] {
            let row = sup_norm_scan(t, dim).unwrap().rows[0];
            assert!((row.observed - sup_modulus(t)).abs() <= 1e-10, "N={dim} t={t}");
        }
    }
}

#[test]
fn oracles_agree_pairwise() {
    let section = FiniteSection::new(1024).unwrap();
    for (num, den) in [(1, 4), (1, 1), (3, 1)] {
        let tq = rational(num, den);
        let t = rational_to_f64(&tq);
        let worst = (0..=20usize)
            .into_par_iter()
            .flat_map_iter(|m| (0..=m).map(move |n| (n, m)))
            .map(|(n, m)| {
                let values = [
                    kernel_value(n, m, t),
                    kernel_moment_exact(n, m, &tq).unwrap().to_complex64(),
                    section.kernel(n, m, t),
                    kernel_2f1(n, m, t).unwrap(),
                ];
                let mut worst: f64 = 0.0;
                for a in 0..4 {
                    for b in a + 1..4 {
                        worst = worst.max((values[a] - values[b]).norm());
                    }
                }
                worst
            })
            .reduce(|| 0.0, f64::max);
        assert!(worst <= 1e-8, "t={t} {worst:e}");
    }
}

#[test]
fn convolution_agrees_with_closed_form() {
    for t in [0.25, 1.0, 3.0] {
        for (n, m) in [(0, 0), (0, 20), (5, 13), (20, 20), (3, 7)] {
            let v = kernel_convolution(n, m, t, default_window(t), DEFAULT_PANELS, 1e-4).unwrap();
            let err = (v.value - kernel_value(n, m, t)).norm() + v.tail_bound;
            assert!(err <= 1e-4, "n={n} m={m} t={t} err={err:e}");
        }
    }
}

#[test]
fn linear_and_nonlinear_flows_conserve_mass() {
    let psi0 = EvolutionState::new(vec![c(0.6, 0.0), c(0.0, -0.3), c(0.2, 0.4), c(-0.1, 0.0)], 0.0);
    let norm0 = psi0.l2_norm();
    for t in [0.5, 1.0, 2.0, 4.0] {
        let out = evolve_linear(&psi0, t, 1e-12).unwrap().state;
        assert!((out.l2_norm() - norm0).abs() <= 1e-8, "t={t}");
    }
    let cfg = NlsConfig::new(1, 1.0 / 32.0, 4.0, 32);
    for state in evolve_nls(&psi0, &cfg).unwrap() {
        assert!((state.l2_norm() - norm0).abs() <= 1e-8, "t={}", state.time());
    }
}

#[test]
fn linear_flow_obeys_sup_norm_bound() {
    let states = [
        EvolutionState::delta(0, 1),
        EvolutionState::delta(7, 8),
        EvolutionState::new(vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)], 0.0),
        EvolutionState::new((0..10).map(|k| c((k as f64).cos(), 0.3)).collect(), 0.0),
    ];
    let grid = log_grid(0.01, 30.0, 8).unwrap();
    for psi in &states {
        for row in dispersion_experiment(psi, &grid).unwrap() {
            assert!(row.linf <= row.bound * (1.0 + 1e-12), "t={} {} > {}", row.t, row.linf, row.bound);
        }
    }
}
