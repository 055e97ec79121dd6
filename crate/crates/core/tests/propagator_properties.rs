use btfloquet::geometry::HoleShape;
use btfloquet::numcore::{arnoldi, rng_stream, vecops};
use btfloquet::operators::{dispersion, BlochPhases, ProblemConfig};
use btfloquet::propagator::{cn_step, monodromy_apply, MonodromyContext};
use btfloquet::spectra::{monodromy_spectrum, no_hole_mode_factor, unfold};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

/// `e^{2πi(kx + my)}` sampled on the active nodes.
fn plane_wave(ctx: &MonodromyContext, k: i64, m: i64) -> Vec<Complex64> {
    let g = ctx.grid();
    (0..g.active_count())
        .map(|d| {
            let [x, y] = g.coords(d);
            Complex64::from_polar(1.0, TAU * (k as f64 * x + m as f64 * y))
        })
        .collect()
}

fn rel_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    vecops::norm(&vecops::sub(a, b)) / vecops::norm(b)
}

fn no_hole(g: f64, q: f64, p0: f64, n: usize, nt: usize) -> ProblemConfig {
    let mut cfg = ProblemConfig::new(g, q, HoleShape::None, n);
    cfg.p0 = p0;
    cfg.nt = nt;
    cfg.solver.tol = 1e-14;
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn one_step_scales_plane_waves(g in 1.0f64..500.0, q in 0.0f64..TAU, p0 in 0.0f64..TAU,
                                   k in -3i64..4, m in -3i64..4, j in 0usize..32) {
        let cfg = no_hole(g, q, p0, 8, 32);
        let ctx = MonodromyContext::new(&cfg).unwrap();
        let w = plane_wave(&ctx, k, m);
        let a = 0.5 * ctx.dt() * dispersion(k, m, ctx.schedule()[j], BlochPhases::new(0.0, q).q(), 8);
        let factor = (1.0 - a) / (1.0 + a);
        let out = cn_step(&ctx, &w, j).unwrap();
        let expect: Vec<Complex64> = w.iter().map(|v| v * factor).collect();
        prop_assert!(rel_diff(&out, &expect) < 1e-12);
    }

    #[test]
    fn one_period_is_the_step_product(g in 5.0f64..500.0, q in 0.0f64..TAU, p0 in 0.0f64..TAU,
                                      k in -2i64..3, m in -2i64..3) {
        let cfg = no_hole(g, q, p0, 8, 64);
        let ctx = MonodromyContext::new(&cfg).unwrap();
        let w = plane_wave(&ctx, k, m);
        let rho = no_hole_mode_factor(&cfg, k, m);
        let end = ctx.evolve_period(&w, |_, _| {}).unwrap();
        let expect: Vec<Complex64> = w.iter().map(|v| v * rho).collect();
        prop_assert!(vecops::norm(&vecops::sub(&end, &expect)) <= 1e-12 * vecops::norm(&w));
        // realignment moves mode k to k - 1
        let full = monodromy_apply(&ctx, &w).unwrap();
        let shifted: Vec<Complex64> = plane_wave(&ctx, k - 1, m).iter().map(|v| v * rho).collect();
        prop_assert!(vecops::norm(&vecops::sub(&full, &shifted)) <= 1e-12 * vecops::norm(&w));
    }

    #[test]
    fn monodromy_is_a_contraction(g in 5.0f64..300.0, q in 0.0f64..TAU, p0 in 0.0f64..TAU,
                                  r in 0.1f64..0.35, seed in 0u64..1000) {
        let mut cfg = ProblemConfig::new(g, q, HoleShape::disk(r).unwrap(), 12);
        cfg.p0 = p0;
        cfg.nt = 32;
        let ctx = MonodromyContext::new(&cfg).unwrap();
        let mut rng = rng_stream(seed);
        for _ in 0..20 {
            let w = rng.complex_vec(ctx.dim());
            let kw = monodromy_apply(&ctx, &w).unwrap();
            prop_assert!(vecops::norm(&kw) <= vecops::norm(&w) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn spectrum_ignores_whole_turns_of_p0(p0 in 0.0f64..TAU, turns in -3i32..4) {
        let mut cfg = ProblemConfig::new(30.0, 0.4, HoleShape::disk(0.25).unwrap(), 12);
        cfg.nt = 32;
        cfg.p0 = p0;
        let a = monodromy_spectrum(&cfg).unwrap();
        cfg.p0 = p0 + TAU * turns as f64;
        let b = monodromy_spectrum(&cfg).unwrap();
        prop_assert_eq!(a.ritz_values.len(), b.ritz_values.len());
        for (x, y) in a.ritz_values.iter().zip(&b.ritz_values) {
            prop_assert!((x - y).norm() <= 1e-10, "{} vs {}", x, y);
        }
    }
}

#[test]
fn continuum_drift_rate_of_the_constant_mode() {
    let cfg = no_hole(TAU, 0.0, 0.0, 64, 512);
    let rate = -no_hole_mode_factor(&cfg, 0, 0).ln() / cfg.t_g();
    let exact = 4.0 * PI * PI / 3.0;
    assert!((rate - exact).abs() / exact < 0.02, "{rate} vs {exact}");
}

/// Dominant eigenvalue at `nt` steps per period.
fn dominant(nt: usize) -> Complex64 {
    let mut cfg = ProblemConfig::new(20.0, 0.0, HoleShape::disk(0.25).unwrap(), 16);
    cfg.nt = nt;
    cfg.solver.tol = 1e-13;
    let ctx = MonodromyContext::new(&cfg).unwrap();
    let r = arnoldi(|w| monodromy_apply(&ctx, w), ctx.dim(), 20, 1e-11, 3).unwrap();
    unfold(r.pairs[0].value, cfg.t_g()).unwrap()
}

#[test]
fn time_stepping_is_second_order() {
    let l: Vec<Complex64> = [64, 128, 256].iter().map(|&nt| dominant(nt)).collect();
    let d1 = (l[0] - l[1]).norm();
    let d2 = (l[1] - l[2]).norm();
    assert!(d1 / d2 >= 3.5, "drifts {d1:e} then {d2:e}");
}
