use btfloquet::cli::validate::{weighted_shift_row, ORACLE_TOL};
use btfloquet::geometry::HoleShape;
use btfloquet::operators::ProblemConfig;
use btfloquet::propagator::{monodromy_apply, MonodromyContext};
use btfloquet::numcore::vecops;
use btfloquet::spectra::{
    airy_scaling, fit_power_law, fold, match_branches, monodromy_spectrum, unfold,
    BranchEigenvalue, Method,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

fn branch(re: f64, im: f64, g: f64) -> BranchEigenvalue {
    BranchEigenvalue {
        lambda: Complex64::new(re, im),
        mu: Complex64::new(0.5, 0.0),
        residual: 0.0,
        q: 0.0,
        p0: 0.0,
        g,
        s: 1,
        method: Method::Monodromy,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn unfold_inverts_the_exponential_in_band(g in 1.0f64..5000.0, re in 0.0f64..1.0, im in -0.5f64..0.5) {
        let t = TAU / g;
        // Re λ t up to 30 so that exp(-t λ) stays representable
        let lambda = Complex64::new(re * 30.0 / t, im * g);
        let back = unfold((-t * lambda).exp(), t).unwrap();
        prop_assert!((back - lambda).norm() <= 1e-12 * lambda.norm().max(1.0), "{} vs {}", back, lambda);
    }

    #[test]
    fn unfolded_values_lie_in_the_band(g in 1.0f64..5000.0, r in 1e-12f64..1.0, arg in -PI..PI) {
        let t = TAU / g;
        let l = unfold(Complex64::from_polar(r, arg), t).unwrap();
        prop_assert!(l.im >= -g / 2.0 && l.im < g / 2.0);
        prop_assert!(l.re >= -1e-10 * g);
    }

    #[test]
    fn fold_lands_in_half_open_band(x in -1e4f64..1e4, period in 0.1f64..1e3) {
        let f = fold(x, period);
        prop_assert!(f >= -period / 2.0 && f < period / 2.0);
        let k = ((x - f) / period).round();
        prop_assert!((x - f - k * period).abs() <= 1e-9 * x.abs().max(period));
    }

    #[test]
    fn power_law_fit_is_exact_on_power_laws(e in -2.0f64..2.0, c in 0.01f64..100.0) {
        let pts: Vec<(f64, f64)> = [250.0, 500.0, 1000.0, 2000.0].iter().map(|&g: &f64| (g, c * g.powf(e))).collect();
        let fit = fit_power_law(&pts).unwrap();
        prop_assert!((fit.exponent - e).abs() < 1e-10);
        prop_assert!((fit.prefactor - c).abs() < 1e-8 * c);
    }

    #[test]
    fn airy_scaling_is_mirror_symmetric(g in 100.0f64..5000.0, re in 0.0f64..3.0, off in -3.0f64..3.0) {
        let s = g.powf(2.0 / 3.0);
        let l = Complex64::new(re * s, 0.25 * g + off * s);
        let a = airy_scaling(l, g, 0.25, Some(1));
        let b = airy_scaling(l.conj(), g, 0.25, Some(-1));
        prop_assert!((a.im_scaled - b.im_scaled).abs() < 1e-9);
        prop_assert!((a.signed_offset - b.signed_offset).abs() < 1e-9);
        prop_assert!((a.re_scaled - re).abs() < 1e-12 * re.max(1.0));
    }

    #[test]
    fn branch_matching_is_injective(a in proptest::collection::vec((0.0f64..100.0, -10.0f64..10.0), 0..8),
                                    b in proptest::collection::vec((0.0f64..100.0, -10.0f64..10.0), 0..8)) {
        let a: Vec<_> = a.iter().map(|&(x, y)| branch(x, y, 20.0)).collect();
        let b: Vec<_> = b.iter().map(|&(x, y)| branch(x, y, 20.0)).collect();
        let m = match_branches(&a, &b, 20.0);
        let targets: Vec<usize> = m.links.iter().flatten().copied().collect();
        let mut dedup = targets.clone();
        dedup.sort_unstable();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), targets.len());
        prop_assert_eq!(m.deaths.len() + targets.len(), a.len());
        prop_assert_eq!(m.births.len() + targets.len(), b.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn arnoldi_matches_weighted_shift_closed_form(g in 200.0f64..800.0, q in 0.0f64..TAU, p0 in 0.0f64..TAU) {
        let base = ProblemConfig::new(g, q, HoleShape::None, 2);
        let mut previous = f64::INFINITY;
        for n in [2, 4, 8] {
            let row = weighted_shift_row(&base, g, q, p0, n).unwrap();
            prop_assert!(row.deviation <= ORACLE_TOL, "N={} deviation {}", n, row.deviation);
            prop_assert!(row.modulus < previous);
            previous = row.modulus;
        }
    }

    #[test]
    fn branches_satisfy_band_contraction_and_residual(g in 10.0f64..200.0, q in 0.0f64..TAU, r in 0.15f64..0.35) {
        let mut cfg = ProblemConfig::new(g, q, HoleShape::disk(r).unwrap(), 12);
        cfg.nt = 64;
        let sp = monodromy_spectrum(&cfg).unwrap();
        let ctx = MonodromyContext::new(&cfg).unwrap();
        for (b, v) in sp.branches.iter().zip(&sp.vectors) {
            prop_assert!(b.satisfies_invariants(), "{:?}", b.lambda);
            prop_assert!(b.mu.norm() <= 1.0 + 1e-10);
            let kv = monodromy_apply(&ctx, v).unwrap();
            let r: Vec<Complex64> = kv.iter().zip(v).map(|(k, x)| k - b.mu * x).collect();
            let res = vecops::norm(&r) / vecops::norm(v);
            prop_assert!((res - b.residual).abs() <= 1e-8 + 1e-3 * res, "{} vs {}", res, b.residual);
        }
    }
}

#[test]
fn fibers_at_q_and_q_plus_two_pi_coincide() {
    let mut cfg = ProblemConfig::new(20.0, 0.0, HoleShape::disk(0.25).unwrap(), 12);
    cfg.nt = 64;
    let a = monodromy_spectrum(&cfg).unwrap();
    cfg.q = TAU;
    let b = monodromy_spectrum(&cfg).unwrap();
    assert!(!a.branches.is_empty());
    assert_eq!(a.branches.len(), b.branches.len());
    for (x, y) in a.branches.iter().zip(&b.branches) {
        assert!((x.lambda - y.lambda).norm() < 1e-8, "{} vs {}", x.lambda, y.lambda);
    }
}
