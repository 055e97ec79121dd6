use btfloquet::geometry::{build_cell_grid, build_strip_grid, HoleShape};
use btfloquet::numcore::{hessenberg_eigen, rng_stream, vecops, SparseMatrix};
use btfloquet::operators::{assemble_cell_bloch, assemble_strip_bt, BlochPhases};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::TAU;

fn shapes() -> impl Strategy<Value = HoleShape> {
    prop_oneof![
        Just(HoleShape::None),
        (0.1f64..0.4).prop_map(|radius| HoleShape::Disk { radius }),
        (0.1f64..0.4, 0.1f64..0.4).prop_map(|(a, b)| HoleShape::Ellipse { a, b }),
    ]
}

fn sorted_eigs(a: &SparseMatrix) -> Vec<Complex64> {
    let (mut v, _) = hessenberg_eigen(a.to_dense()).unwrap();
    v.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cell_operator_is_exactly_hermitian(n in 10usize..30, shape in shapes(), p in -20.0f64..20.0, q in -20.0f64..20.0) {
        let grid = build_cell_grid(n, shape);
        prop_assume!(grid.is_ok());
        let a = assemble_cell_bloch(&grid.unwrap(), &BlochPhases::new(p, q)).unwrap();
        prop_assert_eq!(a.max_abs_diff(&a.adjoint()), 0.0);
    }

    #[test]
    fn cell_spectrum_is_two_pi_periodic_in_p(p in 0.0f64..TAU, q in 0.0f64..TAU, k in -3i32..4) {
        let grid = build_cell_grid(8, HoleShape::None).unwrap();
        let a = assemble_cell_bloch(&grid, &BlochPhases::new(p, q)).unwrap();
        let b = assemble_cell_bloch(&grid, &BlochPhases::new(p + TAU * k as f64, q)).unwrap();
        for (x, y) in sorted_eigs(&a).iter().zip(sorted_eigs(&b)) {
            prop_assert!((x - y).norm() < 1e-12 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn strip_operator_is_accretive(n in 10usize..20, shape in shapes(), g in 0.0f64..2000.0, q in 0.0f64..TAU, seed in 0u64..1000) {
        let grid = build_strip_grid(n, 1, shape);
        prop_assume!(grid.is_ok());
        let a = assemble_strip_bt(&grid.unwrap(), g, q).unwrap();
        let mut rng = rng_stream(seed);
        for _ in 0..100 {
            let u = rng.complex_vec(a.dim());
            let au = a.spmv(&u).unwrap();
            let form = vecops::dot(&u, &au).re;
            prop_assert!(form >= -1e-12 * vecops::norm_sqr(&u) * (n * n) as f64, "Re<Au,u> = {}", form);
        }
    }
}
