use btfloquet::numcore::{
    arnoldi, rng_stream, solve, solve_hermitian, vecops, ArnoldiOptions, SolverOptions,
    SparseMatrix,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Upper triangular matrix with the given diagonal and a few random
/// entries above it.
fn triangular(diag: &[Complex64], seed: u64) -> SparseMatrix {
    let n = diag.len();
    let mut rng = rng_stream(seed);
    let mut t: Vec<_> = diag.iter().enumerate().map(|(i, &d)| (i, i, d)).collect();
    for i in 0..n {
        for j in i + 1..(i + 4).min(n) {
            t.push((i, j, 0.3 * rng.next_c64()));
        }
    }
    SparseMatrix::from_triplets(n, t).unwrap()
}

/// Sparse, strictly diagonally dominant, non-Hermitian.
fn dominant(n: usize, seed: u64) -> SparseMatrix {
    let mut rng = rng_stream(seed);
    let mut t = Vec::new();
    for i in 0..n {
        let mut off = 0.0;
        for j in [i.wrapping_sub(1), i + 1, (i * 7 + 3) % n] {
            if j < n && j != i {
                let v = rng.next_c64();
                off += v.norm();
                t.push((i, j, v));
            }
        }
        t.push((i, i, c(off + 0.5 + rng.next_f64(), 2.0 * rng.next_f64() - 1.0)));
    }
    SparseMatrix::from_triplets(n, t).unwrap()
}

fn dense_solve(a: &SparseMatrix, b: &[Complex64]) -> Vec<Complex64> {
    let lu = a.to_dense().lu();
    lu.solve(&DVector::from_column_slice(b)).unwrap().as_slice().to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn arnoldi_recovers_prescribed_diagonals(n in 4usize..24, seed in 0u64..1000) {
        // moduli 1, 0.8, 0.64, ... with spread phases
        let diag: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(0.8f64.powi(k as i32), 0.7 * k as f64))
            .collect();
        let a = triangular(&diag, seed);
        let r = arnoldi(|x| a.spmv(x), n, n, 1e-10, seed).unwrap();
        for (k, d) in diag.iter().take(n / 2).enumerate() {
            let got = r.pairs[k].value;
            prop_assert!((got - d).norm() < 1e-8, "k={} got {} want {}", k, got, d);
        }
    }

    #[test]
    fn basis_is_orthonormal_and_relation_holds(n in 10usize..60, m in 2usize..10, seed in 0u64..1000) {
        let a = dominant(n, seed);
        let r = arnoldi(|x| a.spmv(x), n, m, 1e-8, seed).unwrap();
        prop_assert!(r.orthogonality_error <= 1e-10);
        prop_assert!(r.relation_error <= 1e-10);
    }

    #[test]
    fn arnoldi_is_deterministic(seed in 0u64..1000) {
        let a = dominant(30, seed);
        let r1 = arnoldi(|x| a.spmv(x), 30, 8, 1e-8, seed).unwrap();
        let r2 = arnoldi(|x| a.spmv(x), 30, 8, 1e-8, seed).unwrap();
        let v1: Vec<_> = r1.pairs.iter().map(|p| (p.value.re.to_bits(), p.value.im.to_bits())).collect();
        let v2: Vec<_> = r2.pairs.iter().map(|p| (p.value.re.to_bits(), p.value.im.to_bits())).collect();
        prop_assert_eq!(v1, v2);
    }

    #[test]
    fn iterative_solve_matches_dense_elimination(n in 5usize..80, seed in 0u64..1000) {
        let a = dominant(n, seed);
        let b = rng_stream(seed + 1).complex_vec(n);
        let x = solve(&a, &b, &SolverOptions::with_tol(1e-12, 2000)).unwrap();
        let y = dense_solve(&a, &b);
        let err = vecops::norm(&vecops::sub(&x.x, &y)) / vecops::norm(&y);
        prop_assert!(err < 1e-8, "relative error {}", err);
    }

    #[test]
    fn reported_residual_is_the_true_residual(n in 5usize..80, seed in 0u64..1000, tol_exp in 2i32..12) {
        let a = dominant(n, seed);
        let b = rng_stream(seed + 2).complex_vec(n);
        let s = solve(&a, &b, &SolverOptions::with_tol(10f64.powi(-tol_exp), 2000)).unwrap();
        let r = vecops::sub(&a.spmv(&s.x).unwrap(), &b);
        let true_res = vecops::norm(&r) / vecops::norm(&b);
        prop_assert!((true_res - s.residual).abs() <= 1e-12 + 1e-9 * true_res);
        prop_assert!(s.residual <= 10f64.powi(-tol_exp));
    }

    #[test]
    fn hermitian_solve_matches_dense(n in 5usize..60, seed in 0u64..1000) {
        let a = dominant(n, seed);
        // A^H A + I is Hermitian positive definite
        let d = a.to_dense();
        let h: DMatrix<Complex64> = d.adjoint() * &d + DMatrix::identity(n, n);
        let hs = SparseMatrix::from_dense(&h).unwrap();
        let b = rng_stream(seed + 3).complex_vec(n);
        let x = solve_hermitian(&hs, &b, None, &SolverOptions::with_tol(1e-12, 4000)).unwrap();
        let y = dense_solve(&hs, &b);
        let err = vecops::norm(&vecops::sub(&x.x, &y)) / vecops::norm(&y);
        prop_assert!(err < 1e-8, "relative error {}", err);
    }
}

#[test]
fn krylov_dimension_is_capped_by_options() {
    let a = dominant(12, 5);
    let mut o = ArnoldiOptions::new(6, 1e-8, 5);
    o.max_checked = 2;
    let r = btfloquet::numcore::arnoldi_with(|x| a.spmv(x), 12, &o).unwrap();
    assert!(r.dimension <= 6);
}
