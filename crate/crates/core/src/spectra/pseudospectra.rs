//! Resolvent norms `||(A - z)^{-1}|| = 1/σ_min(A - z)` by inverse iteration
//! on `(A - z)^H (A - z)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::vecops::{norm, scale};
use crate::numcore::{rng_stream, solve_from, SolverOptions, SparseMatrix};

pub const DEFAULT_TOL: f64 = 1e-3;
pub const DEFAULT_MAXIT: usize = 200;
/// Estimates above this are treated as an exact eigenvalue.
const SINGULAR_LIMIT: f64 = 1e14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudospectraPoint {
    pub z: Complex64,
    /// Lower estimate of `||(A - z)^{-1}||`; infinite when a solve failed.
    pub resolvent_norm: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudospectraGrid {
    pub points: Vec<PseudospectraPoint>,
    pub tol: f64,
}

impl PseudospectraGrid {
    pub fn all_converged(&self) -> bool {
        self.points.iter().all(|p| p.converged)
    }
}

/// Inverse iteration for one shift. Each sweep solves `(A - z) y = v` and
/// `(A - z)^H x = y`; `||y||` with unit `v` increases towards
/// `1/σ_min`. Stops when it changes by less than `tol` relative.
pub fn resolvent_norm(
    a: &SparseMatrix,
    z: Complex64,
    tol: f64,
    maxit: usize,
    seed: u64,
) -> Result<PseudospectraPoint> {
    if !(tol > 0.0) || maxit == 0 {
        return Err(Error::Config("resolvent_norm needs tol > 0 and maxit >= 1".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let m = a.shifted(-z, one);
    let mh = m.adjoint();
    let opts = SolverOptions::with_tol(1e-10, 4000);
    let mut v = rng_stream(seed).complex_vec(a.dim());
    let vn = norm(&v);
    scale(Complex64::new(1.0 / vn, 0.0), &mut v);

    let diverged = |iterations| PseudospectraPoint {
        z,
        resolvent_norm: f64::INFINITY,
        converged: false,
        iterations,
    };
    let mut estimate = 0.0;
    let mut y_prev: Option<Vec<Complex64>> = None;
    let mut x_prev: Option<Vec<Complex64>> = None;
    for it in 1..=maxit {
        let y = match solve_from(&m, &v, y_prev.as_deref(), &opts) {
            Ok(s) => s.x,
            Err(_) => return Ok(diverged(it)),
        };
        let ny = norm(&y);
        let x = match solve_from(&mh, &y, x_prev.as_deref(), &opts) {
            Ok(s) => s.x,
            Err(_) => return Ok(diverged(it)),
        };
        let nx = norm(&x);
        if !(ny.is_finite() && nx.is_finite()) || ny > SINGULAR_LIMIT {
            return Ok(diverged(it));
        }
        let change = (ny - estimate).abs() / ny;
        estimate = ny;
        if change <= tol && it > 1 {
            return Ok(PseudospectraPoint {
                z,
                resolvent_norm: estimate,
                converged: true,
                iterations: it,
            });
        }
        v = x;
        scale(Complex64::new(1.0 / nx, 0.0), &mut v);
        // the next iterates are close to the current ones up to scaling
        y_prev = Some(y.iter().map(|c| c / nx).collect());
        x_prev = Some(v.iter().map(|c| c * (ny / nx)).collect());
    }
    Ok(PseudospectraPoint {
        z,
        resolvent_norm: estimate,
        converged: false,
        iterations: maxit,
    })
}

/// Resolvent norms over a list of shifts, evaluated in parallel; point `k`
/// uses start vector seed `seed + k`.
pub fn pseudospectra_grid(
    a: &SparseMatrix,
    z_values: &[Complex64],
    tol: f64,
    seed: u64,
) -> Result<PseudospectraGrid> {
    let points = z_values
        .par_iter()
        .enumerate()
        .map(|(k, &z)| resolvent_norm(a, z, tol, DEFAULT_MAXIT, seed.wrapping_add(k as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PseudospectraGrid { points, tol })
}

/// Row-major `nre × nim` lattice over `[re0, re1] × [im0, im1]`.
pub fn z_window(re: (f64, f64), im: (f64, f64), nre: usize, nim: usize) -> Vec<Complex64> {
    let axis = |(a, b): (f64, f64), k: usize, n: usize| {
        if n <= 1 {
            a
        } else {
            a + (b - a) * k as f64 / (n - 1) as f64
        }
    };
    let mut z = Vec::with_capacity(nre * nim);
    for i in 0..nim {
        for r in 0..nre {
            z.push(Complex64::new(axis(re, r, nre), axis(im, i, nim)));
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_examples() {
        let a = SparseMatrix::from_diagonal(&[c(1.0, 0.0), c(0.0, 2.0)]);
        let p = resolvent_norm(&a, c(0.0, 0.0), 1e-3, 200, 1).unwrap();
        assert!(p.converged);
        assert!((p.resolvent_norm - 1.0).abs() < 1e-3);
        let p = resolvent_norm(&a, c(1.1, 0.0), 1e-3, 200, 1).unwrap();
        assert!(p.converged);
        assert!((p.resolvent_norm - 10.0).abs() < 1e-2);
    }

    #[test]
    fn jordan_block_at_eigenvalue_diverges() {
        let a = SparseMatrix::from_triplets(2, vec![(0, 1, c(1.0, 0.0))]).unwrap();
        let p = resolvent_norm(&a, c(0.0, 0.0), 1e-3, 200, 1).unwrap();
        assert!(!p.converged);
        assert!(p.resolvent_norm.is_infinite());
    }

    #[test]
    fn grid_is_deterministic_and_positive() {
        let a = SparseMatrix::from_diagonal(&[c(1.0, 0.0), c(2.0, 1.0), c(3.0, -1.0)]);
        let z = z_window((0.0, 0.5), (-0.5, 0.5), 3, 2);
        assert_eq!(z.len(), 6);
        let g1 = pseudospectra_grid(&a, &z, 1e-3, 7).unwrap();
        let g2 = pseudospectra_grid(&a, &z, 1e-3, 7).unwrap();
        assert_eq!(g1, g2);
        assert!(g1.points.iter().all(|p| p.resolvent_norm > 0.0 && p.converged));
    }
}
