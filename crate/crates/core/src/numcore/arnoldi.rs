//! Single-pass Arnoldi eigensolver for black-box linear maps.
//!
//! The Krylov basis is built by modified Gram-Schmidt followed by one full
//! reorthogonalization pass. Ritz pairs come from a complex Schur
//! decomposition of the projected Hessenberg matrix. Residuals of pairs
//! that look converged are then recomputed with one extra application of
//! the map, so a pair flagged `converged` carries a true residual.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::rng::rng_stream;
use super::vecops::{axpy, dot, norm, normalize, ZERO};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct RitzPair {
    pub value: Complex64,
    /// `||A v - value v|| / ||v||`; explicit when `converged` or checked,
    /// the Hessenberg estimate otherwise.
    pub residual: f64,
    /// Unit-norm Ritz vector.
    pub vector: Vec<Complex64>,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct RitzSet {
    /// Sorted by descending modulus.
    pub pairs: Vec<RitzPair>,
    /// Krylov dimension actually used.
    pub dimension: usize,
    pub matvecs: usize,
    /// Basis size at which an invariant subspace was hit, if before `m`.
    pub breakdown: Option<usize>,
    /// Max over steps of `||A v_j - V h_j|| / ||A v_j||`.
    pub relation_error: f64,
    /// `max |V^H V - I|` of the final basis.
    pub orthogonality_error: f64,
}

impl RitzSet {
    pub fn converged(&self) -> impl Iterator<Item = &RitzPair> {
        self.pairs.iter().filter(|p| p.converged)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArnoldiOptions {
    /// Krylov dimension.
    pub m: usize,
    /// Residual tolerance for convergence.
    pub tol: f64,
    pub seed: u64,
    /// At most this many pairs (largest modulus first) get an explicit
    /// residual check.
    pub max_checked: usize,
}

impl ArnoldiOptions {
    pub fn new(m: usize, tol: f64, seed: u64) -> Self {
        Self {
            m,
            tol,
            seed,
            max_checked: m,
        }
    }
}

/// Arnoldi on `apply` (dimension `n`) with Krylov dimension `m`.
pub fn arnoldi<F>(apply: F, n: usize, m: usize, tol: f64, seed: u64) -> Result<RitzSet>
where
    F: FnMut(&[Complex64]) -> Result<Vec<Complex64>>,
{
    arnoldi_with(apply, n, &ArnoldiOptions::new(m, tol, seed))
}

pub fn arnoldi_with<F>(mut apply: F, n: usize, opts: &ArnoldiOptions) -> Result<RitzSet>
where
    F: FnMut(&[Complex64]) -> Result<Vec<Complex64>>,
{
    let m = opts.m;
    if m == 0 || m > n {
        return Err(Error::Config(format!(
            "arnoldi dimension m={m} must satisfy 1 <= m <= n={n}"
        )));
    }

    let mut rng = rng_stream(opts.seed);
    let mut v0 = rng.complex_vec(n);
    normalize(&mut v0);

    let mut basis: Vec<Vec<Complex64>> = vec![v0];
    // h[(i, j)] for the (m+1) x m extended Hessenberg matrix
    let mut h = DMatrix::<Complex64>::zeros(m + 1, m);
    let mut matvecs = 0usize;
    let mut breakdown = None;
    let mut relation_error = 0.0f64;
    let mut k = 0usize;

    for j in 0..m {
        let av = apply(&basis[j])?;
        matvecs += 1;
        if av.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: av.len(),
            });
        }
        let av_norm = norm(&av);
        let mut w = av.clone();
        for pass in 0..2 {
            for (i, vi) in basis.iter().enumerate() {
                let hij = dot(vi, &w);
                axpy(-hij, vi, &mut w);
                if pass == 0 {
                    h[(i, j)] = hij;
                } else {
                    h[(i, j)] += hij;
                }
            }
        }
        let wnorm = norm(&w);
        k = j + 1;

        // Arnoldi relation for this column: A v_j = sum_i h_ij v_i + w
        let mut rel = av;
        for (i, vi) in basis.iter().enumerate() {
            axpy(-h[(i, j)], vi, &mut rel);
        }
        axpy(Complex64::new(-1.0, 0.0), &w, &mut rel);
        if av_norm > 0.0 {
            relation_error = relation_error.max(norm(&rel) / av_norm);
        }

        let scale = av_norm.max(f64::MIN_POSITIVE);
        if wnorm <= 1e-12 * scale {
            h[(j + 1, j)] = ZERO;
            if j + 1 < m {
                breakdown = Some(j + 1);
            }
            break;
        }
        h[(j + 1, j)] = Complex64::new(wnorm, 0.0);
        w.iter_mut().for_each(|x| *x /= wnorm);
        basis.push(w);
    }

    let orthogonality_error = orthogonality(&basis[..k]);
    let hk = h.view((0, 0), (k, k)).into_owned();
    let h_next = if breakdown.is_some() || k < m {
        0.0
    } else {
        h[(k, k - 1)].norm()
    };

    let (values, vectors) = hessenberg_eigen(hk)?;
    let mut pairs: Vec<RitzPair> = values
        .iter()
        .zip(vectors.iter())
        .map(|(&theta, y)| {
            let mut x = vec![ZERO; n];
            for (yj, vj) in y.iter().zip(&basis) {
                axpy(*yj, vj, &mut x);
            }
            let xn = normalize(&mut x);
            let estimate = h_next * y[k - 1].norm() / xn.max(f64::MIN_POSITIVE);
            RitzPair {
                value: theta,
                residual: estimate,
                vector: x,
                converged: false,
            }
        })
        .collect();
    pairs.sort_by(|a, b| b.value.norm().total_cmp(&a.value.norm()));

    let mut checked = 0usize;
    for pair in pairs.iter_mut() {
        if checked >= opts.max_checked {
            break;
        }
        if pair.residual > 100.0 * opts.tol {
            continue;
        }
        checked += 1;
        let ax = apply(&pair.vector)?;
        matvecs += 1;
        let mut r = ax;
        axpy(-pair.value, &pair.vector, &mut r);
        pair.residual = norm(&r);
        pair.converged = pair.residual <= opts.tol;
    }

    Ok(RitzSet {
        pairs,
        dimension: k,
        matvecs,
        breakdown,
        relation_error,
        orthogonality_error,
    })
}

fn orthogonality(basis: &[Vec<Complex64>]) -> f64 {
    let mut err = 0.0f64;
    for (i, vi) in basis.iter().enumerate() {
        for (j, vj) in basis.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            err = err.max((dot(vi, vj) - target).norm());
        }
    }
    err
}

/// Eigenvalues and unit eigenvectors of a small dense complex matrix via
/// complex Schur form `A = Q T Q^H`.
pub fn hessenberg_eigen(a: DMatrix<Complex64>) -> Result<(Vec<Complex64>, Vec<Vec<Complex64>>)> {
    let k = a.nrows();
    let scale = a.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let schur = Schur::try_new(a, f64::EPSILON, 10_000)
        .ok_or(Error::NoConvergence {
            iterations: 10_000,
            residual: f64::NAN,
        })?;
    let (q, t) = schur.unpack();
    let guard = f64::EPSILON * scale.max(f64::MIN_POSITIVE);

    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    for col in 0..k {
        let lambda = t[(col, col)];
        let mut z = vec![ZERO; k];
        z[col] = Complex64::new(1.0, 0.0);
        for i in (0..col).rev() {
            let mut acc = ZERO;
            for j in i + 1..=col {
                acc += t[(i, j)] * z[j];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < guard {
                d = Complex64::new(guard, 0.0);
            }
            z[i] = -acc / d;
        }
        let mut y: Vec<Complex64> = (0..k)
            .map(|r| (0..=col).map(|c| q[(r, c)] * z[c]).sum())
            .collect();
        normalize(&mut y);
        values.push(lambda);
        vectors.push(y);
    }
    Ok((values, vectors))
}
