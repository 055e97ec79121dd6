//! Direct spectra of the truncated strip operator and the cross-method
//! comparison with the monodromy branches.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::branch::{distance_mod_ig, fold, unfold, BranchEigenvalue, Method};
use super::monodromy::MU_FLOOR;
use crate::error::{Error, Result};
use crate::geometry::{build_strip_grid, CellGrid};
use crate::numcore::{arnoldi_with, ArnoldiOptions, SparseMatrix};
use crate::operators::{assemble_strip_bt, ProblemConfig};
use crate::propagator::strip_semigroup_apply;

/// Default strip half-width in cells.
pub const DEFAULT_HALF_WIDTH: usize = 4;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StripSpectrum {
    /// Sorted by ascending `Re λ`.
    pub branches: Vec<BranchEigenvalue>,
    pub detected: bool,
    pub half_width: usize,
    /// Propagation time `T` of the semigroup map.
    pub horizon: f64,
    pub dim: usize,
    pub krylov_dimension: usize,
    pub ritz_converged: usize,
}

impl StripSpectrum {
    /// Value with the smallest real part.
    pub fn dominant(&self) -> Option<&BranchEigenvalue> {
        self.branches.first()
    }
}

/// Strip grid and assembled `-Δ + igx` for a configuration.
pub fn strip_problem(config: &ProblemConfig, half_width: usize) -> Result<(CellGrid, SparseMatrix)> {
    config.validate()?;
    let grid = build_strip_grid(config.n, half_width, config.shape)?;
    let a = assemble_strip_bt(&grid, config.g, config.q)?;
    Ok((grid, a))
}

/// Arnoldi on `exp(-T A)` realized by `config.nt` Crank-Nicolson steps.
/// `horizon` defaults to `t_g`, for which `Im λ` is resolved exactly modulo
/// `g`; values are folded into `[-g/2, g/2)` in any case.
pub fn strip_spectrum(
    config: &ProblemConfig,
    half_width: usize,
    horizon: Option<f64>,
) -> Result<StripSpectrum> {
    let (_, a) = strip_problem(config, half_width)?;
    strip_spectrum_of(config, &a, half_width, horizon)
}

pub fn strip_spectrum_of(
    config: &ProblemConfig,
    a: &SparseMatrix,
    half_width: usize,
    horizon: Option<f64>,
) -> Result<StripSpectrum> {
    let t = horizon.unwrap_or_else(|| config.t_g());
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Config(format!("strip horizon must be positive, got {t}")));
    }
    let n = a.dim();
    let m = config.eigen.m.min(n);
    let mut opts = ArnoldiOptions::new(m, config.eigen.tol, config.eigen.seed);
    opts.max_checked = config.eigen.nev.min(m);
    let ritz = arnoldi_with(
        |w| strip_semigroup_apply(a, t, config.nt, w, &config.solver),
        n,
        &opts,
    )?;

    let mut branches = Vec::new();
    let mut ritz_converged = 0;
    for pair in ritz.converged() {
        ritz_converged += 1;
        if pair.value.norm() < MU_FLOOR {
            continue;
        }
        let raw = unfold(pair.value, t)?;
        branches.push(BranchEigenvalue {
            lambda: Complex64::new(raw.re, fold(raw.im, config.g)),
            mu: pair.value,
            residual: pair.residual,
            q: config.q,
            p0: config.p0,
            g: config.g,
            s: 1,
            method: Method::Strip,
        });
    }
    branches.sort_by(|a, b| a.lambda.re.total_cmp(&b.lambda.re));
    Ok(StripSpectrum {
        detected: !branches.is_empty(),
        branches,
        half_width,
        horizon: t,
        dim: n,
        krylov_dimension: ritz.dimension,
        ritz_converged,
    })
}

/// Relative change of the dominant strip value between half-widths `L`
/// and `L + 2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TruncationCheck {
    pub half_width: usize,
    pub lambda: Option<Complex64>,
    pub lambda_wider: Option<Complex64>,
    /// `|λ(L+2) - λ(L)| / |λ(L)|` modulo `ig`; `None` if either is missing.
    pub relative_change: Option<f64>,
}

pub fn truncation_check(config: &ProblemConfig, half_width: usize) -> Result<TruncationCheck> {
    let base = strip_spectrum(config, half_width, None)?;
    let wide = strip_spectrum(config, half_width + 2, None)?;
    let lambda = base.dominant().map(|b| b.lambda);
    let lambda_wider = wide.dominant().map(|b| b.lambda);
    let relative_change = match (lambda, lambda_wider) {
        (Some(a), Some(b)) => Some(distance_mod_ig(a, b, config.g) / a.norm()),
        _ => None,
    };
    Ok(TruncationCheck {
        half_width,
        lambda,
        lambda_wider,
        relative_change,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariancePair {
    pub strip_index: usize,
    pub mono_index: usize,
    pub strip: Complex64,
    pub mono: Complex64,
    /// Distance modulo `ig`.
    pub mismatch: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub g: f64,
    pub tol: f64,
    /// One entry per strip value, paired with its nearest monodromy value.
    pub pairs: Vec<InvariancePair>,
    pub max_mismatch: f64,
    /// Pairs with mismatch at most `tol`.
    pub within_tol: usize,
    /// Monodromy value with the smallest real part, its nearest strip
    /// value and their distance modulo `ig`.
    pub dominant: Option<InvariancePair>,
    /// `dominant.mismatch / |dominant.mono|`.
    pub dominant_relative: Option<f64>,
}

/// Pairs every strip value with the nearest monodromy value modulo `ig`.
pub fn pseudo_invariance_check(
    mono: &[BranchEigenvalue],
    strip: &[BranchEigenvalue],
    g: f64,
    tol: f64,
) -> InvarianceReport {
    let nearest = |z: Complex64, set: &[BranchEigenvalue]| -> Option<(usize, f64)> {
        set.iter()
            .enumerate()
            .map(|(i, b)| (i, distance_mod_ig(z, b.lambda, g)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    };

    let mut pairs = Vec::new();
    for (si, s) in strip.iter().enumerate() {
        if let Some((mi, d)) = nearest(s.lambda, mono) {
            pairs.push(InvariancePair {
                strip_index: si,
                mono_index: mi,
                strip: s.lambda,
                mono: mono[mi].lambda,
                mismatch: d,
            });
        }
    }
    let max_mismatch = pairs.iter().map(|p| p.mismatch).fold(0.0, f64::max);
    let within_tol = pairs.iter().filter(|p| p.mismatch <= tol).count();

    let dominant = mono
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.lambda.re.total_cmp(&b.1.lambda.re))
        .and_then(|(mi, m)| {
            nearest(m.lambda, strip).map(|(si, d)| InvariancePair {
                strip_index: si,
                mono_index: mi,
                strip: strip[si].lambda,
                mono: m.lambda,
                mismatch: d,
            })
        });
    let dominant_relative = dominant.map(|p| p.mismatch / p.mono.norm().max(f64::MIN_POSITIVE));

    InvarianceReport {
        g,
        tol,
        pairs,
        max_mismatch,
        within_tol,
        dominant,
        dominant_relative,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::HoleShape;
    use crate::numcore::hessenberg_eigen;

    fn branch(lambda: Complex64, method: Method) -> BranchEigenvalue {
        BranchEigenvalue {
            lambda,
            mu: (-lambda).exp(),
            residual: 0.0,
            q: 0.0,
            p0: 0.0,
            g: 20.0,
            s: 1,
            method,
        }
    }

    #[test]
    fn identical_lists_have_zero_mismatch() {
        let vals = [Complex64::new(18.0, 3.0), Complex64::new(30.0, -7.0)];
        let a: Vec<_> = vals.iter().map(|&l| branch(l, Method::Monodromy)).collect();
        let b: Vec<_> = vals.iter().map(|&l| branch(l, Method::Strip)).collect();
        let r = pseudo_invariance_check(&a, &b, 20.0, 1e-12);
        assert_eq!(r.max_mismatch, 0.0);
        assert_eq!(r.within_tol, 2);
        assert_eq!(r.dominant_relative, Some(0.0));
    }

    #[test]
    fn shift_by_ig_is_invisible() {
        let vals = [Complex64::new(18.0, 3.0), Complex64::new(30.0, -7.0)];
        let a: Vec<_> = vals.iter().map(|&l| branch(l, Method::Monodromy)).collect();
        let b: Vec<_> = vals
            .iter()
            .map(|&l| branch(l + Complex64::new(0.0, 20.0), Method::Strip))
            .collect();
        let r = pseudo_invariance_check(&a, &b, 20.0, 1e-12);
        assert!(r.max_mismatch < 1e-12);
        assert_eq!(r.pairs[1].mono_index, 1);
    }

    #[test]
    fn empty_inputs_give_empty_report() {
        let r = pseudo_invariance_check(&[], &[], 20.0, 1e-3);
        assert!(r.pairs.is_empty());
        assert!(r.dominant.is_none());
    }

    #[test]
    fn free_laplacian_matches_dense_eigensolver() {
        let grid = build_strip_grid(8, 1, HoleShape::None).unwrap();
        let a = assemble_strip_bt(&grid, 0.0, 0.0).unwrap();
        let mut cfg = ProblemConfig::new(1.0, 0.0, HoleShape::None, 8);
        cfg.eigen.m = 20;
        cfg.nt = 2048;
        cfg.solver.tol = 1e-13;
        let sp = strip_spectrum_of(&cfg, &a, 1, Some(1.0)).unwrap();
        let (vals, _) = hessenberg_eigen(a.to_dense()).unwrap();
        let smallest = vals.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
        let got = sp.dominant().unwrap().lambda;
        assert!((got.re - smallest).abs() < 1e-6 * smallest, "{got} vs {smallest}");
        assert!(got.im.abs() < 1e-9);
    }
}
