//! Monodromy spectra and the closed-form hole-free oracle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use super::branch::{unfold, BranchEigenvalue, Method};
use crate::error::{Error, Result};
use crate::numcore::{arnoldi_with, ArnoldiOptions};
use crate::operators::{dispersion, ProblemConfig};
use crate::propagator::{monodromy_apply, monodromy_power_apply, rayleigh_refine, MonodromyContext};

/// Multipliers below this modulus are treated as pure decay.
pub const MU_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonodromySpectrum {
    /// Sorted by ascending `Re λ`.
    pub branches: Vec<BranchEigenvalue>,
    /// False when no Ritz pair converged.
    pub detected: bool,
    pub krylov_dimension: usize,
    pub ritz_converged: usize,
    /// Monodromy periods applied in total.
    pub periods_applied: usize,
    pub solver_iterations: usize,
    /// Ritz values of the `s`-period map, descending modulus.
    pub ritz_values: Vec<Complex64>,
    /// Unit Ritz vectors aligned with `branches`.
    #[serde(skip)]
    pub vectors: Vec<Vec<Complex64>>,
}

/// Arnoldi on the `s`-period monodromy; every converged Ritz vector is
/// re-evaluated with a single period to pin `Im λ` modulo `g`.
pub fn monodromy_spectrum(config: &ProblemConfig) -> Result<MonodromySpectrum> {
    let ctx = MonodromyContext::new(config)?;
    monodromy_spectrum_in(&ctx)
}

pub fn monodromy_spectrum_in(ctx: &MonodromyContext) -> Result<MonodromySpectrum> {
    let cfg = ctx.config();
    let s = cfg.periods;
    let n = ctx.dim();
    let m = cfg.eigen.m.min(n);
    let mut opts = ArnoldiOptions::new(m, cfg.eigen.tol, cfg.eigen.seed);
    opts.max_checked = cfg.eigen.nev.min(m);
    let ritz = arnoldi_with(|w| monodromy_power_apply(ctx, w, s), n, &opts)?;
    let mut periods_applied = ritz.matvecs * s;

    let mut found = Vec::new();
    let mut ritz_converged = 0;
    for pair in ritz.converged() {
        ritz_converged += 1;
        let (mu, residual) = if s == 1 {
            (pair.value, pair.residual)
        } else {
            periods_applied += 1;
            rayleigh_refine(|w| monodromy_apply(ctx, w), &pair.vector)?
        };
        if mu.norm() < MU_FLOOR {
            continue;
        }
        let lambda = unfold(mu, cfg.t_g())?;
        let branch = BranchEigenvalue {
            lambda,
            mu,
            residual,
            q: cfg.q,
            p0: cfg.p0,
            g: cfg.g,
            s,
            method: Method::Monodromy,
        };
        found.push((branch, pair.vector.clone()));
    }
    found.sort_by(|a, b| a.0.lambda.re.total_cmp(&b.0.lambda.re));
    let (branches, vectors): (Vec<_>, Vec<_>) = found.into_iter().unzip();

    Ok(MonodromySpectrum {
        detected: !branches.is_empty(),
        branches,
        krylov_dimension: ritz.dimension,
        ritz_converged,
        periods_applied,
        solver_iterations: ctx.solver_iterations(),
        ritz_values: ritz.pairs.iter().map(|p| p.value).collect(),
        vectors,
    })
}

/// Per-mode amplification over one period for the plane wave `(k, m)` on
/// the hole-free cell, before realignment:
/// `ρ = Π_j (1 - (Δt/2) σ_j) / (1 + (Δt/2) σ_j)`.
pub fn no_hole_mode_factor(config: &ProblemConfig, k: i64, m: i64) -> f64 {
    let dt = config.t_g() / config.nt as f64;
    (0..config.nt)
        .map(|j| {
            let p = config.p0 - config.g * (j as f64 + 0.5) * dt;
            let a = 0.5 * dt * dispersion(k, m, p, config.q, config.n);
            (1.0 - a) / (1.0 + a)
        })
        .product()
}

fn log_factor(config: &ProblemConfig, k: i64, m: i64) -> (f64, bool) {
    let dt = config.t_g() / config.nt as f64;
    let mut log = 0.0;
    let mut negative = false;
    for j in 0..config.nt {
        let p = config.p0 - config.g * (j as f64 + 0.5) * dt;
        let a = 0.5 * dt * dispersion(k, m, p, config.q, config.n);
        let r = (1.0 - a) / (1.0 + a);
        log += r.abs().ln();
        negative ^= r < 0.0;
    }
    (log, negative)
}

/// `ln |μ|` shared by all hole-free eigenvalues of y-sector `m`; stays
/// finite where the modulus itself underflows.
pub fn no_hole_log_modulus(config: &ProblemConfig, m: i64) -> f64 {
    let n = config.n;
    (0..n as i64).map(|k| log_factor(config, k, m).0).sum::<f64>() / n as f64
}

/// Eigenvalues of the hole-free monodromy in y-sector `m`.
///
/// Realignment shifts x-mode `k` to `k - 1`, so the sector map is a cyclic
/// weighted shift with weights `ρ_{k,m}`; its eigenvalues are the `N`-th
/// roots of `Π_k ρ_{k,m}`, all sharing the geometric-mean modulus.
pub fn no_hole_monodromy_eigs(config: &ProblemConfig, m: i64) -> Result<Vec<Complex64>> {
    if !config.shape.is_none() {
        return Err(Error::Config(
            "closed-form monodromy eigenvalues need a hole-free cell".into(),
        ));
    }
    config.validate()?;
    let n = config.n;
    let mut log_sum = 0.0;
    let mut negative = false;
    for k in 0..n as i64 {
        let (l, neg) = log_factor(config, k, m);
        log_sum += l;
        negative ^= neg;
    }
    let modulus = (log_sum / n as f64).exp();
    let base = if negative { PI } else { 0.0 };
    Ok((0..n)
        .map(|j| Complex64::from_polar(modulus, (base + TAU * j as f64) / n as f64))
        .collect())
}

/// Union of all y-sectors, sorted by descending modulus.
pub fn no_hole_spectrum(config: &ProblemConfig) -> Result<Vec<Complex64>> {
    let mut all = Vec::with_capacity(config.n * config.n);
    for m in 0..config.n as i64 {
        all.extend(no_hole_monodromy_eigs(config, m)?);
    }
    all.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    Ok(all)
}
