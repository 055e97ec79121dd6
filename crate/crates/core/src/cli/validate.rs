//! Oracle and invariant suite behind the `validate` subcommand.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use super::config::ValidateBlock;
use crate::error::Result;
use crate::geometry::HoleShape;
use crate::numcore::vecops::norm;
use crate::numcore::{arnoldi_with, rng_stream, ArnoldiOptions};
use crate::operators::ProblemConfig;
use crate::propagator::{monodromy_apply, MonodromyContext};
use crate::spectra::{monodromy_spectrum_in, no_hole_mode_factor, no_hole_spectrum, unfold};

/// Grid sizes of the weighted-shift oracle.
pub const ORACLE_SIZES: [usize; 3] = [2, 4, 8];
pub const ORACLE_TOL: f64 = 1e-8;
pub const PLANE_WAVE_TOL: f64 = 1e-12;
pub const CONTRACTION_SLACK: f64 = 1e-12;
pub const UNFOLD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: value <= tolerance,
            value,
            tolerance,
            detail,
        }
    }
}

/// Pre-realignment evolution of the constant mode against the per-step
/// product, on the hole-free version of `config`.
pub fn plane_wave_check(config: &ProblemConfig) -> Result<Check> {
    let mut cfg = config.clone();
    cfg.shape = HoleShape::None;
    cfg.solver.tol = cfg.solver.tol.min(1e-14);
    let ctx = MonodromyContext::new(&cfg)?;
    let w0 = vec![Complex64::new(1.0, 0.0); ctx.dim()];
    let end = ctx.evolve_period(&w0, |_, _| {})?;
    let rho = no_hole_mode_factor(&cfg, 0, 0);
    let err = end
        .iter()
        .map(|w| (w - rho).norm())
        .fold(0.0, f64::max)
        / rho.abs();
    Ok(Check::new(
        "plane_wave_step_product",
        err,
        PLANE_WAVE_TOL,
        format!("N={} nt={} rho={rho:.12e}", cfg.n, cfg.nt),
    ))
}

/// Seeded `(g, q, p0)` triples: `g` uniform on the interval, phases uniform
/// on `[0, 2π)`.
pub fn oracle_triples(seed: u64, count: usize, g_interval: [f64; 2]) -> Vec<(f64, f64, f64)> {
    let mut rng = rng_stream(seed);
    (0..count)
        .map(|_| {
            let g = g_interval[0] + (g_interval[1] - g_interval[0]) * rng.next_f64();
            (g, TAU * rng.next_f64(), TAU * rng.next_f64())
        })
        .collect()
}

/// Outcome of the hole-free weighted-shift comparison for one triple.
#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub g: f64,
    pub q: f64,
    pub p0: f64,
    pub n: usize,
    /// Closed-form dominant modulus.
    pub modulus: f64,
    /// Largest relative deviation over the `N` dominant Ritz moduli.
    pub deviation: f64,
    /// Largest Ritz modulus of the full-dimension run.
    pub ritz_max_modulus: f64,
}

/// Full-dimension Arnoldi on the hole-free monodromy; the `N` dominant Ritz
/// moduli are compared with the closed form.
pub fn weighted_shift_row(base: &ProblemConfig, g: f64, q: f64, p0: f64, n: usize) -> Result<OracleRow> {
    let mut cfg = base.clone();
    cfg.shape = HoleShape::None;
    cfg.g = g;
    cfg.q = q;
    cfg.p0 = p0;
    cfg.n = n;
    cfg.solver.tol = cfg.solver.tol.min(1e-14);
    let ctx = MonodromyContext::new(&cfg)?;
    let dim = ctx.dim();
    let ritz = arnoldi_with(
        |w| monodromy_apply(&ctx, w),
        dim,
        &ArnoldiOptions::new(dim, 1e-12, cfg.eigen.seed),
    )?;
    let exact: Vec<f64> = no_hole_spectrum(&cfg)?.iter().map(|z| z.norm()).collect();
    let deviation = (0..n.min(ritz.pairs.len()))
        .map(|k| (ritz.pairs[k].value.norm() - exact[k]).abs() / exact[k])
        .fold(0.0, f64::max);
    Ok(OracleRow {
        g,
        q,
        p0,
        n,
        modulus: exact[0],
        deviation,
        ritz_max_modulus: ritz.pairs.iter().map(|p| p.value.norm()).fold(0.0, f64::max),
    })
}

pub fn weighted_shift_rows(base: &ProblemConfig, block: &ValidateBlock) -> Result<Vec<OracleRow>> {
    let mut rows = Vec::new();
    for (g, q, p0) in oracle_triples(base.eigen.seed, block.triples, block.g_interval) {
        for n in ORACLE_SIZES {
            rows.push(weighted_shift_row(base, g, q, p0, n)?);
        }
    }
    Ok(rows)
}

/// `‖K w‖ / ‖w‖ - 1` over seeded random states.
pub fn contraction_excess(ctx: &MonodromyContext, states: usize, seed: u64) -> Result<f64> {
    let mut rng = rng_stream(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..states {
        let w = rng.complex_vec(ctx.dim());
        let kw = monodromy_apply(ctx, &w)?;
        worst = worst.max(norm(&kw) / norm(&w) - 1.0);
    }
    Ok(worst)
}

/// `|exp(-t λ) - μ| / |μ|` over seeded multipliers in the unit disk, plus
/// the band condition on `Im λ`.
pub fn unfold_round_trip(seed: u64, count: usize, t: f64) -> Result<f64> {
    let mut rng = rng_stream(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let r = 1e-6 + (1.0 - 1e-6) * rng.next_f64();
        let mu = Complex64::from_polar(r, TAU * rng.next_f64() - std::f64::consts::PI);
        let l = unfold(mu, t)?;
        let half = std::f64::consts::PI / t;
        if !(l.im >= -half && l.im < half * (1.0 + 1e-15)) {
            return Ok(f64::INFINITY);
        }
        worst = worst.max(((-t * l).exp() - mu).norm() / r);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub oracle_rows: Vec<OracleRow>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_validation(config: &ProblemConfig, block: &ValidateBlock) -> Result<ValidationReport> {
    let mut checks = vec![plane_wave_check(config)?];

    let rows = weighted_shift_rows(config, block)?;
    let worst = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    checks.push(Check::new(
        "weighted_shift_oracle",
        worst,
        ORACLE_TOL,
        format!("{} triples x N in {ORACLE_SIZES:?}", block.triples),
    ));
    // dominant modulus must strictly drop as N doubles
    let mut increases = 0usize;
    for t in rows.chunks(ORACLE_SIZES.len()) {
        increases += t.windows(2).filter(|w| !(w[1].modulus < w[0].modulus)).count();
    }
    checks.push(Check::new(
        "modulus_decreases_with_n",
        increases as f64,
        0.0,
        "count of non-decreasing steps".into(),
    ));

    let ctx = MonodromyContext::new(config)?;
    let excess = contraction_excess(&ctx, block.states, config.eigen.seed)?;
    checks.push(Check::new(
        "contraction",
        excess,
        CONTRACTION_SLACK,
        format!("{} random states, max ||Kw||/||w|| - 1", block.states),
    ));

    let round = unfold_round_trip(config.eigen.seed, 1000, config.t_g())?;
    checks.push(Check::new(
        "unfold_round_trip",
        round,
        UNFOLD_TOL,
        "1000 seeded multipliers".into(),
    ));

    let sp = monodromy_spectrum_in(&ctx)?;
    let mut worst_mu: f64 = 0.0;
    let mut bad = 0usize;
    for b in &sp.branches {
        worst_mu = worst_mu.max(b.mu.norm() - 1.0);
        let back = (-config.t_g() * b.lambda).exp();
        if !b.satisfies_invariants() || (back - b.mu).norm() > UNFOLD_TOL.max(1e-10) * b.mu.norm() {
            bad += 1;
        }
    }
    checks.push(Check::new(
        "multipliers_in_unit_disk",
        worst_mu,
        1e-10,
        format!("{} branches, max |mu| - 1", sp.branches.len()),
    ));
    checks.push(Check::new(
        "branch_invariants",
        bad as f64,
        0.0,
        "branches violating band, Re >= -1e-10 g or exp(-t_g lambda) = mu".into(),
    ));
    Ok(ValidationReport {
        checks,
        oracle_rows: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triples_are_reproducible_and_in_range() {
        let a = oracle_triples(5, 4, [200.0, 800.0]);
        assert_eq!(a, oracle_triples(5, 4, [200.0, 800.0]));
        assert!(a.iter().all(|t| (200.0..=800.0).contains(&t.0) && (0.0..TAU).contains(&t.1)));
    }

    #[test]
    fn unfold_round_trip_is_exact() {
        assert!(unfold_round_trip(3, 200, 0.1).unwrap() < UNFOLD_TOL);
    }

    #[test]
    fn weighted_shift_at_small_n() {
        let base = ProblemConfig::new(400.0, 0.0, HoleShape::None, 2);
        let row = weighted_shift_row(&base, 400.0, 1.0, 2.0, 4).unwrap();
        assert!(row.deviation < ORACLE_TOL, "{row:?}");
    }
}
