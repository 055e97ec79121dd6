//! Strip eigenfunctions assembled from one period of monodromy snapshots.
//!
//! With `u(t, x) = e^{ip(t)x} w(t, x)` the gauge-drift evolution is the
//! strip semigroup itself, so for a monodromy eigenpair `(μ, w0)` the
//! weighted average of `e^{tλ0} u(t)` over one period is an eigenfunction of
//! the strip operator with eigenvalue `λ0 = -Log μ / t_g`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::branch::unfold;
use crate::error::{Error, Result};
use crate::geometry::{build_strip_grid, CellGrid};
use crate::numcore::vecops::{bilinear, norm};
use crate::operators::{assemble_strip_bt, BlochPhases, ProblemConfig};
use crate::propagator::MonodromyContext;

/// Largest accepted `||K w0 - μ w0|| / ||w0||` for the input pair.
pub const PAIR_TOLERANCE: f64 = 1e-4;

/// Half-width of the window used for the localization fraction.
pub const LOCALIZATION_WINDOW: f64 = 2.0;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Reconstruction {
    pub lambda: Complex64,
    /// Strip state, indexed by the active points of [`reconstruction_grid`].
    pub state: Vec<Complex64>,
    pub half_width: usize,
    /// `||(A - λ0) u|| / ||u||` restricted to `|x| <= L - 1`.
    pub residual: f64,
    /// Share of `||u||²` with `|x| <= 2`.
    pub localized_fraction: f64,
    /// `|Σ u(x) u(x - 1)| / ||u||²`, the bilinear pairing with the one-cell
    /// translate.
    pub pairing_ratio: f64,
    /// Residual of the input pair after one period.
    pub pair_residual: f64,
}

/// Rebuilds the strip grid a [`Reconstruction`] lives on.
pub fn reconstruction_grid(config: &ProblemConfig, half_width: usize) -> Result<CellGrid> {
    build_strip_grid(config.n, half_width, config.shape)
}

pub fn reconstruct_eigenfunction(
    config: &ProblemConfig,
    mu: Complex64,
    w0: &[Complex64],
    half_width: usize,
) -> Result<Reconstruction> {
    if BlochPhases::new(config.p0, 0.0).p() != 0.0 {
        return Err(Error::Config("reconstruction needs a p0 = 0 monodromy pair".into()));
    }
    if half_width < 1 {
        return Err(Error::Config("reconstruction needs a strip half-width >= 1".into()));
    }
    let ctx = MonodromyContext::new(config)?;
    let cell = ctx.grid();
    let strip = build_strip_grid(config.n, half_width, config.shape)?;
    let lambda0 = unfold(mu, config.t_g())?;
    let n = config.n;

    // strip dof -> (cell dof, x)
    let map: Vec<(usize, f64)> = (0..strip.active_count())
        .map(|d| {
            let (j, l) = strip.point(d);
            let cd = cell.dof(j % n, l).expect("strip mask is periodic");
            (cd, strip.x(j))
        })
        .collect();

    let nt = config.nt;
    let dt = ctx.dt();
    let mut u = vec![Complex64::new(0.0, 0.0); strip.active_count()];
    let end = ctx.evolve_period(w0, |j, w| {
        let t = j as f64 * dt;
        let weight = (t * lambda0).exp() / nt as f64;
        let p = ctx.phase_at(j);
        for (ui, &(cd, x)) in u.iter_mut().zip(&map) {
            *ui += weight * Complex64::from_polar(1.0, p * x) * w[cd];
        }
    })?;

    let mut kw = end;
    ctx.realign_state(&mut kw);
    let w0n = norm(w0);
    let pair_residual = norm(
        &kw.iter()
            .zip(w0)
            .map(|(k, w)| k - mu * w)
            .collect::<Vec<_>>(),
    ) / w0n;
    if !(pair_residual <= PAIR_TOLERANCE) {
        return Err(Error::NotConverged(format!(
            "input pair residual {pair_residual:.3e} exceeds {PAIR_TOLERANCE:e}"
        )));
    }

    let a = assemble_strip_bt(&strip, config.g, config.q)?;
    let au = a.spmv(&u)?;
    let window = half_width as f64 - 1.0;
    let (mut num, mut den, mut total, mut inside) = (0.0, 0.0, 0.0, 0.0);
    for (d, (&ui, &ai)) in u.iter().zip(&au).enumerate() {
        let x = map[d].1;
        let m = ui.norm_sqr();
        total += m;
        if x.abs() <= LOCALIZATION_WINDOW {
            inside += m;
        }
        if x.abs() <= window {
            num += (ai - lambda0 * ui).norm_sqr();
            den += m;
        }
    }
    if !(total > 0.0) {
        return Err(Error::NotConverged("reconstructed state vanished".into()));
    }

    let translated = translate_one_cell(&strip, &u);
    let pairing = bilinear(&u, &translated);

    Ok(Reconstruction {
        lambda: lambda0,
        residual: (num / den.max(f64::MIN_POSITIVE)).sqrt(),
        localized_fraction: inside / total,
        pairing_ratio: pairing.norm() / total,
        pair_residual,
        state: u,
        half_width,
    })
}

/// `(τ u)(x) = u(x - 1)`, zero where the source falls off the strip.
pub fn translate_one_cell(strip: &CellGrid, u: &[Complex64]) -> Vec<Complex64> {
    let n = strip.n();
    (0..strip.active_count())
        .map(|d| {
            let (j, l) = strip.point(d);
            if j < n {
                Complex64::new(0.0, 0.0)
            } else {
                strip.dof(j - n, l).map_or(Complex64::new(0.0, 0.0), |s| u[s])
            }
        })
        .collect()
}
