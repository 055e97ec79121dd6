//! Time integration: the gauge-drift monodromy on the torus cell and the
//! constant-coefficient strip semigroup.
//!
//! On the cell the state `w` evolves under `∂t w = -B(p(t)) w` with the
//! Hermitian generator `B(p) = -(∂x + ip)² - (∂y - iq)²` and the drifting
//! phase `p(t) = p0 - g t`. After one period the phase has moved by `-2π`;
//! multiplying by `e^{-2πix}` returns to the `p0` gauge, which makes the
//! period map an endomorphism of the `p0` Floquet sector.

use std::f64::consts::TAU;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{build_cell_grid, CellGrid};
use crate::numcore::vecops::{dot, norm, sub};
use crate::numcore::{solve_from, solve_hermitian, SolverOptions, SparseMatrix};
use crate::operators::{BlochPhases, CellOperator, ProblemConfig};

/// Immutable per-(g, q, p0) data for monodromy applications.
#[derive(Debug)]
pub struct MonodromyContext {
    config: ProblemConfig,
    grid: CellGrid,
    operator: CellOperator,
    dt: f64,
    schedule: Vec<f64>,
    realign: Vec<Complex64>,
    solver_iterations: AtomicUsize,
}

impl MonodromyContext {
    pub fn new(config: &ProblemConfig) -> Result<Self> {
        config.validate()?;
        let grid = build_cell_grid(config.n, config.shape)?;
        Self::with_grid(config, grid)
    }

    pub fn with_grid(config: &ProblemConfig, grid: CellGrid) -> Result<Self> {
        config.validate()?;
        // q and p0 only matter modulo 2π (diagonal gauge equivalence); reduce
        // them so that equivalent inputs give bit-identical propagators
        let phases = BlochPhases::new(config.p0, config.q);
        let operator = CellOperator::new(&grid, phases.q())?;
        let dt = config.t_g() / config.nt as f64;
        // midpoint phases p0 - g (j + 1/2) dt
        let schedule = (0..config.nt)
            .map(|j| phases.p() - config.g * (j as f64 + 0.5) * dt)
            .collect();
        let realign = grid
            .dof_x()
            .into_iter()
            .map(|x| Complex64::from_polar(1.0, -TAU * x))
            .collect();
        Ok(Self {
            config: config.clone(),
            grid,
            operator,
            dt,
            schedule,
            realign,
            solver_iterations: AtomicUsize::new(0),
        })
    }

    pub fn config(&self) -> &ProblemConfig {
        &self.config
    }

    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Midpoint phase of every step.
    pub fn schedule(&self) -> &[f64] {
        &self.schedule
    }

    /// Phase at the start of step `j`, `p0 - g j dt`.
    pub fn phase_at(&self, j: usize) -> f64 {
        BlochPhases::new(self.config.p0, 0.0).p() - self.config.g * j as f64 * self.dt
    }

    /// Gauge realignment diagonal `e^{-2πi x}`.
    pub fn realign(&self) -> &[Complex64] {
        &self.realign
    }

    pub fn solver_iterations(&self) -> usize {
        self.solver_iterations.load(Ordering::Relaxed)
    }

    fn check_len(&self, w: &[Complex64]) -> Result<()> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: w.len(),
            });
        }
        Ok(())
    }

    fn step_with(
        &self,
        work: &mut SparseMatrix,
        w: &[Complex64],
        guess: Option<&[Complex64]>,
        j: usize,
    ) -> Result<Vec<Complex64>> {
        self.operator
            .fill_shifted(self.schedule[j], 1.0, 0.5 * self.dt, work);
        // (I - a B) w = 2 w - (I + a B) w
        let mw = work.spmv(w)?;
        let rhs: Vec<Complex64> = w.iter().zip(&mw).map(|(wi, mi)| 2.0 * wi - mi).collect();
        let x0 = guess.unwrap_or(&rhs);
        let sol = solve_hermitian(work, &rhs, Some(x0), &self.config.solver)?;
        self.solver_iterations
            .fetch_add(sol.iterations, Ordering::Relaxed);
        Ok(sol.x)
    }

    /// Pre-realignment evolution over one period. `snapshot(j, w)` sees the
    /// state at `t_j = j dt` for `j = 0..nt`, before step `j`.
    pub fn evolve_period<F>(&self, w0: &[Complex64], mut snapshot: F) -> Result<Vec<Complex64>>
    where
        F: FnMut(usize, &[Complex64]),
    {
        self.check_len(w0)?;
        let mut work = self.operator.workspace();
        let mut prev: Option<Vec<Complex64>> = None;
        let mut w = w0.to_vec();
        for j in 0..self.config.nt {
            snapshot(j, &w);
            // linear extrapolation from the previous step as initial guess
            let guess: Option<Vec<Complex64>> = prev
                .as_ref()
                .map(|p| w.iter().zip(p).map(|(a, b)| 2.0 * a - b).collect());
            let next = self.step_with(&mut work, &w, guess.as_deref(), j)?;
            prev = Some(std::mem::replace(&mut w, next));
        }
        Ok(w)
    }

    /// Applies `e^{-2πi x}`.
    pub fn realign_state(&self, w: &mut [Complex64]) {
        for (wi, di) in w.iter_mut().zip(&self.realign) {
            *wi *= di;
        }
    }
}

/// One Crank-Nicolson step `(I + Δt/2 B_j) w' = (I - Δt/2 B_j) w` with the
/// midpoint phase of step `j`.
pub fn cn_step(ctx: &MonodromyContext, w: &[Complex64], j: usize) -> Result<Vec<Complex64>> {
    ctx.check_len(w)?;
    if j >= ctx.config.nt {
        return Err(Error::Config(format!(
            "step index {j} outside 0..{}",
            ctx.config.nt
        )));
    }
    let mut work = ctx.operator.workspace();
    ctx.step_with(&mut work, w, None, j)
}

/// One period of evolution followed by gauge realignment.
pub fn monodromy_apply(ctx: &MonodromyContext, w0: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut w = ctx.evolve_period(w0, |_, _| {})?;
    ctx.realign_state(&mut w);
    Ok(w)
}

/// `s`-fold composition of [`monodromy_apply`].
pub fn monodromy_power_apply(
    ctx: &MonodromyContext,
    w0: &[Complex64],
    s: usize,
) -> Result<Vec<Complex64>> {
    if s == 0 {
        return Err(Error::Config("power must be >= 1".into()));
    }
    let mut w = monodromy_apply(ctx, w0)?;
    for _ in 1..s {
        w = monodromy_apply(ctx, &w)?;
    }
    Ok(w)
}

/// `nt` Crank-Nicolson steps of size `t/nt` with a fixed strip matrix.
pub fn strip_semigroup_apply(
    a: &SparseMatrix,
    t: f64,
    nt: usize,
    w: &[Complex64],
    solver: &SolverOptions,
) -> Result<Vec<Complex64>> {
    if !(t > 0.0) || nt == 0 {
        return Err(Error::Config(format!(
            "strip propagation needs T > 0 and nt >= 1 (T={t}, nt={nt})"
        )));
    }
    let half = Complex64::new(0.5 * t / nt as f64, 0.0);
    let m = a.shifted(Complex64::new(1.0, 0.0), half);
    let mut state = w.to_vec();
    let mut prev: Option<Vec<Complex64>> = None;
    for _ in 0..nt {
        let mw = m.spmv(&state)?;
        let rhs: Vec<Complex64> = state.iter().zip(&mw).map(|(s, x)| 2.0 * s - x).collect();
        let guess: Vec<Complex64> = match &prev {
            Some(p) => state.iter().zip(p).map(|(a, b)| 2.0 * a - b).collect(),
            None => rhs.clone(),
        };
        let sol = solve_from(&m, &rhs, Some(&guess), solver)?;
        prev = Some(std::mem::replace(&mut state, sol.x));
    }
    Ok(state)
}

/// Single-period Rayleigh quotient `μ = <v, K v>/<v, v>` and its residual
/// `||K v - μ v|| / ||v||`.
pub fn rayleigh_refine<F>(mut apply: F, v: &[Complex64]) -> Result<(Complex64, f64)>
where
    F: FnMut(&[Complex64]) -> Result<Vec<Complex64>>,
{
    let vv = dot(v, v).re;
    if !(vv > 0.0) {
        return Err(Error::Config("rayleigh_refine needs a nonzero vector".into()));
    }
    let kv = apply(v)?;
    let mu = dot(v, &kv) / vv;
    let scaled: Vec<Complex64> = v.iter().map(|x| mu * x).collect();
    let residual = norm(&sub(&kv, &scaled)) / vv.sqrt();
    Ok((mu, residual))
}
