//! Discrete Bloch cell operator and truncated-strip Bloch-Torrey operator.
//!
//! Both use the 5-point Laplacian on active nodes, with masked neighbours
//! dropped (Dirichlet). Quasimomenta enter as link phases on every hop:
//! an x-hop to the right carries `e^{+ipΔ}`, a y-hop upward `e^{-iqΔ}`,
//! so the plane wave `e^{2πi(kx+my)}` on the hole-free torus has the
//! eigenvalue returned by [`dispersion`].

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CellGrid, HoleShape, Topology};
use crate::numcore::{SolverOptions, SparseMatrix};

/// Quasimomenta `(p, q)` reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPhases {
    p: f64,
    q: f64,
}

impl BlochPhases {
    pub fn new(p: f64, q: f64) -> Self {
        Self {
            p: reduce_phase(p),
            q: reduce_phase(q),
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

fn reduce_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Arnoldi settings carried by a problem configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenSettings {
    /// Krylov dimension.
    pub m: usize,
    pub tol: f64,
    pub seed: u64,
    /// Leading Ritz pairs that get an explicit residual check.
    #[serde(default = "default_nev")]
    pub nev: usize,
}

fn default_nev() -> usize {
    6
}

impl Default for EigenSettings {
    fn default() -> Self {
        Self {
            m: 30,
            tol: 1e-6,
            seed: 1,
            nev: default_nev(),
        }
    }
}

/// Physical and numerical parameters of one monodromy computation.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    /// Gradient strength, `g > 0`.
    pub g: f64,
    /// y-quasimomentum.
    pub q: f64,
    /// Floquet parameter of the monodromy sector.
    pub p0: f64,
    pub shape: HoleShape,
    /// Grid points per cell side.
    pub n: usize,
    /// Crank-Nicolson steps per period.
    pub nt: usize,
    /// Periods composed inside the Arnoldi map.
    pub periods: usize,
    pub eigen: EigenSettings,
    pub solver: SolverOptions,
}

/// Default time steps per period: `max(64, ceil(32 t_g g))` rounded up to
/// a power of two, which is 256 for every `g` since `t_g g = 2π`.
pub const DEFAULT_NT: usize = 256;

impl ProblemConfig {
    pub fn new(g: f64, q: f64, shape: HoleShape, n: usize) -> Self {
        Self {
            g,
            q,
            p0: 0.0,
            shape,
            n,
            nt: DEFAULT_NT,
            periods: 1,
            eigen: EigenSettings::default(),
            solver: SolverOptions::with_tol(1e-10, 2000),
        }
    }

    /// Period `t_g = 2π/g`.
    pub fn t_g(&self) -> f64 {
        TAU / self.g
    }

    /// Semiclassical parameter `h = g^{-1/2}`.
    pub fn semiclassical_h(&self) -> f64 {
        self.g.powf(-0.5)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g.is_finite() && self.g > 0.0) {
            return Err(Error::Config(format!("g must be positive, got {}", self.g)));
        }
        if !self.q.is_finite() || !self.p0.is_finite() {
            return Err(Error::Config("q and p0 must be finite".into()));
        }
        if self.nt < 8 {
            return Err(Error::Config(format!("nt must be >= 8, got {}", self.nt)));
        }
        if self.periods < 1 {
            return Err(Error::Config("periods must be >= 1".into()));
        }
        if self.eigen.m < 1 || self.eigen.nev < 1 || !(self.eigen.tol > 0.0) {
            return Err(Error::Config("arnoldi m >= 1, nev >= 1 and tol > 0 required".into()));
        }
        if !(self.solver.tol > 0.0) || self.solver.maxit == 0 {
            return Err(Error::Config("solver tol > 0 and maxit >= 1 required".into()));
        }
        self.shape.validate()
    }
}

/// `(2/Δ²)(1 - cos((2πk + p)Δ)) + (2/Δ²)(1 - cos((2πm - q)Δ))` with `Δ = 1/n`
/// and unreduced phases.
pub fn dispersion(k: i64, m: i64, p: f64, q: f64, n: usize) -> f64 {
    let d = 1.0 / n as f64;
    let c = 2.0 / (d * d);
    c * (1.0 - ((2.0 * PI * k as f64 + p) * d).cos())
        + c * (1.0 - ((2.0 * PI * m as f64 - q) * d).cos())
}

/// Closed-form symbol of the hole-free cell operator.
pub fn discrete_dispersion(k: i64, m: i64, phases: &BlochPhases, n: usize) -> f64 {
    dispersion(k, m, phases.p, phases.q, n)
}

/// Cell operator with the x-quasimomentum left free.
///
/// Each stored entry is `constant - (n_fwd e^{ipΔ} + n_bwd e^{-ipΔ})/Δ²`,
/// where the counts are 0 or 1 (both 1 on a 2-point cell where the left
/// and right neighbours coincide). Rebuilding the values for a new `p`
/// costs one pass over the entries.
#[derive(Debug, Clone)]
pub struct CellOperator {
    pattern: SparseMatrix,
    constant: Vec<Complex64>,
    fwd: Vec<u8>,
    bwd: Vec<u8>,
    spacing: f64,
    q: f64,
}

impl CellOperator {
    /// `q` is used as given (not reduced).
    pub fn new(grid: &CellGrid, q: f64) -> Result<Self> {
        if grid.topology() != Topology::TorusCell {
            return Err(Error::Topology(
                "cell Bloch operator needs a torus-cell grid".into(),
            ));
        }
        let n = grid.n();
        let d = grid.spacing();
        let inv = 1.0 / (d * d);
        let yfwd = Complex64::from_polar(inv, -q * d);
        let ybwd = yfwd.conj();

        // (row, col) -> (constant, fwd, bwd)
        let mut entries: Vec<(usize, usize, Complex64, u8, u8)> = Vec::new();
        for dof in 0..grid.active_count() {
            let (j, l) = grid.point(dof);
            entries.push((dof, dof, Complex64::new(4.0 * inv, 0.0), 0, 0));
            if let Some(c) = grid.dof((j + 1) % n, l) {
                entries.push((dof, c, Complex64::new(0.0, 0.0), 1, 0));
            }
            if let Some(c) = grid.dof((j + n - 1) % n, l) {
                entries.push((dof, c, Complex64::new(0.0, 0.0), 0, 1));
            }
            if let Some(c) = grid.dof(j, (l + 1) % n) {
                entries.push((dof, c, -yfwd, 0, 0));
            }
            if let Some(c) = grid.dof(j, (l + n - 1) % n) {
                entries.push((dof, c, -ybwd, 0, 0));
            }
        }
        entries.sort_unstable_by_key(|e| (e.0, e.1));
        let mut merged: Vec<(usize, usize, Complex64, u8, u8)> = Vec::with_capacity(entries.len());
        for e in entries {
            match merged.last_mut() {
                Some(last) if (last.0, last.1) == (e.0, e.1) => {
                    last.2 += e.2;
                    last.3 += e.3;
                    last.4 += e.4;
                }
                _ => merged.push(e),
            }
        }
        let triplets = merged.iter().map(|e| (e.0, e.1, e.2)).collect();
        let pattern = SparseMatrix::from_triplets(grid.active_count(), triplets)?;
        Ok(Self {
            pattern,
            constant: merged.iter().map(|e| e.2).collect(),
            fwd: merged.iter().map(|e| e.3).collect(),
            bwd: merged.iter().map(|e| e.4).collect(),
            spacing: d,
            q,
        })
    }

    pub fn dim(&self) -> usize {
        self.pattern.dim()
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The operator at x-quasimomentum `p` (unreduced).
    pub fn matrix(&self, p: f64) -> SparseMatrix {
        let mut m = self.pattern.clone();
        self.fill_shifted(p, 0.0, 1.0, &mut m);
        m
    }

    /// A matrix with this operator's sparsity pattern, for [`Self::fill_shifted`].
    pub fn workspace(&self) -> SparseMatrix {
        self.pattern.clone()
    }

    /// Writes `alpha I + beta B(p)` into `out`, which must come from
    /// [`Self::workspace`].
    pub fn fill_shifted(&self, p: f64, alpha: f64, beta: f64, out: &mut SparseMatrix) {
        let inv = 1.0 / (self.spacing * self.spacing);
        let efwd = Complex64::from_polar(inv, p * self.spacing);
        let ebwd = efwd.conj();
        let rows = self.pattern.row_offsets();
        let cols = self.pattern.col_indices();
        let vals = out.values_mut();
        for i in 0..rows.len() - 1 {
            for k in rows[i]..rows[i + 1] {
                let mut v = self.constant[k];
                if self.fwd[k] > 0 {
                    v -= efwd * self.fwd[k] as f64;
                }
                if self.bwd[k] > 0 {
                    v -= ebwd * self.bwd[k] as f64;
                }
                v *= beta;
                if cols[k] == i {
                    v += alpha;
                }
                vals[k] = v;
            }
        }
    }
}

/// Gauge-transformed fiber operator `-(∂x + ip)² - (∂y - iq)²` on the
/// perforated torus cell.
pub fn assemble_cell_bloch(grid: &CellGrid, phases: &BlochPhases) -> Result<SparseMatrix> {
    Ok(CellOperator::new(grid, phases.q())?.matrix(phases.p()))
}

/// Truncated-strip operator `-Δ + i g x` with y-quasimomentum `q`,
/// Dirichlet at both x ends.
pub fn assemble_strip_bt(grid: &CellGrid, g: f64, q: f64) -> Result<SparseMatrix> {
    if !matches!(grid.topology(), Topology::DirichletStrip { .. }) {
        return Err(Error::Topology("strip operator needs a strip grid".into()));
    }
    let n = grid.n();
    let nx = grid.nx();
    let d = grid.spacing();
    let inv = 1.0 / (d * d);
    let yfwd = Complex64::from_polar(inv, -q * d);
    let ybwd = yfwd.conj();
    let xhop = Complex64::new(-inv, 0.0);

    let mut t = Vec::with_capacity(5 * grid.active_count());
    for dof in 0..grid.active_count() {
        let (j, l) = grid.point(dof);
        t.push((dof, dof, Complex64::new(4.0 * inv, g * grid.x(j))));
        if j + 1 < nx {
            if let Some(c) = grid.dof(j + 1, l) {
                t.push((dof, c, xhop));
            }
        }
        if j > 0 {
            if let Some(c) = grid.dof(j - 1, l) {
                t.push((dof, c, xhop));
            }
        }
        if let Some(c) = grid.dof(j, (l + 1) % n) {
            t.push((dof, c, -yfwd));
        }
        if let Some(c) = grid.dof(j, (l + n - 1) % n) {
            t.push((dof, c, -ybwd));
        }
    }
    SparseMatrix::from_triplets(grid.active_count(), t)
}
