//! Hole shapes and masked uniform grids.
//!
//! Grids are cell-centered: on a cell of `N` points per side the nodes sit
//! at `-1/2 + (j + 1/2)/N`, so no node lies on the cell seam. A node is
//! masked (excluded from the degrees of freedom, i.e. Dirichlet) when its
//! center lies inside or on the boundary of a hole translate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A convex hole centered at the cell origin, in cell units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum HoleShape {
    None,
    Disk { radius: f64 },
    Ellipse { a: f64, b: f64 },
}

impl HoleShape {
    pub fn disk(radius: f64) -> Result<Self> {
        let s = HoleShape::Disk { radius };
        s.validate()?;
        Ok(s)
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        let s = HoleShape::Ellipse { a, b };
        s.validate()?;
        Ok(s)
    }

    /// The closed hole must sit strictly inside the open cell.
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0 && v < 0.5;
        match *self {
            HoleShape::None => Ok(()),
            HoleShape::Disk { radius } if ok(radius) => Ok(()),
            HoleShape::Ellipse { a, b } if ok(a) && ok(b) => Ok(()),
            s => Err(Error::Geometry(format!(
                "{s:?}: hole dimensions must lie in (0, 1/2)"
            ))),
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, HoleShape::None)
    }

    /// Largest x-coordinate of the hole (0 when there is no hole).
    pub fn x_extent(&self) -> f64 {
        match *self {
            HoleShape::None => 0.0,
            HoleShape::Disk { radius } => radius,
            HoleShape::Ellipse { a, .. } => a,
        }
    }

    fn min_semi_axis(&self) -> Option<f64> {
        match *self {
            HoleShape::None => None,
            HoleShape::Disk { radius } => Some(radius),
            HoleShape::Ellipse { a, b } => Some(a.min(b)),
        }
    }
}

/// Negative inside the hole, zero on its boundary, positive outside.
///
/// Exact Euclidean distance for the disk; for the ellipse only the sign is
/// meaningful (implicit function `(x/a)^2 + (y/b)^2 - 1`).
pub fn signed_distance(shape: &HoleShape, point: [f64; 2]) -> f64 {
    let [x, y] = point;
    match *shape {
        HoleShape::None => f64::INFINITY,
        HoleShape::Disk { radius } => x.hypot(y) - radius,
        HoleShape::Ellipse { a, b } => (x / a).powi(2) + (y / b).powi(2) - 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Topology {
    /// One periodic cell, wrapping in both directions.
    TorusCell,
    /// `2L+1` cells along x with Dirichlet ends, periodic in y.
    DirichletStrip { half_width: usize },
}

/// Masked uniform grid. Point `(j, l)` has linear index `l * nx + j`
/// (x fastest); active points are numbered in that order.
#[derive(Debug, Clone)]
pub struct CellGrid {
    n: usize,
    topology: Topology,
    shape: HoleShape,
    nx: usize,
    xs: Vec<f64>,
    ys: Vec<f64>,
    masked: Vec<bool>,
    dof_of_point: Vec<Option<usize>>,
    point_of_dof: Vec<usize>,
}

/// Cell-centered coordinate of node `j` on a cell with `n` nodes; the
/// numerator is an exact integer so mirrored nodes are exact negatives.
fn cell_coordinate(j: usize, n: usize) -> f64 {
    (2.0 * j as f64 + 1.0 - n as f64) / (2.0 * n as f64)
}

fn cell_mask(n: usize, shape: &HoleShape) -> Result<Vec<bool>> {
    if n < 2 {
        return Err(Error::Geometry(format!("grid needs N >= 2, got {n}")));
    }
    shape.validate()?;
    if let Some(axis) = shape.min_semi_axis() {
        // at least one grid spacing per semi-axis
        if (n as f64) * axis < 1.0 - 1e-12 {
            return Err(Error::Geometry(format!(
                "N={n} does not resolve the hole (need N >= {:.0})",
                (1.0 / axis).ceil()
            )));
        }
    }
    let coords: Vec<f64> = (0..n).map(|j| cell_coordinate(j, n)).collect();
    let mut mask = vec![false; n * n];
    for (l, &y) in coords.iter().enumerate() {
        for (j, &x) in coords.iter().enumerate() {
            mask[l * n + j] = signed_distance(shape, [x, y]) <= 0.0;
        }
    }
    // every row and column must keep an active point so the cell stays
    // connected across both seams
    for k in 0..n {
        let row_blocked = (0..n).all(|j| mask[k * n + j]);
        let col_blocked = (0..n).all(|l| mask[l * n + k]);
        if row_blocked || col_blocked {
            return Err(Error::Geometry(format!(
                "hole blocks an entire grid line at N={n}"
            )));
        }
    }
    Ok(mask)
}

impl CellGrid {
    fn from_mask(
        n: usize,
        topology: Topology,
        shape: HoleShape,
        xs: Vec<f64>,
        masked: Vec<bool>,
    ) -> Self {
        let nx = xs.len();
        let ys = (0..n).map(|l| cell_coordinate(l, n)).collect();
        let mut dof_of_point = vec![None; masked.len()];
        let mut point_of_dof = Vec::with_capacity(masked.len());
        for (p, &m) in masked.iter().enumerate() {
            if !m {
                dof_of_point[p] = Some(point_of_dof.len());
                point_of_dof.push(p);
            }
        }
        Self {
            n,
            topology,
            shape,
            nx,
            xs,
            ys,
            masked,
            dof_of_point,
            point_of_dof,
        }
    }

    /// Points per cell side.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn shape(&self) -> &HoleShape {
        &self.shape
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.n
    }

    pub fn total_points(&self) -> usize {
        self.masked.len()
    }

    pub fn active_count(&self) -> usize {
        self.point_of_dof.len()
    }

    pub fn masked_count(&self) -> usize {
        self.total_points() - self.active_count()
    }

    pub fn x(&self, j: usize) -> f64 {
        self.xs[j]
    }

    pub fn y(&self, l: usize) -> f64 {
        self.ys[l]
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn is_masked(&self, j: usize, l: usize) -> bool {
        self.masked[l * self.nx + j]
    }

    /// Degree-of-freedom index of point `(j, l)`, `None` when masked.
    pub fn dof(&self, j: usize, l: usize) -> Option<usize> {
        self.dof_of_point[l * self.nx + j]
    }

    /// Grid indices `(j, l)` of a degree of freedom.
    pub fn point(&self, dof: usize) -> (usize, usize) {
        let p = self.point_of_dof[dof];
        (p % self.nx, p / self.nx)
    }

    pub fn coords(&self, dof: usize) -> [f64; 2] {
        let (j, l) = self.point(dof);
        [self.xs[j], self.ys[l]]
    }

    /// x-coordinate of every degree of freedom, in DOF order.
    pub fn dof_x(&self) -> Vec<f64> {
        (0..self.active_count()).map(|d| self.coords(d)[0]).collect()
    }
}

/// Torus-cell grid on one fundamental cell.
pub fn build_cell_grid(n: usize, shape: HoleShape) -> Result<CellGrid> {
    let masked = cell_mask(n, &shape)?;
    let xs = (0..n).map(|j| cell_coordinate(j, n)).collect();
    Ok(CellGrid::from_mask(n, Topology::TorusCell, shape, xs, masked))
}

/// Strip of `2L+1` cells centered on cell 0; every cell carries the same
/// (translated) mask.
pub fn build_strip_grid(n: usize, half_width: usize, shape: HoleShape) -> Result<CellGrid> {
    let cell = cell_mask(n, &shape)?;
    let cells = 2 * half_width + 1;
    let nx = cells * n;
    let xs: Vec<f64> = (0..nx)
        .map(|j| (j / n) as f64 - half_width as f64 + cell_coordinate(j % n, n))
        .collect();
    let mut masked = vec![false; nx * n];
    for l in 0..n {
        for j in 0..nx {
            masked[l * nx + j] = cell[l * n + j % n];
        }
    }
    Ok(CellGrid::from_mask(
        n,
        Topology::DirichletStrip { half_width },
        shape,
        xs,
        masked,
    ))
}
