//! File-backed run configuration.
//!
//! A run file is TOML. Top-level keys describe the problem; optional tables
//! configure individual subcommands. Unknown keys anywhere are rejected.
//!
//! Units: lengths are in cell periods (the hole lattice is `Z²`), `g` in
//! inverse cubed cell periods, times in squared cell periods (so the period
//! is `t_g = 2π/g`). Phases `q`, `p0` are in radians.
//!
//! ```toml
//! g = 20.0            # gradient strength, > 0
//! q = 0.0             # y-quasimomentum [rad]
//! p0 = 0.0            # Floquet phase of the monodromy sector [rad]
//! n = 64              # grid points per cell side
//! nt = 256            # Crank-Nicolson steps per period
//! periods = 1         # periods composed inside the Arnoldi map
//! seed = 1            # start vectors of every randomized computation
//! output_dir = "out"
//!
//! [shape]             # kind = "none" | "disk" | "ellipse"
//! kind = "disk"
//! radius = 0.25       # [cell periods]
//!
//! [eigen]             # Arnoldi: Krylov dimension, residual tol, checked pairs
//! m = 30
//! tol = 1e-6
//! nev = 6
//!
//! [solver]            # inner Krylov solves
//! tol = 1e-10
//! maxit = 2000
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::HoleShape;
use crate::numcore::SolverOptions;
use crate::operators::{EigenSettings, ProblemConfig, DEFAULT_NT};
use crate::spectra::{choose_periods, pseudospectra, DEFAULT_HALF_WIDTH};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub g: f64,
    #[serde(default)]
    pub q: f64,
    #[serde(default)]
    pub p0: f64,
    #[serde(default = "no_shape")]
    pub shape: HoleShape,
    pub n: usize,
    #[serde(default = "default_nt")]
    pub nt: usize,
    #[serde(default = "one")]
    pub periods: usize,
    #[serde(default = "one_u64")]
    pub seed: u64,
    /// Not embedded in outputs; results do not depend on it.
    #[serde(default, skip_serializing)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub eigen: EigenBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strip: Option<StripBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pseudospectra: Option<PseudospectraBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asymptotics: Option<AsymptoticsBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reconstruct: Option<ReconstructBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validate: Option<ValidateBlock>,
}

fn no_shape() -> HoleShape {
    HoleShape::None
}
fn default_nt() -> usize {
    DEFAULT_NT
}
fn one() -> usize {
    1
}
fn one_u64() -> u64 {
    1
}
fn half_width() -> usize {
    DEFAULT_HALF_WIDTH
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EigenBlock {
    pub m: usize,
    pub tol: f64,
    pub nev: usize,
}

impl Default for EigenBlock {
    fn default() -> Self {
        let e = EigenSettings::default();
        Self {
            m: e.m,
            tol: e.tol,
            nev: e.nev,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    pub tol: f64,
    pub maxit: usize,
    pub restart: usize,
    pub stagnation_window: usize,
}

impl Default for SolverBlock {
    fn default() -> Self {
        let s = SolverOptions::with_tol(1e-10, 2000);
        Self {
            tol: s.tol,
            maxit: s.maxit,
            restart: s.restart,
            stagnation_window: s.stagnation_window,
        }
    }
}

/// Inclusive, evenly spaced `count` values from `start` to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            c => (0..c)
                .map(|k| self.start + (self.stop - self.start) * k as f64 / (c - 1) as f64)
                .collect(),
        }
    }
}

/// Exactly one of `q_values` and `q_range` [rad].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_range: Option<Range>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StripBlock {
    /// Half-width `L` in cells.
    #[serde(default = "half_width")]
    pub half_width: usize,
    /// Semigroup time `T`; defaults to `t_g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    /// Also solve at `L + 2` and report the change of the dominant value.
    #[serde(default)]
    pub check_truncation: bool,
    /// Relative tolerance of the crosscheck on the dominant value.
    #[serde(default = "crosscheck_tol")]
    pub crosscheck_tol: f64,
}

fn crosscheck_tol() -> f64 {
    0.05
}

impl Default for StripBlock {
    fn default() -> Self {
        Self {
            half_width: DEFAULT_HALF_WIDTH,
            horizon: None,
            check_truncation: false,
            crosscheck_tol: crosscheck_tol(),
        }
    }
}

/// Rectangular `z` window on the strip operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudospectraBlock {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub n_re: usize,
    pub n_im: usize,
    #[serde(default = "pseudo_tol")]
    pub tol: f64,
    #[serde(default = "half_width")]
    pub half_width: usize,
}

fn pseudo_tol() -> f64 {
    pseudospectra::DEFAULT_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticsBlock {
    /// Strictly ascending.
    pub g_values: Vec<f64>,
    /// Grid size per `g`.
    pub n_values: Vec<usize>,
    /// Periods per `g`; chosen from `mu_target` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periods: Option<Vec<usize>>,
    #[serde(default = "mu_target")]
    pub mu_target: f64,
}

fn mu_target() -> f64 {
    0.1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructBlock {
    #[serde(default = "half_width")]
    pub half_width: usize,
    /// Index into the branches sorted by ascending `Re λ`.
    #[serde(default)]
    pub branch: usize,
}

impl Default for ReconstructBlock {
    fn default() -> Self {
        Self {
            half_width: DEFAULT_HALF_WIDTH,
            branch: 0,
        }
    }
}

/// Seeded hole-free oracle set used by `validate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateBlock {
    /// Random `(g, q, p0)` triples per grid size.
    #[serde(default = "triples")]
    pub triples: usize,
    /// `g` is drawn uniformly from this interval.
    #[serde(default = "g_interval")]
    pub g_interval: [f64; 2],
    /// Random states for the contraction check.
    #[serde(default = "states")]
    pub states: usize,
}

fn triples() -> usize {
    3
}
fn g_interval() -> [f64; 2] {
    [200.0, 800.0]
}
fn states() -> usize {
    20
}

impl Default for ValidateBlock {
    fn default() -> Self {
        Self {
            triples: triples(),
            g_interval: g_interval(),
            states: states(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.message().trim().to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Schema rules beyond what deserialization enforces.
    pub fn check(&self) -> Result<()> {
        self.problem().validate()?;
        if self.eigen.m < 2 {
            return Err(Error::Config("eigen.m must be >= 2".into()));
        }
        if let Some(s) = &self.sweep {
            s.q_list()?;
        }
        if let Some(s) = &self.strip {
            if s.half_width < 1 {
                return Err(Error::Config("strip.half_width must be >= 1".into()));
            }
            if let Some(t) = s.horizon {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::Config("strip.horizon must be positive".into()));
                }
            }
            if !(s.crosscheck_tol > 0.0) {
                return Err(Error::Config("strip.crosscheck_tol must be positive".into()));
            }
        }
        if let Some(p) = &self.pseudospectra {
            let finite = p.re.iter().chain(&p.im).all(|v| v.is_finite());
            if !finite || p.n_re == 0 || p.n_im == 0 || !(p.tol > 0.0) || p.half_width < 1 {
                return Err(Error::Config(
                    "pseudospectra needs a finite window, n_re, n_im, half_width >= 1 and tol > 0"
                        .into(),
                ));
            }
        }
        if let Some(a) = &self.asymptotics {
            self.asymptotic_configs_for(a)?;
        }
        if let Some(r) = &self.reconstruct {
            if r.half_width < 2 {
                return Err(Error::Config("reconstruct.half_width must be >= 2".into()));
            }
        }
        if let Some(v) = &self.validate {
            let [lo, hi] = v.g_interval;
            if v.triples == 0 || v.states == 0 || !(lo > 0.0 && hi >= lo && hi.is_finite()) {
                return Err(Error::Config(
                    "validate needs triples >= 1, states >= 1 and 0 < g_interval[0] <= g_interval[1]"
                        .into(),
                ));
            }
        }
        Ok(())
    }

    pub fn problem(&self) -> ProblemConfig {
        ProblemConfig {
            g: self.g,
            q: self.q,
            p0: self.p0,
            shape: self.shape,
            n: self.n,
            nt: self.nt,
            periods: self.periods,
            eigen: EigenSettings {
                m: self.eigen.m,
                tol: self.eigen.tol,
                seed: self.seed,
                nev: self.eigen.nev,
            },
            solver: SolverOptions {
                tol: self.solver.tol,
                maxit: self.solver.maxit,
                restart: self.solver.restart,
                stagnation_window: self.solver.stagnation_window,
            },
        }
    }

    pub fn sweep_block(&self) -> Result<&SweepBlock> {
        self.sweep
            .as_ref()
            .ok_or_else(|| Error::Config("missing [sweep] table".into()))
    }

    pub fn pseudospectra_block(&self) -> Result<&PseudospectraBlock> {
        self.pseudospectra
            .as_ref()
            .ok_or_else(|| Error::Config("missing [pseudospectra] table".into()))
    }

    pub fn asymptotics_block(&self) -> Result<&AsymptoticsBlock> {
        self.asymptotics
            .as_ref()
            .ok_or_else(|| Error::Config("missing [asymptotics] table".into()))
    }

    pub fn strip_block(&self) -> StripBlock {
        self.strip.unwrap_or_default()
    }

    pub fn reconstruct_block(&self) -> ReconstructBlock {
        self.reconstruct.unwrap_or_default()
    }

    pub fn validate_block(&self) -> ValidateBlock {
        self.validate.unwrap_or_default()
    }

    /// One problem per `g` of the `[asymptotics]` table.
    pub fn asymptotic_configs(&self) -> Result<Vec<ProblemConfig>> {
        self.asymptotic_configs_for(self.asymptotics_block()?)
    }

    fn asymptotic_configs_for(&self, a: &AsymptoticsBlock) -> Result<Vec<ProblemConfig>> {
        let k = a.g_values.len();
        if k == 0 || a.n_values.len() != k || a.periods.as_ref().is_some_and(|p| p.len() != k) {
            return Err(Error::Config(
                "asymptotics: g_values, n_values (and periods) must be non-empty and equally long"
                    .into(),
            ));
        }
        if !(a.mu_target > 0.0 && a.mu_target < 1.0) {
            return Err(Error::Config("asymptotics.mu_target must lie in (0, 1)".into()));
        }
        if self.shape.is_none() {
            return Err(Error::Config("asymptotics needs a hole".into()));
        }
        if a.g_values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("asymptotics.g_values must be strictly ascending".into()));
        }
        a.g_values
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                let mut cfg = self.problem();
                cfg.g = g;
                cfg.n = a.n_values[i];
                cfg.periods = match &a.periods {
                    Some(p) => p[i],
                    None => choose_periods(g, a.mu_target),
                };
                cfg.validate()?;
                Ok(cfg)
            })
            .collect()
    }
}

impl SweepBlock {
    pub fn q_list(&self) -> Result<Vec<f64>> {
        let q = match (&self.q_values, &self.q_range) {
            (Some(v), None) => v.clone(),
            (None, Some(r)) => r.values(),
            _ => {
                return Err(Error::Config(
                    "[sweep] needs exactly one of q_values and q_range".into(),
                ))
            }
        };
        if q.is_empty() || q.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("[sweep] needs at least one finite q".into()));
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "g = 20.0\nn = 16\n";

    #[test]
    fn defaults_fill_in() {
        let c = RunConfig::from_toml_str(MINIMAL).unwrap();
        let p = c.problem();
        assert_eq!(p.nt, DEFAULT_NT);
        assert_eq!(p.shape, HoleShape::None);
        assert_eq!(p.eigen.seed, 1);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml_str("g = 1.0\nn = 8\ncolour = 3\n").is_err());
        assert!(RunConfig::from_toml_str("g = 1.0\nn = 8\n[eigen]\nk = 3\n").is_err());
        assert!(RunConfig::from_toml_str("g = 1.0\nn = 8\n[strip]\nL = 3\n").is_err());
    }

    #[test]
    fn schema_rules() {
        assert!(RunConfig::from_toml_str("g = 0.0\nn = 8\n").is_err());
        assert!(RunConfig::from_toml_str("g = 1.0\nn = 8\n[shape]\nkind = \"disk\"\nradius = 0.7\n").is_err());
        let both = "g = 1.0\nn = 8\n[sweep]\nq_values = [0.0]\nq_range = { start = 0.0, stop = 1.0, count = 3 }\n";
        assert!(RunConfig::from_toml_str(both).is_err());
    }

    #[test]
    fn ranges_include_endpoints() {
        let r = Range {
            start: 0.0,
            stop: 1.0,
            count: 5,
        };
        assert_eq!(r.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn asymptotic_periods_follow_target() {
        let text = "g = 1.0\nn = 8\n[shape]\nkind = \"disk\"\nradius = 0.25\n\
                    [asymptotics]\ng_values = [250.0, 500.0]\nn_values = [64, 64]\n";
        let c = RunConfig::from_toml_str(text).unwrap();
        let cfgs = c.asymptotic_configs().unwrap();
        assert_eq!(cfgs.iter().map(|c| c.periods).collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn output_dir_is_not_echoed() {
        let c = RunConfig::from_toml_str("g = 1.0\nn = 8\noutput_dir = \"x\"\n").unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert!(!json.contains("output_dir"));
    }
}
