//! Acceptance criteria A1-A8 reduced to pinned numeric gates.
//!
//! A [`Session`] runs the criteria one at a time and collects the
//! contraction and accretivity data that A6 checks over every configuration
//! the other criteria touched.

use std::f64::consts::{PI, TAU};
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::time::Instant;

use btfloquet::cli::validate::{contraction_excess, oracle_triples, plane_wave_check, weighted_shift_row, ORACLE_SIZES};
use btfloquet::cli::{execute, Command, RunConfig};
use btfloquet::geometry::HoleShape;
use btfloquet::numcore::{arnoldi, rng_stream, solve, SolverOptions, SparseMatrix};
use btfloquet::operators::ProblemConfig;
use btfloquet::propagator::MonodromyContext;
use btfloquet::spectra::{
    airy_first_zero, fold, half_abs_first_zero, imag_offset_target, localization_side,
    monodromy_spectrum_in, no_hole_mode_factor, pseudo_invariance_check, pseudospectra_grid,
    reconstruct_eigenfunction, report_from_values, strip_problem, strip_spectrum, unfold,
    BranchEigenvalue, RowInput,
};
use btfloquet::Error;
use nalgebra::DVector;
use num_complex::Complex64;

/// Tolerances of the criteria.
pub mod tol {
    pub const A1_PLANE_WAVE: f64 = 1e-12;
    pub const A1_RATE_REL: f64 = 0.02;
    pub const A2_ORACLE: f64 = 1e-8;
    pub const A3_EXPONENT: f64 = 2.0 / 3.0;
    pub const A3_EXPONENT_TOL: f64 = 0.05;
    pub const A3_RE_REL: f64 = 0.15;
    pub const A3_IM_ABS: f64 = 0.5;
    pub const A4_REL: f64 = 0.05;
    pub const A5_SPREAD: f64 = 10.0;
    pub const A5_MARGIN: f64 = 0.35;
    pub const A6_CONTRACTION: f64 = 1e-12;
    pub const A6_MODULUS: f64 = 1e-10;
    pub const A6_ACCRETIVE: f64 = 1e-10;
    pub const A7_RESIDUAL: f64 = 5e-2;
    pub const A7_LOCALIZED: f64 = 0.9;
    pub const A8_ARNOLDI: f64 = 1e-8;
    pub const A8_SOLVE: f64 = 1e-8;
    pub const A8_AIRY_ZERO: f64 = -2.3381074;
    pub const A8_AIRY_TOL: f64 = 1e-6;
    pub const A8_UNFOLD: f64 = 1e-12;
}

/// Wall-clock budgets in seconds; A3 and A6 have none.
pub mod budget {
    pub const A1: f64 = 60.0;
    pub const A2: f64 = 60.0;
    pub const A4: f64 = 300.0;
    pub const A5: f64 = 900.0;
    pub const A7: f64 = 300.0;
    pub const A8: f64 = 60.0;
}

const SEED: u64 = 1;
const RADIUS: f64 = 0.25;

#[derive(Debug, Clone)]
pub struct Gate {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl Gate {
    pub fn at_most(label: &str, value: f64, limit: f64) -> Self {
        Self {
            label: label.into(),
            passed: value <= limit,
            detail: format!("{value:.3e} <= {limit:.3e}"),
        }
    }

    pub fn at_least(label: &str, value: f64, limit: f64) -> Self {
        Self {
            label: label.into(),
            passed: value >= limit,
            detail: format!("{value:.4e} >= {limit:.4e}"),
        }
    }

    pub fn holds(label: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            passed,
            detail: detail.into(),
        }
    }

    pub fn error(label: &str, e: impl Display) -> Self {
        Self::holds(label, false, format!("error: {e}"))
    }
}

#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub seconds: f64,
    pub budget: Option<f64>,
    pub gates: Vec<Gate>,
    /// Extra report lines that are not gates.
    pub notes: Vec<String>,
}

impl Criterion {
    fn new(id: &'static str, title: &'static str, budget: Option<f64>) -> Self {
        Self {
            id,
            title,
            seconds: 0.0,
            budget,
            gates: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn within_budget(&self) -> bool {
        self.budget.is_none_or(|b| self.seconds <= b)
    }

    pub fn passed(&self) -> bool {
        !self.gates.is_empty() && self.gates.iter().all(|g| g.passed) && self.within_budget()
    }

    /// One status line.
    pub fn line(&self) -> String {
        let failed: Vec<&str> = self
            .gates
            .iter()
            .filter(|g| !g.passed)
            .map(|g| g.label.as_str())
            .collect();
        let mut s = format!(
            "{} {} {} ({:.1} s",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            self.seconds
        );
        if let Some(b) = self.budget {
            s += &format!(" of {b:.0} s");
        }
        s.push(')');
        if !self.within_budget() {
            s += " over budget";
        }
        if !failed.is_empty() {
            s += &format!(" failed: {}", failed.join("; "));
        }
        s
    }

    /// Gate and note lines under the status line.
    pub fn details(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .gates
            .iter()
            .map(|g| format!("    [{}] {}: {}", if g.passed { "ok" } else { "no" }, g.label, g.detail))
            .collect();
        out.extend(self.notes.iter().map(|n| format!("    {n}")));
        out
    }
}

/// Worst invariant values per configuration, gathered for A6.
#[derive(Debug, Clone, Default)]
pub struct Invariants {
    /// `max ||K w|| / ||w|| - 1`.
    pub contraction: Vec<(String, f64)>,
    /// `max |μ| - 1`.
    pub modulus: Vec<(String, f64)>,
    /// `min Re λ / g`.
    pub accretive: Vec<(String, f64)>,
}

impl Invariants {
    fn branches(&mut self, label: &str, g: f64, branches: &[BranchEigenvalue]) {
        if branches.is_empty() {
            return;
        }
        let m = branches.iter().map(|b| b.mu.norm() - 1.0).fold(f64::NEG_INFINITY, f64::max);
        let r = branches.iter().map(|b| b.lambda.re / g).fold(f64::INFINITY, f64::min);
        self.modulus.push((label.into(), m));
        self.accretive.push((label.into(), r));
    }

    fn contraction_of(&mut self, label: &str, ctx: &MonodromyContext, states: usize) {
        let v = contraction_excess(ctx, states, SEED).unwrap_or(f64::INFINITY);
        self.contraction.push((label.into(), v));
    }

    fn contraction_cfg(&mut self, label: &str, cfg: &ProblemConfig, states: usize) {
        match MonodromyContext::new(cfg) {
            Ok(ctx) => self.contraction_of(label, &ctx, states),
            Err(_) => self.contraction.push((label.into(), f64::INFINITY)),
        }
    }
}

pub struct Session {
    configs: PathBuf,
    pub invariants: Invariants,
    /// Smallest `Re λ` over the A3 branches at `g = 1000`.
    pub min_re_g1000: Option<f64>,
}

fn disk() -> HoleShape {
    HoleShape::disk(RADIUS).expect("valid radius")
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_secs_f64())
}

impl Session {
    /// `configs` is the directory of bundled run configurations.
    pub fn new(configs: &Path) -> Self {
        Self {
            configs: configs.to_path_buf(),
            invariants: Invariants::default(),
            min_re_g1000: None,
        }
    }

    fn load(&self, name: &str) -> Result<RunConfig, Error> {
        RunConfig::load(&self.configs.join(name))
    }

    pub fn a1(&mut self) -> Criterion {
        let mut c = Criterion::new("A1", "integrator/oracle exactness", Some(budget::A1));
        let mut cfg = ProblemConfig::new(TAU, 0.0, HoleShape::None, 64);
        cfg.nt = 512;
        cfg.solver.tol = 1e-14;
        let ((), secs) = timed(|| {
            match plane_wave_check(&cfg) {
                Ok(ch) => c.gates.push(Gate::at_most("plane wave vs step product", ch.value, tol::A1_PLANE_WAVE)),
                Err(e) => c.gates.push(Gate::error("plane wave vs step product", e)),
            }
            let rho = no_hole_mode_factor(&cfg, 0, 0);
            let rate = -rho.ln() / cfg.t_g();
            let exact = 4.0 * PI * PI / 3.0;
            let mut g = Gate::at_most("continuum rate", (rate - exact).abs() / exact, tol::A1_RATE_REL);
            g.detail = format!("rate {rate:.6} vs {exact:.6}: {}", g.detail);
            c.gates.push(g);
        });
        c.seconds = secs;
        let rho = no_hole_mode_factor(&cfg, 0, 0);
        self.invariants.modulus.push(("A1".into(), rho.abs() - 1.0));
        self.invariants.accretive.push(("A1".into(), -rho.abs().ln() / cfg.t_g() / cfg.g));
        self.invariants.contraction_cfg("A1", &cfg, 3);
        c
    }

    pub fn a2(&mut self) -> Criterion {
        let mut c = Criterion::new("A2", "weighted-shift oracle", Some(budget::A2));
        let mut base = ProblemConfig::new(200.0, 0.0, HoleShape::None, 2);
        base.eigen.seed = SEED;
        let triples = oracle_triples(SEED, 3, [200.0, 800.0]);
        let (rows, secs) = timed(|| {
            let mut rows = Vec::new();
            for &(g, q, p0) in &triples {
                for n in ORACLE_SIZES {
                    rows.push(weighted_shift_row(&base, g, q, p0, n));
                }
            }
            rows
        });
        c.seconds = secs;
        let mut worst: f64 = 0.0;
        let mut ok_rows = Vec::new();
        for r in rows {
            match r {
                Ok(r) => {
                    worst = worst.max(r.deviation);
                    ok_rows.push(r);
                }
                Err(e) => c.gates.push(Gate::error("oracle row", e)),
            }
        }
        c.gates.push(Gate::at_most("Ritz moduli vs closed form", worst, tol::A2_ORACLE));
        let mut rising = 0;
        for t in ok_rows.chunks(ORACLE_SIZES.len()) {
            rising += t
                .windows(2)
                .filter(|w| w[1].modulus.partial_cmp(&w[0].modulus) != Some(std::cmp::Ordering::Less))
                .count();
            c.notes.push(format!(
                "g={:.3} q={:.4} p0={:.4}: moduli {}",
                t[0].g,
                t[0].q,
                t[0].p0,
                t.iter().map(|r| format!("N={} {:.6e}", r.n, r.modulus)).collect::<Vec<_>>().join(", ")
            ));
        }
        c.gates.push(Gate::holds(
            "moduli strictly decrease as N doubles",
            rising == 0 && ok_rows.len() == triples.len() * ORACLE_SIZES.len(),
            format!("{rising} non-decreasing steps"),
        ));

        for r in &ok_rows {
            let label = format!("A2 g={:.1} N={}", r.g, r.n);
            let t_g = TAU / r.g;
            self.invariants.modulus.push((label.clone(), r.ritz_max_modulus - 1.0));
            self.invariants
                .accretive
                .push((label.clone(), -r.ritz_max_modulus.ln() / t_g / r.g));
            let mut cfg = base.clone();
            cfg.g = r.g;
            cfg.q = r.q;
            cfg.p0 = r.p0;
            cfg.n = r.n;
            self.invariants.contraction_cfg(&label, &cfg, 5);
        }
        c
    }

    pub fn a3(&mut self) -> Criterion {
        let mut c = Criterion::new("A3", "Airy asymptotics", None);
        let configs = match self.load("asymptotics.toml").and_then(|r| r.asymptotic_configs()) {
            Ok(v) => v,
            Err(e) => {
                c.gates.push(Gate::error("configuration", e));
                return c;
            }
        };
        let start = Instant::now();
        let mut rows = Vec::new();
        for cfg in &configs {
            let label = format!("A3 g={}", cfg.g);
            let mut row = RowInput {
                n: cfg.n,
                periods: cfg.periods,
                branch_count: 0,
                ..RowInput::new(cfg.g, None)
            };
            let t = Instant::now();
            let result = MonodromyContext::new(cfg).and_then(|ctx| {
                let sp = monodromy_spectrum_in(&ctx)?;
                Ok((ctx, sp))
            });
            match result {
                Ok((ctx, sp)) => {
                    row.lambda_min = sp.branches.first().map(|b| b.lambda);
                    row.side = sp.vectors.first().map(|v| localization_side(ctx.grid(), v));
                    row.branch_count = sp.branches.len();
                    self.invariants.branches(&label, cfg.g, &sp.branches);
                    if cfg.g == 1000.0 {
                        self.min_re_g1000 = row.lambda_min.map(|l| l.re);
                    }
                    let secs = t.elapsed().as_secs_f64();
                    self.invariants.contraction_of(&label, &ctx, 3);
                    eprintln!("  A3 g={} N={} s={} done in {secs:.0} s", cfg.g, cfg.n, cfg.periods);
                }
                Err(e) => {
                    eprintln!("  A3 g={} failed: {e}", cfg.g);
                    c.notes.push(format!("g={}: {e}", cfg.g));
                }
            }
            rows.push(row);
        }
        c.seconds = start.elapsed().as_secs_f64();

        let rep = report_from_values(&rows, RADIUS, 0.0);
        c.gates.push(Gate::holds(
            "leftmost branch found at every g",
            rep.gaps.is_empty(),
            format!("gaps at {:?}", rep.gaps),
        ));
        match rep.fit {
            Some(f) => {
                let mut g = Gate::at_most(
                    "power-law exponent",
                    (f.exponent - tol::A3_EXPONENT).abs(),
                    tol::A3_EXPONENT_TOL,
                );
                g.detail = format!("exponent {:.4}, |p - 2/3| {}", f.exponent, g.detail);
                c.gates.push(g);
            }
            None => c.gates.push(Gate::holds("power-law exponent", false, "no fit")),
        }
        let last = rep.rows.last().and_then(|r| r.scaling.map(|s| (r, s)));
        match last {
            Some((r, s)) => {
                let mut g = Gate::at_most(
                    "Re scaled at largest g",
                    (s.re_scaled / r.target_re - 1.0).abs(),
                    tol::A3_RE_REL,
                );
                g.detail = format!("{:.5} vs {:.5}: rel {}", s.re_scaled, r.target_re, g.detail);
                c.gates.push(g);
                let mut g = Gate::at_most(
                    "Im offset at largest g",
                    (s.im_scaled - imag_offset_target()).abs(),
                    tol::A3_IM_ABS,
                );
                g.detail = format!(
                    "|Im λ - side g r| g^(-2/3) = {:.5} (side {:+}, signed {:.5}, unsigned-side formula {:.5}) vs {:.5}: {}",
                    s.im_scaled,
                    s.side,
                    s.signed_offset,
                    s.literal_im_scaled,
                    imag_offset_target(),
                    g.detail
                );
                c.gates.push(g);
            }
            None => c.gates.push(Gate::holds("Re/Im scaled at largest g", false, "no value")),
        }
        let errs: Vec<f64> = rep
            .rows
            .iter()
            .map(|r| r.re_ratio().map_or(f64::NAN, |x| (x - 1.0).abs()))
            .collect();
        c.gates.push(Gate::holds(
            "ratio to target improves monotonically in g",
            errs.windows(2).all(|w| w[1] < w[0]),
            format!("|ratio - 1| = {:?}", errs.iter().map(|e| format!("{e:.4}")).collect::<Vec<_>>()),
        ));
        for r in &rep.rows {
            match (r.lambda_min, r.scaling) {
                (Some(l), Some(s)) => c.notes.push(format!(
                    "g={} N={} s={}: λ_min = {:.4} {:+.4}i, Re g^(-2/3) = {:.5}, Im offset = {:.5}, branches {}",
                    r.g, r.n, r.periods, l.re, l.im, s.re_scaled, s.im_scaled, r.branch_count
                )),
                _ => c.notes.push(format!("g={}: no branch", r.g)),
            }
        }
        c.notes.push(format!(
            "targets: |a1|/2 = {:.5}, (√3/2)|a1| = {:.5}",
            half_abs_first_zero(),
            imag_offset_target()
        ));
        c
    }

    pub fn a4(&mut self) -> Criterion {
        let mut c = Criterion::new("A4", "pseudo-invariance cross-check", Some(budget::A4));
        let run = match self.load("crosscheck.toml") {
            Ok(r) => r,
            Err(e) => {
                c.gates.push(Gate::error("configuration", e));
                return c;
            }
        };
        let cfg = run.problem();
        let strip = run.strip_block();
        let t = Instant::now();
        let mono = MonodromyContext::new(&cfg).and_then(|ctx| Ok((monodromy_spectrum_in(&ctx)?, ctx)));
        let strip_sp = strip_spectrum(&cfg, strip.half_width, strip.horizon);
        c.seconds = t.elapsed().as_secs_f64();
        match (mono, strip_sp) {
            (Ok((m, ctx)), Ok(s)) => {
                let rep = pseudo_invariance_check(&m.branches, &s.branches, cfg.g, tol::A4_REL);
                match (rep.dominant, rep.dominant_relative) {
                    (Some(p), Some(rel)) => {
                        let mut g = Gate::at_most("dominant branch modulo ig", rel, tol::A4_REL);
                        g.detail = format!(
                            "monodromy {:.6} {:+.6}i, strip {:.6} {:+.6}i, rel {}",
                            p.mono.re, p.mono.im, p.strip.re, p.strip.im, g.detail
                        );
                        c.gates.push(g);
                    }
                    _ => c.gates.push(Gate::holds("dominant branch modulo ig", false, "no pair")),
                }
                self.invariants.branches("A4", cfg.g, &m.branches);
                self.invariants.contraction_of("A4", &ctx, 5);
            }
            (Err(e), _) | (_, Err(e)) => c.gates.push(Gate::error("spectra", e)),
        }
        c
    }

    pub fn a5(&mut self) -> Criterion {
        let mut c = Criterion::new("A5", "spectral exclusion / resolvent bound", Some(budget::A5));
        let g = 1000.0;
        let mut cfg = ProblemConfig::new(g, 0.0, disk(), 64);
        cfg.eigen.seed = SEED;
        let scale = g.powf(2.0 / 3.0);
        let re = 0.5 * half_abs_first_zero() * scale;
        let zs: Vec<Complex64> = [0.0, 0.125, 0.25, 0.375]
            .iter()
            .map(|f| Complex64::new(re, f * g))
            .collect();
        let (grid, secs) = timed(|| {
            let (_, a) = strip_problem(&cfg, 4)?;
            pseudospectra_grid(&a, &zs, 1e-3, SEED)
        });
        c.seconds = secs;
        match grid {
            Ok(grid) => {
                let scaled: Vec<f64> = grid.points.iter().map(|p| p.resolvent_norm * scale).collect();
                c.gates.push(Gate::holds(
                    "all points converged",
                    grid.all_converged(),
                    format!(
                        "{}/{} converged",
                        grid.points.iter().filter(|p| p.converged).count(),
                        grid.points.len()
                    ),
                ));
                let med = median(&scaled);
                let max = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mut gate = Gate::at_most("max below 10x median", max / med, tol::A5_SPREAD);
                gate.detail = format!("max {max:.4e}, median {med:.4e}, ratio {}", gate.detail);
                c.gates.push(gate);
                for (p, s) in grid.points.iter().zip(&scaled) {
                    c.notes.push(format!(
                        "z = {:.3} {:+.1}i: ||R|| g^(2/3) = {s:.5e}, {} iterations",
                        p.z.re, p.z.im, p.iterations
                    ));
                }
            }
            Err(e) => c.gates.push(Gate::error("pseudospectra", e)),
        }
        let bound = (half_abs_first_zero() - tol::A5_MARGIN) * scale;
        match self.min_re_g1000 {
            Some(v) => {
                let mut gate = Gate::at_least("monodromy Re λ above exclusion line", v, bound);
                gate.detail = format!("min Re λ at g=1000, q=0 (from A3): {}", gate.detail);
                c.gates.push(gate);
            }
            None => c.gates.push(Gate::holds(
                "monodromy Re λ above exclusion line",
                false,
                "no monodromy branch at g=1000 available",
            )),
        }
        c
    }

    pub fn a6(&self) -> Criterion {
        let mut c = Criterion::new("A6", "contraction/accretivity invariants", None);
        let inv = &self.invariants;
        let worst = |v: &[(String, f64)], max: bool| -> Option<(String, f64)> {
            v.iter()
                .cloned()
                .reduce(|a, b| if (b.1 > a.1) == max && b.1 != a.1 { b } else { a })
        };
        let mut push = |label: &str, w: Option<(String, f64)>, limit: f64, max: bool, n: usize| match w {
            Some((at, v)) => {
                let mut g = if max {
                    Gate::at_most(label, v, limit)
                } else {
                    Gate::at_least(label, v, limit)
                };
                g.passed &= v.is_finite();
                g.detail = format!("worst {} at {at} over {n} configs", g.detail);
                c.gates.push(g);
            }
            None => c.gates.push(Gate::holds(label, false, "no data")),
        };
        push(
            "||K w|| <= (1 + 1e-12) ||w||",
            worst(&inv.contraction, true),
            tol::A6_CONTRACTION,
            true,
            inv.contraction.len(),
        );
        push("|μ| <= 1 + 1e-10", worst(&inv.modulus, true), tol::A6_MODULUS, true, inv.modulus.len());
        push(
            "Re λ >= -1e-10 g",
            worst(&inv.accretive, false),
            -tol::A6_ACCRETIVE,
            false,
            inv.accretive.len(),
        );
        c
    }

    pub fn a7(&mut self) -> Criterion {
        let mut c = Criterion::new("A7", "eigenfunction reconstruction", Some(budget::A7));
        let run = match self.load("reconstruct.toml") {
            Ok(r) => r,
            Err(e) => {
                c.gates.push(Gate::error("configuration", e));
                return c;
            }
        };
        let cfg = run.problem();
        let block = run.reconstruct_block();
        let (rec, secs) = timed(|| {
            let ctx = MonodromyContext::new(&cfg)?;
            let sp = monodromy_spectrum_in(&ctx)?;
            let k = block.branch;
            let (b, w0) = match (sp.branches.get(k), sp.vectors.get(k)) {
                (Some(b), Some(w)) => (b.clone(), w.clone()),
                _ => return Err(Error::NotConverged(format!("branch {k} not found"))),
            };
            self.invariants.branches("A7", cfg.g, &sp.branches);
            reconstruct_eigenfunction(&cfg, b.mu, &w0, block.half_width)
        });
        c.seconds = secs;
        match rec {
            Ok(r) => {
                let mut g = Gate::at_most("windowed residual", r.residual, tol::A7_RESIDUAL);
                g.detail = format!("λ0 = {:.6} {:+.6}i: {}", r.lambda.re, r.lambda.im, g.detail);
                c.gates.push(g);
                c.gates.push(Gate::at_least("share of ||u||² in |x| <= 2", r.localized_fraction, tol::A7_LOCALIZED));
                c.notes.push(format!(
                    "pairing with one-cell translate {:.3e}, input pair residual {:.3e}",
                    r.pairing_ratio, r.pair_residual
                ));
            }
            Err(e) => c.gates.push(Gate::error("reconstruction", e)),
        }
        c
    }

    pub fn a8(&mut self) -> Criterion {
        let mut c = Criterion::new("A8", "kernel unit suite", Some(budget::A8));
        let t = Instant::now();
        c.gates.push(arnoldi_gate());
        c.gates.push(solve_gate());
        let z = airy_first_zero();
        let mut g = Gate::at_most("airy_first_zero", (z - tol::A8_AIRY_ZERO).abs(), tol::A8_AIRY_TOL);
        g.detail = format!("{z:.10}: {}", g.detail);
        c.gates.push(g);
        c.gates.push(unfold_gate());
        c.gates.push(self.rerun_gate());
        c.seconds = t.elapsed().as_secs_f64();
        c
    }

    fn rerun_gate(&self) -> Gate {
        let label = "byte-identical CSV reruns";
        let run = match self.load("spectrum.toml") {
            Ok(r) => r,
            Err(e) => return Gate::error(label, e),
        };
        let dirs = (tempfile::tempdir(), tempfile::tempdir());
        let (Ok(a), Ok(b)) = dirs else {
            return Gate::holds(label, false, "cannot create temporary directories");
        };
        for d in [a.path(), b.path()] {
            if let Err(e) = execute(Command::Spectrum, &run, d, false) {
                return Gate::error(label, e);
            }
        }
        let mut compared = 0;
        let entries = match std::fs::read_dir(a.path()) {
            Ok(e) => e,
            Err(e) => return Gate::error(label, e),
        };
        for entry in entries.flatten() {
            let name = entry.file_name();
            if !name.to_string_lossy().ends_with(".csv") {
                continue;
            }
            let x = std::fs::read(a.path().join(&name));
            let y = std::fs::read(b.path().join(&name));
            match (x, y) {
                (Ok(x), Ok(y)) if x == y => compared += 1,
                _ => return Gate::holds(label, false, format!("{} differs", name.to_string_lossy())),
            }
        }
        Gate::holds(label, compared > 0, format!("{compared} CSV files identical"))
    }
}

/// Upper triangular with diagonal `0.8^k e^{0.7ik}` and random entries above.
fn arnoldi_gate() -> Gate {
    let mut worst: f64 = 0.0;
    for seed in 0..8u64 {
        let n = 12 + 2 * seed as usize;
        let diag: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(0.8f64.powi(k as i32), 0.7 * k as f64))
            .collect();
        let mut rng = rng_stream(seed);
        let mut t: Vec<_> = diag.iter().enumerate().map(|(i, &d)| (i, i, d)).collect();
        for i in 0..n {
            for j in i + 1..(i + 4).min(n) {
                t.push((i, j, 0.3 * rng.next_c64()));
            }
        }
        let a = SparseMatrix::from_triplets(n, t).expect("valid triplets");
        match arnoldi(|x| a.spmv(x), n, n, 1e-10, seed) {
            Ok(r) => {
                for (k, d) in diag.iter().take(n / 2).enumerate() {
                    worst = worst.max(r.pairs.get(k).map_or(f64::INFINITY, |p| (p.value - d).norm()));
                }
            }
            Err(e) => return Gate::error("Arnoldi on triangular matrices", e),
        }
    }
    Gate::at_most("Arnoldi on triangular matrices", worst, tol::A8_ARNOLDI)
}

/// Sparse, strictly diagonally dominant, non-Hermitian systems against
/// dense LU.
fn solve_gate() -> Gate {
    let mut worst: f64 = 0.0;
    for seed in 0..6u64 {
        let n: usize = 120;
        let mut rng = rng_stream(seed);
        let mut t = Vec::new();
        for i in 0..n {
            let mut off = 0.0;
            for j in [i.wrapping_sub(1), i + 1, (i * 7 + 3) % n] {
                if j < n && j != i {
                    let v = rng.next_c64();
                    off += v.norm();
                    t.push((i, j, v));
                }
            }
            t.push((i, i, Complex64::new(off + 0.5 + rng.next_f64(), 2.0 * rng.next_f64() - 1.0)));
        }
        let a = SparseMatrix::from_triplets(n, t).expect("valid triplets");
        let b = rng.complex_vec(n);
        let exact = match a.to_dense().lu().solve(&DVector::from_column_slice(&b)) {
            Some(x) => x,
            None => return Gate::holds("iterative vs dense solve", false, "singular test matrix"),
        };
        match solve(&a, &b, &SolverOptions::with_tol(1e-12, 2000)) {
            Ok(s) => {
                let diff: f64 = s.x.iter().zip(exact.iter()).map(|(x, y)| (x - y).norm_sqr()).sum();
                let den: f64 = exact.iter().map(|y| y.norm_sqr()).sum();
                worst = worst.max((diff / den).sqrt());
            }
            Err(e) => return Gate::error("iterative vs dense solve", e),
        }
    }
    Gate::at_most("iterative vs dense solve", worst, tol::A8_SOLVE)
}

/// `exp(-t unfold(μ)) = μ` and `fold(x + k g) = fold(x)` for seeded values.
fn unfold_gate() -> Gate {
    let mut rng = rng_stream(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let g = 1.0 + 999.0 * rng.next_f64();
        let t = TAU / g;
        let r = 1e-6 + (1.0 - 1e-6) * rng.next_f64();
        let mu = Complex64::from_polar(r, TAU * rng.next_f64() - PI);
        match unfold(mu, t) {
            Ok(l) => {
                worst = worst.max(((-t * l).exp() - mu).norm() / r);
                let k = (rng.next_f64() * 10.0).floor() - 5.0;
                let shifted = fold(l.im + k * g, g);
                worst = worst.max((shifted - l.im).abs() / g);
            }
            Err(e) => return Gate::error("unfold/refold round trip", e),
        }
    }
    Gate::at_most("unfold/refold round trip", worst, tol::A8_UNFOLD)
}
