//! Subcommand implementations. Each one computes first and hands its files
//! to a [`RunOutputs`] collector that writes them together at the end.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use serde_json::{json, Value};

use super::config::RunConfig;
use super::output::{
    num, spectrum_table, Provenance, RunOutputs, Table, ASYMPTOTICS_COLUMNS, PSEUDOSPECTRA_COLUMNS,
};
use super::validate::run_validation;
use super::{svg, Command};
use crate::error::{Error, Result};
use crate::spectra::{
    asymptotic_report, distance_mod_ig, monodromy_spectrum, pseudo_invariance_check,
    pseudospectra_grid, reconstruct_eigenfunction, reconstruction_grid, strip_problem,
    strip_spectrum, strip_spectrum_of, sweep_q, z_window, BranchEigenvalue, TruncationCheck,
    SUBSET_CAVEAT,
};
use crate::TOOL_VERSION;

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    /// Outputs were written but a mandatory computation did not converge.
    Numerical(String),
    /// Outputs were written but a check failed.
    Validation(String),
}

impl Status {
    fn label(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Numerical(_) => "numerical_failure",
            Status::Validation(_) => "validation_failure",
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub status: Status,
    pub summary: Value,
}

/// Runs `command` on a checked configuration and writes its files to `out`.
pub fn execute(command: Command, cfg: &RunConfig, out: &Path, plots: bool) -> Result<Outcome> {
    cfg.check()?;
    let start = Instant::now();
    let mut outputs = RunOutputs::new(out);
    let partial = match command {
        Command::Spectrum => spectrum(cfg, &mut outputs)?,
        Command::Sweep => sweep(cfg, &mut outputs, plots)?,
        Command::Strip => strip(cfg, &mut outputs)?,
        Command::Crosscheck => crosscheck(cfg, &mut outputs)?,
        Command::Reconstruct => reconstruct(cfg, &mut outputs)?,
        Command::Pseudospectra => pseudospectra(cfg, &mut outputs, plots)?,
        Command::Asymptotics => asymptotics(cfg, &mut outputs)?,
        Command::Validate => validate(cfg, &mut outputs)?,
    };

    let mut files: Vec<String> = outputs.names().map(str::to_string).collect();
    files.push("summary.json".into());
    let finished = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let summary = json!({
        "tool": TOOL_VERSION,
        "command": command.name(),
        "config": cfg,
        "caveat": partial.caveat,
        "status": partial.status.label(),
        "results": partial.results,
        "files": files,
        "wall_seconds": start.elapsed().as_secs_f64(),
        "finished_unix": finished,
    });
    outputs.add_json("summary.json", &summary);
    let files = outputs.flush()?;
    Ok(Outcome {
        files,
        status: partial.status,
        summary,
    })
}

/// What a command reports besides its files.
struct Partial {
    results: Value,
    status: Status,
    caveat: Option<&'static str>,
}

fn c(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn branch_json(b: &BranchEigenvalue) -> Value {
    json!({"lambda": c(b.lambda), "mu": c(b.mu), "residual": b.residual, "q": b.q, "s": b.s})
}

fn spectrum(cfg: &RunConfig, out: &mut RunOutputs) -> Result<Partial> {
    let problem = cfg.problem();
    let sp = monodromy_spectrum(&problem)?;
    let prov = Provenance::new(cfg, Some(SUBSET_CAVEAT));
    out.add_csv("spectrum.csv", &spectrum_table(&sp.branches), &prov);
    let status = if sp.detected {
        Status::Ok
    } else {
        Status::Numerical("no Ritz pair of the monodromy converged".into())
    };
    Ok(Partial {
        results: json!({
            "branches": sp.branches.len(),
            "detected": sp.detected,
            "krylov_dimension": sp.krylov_dimension,
            "ritz_converged": sp.ritz_converged,
            "periods_applied": sp.periods_applied,
            "solver_iterations": sp.solver_iterations,
            "dominant": sp.branches.first().map(branch_json),
        }),
        status,
        caveat: Some(SUBSET_CAVEAT),
    })
}

fn sweep(cfg: &RunConfig, out: &mut RunOutputs, plots: bool) -> Result<Partial> {
    let qs = cfg.sweep_block()?.q_list()?;
    let res = sweep_q(&cfg.problem(), &qs)?;
    let prov = Provenance::new(cfg, Some(SUBSET_CAVEAT));
    let all: Vec<BranchEigenvalue> = res.points.iter().flat_map(|p| p.branches.clone()).collect();
    out.add_csv("spectrum.csv", &spectrum_table(&all), &prov);

    let mut curves = Table::new(&["curve", "q", "re_lambda", "im_lambda"]);
    let mut plot_curves = Vec::new();
    for cv in &res.curves {
        let mut pts = Vec::new();
        for &(k, j) in &cv.members {
            let l = res.points[k].branches[j].lambda;
            let q = res.points[k].q;
            curves.push(vec![cv.id.to_string(), num(q), num(l.re), num(l.im)]);
            pts.push((q, l.re, l.im));
        }
        plot_curves.push(pts);
    }
    out.add_csv("curves.csv", &curves, &prov);
    if plots {
        out.add("spectral_curves.svg", svg::spectral_curves(&plot_curves));
    }

    let failures = res.failures();
    let status = if failures == 0 {
        Status::Ok
    } else {
        Status::Numerical(format!("{failures} of {} q values failed", qs.len()))
    };
    Ok(Partial {
        results: json!({
            "q_values": qs,
            "branches_per_q": res.points.iter().map(|p| p.branches.len()).collect::<Vec<_>>(),
            "failures": res.points.iter().filter_map(|p| p.failure.as_ref().map(|f| json!({"q": p.q, "error": f}))).collect::<Vec<_>>(),
            "seconds_per_q": res.points.iter().map(|p| p.seconds).collect::<Vec<_>>(),
            "curves": res.curves.len(),
            "births": res.matches.iter().map(|m| m.births.len()).sum::<usize>(),
            "deaths": res.matches.iter().map(|m| m.deaths.len()).sum::<usize>(),
        }),
        status,
        caveat: Some(SUBSET_CAVEAT),
    })
}

fn strip(cfg: &RunConfig, out: &mut RunOutputs) -> Result<Partial> {
    let problem = cfg.problem();
    let blk = cfg.strip_block();
    let sp = strip_spectrum(&problem, blk.half_width, blk.horizon)?;
    let truncation = if blk.check_truncation {
        let wide = strip_spectrum(&problem, blk.half_width + 2, blk.horizon)?;
        let lambda = sp.dominant().map(|b| b.lambda);
        let lambda_wider = wide.dominant().map(|b| b.lambda);
        Some(TruncationCheck {
            half_width: blk.half_width,
            lambda,
            lambda_wider,
            relative_change: match (lambda, lambda_wider) {
                (Some(a), Some(b)) => Some(distance_mod_ig(a, b, problem.g) / a.norm()),
                _ => None,
            },
        })
    } else {
        None
    };
    let prov = Provenance::new(cfg, Some(SUBSET_CAVEAT));
    out.add_csv("spectrum.csv", &spectrum_table(&sp.branches), &prov);
    let status = if sp.detected {
        Status::Ok
    } else {
        Status::Numerical("no Ritz pair of the strip semigroup converged".into())
    };
    Ok(Partial {
        results: json!({
            "branches": sp.branches.len(),
            "dim": sp.dim,
            "half_width": sp.half_width,
            "horizon": sp.horizon,
            "krylov_dimension": sp.krylov_dimension,
            "ritz_converged": sp.ritz_converged,
            "dominant": sp.dominant().map(branch_json),
            "truncation": truncation,
        }),
        status,
        caveat: Some(SUBSET_CAVEAT),
    })
}

fn crosscheck(cfg: &RunConfig, out: &mut RunOutputs) -> Result<Partial> {
    let problem = cfg.problem();
    let blk = cfg.strip_block();
    let mono = monodromy_spectrum(&problem)?;
    let (_, a) = strip_problem(&problem, blk.half_width)?;
    let strip = strip_spectrum_of(&problem, &a, blk.half_width, blk.horizon)?;
    let scale = mono.branches.first().map_or(1.0, |b| b.lambda.norm());
    let report = pseudo_invariance_check(&mono.branches, &strip.branches, problem.g, blk.crosscheck_tol * scale);

    let prov = Provenance::new(cfg, Some(SUBSET_CAVEAT));
    let mut both = mono.branches.clone();
    both.extend(strip.branches.iter().cloned());
    out.add_csv("spectrum.csv", &spectrum_table(&both), &prov);
    let mut pairs = Table::new(&["re_strip", "im_strip", "re_monodromy", "im_monodromy", "mismatch"]);
    for p in &report.pairs {
        pairs.push(vec![num(p.strip.re), num(p.strip.im), num(p.mono.re), num(p.mono.im), num(p.mismatch)]);
    }
    out.add_csv("crosscheck.csv", &pairs, &prov);

    let status = match report.dominant_relative {
        None => Status::Numerical("no dominant value on one of the two sides".into()),
        Some(r) if r <= blk.crosscheck_tol => Status::Ok,
        Some(r) => Status::Validation(format!(
            "dominant relative mismatch {r:.3e} exceeds {:.3e}",
            blk.crosscheck_tol
        )),
    };
    Ok(Partial {
        results: json!({
            "monodromy_branches": mono.branches.len(),
            "strip_branches": strip.branches.len(),
            "strip_dim": strip.dim,
            "report": report,
        }),
        status,
        caveat: Some(SUBSET_CAVEAT),
    })
}

fn reconstruct(cfg: &RunConfig, out: &mut RunOutputs) -> Result<Partial> {
    let problem = cfg.problem();
    let blk = cfg.reconstruct_block();
    let mono = monodromy_spectrum(&problem)?;
    let Some(branch) = mono.branches.get(blk.branch) else {
        return Ok(Partial {
            results: json!({"branches": mono.branches.len()}),
            status: Status::Numerical(format!(
                "branch {} requested but only {} converged",
                blk.branch,
                mono.branches.len()
            )),
            caveat: None,
        });
    };
    let v = &mono.vectors[blk.branch];
    let rec = reconstruct_eigenfunction(&problem, branch.mu, v, blk.half_width)?;
    let grid = reconstruction_grid(&problem, blk.half_width)?;

    let peak = rec.state.iter().map(|u| u.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut t = Table::new(&["x", "y", "re_u", "im_u"]);
    for (d, u) in rec.state.iter().enumerate() {
        let [x, y] = grid.coords(d);
        t.push(vec![num(x), num(y), num(u.re / peak), num(u.im / peak)]);
    }
    out.add_csv("eigenfunction.csv", &t, &Provenance::new(cfg, None));
    Ok(Partial {
        results: json!({
            "branch": branch_json(branch),
            "lambda": c(rec.lambda),
            "half_width": rec.half_width,
            "residual": rec.residual,
            "localized_fraction": rec.localized_fraction,
            "pairing_ratio": rec.pairing_ratio,
            "pair_residual": rec.pair_residual,
        }),
        status: Status::Ok,
        caveat: None,
    })
}

fn pseudospectra(cfg: &RunConfig, out: &mut RunOutputs, plots: bool) -> Result<Partial> {
    let problem = cfg.problem();
    let blk = *cfg.pseudospectra_block()?;
    let (_, a) = strip_problem(&problem, blk.half_width)?;
    let z = z_window((blk.re[0], blk.re[1]), (blk.im[0], blk.im[1]), blk.n_re, blk.n_im);
    let grid = pseudospectra_grid(&a, &z, blk.tol, cfg.seed)?;

    let mut t = Table::new(&PSEUDOSPECTRA_COLUMNS);
    for p in &grid.points {
        t.push(vec![num(p.z.re), num(p.z.im), num(p.resolvent_norm), p.converged.to_string()]);
    }
    out.add_csv("pseudospectra.csv", &t, &Provenance::new(cfg, None));
    if plots {
        out.add("pseudospectra.svg", svg::pseudospectra_map(&grid.points, blk.n_re, blk.n_im, 12));
    }

    let mut finite: Vec<f64> = grid
        .points
        .iter()
        .map(|p| p.resolvent_norm)
        .filter(|v| v.is_finite())
        .collect();
    finite.sort_by(f64::total_cmp);
    let median = if finite.is_empty() { f64::NAN } else { finite[finite.len() / 2] };
    let unconverged = grid.points.iter().filter(|p| !p.converged).count();
    let status = if unconverged == 0 {
        Status::Ok
    } else {
        Status::Numerical(format!("{unconverged} of {} points did not converge", grid.points.len()))
    };
    Ok(Partial {
        results: json!({
            "points": grid.points.len(),
            "unconverged": unconverged,
            "median_resolvent_norm": median,
            "max_resolvent_norm": finite.last(),
            "strip_dim": a.dim(),
            "iterations": grid.points.iter().map(|p| p.iterations).collect::<Vec<_>>(),
        }),
        status,
        caveat: None,
    })
}

fn asymptotics(cfg: &RunConfig, out: &mut RunOutputs) -> Result<Partial> {
    let configs = cfg.asymptotic_configs()?;
    let rep = asymptotic_report(&configs)?;
    let mut t = Table::new(&ASYMPTOTICS_COLUMNS);
    for r in &rep.rows {
        let l = r.lambda_min.unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let (rs, is) = r.scaling.map_or((f64::NAN, f64::NAN), |s| (s.re_scaled, s.im_scaled));
        t.push(vec![num(r.g), num(l.re), num(l.im), num(rs), num(is), num(r.target_re), num(r.target_im)]);
    }
    out.add_csv("asymptotics.csv", &t, &Provenance::new(cfg, Some(SUBSET_CAVEAT)));
    let status = if rep.gaps.is_empty() {
        Status::Ok
    } else {
        Status::Numerical(format!("no branch found for g in {:?}", rep.gaps))
    };
    Ok(Partial {
        results: json!({
            "report": rep,
            "re_ratios": rep.rows.iter().map(|r| r.re_ratio()).collect::<Vec<_>>(),
        }),
        status,
        caveat: Some(SUBSET_CAVEAT),
    })
}

fn validate(cfg: &RunConfig, out: &mut RunOutputs) -> Result<Partial> {
    let report = run_validation(&cfg.problem(), &cfg.validate_block())?;
    let mut t = Table::new(&["check", "passed", "value", "tolerance"]);
    for ch in &report.checks {
        t.push(vec![ch.name.clone(), ch.passed.to_string(), num(ch.value), num(ch.tolerance)]);
    }
    out.add_csv("validation.csv", &t, &Provenance::new(cfg, None));
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    let status = if failed.is_empty() {
        Status::Ok
    } else {
        Status::Validation(failed.join(", "))
    };
    Ok(Partial {
        results: serde_json::to_value(&report).map_err(|e| Error::Config(e.to_string()))?,
        status,
        caveat: None,
    })
}
