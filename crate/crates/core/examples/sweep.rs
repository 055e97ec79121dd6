//! Spectral curves `q ↦ λ(q)` over one Brillouin period, with branch
//! continuation between neighbouring q values.
//!
//! `cargo run --release --example sweep`

use std::f64::consts::TAU;

use btfloquet::geometry::HoleShape;
use btfloquet::operators::ProblemConfig;
use btfloquet::spectra::sweep_q;

fn main() -> btfloquet::Result<()> {
    let mut cfg = ProblemConfig::new(20.0, 0.0, HoleShape::disk(0.25)?, 16);
    cfg.eigen.m = 20;
    cfg.eigen.nev = 4;
    let qs: Vec<f64> = (0..=6).map(|k| TAU * k as f64 / 6.0).collect();

    let res = sweep_q(&cfg, &qs)?;
    println!("{}", res.caveat);
    for p in &res.points {
        let vals: Vec<String> = p
            .branches
            .iter()
            .map(|b| format!("{:.3}{:+.3}i", b.lambda.re, b.lambda.im))
            .collect();
        println!("q = {:.4}: {}", p.q, vals.join("  "));
    }
    for c in &res.curves {
        let pts: Vec<String> = c
            .members
            .iter()
            .map(|&(k, i)| format!("{:.3}", res.points[k].branches[i].lambda.re))
            .collect();
        println!("curve {} (Re λ): {}", c.id, pts.join(" -> "));
    }
    // q and q + 2π are the same fiber
    let first = &res.points[0].branches;
    let last = &res.points[qs.len() - 1].branches;
    if let (Some(a), Some(b)) = (first.first(), last.first()) {
        println!("λ_min at q = 0 and q = 2π differ by {:.2e}", (a.lambda - b.lambda).norm());
    }
    Ok(())
}
