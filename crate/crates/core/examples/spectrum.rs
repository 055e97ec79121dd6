//! Branch values of one q-fiber for a disk-perforated plane.
//!
//! `cargo run --release --example spectrum`

use btfloquet::geometry::HoleShape;
use btfloquet::operators::ProblemConfig;
use btfloquet::spectra::monodromy_spectrum;

fn main() -> btfloquet::Result<()> {
    let mut cfg = ProblemConfig::new(20.0, 0.0, HoleShape::disk(0.25)?, 24);
    cfg.eigen.m = 24;
    cfg.eigen.nev = 6;

    let sp = monodromy_spectrum(&cfg)?;
    println!(
        "g = {}, q = {}, N = {}: {} branches from {} converged Ritz pairs ({} periods applied)",
        cfg.g,
        cfg.q,
        cfg.n,
        sp.branches.len(),
        sp.ritz_converged,
        sp.periods_applied
    );
    println!("{:>12} {:>12} {:>12} {:>10}", "Re λ", "Im λ", "|μ|", "residual");
    for b in &sp.branches {
        println!(
            "{:>12.5} {:>12.5} {:>12.4e} {:>10.2e}",
            b.lambda.re,
            b.lambda.im,
            b.mu.norm(),
            b.residual
        );
    }
    Ok(())
}
