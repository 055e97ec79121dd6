//! Monodromy branch values against strip eigenvalues, compared modulo `ig`.
//!
//! `cargo run --release --example crosscheck`

use btfloquet::geometry::HoleShape;
use btfloquet::operators::ProblemConfig;
use btfloquet::spectra::{monodromy_spectrum, pseudo_invariance_check, strip_spectrum};

fn main() -> btfloquet::Result<()> {
    let mut cfg = ProblemConfig::new(20.0, 0.0, HoleShape::disk(0.25)?, 24);
    cfg.eigen.m = 24;

    let mono = monodromy_spectrum(&cfg)?;
    let strip = strip_spectrum(&cfg, 3, None)?;
    let rep = pseudo_invariance_check(&mono.branches, &strip.branches, cfg.g, 0.05);

    println!("{:>24} {:>24} {:>10}", "strip λ", "nearest monodromy λ", "mismatch");
    for p in &rep.pairs {
        println!(
            "{:>11.4} {:>+11.4}i {:>11.4} {:>+11.4}i {:>10.2e}",
            p.strip.re, p.strip.im, p.mono.re, p.mono.im, p.mismatch
        );
    }
    if let Some(rel) = rep.dominant_relative {
        println!("dominant branch: relative mismatch {rel:.2e}");
    }
    Ok(())
}
