//! Direct spectrum of the truncated strip operator `-Δ + igx` on
//! `|x| <= L`, and the change of the dominant value from `L` to `L + 2`.
//!
//! `cargo run --release --example strip`

use btfloquet::geometry::HoleShape;
use btfloquet::operators::ProblemConfig;
use btfloquet::spectra::{strip_spectrum, truncation_check};

fn main() -> btfloquet::Result<()> {
    let mut cfg = ProblemConfig::new(20.0, 0.0, HoleShape::disk(0.25)?, 16);
    cfg.eigen.m = 24;
    let half_width = 2;

    let sp = strip_spectrum(&cfg, half_width, None)?;
    println!(
        "strip |x| <= {half_width}, {} unknowns, horizon {:.4}: {} values",
        sp.dim,
        sp.horizon,
        sp.branches.len()
    );
    for b in &sp.branches {
        println!("  λ = {:.5} {:+.5}i  (residual {:.1e})", b.lambda.re, b.lambda.im, b.residual);
    }

    let tc = truncation_check(&cfg, half_width)?;
    match tc.relative_change {
        Some(r) => println!("dominant value moves by {r:.2e} (relative) from L = {half_width} to L = {}", half_width + 2),
        None => println!("truncation check inconclusive: a dominant value is missing"),
    }
    Ok(())
}
