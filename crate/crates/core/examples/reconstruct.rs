//! Strip eigenfunction of the leftmost branch, rebuilt from one period of
//! monodromy snapshots, with its strip residual and x-profile.
//!
//! `cargo run --release --example reconstruct`

use btfloquet::geometry::HoleShape;
use btfloquet::operators::ProblemConfig;
use btfloquet::spectra::{monodromy_spectrum, reconstruct_eigenfunction, reconstruction_grid};

fn main() -> btfloquet::Result<()> {
    let mut cfg = ProblemConfig::new(20.0, 0.0, HoleShape::disk(0.25)?, 24);
    cfg.eigen.m = 24;
    let half_width = 3;

    let sp = monodromy_spectrum(&cfg)?;
    let (Some(b), Some(w0)) = (sp.branches.first(), sp.vectors.first()) else {
        eprintln!("no branch detected");
        return Ok(());
    };
    let rec = reconstruct_eigenfunction(&cfg, b.mu, w0, half_width)?;
    println!("λ0 = {:.5} {:+.5}i", rec.lambda.re, rec.lambda.im);
    println!("windowed residual      {:.2e}", rec.residual);
    println!("share of |u|² in |x|<=2 {:.4}", rec.localized_fraction);

    // |u|² summed over y, per cell column
    let grid = reconstruction_grid(&cfg, half_width)?;
    let mut cells = vec![0.0; 2 * half_width];
    for (d, u) in rec.state.iter().enumerate() {
        let (j, _) = grid.point(d);
        let k = ((grid.x(j) + half_width as f64).floor() as usize).min(cells.len() - 1);
        cells[k] += u.norm_sqr();
    }
    let total: f64 = cells.iter().sum();
    for (k, c) in cells.iter().enumerate() {
        let x0 = k as f64 - half_width as f64;
        let bar = "#".repeat((60.0 * c / total).round() as usize);
        println!("[{:+.0}, {:+.0}) {:.3} {bar}", x0, x0 + 1.0, c / total);
    }
    Ok(())
}
