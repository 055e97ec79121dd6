//! Resolvent norms `||(A - z)^{-1}||` of the strip operator on a small
//! window of the complex plane.
//!
//! `cargo run --release --example pseudospectra`

use btfloquet::geometry::HoleShape;
use btfloquet::operators::ProblemConfig;
use btfloquet::spectra::{pseudospectra_grid, strip_problem, z_window};

fn main() -> btfloquet::Result<()> {
    let cfg = ProblemConfig::new(100.0, 0.0, HoleShape::disk(0.25)?, 12);
    let (_, a) = strip_problem(&cfg, 2)?;
    let (nre, nim) = (5, 4);
    let zs = z_window((0.0, 40.0), (-40.0, 40.0), nre, nim);

    let grid = pseudospectra_grid(&a, &zs, 1e-3, 1)?;
    println!("log10 ||(A - z)^-1||, rows Im z, columns Re z");
    for i in (0..nim).rev() {
        let row: Vec<String> = (0..nre)
            .map(|k| {
                let p = &grid.points[i * nre + k];
                let mark = if p.converged { ' ' } else { '*' };
                format!("{:>7.3}{mark}", p.resolvent_norm.log10())
            })
            .collect();
        println!("Im z = {:>6.1}: {}", grid.points[i * nre].z.im, row.join(""));
    }
    println!("all converged: {}", grid.all_converged());
    Ok(())
}
