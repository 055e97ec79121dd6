//! Leftmost branch over increasing `g` against the Airy law
//! `Re λ ≈ (|a1|/2) g^{2/3}`, on deliberately coarse grids.
//!
//! `cargo run --release --example asymptotics`

use btfloquet::geometry::HoleShape;
use btfloquet::operators::ProblemConfig;
use btfloquet::spectra::{asymptotic_report, choose_periods};

fn main() -> btfloquet::Result<()> {
    let shape = HoleShape::disk(0.25)?;
    let configs: Vec<ProblemConfig> = [(40.0, 24), (80.0, 32), (160.0, 48)]
        .iter()
        .map(|&(g, n)| {
            let mut c = ProblemConfig::new(g, 0.0, shape, n);
            c.periods = choose_periods(g, 0.1);
            c.eigen.m = 12;
            c.eigen.nev = 4;
            c
        })
        .collect();

    let rep = asymptotic_report(&configs)?;
    println!("{:>6} {:>4} {:>3} {:>22} {:>10} {:>10}", "g", "N", "s", "λ_min", "Re/g^2/3", "Im off");
    for r in &rep.rows {
        match (r.lambda_min, r.scaling) {
            (Some(l), Some(s)) => println!(
                "{:>6} {:>4} {:>3} {:>10.3}{:>+11.3}i {:>10.4} {:>10.4}",
                r.g, r.n, r.periods, l.re, l.im, s.re_scaled, s.im_scaled
            ),
            _ => println!("{:>6} {:>4} {:>3} no branch", r.g, r.n, r.periods),
        }
    }
    if let (Some(f), Some(r)) = (rep.fit, rep.rows.first()) {
        println!(
            "fit Re λ_min ≈ {:.3} g^{:.3}; targets {:.5} and {:.5}",
            f.prefactor, f.exponent, r.target_re, r.target_im
        );
    }
    Ok(())
}
