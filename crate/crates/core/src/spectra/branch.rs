use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Monodromy,
    Strip,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Monodromy => "monodromy",
            Method::Strip => "strip",
        }
    }
}

/// One spectral value `λ` recovered from a propagator multiplier `μ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchEigenvalue {
    pub lambda: Complex64,
    pub mu: Complex64,
    /// `||K v - μ v|| / ||v||` of the propagator that produced `μ`.
    pub residual: f64,
    pub q: f64,
    pub p0: f64,
    pub g: f64,
    /// Periods composed in the Arnoldi map.
    pub s: usize,
    pub method: Method,
}

impl BranchEigenvalue {
    /// `Im λ` in the band `[-g/2, g/2)` and `Re λ >= -1e-10 g`.
    pub fn satisfies_invariants(&self) -> bool {
        let half = 0.5 * self.g;
        let band = self.lambda.im >= -half * (1.0 + 1e-12) && self.lambda.im < half * (1.0 + 1e-12);
        band && self.lambda.re >= -1e-10 * self.g
    }
}

/// `λ = -Log(μ)/t_eff` with the principal logarithm, `Arg μ ∈ (-π, π]`,
/// so `Im λ ∈ [-π/t_eff, π/t_eff)`.
pub fn unfold(mu: Complex64, t_eff: f64) -> Result<Complex64> {
    if mu.norm() == 0.0 {
        return Err(Error::ZeroMultiplier);
    }
    if !(t_eff > 0.0) {
        return Err(Error::Config(format!("t_eff must be positive, got {t_eff}")));
    }
    let mut arg = mu.arg();
    if arg <= -PI {
        // atan2 yields -π for a negative real with a -0.0 imaginary part
        arg = PI;
    }
    Ok(Complex64::new(-mu.norm().ln(), -arg) / t_eff)
}

/// Folds `x` into `[-period/2, period/2)`.
pub fn fold(x: f64, period: f64) -> f64 {
    let r = (x + 0.5 * period).rem_euclid(period) - 0.5 * period;
    if r >= 0.5 * period {
        r - period
    } else {
        r
    }
}

/// Distance between `a` and `b` modulo `i g Z`.
pub fn distance_mod_ig(a: Complex64, b: Complex64, g: f64) -> f64 {
    let dre = a.re - b.re;
    let dim = if g > 0.0 { fold(a.im - b.im, g) } else { a.im - b.im };
    dre.hypot(dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, TAU};

    #[test]
    fn unfold_examples() {
        let l = unfold(Complex64::new((-1.0f64).exp(), 0.0), 1.0).unwrap();
        assert!((l - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let l = unfold(Complex64::new(0.0, 0.5), 1.0).unwrap();
        assert!((l - Complex64::new(2f64.ln(), -FRAC_PI_2)).norm() < 1e-15);

        let l = unfold(Complex64::new(-(-2.0f64).exp(), 0.0), 1.0).unwrap();
        assert!((l - Complex64::new(2.0, -PI)).norm() < 1e-15);
        let l = unfold(Complex64::new(-(-2.0f64).exp(), -0.0), 1.0).unwrap();
        assert!((l - Complex64::new(2.0, -PI)).norm() < 1e-15);
    }

    #[test]
    fn zero_multiplier_has_no_eigenvalue() {
        assert!(matches!(
            unfold(Complex64::new(0.0, 0.0), 1.0),
            Err(Error::ZeroMultiplier)
        ));
    }

    #[test]
    fn refold_round_trip() {
        let g = 37.0;
        let t = TAU / g;
        for (re, im) in [(3.0, 0.0), (0.1, -18.0), (50.0, 18.4), (1e-3, -0.2)] {
            let lam = Complex64::new(re, im);
            let back = unfold((-t * lam).exp(), t).unwrap();
            assert!((back - lam).norm() <= 1e-12 * lam.norm().max(1.0));
        }
    }

    #[test]
    fn folding_and_distance() {
        assert_eq!(fold(0.5, 1.0), -0.5);
        assert!((fold(2.3, 1.0) - 0.3).abs() < 1e-12);
        let a = Complex64::new(1.0, 2.0);
        assert!(distance_mod_ig(a, a + Complex64::new(0.0, 10.0), 10.0) < 1e-12);
        assert!((distance_mod_ig(a, a + Complex64::new(0.0, 3.0), 10.0) - 3.0).abs() < 1e-12);
    }
}
