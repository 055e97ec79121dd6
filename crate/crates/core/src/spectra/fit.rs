use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// Root-mean-square residual in log space.
    pub rms: f64,
}

/// Least squares fit of `value = prefactor * g^exponent` on `(ln g, ln value)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::Config(format!(
            "power-law fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(g, v)) = points.iter().find(|(g, v)| !(*g > 0.0 && *v > 0.0)) {
        return Err(Error::Domain(format!(
            "power-law fit needs positive data, got ({g}, {v})"
        )));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("power-law fit needs distinct abscissae".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let rms = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - exponent * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(PowerLawFit {
        exponent,
        prefactor: intercept.exp(),
        rms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_two_thirds() {
        let pts: Vec<_> = [10.0, 40.0, 160.0, 640.0]
            .iter()
            .map(|&g: &f64| (g, 1.7 * g.powf(2.0 / 3.0)))
            .collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.exponent - 2.0 / 3.0).abs() < 1e-12);
        assert!((fit.prefactor - 1.7).abs() < 1e-12);
        assert!(fit.rms < 1e-12);
    }

    #[test]
    fn constant_data() {
        let fit = fit_power_law(&[(1.0, 3.0), (2.0, 3.0), (5.0, 3.0)]).unwrap();
        assert!(fit.exponent.abs() < 1e-14);
    }

    #[test]
    fn perturbed_data() {
        let pts: Vec<_> = (0..6)
            .map(|i| {
                let g = 100.0 * 2f64.powi(i);
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                (g, 1.2 * g.powf(2.0 / 3.0) * (1.0 + 0.01 * s))
            })
            .collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.exponent - 2.0 / 3.0).abs() < 0.02);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_power_law(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 1.0), (2.0, -1.0), (3.0, 1.0)]).is_err());
    }
}
