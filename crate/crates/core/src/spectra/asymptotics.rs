//! Large-`g` behaviour of the leftmost branch against the Airy law
//! `λ ≈ ±i g r + |a1| e^{±iπ/3} g^{2/3}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::airy::{half_abs_first_zero, imag_offset_target};
use super::branch::fold;
use super::fit::{fit_power_law, PowerLawFit};
use super::monodromy::monodromy_spectrum;
use crate::error::{Error, Result};
use crate::geometry::{build_cell_grid, CellGrid};
use crate::operators::ProblemConfig;

/// Smallest `s` with `|μ_est|^s <= target`, using the leading-order estimate
/// `Re λ ≈ (|a1|/2) g^{2/3}` for the dominant multiplier.
pub fn choose_periods(g: f64, target: f64) -> usize {
    let decay = half_abs_first_zero() * g.powf(2.0 / 3.0) * std::f64::consts::TAU / g;
    ((-target.ln()) / decay).ceil().max(1.0) as usize
}

/// Scaled coordinates of one eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryScaling {
    /// `Re λ g^{-2/3}`.
    pub re_scaled: f64,
    /// `|Im λ - side·g r|` (modulo `g`) times `g^{-2/3}`.
    pub im_scaled: f64,
    /// `side · fold(Im λ - side·g r) g^{-2/3}`: positive when `Im λ` lies on
    /// the far side of the line `side·g r`, away from the hole centre.
    pub signed_offset: f64,
    /// `+1` for the hole point `(r, 0)`, `-1` for `(-r, 0)`.
    pub side: i8,
    /// `(g r - Im λ) g^{-2/3}` without folding or side selection.
    pub literal_im_scaled: f64,
}

/// `side` is the hole side the mode lives on; `None` picks the line `±g r`
/// closest to `Im λ` modulo `g`, which is only unambiguous while the offset
/// is below `g/4`.
pub fn airy_scaling(lambda: Complex64, g: f64, r: f64, side: Option<i8>) -> AiryScaling {
    let s = g.powf(-2.0 / 3.0);
    let plus = fold(lambda.im - g * r, g);
    let minus = fold(lambda.im + g * r, g);
    let side = side.filter(|&v| v != 0).map(i8::signum).unwrap_or(
        if plus.abs() <= minus.abs() { 1 } else { -1 },
    );
    let d = if side > 0 { plus } else { minus };
    AiryScaling {
        re_scaled: lambda.re * s,
        im_scaled: d.abs() * s,
        signed_offset: f64::from(side) * d * s,
        side,
        literal_im_scaled: (g * r - lambda.im) * s,
    }
}

/// Side of the cell (`sign Σ x |v|²`) a cell vector is concentrated on.
pub fn localization_side(grid: &CellGrid, v: &[Complex64]) -> i8 {
    let moment: f64 = v
        .iter()
        .enumerate()
        .map(|(d, c)| grid.coords(d)[0] * c.norm_sqr())
        .sum();
    if moment > 0.0 {
        1
    } else if moment < 0.0 {
        -1
    } else {
        0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRow {
    pub g: f64,
    pub n: usize,
    pub periods: usize,
    /// Branch value with the smallest real part; `None` marks a gap.
    pub lambda_min: Option<Complex64>,
    pub scaling: Option<AiryScaling>,
    pub target_re: f64,
    pub target_im: f64,
    pub branch_count: usize,
}

impl AsymptoticRow {
    /// `re_scaled / target_re`.
    pub fn re_ratio(&self) -> Option<f64> {
        self.scaling.map(|s| s.re_scaled / self.target_re)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub rows: Vec<AsymptoticRow>,
    /// Power law fitted to `Re λ_min(g)` over the rows without gaps.
    pub fit: Option<PowerLawFit>,
    /// `g` values where no branch was found.
    pub gaps: Vec<f64>,
    /// Hole extent `r` along x.
    pub hole_extent: f64,
    pub q: f64,
}

/// Leftmost branch of one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowInput {
    pub g: f64,
    pub n: usize,
    pub periods: usize,
    pub lambda_min: Option<Complex64>,
    /// Hole side of the mode, if known.
    pub side: Option<i8>,
    pub branch_count: usize,
}

impl RowInput {
    pub fn new(g: f64, lambda_min: Option<Complex64>) -> Self {
        Self {
            g,
            n: 0,
            periods: 1,
            lambda_min,
            side: None,
            branch_count: usize::from(lambda_min.is_some()),
        }
    }
}

/// Builds the report from already computed minima.
pub fn report_from_values(rows: &[RowInput], r: f64, q: f64) -> AsymptoticReport {
    let target_re = half_abs_first_zero();
    let target_im = imag_offset_target();
    let rows: Vec<AsymptoticRow> = rows
        .iter()
        .map(|row| AsymptoticRow {
            g: row.g,
            n: row.n,
            periods: row.periods,
            lambda_min: row.lambda_min,
            scaling: row.lambda_min.map(|l| airy_scaling(l, row.g, r, row.side)),
            target_re,
            target_im,
            branch_count: row.branch_count,
        })
        .collect();
    let gaps = rows.iter().filter(|r| r.lambda_min.is_none()).map(|r| r.g).collect();
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.lambda_min.map(|l| (r.g, l.re)))
        .collect();
    let fit = fit_power_law(&points).ok();
    AsymptoticReport {
        rows,
        fit,
        gaps,
        hole_extent: r,
        q,
    }
}

/// Runs the monodromy spectrum for every configuration (in parallel) and
/// tabulates the leftmost branch.
pub fn asymptotic_report(configs: &[ProblemConfig]) -> Result<AsymptoticReport> {
    let first = configs
        .first()
        .ok_or_else(|| Error::Config("asymptotic report needs at least one g".into()))?;
    if first.shape.is_none() {
        return Err(Error::Config("asymptotic report needs a hole".into()));
    }
    for w in configs.windows(2) {
        if w[1].shape != first.shape || w[1].q != first.q {
            return Err(Error::Config("all configs must share shape and q".into()));
        }
        if !(w[1].g > w[0].g) {
            return Err(Error::Config("g values must be strictly ascending".into()));
        }
    }
    let r = first.shape.x_extent();
    let rows = configs
        .par_iter()
        .map(|cfg| {
            let mut row = RowInput {
                n: cfg.n,
                periods: cfg.periods,
                branch_count: 0,
                ..RowInput::new(cfg.g, None)
            };
            match monodromy_spectrum(cfg) {
                Ok(sp) => {
                    let grid = build_cell_grid(cfg.n, cfg.shape)?;
                    row.lambda_min = sp.branches.first().map(|b| b.lambda);
                    row.side = sp.vectors.first().map(|v| localization_side(&grid, v));
                    row.branch_count = sp.branches.len();
                    Ok(row)
                }
                Err(Error::NoConvergence { .. }) | Err(Error::NotConverged(_)) => Ok(row),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<RowInput>>>()?;
    Ok(report_from_values(&rows, r, first.q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn synthetic_airy_law_hits_both_targets() {
        let a1 = super::super::airy::airy_first_zero().abs();
        let rows: Vec<RowInput> = [250.0, 500.0, 1000.0, 2000.0]
            .iter()
            .map(|&g: &f64| {
                let l = Complex64::new(0.0, 0.25 * g)
                    + Complex64::from_polar(a1, -PI / 3.0) * g.powf(2.0 / 3.0);
                RowInput {
                    side: Some(1),
                    ..RowInput::new(g, Some(l))
                }
            })
            .collect();
        let rep = report_from_values(&rows, 0.25, 0.0);
        for row in &rep.rows {
            let s = row.scaling.unwrap();
            assert!((s.re_scaled - row.target_re).abs() < 1e-12);
            assert!((s.im_scaled - row.target_im).abs() < 1e-12);
            assert!((s.literal_im_scaled - row.target_im).abs() < 1e-12);
        }
        let fit = rep.fit.unwrap();
        assert!((fit.exponent - 2.0 / 3.0).abs() < 1e-12);
        assert!((rep.rows[0].target_re - 1.169_053_705_3).abs() < 1e-8);
    }

    #[test]
    fn mirrored_branch_has_same_distance() {
        let g = 1000.0;
        let l = Complex64::new(120.0, 0.25 * g + 200.0);
        let a = airy_scaling(l, g, 0.25, None);
        let b = airy_scaling(l.conj(), g, 0.25, None);
        assert_eq!(a.side, 1);
        assert_eq!(b.side, -1);
        assert!((a.im_scaled - b.im_scaled).abs() < 1e-12);
        assert!((a.im_scaled - 2.0).abs() < 1e-12);
        assert!((a.signed_offset - 2.0).abs() < 1e-12);
        assert!((b.signed_offset - 2.0).abs() < 1e-12);
        // an explicit side overrides the nearest-line choice
        let c = airy_scaling(l, g, 0.25, Some(-1));
        assert_eq!(c.side, -1);
        assert!((c.im_scaled - 3.0).abs() < 1e-12);
    }

    #[test]
    fn gaps_are_reported() {
        let rows = vec![
            RowInput::new(10.0, Some(Complex64::new(5.0, 0.0))),
            RowInput::new(20.0, None),
        ];
        let rep = report_from_values(&rows, 0.25, 0.0);
        assert_eq!(rep.gaps, vec![20.0]);
        assert!(rep.fit.is_none());
    }

    #[test]
    fn period_choice() {
        assert_eq!(choose_periods(250.0, 0.1), 2);
        assert_eq!(choose_periods(500.0, 0.1), 3);
        assert_eq!(choose_periods(1000.0, 0.1), 4);
        assert_eq!(choose_periods(2000.0, 0.1), 4);
    }
}
