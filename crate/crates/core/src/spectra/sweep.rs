//! Quasimomentum sweeps with nearest-neighbour continuation of branches.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::branch::{distance_mod_ig, BranchEigenvalue};
use super::monodromy::monodromy_spectrum;
use crate::error::{Error, Result};
use crate::operators::ProblemConfig;

/// Attached to every sweep product.
pub const SUBSET_CAVEAT: &str = "branch values of the q-fibers approximate a subset of the \
spectrum of the perforated-plane operator; equality of the union with the full spectrum is a \
conjecture and is not claimed";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepPoint {
    pub q: f64,
    pub branches: Vec<BranchEigenvalue>,
    /// Error message when the spectrum computation failed.
    pub failure: Option<String>,
    pub seconds: f64,
}

/// Pairing between the branch lists of two adjacent parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Continuation {
    /// `links[i] = Some(j)`: branch `i` at this parameter continues as
    /// branch `j` at the next one.
    pub links: Vec<Option<usize>>,
    /// Branches at the next parameter without a predecessor.
    pub births: Vec<usize>,
    /// Branches at this parameter without a successor.
    pub deaths: Vec<usize>,
    pub threshold: f64,
}

/// One continued curve `q ↦ λ_k(q)`: `(parameter index, branch index)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub id: usize,
    pub members: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub parameters: Vec<f64>,
    pub points: Vec<SweepPoint>,
    /// `matches[k]` links parameter `k` to `k + 1`.
    pub matches: Vec<Continuation>,
    pub curves: Vec<Curve>,
    pub caveat: String,
}

impl SweepResult {
    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.failure.is_some()).count()
    }
}

fn min_gap(list: &[BranchEigenvalue], g: f64) -> f64 {
    let mut gap = f64::INFINITY;
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            gap = gap.min(distance_mod_ig(a.lambda, b.lambda, g));
        }
    }
    gap
}

/// Greedy nearest-neighbour matching (distance modulo `ig`): closest pairs
/// first, each branch used at most once, pairs farther apart than half the
/// smallest intra-list gap rejected.
pub fn match_branches(a: &[BranchEigenvalue], b: &[BranchEigenvalue], g: f64) -> Continuation {
    let threshold = 0.5 * min_gap(a, g).min(min_gap(b, g));
    let mut cand: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let d = distance_mod_ig(x.lambda, y.lambda, g);
            if d <= threshold {
                cand.push((d, i, j));
            }
        }
    }
    cand.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    let mut links = vec![None; a.len()];
    let mut taken = vec![false; b.len()];
    for (_, i, j) in cand {
        if links[i].is_none() && !taken[j] {
            links[i] = Some(j);
            taken[j] = true;
        }
    }
    Continuation {
        deaths: (0..a.len()).filter(|&i| links[i].is_none()).collect(),
        births: (0..b.len()).filter(|&j| !taken[j]).collect(),
        links,
        threshold,
    }
}

fn build_curves(points: &[SweepPoint], matches: &[Continuation]) -> Vec<Curve> {
    let mut curves: Vec<Curve> = Vec::new();
    // curve id of every branch at the current parameter
    let mut current: Vec<usize> = Vec::new();
    for (k, p) in points.iter().enumerate() {
        let mut ids = vec![usize::MAX; p.branches.len()];
        if k > 0 {
            for (i, link) in matches[k - 1].links.iter().enumerate() {
                if let Some(j) = *link {
                    ids[j] = current[i];
                }
            }
        }
        for (j, id) in ids.iter_mut().enumerate() {
            if *id == usize::MAX {
                *id = curves.len();
                curves.push(Curve {
                    id: *id,
                    members: Vec::new(),
                });
            }
            curves[*id].members.push((k, j));
        }
        current = ids;
    }
    curves
}

/// Monodromy spectra for every `q` (in parallel), merged in input order.
/// Failures are recorded per point and the sweep continues.
pub fn sweep_q(config: &ProblemConfig, q_values: &[f64]) -> Result<SweepResult> {
    if q_values.is_empty() {
        return Err(Error::Config("q sweep needs at least one value".into()));
    }
    if let Some(q) = q_values.iter().find(|q| !q.is_finite()) {
        return Err(Error::Config(format!("q values must be finite, got {q}")));
    }
    config.validate()?;
    let points: Vec<SweepPoint> = q_values
        .par_iter()
        .map(|&q| {
            let start = Instant::now();
            let mut cfg = config.clone();
            cfg.q = q;
            let (branches, failure) = match monodromy_spectrum(&cfg) {
                Ok(sp) if sp.detected => (sp.branches, None),
                Ok(_) => (Vec::new(), Some("no Ritz pair converged".to_string())),
                Err(e) => (Vec::new(), Some(e.to_string())),
            };
            SweepPoint {
                q,
                branches,
                failure,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect();
    let matches: Vec<Continuation> = points
        .windows(2)
        .map(|w| match_branches(&w[0].branches, &w[1].branches, config.g))
        .collect();
    let curves = build_curves(&points, &matches);
    Ok(SweepResult {
        parameters: q_values.to_vec(),
        points,
        matches,
        curves,
        caveat: SUBSET_CAVEAT.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::Method;
    use num_complex::Complex64;

    fn b(re: f64, im: f64) -> BranchEigenvalue {
        BranchEigenvalue {
            lambda: Complex64::new(re, im),
            mu: Complex64::new(0.5, 0.0),
            residual: 0.0,
            q: 0.0,
            p0: 0.0,
            g: 100.0,
            s: 1,
            method: Method::Monodromy,
        }
    }

    #[test]
    fn matching_is_a_partial_injection() {
        let a = [b(10.0, 0.0), b(20.0, 0.0), b(30.0, 0.0)];
        let c = [b(10.5, 0.0), b(19.0, 0.0), b(80.0, 0.0)];
        let m = match_branches(&a, &c, 100.0);
        assert_eq!(m.links, vec![Some(0), Some(1), None]);
        assert_eq!(m.deaths, vec![2]);
        assert_eq!(m.births, vec![2]);
        assert_eq!(m.threshold, 4.25);
    }

    #[test]
    fn matching_uses_band_folding() {
        let a = [b(10.0, 49.0)];
        let c = [b(10.0, -49.0)];
        let m = match_branches(&a, &c, 100.0);
        assert_eq!(m.links, vec![Some(0)]);
    }

    #[test]
    fn curves_follow_links() {
        let mk = |q: f64, v: Vec<BranchEigenvalue>| SweepPoint {
            q,
            branches: v,
            failure: None,
            seconds: 0.0,
        };
        let pts = vec![
            mk(0.0, vec![b(10.0, 0.0), b(20.0, 0.0)]),
            mk(0.1, vec![b(20.2, 0.0), b(10.1, 0.0)]),
            mk(0.2, vec![b(10.2, 0.0)]),
        ];
        let matches: Vec<_> = pts
            .windows(2)
            .map(|w| match_branches(&w[0].branches, &w[1].branches, 100.0))
            .collect();
        let curves = build_curves(&pts, &matches);
        assert_eq!(curves.len(), 2);
        assert_eq!(curves[0].members, vec![(0, 0), (1, 1), (2, 0)]);
        assert_eq!(curves[1].members, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn empty_sweep_rejected() {
        let cfg = ProblemConfig::new(10.0, 0.0, crate::geometry::HoleShape::None, 4);
        assert!(sweep_q(&cfg, &[]).is_err());
    }
}
