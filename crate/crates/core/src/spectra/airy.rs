//! Airy function `Ai` on `|x| <= 20` and its first zero.
//!
//! `-8 <= x <= 5.5` uses the Maclaurin representation `Ai = c1 f - c2 g` with
//! `f = Σ 3^k (1/3)_k x^{3k} / (3k)!` and `g = Σ 3^k (2/3)_k x^{3k+1} / (3k+1)!`;
//! beyond that the standard large-argument expansions are used. On the
//! positive side the series loses digits to cancellation between the two
//! terms (relative error ~4e-3 at x = 8), so the seam sits at 5.5 where
//! both representations are good to ~7e-9.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `Ai(0) = 3^{-2/3} / Γ(2/3)`.
pub const AI_0: f64 = 0.355_028_053_887_817_2;
/// `-Ai'(0) = 3^{-1/3} / Γ(1/3)`.
pub const NEG_AI_PRIME_0: f64 = 0.258_819_403_792_806_8;

const NEG_SERIES_LIMIT: f64 = -8.0;
const POS_SERIES_LIMIT: f64 = 5.5;
const DOMAIN_LIMIT: f64 = 20.0;

pub fn airy_ai(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > DOMAIN_LIMIT {
        return Err(Error::Domain(format!("airy_ai supports |x| <= 20, got {x}")));
    }
    if (NEG_SERIES_LIMIT..=POS_SERIES_LIMIT).contains(&x) {
        Ok(airy_series(x))
    } else {
        Ok(airy_asymptotic(x))
    }
}

fn airy_series(x: f64) -> f64 {
    let x3 = x * x * x;
    let mut f_term = 1.0;
    let mut g_term = x;
    let mut f = f_term;
    let mut g = g_term;
    for k in 1..200 {
        let kf = k as f64;
        // ratio of consecutive terms: x^3 / ((3k-1)(3k)) and x^3 / ((3k)(3k+1))
        f_term *= x3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        g_term *= x3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        f += f_term;
        g += g_term;
        if f_term.abs() <= 1e-18 * f.abs() && g_term.abs() <= 1e-18 * g.abs().max(1e-300) {
            break;
        }
    }
    AI_0 * f - NEG_AI_PRIME_0 * g
}

/// Coefficients `u_k` of the large-argument expansions.
fn u_coefficients(count: usize) -> Vec<f64> {
    let mut u = vec![1.0];
    for k in 1..count {
        let kf = k as f64;
        let next =
            u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
    }
    u
}

fn airy_asymptotic(x: f64) -> f64 {
    let u = u_coefficients(12);
    let ax = x.abs();
    let zeta = 2.0 / 3.0 * ax.powf(1.5);
    if x > 0.0 {
        let mut sum = 0.0;
        let mut zp = 1.0;
        for (k, uk) in u.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * uk / zp;
            zp *= zeta;
        }
        (-zeta).exp() / (2.0 * PI.sqrt() * ax.powf(0.25)) * sum
    } else {
        let (mut p, mut q) = (0.0, 0.0);
        for (k, uk) in u.iter().enumerate() {
            let term = uk / zeta.powi(k as i32);
            match k % 4 {
                0 => p += term,
                1 => q += term,
                2 => p -= term,
                _ => q -= term,
            }
        }
        let phase = zeta + PI / 4.0;
        (phase.sin() * p - phase.cos() * q) / (PI.sqrt() * ax.powf(0.25))
    }
}

/// Rightmost zero `a1` of `Ai`, by bisection on `[-3, -2]`.
pub fn airy_first_zero() -> f64 {
    let (mut lo, mut hi) = (-3.0f64, -2.0f64);
    let f = |x: f64| airy_series(x);
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `|a1| / 2`, the limit of `Re λ_min g^{-2/3}`.
pub fn half_abs_first_zero() -> f64 {
    0.5 * airy_first_zero().abs()
}

/// `(√3/2) |a1|`, the limit of the scaled imaginary offset.
pub fn imag_offset_target() -> f64 {
    0.5 * 3f64.sqrt() * airy_first_zero().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_zero() {
        assert!((airy_ai(0.0).unwrap() - 0.355_028_053_9).abs() < 1e-10);
    }

    #[test]
    fn value_at_one() {
        assert!((airy_ai(1.0).unwrap() - 0.135_292_416_3).abs() < 1e-10);
    }

    #[test]
    fn first_zero() {
        let a1 = airy_first_zero();
        assert!((a1 + 2.338_107_410_5).abs() < 1e-8, "{a1}");
        assert!(airy_ai(a1).unwrap().abs() < 1e-12);
    }

    #[test]
    fn derived_targets() {
        assert!((half_abs_first_zero() - 1.169_053_705_3).abs() < 1e-8);
        assert!((imag_offset_target() - 2.024_860_414_2).abs() < 1e-8);
    }

    #[test]
    fn branches_agree_at_seam() {
        let (s, a) = (airy_series(5.5), airy_asymptotic(5.5));
        assert!((s - a).abs() <= 2e-8 * s.abs(), "{s} vs {a}");
        let (s, a) = (airy_series(-8.0), airy_asymptotic(-8.0));
        assert!((s - a).abs() <= 1e-7, "{s} vs {a}");
        // reference values
        assert!((airy_ai(8.0).unwrap() - 4.692_207_616_099e-8).abs() < 1e-18);
        assert!((airy_ai(-8.0).unwrap() + 0.052_705_050_356_386).abs() < 1e-10);
    }

    #[test]
    fn domain_limits() {
        assert!(airy_ai(20.0).is_ok());
        assert!(airy_ai(-20.5).is_err());
        assert!(airy_ai(f64::NAN).is_err());
        // Ai(-20) from standard tables
        assert!((airy_ai(-20.0).unwrap() + 0.176_406_127_3).abs() < 1e-8);
    }
}
