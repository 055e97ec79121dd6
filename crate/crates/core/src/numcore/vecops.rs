//! Dense complex vector kernels.

use num_complex::Complex64;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Conjugate-linear in the first argument: `sum(conj(a_i) * b_i)`.
#[inline]
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Non-conjugated pairing `sum(a_i * b_i)`.
#[inline]
pub fn bilinear(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

#[inline]
pub fn norm(a: &[Complex64]) -> f64 {
    norm_sqr(a).sqrt()
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
pub fn scale(alpha: Complex64, x: &mut [Complex64]) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}

/// Returns `a - b`.
pub fn sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Normalizes in place and returns the previous norm.
pub fn normalize(x: &mut [Complex64]) -> f64 {
    let n = norm(x);
    if n > 0.0 {
        scale(Complex64::new(1.0 / n, 0.0), x);
    }
    n
}
