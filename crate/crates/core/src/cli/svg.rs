//! Static SVG plots.

use std::fmt::Write as _;

use crate::spectra::PseudospectraPoint;

const W: f64 = 640.0;
const H: f64 = 480.0;
const M: f64 = 60.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Self {
        let span = |v: &mut dyn Iterator<Item = f64>| {
            v.filter(|x| x.is_finite())
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)))
        };
        let pad = |(a, b): (f64, f64)| {
            if !a.is_finite() {
                (0.0, 1.0)
            } else if b - a < 1e-12 * (1.0 + a.abs()) {
                (a - 0.5, b + 0.5)
            } else {
                let d = 0.05 * (b - a);
                (a - d, b + d)
            }
        };
        let (x0, x1) = pad(span(&mut xs.clone()));
        let (y0, y1) = pad(span(&mut ys.clone()));
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        M + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * M)
    }

    fn py(&self, y: f64) -> f64 {
        H - M - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * M)
    }
}

fn open(s: &mut String, title: &str) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{title}</text>"#, W / 2.0);
}

fn axes(s: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        s,
        r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * M,
        H - 2.0 * M
    );
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let xv = f.x0 + t * (f.x1 - f.x0);
        let yv = f.y0 + t * (f.y1 - f.y0);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            f.px(xv),
            H - M + 16.0,
            tick(xv)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            M - 6.0,
            f.py(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>"#, W / 2.0, H - 16.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{ylabel}</text>"#,
        H / 2.0,
        H / 2.0
    );
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Blue to red through green, `t` in `[0, 1]`.
fn ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let hue = 240.0 * (1.0 - t);
    format!("hsl({hue:.0},75%,45%)")
}

/// `Im λ` against `Re λ`, one polyline per continued curve, points colored
/// by `q`. Each curve is a list of `(q, λ.re, λ.im)`.
pub fn spectral_curves(curves: &[Vec<(f64, f64, f64)>]) -> String {
    let all = curves.iter().flatten();
    let f = Frame::fit(all.clone().map(|p| p.1), all.clone().map(|p| p.2));
    let (q0, q1) = all
        .clone()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let qt = |q: f64| if q1 > q0 { (q - q0) / (q1 - q0) } else { 0.0 };

    let mut s = String::new();
    open(&mut s, "spectral curves");
    axes(&mut s, &f, "Re λ", "Im λ");
    for c in curves.iter().filter(|c| c.len() > 1) {
        let pts: Vec<String> = c
            .iter()
            .map(|p| format!("{:.2},{:.2}", f.px(p.1), f.py(p.2)))
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#999" stroke-width="1"/>"##,
            pts.join(" ")
        );
    }
    for p in curves.iter().flatten() {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
            f.px(p.1),
            f.py(p.2),
            ramp(qt(p.0))
        );
    }
    if q0.is_finite() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="44" text-anchor="end">q from {} (blue) to {} (red)</text>"#,
            W - M,
            tick(q0),
            tick(q1)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Filled contour map of `log10 ||(A - z)^{-1}||` over a row-major
/// `n_re × n_im` lattice, quantized to `levels` bands.
pub fn pseudospectra_map(points: &[PseudospectraPoint], n_re: usize, n_im: usize, levels: usize) -> String {
    let f = Frame {
        x0: points.iter().map(|p| p.z.re).fold(f64::INFINITY, f64::min),
        x1: points.iter().map(|p| p.z.re).fold(f64::NEG_INFINITY, f64::max),
        y0: points.iter().map(|p| p.z.im).fold(f64::INFINITY, f64::min),
        y1: points.iter().map(|p| p.z.im).fold(f64::NEG_INFINITY, f64::max),
    };
    let f = if f.x1 > f.x0 && f.y1 > f.y0 {
        f
    } else {
        Frame::fit(points.iter().map(|p| p.z.re), points.iter().map(|p| p.z.im))
    };
    let logs: Vec<f64> = points.iter().map(|p| p.resolvent_norm.log10()).collect();
    let finite = logs.iter().copied().filter(|v| v.is_finite());
    let lo = finite.clone().fold(f64::INFINITY, f64::min);
    let hi = finite.fold(f64::NEG_INFINITY, f64::max);
    let levels = levels.max(2);
    let band = |v: f64| -> f64 {
        if !v.is_finite() {
            return 1.0;
        }
        if hi <= lo {
            return 0.0;
        }
        let k = (((v - lo) / (hi - lo)) * levels as f64).floor().min(levels as f64 - 1.0);
        k / (levels - 1) as f64
    };

    let cw = (f.px(f.x1) - f.px(f.x0)) / n_re.saturating_sub(1).max(1) as f64;
    let ch = (f.py(f.y0) - f.py(f.y1)) / n_im.saturating_sub(1).max(1) as f64;
    let mut s = String::new();
    open(&mut s, "log10 resolvent norm");
    for (p, &v) in points.iter().zip(&logs) {
        let stroke = if p.converged { "none" } else { "black" };
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}" stroke="{stroke}"/>"#,
            f.px(p.z.re) - cw / 2.0,
            f.py(p.z.im) - ch / 2.0,
            cw,
            ch,
            ramp(band(v))
        );
    }
    axes(&mut s, &f, "Re z", "Im z");
    if lo.is_finite() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="44" text-anchor="end">{levels} bands, {:.2} (blue) to {:.2} (red); outlined: unconverged</text>"#,
            W - M,
            lo,
            hi
        );
    }
    s.push_str("</svg>\n");
    s
}
