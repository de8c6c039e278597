//! Static line plots of scalar time series, one panel per series.

use std::fmt::Write;

const W: f64 = 640.0;
const PANEL_H: f64 = 150.0;
const MARGIN_L: f64 = 90.0;
const MARGIN_R: f64 = 20.0;
const PAD: f64 = 28.0;

fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e-3 && v.abs() < 1e4 {
        format!("{v:.4}")
    } else {
        format!("{v:.3e}")
    }
}

/// Renders `series` against `x`. Non-finite samples are skipped.
pub fn plot(title: &str, x: &[f64], series: &[(String, &[f64])]) -> String {
    let h = PAD + series.len() as f64 * (PANEL_H + PAD);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{h}" viewBox="0 0 {W} {h}" font-family="monospace" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="18" font-size="13">{}</text>"#, MARGIN_L, escape(title));
    let (x0, x1) = range(x.iter().copied());
    let pw = W - MARGIN_L - MARGIN_R;
    for (i, (name, ys)) in series.iter().enumerate() {
        let top = PAD + i as f64 * (PANEL_H + PAD) + 10.0;
        let (y0, y1) = range(ys.iter().copied());
        let _ = writeln!(
            s,
            r##"<rect x="{MARGIN_L}" y="{top}" width="{pw}" height="{PANEL_H}" fill="none" stroke="#999"/>"##
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, MARGIN_L + 4.0, top - 3.0, escape(name));
        let _ = writeln!(s, r#"<text x="4" y="{}">{}</text>"#, top + 10.0, fmt_num(y1));
        let _ = writeln!(s, r#"<text x="4" y="{}">{}</text>"#, top + PANEL_H, fmt_num(y0));
        let mut pts = String::new();
        for (xv, yv) in x.iter().zip(ys.iter()) {
            if !xv.is_finite() || !yv.is_finite() {
                continue;
            }
            let px = MARGIN_L + (xv - x0) / (x1 - x0) * pw;
            let py = top + PANEL_H - (yv - y0) / (y1 - y0) * PANEL_H;
            let _ = write!(pts, "{px:.2},{py:.2} ");
        }
        let _ = writeln!(
            s,
            r##"<polyline fill="none" stroke="#1f5fa8" stroke-width="1.5" points="{}"/>"##,
            pts.trim_end()
        );
    }
    if let Some(last) = series.len().checked_sub(1) {
        let y = PAD + last as f64 * (PANEL_H + PAD) + 10.0 + PANEL_H + 14.0;
        let _ = writeln!(s, r#"<text x="{MARGIN_L}" y="{y}">t = {}</text>"#, fmt_num(x0));
        let _ = writeln!(s, r#"<text x="{}" y="{y}" text-anchor="end">t = {}</text>"#, W - MARGIN_R, fmt_num(x1));
    }
    s.push_str("</svg>\n");
    s
}

/// Finite min/max, widened when degenerate.
fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v
        .filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= 1e-300_f64.max(hi.abs() * 1e-14) {
        let d = if lo == 0.0 { 1.0 } else { lo.abs() * 0.5 };
        return (lo - d, hi + d);
    }
    (lo, hi)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
