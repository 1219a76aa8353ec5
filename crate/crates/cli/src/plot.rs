//! A small static SVG line plot of area / |u|^2 against |u|.

use std::fmt::Write as _;

use smforge::diagram::AreaRow;

const W: f64 = 480.0;
const H: f64 = 320.0;
const MARGIN: f64 = 48.0;

pub fn area_svg(rows: &[AreaRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let x0 = MARGIN;
    let y0 = H - MARGIN;
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#, W - MARGIN / 2.0);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{}" stroke="black"/>"#, MARGIN / 2.0);
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">|u|</text>"#, W / 2.0, H - 12.0);
    let _ = writeln!(out, r#"<text x="14" y="{}" font-size="12" transform="rotate(-90 14 {})" text-anchor="middle">area / |u|^2</text>"#, H / 2.0, H / 2.0);
    let max_len = rows.iter().map(|r| r.u.len()).max().unwrap_or(1).max(1) as f64;
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max).max(1.0);
    let sx = |len: usize| x0 + (len as f64 / max_len) * (W - 2.0 * MARGIN);
    let sy = |ratio: f64| y0 - (ratio / max_ratio) * (H - 2.0 * MARGIN);
    let points: Vec<String> = rows.iter().map(|r| format!("{:.1},{:.1}", sx(r.u.len()), sy(r.ratio))).collect();
    let _ = writeln!(out, r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#, points.join(" "));
    for r in rows {
        let (x, y) = (sx(r.u.len()), sy(r.ratio));
        let _ = writeln!(out, r#"<circle cx="{x:.1}" cy="{y:.1}" r="3" fill="steelblue"/>"#);
        let _ = writeln!(out, r#"<text x="{x:.1}" y="{:.1}" font-size="10" text-anchor="middle">{:.1}</text>"#, y - 8.0, r.ratio);
        let _ = writeln!(out, r#"<text x="{x:.1}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#, y0 + 14.0, r.u.len());
    }
    out.push_str("</svg>\n");
    out
}
