//! Minimal static SVG plots of the curve, singular points and roots.

use crate::format::num;
use num_complex::Complex64;
use std::fmt::Write as _;
use szego_core::szego::CurveSet;

const HALF_WIDTH: f64 = 1.6;

fn point(z: Complex64) -> String {
    format!("{},{}", num(z.re), num(-z.im))
}

pub fn render(curve: &CurveSet, singular: &[Complex64], roots: &[Complex64]) -> String {
    let w = 2.0 * HALF_WIDTH;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="640" height="640" viewBox="{} {} {} {}">"#,
        num(-HALF_WIDTH),
        num(-HALF_WIDTH),
        num(w),
        num(w)
    );
    let _ = writeln!(
        s,
        r#"<circle cx="0" cy="0" r="1" fill="none" stroke="lightgray" stroke-width="0.005"/>"#
    );
    for arc in &curve.arcs {
        let pts: Vec<String> = arc.points.iter().map(|&z| point(z)).collect();
        let tag = if arc.closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            s,
            r#"<{tag} points="{}" fill="none" stroke="black" stroke-width="0.006"/>"#,
            pts.join(" ")
        );
    }
    for &z in roots {
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="0.012" fill="steelblue"/>"#, num(z.re), num(-z.im));
    }
    for &a in singular {
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="0.018" fill="crimson"/>"#, num(a.re), num(-a.im));
    }
    s.push_str("</svg>\n");
    s
}
