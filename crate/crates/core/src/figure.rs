//! SVG drawing of the meridian section of `Δ_θ`.
//!
//! The drawing has a fixed viewBox of 400 user units per unit length, so files
//! for the same `θ` are byte-identical and diffable. Coordinates are written
//! with four decimals.

use std::fmt::Write as _;

use crate::closed_form::{delta_params, Aperture};
use crate::error::Result;

const SCALE: f64 = 400.0;
/// Visible window in section coordinates: `x ∈ [−0.2, 1.3]`, `y ∈ [−1.1, 1.1]`.
const VIEW: (f64, f64, f64, f64) = (-0.2, -1.1, 1.5, 2.2);
const PLANE_HALF_HEIGHT: f64 = 0.75;
const CONE_LENGTH: f64 = 1.2;

pub const PART1_FILL: &str = "#2e9e4f";
pub const PART2_FILL: &str = "#d1403a";
pub const PART3_FILL: &str = "#3a62d1";

fn num(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

/// Section point to SVG user units (the SVG y-axis points down).
fn pt(x: f64, y: f64) -> String {
    format!("{},{}", num(SCALE * x), num(-SCALE * y))
}

fn len(v: f64) -> String {
    num(SCALE * v)
}

/// Renders the section of `Δ_θ` by the `Ox₁x₂` plane: the cone triangle, the
/// band of the radius-½ ball and the unit-ball cap as three filled regions,
/// with the junction planes `x = a` and `x = b` dashed.
pub fn section_svg(theta: Aperture) -> Result<String> {
    let d = delta_params(theta)?;
    let (a, b, m, rj) = (d.a, d.b, d.m, d.r_j);
    let half = 0.5 * theta.radians();
    let mut s = String::new();
    let (vx, vy, vw, vh) = VIEW;
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        len(vx),
        len(vy),
        len(vw),
        len(vh),
        len(vw),
        len(vh)
    );
    let _ = writeln!(s, "<title>Meridian section, theta = {}</title>", format_args!("{:.6}", theta.radians()));
    let _ = writeln!(s, r#"<g id="parts" stroke="none" fill-opacity="0.6">"#);
    let _ = writeln!(
        s,
        r#"<path id="part1" fill="{PART1_FILL}" d="M {} L {} L {} Z"/>"#,
        pt(0.0, 0.0),
        pt(a, rj),
        pt(a, -rj)
    );
    let r2 = len(0.5);
    let _ = writeln!(
        s,
        r#"<path id="part2" fill="{PART2_FILL}" d="M {} A {r2} {r2} 0 0 1 {} L {} A {r2} {r2} 0 0 1 {} Z"/>"#,
        pt(a, rj),
        pt(b, rj),
        pt(b, -rj),
        pt(a, -rj)
    );
    let r1 = len(1.0);
    let _ = writeln!(
        s,
        r#"<path id="part3" fill="{PART3_FILL}" d="M {} A {r1} {r1} 0 0 1 {} Z"/>"#,
        pt(b, rj),
        pt(b, -rj)
    );
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g id="reference" fill="none" stroke="#000000" stroke-width="1.5">"##);
    let _ = writeln!(s, r#"<line class="axis" x1="{}" y1="0.0000" x2="{}" y2="0.0000"/>"#, len(vx), len(vx + vw));
    let _ = writeln!(s, r#"<line class="axis" x1="0.0000" y1="{}" x2="0.0000" y2="{}"/>"#, len(-vy), len(vy));
    let _ = writeln!(s, r#"<circle class="unit-ball" cx="0.0000" cy="0.0000" r="{r1}"/>"#);
    let _ = writeln!(s, r#"<circle class="middle-ball" cx="{}" cy="0.0000" r="{r2}"/>"#, len(m));
    for sign in [1.0, -1.0] {
        let end = pt(CONE_LENGTH * half.cos(), sign * CONE_LENGTH * half.sin());
        let (ex, ey) = end.split_once(',').expect("pt has a comma");
        let _ = writeln!(s, r#"<line class="cone" x1="0.0000" y1="0.0000" x2="{ex}" y2="{ey}"/>"#);
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r##"<g id="planes" stroke="#000000" stroke-width="1.5" stroke-dasharray="8 6">"##
    );
    for (id, x) in [("plane-a", a), ("plane-b", b)] {
        let _ = writeln!(
            s,
            r#"<line id="{id}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            len(x),
            len(-PLANE_HALF_HEIGHT),
            len(x),
            len(PLANE_HALF_HEIGHT)
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g id="marks" fill="#000000" font-family="serif" font-size="28">"##);
    for x in [a, m, b] {
        let _ = writeln!(s, r#"<circle cx="{}" cy="0.0000" r="5.0000"/>"#, len(x));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}">O</text>"#, len(-0.08), len(-0.06));
    let _ = writeln!(s, r#"<text x="{}" y="{}">a</text>"#, len(a - 0.04), len(PLANE_HALF_HEIGHT + 0.06));
    let _ = writeln!(s, r#"<text x="{}" y="{}">b</text>"#, len(b + 0.01), len(PLANE_HALF_HEIGHT + 0.06));
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    #[test]
    fn three_parts_two_planes() {
        let svg = section_svg(Aperture::new(FRAC_PI_2).unwrap()).unwrap();
        for id in ["part1", "part2", "part3", "plane-a", "plane-b"] {
            assert_eq!(svg.matches(&format!(r#"id="{id}""#)).count(), 1, "{id}");
        }
        assert_eq!(svg.matches("<path ").count(), 3);
        assert_eq!(svg.matches(r#"class="cone""#).count(), 2);
        // a = r_j = 1/√5 at the right angle: 400/√5 = 178.8854.
        assert!(svg.contains(r#"d="M 0.0000,0.0000 L 178.8854,-178.8854 L 178.8854,178.8854 Z""#));
        assert!(svg.contains(r#"<line id="plane-b" x1="357.7709""#));
    }

    #[test]
    fn deterministic() {
        let t = Aperture::new(2.2).unwrap();
        assert_eq!(section_svg(t).unwrap(), section_svg(t).unwrap());
        assert_ne!(section_svg(t).unwrap(), section_svg(Aperture::new(2.3).unwrap()).unwrap());
    }

    #[test]
    fn needs_closed_form_range() {
        assert!(section_svg(Aperture::new(1.0).unwrap()).is_err());
        assert!(section_svg(Aperture::new(FRAC_PI_3).unwrap()).is_ok());
    }

    #[test]
    fn no_negative_zero() {
        let svg = section_svg(Aperture::new(FRAC_PI_2).unwrap()).unwrap();
        assert!(!svg.contains("-0.0000"));
    }
}
