//! Steiner symmetrization and Steiner symmetrals.
//!
//! [`steiner_symmetrize`] replaces every chord of a convex polygon parallel to
//! a line `L` through the origin by a chord of equal length centred on the
//! perpendicular line through the origin. Chord length is piecewise linear in
//! the perpendicular coordinate with breakpoints at the vertices, so the
//! construction is exact.
//!
//! [`steiner_symmetral_profile`] does the 3D analogue about the first
//! coordinate axis: each cross-section of a sliced body becomes a centred disk
//! of equal area, giving a solid of revolution.

use std::f64::consts::PI;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, ConvexPolygon, Direction2, Point2, Point3, RotationalProfile};
use crate::oracles::hausdorff_to_disk;
use crate::rng;

/// Number of slices used for symmetral experiments unless stated otherwise.
pub const DEFAULT_SLICES: usize = 256;

/// Lower or upper boundary of a polygon as a function of the perpendicular coordinate.
fn chain(points: impl Iterator<Item = Point2>, keep_max: bool) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::new();
    let mut running = f64::NEG_INFINITY;
    for mut p in points {
        // Rotation noise can make an extreme edge dip backwards by an ulp.
        running = running.max(p.x);
        p.x = running;
        match out.last_mut() {
            Some(last) if last.x == p.x => {
                if (keep_max && p.y > last.y) || (!keep_max && p.y < last.y) {
                    last.y = p.y;
                }
            }
            _ => out.push(p),
        }
    }
    out
}

/// Evaluates a chain at increasing abscissas `us` (within its range).
fn sample_chain(chain: &[Point2], us: &[f64]) -> Vec<f64> {
    let mut j = 0;
    us.iter()
        .map(|&u| {
            while j + 1 < chain.len() && chain[j + 1].x < u {
                j += 1;
            }
            if j + 1 >= chain.len() {
                return chain[chain.len() - 1].y;
            }
            let (a, b) = (chain[j], chain[j + 1]);
            if u <= a.x {
                a.y
            } else if u >= b.x {
                b.y
            } else {
                a.y + (b.y - a.y) * (u - a.x) / (b.x - a.x)
            }
        })
        .collect()
}

/// Steiner symmetrization of `poly` about `line`.
///
/// Chords parallel to `line` keep their length and get centred on the line
/// through the origin perpendicular to `line`.
pub fn steiner_symmetrize(poly: &ConvexPolygon, line: Direction2) -> Result<ConvexPolygon> {
    let along = line.unit();
    let across = line.normal();
    // Frame (u, v): u across the chords, v along them. The frame is positively oriented,
    // so counterclockwise order survives the change of coordinates.
    let local: Vec<Point2> = poly
        .vertices()
        .iter()
        .map(|p| Point2::new(p.dot(across), p.dot(along)))
        .collect();
    let n = local.len();
    let lex = |a: &Point2, b: &Point2| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y));
    let start = (0..n).min_by(|&i, &j| lex(&local[i], &local[j])).expect("nonempty");
    let end = (0..n).max_by(|&i, &j| lex(&local[i], &local[j])).expect("nonempty");

    // Counterclockwise from the leftmost-lowest vertex walks the lower boundary.
    let lower_len = (end + n - start) % n + 1;
    let lower = chain((0..lower_len).map(|k| local[(start + k) % n]), false);
    let upper_len = (start + n - end) % n + 1;
    let upper_rev: Vec<Point2> = (0..upper_len).map(|k| local[(end + k) % n]).collect();
    let upper = chain(upper_rev.into_iter().rev(), true);

    let mut us: Vec<f64> = lower.iter().chain(upper.iter()).map(|p| p.x).collect();
    us.sort_by(f64::total_cmp);
    us.dedup();
    let lo = sample_chain(&lower, &us);
    let hi = sample_chain(&upper, &us);
    let half: Vec<f64> = hi.iter().zip(&lo).map(|(h, l)| 0.5 * (h - l).max(0.0)).collect();

    let to_world = |u: f64, v: f64| across * u + along * v;
    let mut out: Vec<Point2> = Vec::with_capacity(2 * us.len());
    out.extend(us.iter().zip(&half).map(|(&u, &h)| to_world(u, -h)));
    out.extend(us.iter().zip(&half).rev().map(|(&u, &h)| to_world(u, h)));
    let exact: f64 = us.windows(2).zip(half.windows(2)).map(|(u, h)| (u[1] - u[0]) * (h[0] + h[1])).sum();
    let merged = ConvexPolygon::new(out)?;
    // Merging near-collinear vertices always shaves a little area, and over
    // repeated runs the loss accumulates. Scaling about the origin restores it
    // and keeps the reflection symmetry.
    let k = (exact / merged.area()).sqrt();
    if k == 1.0 || !k.is_finite() {
        return Ok(merged);
    }
    merged.map(|p| p * k)
}

/// Per-step record of a random symmetrization run.
///
/// Index 0 of `areas` and `hausdorff_to_disk` describes the input polygon;
/// index `i` the polygon after `i` symmetrizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub steps: usize,
    pub seed: u64,
    pub directions: Vec<f64>,
    pub areas: Vec<f64>,
    pub hausdorff_to_disk: Vec<f64>,
}

impl ConvergenceTrace {
    /// Largest relative deviation of any recorded area from the initial one.
    pub fn area_drift(&self) -> f64 {
        let a0 = self.areas[0];
        self.areas.iter().map(|a| (a - a0).abs() / a0).fold(0.0, f64::max)
    }

    pub fn final_distance(&self) -> f64 {
        *self.hausdorff_to_disk.last().expect("trace has the initial entry")
    }

    /// CSV with header `step,area,hausdorff_to_disk`.
    pub fn to_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("step,area,hausdorff_to_disk\n");
        for (i, (a, d)) in self.areas.iter().zip(&self.hausdorff_to_disk).enumerate() {
            let _ = writeln!(out, "{i},{},{}", crate::format::sig17(*a), crate::format::sig17(*d));
        }
        out
    }
}

/// Result of [`random_symmetrization_run`]: the trace and the last polygon.
#[derive(Debug, Clone)]
pub struct SymmetrizationRun {
    pub trace: ConvergenceTrace,
    pub polygon: ConvexPolygon,
}

/// `steps` symmetrizations about lines with i.i.d. uniform angles in `[0, π)`.
pub fn random_symmetrization_run(poly: &ConvexPolygon, steps: usize, seed: u64) -> Result<SymmetrizationRun> {
    if steps == 0 {
        return Err(Error::InvalidArgument("need at least one step".into()));
    }
    let mut rng = rng::stream(seed, 0);
    let area0 = poly.area();
    let radius = (area0 / PI).sqrt();
    let mut trace = ConvergenceTrace {
        steps,
        seed,
        directions: Vec::with_capacity(steps),
        areas: vec![area0],
        hausdorff_to_disk: vec![hausdorff_to_disk(poly, radius)],
    };
    let mut current = poly.clone();
    for _ in 0..steps {
        let phi = rng.random_range(0.0..PI);
        current = steiner_symmetrize(&current, Direction2::new(phi))?;
        trace.directions.push(phi);
        trace.areas.push(current.area());
        trace.hausdorff_to_disk.push(hausdorff_to_disk(&current, radius));
    }
    Ok(SymmetrizationRun { trace, polygon: current })
}

/// A convex body given by cross-sections perpendicular to the first axis.
///
/// A `None` section has zero area (a point or segment), as happens at the
/// two extreme abscissas.
#[derive(Debug, Clone, PartialEq)]
pub struct SlicedBody {
    slices: Vec<(f64, Option<ConvexPolygon>)>,
}

impl SlicedBody {
    pub fn new(slices: Vec<(f64, Option<ConvexPolygon>)>) -> Result<Self> {
        if slices.is_empty() || slices.iter().all(|(_, s)| s.is_none()) {
            return Err(Error::EmptySlices);
        }
        if slices.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidArgument("slice abscissas must be strictly increasing".into()));
        }
        Ok(Self { slices })
    }

    /// Slices the convex hull of `points` by `n_slices` planes orthogonal to `axis`,
    /// spanning the hull's full extent along `axis` (end planes included).
    ///
    /// Section coordinates are taken in a fixed orthonormal frame of the plane.
    pub fn from_point_hull(points: &[Point3], axis: Point3, n_slices: usize) -> Result<Self> {
        if n_slices < 2 || points.len() < 4 {
            return Err(Error::InvalidArgument("need at least 2 slices and 4 points".into()));
        }
        let len = axis.norm();
        if len == 0.0 || !len.is_finite() {
            return Err(Error::InvalidArgument("axis must be a nonzero vector".into()));
        }
        let e1 = axis.scaled(1.0 / len);
        let helper = if e1.x1.abs() < 0.9 { Point3::new(1.0, 0.0, 0.0) } else { Point3::new(0.0, 1.0, 0.0) };
        let e2 = {
            let w = helper - e1.scaled(helper.dot(e1));
            w.scaled(1.0 / w.norm())
        };
        let e3 = e1.cross(e2);
        let local: Vec<(f64, Point2)> =
            points.iter().map(|p| (p.dot(e1), Point2::new(p.dot(e2), p.dot(e3)))).collect();
        let lo = local.iter().map(|l| l.0).fold(f64::INFINITY, f64::min);
        let hi = local.iter().map(|l| l.0).fold(f64::NEG_INFINITY, f64::max);
        if hi <= lo {
            return Err(Error::InvalidArgument("points are flat along the axis".into()));
        }
        let slices = (0..n_slices)
            .map(|k| {
                let x = if k == n_slices - 1 { hi } else { lo + (hi - lo) * k as f64 / (n_slices - 1) as f64 };
                (x, section_at(&local, x))
            })
            .collect();
        Self::new(slices)
    }

    pub fn slices(&self) -> &[(f64, Option<ConvexPolygon>)] {
        &self.slices
    }

    pub fn areas(&self) -> Vec<f64> {
        self.slices.iter().map(|(_, s)| s.as_ref().map_or(0.0, ConvexPolygon::area)).collect()
    }

    /// Trapezoidal volume over the section areas.
    pub fn volume(&self) -> f64 {
        let areas = self.areas();
        self.slices
            .windows(2)
            .zip(areas.windows(2))
            .map(|(s, a)| 0.5 * (s[1].0 - s[0].0) * (a[0] + a[1]))
            .sum()
    }
}

/// Section of the hull of `local` points by the plane at abscissa `x`: the hull
/// of all points on the plane and all crossings of point-pair segments.
fn section_at(local: &[(f64, Point2)], x: f64) -> Option<ConvexPolygon> {
    let mut pts = Vec::new();
    for (i, &(xi, pi)) in local.iter().enumerate() {
        if xi == x {
            pts.push(pi);
        }
        for &(xj, pj) in &local[i + 1..] {
            if (xi < x && x < xj) || (xj < x && x < xi) {
                let t = (x - xi) / (xj - xi);
                pts.push(pi + (pj - pi) * t);
            }
        }
    }
    ConvexPolygon::new(convex_hull(&pts)).ok()
}

/// Steiner symmetral about the slicing axis: radius `√(area/π)` at each slice.
pub fn steiner_symmetral_profile(body: &SlicedBody) -> Result<RotationalProfile> {
    let knots = body
        .slices
        .iter()
        .zip(body.areas())
        .map(|((x, _), area)| (*x, (area / PI).sqrt()))
        .collect();
    RotationalProfile::new(knots)
}
