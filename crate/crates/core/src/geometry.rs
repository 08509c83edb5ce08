//! Planar and rotational geometric primitives.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Relative tolerance (in units of the squared bounding-box diagonal) below
/// which consecutive polygon edges count as collinear and are merged.
pub const COLLINEAR_TOL: f64 = 1e-12;

/// Tolerance on discrete second differences for profile concavity.
pub const CONCAVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(radius: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(radius * c, radius * s)
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotates counterclockwise about the origin by `angle`.
    pub fn rotated(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Self) -> Self {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Self) -> Self {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Self {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Self {
        Point2::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x1: 0.0, x2: 0.0, x3: 0.0 };

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x1 * o.x1 + self.x2 * o.x2 + self.x3 * o.x3
    }

    pub fn cross(self, o: Self) -> Self {
        Point3::new(
            self.x2 * o.x3 - self.x3 * o.x2,
            self.x3 * o.x1 - self.x1 * o.x3,
            self.x1 * o.x2 - self.x2 * o.x1,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, o: Self) -> f64 {
        (self - o).norm()
    }

    pub fn scaled(self, s: f64) -> Self {
        Point3::new(self.x1 * s, self.x2 * s, self.x3 * s)
    }

    /// Distance from the first coordinate axis.
    pub fn axial_radius(self) -> f64 {
        self.x2.hypot(self.x3)
    }
}

impl From<[f64; 3]> for Point3 {
    fn from([x1, x2, x3]: [f64; 3]) -> Self {
        Self { x1, x2, x3 }
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        [p.x1, p.x2, p.x3]
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Self) -> Self {
        Point3::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Self) -> Self {
        Point3::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

/// Orientation of a line through the origin, stored as an angle in `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct Direction2(f64);

impl Direction2 {
    pub fn new(angle: f64) -> Self {
        let mut phi = angle.rem_euclid(PI);
        // rem_euclid can round up to exactly PI for tiny negative inputs.
        if phi >= PI {
            phi = 0.0;
        }
        Self(phi)
    }

    pub fn angle(self) -> f64 {
        self.0
    }

    /// Unit vector along the line.
    pub fn unit(self) -> Point2 {
        Point2::polar(1.0, self.0)
    }

    /// Unit normal such that `(normal, unit)` is a positively oriented frame.
    pub fn normal(self) -> Point2 {
        let u = self.unit();
        Point2::new(u.y, -u.x)
    }
}

impl From<f64> for Direction2 {
    fn from(angle: f64) -> Self {
        Direction2::new(angle)
    }
}

impl From<Direction2> for f64 {
    fn from(d: Direction2) -> Self {
        d.0
    }
}

/// Strictly convex polygon with counterclockwise vertices.
///
/// Construction merges duplicate and near-collinear vertices, so the stored
/// vertex list may be shorter than the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolygon", into = "RawPolygon")]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

#[derive(Serialize, Deserialize)]
struct RawPolygon {
    vertices: Vec<Point2>,
}

impl TryFrom<RawPolygon> for ConvexPolygon {
    type Error = Error;
    fn try_from(raw: RawPolygon) -> Result<Self> {
        ConvexPolygon::new(raw.vertices)
    }
}

impl From<ConvexPolygon> for RawPolygon {
    fn from(p: ConvexPolygon) -> Self {
        RawPolygon { vertices: p.vertices }
    }
}

fn turn(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - b)
}

fn bbox_diagonal(points: &[Point2]) -> f64 {
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    hi.distance(lo)
}

fn twice_signed_area(points: &[Point2]) -> f64 {
    let n = points.len();
    (0..n).map(|i| points[i].cross(points[(i + 1) % n])).sum()
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::TooFewVertices(vertices.len()));
        }
        if !vertices.iter().all(|p| p.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = bbox_diagonal(&vertices);
        let eps = COLLINEAR_TOL * scale * scale;
        if scale == 0.0 {
            return Err(Error::DegeneratePolygon);
        }
        let area2 = twice_signed_area(&vertices);
        if area2.abs() <= eps {
            return Err(Error::DegeneratePolygon);
        }
        if area2 < 0.0 {
            return Err(Error::Clockwise);
        }
        let n = vertices.len();
        for i in 0..n {
            if turn(vertices[(i + n - 1) % n], vertices[i], vertices[(i + 1) % n]) < -eps {
                return Err(Error::NonConvex);
            }
        }

        let mut out: Vec<Point2> = Vec::with_capacity(n);
        for &p in &vertices {
            while out.len() >= 2 && turn(out[out.len() - 2], out[out.len() - 1], p) <= eps {
                out.pop();
            }
            out.push(p);
        }
        let mut start = 0;
        loop {
            let live = out.len() - start;
            if live < 3 {
                return Err(Error::DegeneratePolygon);
            }
            let last = out.len() - 1;
            if turn(out[last - 1], out[last], out[start]) <= eps {
                out.pop();
            } else if turn(out[last], out[start], out[start + 1]) <= eps {
                start += 1;
            } else {
                break;
            }
        }
        out.drain(..start);

        // All left turns is not enough: a pentagram turns left everywhere.
        let m = out.len();
        let winding: f64 = (0..m)
            .map(|i| {
                let e0 = out[i] - out[(i + m - 1) % m];
                let e1 = out[(i + 1) % m] - out[i];
                e0.cross(e1).atan2(e0.dot(e1))
            })
            .sum();
        if (winding - 2.0 * PI).abs() > 1e-6 {
            return Err(Error::NonConvex);
        }
        Ok(Self { vertices: out })
    }

    /// Convex hull of an arbitrary point set (Andrew's monotone chain).
    pub fn hull(points: &[Point2]) -> Result<Self> {
        Self::new(convex_hull(points))
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Iterates edges `(v_i, v_{i+1})`, wrapping around.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        0.5 * twice_signed_area(&self.vertices)
    }

    /// Largest vertex-to-vertex distance; for a convex polygon this is the diameter.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.max(v[i].distance(v[j]));
            }
        }
        best
    }

    pub fn contains(&self, p: Point2) -> bool {
        let scale = bbox_diagonal(&self.vertices);
        let tol = 1e-12 * scale;
        self.edges().all(|(a, b)| {
            let e = b - a;
            e.cross(p - a) >= -tol * e.norm()
        })
    }

    /// Applies `f` to every vertex and rebuilds the polygon.
    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Result<Self> {
        Self::new(self.vertices.iter().map(|&p| f(p)).collect())
    }

    pub fn centroid(&self) -> Point2 {
        let n = self.vertices.len();
        let (mut cx, mut cy, mut a2) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let w = p.cross(q);
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
            a2 += w;
        }
        Point2::new(cx / (3.0 * a2), cy / (3.0 * a2))
    }
}

/// Counterclockwise convex hull vertices, collinear points dropped.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let base = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= base + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Convex hull of `n` points drawn uniformly from the unit disk.
///
/// Deterministic in `(n, seed)`. A degenerate hull (only possible for tiny
/// `n`) is redrawn from the next substream.
pub fn make_random_convex_polygon(n: usize, seed: u64) -> Result<ConvexPolygon> {
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    const MAX_RETRIES: u64 = 16;
    let mut last_err = Error::DegeneratePolygon;
    for substream in 0..MAX_RETRIES {
        let mut rng = rng::stream(seed, substream);
        let points: Vec<Point2> = (0..n)
            .map(|_| {
                let r: f64 = rng.random::<f64>().sqrt();
                let t: f64 = rng.random::<f64>() * 2.0 * PI;
                Point2::polar(r, t)
            })
            .collect();
        match ConvexPolygon::hull(&points) {
            Ok(p) => return Ok(p),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// Regular `n`-gon of the given circumradius centred at the origin.
pub fn regular_polygon(n: usize, circumradius: f64) -> Result<ConvexPolygon> {
    ConvexPolygon::new(
        (0..n)
            .map(|k| Point2::polar(circumradius, 2.0 * PI * k as f64 / n as f64))
            .collect(),
    )
}

/// Piecewise-linear meridian radius function `r(x)` of a solid of revolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile", into = "RawProfile")]
pub struct RotationalProfile {
    knots: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct RawProfile {
    knots: Vec<[f64; 2]>,
}

impl TryFrom<RawProfile> for RotationalProfile {
    type Error = Error;
    fn try_from(raw: RawProfile) -> Result<Self> {
        RotationalProfile::new(raw.knots.into_iter().map(|[x, r]| (x, r)).collect())
    }
}

impl From<RotationalProfile> for RawProfile {
    fn from(p: RotationalProfile) -> Self {
        RawProfile { knots: p.knots.into_iter().map(|(x, r)| [x, r]).collect() }
    }
}

/// Largest concavity violation: how far any interior knot sits below the
/// chord through its neighbours (0 for a concave sequence).
pub fn concavity_defect(xs: &[f64], rs: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for i in 1..xs.len().saturating_sub(1) {
        let t = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
        let chord = rs[i - 1] + t * (rs[i + 1] - rs[i - 1]);
        worst = worst.max(chord - rs[i]);
    }
    worst
}

impl RotationalProfile {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidProfile(format!("need at least 2 knots, got {}", knots.len())));
        }
        if knots.iter().any(|(x, r)| !x.is_finite() || !r.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(w) = knots.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidProfile(format!(
                "abscissas must be strictly increasing ({} then {})",
                w[0].0, w[1].0
            )));
        }
        if let Some((x, r)) = knots.iter().find(|(_, r)| *r < 0.0) {
            return Err(Error::InvalidProfile(format!("negative radius {r} at x = {x}")));
        }
        let (xs, rs): (Vec<f64>, Vec<f64>) = knots.iter().copied().unzip();
        let defect = concavity_defect(&xs, &rs);
        if defect > CONCAVITY_TOL {
            return Err(Error::InvalidProfile(format!("not concave (defect {defect:.3e})")));
        }
        Ok(Self { knots })
    }

    /// Samples `f` at `n` equally spaced abscissas on `[x0, x1]`.
    pub fn from_fn(x0: f64, x1: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 || x1 <= x0 {
            return Err(Error::InvalidProfile("need n >= 2 on a nonempty interval".into()));
        }
        let step = (x1 - x0) / (n - 1) as f64;
        Self::new(
            (0..n)
                .map(|i| {
                    let x = if i == n - 1 { x1 } else { x0 + step * i as f64 };
                    (x, f(x))
                })
                .collect(),
        )
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn xs(&self) -> Vec<f64> {
        self.knots.iter().map(|k| k.0).collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.knots.iter().map(|k| k.1).collect()
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    pub fn support(&self) -> (f64, f64) {
        (self.knots[0].0, self.knots[self.knots.len() - 1].0)
    }

    pub fn max_radius(&self) -> f64 {
        self.knots.iter().map(|k| k.1).fold(0.0, f64::max)
    }

    /// Linear interpolation of the radius; zero outside the support.
    pub fn radius_at(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        let j = self.knots.partition_point(|k| k.0 <= x);
        if j == 0 {
            return self.knots[0].1;
        }
        if j == self.knots.len() {
            return self.knots[j - 1].1;
        }
        let (x0, r0) = self.knots[j - 1];
        let (x1, r1) = self.knots[j];
        r0 + (r1 - r0) * (x - x0) / (x1 - x0)
    }
}

/// Meridian section `{(x, ±r(x))}` of the solid of revolution, counterclockwise.
///
/// Each knot interval is subdivided into `samples_per_segment` pieces; the
/// interior samples are collinear and get merged by the polygon constructor.
pub fn profile_to_polygon(p: &RotationalProfile, samples_per_segment: usize) -> Result<ConvexPolygon> {
    if samples_per_segment == 0 {
        return Err(Error::InvalidArgument("samples_per_segment must be positive".into()));
    }
    if p.max_radius() <= 0.0 {
        return Err(Error::DegenerateProfile);
    }
    let mut chain: Vec<(f64, f64)> = Vec::with_capacity(p.len() * samples_per_segment);
    for w in p.knots().windows(2) {
        let ((x0, r0), (x1, r1)) = (w[0], w[1]);
        for k in 0..samples_per_segment {
            let t = k as f64 / samples_per_segment as f64;
            chain.push((x0 + t * (x1 - x0), r0 + t * (r1 - r0)));
        }
    }
    chain.push(p.knots()[p.len() - 1]);

    let mut vertices: Vec<Point2> = chain.iter().map(|&(x, r)| Point2::new(x, -r)).collect();
    vertices.extend(chain.iter().rev().map(|&(x, r)| Point2::new(x, r)));
    ConvexPolygon::new(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn poly(pts: &[(f64, f64)]) -> ConvexPolygon {
        ConvexPolygon::new(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    fn unit_square() -> ConvexPolygon {
        poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    }

    #[test]
    fn area_examples() {
        assert_eq!(unit_square().area(), 1.0);
        assert_eq!(poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]).area(), 0.5);
        let hex = regular_polygon(6, 1.0).unwrap();
        assert_relative_eq!(hex.area(), 2.598076211353316, epsilon = 1e-14);
        assert_relative_eq!(hex.area(), 1.5 * 3f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn diameter_examples() {
        assert_relative_eq!(unit_square().diameter(), 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]).diameter(), 2f64.sqrt());
        let disk = regular_polygon(100, 0.5).unwrap();
        assert!((disk.diameter() - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        let pts = |v: &[(f64, f64)]| v.iter().map(|&(x, y)| Point2::new(x, y)).collect::<Vec<_>>();
        assert_eq!(
            ConvexPolygon::new(pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])),
            Err(Error::DegeneratePolygon)
        );
        assert_eq!(ConvexPolygon::new(pts(&[(0.0, 0.0), (1.0, 0.0)])), Err(Error::TooFewVertices(2)));
        assert_eq!(
            ConvexPolygon::new(pts(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)])),
            Err(Error::Clockwise)
        );
        assert_eq!(
            ConvexPolygon::new(pts(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.2), (2.0, 2.0), (0.0, 2.0)])),
            Err(Error::NonConvex)
        );
        let star: Vec<Point2> = (0..5).map(|k| Point2::polar(1.0, 4.0 * PI * k as f64 / 5.0)).collect();
        assert_eq!(ConvexPolygon::new(star), Err(Error::NonConvex));
        assert_eq!(
            ConvexPolygon::new(pts(&[(0.0, 0.0), (f64::NAN, 0.0), (1.0, 1.0)])),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn constructor_merges_duplicates_and_collinear_points() {
        let p = poly(&[(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.0)]);
        assert_eq!(p.len(), 4);
        assert_eq!(p.area(), 1.0);
    }

    #[test]
    fn random_polygon_is_deterministic_and_inside_disk() {
        let a = make_random_convex_polygon(64, 1).unwrap();
        let b = make_random_convex_polygon(64, 1).unwrap();
        assert_eq!(a, b);
        assert!(a.vertices().iter().all(|v| v.norm() <= 1.0));
        let tri = make_random_convex_polygon(3, 7).unwrap();
        assert_eq!(tri.len(), 3);
        assert!(tri.area() > 0.0);
        assert_eq!(make_random_convex_polygon(2, 7), Err(Error::TooFewVertices(2)));
    }

    #[test]
    fn random_polygons_pass_invariants_over_many_seeds() {
        for seed in 0..1000 {
            let n = 3 + (seed as usize % 40);
            let p = make_random_convex_polygon(n, seed).unwrap();
            // Re-validating the stored vertices must succeed unchanged.
            assert_eq!(ConvexPolygon::new(p.vertices().to_vec()).unwrap(), p);
        }
    }

    #[test]
    fn cone_profile_section_is_a_triangle() {
        let cone = RotationalProfile::new(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap();
        let tri = profile_to_polygon(&cone, 1).unwrap();
        assert_eq!(
            tri.vertices(),
            &[Point2::new(0.0, 0.0), Point2::new(1.0, -1.0), Point2::new(1.0, 1.0)]
        );
        let finer = profile_to_polygon(&cone, 7).unwrap();
        assert_eq!(finer.len(), 3);
    }

    #[test]
    fn semicircle_profile_section_area_converges() {
        // Meridian section of the unit ball is the unit disk: area 2 * (pi/2).
        let mut last_err = f64::INFINITY;
        for n in [16, 64, 256, 1024] {
            let p = RotationalProfile::from_fn(-1.0, 1.0, n, |x| (1.0 - x * x).max(0.0).sqrt()).unwrap();
            let err = (profile_to_polygon(&p, 1).unwrap().area() - PI).abs();
            assert!(err < last_err);
            last_err = err;
        }
        assert!(last_err < 1e-3);
    }

    #[test]
    fn zero_profile_is_degenerate() {
        let p = RotationalProfile::new(vec![(0.0, 0.0), (1.0, 0.0)]).unwrap();
        assert_eq!(profile_to_polygon(&p, 1), Err(Error::DegenerateProfile));
    }

    #[test]
    fn profile_validation() {
        assert!(RotationalProfile::new(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(RotationalProfile::new(vec![(0.0, 0.0), (1.0, -1.0)]).is_err());
        // Convex dent in the middle.
        assert!(RotationalProfile::new(vec![(0.0, 1.0), (1.0, 0.5), (2.0, 1.0)]).is_err());
        let p = RotationalProfile::new(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 1.0)]).unwrap();
        assert_eq!(p.radius_at(0.5), 0.5);
        assert_eq!(p.radius_at(1.5), 1.0);
        assert_eq!(p.radius_at(3.0), 0.0);
    }

    #[test]
    fn json_round_trip() {
        let p = make_random_convex_polygon(20, 3).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.starts_with("{\"vertices\":[["));
        assert_eq!(serde_json::from_str::<ConvexPolygon>(&s).unwrap(), p);
        let prof = RotationalProfile::from_fn(0.0, 1.0, 9, |x| x * (1.0 - x) + 0.1).unwrap();
        let s = serde_json::to_string(&prof).unwrap();
        assert!(s.starts_with("{\"knots\":[["));
        assert_eq!(serde_json::from_str::<RotationalProfile>(&s).unwrap(), prof);
        assert!(serde_json::from_str::<ConvexPolygon>(r#"{"vertices":[[0,0],[1,0],[2,0]]}"#).is_err());
    }

    #[test]
    fn direction_normalization() {
        assert_relative_eq!(Direction2::new(-0.5).angle(), PI - 0.5);
        assert_relative_eq!(Direction2::new(3.0 * PI + 0.25).angle(), 0.25, epsilon = 1e-12);
        assert_eq!(Direction2::new(PI).angle(), 0.0);
        let d = Direction2::new(0.3);
        assert_relative_eq!(d.normal().cross(d.unit()), 1.0);
    }

    proptest! {
        #[test]
        fn area_and_diameter_are_rigid_invariants(
            seed in 0u64..10_000,
            angle in 0.0..2.0 * PI,
            tx in -5.0..5.0f64,
            ty in -5.0..5.0f64,
            scale in 0.1..10.0f64,
        ) {
            let p = make_random_convex_polygon(24, seed).unwrap();
            let q = p.map(|v| v.rotated(angle) + Point2::new(tx, ty)).unwrap();
            prop_assert!((q.area() - p.area()).abs() <= 1e-12 * p.area());
            prop_assert!((q.diameter() - p.diameter()).abs() <= 1e-12 * p.diameter());
            let s = p.map(|v| v * scale).unwrap();
            prop_assert!((s.diameter() - scale * p.diameter()).abs() <= 1e-12 * scale * p.diameter());
        }

        #[test]
        fn section_area_matches_twice_profile_integral(n in 3usize..40, bump in 0.0..1.0f64) {
            let f = |x: f64| bump * x * (1.0 - x) + 0.2 * (1.0 - x);
            let p = RotationalProfile::from_fn(0.0, 1.0, n, f).unwrap();
            let trapz: f64 = p.knots().windows(2).map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum();
            let area = profile_to_polygon(&p, 3).unwrap().area();
            prop_assert!((area - trapz).abs() < 1e-12);
        }
    }
}
