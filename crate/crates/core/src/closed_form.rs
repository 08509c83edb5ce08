//! Closed forms for the extremal body `Δ_θ`.
//!
//! With `s = √(5 − 4cosθ)`:
//!
//! ```text
//! a   = (1 + cosθ) / s          cone/band junction abscissa
//! b   = (2 − cosθ) / s          band/cap junction abscissa
//! r_j = sinθ / s                common junction radius, = a·tan(θ/2) = √(1 − b²)
//! m   = (a + b) / 2             centre of the radius-½ middle ball
//! ```
//!
//! The meridian radius is `x·tan(θ/2)` on `[0, a]`, `√(¼ − (x − m)²)` on
//! `[a, b]` and `√(1 − x²)` on `[b, 1]`.

use std::f64::consts::{FRAC_PI_3, PI};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig17;
use crate::geometry::{Point2, RotationalProfile};

/// Slack accepted below `π/3` so that `PI / 3.0` and friends are not rejected.
const LOWER_SLACK: f64 = 4.0 * f64::EPSILON;

/// Cone aperture `θ ∈ (0, π)` in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Aperture(f64);

impl Aperture {
    pub fn new(theta: f64) -> Result<Self> {
        if theta.is_finite() && theta > 0.0 && theta < PI {
            Ok(Self(theta))
        } else {
            Err(Error::ApertureOutOfRange(theta))
        }
    }

    pub fn from_degrees(deg: f64) -> Result<Self> {
        Self::new(deg.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// `π/3 < θ < π`, where the cone constraint produces a non-trivial body.
    pub fn is_nontrivial(self) -> bool {
        self.0 > FRAC_PI_3
    }

    /// `tan(θ/2)`, via `sinθ/(1 + cosθ)` away from `π` and the half-angle tangent near it.
    pub fn tan_half(self) -> f64 {
        if self.0 < 2.5 {
            self.0.sin() / (1.0 + self.0.cos())
        } else {
            (0.5 * self.0).tan()
        }
    }

    fn require_closed_form_range(self) -> Result<()> {
        if self.0 >= FRAC_PI_3 - LOWER_SLACK {
            Ok(())
        } else {
            Err(Error::ApertureOutOfRange(self.0))
        }
    }
}

impl TryFrom<f64> for Aperture {
    type Error = Error;
    fn try_from(theta: f64) -> Result<Self> {
        Aperture::new(theta)
    }
}

impl From<Aperture> for f64 {
    fn from(a: Aperture) -> Self {
        a.0
    }
}

/// Derived constants and junction points of `Δ_θ` in the meridian plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaParams {
    pub theta: f64,
    pub a: f64,
    pub b: f64,
    pub m: f64,
    pub r_j: f64,
    pub c: f64,
    pub p_plus: Point2,
    pub p_minus: Point2,
    pub q_plus: Point2,
    pub q_minus: Point2,
}

/// Which closed-form piece of the meridian covers an abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    Cone,
    Band,
    Cap,
}

pub fn delta_params(theta: Aperture) -> Result<DeltaParams> {
    theta.require_closed_form_range()?;
    let t = theta.radians();
    let cos = t.cos();
    let half_cos = (0.5 * t).cos();
    let one_plus_cos = 2.0 * half_cos * half_cos;
    let s = (5.0 - 4.0 * cos).sqrt();
    let (a, b) = if (t - FRAC_PI_3).abs() <= LOWER_SLACK {
        let half_root3 = 0.5 * 3f64.sqrt();
        (half_root3, half_root3)
    } else {
        (one_plus_cos / s, (2.0 - cos) / s)
    };
    let r_j = t.sin() / s;
    let c = (1.0 - b * b).max(0.0).sqrt();
    let a_tan = a * theta.tan_half();
    Ok(DeltaParams {
        theta: t,
        a,
        b,
        m: 0.5 * (a + b),
        r_j,
        c,
        p_plus: Point2::new(a, a_tan),
        p_minus: Point2::new(a, -a_tan),
        q_plus: Point2::new(b, c),
        q_minus: Point2::new(b, -c),
    })
}

impl DeltaParams {
    pub fn tan_half(&self) -> f64 {
        Aperture(self.theta).tan_half()
    }

    /// Width of the middle band `b − a`.
    pub fn band_width(&self) -> f64 {
        self.b - self.a
    }

    pub fn piece(&self, x: f64) -> Piece {
        if x <= self.a {
            Piece::Cone
        } else if x <= self.b {
            Piece::Band
        } else {
            Piece::Cap
        }
    }

    pub fn cone_radius(&self, x: f64) -> f64 {
        x * self.tan_half()
    }

    pub fn band_radius(&self, x: f64) -> f64 {
        let d = x - self.m;
        (0.25 - d * d).max(0.0).sqrt()
    }

    pub fn cap_radius(&self, x: f64) -> f64 {
        (1.0 - x * x).max(0.0).sqrt()
    }

    /// Meridian radius with `x` assumed in `[0, 1]`.
    pub fn radius(&self, x: f64) -> f64 {
        match self.piece(x) {
            Piece::Cone => self.cone_radius(x),
            Piece::Band => self.band_radius(x),
            Piece::Cap => self.cap_radius(x),
        }
    }

    /// Largest radius of the body, attained on the middle ball's equator.
    pub fn max_radius(&self) -> f64 {
        if self.b > self.a {
            0.5
        } else {
            self.r_j
        }
    }
}

/// Meridian radius of `Δ_θ` at abscissa `x ∈ [0, 1]`.
pub fn profile_radius(theta: Aperture, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::AbscissaOutOfRange(x));
    }
    Ok(delta_params(theta)?.radius(x))
}

/// Volumes of the cone part, the middle band and the cap, and their total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartVolumes {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub total: f64,
}

pub fn part_volumes(theta: Aperture) -> Result<PartVolumes> {
    theta.require_closed_form_range()?;
    let t = theta.radians();
    let c = t.cos();
    let sin = t.sin();
    let s = (5.0 - 4.0 * c).sqrt();
    let s3 = s * s * s;
    let half_cos = (0.5 * t).cos();
    let one_plus_cos = 2.0 * half_cos * half_cos;
    let two_minus_cos = 2.0 - c;

    let v1 = PI * one_plus_cos * sin * sin / (3.0 * s3);
    let v2 = PI * (7.0 - 18.0 * c + 6.0 * c * c + 4.0 * c * c * c) / (6.0 * s3);
    let v3 = 2.0 * PI / 3.0 + PI * two_minus_cos.powi(3) / (3.0 * s3) - PI * two_minus_cos / s;
    let total = 2.0 * PI / 3.0 - PI * (35.0 - 38.0 * c + 8.0 * c * c) / (6.0 * s3);
    Ok(PartVolumes { v1, v2: v2.max(0.0), v3: v3.max(0.0), total })
}

/// Knot discretization of the meridian with `a` and `b` as exact knots.
///
/// Interior knots are shared among the three pieces in proportion to their
/// arc lengths and are equally spaced in arc length within each piece.
pub fn delta_profile(theta: Aperture, n_knots: usize) -> Result<RotationalProfile> {
    const MIN_KNOTS: usize = 8;
    if n_knots < MIN_KNOTS {
        return Err(Error::TooFewKnots { min: MIN_KNOTS, got: n_knots });
    }
    let p = delta_params(theta)?;

    // Band knots are placed by polar angle about (m, 0), cap knots by polar angle about O.
    let band_phi = |x: f64, r: f64| r.atan2(x - p.m);
    let phi_a = band_phi(p.a, p.r_j);
    let phi_b = band_phi(p.b, p.r_j);
    let psi_b = p.c.atan2(p.b);

    let has_cone = p.a > 0.0;
    let has_band = p.b > p.a;
    let has_cap = p.b < 1.0;
    let lengths = [
        if has_cone { p.a.hypot(p.r_j) } else { 0.0 },
        if has_band { 0.5 * (phi_a - phi_b) } else { 0.0 },
        if has_cap { psi_b } else { 0.0 },
    ];
    let anchors = 1 + usize::from(has_cone) + usize::from(has_band) + usize::from(has_cap);
    let interior = n_knots.saturating_sub(anchors);
    let counts = apportion(interior, &lengths);

    let mut knots: Vec<(f64, f64)> = Vec::with_capacity(n_knots);
    knots.push((0.0, 0.0));
    if has_cone {
        let k = counts[0];
        for i in 1..=k {
            let x = p.a * i as f64 / (k + 1) as f64;
            knots.push((x, p.cone_radius(x)));
        }
        knots.push((p.a, p.r_j));
    }
    if has_band {
        let k = counts[1];
        for i in 1..=k {
            let phi = phi_a + (phi_b - phi_a) * i as f64 / (k + 1) as f64;
            knots.push((p.m + 0.5 * phi.cos(), 0.5 * phi.sin()));
        }
        knots.push((p.b, p.r_j));
    }
    if has_cap {
        let k = counts[2];
        for i in 1..=k {
            let psi = psi_b * (1.0 - i as f64 / (k + 1) as f64);
            knots.push((psi.cos(), psi.sin()));
        }
        knots.push((1.0, 0.0));
    }
    knots.dedup_by(|next, prev| next.0 <= prev.0);
    RotationalProfile::new(knots)
}

/// Largest-remainder split of `total` proportional to `weights`.
fn apportion(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let exact: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut left = total - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&i, &j| (exact[j] - exact[j].floor()).total_cmp(&(exact[i] - exact[i].floor())));
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        if weights[i] > 0.0 {
            counts[i] += 1;
            left -= 1;
        }
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: f64,
    pub a: f64,
    pub b: f64,
    pub r_j: f64,
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub v_total: f64,
}

pub const SWEEP_CSV_HEADER: &str = "theta,a,b,r_j,v1,v2,v3,v_total";

/// `n` equally spaced rows of constants and volumes over `[theta_min, theta_max]`.
pub fn sweep_table(theta_min: Aperture, theta_max: Aperture, n: usize) -> Result<Vec<SweepRow>> {
    theta_min.require_closed_form_range()?;
    if theta_min >= theta_max {
        return Err(Error::InvalidRange(format!(
            "theta_min {} must be below theta_max {}",
            theta_min.0, theta_max.0
        )));
    }
    if n < 2 {
        return Err(Error::InvalidRange(format!("need at least 2 rows, got {n}")));
    }
    let (lo, hi) = (theta_min.0, theta_max.0);
    (0..n)
        .map(|i| {
            let t = if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
            let theta = Aperture::new(t)?;
            let p = delta_params(theta)?;
            let v = part_volumes(theta)?;
            Ok(SweepRow { theta: t, a: p.a, b: p.b, r_j: p.r_j, v1: v.v1, v2: v.v2, v3: v.v3, v_total: v.total })
        })
        .collect()
}

/// Renders rows as CSV with [`SWEEP_CSV_HEADER`], 17 significant digits, LF endings.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * 160);
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let cells = [r.theta, r.a, r.b, r.r_j, r.v1, r.v2, r.v3, r.v_total].map(sig17);
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}
