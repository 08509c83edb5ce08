//! End-to-end checks of the closed forms, oracles, symmetrization and search.
//!
//! [`run_all`] evaluates every check at a [`Scale`]. `Full` uses the sample
//! sizes of the acceptance suite; `Quick` shrinks the expensive ones so that
//! `isodiam verify` finishes in a few seconds.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};
use std::fmt;

use rand::Rng as _;
use rayon::prelude::*;

use crate::closed_form::{delta_params, delta_profile, part_volumes, Aperture};
use crate::error::Result;
use crate::figure::section_svg;
use crate::geometry::{make_random_convex_polygon, Direction2, Point2, Point3};
use crate::oracles::{
    delta_volume_by_quadrature, monte_carlo_volume, revolution_diameter, sup_distance, Aabb3,
};
use crate::rng;
use crate::search::{optimize_profile, wall_optimize, FeasibleSpec};
use crate::symmetrization::{
    random_symmetrization_run, steiner_symmetral_profile, steiner_symmetrize, SlicedBody, DEFAULT_SLICES,
};

/// Rounded reference value quoted for `|Δ_{π/2}|`.
pub const QUOTED_TOTAL_RIGHT_ANGLE: f64 = 0.455277;
/// Rounded reference value quoted for the middle part at `θ = π/2`.
pub const QUOTED_V2_RIGHT_ANGLE: f64 = 0.327829;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {:>2} {:<34} {}", self.id, self.name, self.detail)
    }
}

fn outcome(id: u8, name: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome { id, name, passed, detail }
}

fn theta_grid() -> Vec<Aperture> {
    let (lo, hi) = (FRAC_PI_3, PI - 1e-3);
    (0..49).map(|i| Aperture::new(lo + (hi - lo) * i as f64 / 48.0).expect("grid is in range")).collect()
}

fn right() -> Aperture {
    Aperture::new(FRAC_PI_2).expect("valid")
}

pub fn closed_form_consistency() -> Result<Outcome> {
    let (mut parts, mut quad) = (0.0f64, 0.0f64);
    for t in theta_grid() {
        let v = part_volumes(t)?;
        parts = parts.max((v.v1 + v.v2 + v.v3 - v.total).abs());
        quad = quad.max((delta_volume_by_quadrature(t, 1e-13)? - v.total).abs());
    }
    Ok(outcome(
        1,
        "closed-form consistency",
        parts <= 1e-12 && quad <= 1e-9,
        format!("max |v1+v2+v3-v| = {parts:.2e}, max |quad-v| = {quad:.2e}"),
    ))
}

pub fn boundary_limits() -> Result<Outcome> {
    let top = (part_volumes(Aperture::new(PI - 1e-4)?)?.total - FRAC_PI_6).abs();
    let sector = 2.0 * PI / 3.0 * (1.0 - FRAC_PI_6.cos());
    let bottom = (part_volumes(Aperture::new(FRAC_PI_3)?)?.total - sector).abs();
    Ok(outcome(
        2,
        "boundary limits",
        top <= 1e-6 && bottom <= 1e-12,
        format!("|v(pi-1e-4) - pi/6| = {top:.2e}, |v(pi/3) - sector| = {bottom:.2e}"),
    ))
}

pub fn junction_identities() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for t in theta_grid() {
        let d = delta_params(t)?;
        let th = t.radians();
        let s = (5.0 - 4.0 * th.cos()).sqrt();
        let rj = th.sin() / s;
        worst = worst
            .max((d.p_plus.distance(d.q_minus) - 1.0).abs())
            .max((d.p_minus.distance(d.q_plus) - 1.0).abs())
            .max((d.a * t.tan_half() - rj).abs())
            .max(((1.0 - d.b * d.b).sqrt() - rj).abs());
    }
    Ok(outcome(3, "junction identities", worst <= 1e-12, format!("max deviation = {worst:.2e}")))
}

pub fn diameter_oracle() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for th in [1.2, FRAC_PI_2, 2.0, 2.8] {
        let p = delta_profile(Aperture::new(th)?, 4096)?;
        worst = worst.max((revolution_diameter(&p) - 1.0).abs());
    }
    Ok(outcome(4, "diameter oracle", worst <= 1e-6, format!("max |diam - 1| = {worst:.2e}")))
}

pub fn monte_carlo_agreement(scale: Scale) -> Result<Outcome> {
    let n = match scale {
        Scale::Quick => 1_000_000,
        Scale::Full => 10_000_000,
    };
    let d = delta_params(right())?;
    let est = monte_carlo_volume(|p| d.contains(p), Aabb3::for_delta(&d), n, 20_240_601)?;
    let exact = part_volumes(right())?.total;
    let z_quoted = (est.value - QUOTED_TOTAL_RIGHT_ANGLE).abs() / est.std_error;
    let z_exact = (est.value - exact).abs() / est.std_error;
    Ok(outcome(
        5,
        "Monte Carlo agreement",
        z_quoted <= 4.0 && z_exact <= 4.0,
        format!(
            "n = {n}, estimate = {:.6} +- {:.1e}, z = {z_quoted:.2} (vs {QUOTED_TOTAL_RIGHT_ANGLE}), {z_exact:.2} (vs {exact:.8})",
            est.value, est.std_error
        ),
    ))
}

pub fn symmetrization_properties(trials: u64) -> Result<Outcome> {
    let results: Vec<Result<(bool, bool, bool)>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(77, k);
            let n = r.random_range(3..40);
            let p = make_random_convex_polygon(n, 2 * k)?;
            let q = make_random_convex_polygon(r.random_range(3..40), 2 * k + 1)?;
            let shift = Point2::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
            let q = q.map(|v| v + shift)?;
            let line = Direction2::new(r.random_range(0.0..PI));
            let (sp, sq) = (steiner_symmetrize(&p, line)?, steiner_symmetrize(&q, line)?);
            Ok((
                (sp.area() - p.area()).abs() <= 1e-9 * p.area(),
                sp.diameter() <= p.diameter() + 1e-12,
                sup_distance(&sp, &sq) <= sup_distance(&p, &q) + 1e-12,
            ))
        })
        .collect();
    let (mut area, mut diam, mut contr) = (0, 0, 0);
    for r in results {
        let (a, d, c) = r?;
        area += usize::from(!a);
        diam += usize::from(!d);
        contr += usize::from(!c);
    }
    Ok(outcome(
        6,
        "symmetrization properties",
        area + diam + contr == 0,
        format!("{trials} trials; violations: area {area}, diameter {diam}, d* {contr}"),
    ))
}

pub fn symmetrization_convergence() -> Result<Outcome> {
    let p = make_random_convex_polygon(64, 1)?;
    let run = random_symmetrization_run(&p, 200, 2)?;
    let last = run.trace.final_distance();
    let drift = run.trace.area_drift();
    Ok(outcome(
        7,
        "random symmetrization convergence",
        last < 0.01 * p.diameter() && drift < 1e-9,
        format!(
            "d_H: {:.3e} -> {last:.3e} (1% of diameter = {:.3e}), area drift = {drift:.2e}",
            run.trace.hausdorff_to_disk[0],
            0.01 * p.diameter()
        ),
    ))
}

/// Random body: hull of 8–30 points in the unit ball, sliced along the first axis.
fn random_cloud(seed: u64, k: u64) -> Vec<Point3> {
    let mut r = rng::stream(seed, k);
    let n = r.random_range(8..30);
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let p = Point3::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        if p.norm() <= 1.0 {
            pts.push(p);
        }
    }
    pts
}

pub fn symmetral_diameter(bodies: u64) -> Result<Outcome> {
    let slack = 2.0 / DEFAULT_SLICES as f64;
    let results: Vec<Result<f64>> = (0..bodies)
        .into_par_iter()
        .map(|k| {
            let pts = random_cloud(91, k);
            let body = SlicedBody::from_point_hull(&pts, Point3::new(1.0, 0.0, 0.0), DEFAULT_SLICES)?;
            let sym = steiner_symmetral_profile(&body)?;
            let mut diam = 0.0f64;
            for (i, p) in pts.iter().enumerate() {
                for q in &pts[i + 1..] {
                    diam = diam.max(p.distance(*q));
                }
            }
            Ok(revolution_diameter(&sym) - diam)
        })
        .collect();
    let mut worst = f64::NEG_INFINITY;
    for r in results {
        worst = worst.max(r?);
    }
    Ok(outcome(
        8,
        "symmetral diameter",
        worst <= slack,
        format!("{bodies} bodies; max (diam S* - diam C) = {worst:.3e}, allowed {slack:.3e}"),
    ))
}

pub fn optimizer_rediscovery(scale: Scale) -> Result<Outcome> {
    let (budget, seeds): (u64, &[u64]) = match scale {
        Scale::Quick => (60_000, &[3]),
        Scale::Full => (200_000, &[3, 4]),
    };
    let v = part_volumes(right())?;
    let spec = FeasibleSpec::full_cone(right(), 64)?;
    let wall_spec = FeasibleSpec::wall_for(right(), 64)?;
    let mut ok = true;
    let mut detail = Vec::new();
    for &seed in seeds {
        let r = optimize_profile(&spec, budget, seed)?;
        let w = wall_optimize(&wall_spec, budget, seed)?;
        ok &= r.feasible && w.feasible;
        for reference in [QUOTED_TOTAL_RIGHT_ANGLE, v.total] {
            ok &= r.best_volume >= (1.0 - 0.005) * reference && r.best_volume <= reference + 1e-6;
        }
        ok &= r.distance_to_analytic < 0.02;
        for reference in [QUOTED_V2_RIGHT_ANGLE, v.v2] {
            ok &= w.best_volume >= (1.0 - 0.005) * reference && w.best_volume <= reference + 1e-6;
        }
        detail.push(format!(
            "seed {seed}: V = {:.6}, L_inf = {:.2e}, wall V = {:.6}",
            r.best_volume, r.distance_to_analytic, w.best_volume
        ));
    }
    Ok(outcome(9, "optimizer re-discovery", ok, detail.join("; ")))
}

/// Compares the right-angle section drawing with a committed rendering.
pub fn figure_reproduction(expected: &str) -> Result<Outcome> {
    let svg = section_svg(right())?;
    let same = svg == expected;
    Ok(outcome(
        10,
        "section figure",
        same,
        if same { format!("{} bytes, identical", svg.len()) } else { "differs from fixture".to_string() },
    ))
}

/// Every check; `figure` is the expected right-angle SVG.
pub fn run_all(scale: Scale, figure: &str) -> Result<Vec<Outcome>> {
    let (trials, bodies) = match scale {
        Scale::Quick => (1000, 20),
        Scale::Full => (1000, 100),
    };
    Ok(vec![
        closed_form_consistency()?,
        boundary_limits()?,
        junction_identities()?,
        diameter_oracle()?,
        monte_carlo_agreement(scale)?,
        symmetrization_properties(trials)?,
        symmetrization_convergence()?,
        symmetral_diameter(bodies)?,
        optimizer_rediscovery(scale)?,
        figure_reproduction(figure)?,
    ])
}
