//! Derivative-free volume maximization over discretized rotational profiles.
//!
//! A candidate body is the solid of revolution of a piecewise-linear radius on
//! a fixed uniform grid. In [`SearchMode::FullCone`] the grid spans `[0, 1]`
//! with `r(0) = 0`: the body contains the apex, lies in the cone and has
//! diameter at most one. In [`SearchMode::WallSlab`] the grid spans `[a, b]`
//! and both end radii are pinned, which is the slab problem solved by the ball
//! of radius ½ about `((a+b)/2, 0, 0)`.
//!
//! The climber perturbs one knot at a time. Pushing a knot outward also
//! pulls in the knots it would otherwise violate the diameter bound with, so
//! moves slide along the constraint rather than being undone by the uniform
//! rescale in [`project_feasible`].

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{delta_params, profile_radius, Aperture};
use crate::error::{Error, Result};
use crate::format::sig17;
use crate::geometry::{concavity_defect, RotationalProfile, CONCAVITY_TOL};
use crate::oracles::{knot_diameter, knot_volume};
use crate::rng;

pub const MIN_KNOTS: usize = 8;
/// Independent restarts per optimization call.
pub const NUM_STARTS: usize = 4;
pub const INITIAL_STEP: f64 = 0.05;
pub const STEP_SHRINK: f64 = 0.5;
pub const MIN_STEP: f64 = 1e-6;
pub const DIAMETER_TOL: f64 = 1e-9;
const CONE_TOL: f64 = 1e-12;
const PIN_TOL: f64 = 1e-12;
const MAX_PROJECTION_ROUNDS: usize = 20;
const PROJECTION_TOL: f64 = 1e-9;
/// Three bump widths, each tried upward and downward.
const MOVES_PER_KNOT: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SearchMode {
    FullCone,
    WallSlab { a: f64, b: f64, r_j: f64 },
}

/// Constraint set and discretization for a search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibleSpec {
    pub theta: Aperture,
    pub n_knots: usize,
    #[serde(flatten)]
    pub mode: SearchMode,
}

impl FeasibleSpec {
    pub fn full_cone(theta: Aperture, n_knots: usize) -> Result<Self> {
        let spec = Self { theta, n_knots, mode: SearchMode::FullCone };
        spec.validate()?;
        Ok(spec)
    }

    pub fn wall_slab(theta: Aperture, n_knots: usize, a: f64, b: f64, r_j: f64) -> Result<Self> {
        let spec = Self { theta, n_knots, mode: SearchMode::WallSlab { a, b, r_j } };
        spec.validate()?;
        Ok(spec)
    }

    /// The slab `[a, b]` and end radius of `Δ_θ`.
    pub fn wall_for(theta: Aperture, n_knots: usize) -> Result<Self> {
        let d = delta_params(theta)?;
        Self::wall_slab(theta, n_knots, d.a, d.b, d.r_j)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_knots < MIN_KNOTS {
            return Err(Error::TooFewKnots { min: MIN_KNOTS, got: self.n_knots });
        }
        if let SearchMode::WallSlab { a, b, r_j } = self.mode {
            if !(a.is_finite() && b.is_finite() && r_j.is_finite()) || !(0.0 <= a && a < b && b <= 1.0) {
                return Err(Error::InvalidRange(format!("slab [{a}, {b}] must satisfy 0 <= a < b <= 1")));
            }
            if r_j < 0.0 || r_j > a * self.theta.tan_half() + CONE_TOL {
                return Err(Error::InfeasiblePins(format!("end radius {r_j} leaves the cone at x = {a}")));
            }
            let w = b - a;
            let d = (w * w + 4.0 * r_j * r_j).sqrt();
            if d > 1.0 + DIAMETER_TOL {
                return Err(Error::InfeasiblePins(format!("end disks are {d} apart")));
            }
        }
        Ok(())
    }

    pub fn range(&self) -> (f64, f64) {
        match self.mode {
            SearchMode::FullCone => (0.0, 1.0),
            SearchMode::WallSlab { a, b, .. } => (a, b),
        }
    }

    /// Uniform grid of `n_knots` abscissas over [`range`](Self::range).
    pub fn grid(&self) -> Vec<f64> {
        let (x0, x1) = self.range();
        let n = self.n_knots;
        (0..n).map(|i| if i == n - 1 { x1 } else { x0 + (x1 - x0) * i as f64 / (n - 1) as f64 }).collect()
    }

    /// Pinned end radii (left, right); `None` where free.
    fn pins(&self) -> (Option<f64>, Option<f64>) {
        match self.mode {
            SearchMode::FullCone => (Some(0.0), None),
            SearchMode::WallSlab { r_j, .. } => (Some(r_j), Some(r_j)),
        }
    }

    /// Radius the optimum should approach at `x`.
    pub fn analytic_radius(&self, x: f64) -> Result<f64> {
        match self.mode {
            SearchMode::FullCone => profile_radius(self.theta, x),
            SearchMode::WallSlab { a, b, .. } => {
                let m = 0.5 * (a + b);
                Ok((0.25 - (x - m) * (x - m)).max(0.0).sqrt())
            }
        }
    }
}

/// Outcome of [`optimize_profile`] or [`wall_optimize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub spec: FeasibleSpec,
    pub seed: u64,
    pub best_profile: RotationalProfile,
    pub best_volume: f64,
    /// Objective evaluations spent over all starts.
    pub iterations: u64,
    pub feasible: bool,
    /// Largest knot-wise gap to the analytic radius.
    pub distance_to_analytic: f64,
    /// Accepted moves of the winning start.
    pub log: Vec<LogEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub iteration: u64,
    pub volume: f64,
    pub step_size: f64,
}

pub const LOG_CSV_HEADER: &str = "iteration,volume,step_size";

impl OptResult {
    pub fn log_csv(&self) -> String {
        let mut out = format!("{LOG_CSV_HEADER}\n");
        for e in &self.log {
            let _ = writeln!(out, "{},{},{}", e.iteration, sig17(e.volume), sig17(e.step_size));
        }
        out
    }
}

/// Re-checks every constraint of `spec` on `p` with the oracle measures.
pub fn is_feasible(p: &RotationalProfile, spec: &FeasibleSpec) -> bool {
    let (x0, x1) = spec.range();
    let (lo, hi) = p.support();
    if (lo - x0).abs() > PIN_TOL || (hi - x1).abs() > PIN_TOL {
        return false;
    }
    let k = p.knots();
    let (left, right) = spec.pins();
    let pin_ok = |pin: Option<f64>, r: f64| pin.is_none_or(|v| (r - v).abs() <= PIN_TOL);
    let t = spec.theta.tan_half();
    pin_ok(left, k[0].1)
        && pin_ok(right, k[k.len() - 1].1)
        && k.iter().all(|&(x, r)| r >= 0.0 && r <= x * t + CONE_TOL)
        && concavity_defect(&p.xs(), &p.radii()) <= CONCAVITY_TOL
        && knot_diameter(k) <= 1.0 + DIAMETER_TOL
}

/// Maps `p` to a nearby feasible profile on the same abscissas.
///
/// Radii are clipped to the cone and to the distance-one bound against each
/// pinned end, replaced by their upper concave envelope, and then the excess
/// over the pinned baseline is scaled down until the diameter is at most one.
pub fn project_feasible(p: &RotationalProfile, spec: &FeasibleSpec) -> Result<RotationalProfile> {
    spec.validate()?;
    let (x0, x1) = spec.range();
    let (lo, hi) = p.support();
    if (lo - x0).abs() > PIN_TOL || (hi - x1).abs() > PIN_TOL {
        return Err(Error::InvalidProfile(format!("support [{lo}, {hi}] does not match [{x0}, {x1}]")));
    }
    let mut knots = p.knots().to_vec();
    project_knots(&mut knots, spec);
    RotationalProfile::new(knots)
}

fn project_knots(knots: &mut [(f64, f64)], spec: &FeasibleSpec) {
    for _ in 0..MAX_PROJECTION_ROUNDS {
        let before: Vec<f64> = knots.iter().map(|k| k.1).collect();
        project_round(knots, spec);
        let moved = knots.iter().zip(&before).map(|(k, r)| (k.1 - r).abs()).fold(0.0, f64::max);
        if moved <= PROJECTION_TOL {
            break;
        }
    }
}

fn project_round(knots: &mut [(f64, f64)], spec: &FeasibleSpec) {
    let n = knots.len();
    let t = spec.theta.tan_half();
    let (left, right) = spec.pins();
    let (xl, xr) = (knots[0].0, knots[n - 1].0);
    if let Some(v) = left {
        knots[0].1 = v;
    }
    if let Some(v) = right {
        knots[n - 1].1 = v;
    }
    let pin_bound = |pin: Option<f64>, xp: f64, x: f64| {
        pin.map_or(f64::INFINITY, |v| (1.0 - (x - xp) * (x - xp)).max(0.0).sqrt() - v)
    };
    for k in knots.iter_mut() {
        let cap = (k.0 * t).min(pin_bound(left, xl, k.0)).min(pin_bound(right, xr, k.0)).min(0.5);
        k.1 = k.1.min(cap).max(0.0);
    }
    if let Some(v) = left {
        knots[0].1 = v;
    }
    if let Some(v) = right {
        knots[n - 1].1 = v;
    }
    concave_envelope(knots);
    scale_to_diameter(knots, spec);
}

/// Replaces radii by the least concave majorant of the knots.
fn concave_envelope(knots: &mut [(f64, f64)]) {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(knots.len());
    for &p in knots.iter() {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Drop b when it is on or below the chord a–p.
            if (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut j = 0;
    for k in knots.iter_mut() {
        while j + 1 < hull.len() - 1 && hull[j + 1].0 <= k.0 {
            j += 1;
        }
        let (a, b) = (hull[j], hull[(j + 1).min(hull.len() - 1)]);
        if k.0 == a.0 {
            k.1 = a.1;
        } else if k.0 == b.0 {
            k.1 = b.1;
        } else {
            k.1 = a.1 + (b.1 - a.1) * (k.0 - a.0) / (b.0 - a.0);
        }
    }
}

/// Scales the excess over the pinned baseline by the largest factor in `[0, 1]`
/// keeping every knot pair within distance one.
fn scale_to_diameter(knots: &mut [(f64, f64)], spec: &FeasibleSpec) {
    let base = match spec.mode {
        SearchMode::FullCone => 0.0,
        SearchMode::WallSlab { r_j, .. } => r_j,
    };
    let excess: Vec<f64> = knots.iter().map(|k| (k.1 - base).max(0.0)).collect();
    let mut factor = 1.0f64;
    for i in 0..knots.len() {
        for j in i..knots.len() {
            let e = excess[i] + excess[j];
            if e > 0.0 {
                let dx = knots[i].0 - knots[j].0;
                let room = (1.0 - dx * dx).max(0.0).sqrt() - 2.0 * base;
                factor = factor.min(room / e);
            }
        }
    }
    if factor >= 1.0 {
        return;
    }
    let factor = factor.max(0.0);
    for (k, e) in knots.iter_mut().zip(&excess) {
        k.1 = base + factor * e;
    }
}

/// Seeded multi-start hill climbing over full-cone profiles.
pub fn optimize_profile(spec: &FeasibleSpec, budget: u64, seed: u64) -> Result<OptResult> {
    if spec.mode != SearchMode::FullCone {
        return Err(Error::InvalidArgument("optimize_profile needs full_cone mode".into()));
    }
    run_search(spec, budget, seed)
}

/// Seeded multi-start hill climbing over slab profiles with pinned ends.
pub fn wall_optimize(spec: &FeasibleSpec, budget: u64, seed: u64) -> Result<OptResult> {
    if !matches!(spec.mode, SearchMode::WallSlab { .. }) {
        return Err(Error::InvalidArgument("wall_optimize needs wall_slab mode".into()));
    }
    run_search(spec, budget, seed)
}

/// Smallest accepted budget: one full sweep of moves per start.
pub fn min_budget(spec: &FeasibleSpec) -> u64 {
    (MOVES_PER_KNOT * spec.n_knots * NUM_STARTS) as u64
}

struct Climb {
    knots: Vec<(f64, f64)>,
    volume: f64,
    evals: u64,
    log: Vec<LogEntry>,
}

fn run_search(spec: &FeasibleSpec, budget: u64, seed: u64) -> Result<OptResult> {
    spec.validate()?;
    let min = min_budget(spec);
    if budget < min {
        return Err(Error::BudgetTooSmall { min, got: budget });
    }
    let per_start = budget / NUM_STARTS as u64;
    let climbs: Vec<Climb> =
        (0..NUM_STARTS as u64).into_par_iter().map(|s| climb(spec, per_start, rng::stream(seed, s))).collect();
    let iterations = climbs.iter().map(|c| c.evals).sum();
    // First maximum in start order wins ties.
    let best = climbs
        .into_iter()
        .reduce(|best, c| if c.volume > best.volume { c } else { best })
        .expect("at least one start");
    let best_profile = RotationalProfile::new(best.knots)?;
    let distance_to_analytic = best_profile
        .knots()
        .iter()
        .map(|&(x, r)| spec.analytic_radius(x).map(|ra| (r - ra).abs()))
        .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))?;
    Ok(OptResult {
        spec: *spec,
        seed,
        feasible: is_feasible(&best_profile, spec),
        best_volume: knot_volume(best_profile.knots()),
        best_profile,
        iterations,
        distance_to_analytic,
        log: best.log,
    })
}

fn climb(spec: &FeasibleSpec, budget: u64, mut rng: rng::Rng) -> Climb {
    let xs = spec.grid();
    let (x0, x1) = spec.range();
    let t = spec.theta.tan_half();
    // Random tent start: peak position and height drawn from the stream.
    let peak = x0 + (x1 - x0) * rng.random_range(0.2..0.8);
    let height = rng.random_range(0.1..0.5);
    let mut knots: Vec<(f64, f64)> = xs
        .iter()
        .map(|&x| {
            let w = if x <= peak { (x - x0) / (peak - x0) } else { (x1 - x) / (x1 - peak) };
            (x, (height * w).min(x * t))
        })
        .collect();
    project_knots(&mut knots, spec);
    let mut volume = knot_volume(&knots);
    let mut evals = 1u64;
    let mut log = vec![LogEntry { iteration: 0, volume, step_size: INITIAL_STEP }];

    let (left, right) = spec.pins();
    let n = knots.len();
    let free: Vec<usize> = (0..n).filter(|&i| !(i == 0 && left.is_some() || i == n - 1 && right.is_some())).collect();
    let mut order = free.clone();
    // Single-knot moves alone stall on a nearly flat valley where one side of
    // the slab grows as the opposite side shrinks; wider bumps cross it.
    let widths = [0, n / 16, n / 4];
    let mut step = INITIAL_STEP;
    let mut cand = knots.clone();
    'outer: while step >= MIN_STEP {
        order.shuffle(&mut rng);
        let mut improved = false;
        for &i in &order {
            for (width, delta) in widths.iter().flat_map(|&w| [(w, step), (w, -step)]) {
                if evals >= budget {
                    break 'outer;
                }
                cand.copy_from_slice(&knots);
                bump(&mut cand, &knots, i, width, delta, spec);
                project_knots(&mut cand, spec);
                evals += 1;
                let v = knot_volume(&cand);
                if v > volume {
                    knots.copy_from_slice(&cand);
                    volume = v;
                    improved = true;
                    log.push(LogEntry { iteration: evals, volume, step_size: step });
                }
            }
        }
        if !improved {
            step *= STEP_SHRINK;
        }
    }
    Climb { knots, volume, evals, log }
}

/// Adds a hat of height `delta` and half-width `width` knots centred at knot `i`.
///
/// When raising, the candidate is first made concave and every other free knot
/// that would sit farther than one from a raised knot is pulled in.
fn bump(cand: &mut [(f64, f64)], current: &[(f64, f64)], i: usize, width: usize, delta: f64, spec: &FeasibleSpec) {
    let (left, right) = spec.pins();
    let n = cand.len();
    let pinned = |j: usize| j == 0 && left.is_some() || j == n - 1 && right.is_some();
    let t = spec.theta.tan_half();
    let lo = i.saturating_sub(width);
    let hi = (i + width).min(n - 1);
    for (j, k) in cand.iter_mut().enumerate().take(hi + 1).skip(lo) {
        if pinned(j) {
            continue;
        }
        let w = 1.0 - j.abs_diff(i) as f64 / (width + 1) as f64;
        k.1 = (k.1 + delta * w).min(k.0 * t).clamp(0.0, 0.5);
    }
    if delta <= 0.0 {
        return;
    }
    concave_envelope(cand);
    let raised: Vec<(f64, f64)> = cand.iter().zip(current).filter(|(c, o)| c.1 > o.1).map(|(c, _)| *c).collect();
    for (j, k) in cand.iter_mut().enumerate() {
        if pinned(j) || raised.iter().any(|r| r.0 == k.0) {
            continue;
        }
        for &(xr, rr) in &raised {
            let dx = xr - k.0;
            k.1 = k.1.min((1.0 - dx * dx).max(0.0).sqrt() - rr);
        }
        k.1 = k.1.max(0.0);
    }
}
