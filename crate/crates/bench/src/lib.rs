//! Shared inputs for the criterion benches.

use isodiam_core::closed_form::delta_profile;
use isodiam_core::geometry::{make_random_convex_polygon, regular_polygon};
use isodiam_core::{Aperture, ConvexPolygon, RotationalProfile};

pub fn right_angle() -> Aperture {
    Aperture::new(std::f64::consts::FRAC_PI_2).expect("valid aperture")
}

pub fn sample_polygon(n: usize) -> ConvexPolygon {
    make_random_convex_polygon(n, 1).expect("random polygon")
}

pub fn sample_profile(knots: usize) -> RotationalProfile {
    delta_profile(right_angle(), knots).expect("delta profile")
}

/// Regular `n`-gon, for benches that need an exact vertex count.
pub fn sample_ngon(n: usize) -> ConvexPolygon {
    regular_polygon(n, 1.0).expect("regular polygon")
}
