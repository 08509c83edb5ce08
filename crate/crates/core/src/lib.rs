//! Extremal bodies of the constrained isodiametric problem in a right circular cone.
//!
//! Among convex bodies of diameter one that contain the apex `O` of the cone
//! `C_θ` (aperture `θ`, axis = first coordinate axis) and lie inside it, the
//! volume maximizer `Δ_θ` is a solid of revolution made of three pieces: a
//! cone segment on `[0, a]`, a band of the radius-½ ball centred at
//! `((a+b)/2, 0, 0)` on `[a, b]`, and a cap of the unit ball on `[b, 1]`.
//!
//! The crate is organised as follows:
//!
//! - [`geometry`]: planar convex polygons, rotational profiles and elementary measures.
//! - [`closed_form`]: the constants `a`, `b`, `r_j`, the meridian profile and the part volumes.
//! - [`symmetrization`]: Steiner symmetrization of polygons, the Steiner symmetral of
//!   sliced 3D bodies, and random symmetrization runs.
//! - [`oracles`]: independent numerical checks (Hausdorff and sup distances, disc-method
//!   volumes, revolution diameter, Monte Carlo volume).
//! - [`search`]: derivative-free volume maximization over discretized profiles.
//! - [`figure`]: SVG rendering of the meridian section.
//! - [`verify`]: the end-to-end check suite behind `isodiam verify` and the acceptance tests.
//!
//! All randomness goes through [`rng::stream`]: ChaCha8 seeded from a `u64`, with
//! independent substreams selected by ChaCha's stream counter.

pub mod closed_form;
pub mod error;
pub mod figure;
pub mod format;
pub mod geometry;
pub mod oracles;
pub mod rng;
pub mod search;
pub mod symmetrization;
pub mod verify;

pub use closed_form::{Aperture, DeltaParams, PartVolumes, SweepRow};
pub use error::{Error, Result};
pub use geometry::{ConvexPolygon, Direction2, Point2, Point3, RotationalProfile};
pub use oracles::VolumeEstimate;
pub use search::{FeasibleSpec, OptResult, SearchMode};
pub use symmetrization::{ConvergenceTrace, SlicedBody};
