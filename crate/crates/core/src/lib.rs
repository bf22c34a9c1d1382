//! Nested crooked annuli on the cylinder.
//!
//! The library realizes, at finite depth, the classical construction of a
//! hereditarily indecomposable circle-like continuum as the intersection of
//! nested annuli `A_{k+1} ⊂ A_k` on the cylinder `S¹ × ℝ`:
//!
//! * [`maps`] — the generating maps `T`, `s`, `σ`, `W` on the cylinder and
//!   their lifts and algebraic inverses on the universal cover,
//! * [`annuli`] — the annulus chain itself: membership oracles via forward
//!   composition, boundary/core curves via backward lifting with adaptive
//!   refinement, rasterization, and rectangle partitions,
//! * [`crooked`] — itineraries through a partition, the combinatorial
//!   `(j₀, j₁)`-wiggle and crookedness decisions, and a schedule search,
//! * [`symbolic`] — the base map `g(z) = 3z`, its invariant Cantor set with
//!   `{1,2}` coding, and the skew product that selects `T` or `W` per step,
//! * [`render`] — deterministic SVG emission for curves, rasters, partitions
//!   and itinerary step plots.
//!
//! The geometric core is generic over the scalar type via [`scalar::Scalar`]
//! (`f32` or `f64`); exact interval arithmetic on rational multiples of π
//! backs the symbolic coding. Concrete `f64` aliases live at the crate root.

pub mod annuli;
pub mod crooked;
pub mod error;
pub mod maps;
pub mod render;
pub mod scalar;
pub mod symbolic;

mod geom;

pub use error::{Error, Result};

/// `f64` cylinder point.
pub type Point64 = maps::CylinderPoint<f64>;
/// `f64` cover point.
pub type Lift64 = maps::LiftPoint<f64>;
/// `f64` wiggle-map parameters.
pub type WParams64 = maps::WParams<f64>;
/// `f64` block schedule.
pub type Schedule64 = maps::BlockSchedule<f64>;
/// `f64` lifted curve.
pub type Curve64 = annuli::LiftedCurve<f64>;
/// `f64` annulus chain.
pub type Chain64 = annuli::AnnulusChain<f64>;
/// `f64` rectangle partition.
pub type Partition64 = annuli::RectanglePartition<f64>;

/// Formats a float with 17 significant digits, the fixed formatting used by
/// every serialized artifact so that identical runs are byte-identical.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// FNV-1a over a byte string; used to stamp artifact filenames with a short
/// schedule hash.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
