//! The nested annulus chain: lifted boundary/core curves obtained by
//! backward pullback, forward-composition membership, rasterization, and
//! rectangle partitions of each annulus.

mod chain;
mod curve;
mod partition;

pub use chain::{membership, rasterize, trace_chain, AnnulusChain, DepthCurves, Raster};
pub use curve::{pullback_curve, LiftedCurve, RefineOpts};
pub use partition::{max_rect_diameter, partition, polygons_intersect, Fiber, RectanglePartition};
