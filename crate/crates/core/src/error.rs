//! Library error type.

/// Errors surfaced by the library; each variant maps to a distinct CLI exit
/// code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Adaptive refinement hit the vertex budget before resolving a curve.
    #[error("curve refinement exceeded the vertex budget ({budget} vertices)")]
    UnresolvedCurve { budget: usize },

    /// Two rectangle fibers of a partition cross; use fewer rectangles or a
    /// finer tracing tolerance.
    #[error("partition fibers {a} and {b} intersect")]
    SelfIntersectingFibers { a: usize, b: usize },

    /// A curve vertex sits on a fiber cut and the neighbouring assignments
    /// cannot be reconciled into ±1 steps.
    #[error("ambiguous fiber crossing: {detail}")]
    AmbiguousCrossing { detail: String },

    /// The schedule search used up its candidate budget at some depth.
    #[error("schedule search exhausted after {tried} candidates at depth {depth}")]
    SearchExhausted { depth: usize, tried: usize },

    /// The skew product is only defined for selector coordinates inside
    /// `I₁ ∪ I₂`.
    #[error("skew state outside the selector domain (z = {z})")]
    OutsideDomain { z: f64 },

    /// A figure layer refers to a drawable with no data.
    #[error("figure layer {index} has no drawable data")]
    EmptyLayer { index: usize },

    /// A constructor argument violated its documented invariant.
    #[error("invalid {what}: {why}")]
    Invalid { what: &'static str, why: String },
}

impl Error {
    pub fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        Error::Invalid { what, why: why.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
