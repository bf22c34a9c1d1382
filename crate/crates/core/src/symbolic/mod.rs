//! Base dynamics on the selector circle and the skew product.
//!
//! The tripling map `g(z) = 3z (mod 2π)` together with the two closed
//! intervals `I₁ = [0, π/2]` and `I₂ = [π, 3π/2]` defines a Cantor set
//! `C = {z : gⁿ(z) ∈ I₁ ∪ I₂ for all n ≥ 0}` whose points are coded by
//! `{1, 2}`-sequences. The skew product applies `T` to the cylinder factor
//! when the selector sits in `I₁` and `W` when it sits in `I₂`, so choosing
//! a code point is choosing a sequence of cylinder maps.
//!
//! Interval endpoints are rational multiples of π and `g` multiplies them by
//! 3, so the coding is done in exact rational arithmetic ([`PiRational`]);
//! floating-point shadows exist for orbit sweeps.

mod angle;
mod coding;
mod skew;
mod witness;

pub use angle::{PiRational, Symbol, SymbolInterval};
pub use coding::{
    apply_g, apply_g_exact, classify, classify_exact, code_to_interval, g_itinerary,
    g_itinerary_exact, interval_one, interval_two, CodePrefix, ItineraryOutcome,
};
pub use skew::{apply_f, escape_time, schedule_from_code, EscapeOutcome, SkewState};
pub use witness::transitivity_witness;
