//! Combinatorial crookedness: itineraries of curves through a rectangle
//! partition, the `(j₀, j₁)`-wiggle decision, direction reversals, and the
//! empirical search for block schedules that achieve crookedness at finite
//! depth.

mod itinerary;
mod reversal;
mod search;
mod wiggle;

pub use itinerary::{itinerary, Itinerary};
pub use reversal::reversal_locations;
pub use search::{find_crooked_blocks, verify_schedule, CrookedReport, DepthVerdict, SearchOpts};
pub use wiggle::{crooked_failures, crooked_pattern, has_wiggle, is_crooked, WiggleQuery};
