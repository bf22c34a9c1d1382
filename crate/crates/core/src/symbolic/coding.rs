//! The base map, itineraries and the code ↔ interval correspondence.

use num_bigint::BigInt;

use super::angle::{rat, PiRational, Rat, Symbol, SymbolInterval};
use crate::error::{Error, Result};
use crate::scalar::{reduce_angle, Scalar};

/// `I₁ = [0, π/2]`.
pub fn interval_one() -> SymbolInterval {
    SymbolInterval::from_units(rat(0, 1), rat(1, 2))
}

/// `I₂ = [π, 3π/2]`.
pub fn interval_two() -> SymbolInterval {
    SymbolInterval::from_units(rat(1, 1), rat(3, 2))
}

/// `g(z) = 3z (mod 2π)`.
pub fn apply_g<F: Scalar>(z: F) -> F {
    reduce_angle(z * F::from_f64(3.0).unwrap())
}

/// Exact tripling on rational multiples of π.
pub fn apply_g_exact(z: &PiRational) -> PiRational {
    PiRational::from_units(z.units() * Rat::from_integer(BigInt::from(3)))
}

/// Which selector interval `z` lies in; both are closed and disjoint.
pub fn classify<F: Scalar>(z: F) -> Option<Symbol> {
    let z = reduce_angle(z).to_f64().unwrap();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let pi = std::f64::consts::PI;
    if (0.0..=half_pi).contains(&z) {
        Some(Symbol::One)
    } else if (pi..=1.5 * pi).contains(&z) {
        Some(Symbol::Two)
    } else {
        None
    }
}

pub fn classify_exact(z: &PiRational) -> Option<Symbol> {
    if interval_one().contains(z) {
        Some(Symbol::One)
    } else if interval_two().contains(z) {
        Some(Symbol::Two)
    } else {
        None
    }
}

/// A finite `{1, 2}`-word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CodePrefix {
    symbols: Vec<Symbol>,
}

impl CodePrefix {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::invalid("CodePrefix", "must be nonempty"));
        }
        Ok(CodePrefix { symbols })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let symbols: Option<Vec<Symbol>> = text.chars().map(Symbol::from_char).collect();
        match symbols {
            Some(s) if !s.is_empty() => Ok(CodePrefix { symbols: s }),
            _ => Err(Error::invalid("CodePrefix", format!("not a {{1,2}}-word: {text:?}"))),
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl std::fmt::Display for CodePrefix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

/// Result of following an orbit through the selector intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ItineraryOutcome {
    Code(CodePrefix),
    /// The orbit left `I₁ ∪ I₂` at this step.
    Escaped { step: usize },
}

/// Symbols of `z, g(z), …, g^{n−1}(z)`, or the first escape step.
pub fn g_itinerary<F: Scalar>(z: F, n: usize) -> ItineraryOutcome {
    assert!(n >= 1);
    let mut z = reduce_angle(z);
    let mut symbols = Vec::with_capacity(n);
    for t in 0..n {
        match classify(z) {
            Some(s) => symbols.push(s),
            None => return ItineraryOutcome::Escaped { step: t },
        }
        z = apply_g(z);
    }
    ItineraryOutcome::Code(CodePrefix { symbols })
}

/// Exact-arithmetic itinerary.
pub fn g_itinerary_exact(z: &PiRational, n: usize) -> ItineraryOutcome {
    assert!(n >= 1);
    let mut z = z.clone();
    let mut symbols = Vec::with_capacity(n);
    for t in 0..n {
        match classify_exact(&z) {
            Some(s) => symbols.push(s),
            None => return ItineraryOutcome::Escaped { step: t },
        }
        z = apply_g_exact(&z);
    }
    ItineraryOutcome::Code(CodePrefix { symbols })
}

/// The closed interval of points whose orbit realizes the prefix:
/// `{z ∈ I_{α₀} : g^t(z) ∈ I_{α_t} for t < len}`. Width shrinks by a factor
/// of exactly 3 per symbol; the interval is never empty because `g(I₁)` and
/// `g(I₂)` each cover `I₁ ∪ I₂`.
pub fn code_to_interval(prefix: &CodePrefix) -> SymbolInterval {
    let three = Rat::from_integer(BigInt::from(3));
    let interval_of = |s: Symbol| match s {
        Symbol::One => interval_one(),
        Symbol::Two => interval_two(),
    };
    let mut j = interval_of(*prefix.symbols().last().unwrap());
    let half = rat(1, 2);
    for s in prefix.symbols()[..prefix.len() - 1].iter().rev() {
        let (lo, hi) = (j.lo_units().clone(), j.hi_units().clone());
        j = match s {
            // z ∈ I₁: 3z sweeps [0, 3π/2] once, no branch shift needed
            Symbol::One => SymbolInterval::from_units(&lo / &three, &hi / &three),
            // z ∈ I₂: 3z sweeps [3π, 9π/2]; lift the target into that branch
            Symbol::Two => {
                let shift = if hi <= half {
                    Rat::from_integer(BigInt::from(4))
                } else {
                    Rat::from_integer(BigInt::from(2))
                };
                SymbolInterval::from_units((&lo + &shift) / &three, (&hi + &shift) / &three)
            }
        };
    }
    j
}
