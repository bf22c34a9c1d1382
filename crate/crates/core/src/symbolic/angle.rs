//! Exact circle points and intervals as rational multiples of π.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::scalar::Scalar;

pub(crate) type Rat = Ratio<BigInt>;

pub(crate) fn rat(num: i64, den: i64) -> Rat {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

fn mod_two(r: &Rat) -> Rat {
    let two = Rat::from_integer(BigInt::from(2));
    let mut m = r - (r / &two).floor() * &two;
    if m.is_negative() {
        m += &two;
    }
    if m == two {
        Rat::zero()
    } else {
        m
    }
}

/// A circle point `r·π` with `r` rational, reduced into `[0, 2)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PiRational {
    units: Rat,
}

impl PiRational {
    /// The point `(num/den)·π`, reduced mod 2π.
    pub fn new(num: i64, den: i64) -> Self {
        PiRational { units: mod_two(&rat(num, den)) }
    }

    pub(crate) fn from_units(units: Rat) -> Self {
        PiRational { units: mod_two(&units) }
    }

    /// The rational coefficient of π, in `[0, 2)`.
    pub fn units(&self) -> &Rat {
        &self.units
    }

    pub fn to_float<F: Scalar>(&self) -> F {
        F::from_f64(self.units.to_f64().unwrap() * std::f64::consts::PI).unwrap()
    }
}

impl std::fmt::Display for PiRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_pi_multiple(f, &self.units)
    }
}

pub(crate) fn write_pi_multiple(f: &mut std::fmt::Formatter<'_>, r: &Rat) -> std::fmt::Result {
    let (num, den) = (r.numer(), r.denom());
    if num.is_zero() {
        return write!(f, "0");
    }
    let one = BigInt::from(1);
    match (num == &one, den == &one) {
        (true, true) => write!(f, "pi"),
        (true, false) => write!(f, "pi/{den}"),
        (false, true) => write!(f, "{num}pi"),
        (false, false) => write!(f, "{num}pi/{den}"),
    }
}

/// Coding symbol: which of the two selector intervals a point lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Symbol {
    One,
    Two,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::One => '1',
            Symbol::Two => '2',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '1' => Some(Symbol::One),
            '2' => Some(Symbol::Two),
            _ => None,
        }
    }
}

/// A closed interval `[lo, hi]·π` on a lift branch inside `[0, 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolInterval {
    pub(crate) lo: Rat,
    pub(crate) hi: Rat,
}

impl SymbolInterval {
    pub(crate) fn from_units(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi);
        SymbolInterval { lo, hi }
    }

    /// Endpoints in radians.
    pub fn bounds<F: Scalar>(&self) -> (F, F) {
        let pi = std::f64::consts::PI;
        (
            F::from_f64(self.lo.to_f64().unwrap() * pi).unwrap(),
            F::from_f64(self.hi.to_f64().unwrap() * pi).unwrap(),
        )
    }

    /// Exact width in units of π.
    pub fn width_units(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// Width in radians.
    pub fn width<F: Scalar>(&self) -> F {
        F::from_f64(self.width_units().to_f64().unwrap() * std::f64::consts::PI).unwrap()
    }

    /// Exact midpoint.
    pub fn midpoint(&self) -> PiRational {
        PiRational::from_units((&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2)))
    }

    pub fn contains(&self, z: &PiRational) -> bool {
        z.units() >= &self.lo && z.units() <= &self.hi
    }

    pub(crate) fn lo_units(&self) -> &Rat {
        &self.lo
    }

    pub(crate) fn hi_units(&self) -> &Rat {
        &self.hi
    }
}

impl std::fmt::Display for SymbolInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        write_pi_multiple(f, &self.lo)?;
        write!(f, ", ")?;
        write_pi_multiple(f, &self.hi)?;
        write!(f, "]")
    }
}
