//! Floating-point scalar abstraction for the geometric core.

use num_traits::{Float, FloatConst, FromPrimitive};

/// Scalar type of the cylinder geometry: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<F: Scalar>(v: f64) -> F {
    F::from_f64(v).expect("finite literal")
}

/// Reduces an angle into the canonical branch `[0, 2π)`.
#[inline]
pub fn reduce_angle<F: Scalar>(x: F) -> F {
    let tau = F::TAU();
    let r = x % tau;
    if r < F::zero() {
        let r = r + tau;
        // r + tau can round up to exactly tau
        if r >= tau {
            F::zero()
        } else {
            r
        }
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_angle_branch() {
        assert_eq!(reduce_angle(0.0_f64), 0.0);
        assert_eq!(reduce_angle(std::f64::consts::TAU), 0.0);
        assert!((reduce_angle(-std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-15);
        let r = reduce_angle(-1e-300_f64);
        assert!((0.0..std::f64::consts::TAU).contains(&r));
        assert_eq!(reduce_angle(7.0_f32) , 7.0 - std::f32::consts::TAU);
    }
}
