//! Direction reversals of a traced curve.

use crate::annuli::LiftedCurve;
use crate::maps::LiftPoint;
use crate::scalar::Scalar;

/// Vertices of one closed loop of the curve where the x-component of the
/// traversal direction changes sign. The loop seam is treated cyclically, so
/// counts are per closed loop. Requires at least 3 vertices.
pub fn reversal_locations<F: Scalar>(curve: &LiftedCurve<F>) -> Vec<LiftPoint<F>> {
    assert!(curve.len() >= 3, "need at least 3 vertices");
    let loop_curve = curve.closed_loop();
    let v = loop_curve.vertices();

    // sign of Δx per segment; zero-length-in-x segments inherit the sign of
    // the previous signed segment
    let mut signed: Vec<(usize, i8)> = Vec::new();
    for i in 0..v.len() - 1 {
        let dx = v[i + 1].x - v[i].x;
        if dx > F::zero() {
            signed.push((i, 1));
        } else if dx < F::zero() {
            signed.push((i, -1));
        }
    }
    if signed.len() < 2 {
        return Vec::new();
    }

    let mut out = Vec::new();
    for w in signed.windows(2) {
        let (_, s0) = w[0];
        let (seg1, s1) = w[1];
        if s0 != s1 {
            out.push(v[seg1]);
        }
    }
    // cyclic seam: the continuation repeats the first signed segment
    let (_, last_sign) = *signed.last().unwrap();
    let (_, first_sign) = signed[0];
    if last_sign != first_sign {
        out.push(v[v.len() - 1]);
    }
    out
}
