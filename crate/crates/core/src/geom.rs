//! Small 2-D helpers shared by the annulus machinery: segment intersection,
//! arc tables, nearest-point queries and ray casting against polylines.

use crate::maps::LiftPoint;
use crate::scalar::Scalar;

#[inline]
pub fn sub<F: Scalar>(a: LiftPoint<F>, b: LiftPoint<F>) -> (F, F) {
    (a.x - b.x, a.y - b.y)
}

#[inline]
pub fn cross<F: Scalar>(a: (F, F), b: (F, F)) -> F {
    a.0 * b.1 - a.1 * b.0
}

#[inline]
pub fn dot<F: Scalar>(a: (F, F), b: (F, F)) -> F {
    a.0 * b.0 + a.1 * b.1
}

#[inline]
pub fn dist<F: Scalar>(a: LiftPoint<F>, b: LiftPoint<F>) -> F {
    let (dx, dy) = sub(a, b);
    (dx * dx + dy * dy).sqrt()
}

/// Distance on the cylinder: Euclidean after the x-difference is reduced by
/// the nearest deck shift.
pub fn cylinder_dist<F: Scalar>(a: LiftPoint<F>, b: LiftPoint<F>) -> F {
    let tau = F::TAU();
    let dx = (a.x - b.x) % tau;
    let dx = dx.abs();
    let dx = dx.min(tau - dx);
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

/// Turning angle at `b` between chords `a→b` and `b→c`, in radians.
pub fn bend_angle<F: Scalar>(a: LiftPoint<F>, b: LiftPoint<F>, c: LiftPoint<F>) -> F {
    let u = sub(b, a);
    let v = sub(c, b);
    let nu = dot(u, u).sqrt();
    let nv = dot(v, v).sqrt();
    if nu == F::zero() || nv == F::zero() {
        return F::zero();
    }
    let cosine = (dot(u, v) / (nu * nv)).min(F::one()).max(-F::one());
    cosine.acos()
}

/// Proper intersection of segments `a0→a1` and `b0→b1`. Returns the
/// parameters `(t, u)` on each segment, both in `[0, 1]`, for transversal
/// crossings only (parallel and degenerate cases return `None`).
pub fn seg_intersect<F: Scalar>(
    a0: LiftPoint<F>,
    a1: LiftPoint<F>,
    b0: LiftPoint<F>,
    b1: LiftPoint<F>,
) -> Option<(F, F)> {
    let r = sub(a1, a0);
    let s = sub(b1, b0);
    let denom = cross(r, s);
    if denom == F::zero() {
        return None;
    }
    let qp = sub(b0, a0);
    let t = cross(qp, s) / denom;
    let u = cross(qp, r) / denom;
    let zero = F::zero();
    let one = F::one();
    if t >= zero && t <= one && u >= zero && u <= one {
        Some((t, u))
    } else {
        None
    }
}

/// Cumulative arc-length table: `out[i]` is the length up to vertex `i`.
pub fn arc_table<F: Scalar>(pts: &[LiftPoint<F>]) -> Vec<F> {
    let mut acc = F::zero();
    let mut out = Vec::with_capacity(pts.len());
    out.push(acc);
    for w in pts.windows(2) {
        acc = acc + dist(w[0], w[1]);
        out.push(acc);
    }
    out
}

/// Point and unit tangent at arc position `s` along a polyline (clamped).
pub fn point_at_arc<F: Scalar>(
    pts: &[LiftPoint<F>],
    arcs: &[F],
    s: F,
) -> (LiftPoint<F>, (F, F)) {
    let total = *arcs.last().unwrap();
    let s = s.max(F::zero()).min(total);
    let i = match arcs.binary_search_by(|a| a.partial_cmp(&s).unwrap()) {
        Ok(i) => i.min(pts.len() - 2),
        Err(i) => i.saturating_sub(1).min(pts.len() - 2),
    };
    let seg = arcs[i + 1] - arcs[i];
    let t = if seg > F::zero() { (s - arcs[i]) / seg } else { F::zero() };
    let p = LiftPoint::new(
        pts[i].x + (pts[i + 1].x - pts[i].x) * t,
        pts[i].y + (pts[i + 1].y - pts[i].y) * t,
    );
    let (dx, dy) = sub(pts[i + 1], pts[i]);
    let n = (dx * dx + dy * dy).sqrt();
    let tangent = if n > F::zero() { (dx / n, dy / n) } else { (F::one(), F::zero()) };
    (p, tangent)
}

/// Distance from `p` to the nearest point of the polyline.
pub fn nearest_distance<F: Scalar>(pts: &[LiftPoint<F>], p: LiftPoint<F>) -> F {
    let mut best = F::infinity();
    for w in pts.windows(2) {
        let d = point_segment_distance(p, w[0], w[1]);
        if d < best {
            best = d;
        }
    }
    best
}

pub fn point_segment_distance<F: Scalar>(p: LiftPoint<F>, a: LiftPoint<F>, b: LiftPoint<F>) -> F {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len2 = dot(ab, ab);
    if len2 == F::zero() {
        return dist(p, a);
    }
    let t = (dot(ap, ab) / len2).max(F::zero()).min(F::one());
    let q = LiftPoint::new(a.x + ab.0 * t, a.y + ab.1 * t);
    dist(p, q)
}

/// First hit of the ray `origin + t·dir` (`0 < t ≤ max_len`) against the
/// polyline; returns `(t, vertex index of the hit segment, segment param)`.
pub fn ray_cast<F: Scalar>(
    pts: &[LiftPoint<F>],
    origin: LiftPoint<F>,
    dir: (F, F),
    max_len: F,
) -> Option<(F, usize, F)> {
    let tip = LiftPoint::new(origin.x + dir.0 * max_len, origin.y + dir.1 * max_len);
    let mut best: Option<(F, usize, F)> = None;
    for (i, w) in pts.windows(2).enumerate() {
        if let Some((t, u)) = seg_intersect(origin, tip, w[0], w[1]) {
            if t > F::zero() && best.map_or(true, |(bt, _, _)| t < bt) {
                best = Some((t, i, u));
            }
        }
    }
    best.map(|(t, i, u)| (t * max_len, i, u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> LiftPoint<f64> {
        LiftPoint::new(x, y)
    }

    #[test]
    fn intersection_basics() {
        let hit = seg_intersect(p(0.0, -1.0), p(0.0, 1.0), p(-1.0, 0.0), p(1.0, 0.0));
        let (t, u) = hit.unwrap();
        assert!((t - 0.5).abs() < 1e-15 && (u - 0.5).abs() < 1e-15);
        assert!(seg_intersect(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(1.0, 1.0)).is_none());
    }

    #[test]
    fn cylinder_metric_uses_deck_shifts() {
        let d = cylinder_dist(p(0.1, 0.0), p(std::f64::consts::TAU - 0.1, 0.0));
        assert!((d - 0.2).abs() < 1e-12);
    }

    #[test]
    fn ray_hits_nearest_segment() {
        let line = vec![p(-1.0, 1.0), p(1.0, 1.0)];
        let (t, i, u) = ray_cast(&line, p(0.0, 0.0), (0.0, 1.0), 5.0).unwrap();
        assert!((t - 1.0).abs() < 1e-12);
        assert_eq!(i, 0);
        assert!((u - 0.5).abs() < 1e-12);
    }
}
