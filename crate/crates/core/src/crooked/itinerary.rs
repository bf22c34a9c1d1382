//! Reduction of a curve to the sequence of partition rectangles it visits.
//!
//! Indices are unreduced lift-level integers: fiber `j` of the partition
//! recurs at every deck translate with index `j + t·N`. Crossing fiber `f`
//! moving with the core orientation enters rectangle `f`; moving against it
//! enters rectangle `f − 1`. An endpoint that lies exactly on a fiber is
//! charged to the rectangle on the positive side (`floor` convention), which
//! makes the itinerary of a traversal and its reverse mirror images.

use serde::{Deserialize, Serialize};

use crate::annuli::{LiftedCurve, RectanglePartition};
use crate::error::{Error, Result};
use crate::geom::{cross, dot, sub};
use crate::maps::LiftPoint;
use crate::scalar::Scalar;

/// Lift-level rectangle index sequence; consecutive entries differ by ±1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Itinerary {
    pub indices: Vec<i64>,
    /// `N` of the underlying partition; reducing indices mod `N` gives the
    /// rectangles actually visited downstairs.
    pub modulus: usize,
}

struct FiberInstance<F> {
    idx: i64,
    lo: LiftPoint<F>,
    hi: LiftPoint<F>,
    tangent: (F, F),
    xmin: F,
    xmax: F,
}

impl<F: Scalar> FiberInstance<F> {
    fn side(&self, p: LiftPoint<F>) -> F {
        cross(sub(self.hi, self.lo), sub(p, self.lo))
    }

    /// Parameter of `p` projected onto the fiber segment.
    fn extent_param(&self, p: LiftPoint<F>) -> F {
        let v = sub(self.hi, self.lo);
        let len2 = dot(v, v);
        if len2 == F::zero() {
            return F::zero();
        }
        dot(sub(p, self.lo), v) / len2
    }
}

struct Crossing<F> {
    param: F,
    idx: i64,
    /// +1 with the core orientation, −1 against it.
    dir: i8,
}

/// Traces the rectangle itinerary of one closed loop of the curve through
/// the partition. `tol` bounds how far a vertex may sit from a fiber before
/// a conflicting assignment is reported as ambiguous.
pub fn itinerary<F: Scalar>(
    curve: &LiftedCurve<F>,
    part: &RectanglePartition<F>,
    tol: F,
) -> Result<Itinerary> {
    let loop_curve = curve.closed_loop();
    let lp = loop_curve.params();
    let lv = loop_curve.vertices();
    let n = part.n() as i64;
    let tau = F::TAU();

    // fiber instances over every deck translate that can meet the curve
    let (bx0, bx1, _, _) = loop_curve.bbox();
    let mut instances: Vec<FiberInstance<F>> = Vec::new();
    for fiber in part.fibers() {
        let fx0 = fiber.lower_end.x.min(fiber.upper_end.x);
        let fx1 = fiber.lower_end.x.max(fiber.upper_end.x);
        let t_min = ((bx0 - fx1) / tau).floor().to_f64().unwrap() as i64 - 1;
        let t_max = ((bx1 - fx0) / tau).ceil().to_f64().unwrap() as i64 + 1;
        let base_idx = (fiber.arc / part.spacing()).round().to_f64().unwrap() as i64;
        for t in t_min..=t_max {
            let shift = tau * F::from_i64(t).unwrap();
            let lo = LiftPoint::new(fiber.lower_end.x + shift, fiber.lower_end.y);
            let hi = LiftPoint::new(fiber.upper_end.x + shift, fiber.upper_end.y);
            instances.push(FiberInstance {
                idx: base_idx + t * n,
                lo,
                hi,
                tangent: fiber.tangent,
                xmin: lo.x.min(hi.x),
                xmax: lo.x.max(hi.x),
            });
        }
    }

    let buckets = XBuckets::build(&instances, bx0, bx1);
    let extent_slack = lit_slack::<F>();

    let mut crossings: Vec<Crossing<F>> = Vec::new();
    let mut per_segment: Vec<Crossing<F>> = Vec::new();
    let mut candidates: Vec<usize> = Vec::new();

    // endpoint exactly on a fiber line
    let endpoint_hits = |vertex: usize, out: &mut Vec<Crossing<F>>| {
        let p = lv[vertex];
        let mut local: Vec<usize> = Vec::new();
        buckets.query(p.x, p.x, &mut local);
        for &fi in &local {
            let f = &instances[fi];
            if f.side(p) == F::zero() {
                let e = f.extent_param(p);
                if e >= -extent_slack && e <= F::one() + extent_slack {
                    let motion = if vertex == 0 {
                        sub(lv[1.min(lv.len() - 1)], p)
                    } else {
                        sub(p, lv[vertex - 1])
                    };
                    let d = dot(motion, f.tangent);
                    if d != F::zero() {
                        out.push(Crossing {
                            param: lp[vertex],
                            idx: f.idx,
                            dir: if d > F::zero() { 1 } else { -1 },
                        });
                    }
                }
            }
        }
    };
    endpoint_hits(0, &mut crossings);

    for i in 0..lv.len() - 1 {
        let (a, b) = (lv[i], lv[i + 1]);
        per_segment.clear();
        buckets.query(a.x.min(b.x), a.x.max(b.x), &mut candidates);
        for &fi in &candidates {
            let f = &instances[fi];
            let s0 = f.side(a);
            let s1 = f.side(b);
            if s1 == F::zero() {
                // resolved by the next segment (or the endpoint handler)
                continue;
            }
            let (t, s_before) = if s0 == F::zero() {
                if i == 0 {
                    continue; // start handled by endpoint_hits
                }
                // inherit the last strictly signed side
                let mut j = i;
                let mut s_prev = F::zero();
                for _ in 0..64 {
                    if j == 0 {
                        break;
                    }
                    j -= 1;
                    s_prev = f.side(lv[j]);
                    if s_prev != F::zero() {
                        break;
                    }
                }
                if s_prev == F::zero() || s_prev * s1 > F::zero() {
                    continue; // touch without crossing
                }
                (F::zero(), s_prev)
            } else if s0 * s1 < F::zero() {
                (s0 / (s0 - s1), s0)
            } else {
                continue;
            };
            let _ = s_before;
            let p = LiftPoint::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t);
            let e = f.extent_param(p);
            if e < -extent_slack || e > F::one() + extent_slack {
                continue; // crosses the fiber line beyond the fiber segment
            }
            let d = dot(sub(b, a), f.tangent);
            if d == F::zero() {
                return Err(Error::AmbiguousCrossing {
                    detail: format!("tangential crossing of fiber {} near vertex {i}", f.idx),
                });
            }
            per_segment.push(Crossing {
                param: lp[i] + (lp[i + 1] - lp[i]) * t,
                idx: f.idx,
                dir: if d > F::zero() { 1 } else { -1 },
            });
        }
        per_segment.sort_by(|x, y| x.param.partial_cmp(&y.param).unwrap().then(x.idx.cmp(&y.idx)));
        crossings.append(&mut per_segment);
    }
    endpoint_hits(lv.len() - 1, &mut crossings);
    crossings.sort_by(|x, y| x.param.partial_cmp(&y.param).unwrap().then(x.idx.cmp(&y.idx)));
    crossings.dedup_by(|a, b| a.param == b.param && a.idx == b.idx);

    let mut entries: Vec<i64> = Vec::with_capacity(crossings.len() + 1);
    if crossings.is_empty() {
        // the whole loop stays inside one rectangle
        let arc = part.core_arc_of(lv[0]);
        let slot = (arc / part.spacing()).floor().to_f64().unwrap() as i64;
        return Ok(Itinerary { indices: vec![slot], modulus: part.n() });
    }
    let span = *lp.last().unwrap() - lp[0];
    let eps = span * lit_eps::<F>();
    let first = &crossings[0];
    if first.param <= lp[0] + eps {
        entries.push(first.idx);
    } else {
        entries.push(if first.dir > 0 { first.idx - 1 } else { first.idx });
    }
    let last_param = *lp.last().unwrap();
    for c in &crossings {
        if c.param >= last_param - eps {
            entries.push(c.idx);
        } else {
            entries.push(if c.dir > 0 { c.idx } else { c.idx - 1 });
        }
    }
    entries.dedup();

    if let Some(w) = entries.windows(2).find(|w| (w[1] - w[0]).abs() != 1) {
        let near_fiber = lv.iter().enumerate().find(|(_, v)| {
            instances.iter().any(|f| {
                let e = f.extent_param(**v);
                e >= -extent_slack
                    && e <= F::one() + extent_slack
                    && f.side(**v).abs()
                        < tol * crate::geom::dist(f.lo, f.hi).max(F::one())
            })
        });
        return Err(Error::AmbiguousCrossing {
            detail: match near_fiber {
                Some((i, _)) => format!(
                    "itinerary step {} → {} is not ±1 (curve vertex {i} lies within tol of a fiber cut)",
                    w[0], w[1]
                ),
                None => format!("itinerary step {} → {} is not ±1", w[0], w[1]),
            },
        });
    }

    Ok(Itinerary { indices: entries, modulus: part.n() })
}

fn lit_eps<F: Scalar>() -> F {
    F::from_f64(1e-9).unwrap()
}

fn lit_slack<F: Scalar>() -> F {
    F::from_f64(1e-9).unwrap()
}

struct XBuckets<F> {
    x0: F,
    inv_width: F,
    bins: Vec<Vec<usize>>,
    stamp: std::cell::RefCell<(Vec<u32>, u32)>,
}

impl<F: Scalar> XBuckets<F> {
    fn build(instances: &[FiberInstance<F>], bx0: F, bx1: F) -> Self {
        let count = (instances.len() * 4).max(16);
        let pad = (bx1 - bx0).max(F::one()) * F::from_f64(1e-6).unwrap();
        let x0 = bx0 - pad;
        let x1 = bx1 + pad;
        let width = (x1 - x0) / F::from_usize(count).unwrap();
        let inv_width = F::one() / width;
        let mut bins = vec![Vec::new(); count];
        for (i, f) in instances.iter().enumerate() {
            let lo = Self::bin_of(x0, inv_width, count, f.xmin);
            let hi = Self::bin_of(x0, inv_width, count, f.xmax);
            for bin in bins.iter_mut().take(hi + 1).skip(lo) {
                bin.push(i);
            }
        }
        XBuckets {
            x0,
            inv_width,
            bins,
            stamp: std::cell::RefCell::new((vec![0; instances.len()], 0)),
        }
    }

    fn bin_of(x0: F, inv_width: F, count: usize, x: F) -> usize {
        let b = ((x - x0) * inv_width).floor().to_f64().unwrap_or(0.0) as i64;
        b.clamp(0, count as i64 - 1) as usize
    }

    fn query(&self, xmin: F, xmax: F, out: &mut Vec<usize>) {
        out.clear();
        let mut stamp = self.stamp.borrow_mut();
        let (marks, gen) = &mut *stamp;
        *gen += 1;
        let generation = *gen;
        let lo = Self::bin_of(self.x0, self.inv_width, self.bins.len(), xmin);
        let hi = Self::bin_of(self.x0, self.inv_width, self.bins.len(), xmax);
        for bin in self.bins.iter().take(hi + 1).skip(lo) {
            for &i in bin {
                if marks[i] != generation {
                    marks[i] = generation;
                    out.push(i);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annuli::{partition, trace_chain, RefineOpts};
    use crate::maps::{Block, BlockSchedule, WParams};

    fn base_partition(n: usize) -> RectanglePartition<f64> {
        let sched = BlockSchedule::new(vec![Block::new(1, 0).unwrap()], WParams::default()).unwrap();
        let chain = trace_chain(&sched, 0, &RefineOpts::default()).unwrap();
        partition(&chain, 0, n).unwrap()
    }

    #[test]
    fn monotone_core_walks_the_rectangles() {
        let part = base_partition(4);
        let core = LiftedCurve::<f64>::line(0.0);
        let it = itinerary(&core, &part, 1e-9).unwrap();
        assert_eq!(it.indices, vec![0, 1, 2, 3, 4]);
        assert_eq!(it.modulus, 4);
        let back = itinerary(&core.reversed(), &part, 1e-9).unwrap();
        assert_eq!(back.indices, vec![4, 3, 2, 1, 0]);
    }

    #[test]
    fn w_core_pullback_has_direction_reversals() {
        use crate::annuli::pullback_curve;
        use crate::maps::MapId;
        let part = base_partition(8);
        let params = WParams::default();
        let core = pullback_curve(
            &LiftedCurve::<f64>::line(0.0),
            MapId::W,
            &params,
            &RefineOpts::default(),
        )
        .unwrap();
        let it = itinerary(&core, &part, 1e-9).unwrap();
        // at least one local max followed by a local min
        let idx = &it.indices;
        let max_pos = (1..idx.len() - 1)
            .find(|&i| idx[i] > idx[i - 1] && idx[i] > idx[i + 1])
            .expect("no local max");
        let min_after = (max_pos + 1..idx.len() - 1)
            .find(|&i| idx[i] < idx[i - 1] && idx[i] < idx[i + 1]);
        assert!(min_after.is_some(), "no local min after the max in {idx:?}");
    }

    #[test]
    fn steps_are_plus_minus_one() {
        use crate::annuli::pullback_curve;
        use crate::maps::MapId;
        let part = base_partition(6);
        let params = WParams::default();
        let mut c = pullback_curve(
            &LiftedCurve::<f64>::line(0.0),
            MapId::W,
            &params,
            &RefineOpts::default(),
        )
        .unwrap();
        c = pullback_curve(&c, MapId::T, &params, &RefineOpts::default()).unwrap();
        let it = itinerary(&c, &part, 1e-9).unwrap();
        for w in it.indices.windows(2) {
            assert_eq!((w[1] - w[0]).abs(), 1);
        }
    }
}
