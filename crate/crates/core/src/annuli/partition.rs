//! Rectangle partitions of an annulus.
//!
//! A depth-`k` annulus is partitioned into `N` "rectangles" by cutting it
//! with `N` fibers: straight segments normal to the core curve at equally
//! spaced arc positions, extended until they hit the two boundary curves.
//! Rectangles are the closed bands between consecutive fibers and satisfy
//! the cyclic adjacency rule: rectangle `i` meets rectangle `j` (`i < j`)
//! iff `j = i + 1`, or `i = 0` and `j = N − 1`.

use rayon::prelude::*;

use super::chain::AnnulusChain;
use super::curve::LiftedCurve;
use crate::error::{Error, Result};
use crate::geom::{
    arc_table, cylinder_dist, dist, nearest_distance, point_at_arc, ray_cast, seg_intersect,
};
use crate::maps::LiftPoint;
use crate::scalar::{lit, Scalar};

/// One cut fiber: a straight segment through the core, normal to it, with
/// endpoints on the two boundary curves.
#[derive(Clone, Debug)]
pub struct Fiber<F> {
    /// Arc position of the cut along the closed core loop.
    pub arc: F,
    /// Cut point on the core.
    pub base: LiftPoint<F>,
    /// Unit tangent of the core at the cut.
    pub tangent: (F, F),
    pub lower_end: LiftPoint<F>,
    /// Arc position of `lower_end` on the extended lower boundary.
    pub lower_arc: F,
    pub upper_end: LiftPoint<F>,
    /// Arc position of `upper_end` on the extended upper boundary.
    pub upper_arc: F,
}

/// An `N`-rectangle decomposition of one annulus of the chain.
#[derive(Clone, Debug)]
pub struct RectanglePartition<F> {
    n: usize,
    depth: usize,
    loop_len: F,
    core: Vec<LiftPoint<F>>,
    core_arcs: Vec<F>,
    upper_ext: Vec<LiftPoint<F>>,
    upper_arcs: Vec<F>,
    upper_loop_len: F,
    lower_ext: Vec<LiftPoint<F>>,
    lower_arcs: Vec<F>,
    lower_loop_len: F,
    fibers: Vec<Fiber<F>>,
}

/// Partitions the depth-`k` annulus of the chain into `n ≥ 4` rectangles
/// with cuts at equal arc spacing along the depth-`k` core.
pub fn partition<F: Scalar>(
    chain: &AnnulusChain<F>,
    k: usize,
    n: usize,
) -> Result<RectanglePartition<F>> {
    if n < 4 {
        return Err(Error::invalid("partition", format!("need at least 4 rectangles, got {n}")));
    }
    if k > chain.depth() {
        return Err(Error::invalid("partition", format!("depth {k} not traced")));
    }
    let curves = chain.curves(k);
    RectanglePartition::build(&curves.core, &curves.upper, &curves.lower, n, k)
}

/// Maximum over rectangles of the supremum of pairwise distances between
/// boundary sample points, in the cylinder metric.
pub fn max_rect_diameter<F: Scalar>(part: &RectanglePartition<F>) -> F {
    part.max_rect_diameter()
}

fn extend_loop<F: Scalar>(curve: &LiftedCurve<F>) -> (Vec<LiftPoint<F>>, Vec<F>, F) {
    let closed = curve.closed_loop();
    let base = closed.vertices();
    let tau = F::TAU();
    let mut pts = Vec::with_capacity(base.len() * 3);
    for v in base {
        pts.push(LiftPoint::new(v.x - tau, v.y));
    }
    for v in base.iter().skip(1) {
        pts.push(*v);
    }
    for v in base.iter().skip(1) {
        pts.push(LiftPoint::new(v.x + tau, v.y));
    }
    let arcs = arc_table(&pts);
    let loop_len = arc_table(base).last().copied().unwrap();
    (pts, arcs, loop_len)
}

impl<F: Scalar> RectanglePartition<F> {
    /// Builds the partition from explicit core and boundary curves.
    pub fn build(
        core: &LiftedCurve<F>,
        upper: &LiftedCurve<F>,
        lower: &LiftedCurve<F>,
        n: usize,
        depth: usize,
    ) -> Result<Self> {
        if n < 4 {
            return Err(Error::invalid("partition", format!("need at least 4 rectangles, got {n}")));
        }
        let core_loop = core.closed_loop();
        let core_pts = core_loop.vertices().to_vec();
        let core_arcs = arc_table(&core_pts);
        let loop_len = *core_arcs.last().unwrap();

        let (upper_ext, upper_arcs, upper_loop_len) = extend_loop(upper);
        let (lower_ext, lower_arcs, lower_loop_len) = extend_loop(lower);

        let mut fibers = Vec::with_capacity(n);
        for j in 0..n {
            let s = loop_len * F::from_usize(j).unwrap() / F::from_usize(n).unwrap();
            let (base, tangent) = point_at_arc(&core_pts, &core_arcs, s);
            let normal = (-tangent.1, tangent.0);
            let d_up = nearest_distance(&upper_ext, base);
            let d_lo = nearest_distance(&lower_ext, base);
            let reach = (d_up + d_lo) * lit::<F>(4.0) + lit::<F>(1e-9);

            let hit = |dir: (F, F)| -> Result<(bool, F, LiftPoint<F>)> {
                let mut max_len = reach;
                for _ in 0..3 {
                    let up = ray_cast(&upper_ext, base, dir, max_len);
                    let lo = ray_cast(&lower_ext, base, dir, max_len);
                    let choice = match (up, lo) {
                        (Some(u), Some(l)) => Some(if u.0 <= l.0 { (true, u) } else { (false, l) }),
                        (Some(u), None) => Some((true, u)),
                        (None, Some(l)) => Some((false, l)),
                        (None, None) => None,
                    };
                    if let Some((is_upper, (t, seg, u))) = choice {
                        let (arcs, pts) = if is_upper {
                            (&upper_arcs, &upper_ext)
                        } else {
                            (&lower_arcs, &lower_ext)
                        };
                        let arc = arcs[seg] + (arcs[seg + 1] - arcs[seg]) * u;
                        let p = LiftPoint::new(
                            base.x + dir.0 * t,
                            base.y + dir.1 * t,
                        );
                        let _ = pts;
                        return Ok((is_upper, arc, p));
                    }
                    max_len = max_len * lit::<F>(8.0);
                }
                Err(Error::invalid("partition", format!("fiber {j} does not reach a boundary")))
            };

            let plus = hit(normal)?;
            let minus = hit((-normal.0, -normal.1))?;
            if plus.0 == minus.0 {
                return Err(Error::invalid(
                    "partition",
                    format!("fiber {j} hits the same boundary on both sides"),
                ));
            }
            let (up_hit, lo_hit) = if plus.0 { (plus, minus) } else { (minus, plus) };
            fibers.push(Fiber {
                arc: s,
                base,
                tangent,
                lower_end: lo_hit.2,
                lower_arc: lo_hit.1,
                upper_end: up_hit.2,
                upper_arc: up_hit.1,
            });
        }

        let part = RectanglePartition {
            n,
            depth,
            loop_len,
            core: core_pts,
            core_arcs,
            upper_ext,
            upper_arcs,
            upper_loop_len,
            lower_ext,
            lower_arcs,
            lower_loop_len,
            fibers,
        };
        part.check_fibers_disjoint()?;
        Ok(part)
    }

    fn check_fibers_disjoint(&self) -> Result<()> {
        let tau = F::TAU();
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                for shift in [-tau, F::zero(), tau] {
                    let fa = &self.fibers[a];
                    let fb = &self.fibers[b];
                    let b0 = LiftPoint::new(fb.lower_end.x + shift, fb.lower_end.y);
                    let b1 = LiftPoint::new(fb.upper_end.x + shift, fb.upper_end.y);
                    if seg_intersect(fa.lower_end, fa.upper_end, b0, b1).is_some() {
                        return Err(Error::SelfIntersectingFibers { a, b });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn loop_len(&self) -> F {
        self.loop_len
    }

    /// Arc spacing between consecutive cuts.
    pub fn spacing(&self) -> F {
        self.loop_len / F::from_usize(self.n).unwrap()
    }

    pub fn fibers(&self) -> &[Fiber<F>] {
        &self.fibers
    }

    pub fn core_loop(&self) -> (&[LiftPoint<F>], &[F]) {
        (&self.core, &self.core_arcs)
    }

    /// Arc position (extended coordinates) of the nearest core point; used
    /// to classify points into rectangles when no crossing data is at hand.
    pub fn core_arc_of(&self, p: LiftPoint<F>) -> F {
        let tau = F::TAU();
        let mut best = F::infinity();
        let mut best_arc = F::zero();
        for shift_idx in -2i32..=2 {
            let shift = tau * F::from_i32(shift_idx).unwrap();
            for (i, w) in self.core.windows(2).enumerate() {
                let a = LiftPoint::new(w[0].x + shift, w[0].y);
                let b = LiftPoint::new(w[1].x + shift, w[1].y);
                let d = crate::geom::point_segment_distance(p, a, b);
                if d < best {
                    best = d;
                    let seg_len = dist(a, b);
                    let t = if seg_len > F::zero() {
                        (crate::geom::dot(crate::geom::sub(p, a), crate::geom::sub(b, a))
                            / (seg_len * seg_len))
                            .max(F::zero())
                            .min(F::one())
                    } else {
                        F::zero()
                    };
                    best_arc = self.core_arcs[i]
                        + (self.core_arcs[i + 1] - self.core_arcs[i]) * t
                        + self.loop_len * F::from_i32(shift_idx).unwrap();
                }
            }
        }
        best_arc
    }

    /// Boundary polygon of rectangle `j` (unreduced lift coordinates; the
    /// wrap rectangle `n−1` closes against fiber 0 translated one turn).
    pub fn rectangle_polygon(&self, j: usize) -> Vec<LiftPoint<F>> {
        assert!(j < self.n);
        let tau = F::TAU();
        let f0 = self.fibers[j].clone();
        let f1 = if j + 1 < self.n {
            self.fibers[j + 1].clone()
        } else {
            let f = &self.fibers[0];
            Fiber {
                arc: f.arc + self.loop_len,
                base: LiftPoint::new(f.base.x + tau, f.base.y),
                tangent: f.tangent,
                lower_end: LiftPoint::new(f.lower_end.x + tau, f.lower_end.y),
                lower_arc: f.lower_arc + self.lower_loop_len,
                upper_end: LiftPoint::new(f.upper_end.x + tau, f.upper_end.y),
                upper_arc: f.upper_arc + self.upper_loop_len,
            }
        };
        let mut poly = Vec::new();
        poly.push(f0.lower_end);
        poly.push(f0.upper_end);
        poly.extend(points_between(&self.upper_ext, &self.upper_arcs, f0.upper_arc, f1.upper_arc));
        poly.push(f1.upper_end);
        poly.push(f1.lower_end);
        let mut back =
            points_between(&self.lower_ext, &self.lower_arcs, f0.lower_arc, f1.lower_arc);
        back.reverse();
        poly.extend(back);
        poly
    }

    /// Supremum of pairwise cylinder distances between boundary samples of
    /// rectangle `j`.
    pub fn rect_diameter(&self, j: usize) -> F {
        let poly = self.rectangle_polygon(j);
        let samples = resample(&poly, 512);
        let mut best = F::zero();
        for a in 0..samples.len() {
            for b in (a + 1)..samples.len() {
                let d = cylinder_dist(samples[a], samples[b]);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    pub fn max_rect_diameter(&self) -> F {
        (0..self.n)
            .into_par_iter()
            .map(|j| self.rect_diameter(j))
            .reduce(|| F::zero(), |a, b| a.max(b))
    }
}

/// Interior vertices of the polyline strictly between two arc positions,
/// with interpolated endpoints included.
fn points_between<F: Scalar>(
    pts: &[LiftPoint<F>],
    arcs: &[F],
    from: F,
    to: F,
) -> Vec<LiftPoint<F>> {
    if to <= from {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, a) in arcs.iter().enumerate() {
        if *a > from && *a < to {
            out.push(pts[i]);
        }
        if *a >= to {
            break;
        }
    }
    out
}

fn resample<F: Scalar>(poly: &[LiftPoint<F>], cap: usize) -> Vec<LiftPoint<F>> {
    if poly.len() <= cap {
        return poly.to_vec();
    }
    let step = poly.len().div_ceil(cap);
    let mut out: Vec<LiftPoint<F>> = poly.iter().step_by(step).copied().collect();
    if let Some(last) = poly.last() {
        if out.last() != Some(last) {
            out.push(*last);
        }
    }
    out
}

/// True iff the two polygons intersect (shared boundary counts), testing
/// edge crossings and mutual containment over deck shifts.
pub fn polygons_intersect<F: Scalar>(a: &[LiftPoint<F>], b: &[LiftPoint<F>]) -> bool {
    let tau = F::TAU();
    for shift_idx in -1i32..=1 {
        let shift = tau * F::from_i32(shift_idx).unwrap();
        let bs: Vec<LiftPoint<F>> =
            b.iter().map(|p| LiftPoint::new(p.x + shift, p.y)).collect();
        for i in 0..a.len() {
            let a0 = a[i];
            let a1 = a[(i + 1) % a.len()];
            for k in 0..bs.len() {
                let b0 = bs[k];
                let b1 = bs[(k + 1) % bs.len()];
                if seg_intersect(a0, a1, b0, b1).is_some() {
                    return true;
                }
                // collinear overlap: endpoints on the other segment
                if crate::geom::point_segment_distance(b0, a0, a1) == F::zero()
                    || crate::geom::point_segment_distance(a0, b0, b1) == F::zero()
                {
                    return true;
                }
            }
        }
        if point_in_polygon(a[0], &bs) || point_in_polygon(bs[0], a) {
            return true;
        }
    }
    false
}

fn point_in_polygon<F: Scalar>(p: LiftPoint<F>, poly: &[LiftPoint<F>]) -> bool {
    let mut inside = false;
    let mut j = poly.len() - 1;
    for i in 0..poly.len() {
        let (pi, pj) = (poly[i], poly[j]);
        if (pi.y > p.y) != (pj.y > p.y) {
            let x_cross = pi.x + (p.y - pi.y) / (pj.y - pi.y) * (pj.x - pi.x);
            if p.x < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annuli::chain::trace_chain;
    use crate::annuli::curve::RefineOpts;
    use crate::maps::{Block, BlockSchedule, WParams};
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn sched(blocks: &[(u32, u32)]) -> BlockSchedule<f64> {
        BlockSchedule::new(
            blocks.iter().map(|&(m, n)| Block::new(m, n).unwrap()).collect(),
            WParams::default(),
        )
        .unwrap()
    }

    fn base_partition(n: usize) -> RectanglePartition<f64> {
        let s = sched(&[(1, 0)]);
        let chain = trace_chain(&s, 0, &RefineOpts::default()).unwrap();
        partition(&chain, 0, n).unwrap()
    }

    #[test]
    fn base_cuts_are_quarter_turns() {
        let part = base_partition(4);
        let expect = [0.0, FRAC_PI_2, PI, 1.5 * PI];
        for (fiber, x) in part.fibers().iter().zip(expect) {
            assert!((fiber.base.x - x).abs() < 1e-9, "cut at {} != {x}", fiber.base.x);
            assert!((fiber.upper_end.y - 2.0).abs() < 1e-9);
            assert!((fiber.lower_end.y + 2.0).abs() < 1e-9);
        }
        // x-extent of each rectangle is π/2
        for j in 0..4 {
            let poly = part.rectangle_polygon(j);
            let x0 = poly.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
            let x1 = poly.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
            assert!((x1 - x0 - FRAC_PI_2).abs() < 1e-9);
        }
    }

    #[test]
    fn base_diameter_bounds() {
        let part = base_partition(4);
        let d = max_rect_diameter(&part);
        let upper = (FRAC_PI_2 * FRAC_PI_2 + 16.0).sqrt();
        assert!(d >= 4.0 && d <= upper + 1e-9, "diameter {d} outside [4, {upper}]");
        // finer cuts cannot increase the diameter
        let part8 = base_partition(8);
        assert!(max_rect_diameter(&part8) <= d + 1e-12);
    }

    #[test]
    fn thin_band_diameter_tends_to_spacing() {
        // y ∈ [−ε, ε] band, many rectangles: diameter → x-spacing.
        let eps = 1e-6;
        let core = LiftedCurve::<f64>::line(0.0);
        let upper = LiftedCurve::<f64>::line(eps);
        let lower = LiftedCurve::<f64>::line(-eps);
        let part = RectanglePartition::build(&core, &upper, &lower, 16, 0).unwrap();
        let d = part.max_rect_diameter();
        let spacing = TAU / 16.0;
        assert!((d - spacing).abs() < 1e-4, "diameter {d} vs spacing {spacing}");
    }

    #[test]
    fn w_preimage_partition_adjacency() {
        let s = sched(&[(0, 1)]);
        let chain = trace_chain(&s, 1, &RefineOpts::default()).unwrap();
        let part = partition(&chain, 1, 8).unwrap();
        let polys: Vec<_> = (0..8).map(|j| part.rectangle_polygon(j)).collect();
        for i in 0..8 {
            for j in (i + 1)..8 {
                let adjacent = j == i + 1 || (i == 0 && j == 7);
                let meets = polygons_intersect(&polys[i], &polys[j]);
                assert_eq!(
                    meets, adjacent,
                    "rectangles {i} and {j}: intersect = {meets}, adjacency = {adjacent}"
                );
            }
        }
    }

    #[test]
    fn too_few_rectangles_is_rejected() {
        let s = sched(&[(1, 0)]);
        let chain = trace_chain(&s, 0, &RefineOpts::default()).unwrap();
        assert!(partition(&chain, 0, 3).is_err());
    }
}
