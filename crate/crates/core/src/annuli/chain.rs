//! Chain construction, membership and rasterization.
//!
//! Depth `k` of the chain is `A_{k+1} = (f_k ∘ … ∘ f_1)⁻¹(A₁)` with
//! `A₁ = S¹ × [−2, 2]`; depth 0 is `A₁` itself. Membership is decided by
//! forward composition; curves are traced backward on the cover, applying
//! the inverse blocks in the reverse of the forward application order
//! (`W̃⁻¹` steps first within each block, then `T̃⁻¹` steps).

use rayon::prelude::*;

use super::curve::{pullback_curve, LiftedCurve, RefineOpts};
use crate::error::Result;
use crate::maps::{block_forward, BlockSchedule, CylinderPoint, MapId};
use crate::scalar::{lit, Scalar};

/// Half-height of the reference annulus `A₁`.
pub const ANNULUS_HALF_HEIGHT: f64 = 2.0;

/// The three traced curves of one depth: preimages of `y = +2`, `y = −2`
/// and `y = 0`.
#[derive(Clone, Debug)]
pub struct DepthCurves<F> {
    pub upper: LiftedCurve<F>,
    pub lower: LiftedCurve<F>,
    pub core: LiftedCurve<F>,
}

/// Boundary and core curves of the chain at all depths up to some `k`.
#[derive(Clone, Debug)]
pub struct AnnulusChain<F> {
    schedule: BlockSchedule<F>,
    depths: Vec<DepthCurves<F>>,
}

impl<F: Scalar> AnnulusChain<F> {
    pub fn schedule(&self) -> &BlockSchedule<F> {
        &self.schedule
    }

    /// Deepest traced depth.
    pub fn depth(&self) -> usize {
        self.depths.len() - 1
    }

    /// Curves at depth `k` (0 = the base annulus).
    pub fn curves(&self, k: usize) -> &DepthCurves<F> {
        &self.depths[k]
    }
}

/// True iff `p` lies in the depth-`k` annulus, i.e. the forward composition
/// of the first `k` blocks keeps `|y| ≤ 2`. `k = 0` tests `A₁` itself.
pub fn membership<F: Scalar>(p: CylinderPoint<F>, sched: &BlockSchedule<F>, k: usize) -> bool {
    block_forward(p, sched, k).y.abs() <= lit(ANNULUS_HALF_HEIGHT)
}

/// Traces boundary and core curves at all depths `≤ k`.
pub fn trace_chain<F: Scalar>(
    sched: &BlockSchedule<F>,
    k: usize,
    opts: &RefineOpts<F>,
) -> Result<AnnulusChain<F>> {
    assert!(k <= sched.depth(), "depth {k} exceeds schedule length {}", sched.depth());
    let mut depths = Vec::with_capacity(k + 1);
    depths.push(DepthCurves {
        upper: LiftedCurve::line(lit(ANNULUS_HALF_HEIGHT)),
        lower: LiftedCurve::line(lit(-ANNULUS_HALF_HEIGHT)),
        core: LiftedCurve::line(F::zero()),
    });
    for d in 1..=k {
        let trace = |y0: F| -> Result<LiftedCurve<F>> {
            let mut c = LiftedCurve::line(y0);
            // innermost block first: the depth-d set is
            // f_1⁻¹(f_2⁻¹(… f_d⁻¹(A₁) …))
            for block in sched.blocks()[..d].iter().rev() {
                for _ in 0..block.w_count {
                    c = pullback_curve(&c, MapId::W, sched.params(), opts)?;
                }
                for _ in 0..block.t_count {
                    c = pullback_curve(&c, MapId::T, sched.params(), opts)?;
                }
            }
            Ok(c)
        };
        depths.push(DepthCurves {
            upper: trace(lit(ANNULUS_HALF_HEIGHT))?,
            lower: trace(lit(-ANNULUS_HALF_HEIGHT))?,
            core: trace(F::zero())?,
        });
    }
    Ok(AnnulusChain { schedule: sched.clone(), depths })
}

/// Cell-center membership bitmap over a box.
#[derive(Clone, Debug)]
pub struct Raster<F> {
    pub x0: F,
    pub x1: F,
    pub y0: F,
    pub y1: F,
    pub cols: usize,
    pub rows: usize,
    /// Row-major, row 0 at `y0` (bottom).
    pub bits: Vec<bool>,
}

impl<F: Scalar> Raster<F> {
    pub fn count_set(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn set_fraction(&self) -> f64 {
        self.count_set() as f64 / (self.cols * self.rows) as f64
    }

    pub fn get(&self, col: usize, row: usize) -> bool {
        self.bits[row * self.cols + col]
    }

    /// Center of cell `(col, row)`.
    pub fn cell_center(&self, col: usize, row: usize) -> CylinderPoint<F> {
        let half = F::from_f64(0.5).unwrap();
        let dx = (self.x1 - self.x0) / F::from_usize(self.cols).unwrap();
        let dy = (self.y1 - self.y0) / F::from_usize(self.rows).unwrap();
        CylinderPoint::new(
            self.x0 + dx * (F::from_usize(col).unwrap() + half),
            self.y0 + dy * (F::from_usize(row).unwrap() + half),
        )
    }

    /// Plain PGM (P2), maxval 1, rows written top-down.
    pub fn to_pgm(&self) -> String {
        let mut out = format!("P2\n{} {}\n1\n", self.cols, self.rows);
        for row in (0..self.rows).rev() {
            let mut line = String::with_capacity(self.cols * 2);
            for col in 0..self.cols {
                if col > 0 {
                    line.push(' ');
                }
                line.push(if self.get(col, row) { '1' } else { '0' });
            }
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Rasterizes depth-`k` membership over the box at the given resolution.
/// Each bit is the membership of the cell center.
pub fn rasterize<F: Scalar>(
    sched: &BlockSchedule<F>,
    k: usize,
    bbox: (F, F, F, F),
    res: (usize, usize),
) -> Raster<F> {
    let (cols, rows) = res;
    assert!(cols >= 2 && rows >= 2, "resolution must be at least 2×2");
    let (x0, x1, y0, y1) = bbox;
    let template = Raster { x0, x1, y0, y1, cols, rows, bits: Vec::new() };
    let bits: Vec<bool> = (0..rows)
        .into_par_iter()
        .flat_map_iter(|row| {
            let template = &template;
            (0..cols).map(move |col| membership(template.cell_center(col, row), sched, k))
        })
        .collect();
    Raster { bits, ..template }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{Block, WParams};
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn sched(blocks: &[(u32, u32)]) -> BlockSchedule<f64> {
        BlockSchedule::new(
            blocks.iter().map(|&(m, n)| Block::new(m, n).unwrap()).collect(),
            WParams::default(),
        )
        .unwrap()
    }

    #[test]
    fn membership_examples() {
        let s = sched(&[(1, 1)]);
        assert!(membership(CylinderPoint::new(0.0, 0.0), &s, 0));
        assert!(membership(CylinderPoint::new(0.0, 0.0), &s, 1));
        assert!(!membership(CylinderPoint::new(0.0, 3.0), &s, 0));
        // forward image of (π/2, 1) is (π, 4096)
        assert!(!membership(CylinderPoint::new(FRAC_PI_2, 1.0), &s, 1));
    }

    #[test]
    fn t_only_chain_is_a_flat_band() {
        let s = sched(&[(1, 0)]);
        let chain = trace_chain(&s, 1, &RefineOpts::default()).unwrap();
        for v in chain.curves(1).upper.vertices() {
            assert!((v.y - 0.25).abs() < 1e-12);
        }
        for v in chain.curves(1).lower.vertices() {
            assert!((v.y + 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn w_only_core_matches_direct_pullback() {
        let s = sched(&[(0, 1)]);
        let opts = RefineOpts::default();
        let chain = trace_chain(&s, 1, &opts).unwrap();
        let direct =
            pullback_curve(&LiftedCurve::line(0.0), MapId::W, s.params(), &opts).unwrap();
        assert_eq!(chain.curves(1).core.len(), direct.len());
        for (a, b) in chain.curves(1).core.vertices().iter().zip(direct.vertices()) {
            assert!((a.x - b.x).abs() < 1e-15 && (a.y - b.y).abs() < 1e-15);
        }
    }

    #[test]
    fn traced_vertices_are_members() {
        // Boundary vertices sit exactly on |y| = 2 after the forward map, so
        // membership is checked with a roundoff margin there; the core is
        // strictly inside.
        let s = sched(&[(1, 1)]);
        let chain = trace_chain(&s, 1, &RefineOpts::default()).unwrap();
        for v in chain.curves(1).core.vertices() {
            assert!(membership(v.project(), &s, 1));
        }
        for curve in [&chain.curves(1).upper, &chain.curves(1).lower] {
            for v in curve.vertices() {
                let fwd = block_forward(v.project(), &s, 1);
                assert!(fwd.y.abs() <= 2.0 + 1e-9);
            }
        }
    }

    #[test]
    fn nesting_of_boundaries_into_previous_depth() {
        let s = sched(&[(1, 1), (1, 1)]);
        let chain = trace_chain(&s, 2, &RefineOpts::default()).unwrap();
        for curve in [&chain.curves(2).upper, &chain.curves(2).lower] {
            for v in curve.vertices() {
                assert!(membership(v.project(), &s, 1));
                let fwd = block_forward(v.project(), &s, 1);
                assert!(fwd.y.abs() < 2.0);
            }
        }
    }

    #[test]
    fn raster_fractions() {
        let s = sched(&[(1, 0)]);
        let bbox = (0.0, TAU, -4.0, 4.0);
        let r = rasterize(&s, 0, bbox, (100, 100));
        assert!((r.set_fraction() - 0.5).abs() <= 0.01);
        let r = rasterize(&s, 1, bbox, (100, 100));
        assert!((r.set_fraction() - 1.0 / 16.0).abs() <= 0.01);
    }

    #[test]
    fn w_band_raster_fraction_is_near_inverse_two_m() {
        let s = sched(&[(0, 1)]);
        let r = rasterize(&s, 1, (0.0, TAU, -4.0, 4.0), (100, 100));
        let frac = r.set_fraction();
        let expected = 1.0 / (2.0 * 512.0);
        assert!(
            frac >= expected / 2.0 && frac <= expected * 2.0,
            "fraction {frac} not within factor 2 of {expected}"
        );
    }

    #[test]
    fn raster_trace_consistency() {
        // Set cells near a traced boundary have an unset neighbour.
        let s = sched(&[(1, 0)]);
        let r = rasterize(&s, 1, (0.0, TAU, -1.0, 1.0), (64, 64));
        let chain = trace_chain(&s, 1, &RefineOpts::default()).unwrap();
        let boundary = chain.curves(1).upper.vertices();
        let tol = 2.0 / 64.0;
        for row in 1..63 {
            for col in 1..63 {
                if !r.get(col, row) {
                    continue;
                }
                let c = r.cell_center(col, row);
                let near = boundary
                    .iter()
                    .any(|v| (v.x - c.x).abs() < tol && (v.y - c.y).abs() < tol);
                if near {
                    let unset_nbr = [(0i32, 1i32), (0, -1), (1, 0), (-1, 0)].iter().any(|(dc, dr)| {
                        !r.get((col as i32 + dc) as usize, (row as i32 + dr) as usize)
                    });
                    assert!(unset_nbr, "boundary cell ({col},{row}) has no unset neighbour");
                }
            }
        }
    }
}
