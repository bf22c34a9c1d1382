//! Empirical search for block schedules whose annulus chain is crooked at
//! finite depth.
//!
//! No closed form for the block sizes is known; candidates `(m, n)` are
//! explored in increasing `m + n` order (ties broken by smaller `m`) and the
//! first block making the next core itinerary crooked in the current
//! partition is kept. Verdicts carry the strip-thinness margin that backs
//! the reduction of crookedness to core itineraries: the strip must be thin
//! against the fiber spacing for every path in it to be itinerary-equivalent
//! to the core.

use serde::{Deserialize, Serialize};

use super::itinerary::itinerary;
use super::wiggle::crooked_failures;
use crate::annuli::{partition, trace_chain, LiftedCurve, RectanglePartition, RefineOpts};
use crate::error::{Error, Result};
use crate::geom::nearest_distance;
use crate::maps::{Block, BlockSchedule, WParams};
use crate::scalar::{lit, Scalar};

/// Search controls.
#[derive(Clone, Copy, Debug)]
pub struct SearchOpts<F> {
    /// Refinement used for the traced curves.
    pub refine: RefineOpts<F>,
    /// Ambiguity tolerance for itinerary extraction.
    pub itinerary_tol: F,
    /// Candidates with `m + n` beyond this are not generated.
    pub max_block_sum: u32,
}

impl<F: Scalar> Default for SearchOpts<F> {
    fn default() -> Self {
        SearchOpts {
            // crossing extraction only needs the tolerance to stay well under
            // the fiber spacing; the library-wide 1e-3 default wastes the
            // vertex budget on W-heavy candidates
            refine: RefineOpts { tol: lit(5e-3), ..RefineOpts::default() },
            itinerary_tol: lit(1e-9),
            max_block_sum: 12,
        }
    }
}

/// Per-depth verdict of a crookedness check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DepthVerdict {
    /// Depth `i`: the depth-`(i+1)` core was tested in the depth-`i`
    /// partition.
    pub depth: usize,
    pub n_rects: usize,
    pub block: Block,
    pub crooked: bool,
    pub itinerary_len: usize,
    /// Failing `(j0, j1)` pairs when not crooked (capped at 16).
    pub failures: Vec<(i64, i64)>,
    pub fiber_spacing: f64,
    pub strip_thickness: f64,
    /// `fiber_spacing − strip_thickness`; positive margins back the
    /// itinerary reduction.
    pub thinness_margin: f64,
    pub candidates_tried: usize,
}

/// Search (or verification) report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrookedReport {
    pub schedule: Vec<Block>,
    pub multiplier: f64,
    pub n_sequence: Vec<usize>,
    pub depths: Vec<DepthVerdict>,
}

/// Finds a block schedule such that for each `i < target_depth` the
/// depth-`(i+1)` core itinerary through the depth-`i` partition
/// (`n_seq[i]` rectangles) is crooked. The budget caps candidates per depth.
pub fn find_crooked_blocks<F: Scalar>(
    target_depth: usize,
    n_seq: &[usize],
    params: &WParams<F>,
    budget: usize,
    opts: &SearchOpts<F>,
) -> Result<(BlockSchedule<F>, CrookedReport)> {
    if target_depth == 0 {
        return Err(Error::invalid("find_crooked_blocks", "target depth must be ≥ 1"));
    }
    if n_seq.len() < target_depth {
        return Err(Error::invalid("find_crooked_blocks", "N sequence shorter than target depth"));
    }
    if n_seq.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("find_crooked_blocks", "N sequence must be nondecreasing"));
    }

    let mut blocks: Vec<Block> = Vec::new();
    let mut verdicts: Vec<DepthVerdict> = Vec::new();

    for depth_i in 0..target_depth {
        let part = partition_at_depth(&blocks, depth_i, n_seq[depth_i], params, opts)?;
        let mut tried = 0usize;
        let mut found: Option<DepthVerdict> = None;

        'candidates: for total in 1..=opts.max_block_sum {
            for m in 0..=total {
                if tried >= budget {
                    break 'candidates;
                }
                tried += 1;
                let cand = Block { t_count: m, w_count: total - m };
                match evaluate_candidate(&blocks, cand, depth_i, &part, params, opts) {
                    Ok(Some(mut verdict)) => {
                        verdict.candidates_tried = tried;
                        found = Some(verdict);
                        break 'candidates;
                    }
                    Ok(None) => {}
                    // an unresolvable candidate is a failed candidate
                    Err(_) => {}
                }
            }
        }

        match found {
            Some(verdict) => {
                blocks.push(verdict.block);
                verdicts.push(verdict);
            }
            None => return Err(Error::SearchExhausted { depth: depth_i, tried }),
        }
    }

    let schedule = BlockSchedule::new(blocks.clone(), *params)?;
    let report = CrookedReport {
        schedule: blocks,
        multiplier: params.multiplier().to_f64().unwrap(),
        n_sequence: n_seq[..target_depth].to_vec(),
        depths: verdicts,
    };
    Ok((schedule, report))
}

/// Re-verifies a given schedule depth by depth, producing the same report
/// shape as the search.
pub fn verify_schedule<F: Scalar>(
    sched: &BlockSchedule<F>,
    n_seq: &[usize],
    opts: &SearchOpts<F>,
) -> Result<CrookedReport> {
    let depth = sched.depth().min(n_seq.len());
    let mut verdicts = Vec::new();
    for depth_i in 0..depth {
        let fixed = &sched.blocks()[..depth_i];
        let part =
            partition_at_depth(fixed, depth_i, n_seq[depth_i], sched.params(), opts)?;
        let verdict = evaluate_block(
            fixed,
            sched.blocks()[depth_i],
            depth_i,
            &part,
            sched.params(),
            opts,
        )?;
        verdicts.push(verdict);
    }
    Ok(CrookedReport {
        schedule: sched.blocks().to_vec(),
        multiplier: sched.params().multiplier().to_f64().unwrap(),
        n_sequence: n_seq[..depth].to_vec(),
        depths: verdicts,
    })
}

fn partition_at_depth<F: Scalar>(
    fixed: &[Block],
    depth_i: usize,
    n: usize,
    params: &WParams<F>,
    opts: &SearchOpts<F>,
) -> Result<RectanglePartition<F>> {
    // depth 0 partitions the base annulus; any nonempty schedule will do
    let filler = Block { t_count: 1, w_count: 0 };
    let blocks = if depth_i == 0 { vec![filler] } else { fixed.to_vec() };
    let sched = BlockSchedule::new(blocks, *params)?;
    let chain = trace_chain(&sched, depth_i, &opts.refine)?;
    partition(&chain, depth_i, n)
}

fn evaluate_candidate<F: Scalar>(
    fixed: &[Block],
    cand: Block,
    depth_i: usize,
    part: &RectanglePartition<F>,
    params: &WParams<F>,
    opts: &SearchOpts<F>,
) -> Result<Option<DepthVerdict>> {
    let verdict = evaluate_block(fixed, cand, depth_i, part, params, opts)?;
    Ok(if verdict.crooked { Some(verdict) } else { None })
}

fn evaluate_block<F: Scalar>(
    fixed: &[Block],
    block: Block,
    depth_i: usize,
    part: &RectanglePartition<F>,
    params: &WParams<F>,
    opts: &SearchOpts<F>,
) -> Result<DepthVerdict> {
    let mut blocks = fixed[..depth_i].to_vec();
    blocks.push(block);
    let sched = BlockSchedule::new(blocks, *params)?;
    let chain = trace_chain(&sched, depth_i + 1, &opts.refine)?;
    let deep = chain.curves(depth_i + 1);
    let it = itinerary(&deep.core, part, opts.itinerary_tol)?;
    let mut failures = crooked_failures(&it);
    let crooked = failures.is_empty();
    failures.truncate(16);

    let spacing = part.spacing().to_f64().unwrap();
    let thickness = strip_thickness(&deep.core, &deep.upper, &deep.lower).to_f64().unwrap();
    Ok(DepthVerdict {
        depth: depth_i,
        n_rects: part.n(),
        block,
        crooked,
        itinerary_len: it.indices.len(),
        failures,
        fiber_spacing: spacing,
        strip_thickness: thickness,
        thinness_margin: spacing - thickness,
        candidates_tried: 0,
    })
}

/// Max over sampled core points of the summed distances to the two boundary
/// curves.
fn strip_thickness<F: Scalar>(
    core: &LiftedCurve<F>,
    upper: &LiftedCurve<F>,
    lower: &LiftedCurve<F>,
) -> F {
    let up = upper.closed_loop();
    let lo = lower.closed_loop();
    let loop_core = core.closed_loop();
    let verts = loop_core.vertices();
    let step = (verts.len() / 64).max(1);
    let mut worst = F::zero();
    for v in verts.iter().step_by(step) {
        let t = nearest_distance(up.vertices(), *v) + nearest_distance(lo.vertices(), *v);
        worst = worst.max(t);
    }
    worst
}
