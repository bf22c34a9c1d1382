//! Dump an itinerary and wiggle diagnostics for one candidate block.

use pseudocircle::annuli::{partition, trace_chain, RefineOpts};
use pseudocircle::crooked::{crooked_failures, has_wiggle, itinerary, WiggleQuery};
use pseudocircle::maps::{Block, BlockSchedule, WParams};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let m: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let n: u32 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(2);
    let rects: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(4);

    let params = WParams::<f64>::default();
    let base = BlockSchedule::new(vec![Block::new(1, 0).unwrap()], params).unwrap();
    let opts = RefineOpts { tol: 5e-3, ..RefineOpts::default() };
    let chain0 = trace_chain(&base, 0, &opts).unwrap();
    let part0 = partition(&chain0, 0, rects).unwrap();

    let sched =
        BlockSchedule::new(vec![Block::new(m, n).unwrap()], params).unwrap();
    let chain = trace_chain(&sched, 1, &opts).unwrap();
    let it = itinerary(&chain.curves(1).core, &part0, 1e-9).unwrap();
    println!("block ({m},{n}), N={rects}");
    println!("itinerary ({} entries): {:?}", it.indices.len(), it.indices);
    let failures = crooked_failures(&it);
    println!("failures: {failures:?}");
    for (j0, j1) in failures {
        let q = WiggleQuery::new(j0, j1).unwrap();
        // report which orientation breaks
        let fwd_ok = {
            let seq = &it.indices;
            orientation_ok(seq, j0, j1)
        };
        let rev: Vec<i64> = it.indices.iter().rev().copied().collect();
        let rev_ok = orientation_ok(&rev, j0, j1);
        println!("  ({j0},{j1}): forward_ok={fwd_ok} reversed_ok={rev_ok} has_wiggle={}",
            has_wiggle(&it, q));
    }
}

fn orientation_ok(seq: &[i64], j0: i64, j1: i64) -> bool {
    for a in 0..seq.len() {
        if seq[a] != j0 {
            continue;
        }
        let Some(b) = (a + 1..seq.len()).find(|&i| seq[i] == j1) else { continue };
        let Some(c) = (a + 1..b).find(|&i| seq[i] == j1 - 1) else { return false };
        if !(c + 1..b).any(|i| seq[i] == j0 + 1) {
            return false;
        }
    }
    true
}
