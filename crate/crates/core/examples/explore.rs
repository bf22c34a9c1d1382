//! Scratch exploration of candidate blocks (dev aid, not part of the API).

use pseudocircle::annuli::{partition, trace_chain, RefineOpts};
use pseudocircle::crooked::{crooked_failures, find_crooked_blocks, itinerary, SearchOpts};
use pseudocircle::maps::{Block, BlockSchedule, WParams};

fn sweep_depth(fixed: &[(u32, u32)], depth_i: usize, rects: usize, max_total: u32) {
    let params = WParams::<f64>::default();
    let opts = RefineOpts { tol: 5e-3, ..RefineOpts::default() };
    let base_blocks: Vec<Block> = if depth_i == 0 {
        vec![Block::new(1, 0).unwrap()]
    } else {
        fixed.iter().map(|&(m, n)| Block::new(m, n).unwrap()).collect()
    };
    let base = BlockSchedule::new(base_blocks, params).unwrap();
    let chain0 = trace_chain(&base, depth_i, &opts).unwrap();
    let part = match partition(&chain0, depth_i, rects) {
        Ok(p) => p,
        Err(e) => {
            println!("partition at depth {depth_i} failed: {e}");
            return;
        }
    };
    println!(
        "depth {depth_i}, N={rects}: spacing={:.3} loop_len={:.3}",
        part.spacing(),
        part.loop_len()
    );

    for total in 1..=max_total {
        for m in 0..=total {
            let n = total - m;
            let mut blocks: Vec<Block> =
                fixed[..depth_i].iter().map(|&(a, b)| Block::new(a, b).unwrap()).collect();
            blocks.push(Block { t_count: m, w_count: n });
            let sched = BlockSchedule::new(blocks, params).unwrap();
            let t0 = std::time::Instant::now();
            let chain = match trace_chain(&sched, depth_i + 1, &opts) {
                Ok(c) => c,
                Err(e) => {
                    println!("  ({m},{n}): trace error {e}");
                    continue;
                }
            };
            let core = &chain.curves(depth_i + 1).core;
            let it = match itinerary(core, &part, 1e-9) {
                Ok(i) => i,
                Err(e) => {
                    println!("  ({m},{n}): itinerary error {e}");
                    continue;
                }
            };
            let failures = crooked_failures(&it);
            println!(
                "  ({m},{n}): verts={} itin_len={} span=({},{}) failures={} {:?} [{:.2?}]",
                core.len(),
                it.indices.len(),
                it.indices.iter().min().unwrap(),
                it.indices.iter().max().unwrap(),
                failures.len(),
                &failures.iter().take(4).collect::<Vec<_>>(),
                t0.elapsed(),
            );
            if failures.is_empty() {
                println!("  --> ({m},{n}) is crooked at depth {depth_i}");
            }
        }
    }
}

fn probe(blocks_to_try: &[(u32, u32)], rects: usize) {
    let params = WParams::<f64>::default();
    let opts = RefineOpts { tol: 5e-3, vertex_budget: 40_000_000, ..RefineOpts::default() };
    let base = BlockSchedule::new(vec![Block::new(1, 0).unwrap()], params).unwrap();
    let chain0 = trace_chain(&base, 0, &opts).unwrap();
    let part = partition(&chain0, 0, rects).unwrap();
    for &(m, n) in blocks_to_try {
        let sched =
            BlockSchedule::new(vec![Block::new(m, n).unwrap()], params).unwrap();
        let t0 = std::time::Instant::now();
        match trace_chain(&sched, 1, &opts)
            .and_then(|chain| itinerary(&chain.curves(1).core, &part, 1e-9))
        {
            Ok(it) => {
                let failures = crooked_failures(&it);
                println!(
                    "  ({m},{n}): itin_len={} failures={} {:?} [{:.2?}]",
                    it.indices.len(),
                    failures.len(),
                    &failures.iter().take(4).collect::<Vec<_>>(),
                    t0.elapsed()
                );
            }
            Err(e) => println!("  ({m},{n}): error {e}"),
        }
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    match args.get(1).map(String::as_str) {
        Some("d1") => sweep_depth(&[], 0, 4, 5),
        Some("d1n8") => sweep_depth(&[], 0, 8, 8),
        Some("probe8") => probe(
            &[(4, 5), (5, 4), (6, 3), (5, 5), (6, 4), (7, 3), (4, 6), (6, 5), (7, 4)],
            8,
        ),
        Some("d2") => {
            let m: u32 = args[2].parse().unwrap();
            let n: u32 = args[3].parse().unwrap();
            sweep_depth(&[(m, n)], 1, 6, 7);
        }
        Some("search") => {
            let params = WParams::<f64>::default();
            let opts = SearchOpts {
                refine: RefineOpts { tol: 5e-3, ..RefineOpts::default() },
                ..SearchOpts::default()
            };
            let t0 = std::time::Instant::now();
            match find_crooked_blocks(2, &[4, 6], &params, 64, &opts) {
                Ok((sched, report)) => {
                    println!("schedule: {}", sched.canonical_string());
                    println!("report: {}", serde_json::to_string_pretty(&report).unwrap());
                }
                Err(e) => println!("search failed: {e}"),
            }
            println!("elapsed {:.2?}", t0.elapsed());
        }
        _ => {
            println!("usage: explore d1 | d1n8 | d2 <m> <n> | search");
        }
    }
}
