//! Scratch profiling harness; not part of the library.

use std::time::Instant;

use netprune::datagen;
use netprune::framework::{self, Problem};
use netprune::geom::{merge_coincident, total_weight};
use netprune::problems::rank::KthDist;
use netprune::problems::RankContext;

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200_000);
    let pts = datagen::uniform_box(n, 2, 1e6, 7_000);

    let t = Instant::now();
    let merged = merge_coincident(&pts);
    println!("merge: {:.3} s ({} -> {})", t.elapsed().as_secs_f64(), n, merged.len());

    let w = total_weight(&merged) as u128;
    let k = w * (w - 1) / 4;
    let problem = KthDist { eps: 0.25 };
    let ctx = RankContext { k, m: 1 };

    // decide cost across the radius scale
    let spacing = 1e6 / (n as f64).sqrt();
    for mult in [0.5, 1.0, 4.0, 16.0, 64.0, 256.0, 1024.0] {
        let r = spacing * mult;
        let t = Instant::now();
        let out = problem.decide(r, &merged, &ctx).unwrap();
        println!("decide(r = {mult:7.1} * spacing = {r:12.1}): {:8.3} s -> {out:?}", t.elapsed().as_secs_f64());
    }

    let t = Instant::now();
    let (interval, trace) = framework::solve(&problem, &merged, ctx, 9_000).unwrap();
    println!(
        "solve: {:.3} s, {} iterations, interval [{:.1}, {:.1}]",
        t.elapsed().as_secs_f64(),
        trace.iterations.len(),
        interval.lo,
        interval.hi
    );
    for it in &trace.iterations {
        println!(
            "  pivot {:12.1}  {:?} / {:?}  -> {:?} ({} pts)",
            it.pivot, it.at_pivot, it.at_gap, it.action, it.points_after
        );
    }

    let t = Instant::now();
    let refined = framework::refine_eps(&problem, &merged, &ctx, interval, 0.25).unwrap();
    println!(
        "refine: {:.3} s, interval [{:.1}, {:.1}]",
        t.elapsed().as_secs_f64(),
        refined.lo,
        refined.hi
    );
}
