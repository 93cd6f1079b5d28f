//! Discrete k-center: cover the points with k balls centered at input
//! points, minimizing the radius.

use crate::error::{Error, Result};
use crate::exec;
use crate::framework::{self, DeciderOutcome, Problem};
use crate::geom::{merge_coincident, validate_points, Point, WeightedPoint};
use crate::hiprob::{solve_with_rule, PivotRule};
use crate::nets::compute_net;

/// Number of centers still available; shrinks when far points are pruned
/// (each far point must be its own center).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KCenterContext {
    pub k: u64,
}

/// The k-center decider. Net sizes sandwich the optimal radius: a net at
/// radius `x` with at most `k` points is itself a feasible set of centers
/// (`f <= x`), while more than `k` net points — pairwise farther than `x`
/// apart — force `f >= x/2`.
pub struct KCenter {
    pub eps: f64,
}

impl KCenter {
    pub fn new(eps: f64) -> Self {
        KCenter { eps }
    }
}

impl Problem for KCenter {
    type Context = KCenterContext;

    fn phi(&self) -> f64 {
        4.0 + self.eps
    }

    fn decide(
        &self,
        r: f64,
        points: &[WeightedPoint],
        ctx: &KCenterContext,
    ) -> Result<DeciderOutcome> {
        let k = ctx.k as usize;
        if compute_net(points, r)?.points.len() <= k {
            return Ok(DeciderOutcome::Below);
        }
        let hi = (2.0 + self.eps / 2.0) * r;
        if compute_net(points, hi)?.points.len() <= k {
            // more than k points pairwise >= r apart force f >= r/2
            return Ok(DeciderOutcome::Bounded { lo: r / 2.0, hi });
        }
        Ok(DeciderOutcome::Above)
    }

    fn prune_context(
        &self,
        ctx: &KCenterContext,
        far: &[WeightedPoint],
    ) -> Result<KCenterContext> {
        // A far point's covering center lies within f < r of it, and only
        // the point itself qualifies; dropping it consumes one center.
        let used = far.len() as u64;
        if ctx.k <= used {
            return Err(Error::infeasible(
                "pruned points exhaust the center budget; k is too small",
            ));
        }
        Ok(KCenterContext { k: ctx.k - used })
    }
}

/// Cover `points` with at most `k` balls centered at input points, with
/// radius at most twice optimal. Returns the radius and the centers.
pub fn kcenter_2approx(
    points: &[WeightedPoint],
    k: u64,
    seed: u64,
) -> Result<(f64, Vec<Point>)> {
    kcenter_2approx_with(points, k, seed, PivotRule::Sample)
}

/// [`kcenter_2approx`] under an explicit driver pivot rule.
pub fn kcenter_2approx_with(
    points: &[WeightedPoint],
    k: u64,
    seed: u64,
    rule: PivotRule,
) -> Result<(f64, Vec<Point>)> {
    validate_points(points)?;
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let pts = merge_coincident(points);
    if pts.len() as u64 <= k {
        return Ok((0.0, pts.into_iter().map(|p| p.point).collect()));
    }

    let problem = KCenter::new(1.0);
    let ctx = KCenterContext { k };
    let (interval, _) = solve_with_rule(&problem, &pts, ctx, seed, rule)?;
    let interval = framework::refine_phi(&problem, &pts, &ctx, interval, problem.phi())?;

    // Seed centers from a net just above the doubled upper bound: an optimal
    // ball of radius f <= hi holds at most one such net point, so there are
    // at most k seeds, and they are pairwise farther apart than any distance
    // the final sweep can report.
    let seeds = compute_net(&pts, 2.001 * interval.hi)?.points;
    debug_assert!(seeds.len() as u64 <= k);
    let mut centers: Vec<Point> = seeds.into_iter().map(|p| p.point).collect();
    let mut nearest: Vec<f64> = exec::map_collect(&pts, |p| {
        centers
            .iter()
            .map(|c| p.point.dist(c))
            .fold(f64::INFINITY, f64::min)
    });
    while (centers.len() as u64) < k {
        let (far_idx, far_dist) = nearest
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        if *far_dist == 0.0 {
            break;
        }
        let c = pts[far_idx].point.clone();
        let updates = exec::map_collect(&pts, |p| p.point.dist(&c));
        for (n, u) in nearest.iter_mut().zip(updates) {
            if u < *n {
                *n = u;
            }
        }
        centers.push(c);
    }
    let radius = nearest.iter().copied().fold(0.0, f64::max);
    Ok((radius, centers))
}

/// Deterministic shuffle helper for tests that need varied instances.
#[cfg(test)]
fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
