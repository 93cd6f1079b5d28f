//! The decider interface, the net & prune driver, and interval refinement.
//!
//! A *distance problem* exposes a decider that compares its target value `f`
//! against a query radius `r` and answers one of three ways: `f < r`,
//! `f > r`, or an explicit interval `[lo, hi]` containing `f` with bounded
//! spread `hi/lo <= phi`. Problems additionally promise:
//!
//! - the decider runs in linear time,
//! - `f` moves by at most `2*delta` when every point moves by at most `delta`
//!   (so replacing the set by a net changes `f` by a bounded amount), and
//! - deleting points whose nearest neighbor is at least `r` away, for any
//!   `r > f`, preserves `f` after a context fix-up (the prune rule).
//!
//! Under those promises, [`solve`] computes a constant-spread interval
//! containing `f` in expected linear time: it repeatedly samples a pivot
//! distance `nu` (a nearest-neighbor distance of a random point), asks the
//! decider at `nu` and at `DECIDER_GAP * nu`, and either stops with an
//! interval or shrinks the point set — pruning far points when `f < nu`, or
//! replacing the set with a `3*nu`-net when `f > DECIDER_GAP * nu`. Each
//! iteration removes a constant fraction of the points in expectation.
//!
//! [`refine_phi`] and [`refine_eps`] then sharpen the driver's interval by
//! binary search on the radius scale, the latter with a decreasing-epsilon
//! schedule whose rounds at epsilon cost `O(n / eps^d)` each.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::geom::WeightedPoint;
use crate::nets::{compute_net, del_far_distinct};

/// Gap between the driver's two decider queries per iteration.
pub const DECIDER_GAP: f64 = 37.0;

/// Net radius used when the decider reports `f > DECIDER_GAP * nu`.
pub const NET_RADIUS_FACTOR: f64 = 3.0;

/// On iterations that build a net, the pivot distance never exceeds the
/// problem's initial value divided by this constant (`DECIDER_GAP - 9`).
pub const NET_PIVOT_DIVISOR: f64 = DECIDER_GAP - 9.0;

/// Answer of a decider queried at radius `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DeciderOutcome {
    /// The target value is strictly below the query radius.
    Below,
    /// The target value is strictly above the query radius.
    Above,
    /// The target value lies in `[lo, hi]` with `hi/lo` at most the
    /// decider's spread guarantee.
    Bounded { lo: f64, hi: f64 },
}

/// A closed positive interval known to contain the target value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn spread(&self) -> f64 {
        self.hi / self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// A distance problem solvable by the net & prune driver.
pub trait Problem {
    /// Mutable side data carried along the driver's shrinking point sets
    /// (ranks, budgets). Updated only when points are pruned.
    type Context: Clone + Send + Sync;

    /// Largest spread a `Bounded` answer of this decider may have.
    fn phi(&self) -> f64;

    /// Compare the target value against `r`.
    fn decide(&self, r: f64, points: &[WeightedPoint], ctx: &Self::Context)
        -> Result<DeciderOutcome>;

    /// Fix the context after far points (at some radius above the target
    /// value) were deleted. Far is judged on locations, so a heavy point can
    /// be far; implementations must account for the values its coincident
    /// units carried (e.g. distance-zero ranks).
    fn prune_context(&self, ctx: &Self::Context, far: &[WeightedPoint]) -> Result<Self::Context>;
}

/// Problems whose decider takes an explicit approximation parameter, enabling
/// [`refine_eps`].
pub trait EpsDecider: Problem {
    fn decide_eps(
        &self,
        r: f64,
        eps: f64,
        points: &[WeightedPoint],
        ctx: &Self::Context,
    ) -> Result<DeciderOutcome>;
}

/// What the driver did in one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Action {
    /// Replaced the point set by a net at `NET_RADIUS_FACTOR * pivot`.
    Net,
    /// Deleted points with no neighbor within `pivot`.
    Prune,
    /// Stopped with an interval from a `Bounded` decider answer.
    StopBounded,
    /// Stopped because the pivot landed between the two query radii.
    StopSandwiched,
}

/// One driver iteration, for invariant checking and `--trace` output.
#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    /// The sampled pivot distance `nu`.
    pub pivot: f64,
    pub at_pivot: DeciderOutcome,
    pub at_gap: DeciderOutcome,
    pub action: Action,
    /// Point count after the iteration's shrink (unchanged on stops).
    pub points_after: usize,
}

/// Full log of a driver run.
#[derive(Debug, Clone, Serialize)]
pub struct RunTrace {
    pub initial_points: usize,
    pub iterations: Vec<IterationRecord>,
    pub result: Interval,
}

/// Nearest-neighbor distance of `points[pivot]` to the other points, by
/// linear scan.
pub fn pivot_distance(points: &[WeightedPoint], pivot: usize) -> f64 {
    let p = &points[pivot].point;
    exec::min_f64(points, |q| {
        if std::ptr::eq(q, &points[pivot]) {
            f64::INFINITY
        } else {
            p.dist(&q.point)
        }
    })
}

/// Run the driver with the default pivot rule: sample a point uniformly among
/// the (distinct, weighted) points and take its nearest-neighbor distance.
pub fn solve<P: Problem>(
    problem: &P,
    points: &[WeightedPoint],
    ctx: P::Context,
    seed: u64,
) -> Result<(Interval, RunTrace)> {
    solve_with_pivot(problem, points, ctx, seed, |pts, rng| {
        let i = rng.gen_range(0..pts.len());
        Ok(pivot_distance(pts, i))
    })
}

/// Run the driver with a custom pivot rule (e.g. the high-probability
/// middle-rank pivot). The rule must return a positive finite distance that
/// is a nearest-neighbor distance of some point of the current set.
pub fn solve_with_pivot<P: Problem>(
    problem: &P,
    points: &[WeightedPoint],
    ctx: P::Context,
    seed: u64,
    mut pivot_rule: impl FnMut(&[WeightedPoint], &mut ChaCha8Rng) -> Result<f64>,
) -> Result<(Interval, RunTrace)> {
    if points.len() < 2 {
        return Err(Error::invalid(
            "the driver needs at least two distinct points",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<WeightedPoint> = points.to_vec();
    let mut ctx = ctx;
    let mut trace = RunTrace {
        initial_points: points.len(),
        iterations: Vec::new(),
        result: Interval::new(f64::NAN, f64::NAN),
    };
    // The expected iteration count is logarithmic; a linear cap is a safety
    // net that turns a non-terminating decider bug into a diagnosable error.
    let cap = 64 * points.len() + 64;

    for _ in 0..cap {
        if pts.len() < 2 {
            return Err(Error::contract(
                "driver reduced the set to a single point without resolving",
            ));
        }
        let nu = pivot_rule(&pts, &mut rng)?;
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::contract(format!(
                "pivot distance must be positive and finite, got {nu}"
            )));
        }
        let at_pivot = checked_decide(problem, nu, &pts, &ctx)?;
        let at_gap = checked_decide(problem, DECIDER_GAP * nu, &pts, &ctx)?;

        let mut record = IterationRecord {
            pivot: nu,
            at_pivot,
            at_gap,
            action: Action::Net,
            points_after: pts.len(),
        };

        if let DeciderOutcome::Bounded { lo, hi } = at_pivot {
            record.action = Action::StopBounded;
            trace.iterations.push(record);
            let result = Interval::new(lo / 2.0, 2.0 * hi);
            trace.result = result;
            return Ok((result, trace));
        }
        if let DeciderOutcome::Bounded { lo, hi } = at_gap {
            record.action = Action::StopBounded;
            trace.iterations.push(record);
            let result = Interval::new(lo / 2.0, 2.0 * hi);
            trace.result = result;
            return Ok((result, trace));
        }
        match (at_pivot, at_gap) {
            (DeciderOutcome::Above, DeciderOutcome::Below) => {
                // nu < f < GAP * nu
                record.action = Action::StopSandwiched;
                trace.iterations.push(record);
                let result = Interval::new(nu / 2.0, 2.0 * DECIDER_GAP * nu);
                trace.result = result;
                return Ok((result, trace));
            }
            (DeciderOutcome::Below, DeciderOutcome::Below) => {
                // f < nu: points whose nearest other location is at least nu
                // away are irrelevant regardless of weight; `prune_context`
                // settles whatever values their coincident units carried.
                // Because nu is a nearest-neighbor distance of some current
                // point, that point itself is far, so every prune makes
                // progress even under a deterministic pivot rule.
                let split = del_far_distinct(&pts, nu)?;
                if split.close.is_empty() {
                    return Err(Error::contract(
                        "prune removed every point; the decider's Below answer was wrong",
                    ));
                }
                ctx = problem.prune_context(&ctx, &split.far)?;
                pts = split.close;
                record.action = Action::Prune;
                record.points_after = pts.len();
                trace.iterations.push(record);
            }
            (DeciderOutcome::Above, DeciderOutcome::Above) => {
                // f > GAP * nu: a 3*nu-net preserves f up to harmless drift.
                let net = compute_net(&pts, NET_RADIUS_FACTOR * nu)?;
                pts = net.points;
                record.action = Action::Net;
                record.points_after = pts.len();
                trace.iterations.push(record);
            }
            (DeciderOutcome::Below, DeciderOutcome::Above) => {
                return Err(Error::contract(
                    "decider claims both f < r and f > GAP*r; answers are inconsistent",
                ));
            }
            _ => unreachable!("Bounded handled above"),
        }
    }
    Err(Error::contract(
        "driver exceeded its iteration cap without resolving",
    ))
}

fn checked_decide<P: Problem>(
    problem: &P,
    r: f64,
    pts: &[WeightedPoint],
    ctx: &P::Context,
) -> Result<DeciderOutcome> {
    let out = problem.decide(r, pts, ctx)?;
    if let DeciderOutcome::Bounded { lo, hi } = out {
        let phi = problem.phi();
        if !(lo > 0.0 && lo <= hi && hi <= lo * phi * (1.0 + 1e-9)) {
            return Err(Error::contract(format!(
                "Bounded answer [{lo}, {hi}] violates the decider's spread guarantee {phi}"
            )));
        }
    }
    Ok(out)
}

/// Shrink `interval` to spread at most `target` by geometric bisection,
/// calling the decider `O(log log)` times. `target` must be at least the
/// problem's own spread guarantee.
pub fn refine_phi<P: Problem>(
    problem: &P,
    points: &[WeightedPoint],
    ctx: &P::Context,
    interval: Interval,
    target: f64,
) -> Result<Interval> {
    if target.is_nan() || target <= 1.0 {
        return Err(Error::invalid("refinement target spread must exceed 1"));
    }
    let mut lo = interval.lo;
    let mut hi = interval.hi;
    for _ in 0..128 {
        if hi / lo <= target * (1.0 + 1e-12) {
            break;
        }
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break; // no further float resolution
        }
        match problem.decide(mid, points, ctx)? {
            DeciderOutcome::Below => hi = mid,
            DeciderOutcome::Above => lo = mid,
            DeciderOutcome::Bounded { lo: bl, hi: bh } => {
                return Ok(Interval::new(bl.max(lo), bh.min(hi)));
            }
        }
    }
    Ok(Interval::new(lo, hi))
}

/// Shrink `interval` to spread at most `1 + eps` with a decreasing-epsilon
/// schedule: a first phase bisects at unit epsilon down to spread 2, then
/// each round queries the geometric midpoint with the epsilon that the
/// current spread dictates, halving epsilon (at least) per round. The round
/// costs dominate geometrically, so the total work is within a constant of a
/// single epsilon-accurate decider call.
pub fn refine_eps<P: EpsDecider>(
    problem: &P,
    points: &[WeightedPoint],
    ctx: &P::Context,
    interval: Interval,
    eps: f64,
) -> Result<Interval> {
    if !(eps > 0.0 && eps <= 5.0) {
        return Err(Error::invalid(format!(
            "eps must be in (0, 5], got {eps}"
        )));
    }
    let mut lo = interval.lo;
    let mut hi = interval.hi;

    // Phase 1: cheap unit-epsilon bisection down to spread 2.
    for _ in 0..128 {
        if hi / lo <= 2.0 {
            break;
        }
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        match problem.decide_eps(mid, 1.0, points, ctx)? {
            DeciderOutcome::Below => hi = mid,
            DeciderOutcome::Above => lo = mid,
            DeciderOutcome::Bounded { lo: bl, hi: bh } => {
                lo = bl.max(lo);
                hi = bh.min(hi);
                break;
            }
        }
    }

    // Phase 2: epsilon-halving rounds.
    for _ in 0..128 {
        let spread = hi / lo;
        if spread <= 1.0 + eps {
            break;
        }
        let round_eps = spread.sqrt() - 1.0;
        let mid = lo * (1.0 + round_eps);
        if mid <= lo || mid >= hi {
            break;
        }
        match problem.decide_eps(mid, round_eps.min(1.0), points, ctx)? {
            DeciderOutcome::Below => hi = mid,
            DeciderOutcome::Above => lo = mid,
            DeciderOutcome::Bounded { lo: bl, hi: bh } => {
                lo = bl.max(lo);
                hi = bh.min(hi);
            }
        }
    }
    Ok(Interval::new(lo, hi))
}

/// `k`-th smallest value (1-indexed) of a multiset.
pub fn rank_value(values: &[f64], k: usize) -> Result<f64> {
    if k == 0 || k > values.len() {
        return Err(Error::infeasible(format!(
            "rank {k} out of range for {} values",
            values.len()
        )));
    }
    let mut v = values.to_vec();
    let (_, kth, _) = v.select_nth_unstable_by(k - 1, |a, b| a.total_cmp(b));
    Ok(*kth)
}

/// Verify the rank-stability fact behind every net translation argument:
/// if each value moves by less than `delta`, the rank-`k` value moves by at
/// most `delta`. Errors if the perturbation precondition is violated; returns
/// whether the rank-`k` values are within `delta`.
pub fn perturbation_rank_stability(
    original: &[f64],
    perturbed: &[f64],
    k: usize,
    delta: f64,
) -> Result<bool> {
    if original.len() != perturbed.len() {
        return Err(Error::invalid("value multisets differ in size"));
    }
    for (a, b) in original.iter().zip(perturbed.iter()) {
        let gap = (a - b).abs();
        if gap.is_nan() || gap > delta {
            return Err(Error::invalid(format!(
                "perturbation {a} -> {b} exceeds delta {delta}"
            )));
        }
    }
    let va = rank_value(original, k)?;
    let vb = rank_value(perturbed, k)?;
    Ok((va - vb).abs() <= delta + 1e-12 * delta.abs().max(va.abs()))
}
