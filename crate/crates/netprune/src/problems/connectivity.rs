//! Threshold-graph connectivity: an approximate component partition in
//! near-linear time, and the k-th longest MST edge decided through
//! component counts.

use super::{dual_radius_decide, eps_phi, validate_eps};
use crate::error::{Error, Result};
use crate::framework::{self, DeciderOutcome, EpsDecider, Interval, Problem, RunTrace};
use crate::geom::{
    for_each_block_key, merge_coincident, point_cell_dist, side_for_diameter, total_weight,
    validate_points, GridKey, WeightedPoint,
};
use crate::hiprob::{solve_with_rule, PivotRule};
use std::collections::HashMap;

/// Disjoint clusters of point indices, with a cluster id per point.
#[derive(Debug, Clone)]
pub struct Partition {
    pub cluster_of: Vec<u32>,
    pub clusters: Vec<Vec<u32>>,
}

impl Partition {
    fn from_roots(roots: Vec<u32>) -> Partition {
        let mut ids: HashMap<u32, u32> = HashMap::new();
        let mut clusters: Vec<Vec<u32>> = Vec::new();
        let mut cluster_of = Vec::with_capacity(roots.len());
        for (i, root) in roots.into_iter().enumerate() {
            let id = *ids.entry(root).or_insert_with(|| {
                clusters.push(Vec::new());
                (clusters.len() - 1) as u32
            });
            clusters[id as usize].push(i as u32);
            cluster_of.push(id);
        }
        Partition { cluster_of, clusters }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn add(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        self.size.push(1);
        id
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            // path halving
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

/// Partition `points` into clusters that sandwich the true threshold
/// components: every component of the distance-`r` graph lands inside one
/// cluster, and every cluster lies inside a component of the
/// distance-`(1+eps)r` graph.
///
/// Points mark the grid cells within `r/2` of themselves on a grid of cell
/// diameter `eps*r/4`; sharing a marked cell links two points, so linked
/// points are within `r(1 + eps/4)` while points within `r` always share
/// their midpoint cell. When the per-point cell block would exceed the
/// point count, an exact quadratic union (which satisfies the same sandwich
/// trivially) is cheaper and used instead.
pub fn connectivity_partition(
    points: &[WeightedPoint],
    r: f64,
    eps: f64,
) -> Result<Partition> {
    let dim = validate_points(points)?;
    validate_eps(eps)?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    let n = points.len();
    let side = side_for_diameter(eps * r / 4.0, dim);
    let keys_per_axis = (r / side).ceil() + 2.0;
    let block = keys_per_axis.powi(dim as i32);

    let mut uf = UnionFind::new(n);
    if block >= n as f64 {
        for i in 0..n {
            for j in (i + 1)..n {
                if points[i].point.dist(&points[j].point) <= r {
                    uf.union(i as u32, j as u32);
                }
            }
        }
    } else {
        let mut cell_nodes: HashMap<GridKey, u32> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            for_each_block_key(p.point.coords(), r / 2.0, side, &mut |key| {
                if point_cell_dist(&p.point, &key, side) <= r / 2.0 {
                    let node = *cell_nodes.entry(key).or_insert_with(|| uf.add());
                    uf.union(i as u32, node);
                }
            });
        }
    }
    let roots: Vec<u32> = (0..n as u32).map(|i| uf.find(i)).collect();
    Ok(Partition::from_roots(roots))
}

/// The k-th longest edge of the minimum spanning tree of the unit multiset
/// (k is 1-indexed from the longest edge). Decided through component
/// counts: at radius `x` the threshold graph has `1 + #{edges > x}`
/// components, so comparing the partition's cluster count against `k`
/// brackets the k-th longest edge.
pub struct MstKthEdge {
    pub eps: f64,
}

impl MstKthEdge {
    fn test(&self, x: f64, eps: f64, points: &[WeightedPoint], k: u128) -> Result<bool> {
        let partition = connectivity_partition(points, x, eps / 4.0)?;
        Ok(partition.clusters.len() as u128 <= k)
    }
}

impl Problem for MstKthEdge {
    type Context = super::rank::RankContext;

    fn phi(&self) -> f64 {
        eps_phi(self.eps)
    }

    fn decide(
        &self,
        r: f64,
        points: &[WeightedPoint],
        ctx: &Self::Context,
    ) -> Result<DeciderOutcome> {
        dual_radius_decide(r, self.eps, |x| self.test(x, self.eps, points, ctx.k))
    }

    fn prune_context(
        &self,
        ctx: &Self::Context,
        far: &[WeightedPoint],
    ) -> Result<Self::Context> {
        // Dropping a far point deletes its j adjacent MST edges and the new
        // tree reconnects the j parts with j-1 edges; every edge involved
        // exceeds the certified radius (cycle property), so exactly one
        // above-k edge disappears per far point.
        let removed = far.len() as u128;
        if ctx.k <= removed {
            return Err(Error::infeasible(
                "rank exceeded the surviving long-edge count during pruning",
            ));
        }
        Ok(super::rank::RankContext {
            k: ctx.k - removed,
            m: ctx.m,
        })
    }
}

impl EpsDecider for MstKthEdge {
    fn decide_eps(
        &self,
        r: f64,
        eps: f64,
        points: &[WeightedPoint],
        ctx: &Self::Context,
    ) -> Result<DeciderOutcome> {
        dual_radius_decide(r, eps, |x| self.test(x, eps, points, ctx.k))
    }
}

/// Approximate the k-th longest MST edge to within `1 + eps`. Ranks beyond
/// the distinct locations fall into the zero edges contributed by
/// coincident units and return an exact zero interval.
pub fn mst_kth_longest(
    points: &[WeightedPoint],
    k: u64,
    eps: f64,
    seed: u64,
) -> Result<(Interval, RunTrace)> {
    mst_kth_longest_with(points, k, eps, seed, PivotRule::Sample)
}

/// [`mst_kth_longest`] under an explicit driver pivot rule.
pub fn mst_kth_longest_with(
    points: &[WeightedPoint],
    k: u64,
    eps: f64,
    seed: u64,
    rule: PivotRule,
) -> Result<(Interval, RunTrace)> {
    validate_points(points)?;
    validate_eps(eps)?;
    let merged = merge_coincident(points);
    let w = total_weight(&merged);
    if w < 2 {
        return Err(Error::infeasible("an MST needs at least two units"));
    }
    if k == 0 || k > w - 1 {
        return Err(Error::infeasible(format!(
            "rank {k} out of range for {} MST edges",
            w - 1
        )));
    }
    let nonzero_edges = merged.len() as u64 - 1;
    if k > nonzero_edges {
        let interval = Interval::new(0.0, 0.0);
        return Ok((
            interval,
            RunTrace {
                initial_points: merged.len(),
                iterations: Vec::new(),
                result: interval,
            },
        ));
    }
    let problem = MstKthEdge { eps };
    let ctx = super::rank::RankContext { k: k as u128, m: 1 };
    let (interval, trace) = solve_with_rule(&problem, &merged, ctx, seed, rule)?;
    let refined = framework::refine_eps(&problem, &merged, &ctx, interval, eps)?;
    Ok((refined, trace))
}

/// Approximate the k-th *shortest* MST edge via the rank complement: with
/// `W - 1` edges total, the k-th shortest is the `(W - k)`-th longest.
pub fn mst_kth_shortest(
    points: &[WeightedPoint],
    k: u64,
    eps: f64,
    seed: u64,
) -> Result<(Interval, RunTrace)> {
    mst_kth_shortest_with(points, k, eps, seed, PivotRule::Sample)
}

/// [`mst_kth_shortest`] under an explicit driver pivot rule.
pub fn mst_kth_shortest_with(
    points: &[WeightedPoint],
    k: u64,
    eps: f64,
    seed: u64,
    rule: PivotRule,
) -> Result<(Interval, RunTrace)> {
    let w = total_weight(points);
    if w < 2 || k == 0 || k > w - 1 {
        return Err(Error::infeasible(format!(
            "rank {k} out of range for {} MST edges",
            w.saturating_sub(1)
        )));
    }
    mst_kth_longest_with(points, w - k, eps, seed, rule)
}
