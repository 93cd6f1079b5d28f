//! Brute-force reference implementations.
//!
//! Everything here is written for clarity and independence from the fast
//! paths: quadratic scans, exhaustive subset/partition enumeration, and a
//! tiny exact smallest-enclosing-ball solver. Tests compare the production
//! algorithms against these on small instances.
//!
//! All routines treat a weighted point as `weight` coincident unit points,
//! matching the multiset semantics of the fast implementations.

use crate::error::{Error, Result};
use crate::geom::{Point, WeightedPoint};

/// Ascending multiset of pairwise distances between unit points, including
/// the `C(w,2)` zeros contributed by each weight-`w` location.
pub fn sorted_pairwise_distances(points: &[WeightedPoint]) -> Vec<f64> {
    let mut out = Vec::new();
    for (i, a) in points.iter().enumerate() {
        let zeros = a.weight * (a.weight - 1) / 2;
        out.extend(std::iter::repeat_n(0.0, zeros as usize));
        for b in points.iter().skip(i + 1) {
            let d = a.point.dist(&b.point);
            out.extend(std::iter::repeat_n(d, (a.weight * b.weight) as usize));
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// `k`-th smallest pairwise distance (1-indexed) of the unit multiset.
pub fn kth_distance(points: &[WeightedPoint], k: u64) -> Result<f64> {
    let all = sorted_pairwise_distances(points);
    if k == 0 || k as usize > all.len() {
        return Err(Error::infeasible(format!(
            "rank {k} out of range for {} unit pairs",
            all.len()
        )));
    }
    Ok(all[k as usize - 1])
}

/// Distance from a unit at location `i` to its `m`-th nearest other unit,
/// or `None` if fewer than `m` other units exist.
pub fn mnn_at_location(points: &[WeightedPoint], i: usize, m: u64) -> Option<f64> {
    let mut dists: Vec<(f64, u64)> = vec![(0.0, points[i].weight - 1)];
    for (j, b) in points.iter().enumerate() {
        if j != i {
            dists.push((points[i].point.dist(&b.point), b.weight));
        }
    }
    dists.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut seen = 0u64;
    for (d, c) in dists {
        seen += c;
        if seen >= m {
            return Some(d);
        }
    }
    None
}

/// Ascending multiset of `m`-th nearest-neighbor distances, one value per
/// unit point. Errors if some unit has fewer than `m` others.
pub fn mnn_multiset(points: &[WeightedPoint], m: u64) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..points.len() {
        let v = mnn_at_location(points, i, m).ok_or_else(|| {
            Error::infeasible(format!("a point has fewer than m={m} other units"))
        })?;
        out.extend(std::iter::repeat_n(v, points[i].weight as usize));
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// `k`-th smallest `m`-th nearest-neighbor distance over all units.
pub fn kth_mnn(points: &[WeightedPoint], k: u64, m: u64) -> Result<f64> {
    let all = mnn_multiset(points, m)?;
    if k == 0 || k as usize > all.len() {
        return Err(Error::infeasible(format!(
            "rank {k} out of range for {} units",
            all.len()
        )));
    }
    Ok(all[k as usize - 1])
}

/// Nearest-neighbor distance multiset (ascending), i.e. `mnn_multiset` at
/// `m = 1`.
pub fn nn_multiset(points: &[WeightedPoint]) -> Result<Vec<f64>> {
    mnn_multiset(points, 1)
}

/// Largest nearest-neighbor distance over all units.
pub fn furthest_nn(points: &[WeightedPoint]) -> Result<f64> {
    let all = nn_multiset(points)?;
    Ok(*all.last().expect("validated nonempty"))
}

/// `m`-th nearest-neighbor distance to units of a *different* color, per
/// unit, ascending. `colors[i]` is the color of location `i`.
pub fn bichromatic_mnn_multiset(
    points: &[WeightedPoint],
    colors: &[u32],
    m: u64,
) -> Result<Vec<f64>> {
    assert_eq!(points.len(), colors.len());
    let mut out = Vec::new();
    for i in 0..points.len() {
        let mut dists: Vec<(f64, u64)> = Vec::new();
        for (j, b) in points.iter().enumerate() {
            if colors[j] != colors[i] {
                dists.push((points[i].point.dist(&b.point), b.weight));
            }
        }
        dists.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut seen = 0u64;
        let mut val = None;
        for (d, c) in dists {
            seen += c;
            if seen >= m {
                val = Some(d);
                break;
            }
        }
        let v = val.ok_or_else(|| {
            Error::infeasible("a point has fewer than m units of other colors")
        })?;
        out.extend(std::iter::repeat_n(v, points[i].weight as usize));
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Smallest nonzero pairwise distance, ignoring weights (coincident units
/// contribute zeros, which are skipped).
pub fn smallest_nonzero_distance(points: &[WeightedPoint]) -> Result<f64> {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in points.iter().skip(i + 1) {
            let d = a.point.dist(&b.point);
            if d > 0.0 && d < best {
                best = d;
            }
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::infeasible(
            "all points coincide; no nonzero distance exists",
        ))
    }
}

/// Minimum-spanning-tree edge lengths over the unit multiset, ascending.
/// Each weight-`w` location contributes `w - 1` zero edges; distinct
/// locations are joined by Prim's algorithm.
pub fn mst_edges(points: &[WeightedPoint]) -> Vec<f64> {
    let n = points.len();
    let mut edges: Vec<f64> = points
        .iter()
        .flat_map(|p| std::iter::repeat_n(0.0, (p.weight - 1) as usize))
        .collect();
    if n > 1 {
        let mut in_tree = vec![false; n];
        let mut best = vec![f64::INFINITY; n];
        in_tree[0] = true;
        for j in 1..n {
            best[j] = points[0].point.dist(&points[j].point);
        }
        for _ in 1..n {
            let (next, _) = best
                .iter()
                .enumerate()
                .filter(|(j, _)| !in_tree[*j])
                .min_by(|a, b| a.1.total_cmp(b.1))
                .expect("some node remains");
            edges.push(best[next]);
            in_tree[next] = true;
            for j in 0..n {
                if !in_tree[j] {
                    let d = points[next].point.dist(&points[j].point);
                    if d < best[j] {
                        best[j] = d;
                    }
                }
            }
        }
    }
    edges.sort_by(f64::total_cmp);
    edges
}

/// `k`-th longest MST edge (1-indexed).
pub fn mst_kth_longest_edge(points: &[WeightedPoint], k: u64) -> Result<f64> {
    let edges = mst_edges(points);
    if k == 0 || k as usize > edges.len() {
        return Err(Error::infeasible(format!(
            "rank {k} out of range for {} MST edges",
            edges.len()
        )));
    }
    Ok(edges[edges.len() - k as usize])
}

/// Component id per location of the threshold graph joining locations at
/// distance <= r. Ids are the smallest member index of each component.
pub fn threshold_components(points: &[WeightedPoint], r: f64) -> Vec<usize> {
    let n = points.len();
    let mut comp: Vec<usize> = (0..n).collect();
    // quadratic BFS; fine at oracle sizes
    let mut visited = vec![false; n];
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut stack = vec![start];
        visited[start] = true;
        while let Some(i) = stack.pop() {
            comp[i] = start;
            for j in 0..n {
                if !visited[j] && points[i].point.dist(&points[j].point) <= r {
                    visited[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    comp
}

/// Whether partition `a` refines partition `b` (each `a`-cluster lies inside
/// one `b`-cluster). Partitions are given as cluster ids per element.
pub fn refines(a: &[usize], b: &[usize]) -> bool {
    assert_eq!(a.len(), b.len());
    let mut seen: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    for i in 0..a.len() {
        match seen.entry(a[i]) {
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(b[i]);
            }
            std::collections::hash_map::Entry::Occupied(e) => {
                if *e.get() != b[i] {
                    return false;
                }
            }
        }
    }
    true
}

/// Candidate radii where threshold-component structure can change: zero plus
/// every distinct pairwise location distance, ascending.
pub fn candidate_radii(points: &[WeightedPoint]) -> Vec<f64> {
    let mut r = vec![0.0];
    for (i, a) in points.iter().enumerate() {
        for b in points.iter().skip(i + 1) {
            r.push(a.point.dist(&b.point));
        }
    }
    r.sort_by(f64::total_cmp);
    r.dedup();
    r
}

/// Optimal discrete k-center radius: the smallest over all k-subsets of
/// locations of the covering radius. Exhaustive; requires n <= 20.
pub fn kcenter_opt(points: &[WeightedPoint], k: usize) -> Result<f64> {
    let n = points.len();
    if n > 20 {
        return Err(Error::invalid("exhaustive k-center oracle capped at n=20"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    if k >= n {
        return Ok(0.0);
    }
    let mut best = f64::INFINITY;
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut radius: f64 = 0.0;
        for p in points {
            let mut near = f64::INFINITY;
            for (c, q) in points.iter().enumerate() {
                if mask & (1 << c) != 0 {
                    near = near.min(p.point.dist(&q.point));
                }
            }
            radius = radius.max(near);
        }
        best = best.min(radius);
    }
    Ok(best)
}

/// Exact smallest enclosing ball radius (center unrestricted), by Welzl's
/// move-to-front algorithm with an exact circumsphere solver on the support.
pub fn min_enclosing_ball_radius(points: &[Point]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let mut pts: Vec<Point> = points.to_vec();
    // deterministic shuffle for expected-linear behavior
    let mut state = 0x9e3779b97f4a7c15u64;
    for i in (1..pts.len()).rev() {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let j = (state >> 33) as usize % (i + 1);
        pts.swap(i, j);
    }
    let n = pts.len();
    let mut support: Vec<Point> = Vec::new();
    welzl(&mut pts, n, &mut support).1
}

fn welzl(pts: &mut [Point], n: usize, support: &mut Vec<Point>) -> (Vec<f64>, f64) {
    if n == 0 || support.len() == pts[0].dim() + 1 {
        return circumsphere(support);
    }
    let p = pts[n - 1].clone();
    let (c, r) = welzl(pts, n - 1, support);
    if dist_to(&c, &p) <= r * (1.0 + 1e-12) + 1e-300 {
        return (c, r);
    }
    support.push(p);
    let res = welzl(pts, n - 1, support);
    support.pop();
    // move-to-front: keep boundary points early for later calls
    pts[..n].rotate_right(1);
    res
}

fn dist_to(center: &[f64], p: &Point) -> f64 {
    center
        .iter()
        .zip(p.coords())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Smallest ball with every support point on its boundary: center solves the
/// Gram system 2 G lambda = w in the affine hull of the support.
fn circumsphere(support: &[Point]) -> (Vec<f64>, f64) {
    if support.is_empty() {
        return (vec![0.0], f64::NEG_INFINITY);
    }
    let d = support[0].dim();
    let base = support[0].coords();
    let m = support.len() - 1;
    if m == 0 {
        return (base.to_vec(), 0.0);
    }
    let vs: Vec<Vec<f64>> = support[1..]
        .iter()
        .map(|p| p.coords().iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let mut a = vec![vec![0.0; m + 1]; m];
    for i in 0..m {
        for j in 0..m {
            a[i][j] = 2.0 * dot(&vs[i], &vs[j]);
        }
        a[i][m] = dot(&vs[i], &vs[i]);
    }
    let lambda = match gauss_solve(&mut a) {
        Some(l) => l,
        // affinely dependent support: collapse to the previous solution
        None => return (base.to_vec(), f64::INFINITY),
    };
    let mut center = base.to_vec();
    for (i, v) in vs.iter().enumerate() {
        for k in 0..d {
            center[k] += lambda[i] * v[k];
        }
    }
    let r = dist_to(&center, &support[0]);
    (center, r)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve an m x (m+1) augmented system in place; None when singular.
fn gauss_solve(a: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let m = a.len();
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        let pivot_row = a[col].clone();
        for (row, r) in a.iter_mut().enumerate() {
            if row != col {
                let factor = r[col] / pivot_row[col];
                for (x, pv) in r[col..=m].iter_mut().zip(&pivot_row[col..=m]) {
                    *x -= factor * pv;
                }
            }
        }
    }
    Some((0..m).map(|i| a[i][m] / a[i][i]).collect())
}

/// Smallest enclosing-ball radius over subsets of locations satisfying
/// `member` (given as a predicate over index sets). Exhaustive over all
/// 2^n subsets; requires n <= 16. Returns the optimal radius.
pub fn min_ball_opt(
    points: &[WeightedPoint],
    member: &dyn Fn(&[usize]) -> bool,
) -> Result<f64> {
    let n = points.len();
    if n > 16 {
        return Err(Error::invalid("exhaustive min-ball oracle capped at n=16"));
    }
    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if !member(&idx) {
            continue;
        }
        let subset: Vec<Point> = idx.iter().map(|&i| points[i].point.clone()).collect();
        let r = min_enclosing_ball_radius(&subset);
        if r < best {
            best = r;
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::infeasible("no subset satisfies the family"))
    }
}

/// Radius of the smallest ball centered at one of the cluster's own points
/// and enclosing the cluster.
pub fn centered_radius(points: &[WeightedPoint], cluster: &[usize]) -> f64 {
    cluster
        .iter()
        .map(|&c| {
            cluster
                .iter()
                .map(|&p| points[c].point.dist(&points[p].point))
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Optimal min-max clustering value under the centered-ball radius:
/// partition all locations into clusters each satisfying `member`,
/// minimizing the largest cluster radius. Exhaustive over set partitions;
/// requires n <= 9.
pub fn minmax_cluster_opt(
    points: &[WeightedPoint],
    member: &dyn Fn(&[usize]) -> bool,
) -> Result<f64> {
    let n = points.len();
    if n > 9 {
        return Err(Error::invalid(
            "exhaustive partition oracle capped at n=9",
        ));
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut best = f64::INFINITY;
    enumerate_partitions(points, member, &mut clusters, 0, n, &mut best);
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::infeasible("no partition satisfies the family"))
    }
}

fn enumerate_partitions(
    points: &[WeightedPoint],
    member: &dyn Fn(&[usize]) -> bool,
    clusters: &mut Vec<Vec<usize>>,
    next: usize,
    n: usize,
    best: &mut f64,
) {
    if next == n {
        let mut cost: f64 = 0.0;
        for c in clusters.iter() {
            if !member(c) {
                return;
            }
            cost = cost.max(centered_radius(points, c));
        }
        if cost < *best {
            *best = cost;
        }
        return;
    }
    for i in 0..clusters.len() {
        clusters[i].push(next);
        enumerate_partitions(points, member, clusters, next + 1, n, best);
        clusters[i].pop();
    }
    clusters.push(vec![next]);
    enumerate_partitions(points, member, clusters, next + 1, n, best);
    clusters.pop();
}

/// Smallest radius at which some threshold component satisfies `member`.
pub fn min_component_opt(
    points: &[WeightedPoint],
    member: &dyn Fn(&[usize]) -> bool,
) -> Result<f64> {
    for r in candidate_radii(points) {
        let comp = threshold_components(points, r);
        let mut groups: std::collections::HashMap<usize, Vec<usize>> = Default::default();
        for (i, &c) in comp.iter().enumerate() {
            groups.entry(c).or_default().push(i);
        }
        if groups.values().any(|g| member(g)) {
            return Ok(r);
        }
    }
    Err(Error::infeasible("no radius yields a satisfying component"))
}

/// Smallest radius at which *every* threshold component satisfies `member`.
/// By upward closure this equals the optimal connected-clustering radius:
/// any valid clustering refines the components, so each component satisfies
/// the family, and conversely the components themselves form a clustering.
pub fn connected_cluster_opt(
    points: &[WeightedPoint],
    member: &dyn Fn(&[usize]) -> bool,
) -> Result<f64> {
    for r in candidate_radii(points) {
        let comp = threshold_components(points, r);
        let mut groups: std::collections::HashMap<usize, Vec<usize>> = Default::default();
        for (i, &c) in comp.iter().enumerate() {
            groups.entry(c).or_default().push(i);
        }
        if groups.values().all(|g| member(g)) {
            return Ok(r);
        }
    }
    Err(Error::infeasible("no radius yields a valid clustering"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::WeightedPoint;

    fn line(xs: &[f64]) -> Vec<WeightedPoint> {
        xs.iter().map(|&x| WeightedPoint::unit(vec![x].into())).collect()
    }

    #[test]
    fn pairwise_distances_include_duplicate_zeros() {
        let mut pts = line(&[0.0, 1.0]);
        pts[0].weight = 3;
        // units: three at 0, one at 1 -> pairs: C(3,2)=3 zeros, 3 ones
        let all = sorted_pairwise_distances(&pts);
        assert_eq!(all, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        assert_eq!(kth_distance(&pts, 3).unwrap(), 0.0);
        assert_eq!(kth_distance(&pts, 4).unwrap(), 1.0);
        assert!(kth_distance(&pts, 7).is_err());
    }

    #[test]
    fn mnn_multiset_on_a_line() {
        // {0,1,3}: NN distances 1,1,2; second-NN 1? no: for 0 -> {1,3}, m=2 -> 3
        let pts = line(&[0.0, 1.0, 3.0]);
        assert_eq!(mnn_multiset(&pts, 1).unwrap(), vec![1.0, 1.0, 2.0]);
        assert_eq!(mnn_multiset(&pts, 2).unwrap(), vec![2.0, 3.0, 3.0]);
        assert!(mnn_multiset(&pts, 3).is_err());
    }

    #[test]
    fn furthest_nn_on_spec_line() {
        // NN distances of {0,1,3,7} are {1,1,2,4}; the furthest is 4
        let pts = line(&[0.0, 1.0, 3.0, 7.0]);
        assert_eq!(furthest_nn(&pts).unwrap(), 4.0);
        assert_eq!(kth_mnn(&pts, 4, 1).unwrap(), 4.0);
        assert_eq!(kth_mnn(&pts, 2, 1).unwrap(), 1.0);
    }

    #[test]
    fn mst_on_line_with_gap() {
        let pts = line(&[0.0, 1.0, 2.0, 10.0]);
        assert_eq!(mst_edges(&pts), vec![1.0, 1.0, 8.0]);
        assert_eq!(mst_kth_longest_edge(&pts, 1).unwrap(), 8.0);
        assert_eq!(mst_kth_longest_edge(&pts, 3).unwrap(), 1.0);
    }

    #[test]
    fn closest_pair_of_two_points() {
        let pts = line(&[2.0, 5.5]);
        assert_eq!(smallest_nonzero_distance(&pts).unwrap(), 3.5);
    }

    #[test]
    fn nonzero_distance_skips_duplicates() {
        let mut pts = line(&[0.0, 0.0, 1.0, 5.0]);
        pts[1].weight = 4;
        assert_eq!(smallest_nonzero_distance(&pts).unwrap(), 1.0);
        let coincident = line(&[3.0, 3.0]);
        assert!(smallest_nonzero_distance(&coincident).is_err());
    }

    #[test]
    fn kcenter_exhaustive_matches_hand_values() {
        let two = line(&[0.0, 10.0]);
        assert_eq!(kcenter_opt(&two, 1).unwrap(), 10.0);
        assert_eq!(kcenter_opt(&two, 2).unwrap(), 0.0);
        // ten unit-spaced points, three centers: each center covers at most
        // three of them at radius 1, so radius 2 is optimal
        let ten = line(&[0., 1., 2., 3., 4., 5., 6., 7., 8., 9.]);
        assert_eq!(kcenter_opt(&ten, 3).unwrap(), 2.0);
    }

    #[test]
    fn enclosing_ball_of_simple_shapes() {
        let square = [
            Point::from(vec![0.0, 0.0]),
            Point::from(vec![1.0, 0.0]),
            Point::from(vec![0.0, 1.0]),
            Point::from(vec![1.0, 1.0]),
        ];
        let r = min_enclosing_ball_radius(&square);
        assert!((r - (0.5f64 * 0.5 + 0.5 * 0.5).sqrt()).abs() < 1e-9, "{r}");
        let segment = [Point::from(vec![1.0]), Point::from(vec![5.0])];
        assert!((min_enclosing_ball_radius(&segment) - 2.0).abs() < 1e-9);
        let one = [Point::from(vec![3.0, 4.0])];
        assert_eq!(min_enclosing_ball_radius(&one), 0.0);
    }

    #[test]
    fn enclosing_ball_dominated_by_diametral_pair() {
        let pts = [
            Point::from(vec![0.0, 0.0]),
            Point::from(vec![10.0, 0.0]),
            Point::from(vec![5.0, 1.0]),
        ];
        assert!((min_enclosing_ball_radius(&pts) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn min_ball_over_family_at_least_two() {
        // {0,1,10}: smallest ball holding >= 2 units has radius 1/2
        let pts = line(&[0.0, 1.0, 10.0]);
        let member = |idx: &[usize]| -> bool {
            idx.iter().map(|&i| pts[i].weight).sum::<u64>() >= 2
        };
        assert!((min_ball_opt(&pts, &member).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn minmax_cluster_on_three_pairs() {
        // pairs at spacing 1, 2, 3, far apart; every cluster needs >= 2 units;
        // the centered radius of a pair is its full spacing
        let pts = line(&[0.0, 1.0, 100.0, 102.0, 200.0, 203.0]);
        let member =
            |idx: &[usize]| -> bool { idx.iter().map(|&i| pts[i].weight).sum::<u64>() >= 2 };
        assert_eq!(minmax_cluster_opt(&pts, &member).unwrap(), 3.0);
    }

    #[test]
    fn min_component_needs_three_points() {
        // a pair at spacing 1 and a triple at spacing 2: the triple connects
        // at radius 2 and is the first component of three locations
        let pts = line(&[0.0, 1.0, 50.0, 52.0, 54.0]);
        let member = |idx: &[usize]| -> bool { idx.len() >= 3 };
        assert_eq!(min_component_opt(&pts, &member).unwrap(), 2.0);
    }

    #[test]
    fn connected_cluster_base_stations() {
        // stations at 0 and 100; plain nodes at 3, 6, 97: every component
        // must contain a station, which first happens at radius 3
        let pts = line(&[0.0, 3.0, 6.0, 97.0, 100.0]);
        let stations = [true, false, false, false, true];
        let member = |idx: &[usize]| -> bool { idx.iter().any(|&i| stations[i]) };
        assert_eq!(connected_cluster_opt(&pts, &member).unwrap(), 3.0);
    }

    #[test]
    fn threshold_components_and_refinement() {
        let pts = line(&[0.0, 0.4, 5.0]);
        let c1 = threshold_components(&pts, 1.0);
        assert_eq!(c1[0], c1[1]);
        assert_ne!(c1[0], c1[2]);
        let c2 = threshold_components(&pts, 10.0);
        assert!(refines(&c1, &c2));
        assert!(!refines(&c2, &c1));
    }

    #[test]
    fn bichromatic_covering_radius_toy() {
        // colors alternate; covering radius = max over units of the nearest
        // other-color unit
        let pts = line(&[0.0, 1.0, 5.0]);
        let colors = [0u32, 1, 0];
        let all = bichromatic_mnn_multiset(&pts, &colors, 1).unwrap();
        assert_eq!(all, vec![1.0, 1.0, 4.0]);
    }
}
