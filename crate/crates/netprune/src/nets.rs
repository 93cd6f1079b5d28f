//! `r`-net construction and far/close point splits.
//!
//! An `r`-net of a point set is a subset whose points are pairwise at least
//! `r` apart (packing) while every input point has a net point strictly
//! closer than `r` (covering). Nets are the sparsification step of the
//! driver loop: net points absorb the weights and attributes of the points
//! they cover. The far/close split discards points whose nearest neighbor is
//! at least `r` away; it is the pruning step.


use crate::error::{Error, Result};
use crate::exec;
use crate::geom::{
    build_grid, combine_attrs, for_each_block_key, grid_id, point_cell_dist, side_for_diameter,
    validate_points, WeightedPoint,
};

/// Result of net construction: the net points (with aggregated weights and
/// attributes) and, for every input point, the index of the net point it was
/// assigned to.
#[derive(Debug, Clone)]
pub struct NetResult {
    pub points: Vec<WeightedPoint>,
    /// `assignment[i]` is the index into `points` covering input point `i`.
    pub assignment: Vec<u32>,
    /// `source[j]` is the input index that became net point `j`.
    pub source: Vec<u32>,
}

/// How covered points are assigned to net points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetAssignment {
    /// Points belong to the net point that marked them first (scan order).
    FirstMarker,
    /// Post-pass: points move to their nearest net point (ties broken by the
    /// lower net index). The covering guarantee makes that distance < r.
    Nearest,
}

/// Compute an `r`-net with first-marker assignment.
pub fn compute_net(points: &[WeightedPoint], r: f64) -> Result<NetResult> {
    compute_net_with(points, r, NetAssignment::FirstMarker)
}

/// Compute an `r`-net with the given assignment rule.
pub fn compute_net_with(
    points: &[WeightedPoint],
    r: f64,
    assignment_rule: NetAssignment,
) -> Result<NetResult> {
    let dim = validate_points(points)?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid(format!("net radius must be positive, got {r}")));
    }
    let side = side_for_diameter(r / 2.0, dim);
    let grid = build_grid(points, side)?;

    let n = points.len();
    let mut assignment: Vec<u32> = vec![u32::MAX; n];
    let mut source: Vec<u32> = Vec::new();
    for i in 0..n {
        if assignment[i] != u32::MAX {
            continue;
        }
        let net_idx = source.len() as u32;
        source.push(i as u32);
        let p = &points[i].point;
        // Mark everything strictly within r of the new net point.
        for_each_block_key(p.coords(), r, side, &mut |key| {
            if point_cell_dist(p, &key, side) > r {
                return;
            }
            if let Some(members) = grid.cell_indices(&key) {
                for &m in members {
                    let m = m as usize;
                    if assignment[m] == u32::MAX && p.dist(&points[m].point) < r {
                        assignment[m] = net_idx;
                    }
                }
            }
        });
        debug_assert_eq!(assignment[i], net_idx);
    }

    if assignment_rule == NetAssignment::Nearest {
        let net_points: Vec<WeightedPoint> = source
            .iter()
            .map(|&s| points[s as usize].clone())
            .collect();
        let net_grid = build_grid(&net_points, side)?;
        let reassigned = exec::map_indices(n, |i| {
            let p = &points[i].point;
            let mut best = (f64::INFINITY, u32::MAX);
            for_each_block_key(p.coords(), r, side, &mut |key| {
                if point_cell_dist(p, &key, side) > r {
                    return;
                }
                if let Some(members) = net_grid.cell_indices(&key) {
                    for &j in members {
                        let d = p.dist(&net_points[j as usize].point);
                        if d < best.0 || (d == best.0 && j < best.1) {
                            best = (d, j);
                        }
                    }
                }
            });
            debug_assert!(best.0 < r, "covering guarantees a net point within r");
            best.1
        });
        assignment = reassigned;
    }

    // Aggregate weights and attributes per net point.
    let mut net_points: Vec<WeightedPoint> = source
        .iter()
        .map(|&s| WeightedPoint {
            point: points[s as usize].point.clone(),
            weight: 0,
            attrs: None,
        })
        .collect();
    for (i, &j) in assignment.iter().enumerate() {
        let target = &mut net_points[j as usize];
        target.weight += points[i].weight;
        target.attrs = combine_attrs(target.attrs.as_deref(), points[i].attrs.as_deref());
    }

    Ok(NetResult {
        points: net_points,
        assignment,
        source,
    })
}

/// Result of a far/close split at radius `r`.
#[derive(Debug, Clone)]
pub struct FarCloseSplit {
    /// Points with another point (or a coincident duplicate) strictly within `r`.
    pub close: Vec<WeightedPoint>,
    /// Points whose nearest neighbor distance is at least `r`.
    pub far: Vec<WeightedPoint>,
}

/// Split points by whether their nearest-neighbor distance is `< r` or `>= r`.
///
/// A weighted point of weight >= 2 stands for coincident duplicates, so its
/// nearest-neighbor distance is 0 and it is always close. Uses a grid of cell
/// diameter `r/2`: any cellmate certifies closeness, and points alone in
/// their cell scan the cells within `r`.
pub fn del_far(points: &[WeightedPoint], r: f64) -> Result<FarCloseSplit> {
    split_far(points, r, true)
}

/// Variant for multiset problems whose value ignores coincident duplicates:
/// a weighted point is treated as a single point, so weight alone never makes
/// it close.
pub fn del_far_distinct(points: &[WeightedPoint], r: f64) -> Result<FarCloseSplit> {
    split_far(points, r, false)
}

fn split_far(points: &[WeightedPoint], r: f64, weight_is_close: bool) -> Result<FarCloseSplit> {
    let dim = validate_points(points)?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid(format!("split radius must be positive, got {r}")));
    }
    let side = side_for_diameter(r / 2.0, dim);
    let grid = build_grid(points, side)?;

    let close_flags: Vec<bool> = exec::map_indices(points.len(), |i| {
        let wp = &points[i];
        if weight_is_close && wp.weight >= 2 {
            return true;
        }
        let own_key = grid_id(&wp.point, side).expect("validated in build_grid");
        let cellmates = grid
            .cell_indices(&own_key)
            .expect("own cell is occupied");
        // Cell diameter is r/2, so any distinct cellmate is within r.
        if cellmates.len() > 1 {
            return true;
        }
        let mut found = false;
        let p = &wp.point;
        for_each_block_key(p.coords(), r, side, &mut |key| {
            if found || key == own_key || point_cell_dist(p, &key, side) >= r {
                return;
            }
            if let Some(members) = grid.cell_indices(&key) {
                if members
                    .iter()
                    .any(|&m| p.dist(&points[m as usize].point) < r)
                {
                    found = true;
                }
            }
        });
        found
    });

    let mut close = Vec::new();
    let mut far = Vec::new();
    for (wp, &is_close) in points.iter().zip(close_flags.iter()) {
        if is_close {
            close.push(wp.clone());
        } else {
            far.push(wp.clone());
        }
    }
    Ok(FarCloseSplit { close, far })
}

/// Brute-force nearest-neighbor distance of `points[i]` to the rest of the
/// set (coincident duplicates excluded — this is the distance to the nearest
/// *other* location).
pub fn nn_distance_to_others(points: &[WeightedPoint], i: usize) -> f64 {
    let p = &points[i].point;
    let mut best = f64::INFINITY;
    for (j, q) in points.iter().enumerate() {
        if j != i {
            best = best.min(p.dist(&q.point));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_points(coords: &[(f64, f64)]) -> Vec<WeightedPoint> {
        coords
            .iter()
            .map(|&(x, y)| WeightedPoint::unit(Point::new(&[x, y])))
            .collect()
    }

    fn random_points(n: usize, seed: u64) -> Vec<WeightedPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                WeightedPoint::unit(Point::new(&[
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                ]))
            })
            .collect()
    }

    fn check_packing_covering(points: &[WeightedPoint], net: &NetResult, r: f64) {
        for (a, pa) in net.points.iter().enumerate() {
            for pb in net.points.iter().skip(a + 1) {
                assert!(
                    pa.point.dist(&pb.point) >= r,
                    "net points closer than r"
                );
            }
        }
        for (i, wp) in points.iter().enumerate() {
            let j = net.assignment[i] as usize;
            assert!(wp.point.dist(&net.points[j].point) < r, "covering violated");
        }
    }

    #[test]
    fn net_on_three_collinear_points() {
        let pts = unit_points(&[(0.0, 0.0), (0.5, 0.0), (2.0, 0.0)]);
        let net = compute_net(&pts, 1.0).unwrap();
        assert_eq!(net.points.len(), 2);
        assert_eq!(net.points[0].weight, 2); // absorbed the point at 0.5
        assert_eq!(net.points[1].weight, 1);
        check_packing_covering(&pts, &net, 1.0);
    }

    #[test]
    fn net_of_net_is_identity() {
        let pts = random_points(200, 7);
        let net = compute_net(&pts, 0.8).unwrap();
        let again = compute_net(&net.points, 0.8).unwrap();
        assert_eq!(again.points.len(), net.points.len());
        for (a, b) in net.points.iter().zip(again.points.iter()) {
            assert!(a.point.same_location(&b.point));
        }
    }

    #[test]
    fn nearest_assignment_picks_closest_net_point() {
        // 0 and 1.1 are both net points; 0.9 is marked by 0 first but is
        // closer to 1.1.
        let pts = unit_points(&[(0.0, 0.0), (1.1, 0.0), (0.9, 0.0)]);
        let first = compute_net(&pts, 1.05).unwrap();
        assert_eq!(first.assignment[2], 0);
        let nearest = compute_net_with(&pts, 1.05, NetAssignment::Nearest).unwrap();
        assert_eq!(nearest.assignment[2], 1);
        assert_eq!(nearest.points[1].weight, 2);
    }

    #[test]
    fn del_far_weighted_point_is_always_close() {
        let mut pts = unit_points(&[(0.0, 0.0), (100.0, 0.0)]);
        pts[0].weight = 2;
        let split = del_far(&pts, 1.0).unwrap();
        assert_eq!(split.close.len(), 1);
        assert_eq!(split.far.len(), 1);
        assert_eq!(split.close[0].weight, 2);

        // distinct-location variant: both isolated
        let split = del_far_distinct(&pts, 1.0).unwrap();
        assert_eq!(split.close.len(), 0);
        assert_eq!(split.far.len(), 2);
    }

    #[test]
    fn half_of_close_points_vanish_under_a_double_radius_net() {
        for seed in 0..20 {
            let pts = random_points(150, seed);
            let r = 0.9;
            let close: Vec<usize> = (0..pts.len())
                .filter(|&i| nn_distance_to_others(&pts, i) < r)
                .collect();
            let net = compute_net(&pts, 2.0 * r).unwrap();
            let surviving_close = close
                .iter()
                .filter(|&&i| net.source.contains(&(i as u32)))
                .count();
            assert!(
                2 * surviving_close <= close.len(),
                "seed {seed}: {surviving_close} of {} close points survived",
                close.len()
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn net_packs_covers_and_conserves_weight(
            coords in proptest::collection::vec((-10f64..10.0, -10f64..10.0), 1..60),
            r in 0.1f64..5.0)
        {
            let pts = unit_points(&coords);
            let merged = crate::geom::merge_coincident(&pts);
            let net = compute_net(&merged, r).unwrap();
            check_packing_covering(&merged, &net, r);
            prop_assert_eq!(
                net.points.iter().map(|p| p.weight).sum::<u64>(),
                merged.iter().map(|p| p.weight).sum::<u64>()
            );
        }

        #[test]
        fn del_far_matches_brute_force(
            coords in proptest::collection::vec((-10f64..10.0, -10f64..10.0), 2..60),
            r in 0.1f64..5.0)
        {
            let pts = unit_points(&coords);
            let merged = crate::geom::merge_coincident(&pts);
            let split = del_far(&merged, r).unwrap();
            for (i, wp) in merged.iter().enumerate() {
                let nn = if wp.weight >= 2 { 0.0 } else { nn_distance_to_others(&merged, i) };
                let expect_close = nn < r;
                let in_close = split.close.iter().any(|c| c.point.same_location(&wp.point));
                prop_assert_eq!(expect_close, in_close, "point {}", i);
            }
        }

        #[test]
        fn weighted_split_matches_expanded_split(
            coords in proptest::collection::vec((-5f64..5.0, -5f64..5.0), 2..20),
            dup in 0usize..20,
            r in 0.1f64..5.0)
        {
            // duplicate one point `dup % len` times and compare the weighted
            // classification against the expanded multiset's
            let mut pts = unit_points(&coords);
            let extra = dup % pts.len();
            for _ in 0..3 {
                pts.push(pts[extra].clone());
            }
            let merged = crate::geom::merge_coincident(&pts);
            let split_weighted = del_far(&merged, r).unwrap();
            // expanded: every unit point classified independently
            let split_units = del_far(&pts, r);
            // expanded multisets have coincident points, which are close to
            // each other; a weighted run must agree location-by-location
            if let Ok(split_units) = split_units {
                for c in &split_weighted.close {
                    prop_assert!(split_units.close.iter().any(|u| u.point.same_location(&c.point)));
                }
                for f in &split_weighted.far {
                    prop_assert!(split_units.far.iter().any(|u| u.point.same_location(&f.point)));
                }
            }
        }
    }
}
