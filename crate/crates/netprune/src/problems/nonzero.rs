//! Exact smallest nonzero distance (equivalently, the closest pair of
//! distinct locations), duplicate-aware.
//!
//! The decider is exact rather than approximate: on a grid of diameter
//! `r/2` any shared cell certifies a pair below `r`, and otherwise every
//! cell holds one location and a constant-size neighborhood scan recovers
//! the true minimum within `r`. Pruning needs no context fix-up: a far
//! point's distances to other locations all exceed the answer, and its
//! coincident duplicates only carry zeros, which the value ignores.

use crate::error::{Error, Result};
use crate::framework::{self, DeciderOutcome, Problem};
use crate::geom::{
    build_grid, merge_coincident, neighborhood_cells, side_for_diameter, validate_points,
    CellIndex, Point, WeightedPoint,
};
use crate::hiprob::{solve_with_rule, PivotRule};

pub struct SmallestNonzero;

impl SmallestNonzero {
    /// Minimum distance between distinct locations, searched only out to
    /// `r`; `None` when every such distance exceeds `r`.
    fn min_within(&self, r: f64, points: &[WeightedPoint]) -> Result<Option<f64>> {
        let dim = points[0].dim();
        let side = side_for_diameter(r / 2.0, dim);
        let grid = build_grid(points, side)?;
        for (_, indices, _) in grid.occupied() {
            if indices.len() >= 2 {
                let a = &points[indices[0] as usize].point;
                let b = &points[indices[1] as usize].point;
                return Ok(Some(a.dist(b)));
            }
        }
        let mut best = f64::INFINITY;
        for (i, p) in points.iter().enumerate() {
            for key in neighborhood_cells(&grid, &p.point, r) {
                let j = grid.cell_indices(&key).unwrap()[0] as usize;
                if j != i {
                    best = best.min(p.point.dist(&points[j].point));
                }
            }
        }
        Ok(if best.is_finite() { Some(best) } else { None })
    }
}

impl Problem for SmallestNonzero {
    type Context = ();

    fn phi(&self) -> f64 {
        // the decider only stops on an exact hit, so its interval is a point
        1.0
    }

    fn decide(&self, r: f64, points: &[WeightedPoint], _: &()) -> Result<DeciderOutcome> {
        match self.min_within(r, points)? {
            Some(m) if m < r => Ok(DeciderOutcome::Below),
            Some(m) if m == r => Ok(DeciderOutcome::Bounded { lo: r, hi: r }),
            _ => Ok(DeciderOutcome::Above),
        }
    }

    fn prune_context(&self, _: &(), _: &[WeightedPoint]) -> Result<()> {
        Ok(())
    }
}

/// The exact closest pair of distinct locations and its distance.
pub fn closest_pair(points: &[WeightedPoint], seed: u64) -> Result<(f64, (Point, Point))> {
    closest_pair_with(points, seed, PivotRule::Sample)
}

/// [`closest_pair`] under an explicit driver pivot rule.
pub fn closest_pair_with(
    points: &[WeightedPoint],
    seed: u64,
    rule: PivotRule,
) -> Result<(f64, (Point, Point))> {
    validate_points(points)?;
    let merged = merge_coincident(points);
    if merged.len() < 2 {
        return Err(Error::infeasible(
            "all points coincide; every pairwise distance is zero",
        ));
    }
    let problem = SmallestNonzero;
    let (interval, _) = solve_with_rule(&problem, &merged, (), seed, rule)?;
    let interval = framework::refine_phi(&problem, &merged, &(), interval, 2.0)?;

    // With the answer bracketed in [lo, hi], a grid of diameter lo/2 keeps
    // every location in its own cell, and the realizing pair lies within hi.
    let dim = merged[0].dim();
    let side = side_for_diameter(interval.lo / 2.0, dim);
    let grid = build_grid(&merged, side)?;
    let cells: Vec<_> = grid
        .occupied()
        .map(|(key, indices, _)| {
            debug_assert_eq!(indices.len(), 1);
            (key.clone(), indices[0])
        })
        .collect();
    let index = CellIndex::new(side, interval.hi.max(side), cells);

    let mut best = f64::INFINITY;
    let mut pair = (0usize, 0usize);
    for (i, p) in merged.iter().enumerate() {
        index.for_each_cell_near_point(&p.point, interval.hi, |_, &j| {
            let j = j as usize;
            if j != i {
                let d = p.point.dist(&merged[j].point);
                if d < best {
                    best = d;
                    pair = (i, j);
                }
            }
        });
    }
    debug_assert!(best.is_finite());
    Ok((
        best,
        (merged[pair.0].point.clone(), merged[pair.1].point.clone()),
    ))
}

/// The smallest nonzero pairwise distance, exactly.
pub fn smallest_nonzero_distance(points: &[WeightedPoint], seed: u64) -> Result<f64> {
    closest_pair(points, seed).map(|(d, _)| d)
}

/// [`smallest_nonzero_distance`] under an explicit driver pivot rule.
pub fn smallest_nonzero_distance_with(
    points: &[WeightedPoint],
    seed: u64,
    rule: PivotRule,
) -> Result<f64> {
    closest_pair_with(points, seed, rule).map(|(d, _)| d)
}
