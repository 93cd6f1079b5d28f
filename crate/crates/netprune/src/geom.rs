//! Points, weighted points, and uniform grid hashing.
//!
//! A grid with sidelength `side` assigns a point to the cell whose key is the
//! per-coordinate floor of `x_i / side`. Cell regions are closed axis-aligned
//! boxes; all distance predicates against cells (point-to-cell and
//! cell-to-cell) are minimum distances to those closed regions, computed by
//! coordinate clamping. A cell of sidelength `side` in dimension `d` has
//! diameter `side * sqrt(d)`, so passes that are specified in terms of a cell
//! *diameter* `D` build grids with sidelength `D / sqrt(d)`.

use std::collections::HashMap;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A point in R^d. Dimensions stay small (typically 1-3), so coordinates are
/// stored inline.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: SmallVec<[f64; 4]>,
}

impl Point {
    pub fn new(coords: &[f64]) -> Self {
        Point {
            coords: SmallVec::from_slice(coords),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| {
                let d = a - b;
                d * d
            })
            .sum()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    /// Bit-exact coordinate identity; used to merge coincident points.
    pub fn same_location(&self, other: &Point) -> bool {
        self.coords.len() == other.coords.len()
            && self
                .coords
                .iter()
                .zip(other.coords.iter())
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point {
            coords: SmallVec::from_vec(v),
        }
    }
}

/// A point with a positive integer multiplicity and an optional attribute
/// vector. A weight-`w` point stands for `w` coincident unit points; the
/// attribute vector carries additive per-point payloads (color histograms,
/// flag counts, custom measures) that net construction must sum when it
/// merges points.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPoint {
    pub point: Point,
    pub weight: u64,
    pub attrs: Option<Box<[f64]>>,
}

impl WeightedPoint {
    pub fn unit(point: Point) -> Self {
        WeightedPoint {
            point,
            weight: 1,
            attrs: None,
        }
    }

    pub fn with_weight(point: Point, weight: u64) -> Self {
        WeightedPoint {
            point,
            weight,
            attrs: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.point.dim()
    }
}

/// Element-wise sum of optional attribute vectors (absent means all-zero of
/// the partner's length).
pub fn combine_attrs(a: Option<&[f64]>, b: Option<&[f64]>) -> Option<Box<[f64]>> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) => Some(x.to_vec().into_boxed_slice()),
        (None, Some(y)) => Some(y.to_vec().into_boxed_slice()),
        (Some(x), Some(y)) => {
            debug_assert_eq!(x.len(), y.len());
            Some(
                x.iter()
                    .zip(y.iter())
                    .map(|(u, v)| u + v)
                    .collect::<Vec<_>>()
                    .into_boxed_slice(),
            )
        }
    }
}

/// Integer cell key of a uniform grid.
pub type GridKey = SmallVec<[i64; 4]>;

/// Coordinates this far from the origin (relative to the sidelength) would
/// overflow the integer cell keys; reject them up front.
const MAX_CELL_COORD: f64 = 4.0e18;

/// Sidelength of a grid whose cells have diameter `diam` in dimension `dim`.
pub fn side_for_diameter(diam: f64, dim: usize) -> f64 {
    diam / (dim as f64).sqrt()
}

/// Per-coordinate floor cell id of `p` in a grid of sidelength `side`.
pub fn grid_id(p: &Point, side: f64) -> Result<GridKey> {
    if !(side.is_finite() && side > 0.0) {
        return Err(Error::invalid(format!("grid sidelength must be positive, got {side}")));
    }
    let mut key = GridKey::new();
    for &c in p.coords() {
        let v = (c / side).floor();
        if !v.is_finite() || v.abs() > MAX_CELL_COORD {
            return Err(Error::invalid(format!(
                "coordinate {c} too large for grid sidelength {side}"
            )));
        }
        key.push(v as i64);
    }
    Ok(key)
}

/// Minimum Euclidean distance from `p` to the closed region of cell `key`.
pub fn point_cell_dist(p: &Point, key: &GridKey, side: f64) -> f64 {
    let mut sq = 0.0;
    for (&x, &k) in p.coords().iter().zip(key.iter()) {
        let lo = k as f64 * side;
        let hi = lo + side;
        let gap = (lo - x).max(x - hi).max(0.0);
        sq += gap * gap;
    }
    sq.sqrt()
}

/// Minimum Euclidean distance between the closed regions of two cells.
pub fn cell_cell_dist(a: &GridKey, b: &GridKey, side: f64) -> f64 {
    let mut sq = 0.0;
    for (&ka, &kb) in a.iter().zip(b.iter()) {
        let diff = (ka as i128 - kb as i128).unsigned_abs();
        if diff > 1 {
            let gap = (diff - 1) as f64 * side;
            sq += gap * gap;
        }
    }
    sq.sqrt()
}

struct CellData {
    indices: Vec<u32>,
    weight: u64,
}

/// A hash grid over a borrowed slice of weighted points: cell key to the
/// list of point indices it contains plus their aggregated weight.
pub struct Grid<'a> {
    pub points: &'a [WeightedPoint],
    side: f64,
    cells: HashMap<GridKey, CellData>,
}

impl<'a> Grid<'a> {
    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_indices(&self, key: &GridKey) -> Option<&[u32]> {
        self.cells.get(key).map(|c| c.indices.as_slice())
    }

    pub fn cell_weight(&self, key: &GridKey) -> u64 {
        self.cells.get(key).map_or(0, |c| c.weight)
    }

    pub fn occupied(&self) -> impl Iterator<Item = (&GridKey, &[u32], u64)> {
        self.cells
            .iter()
            .map(|(k, c)| (k, c.indices.as_slice(), c.weight))
    }
}

/// Bucket `points` into a grid of the given sidelength.
pub fn build_grid<'a>(points: &'a [WeightedPoint], side: f64) -> Result<Grid<'a>> {
    let mut cells: HashMap<GridKey, CellData> = HashMap::new();
    for (i, wp) in points.iter().enumerate() {
        let key = grid_id(&wp.point, side)?;
        let cell = cells.entry(key).or_insert_with(|| CellData {
            indices: Vec::new(),
            weight: 0,
        });
        cell.indices.push(i as u32);
        cell.weight += wp.weight;
    }
    Ok(Grid { points, side, cells })
}

/// All non-empty cells of `grid` whose closed region lies within Euclidean
/// distance `r` of `p`. The scan block has `(2 + ceil(2r/side))^d` candidate
/// keys, so this is intended for grids whose sidelength is proportional to
/// `r`; counting passes with much finer grids go through [`CellIndex`].
pub fn neighborhood_cells(grid: &Grid<'_>, p: &Point, r: f64) -> Vec<GridKey> {
    let mut out = Vec::new();
    for_each_block_key(p.coords(), r, grid.side, &mut |key| {
        if grid.cells.contains_key(&key) && point_cell_dist(p, &key, grid.side) <= r {
            out.push(key);
        }
    });
    out
}

/// Invoke `f` on every grid key whose region intersects the axis-aligned box
/// `center +- r` (a superset of the keys within distance `r`).
pub(crate) fn for_each_block_key(center: &[f64], r: f64, side: f64, f: &mut dyn FnMut(GridKey)) {
    let dim = center.len();
    let mut lo = SmallVec::<[i64; 4]>::new();
    let mut hi = SmallVec::<[i64; 4]>::new();
    for &c in center {
        lo.push(((c - r) / side).floor() as i64);
        hi.push(((c + r) / side).floor() as i64);
    }
    let mut cur: GridKey = lo.clone();
    loop {
        f(cur.clone());
        // odometer increment over the box [lo, hi]
        let mut axis = 0;
        loop {
            if axis == dim {
                return;
            }
            cur[axis] += 1;
            if cur[axis] <= hi[axis] {
                break;
            }
            cur[axis] = lo[axis];
            axis += 1;
        }
    }
}

/// Occupied cells of a fine grid bucketed under a coarser grid, so that
/// "all occupied fine cells within distance r of here" costs time
/// proportional to the true candidate count instead of the full `(r/side)^d`
/// key block. `payload` carries per-cell aggregates (weights, sketches).
pub(crate) struct CellIndex<P> {
    pub fine_side: f64,
    coarse_side: f64,
    pub cells: Vec<(GridKey, P)>,
    buckets: HashMap<GridKey, Vec<u32>>,
}

impl<P> CellIndex<P> {
    /// `coarse_side` should be on the order of the query radius.
    pub fn new(fine_side: f64, coarse_side: f64, cells: Vec<(GridKey, P)>) -> Self {
        let mut buckets: HashMap<GridKey, Vec<u32>> = HashMap::new();
        for (i, (key, _)) in cells.iter().enumerate() {
            let coarse: GridKey = key
                .iter()
                .map(|&k| ((k as f64 * fine_side) / coarse_side).floor() as i64)
                .collect();
            buckets.entry(coarse).or_default().push(i as u32);
        }
        CellIndex {
            fine_side,
            coarse_side,
            cells,
            buckets,
        }
    }

    fn for_each_candidate(&self, center: &[f64], extent: f64, r: f64, f: &mut dyn FnMut(u32)) {
        // Coarse keys overlapping the center's bounding box inflated by r,
        // plus one fine sidelength: buckets are keyed by a cell's low corner,
        // which sits up to a full cell below the region that must be reached.
        for_each_block_key(center, extent + r + self.fine_side, self.coarse_side, &mut |coarse| {
            if let Some(bucket) = self.buckets.get(&coarse) {
                for &i in bucket {
                    f(i);
                }
            }
        });
    }

    /// Visit every occupied fine cell whose region is within `r` of the
    /// region of the fine cell `key`.
    pub fn for_each_cell_within(&self, key: &GridKey, r: f64, mut f: impl FnMut(&GridKey, &P)) {
        let center: SmallVec<[f64; 4]> = key
            .iter()
            .map(|&k| (k as f64 + 0.5) * self.fine_side)
            .collect();
        let extent = self.fine_side * 0.5 * (key.len() as f64).sqrt();
        self.for_each_candidate(&center, extent, r, &mut |i| {
            let (ck, payload) = &self.cells[i as usize];
            if cell_cell_dist(key, ck, self.fine_side) <= r {
                f(ck, payload);
            }
        });
    }

    /// Visit every occupied fine cell whose region is within `r` of `p`.
    pub fn for_each_cell_near_point(&self, p: &Point, r: f64, mut f: impl FnMut(&GridKey, &P)) {
        self.for_each_candidate(p.coords(), 0.0, r, &mut |i| {
            let (ck, payload) = &self.cells[i as usize];
            if point_cell_dist(p, ck, self.fine_side) <= r {
                f(ck, payload);
            }
        });
    }
}

/// For every cell, the total weight of occupied cells whose closed region
/// lies within distance `x` of its own (`cell_cell_dist <= x`, the cell
/// itself included). This is the workhorse of the counting deciders, whose
/// grids have `x/side` on the order of `1/eps`: a per-cell neighborhood scan
/// would touch `(x/side)^d` candidates per cell, so in one and two dimensions
/// the cells are instead swept row by row with a sliding window over the last
/// axis, for `x/side` work per cell. Higher dimensions fall back to the
/// bucketed scan.
pub(crate) fn cell_weights_within(cells: &[(GridKey, u64)], side: f64, x: f64) -> Vec<u64> {
    if cells.is_empty() {
        return Vec::new();
    }
    let dim = cells[0].0.len();
    if dim > 2 {
        let index = CellIndex::new(side, x.max(side), cells.to_vec());
        return cells
            .iter()
            .map(|(key, _)| {
                let mut sum = 0u64;
                index.for_each_cell_within(key, x, |_, w| sum += *w);
                sum
            })
            .collect();
    }

    // Sort lexicographically; a row is a run agreeing on all but the last
    // coordinate (the whole set in dimension one).
    let mut sorted: Vec<(GridKey, u64, u32)> = cells
        .iter()
        .enumerate()
        .map(|(i, (k, w))| (k.clone(), *w, i as u32))
        .collect();
    sorted.sort_unstable_by(|a, b| a.0.cmp(&b.0));

    let mut rows: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i].0[..dim - 1] != sorted[start].0[..dim - 1] {
            rows.push((start, i));
            start = i;
        }
    }
    let pre: Vec<Vec<u64>> = rows
        .iter()
        .map(|&(s, e)| {
            let mut acc = Vec::with_capacity(e - s + 1);
            acc.push(0u64);
            for c in &sorted[s..e] {
                acc.push(acc.last().unwrap() + c.1);
            }
            acc
        })
        .collect();

    // Mirror cell_cell_dist exactly: per-axis gaps accumulated in axis order,
    // then a square root, so the sweep admits the same cell pairs as the
    // scanning predicate would.
    let axis_gap = |delta: i64| -> f64 {
        if delta.abs() > 1 {
            (delta.abs() - 1) as f64 * side
        } else {
            0.0
        }
    };
    let mut out = vec![0u64; cells.len()];
    // Rows appear in increasing first-coordinate order, so the rows within
    // reach of the current one form a window that only moves forward.
    let max_dp = (x / side).floor() as i64 + 2;
    let (mut plo, mut phi) = (0usize, 0usize);
    for (ri, &(rs, re)) in rows.iter().enumerate() {
        let partner_rows = if dim == 1 {
            ri..ri + 1
        } else {
            let first = sorted[rs].0[0];
            let lo_key = first.saturating_sub(max_dp);
            let hi_key = first.saturating_add(max_dp);
            while plo < rows.len() && sorted[rows[plo].0].0[0] < lo_key {
                plo += 1;
            }
            if phi < plo {
                phi = plo;
            }
            while phi < rows.len() && sorted[rows[phi].0].0[0] <= hi_key {
                phi += 1;
            }
            plo..phi
        };
        for si in partner_rows {
            let pg = if dim == 1 {
                0.0
            } else {
                axis_gap(sorted[rows[si].0].0[0] - sorted[rs].0[0])
            };
            let pg2 = pg * pg;
            // largest key offset on the last axis still within x
            let admit = |d: i64| -> bool {
                let g = axis_gap(d);
                (pg2 + g * g).sqrt() <= x
            };
            let mut dmax = ((x * x - pg2).max(0.0).sqrt() / side) as i64 + 1;
            while admit(dmax + 1) {
                dmax += 1;
            }
            while dmax >= 0 && !admit(dmax) {
                dmax -= 1;
            }
            if dmax < 0 {
                continue;
            }
            let (ss, se) = rows[si];
            let skeys = &sorted[ss..se];
            let psums = &pre[si];
            let (mut lo, mut hi) = (0usize, 0usize);
            for a in rs..re {
                let ka = sorted[a].0[dim - 1];
                let wlo = ka.saturating_sub(dmax);
                let whi = ka.saturating_add(dmax);
                while lo < skeys.len() && skeys[lo].0[dim - 1] < wlo {
                    lo += 1;
                }
                if hi < lo {
                    hi = lo;
                }
                while hi < skeys.len() && skeys[hi].0[dim - 1] <= whi {
                    hi += 1;
                }
                out[sorted[a].2 as usize] += psums[hi] - psums[lo];
            }
        }
    }
    out
}

/// Check that a point set is non-empty, has consistent dimension and
/// attribute arity, finite coordinates, and positive weights. Returns the
/// dimension.
pub fn validate_points(points: &[WeightedPoint]) -> Result<usize> {
    let first = points
        .first()
        .ok_or_else(|| Error::invalid("empty point set"))?;
    let dim = first.dim();
    if dim == 0 {
        return Err(Error::invalid("points must have at least one coordinate"));
    }
    let attr_len = first.attrs.as_ref().map(|a| a.len());
    for wp in points {
        if wp.dim() != dim {
            return Err(Error::invalid(format!(
                "mixed dimensions: {} vs {}",
                wp.dim(),
                dim
            )));
        }
        if wp.weight == 0 {
            return Err(Error::invalid("point weights must be >= 1"));
        }
        if wp.point.coords().iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("non-finite coordinate"));
        }
        if wp.attrs.as_ref().map(|a| a.len()) != attr_len {
            return Err(Error::invalid("inconsistent attribute arity"));
        }
        if let Some(attrs) = &wp.attrs {
            if attrs.iter().any(|a| !a.is_finite()) {
                return Err(Error::invalid("non-finite attribute"));
            }
        }
    }
    Ok(dim)
}

/// Merge bit-exact coincident points into single weighted points (weights and
/// attributes sum). Order of first appearance is preserved.
pub fn merge_coincident(points: &[WeightedPoint]) -> Vec<WeightedPoint> {
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut out: Vec<WeightedPoint> = Vec::new();
    for wp in points {
        let bits: Vec<u64> = wp.point.coords().iter().map(|c| c.to_bits()).collect();
        match index.get(&bits) {
            Some(&i) => {
                out[i].weight += wp.weight;
                out[i].attrs = combine_attrs(out[i].attrs.as_deref(), wp.attrs.as_deref());
            }
            None => {
                index.insert(bits, out.len());
                out.push(wp.clone());
            }
        }
    }
    out
}

/// Total weight of a point set.
pub fn total_weight(points: &[WeightedPoint]) -> u64 {
    points.iter().map(|p| p.weight).sum()
}
