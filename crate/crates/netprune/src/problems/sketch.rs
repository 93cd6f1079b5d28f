//! Problems over *sketchable families*: upward-closed point-set properties
//! testable on constant-size additive summaries.
//!
//! A sketch carries the total weight and an elementwise sum of attribute
//! vectors; combining the sketches of disjoint sets is plain addition.
//! Upward closure (a superset of a satisfying set satisfies the family) is
//! what lets grid cells, net clusters, and threshold components stand in
//! for arbitrary candidate subsets.

use std::collections::HashMap;

use super::{connectivity::connectivity_partition, dual_radius_decide, eps_phi, validate_eps};
use crate::error::{Error, Result};
use crate::framework::{self, DeciderOutcome, EpsDecider, Interval, Problem, RunTrace};
use crate::geom::{
    for_each_block_key, merge_coincident, point_cell_dist, side_for_diameter, validate_points,
    GridKey, Point, WeightedPoint,
};
use crate::hiprob::{solve_with_rule, PivotRule};
use crate::nets::{compute_net_with, NetAssignment};

/// Additive summary of a point set: total weight plus attribute sums.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sketch {
    pub weight: u64,
    pub attrs: Vec<f64>,
}

impl Sketch {
    pub fn combine(&mut self, other: &Sketch) {
        self.weight += other.weight;
        if self.attrs.len() < other.attrs.len() {
            self.attrs.resize(other.attrs.len(), 0.0);
        }
        for (a, b) in self.attrs.iter_mut().zip(&other.attrs) {
            *a += b;
        }
    }
}

/// An upward-closed family testable on combined sketches.
pub trait SketchFamily: Send + Sync {
    fn sketch_of(&self, p: &WeightedPoint) -> Sketch {
        Sketch {
            weight: p.weight,
            attrs: p.attrs.as_deref().map(<[f64]>::to_vec).unwrap_or_default(),
        }
    }

    /// Whether a set with this combined sketch satisfies the family.
    fn member(&self, s: &Sketch) -> bool;

    /// Validate that the input carries what the family reads (attribute
    /// arity, non-negative entries for monotonicity).
    fn validate_input(&self, points: &[WeightedPoint]) -> Result<()> {
        let _ = points;
        Ok(())
    }
}

/// The stock families: cardinality and weight thresholds, color coverage,
/// flagged-point presence, and conjunctions of linear attribute demands.
#[derive(Debug, Clone)]
pub enum BuiltinFamily {
    /// At least `k` units (weight counts coincident duplicates).
    AtLeastPoints { k: u64 },
    /// Total weight at least `alpha`.
    WeightAtLeast { alpha: f64 },
    /// All of the first `colors` one-hot color columns present.
    AllColors { colors: usize },
    /// At least `t` distinct colors present among the first `colors`.
    ColorsAtLeast { colors: usize, t: usize },
    /// Some point with a positive entry in `column` (e.g. a base station).
    HasFlagged { column: usize },
    /// Attribute sums meet every coordinate of `mins` (service demands).
    LinearAtLeast { mins: Vec<f64> },
}

impl BuiltinFamily {
    fn needed_attrs(&self) -> usize {
        match self {
            BuiltinFamily::AtLeastPoints { .. } | BuiltinFamily::WeightAtLeast { .. } => 0,
            BuiltinFamily::AllColors { colors } => *colors,
            BuiltinFamily::ColorsAtLeast { colors, .. } => *colors,
            BuiltinFamily::HasFlagged { column } => column + 1,
            BuiltinFamily::LinearAtLeast { mins } => mins.len(),
        }
    }
}

impl SketchFamily for BuiltinFamily {
    fn member(&self, s: &Sketch) -> bool {
        match self {
            BuiltinFamily::AtLeastPoints { k } => s.weight >= *k,
            BuiltinFamily::WeightAtLeast { alpha } => s.weight as f64 >= *alpha,
            BuiltinFamily::AllColors { colors } => {
                *colors > 0
                    && s.attrs.len() >= *colors
                    && s.attrs[..*colors].iter().all(|&v| v > 0.0)
            }
            BuiltinFamily::ColorsAtLeast { colors, t } => {
                s.attrs.len() >= *colors
                    && s.attrs[..*colors].iter().filter(|&&v| v > 0.0).count() >= *t
            }
            BuiltinFamily::HasFlagged { column } => {
                s.attrs.get(*column).copied().unwrap_or(0.0) > 0.0
            }
            BuiltinFamily::LinearAtLeast { mins } => mins
                .iter()
                .enumerate()
                .all(|(j, &min)| s.attrs.get(j).copied().unwrap_or(0.0) >= min),
        }
    }

    fn validate_input(&self, points: &[WeightedPoint]) -> Result<()> {
        let needed = self.needed_attrs();
        if needed == 0 {
            return Ok(());
        }
        for p in points {
            let attrs = p.attrs.as_deref().unwrap_or(&[]);
            if attrs.len() < needed {
                return Err(Error::invalid(format!(
                    "family reads {needed} attribute columns but a point has {}",
                    attrs.len()
                )));
            }
            if attrs.iter().any(|&v| v < 0.0) {
                return Err(Error::invalid(
                    "attribute entries must be non-negative for an upward-closed family",
                ));
            }
        }
        Ok(())
    }
}

fn combined_sketch(family: &dyn SketchFamily, points: &[WeightedPoint]) -> Sketch {
    let mut total = Sketch::default();
    for p in points {
        let s = family.sketch_of(p);
        total.combine(&s);
    }
    total
}

fn any_singleton_member(family: &dyn SketchFamily, points: &[WeightedPoint]) -> bool {
    points.iter().any(|p| family.member(&family.sketch_of(p)))
}

fn every_singleton_member(family: &dyn SketchFamily, points: &[WeightedPoint]) -> bool {
    points.iter().all(|p| family.member(&family.sketch_of(p)))
}

/// Combined sketch per cluster of a partition.
fn cluster_sketches(
    family: &dyn SketchFamily,
    points: &[WeightedPoint],
    clusters: &[Vec<u32>],
) -> Vec<Sketch> {
    clusters
        .iter()
        .map(|members| {
            let mut s = Sketch::default();
            for &i in members {
                s.combine(&family.sketch_of(&points[i as usize]));
            }
            s
        })
        .collect()
}

fn zero_trace(points: &[WeightedPoint]) -> (Interval, RunTrace) {
    let interval = Interval::new(0.0, 0.0);
    (
        interval,
        RunTrace {
            initial_points: points.len(),
            iterations: Vec::new(),
            result: interval,
        },
    )
}

// ---------------------------------------------------------------------------
// Smallest enclosing ball of a family-satisfying subset.
// ---------------------------------------------------------------------------

/// Internally the driver solves for twice the optimal radius. The doubled
/// value is what makes pruning sound: any two points of an optimal ball are
/// within `2f` of each other, so a point with no neighbor within `r > 2f`
/// cannot belong to any optimal ball.
pub struct MinBall<'a> {
    pub family: &'a dyn SketchFamily,
    pub eps: f64,
}

impl MinBall<'_> {
    /// Whether some ball of radius `(1 + eps/4) y` holds a satisfying set:
    /// every point registers in all cells within `y` of it, and a cell whose
    /// combined sketch is a member certifies a ball around the cell center
    /// of radius `y` plus the cell circumradius, which the cell diameter
    /// `eps y / 2` keeps at `(1 + eps/4) y`. Conversely an optimal center's
    /// cell collects the whole optimal subset whenever `y` reaches the
    /// optimal radius, whatever the cell size.
    ///
    /// The scatter sweeps tile by tile (a tile is `m` cells per axis, about
    /// `y` wide) so the live sketch map never exceeds one tile's cells while
    /// each point-cell registration is still handled exactly once.
    fn scatter_member(&self, y: f64, eps: f64, points: &[WeightedPoint]) -> Result<bool> {
        let dim = points[0].dim();
        let side = side_for_diameter(eps * y / 2.0, dim);
        let m = (2.0 * (dim as f64).sqrt() / eps).ceil().max(1.0) as i64;
        let tile_side = m as f64 * side;

        // Tile id -> points that can reach one of its cells (a superset; the
        // extra `side` of slack absorbs boundary rounding).
        let mut tiles: HashMap<GridKey, Vec<u32>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            for_each_block_key(p.point.coords(), y + side, tile_side, &mut |key| {
                tiles.entry(key).or_default().push(i as u32);
            });
        }

        let mut cells: HashMap<GridKey, Sketch> = HashMap::new();
        for (tile, members) in &tiles {
            cells.clear();
            for &i in members {
                let p = &points[i as usize];
                let sketch = self.family.sketch_of(p);
                let mut hit = false;
                for_each_owned_key(&p.point, y, side, tile, m, &mut |key| {
                    if !hit && point_cell_dist(&p.point, &key, side) <= y {
                        let cell = cells.entry(key).or_default();
                        cell.combine(&sketch);
                        if self.family.member(cell) {
                            hit = true;
                        }
                    }
                });
                if hit {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Invoke `f` on every fine grid key in the block `p ± r` that the given
/// tile owns, a tile owning the fine keys `tile*m ..= tile*m + m - 1` per
/// axis. Visiting cells only under their owning tile is what makes the
/// tile sweep handle each point-cell pair exactly once.
fn for_each_owned_key(
    p: &Point,
    r: f64,
    side: f64,
    tile: &GridKey,
    m: i64,
    f: &mut dyn FnMut(GridKey),
) {
    let dim = p.coords().len();
    let mut lo = GridKey::new();
    let mut hi = GridKey::new();
    for (&c, &t) in p.coords().iter().zip(tile.iter()) {
        lo.push((((c - r) / side).floor() as i64).max(t * m));
        hi.push((((c + r) / side).floor() as i64).min(t * m + m - 1));
    }
    if lo.iter().zip(hi.iter()).any(|(a, b)| a > b) {
        return;
    }
    let mut cur = lo.clone();
    loop {
        f(cur.clone());
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

impl Problem for MinBall<'_> {
    type Context = ();

    fn phi(&self) -> f64 {
        eps_phi(self.eps)
    }

    fn decide(&self, r: f64, points: &[WeightedPoint], _: &()) -> Result<DeciderOutcome> {
        dual_radius_decide(r, self.eps, |x| self.scatter_member(x / 2.0, self.eps, points))
    }

    fn prune_context(&self, _: &(), _: &[WeightedPoint]) -> Result<()> {
        Ok(())
    }
}

impl EpsDecider for MinBall<'_> {
    fn decide_eps(
        &self,
        r: f64,
        eps: f64,
        points: &[WeightedPoint],
        _: &(),
    ) -> Result<DeciderOutcome> {
        dual_radius_decide(r, eps, |x| self.scatter_member(x / 2.0, eps, points))
    }
}

/// Smallest radius of a ball (arbitrary center) containing a subset that
/// satisfies `family`, to within `1 + eps`.
pub fn min_ball(
    points: &[WeightedPoint],
    family: &dyn SketchFamily,
    eps: f64,
    seed: u64,
) -> Result<(Interval, RunTrace)> {
    min_ball_with(points, family, eps, seed, PivotRule::Sample)
}

/// [`min_ball`] under an explicit driver pivot rule.
pub fn min_ball_with(
    points: &[WeightedPoint],
    family: &dyn SketchFamily,
    eps: f64,
    seed: u64,
    rule: PivotRule,
) -> Result<(Interval, RunTrace)> {
    validate_points(points)?;
    validate_eps(eps)?;
    family.validate_input(points)?;
    let merged = merge_coincident(points);
    if !family.member(&combined_sketch(family, &merged)) {
        return Err(Error::infeasible("no subset satisfies the family"));
    }
    if any_singleton_member(family, &merged) {
        return Ok(zero_trace(&merged));
    }
    let problem = MinBall { family, eps };
    let (doubled, trace) = solve_with_rule(&problem, &merged, (), seed, rule)?;
    let doubled = framework::refine_eps(&problem, &merged, &(), doubled, eps)?;
    Ok((Interval::new(doubled.lo / 2.0, doubled.hi / 2.0), trace))
}

// ---------------------------------------------------------------------------
// Smallest radius with a family-satisfying connected component.
// ---------------------------------------------------------------------------

pub struct MinComponent<'a> {
    pub family: &'a dyn SketchFamily,
    pub eps: f64,
}

impl MinComponent<'_> {
    fn test(&self, x: f64, eps: f64, points: &[WeightedPoint]) -> Result<bool> {
        let partition = connectivity_partition(points, x, eps / 4.0)?;
        let sketches = cluster_sketches(self.family, points, &partition.clusters);
        Ok(sketches.iter().any(|s| self.family.member(s)))
    }
}

impl Problem for MinComponent<'_> {
    type Context = ();

    fn phi(&self) -> f64 {
        eps_phi(self.eps)
    }

    fn decide(&self, r: f64, points: &[WeightedPoint], _: &()) -> Result<DeciderOutcome> {
        dual_radius_decide(r, self.eps, |x| self.test(x, self.eps, points))
    }

    fn prune_context(&self, _: &(), _: &[WeightedPoint]) -> Result<()> {
        // valid because no singleton satisfies the family (screened): a far
        // point can neither form nor complete a satisfying component below
        // the certified radius
        Ok(())
    }
}

impl EpsDecider for MinComponent<'_> {
    fn decide_eps(
        &self,
        r: f64,
        eps: f64,
        points: &[WeightedPoint],
        _: &(),
    ) -> Result<DeciderOutcome> {
        dual_radius_decide(r, eps, |x| self.test(x, eps, points))
    }
}

/// Smallest `r` such that some component of the distance-`r` graph
/// satisfies `family`, to within `1 + eps`.
pub fn min_component(
    points: &[WeightedPoint],
    family: &dyn SketchFamily,
    eps: f64,
    seed: u64,
) -> Result<(Interval, RunTrace)> {
    min_component_with(points, family, eps, seed, PivotRule::Sample)
}

/// [`min_component`] under an explicit driver pivot rule.
pub fn min_component_with(
    points: &[WeightedPoint],
    family: &dyn SketchFamily,
    eps: f64,
    seed: u64,
    rule: PivotRule,
) -> Result<(Interval, RunTrace)> {
    validate_points(points)?;
    validate_eps(eps)?;
    family.validate_input(points)?;
    let merged = merge_coincident(points);
    if !family.member(&combined_sketch(family, &merged)) {
        return Err(Error::infeasible("no component can satisfy the family"));
    }
    if any_singleton_member(family, &merged) {
        return Ok(zero_trace(&merged));
    }
    let problem = MinComponent { family, eps };
    let (interval, trace) = solve_with_rule(&problem, &merged, (), seed, rule)?;
    let refined = framework::refine_eps(&problem, &merged, &(), interval, eps)?;
    Ok((refined, trace))
}

// ---------------------------------------------------------------------------
// Min-max clustering under the centered-ball radius.
// ---------------------------------------------------------------------------

/// Partition the points into family-satisfying clusters minimizing the
/// largest cluster radius, where a cluster's radius is that of the smallest
/// ball centered at one of its own points and enclosing it.
pub struct MinMaxCluster<'a> {
    pub family: &'a dyn SketchFamily,
}

impl MinMaxCluster<'_> {
    /// Whether clustering by nearest net point at radius `4y` satisfies the
    /// family everywhere. True whenever `y` reaches the optimal value: each
    /// optimal cluster (diameter at most `2y`) is swallowed whole by its
    /// nearest net point, which no other net point can contest at spacing
    /// `4y`. A true answer realizes a cover of radius at most `4y`.
    fn net_cover_member(&self, y: f64, points: &[WeightedPoint]) -> Result<bool> {
        let net = compute_net_with(points, 4.0 * y, NetAssignment::Nearest)?;
        let mut sketches: Vec<Sketch> = vec![Sketch::default(); net.points.len()];
        for (i, p) in points.iter().enumerate() {
            sketches[net.assignment[i] as usize].combine(&self.family.sketch_of(p));
        }
        Ok(sketches.iter().all(|s| self.family.member(s)))
    }
}

impl Problem for MinMaxCluster<'_> {
    type Context = ();

    fn phi(&self) -> f64 {
        20.0
    }

    fn decide(&self, r: f64, points: &[WeightedPoint], _: &()) -> Result<DeciderOutcome> {
        if self.net_cover_member(r / 5.0, points)? {
            // a cover of radius 4r/5 < r exists
            return Ok(DeciderOutcome::Below);
        }
        if self.net_cover_member(r, points)? {
            return Ok(DeciderOutcome::Bounded {
                lo: r / 5.0,
                hi: 4.0 * r,
            });
        }
        Ok(DeciderOutcome::Above)
    }

    fn prune_context(&self, _: &(), far: &[WeightedPoint]) -> Result<()> {
        // an isolated far point must stand as its own cluster in any optimal
        // solution below the certified radius
        for p in far {
            if !self.family.member(&self.family.sketch_of(p)) {
                return Err(Error::contract(
                    "pruned a far point whose singleton cluster violates the family",
                ));
            }
        }
        Ok(())
    }
}

/// A clustering certificate: the approximated optimal value and the cluster
/// id assigned to each merged input point.
#[derive(Debug, Clone)]
pub struct ClusteringResult {
    pub value: f64,
    pub assignment: Vec<u32>,
    pub trace: RunTrace,
}

/// `(4 + eps)`-approximate min-max clustering under the centered-ball
/// radius, returning a realizing cluster assignment.
pub fn minmax_cluster(
    points: &[WeightedPoint],
    family: &dyn SketchFamily,
    eps: f64,
    seed: u64,
) -> Result<ClusteringResult> {
    minmax_cluster_with(points, family, eps, seed, PivotRule::Sample)
}

/// [`minmax_cluster`] under an explicit driver pivot rule.
pub fn minmax_cluster_with(
    points: &[WeightedPoint],
    family: &dyn SketchFamily,
    eps: f64,
    seed: u64,
    rule: PivotRule,
) -> Result<ClusteringResult> {
    validate_points(points)?;
    validate_eps(eps)?;
    family.validate_input(points)?;
    let merged = merge_coincident(points);
    if !family.member(&combined_sketch(family, &merged)) {
        return Err(Error::infeasible("the whole set violates the family"));
    }
    if every_singleton_member(family, &merged) {
        let (_, trace) = zero_trace(&merged);
        return Ok(ClusteringResult {
            value: 0.0,
            assignment: (0..merged.len() as u32).collect(),
            trace,
        });
    }
    let problem = MinMaxCluster { family };
    let (interval, trace) = solve_with_rule(&problem, &merged, (), seed, rule)?;

    // Bisect the net-cover test down to a (1 + eps/4) bracket. The lower
    // end is certified false a priori: a true answer at y implies an
    // optimal value of at most 4y.
    let mut known_false = interval.lo / 4.0 * 0.999;
    let mut known_true = interval.hi;
    for _ in 0..96 {
        if known_true / known_false <= 1.0 + eps / 4.0 {
            break;
        }
        let mid = (known_false * known_true).sqrt();
        if mid <= known_false || mid >= known_true {
            break;
        }
        if problem.net_cover_member(mid, &merged)? {
            known_true = mid;
        } else {
            known_false = mid;
        }
    }
    let value = 4.0 * known_true;
    let net = compute_net_with(&merged, 4.0 * known_true, NetAssignment::Nearest)?;
    Ok(ClusteringResult {
        value,
        assignment: net.assignment,
        trace,
    })
}

// ---------------------------------------------------------------------------
// Connected clustering: every threshold component must satisfy the family.
// ---------------------------------------------------------------------------

/// Smallest `r` admitting a partition into family-satisfying clusters, each
/// confined to one component of the distance-`r` graph. By upward closure
/// this is the smallest `r` at which *every* component satisfies the family.
pub struct ConnectedCluster<'a> {
    pub family: &'a dyn SketchFamily,
    pub eps: f64,
}

impl ConnectedCluster<'_> {
    fn test(&self, x: f64, eps: f64, points: &[WeightedPoint]) -> Result<bool> {
        let partition = connectivity_partition(points, x, eps / 4.0)?;
        let sketches = cluster_sketches(self.family, points, &partition.clusters);
        Ok(sketches.iter().all(|s| self.family.member(s)))
    }
}

impl Problem for ConnectedCluster<'_> {
    type Context = ();

    fn phi(&self) -> f64 {
        eps_phi(self.eps)
    }

    fn decide(&self, r: f64, points: &[WeightedPoint], _: &()) -> Result<DeciderOutcome> {
        dual_radius_decide(r, self.eps, |x| self.test(x, self.eps, points))
    }

    fn prune_context(&self, _: &(), far: &[WeightedPoint]) -> Result<()> {
        // below the certified radius a far point is its own component, so it
        // must satisfy the family alone; otherwise the decider misjudged
        for p in far {
            if !self.family.member(&self.family.sketch_of(p)) {
                return Err(Error::contract(
                    "pruned a far point that cannot stand as its own cluster",
                ));
            }
        }
        Ok(())
    }
}

impl EpsDecider for ConnectedCluster<'_> {
    fn decide_eps(
        &self,
        r: f64,
        eps: f64,
        points: &[WeightedPoint],
        _: &(),
    ) -> Result<DeciderOutcome> {
        dual_radius_decide(r, eps, |x| self.test(x, eps, points))
    }
}

/// Smallest radius of a connected clustering, to within `1 + eps`.
pub fn connected_cluster(
    points: &[WeightedPoint],
    family: &dyn SketchFamily,
    eps: f64,
    seed: u64,
) -> Result<(Interval, RunTrace)> {
    connected_cluster_with(points, family, eps, seed, PivotRule::Sample)
}

/// [`connected_cluster`] under an explicit driver pivot rule.
pub fn connected_cluster_with(
    points: &[WeightedPoint],
    family: &dyn SketchFamily,
    eps: f64,
    seed: u64,
    rule: PivotRule,
) -> Result<(Interval, RunTrace)> {
    validate_points(points)?;
    validate_eps(eps)?;
    family.validate_input(points)?;
    let merged = merge_coincident(points);
    if !family.member(&combined_sketch(family, &merged)) {
        return Err(Error::infeasible(
            "even a single all-covering cluster violates the family",
        ));
    }
    if every_singleton_member(family, &merged) {
        return Ok(zero_trace(&merged));
    }
    let problem = ConnectedCluster { family, eps };
    let (interval, trace) = solve_with_rule(&problem, &merged, (), seed, rule)?;
    let refined = framework::refine_eps(&problem, &merged, &(), interval, eps)?;
    Ok((refined, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn wpt(coords: &[f64]) -> WeightedPoint {
        WeightedPoint::unit(Point::new(coords))
    }

    fn with_attrs(coords: &[f64], attrs: &[f64]) -> WeightedPoint {
        let mut p = wpt(coords);
        p.attrs = Some(attrs.to_vec().into_boxed_slice());
        p
    }

    #[test]
    fn sketch_combination_is_additive() {
        let family = BuiltinFamily::AllColors { colors: 2 };
        let a = family.sketch_of(&with_attrs(&[0.0], &[1.0, 0.0]));
        let b = family.sketch_of(&with_attrs(&[1.0], &[0.0, 1.0]));
        assert!(!family.member(&a));
        assert!(!family.member(&b));
        let mut ab = a.clone();
        ab.combine(&b);
        assert!(family.member(&ab));
        assert_eq!(ab.weight, 2);
    }

    #[test]
    fn families_are_upward_closed_under_random_additions() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let families: Vec<BuiltinFamily> = vec![
            BuiltinFamily::AtLeastPoints { k: 3 },
            BuiltinFamily::WeightAtLeast { alpha: 2.5 },
            BuiltinFamily::AllColors { colors: 3 },
            BuiltinFamily::ColorsAtLeast { colors: 3, t: 2 },
            BuiltinFamily::HasFlagged { column: 1 },
            BuiltinFamily::LinearAtLeast {
                mins: vec![2.0, 1.0, 0.5],
            },
        ];
        for _ in 0..200 {
            let family = &families[rng.gen_range(0..families.len())];
            let mut sketch = Sketch::default();
            let mut was_member = false;
            for _ in 0..12 {
                let attrs: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..1.5)).collect();
                let p = with_attrs(&[rng.gen::<f64>()], &attrs);
                sketch.combine(&family.sketch_of(&p));
                let now = family.member(&sketch);
                assert!(now || !was_member, "membership must never flip off");
                was_member = now;
            }
        }
    }

    #[test]
    fn min_ball_finds_a_tight_five_point_cluster() {
        let mut pts: Vec<WeightedPoint> = (0..5)
            .map(|i| wpt(&[0.02 * i as f64, 0.0]))
            .collect();
        pts.push(wpt(&[50.0, 0.0]));
        pts.push(wpt(&[-40.0, 30.0]));
        pts.push(wpt(&[10.0, -90.0]));
        let family = BuiltinFamily::AtLeastPoints { k: 5 };
        let (interval, _) = min_ball(&pts, &family, 0.25, 3).unwrap();
        // the five tight points span 0.08, so the optimal radius is 0.04
        assert!(interval.contains(0.04), "{interval:?}");
        assert!(interval.spread() <= 1.2500001);
    }

    #[test]
    fn min_ball_with_all_colors_matches_the_exhaustive_oracle() {
        // equilateral-ish triangle, one point per color, plus duplicates of
        // existing colors closer together
        let pts = vec![
            with_attrs(&[0.0, 0.0], &[1.0, 0.0, 0.0]),
            with_attrs(&[1.0, 0.0], &[0.0, 1.0, 0.0]),
            with_attrs(&[0.5, 0.866], &[0.0, 0.0, 1.0]),
            with_attrs(&[0.1, 0.05], &[0.0, 1.0, 0.0]),
        ];
        let family = BuiltinFamily::AllColors { colors: 3 };
        let member = |idx: &[usize]| -> bool {
            let mut s = Sketch::default();
            for &i in idx {
                s.combine(&family.sketch_of(&pts[i]));
            }
            family.member(&s)
        };
        let opt = oracle::min_ball_opt(&pts, &member).unwrap();
        let (interval, _) = min_ball(&pts, &family, 0.2, 7).unwrap();
        assert!(
            interval.lo <= opt * 1.0000001 && opt <= interval.hi * 1.0000001,
            "opt={opt} interval={interval:?}"
        );
        assert!(interval.spread() <= 1.2000001);
    }

    #[test]
    fn min_ball_zero_screen_on_trivial_family() {
        let pts = vec![wpt(&[0.0]), wpt(&[9.0])];
        let family = BuiltinFamily::AtLeastPoints { k: 1 };
        let (interval, _) = min_ball(&pts, &family, 0.5, 1).unwrap();
        assert_eq!(interval.hi, 0.0);
    }

    #[test]
    fn min_component_needs_a_triple() {
        // pair at spacing 1, triple at spacing 2: the triple connects at 2
        let pts = vec![
            wpt(&[0.0]),
            wpt(&[1.0]),
            wpt(&[50.0]),
            wpt(&[52.0]),
            wpt(&[54.0]),
        ];
        let family = BuiltinFamily::AtLeastPoints { k: 3 };
        let (interval, _) = min_component(&pts, &family, 0.3, 5).unwrap();
        assert!(
            interval.lo <= 2.0 * 1.0000001 && 2.0 <= interval.hi * 1.0000001,
            "{interval:?}"
        );
        assert!(interval.spread() <= 1.3000001);
    }

    #[test]
    fn min_component_bottleneck_between_two_stations() {
        // two flagged endpoints joined by a path; the component containing
        // both first appears at the bottleneck edge length 4
        let pts = vec![
            with_attrs(&[0.0], &[1.0, 0.0]),
            with_attrs(&[1.5], &[0.0, 0.0]),
            with_attrs(&[5.5], &[0.0, 0.0]),
            with_attrs(&[7.0], &[0.0, 1.0]),
        ];
        let family = BuiltinFamily::LinearAtLeast {
            mins: vec![1.0, 1.0],
        };
        let member = |idx: &[usize]| -> bool {
            let mut s = Sketch::default();
            for &i in idx {
                s.combine(&family.sketch_of(&pts[i]));
            }
            family.member(&s)
        };
        let opt = oracle::min_component_opt(&pts, &member).unwrap();
        assert_eq!(opt, 4.0);
        let (interval, _) = min_component(&pts, &family, 0.2, 11).unwrap();
        assert!(
            interval.lo <= opt * 1.0000001 && opt <= interval.hi * 1.0000001,
            "{interval:?}"
        );
    }

    #[test]
    fn minmax_cluster_on_separated_pairs() {
        // three pairs with spacings 1, 2, 3: optimal value 3 (centered radius
        // of a pair is its spacing)
        let pts = vec![
            wpt(&[0.0]),
            wpt(&[1.0]),
            wpt(&[100.0]),
            wpt(&[102.0]),
            wpt(&[200.0]),
            wpt(&[203.0]),
        ];
        let family = BuiltinFamily::AtLeastPoints { k: 2 };
        let result = minmax_cluster(&pts, &family, 0.5, 13).unwrap();
        assert!(
            result.value >= 3.0 - 1e-9 && result.value <= 3.0 * 4.5 + 1e-9,
            "value={}",
            result.value
        );
        // the assignment must respect the family
        let mut counts: HashMap<u32, u64> = HashMap::new();
        for (i, &c) in result.assignment.iter().enumerate() {
            *counts.entry(c).or_default() += pts[i].weight;
        }
        assert!(counts.values().all(|&w| w >= 2), "{counts:?}");
    }

    #[test]
    fn minmax_cluster_stays_within_factor_on_random_instances() {
        for seed in 0..12u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(600 + seed);
            let n = 4 + (seed as usize % 5);
            let pts: Vec<WeightedPoint> = (0..n)
                .map(|_| wpt(&[rng.gen_range(0.0..20.0), rng.gen_range(0.0..20.0)]))
                .collect();
            let family = BuiltinFamily::AtLeastPoints { k: 2 };
            let member = |idx: &[usize]| -> bool {
                idx.iter().map(|&i| pts[i].weight).sum::<u64>() >= 2
            };
            let opt = oracle::minmax_cluster_opt(&pts, &member).unwrap();
            if opt == 0.0 {
                continue;
            }
            let eps = 0.5;
            let result = minmax_cluster(&pts, &family, eps, seed).unwrap();
            assert!(
                result.value >= opt - 1e-9 && result.value <= (4.0 + eps) * opt * 1.0000001,
                "seed={seed} value={} opt={opt}",
                result.value
            );
        }
    }

    #[test]
    fn minmax_zero_screen_when_singletons_satisfy() {
        let pts = vec![wpt(&[0.0]), wpt(&[5.0])];
        let family = BuiltinFamily::AtLeastPoints { k: 1 };
        let result = minmax_cluster(&pts, &family, 0.5, 2).unwrap();
        assert_eq!(result.value, 0.0);
        assert_eq!(result.assignment, vec![0, 1]);
    }

    #[test]
    fn connected_cluster_reaches_every_base_station() {
        // stations at 0 and 100, plain nodes at 3, 6, 97: every component
        // needs a station, first satisfied at radius 3
        let pts = vec![
            with_attrs(&[0.0], &[1.0]),
            with_attrs(&[3.0], &[0.0]),
            with_attrs(&[6.0], &[0.0]),
            with_attrs(&[97.0], &[0.0]),
            with_attrs(&[100.0], &[1.0]),
        ];
        let family = BuiltinFamily::HasFlagged { column: 0 };
        let (interval, _) = connected_cluster(&pts, &family, 0.2, 17).unwrap();
        assert!(
            interval.lo <= 3.0 * 1.0000001 && 3.0 <= interval.hi * 1.0000001,
            "{interval:?}"
        );
        assert!(interval.spread() <= 1.2000001);
    }

    #[test]
    fn connected_cluster_all_flagged_is_zero() {
        let pts = vec![with_attrs(&[0.0], &[1.0]), with_attrs(&[9.0], &[2.0])];
        let family = BuiltinFamily::HasFlagged { column: 0 };
        let (interval, _) = connected_cluster(&pts, &family, 0.5, 1).unwrap();
        assert_eq!(interval.hi, 0.0);
    }

    #[test]
    fn connected_cluster_matches_sweep_oracle() {
        for seed in 0..10u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(800 + seed);
            let pts: Vec<WeightedPoint> = (0..5)
                .map(|_| wpt(&[rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)]))
                .collect();
            let family = BuiltinFamily::AtLeastPoints { k: 2 };
            let member = |idx: &[usize]| -> bool {
                idx.iter().map(|&i| pts[i].weight).sum::<u64>() >= 2
            };
            let opt = oracle::connected_cluster_opt(&pts, &member).unwrap();
            if opt == 0.0 {
                continue;
            }
            let eps = 0.3;
            let (interval, _) = connected_cluster(&pts, &family, eps, seed).unwrap();
            assert!(
                interval.lo <= opt * 1.0000001 && opt <= interval.hi * 1.0000001,
                "seed={seed} opt={opt} interval={interval:?}"
            );
            assert!(interval.spread() <= 1.0 + eps + 1e-9);
        }
    }

    #[test]
    fn infeasible_family_is_reported() {
        let pts = vec![wpt(&[0.0]), wpt(&[1.0])];
        let family = BuiltinFamily::AtLeastPoints { k: 5 };
        assert!(matches!(
            min_ball(&pts, &family, 0.5, 1),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            minmax_cluster(&pts, &family, 0.5, 1),
            Err(Error::Infeasible(_))
        ));
    }
}
