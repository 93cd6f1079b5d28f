//! Concrete distance problems: deciders, prune rules, and end-to-end
//! solvers built on the framework driver.
//!
//! Most approximate deciders here share one pattern. A problem supplies a
//! monotone *test* `A(x)` with a one-sided error guarantee:
//!
//! - `A(x)` true implies `f <= (1 + eps/4) * x`,
//! - `A(x)` false implies `f > x`,
//! - `x >= f` implies `A(x)` is true.
//!
//! Evaluating the test at `x = r / (1 + eps/3)` and at `x = r` then yields a
//! sound three-way answer whose `Bounded` case has spread
//! `(1 + eps/4)(1 + eps/3) <= 1 + eps` for `eps <= 5`. Because the upper
//! slack `1 + eps/4` is strictly smaller than the query gap `1 + eps/3`, a
//! `Below` answer certifies `f < r` strictly, which the driver's prune step
//! relies on.

pub mod connectivity;
pub mod kcenter;
pub mod nonzero;
pub mod rank;
pub mod sketch;

pub use connectivity::{
    connectivity_partition, mst_kth_longest, mst_kth_longest_with, mst_kth_shortest,
    mst_kth_shortest_with, MstKthEdge, Partition,
};
pub use kcenter::{kcenter_2approx, kcenter_2approx_with, KCenter, KCenterContext};
pub use nonzero::{
    closest_pair, closest_pair_with, smallest_nonzero_distance, smallest_nonzero_distance_with,
};
pub use rank::{
    exact_kth_nn, exact_kth_nn_with, furthest_nn, furthest_nn_with, kth_distance,
    kth_distance_with, kth_mnn, kth_mnn_with, KthDist, KthMnn, RankContext,
};
pub use sketch::{
    connected_cluster, connected_cluster_with, min_ball, min_ball_with, min_component,
    min_component_with, minmax_cluster, minmax_cluster_with, BuiltinFamily, ClusteringResult,
    ConnectedCluster, MinBall, MinComponent, MinMaxCluster, Sketch, SketchFamily,
};

use crate::error::{Error, Result};
use crate::framework::DeciderOutcome;

pub(crate) fn validate_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 && eps <= 5.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("eps must be in (0, 5], got {eps}")))
    }
}

/// Spread of the `Bounded` answers produced by [`dual_radius_decide`].
pub(crate) fn eps_phi(eps: f64) -> f64 {
    (1.0 + eps / 4.0) * (1.0 + eps / 3.0)
}

/// Run the shared dual-radius pattern over a problem's test predicate.
/// `test(x)` must satisfy the contract described in the module docs.
pub(crate) fn dual_radius_decide(
    r: f64,
    eps: f64,
    mut test: impl FnMut(f64) -> Result<bool>,
) -> Result<DeciderOutcome> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid(format!("query radius must be positive, got {r}")));
    }
    validate_eps(eps)?;
    let w = 1.0 + eps / 3.0;
    if test(r / w)? {
        // f <= (1 + eps/4) r / (1 + eps/3) < r
        return Ok(DeciderOutcome::Below);
    }
    if test(r)? {
        // f > r/w from the failed first test, f <= (1 + eps/4) r from this one
        return Ok(DeciderOutcome::Bounded {
            lo: r / w,
            hi: (1.0 + eps / 4.0) * r,
        });
    }
    Ok(DeciderOutcome::Above)
}
