//! Command-line front end for the netprune library: point-file ingestion,
//! problem selection, seeded runs with JSON reports, synthetic data
//! generation, and a brute-force oracle mode for verification.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use netprune::datagen;
use netprune::geom::{merge_coincident, WeightedPoint};
use netprune::hiprob::{HpConstants, PivotRule};
use netprune::oracle;
use netprune::problems::{self, BuiltinFamily, Sketch, SketchFamily};
use netprune::Error;

use input::PointFile;
use report::{Params, Report};

/// A diagnostic plus its exit code: usage 2, input 3, infeasible 4,
/// internal contract violation 5. (Flag parse errors exit 2 via clap.)
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(String),
    Infeasible(String),
    Contract(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InvalidInput(m) => Failure::Input(format!("invalid input: {m}")),
            Error::Infeasible(m) => Failure::Infeasible(format!("infeasible: {m}")),
            Error::Contract(m) => Failure::Contract(format!("contract violation: {m}")),
        }
    }
}

/// Distance problems on point sets in expected linear time, with exact
/// brute-force oracles for cross-checking.
#[derive(Parser)]
#[command(name = "netprune", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Discrete k-center: cover with k input-point centers, radius at most twice optimal
    Kcenter(ProblemArgs),
    /// k-th smallest pairwise distance, within 1+eps
    KthDist(ProblemArgs),
    /// k-th smallest m-th nearest-neighbor distance, within 1+eps
    KthMnn(ProblemArgs),
    /// Exact k-th smallest nearest-neighbor distance
    KnnExact(ProblemArgs),
    /// Exact largest nearest-neighbor distance
    FurthestNn(ProblemArgs),
    /// k-th longest edge of the Euclidean minimum spanning tree, within 1+eps
    MstKthEdge(ProblemArgs),
    /// Smallest ball containing a family-satisfying subset, within 1+eps
    MinBall(ProblemArgs),
    /// Smallest radius with a family-satisfying threshold component, within 1+eps
    MinComponent(ProblemArgs),
    /// Family-satisfying clustering minimizing the largest centered radius, within 4+eps
    MinmaxCluster(ProblemArgs),
    /// Smallest radius whose threshold components all satisfy the family, within 1+eps
    ConnectedCluster(ProblemArgs),
    /// Exact closest pair of distinct locations
    ClosestPair(ProblemArgs),
    /// Exact smallest nonzero pairwise distance
    NonzeroDist(ProblemArgs),
    /// Write a seeded synthetic point file
    Gen(GenArgs),
    /// Exact reference answers by quadratic or exhaustive computation
    Oracle(OracleArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// Input point file; `-` reads standard input
    file: String,
    /// Rank, center budget, or family size, depending on the subcommand
    #[arg(long)]
    k: Option<u64>,
    /// Neighbor order for kth-mnn (default 1)
    #[arg(long)]
    m: Option<u64>,
    /// Approximation parameter in (0, 5] (default 0.1)
    #[arg(long)]
    eps: Option<f64>,
    /// Sketch family: at-least-points | weight-at-least | all-colors |
    /// colors-at-least | has-flagged
    #[arg(long)]
    family: Option<String>,
    /// Weight threshold for --family weight-at-least
    #[arg(long)]
    alpha: Option<f64>,
    /// Distinct-color threshold for --family colors-at-least
    #[arg(long)]
    colors_min: Option<u64>,
    /// RNG seed; a fixed seed reproduces value and interval bit for bit
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Drive pivot selection through the high-probability middle
    /// nearest-neighbor estimator instead of a single random sample
    #[arg(long)]
    hp: bool,
    /// Embed the full driver trace in the report
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct GenArgs {
    /// uniform-box | gaussian-mixture | tight-pairs | lattice | multiset-duplicates
    distribution: String,
    /// Number of points (tight-pairs needs an even count; lattice rounds
    /// to the nearest full grid)
    #[arg(long)]
    n: usize,
    /// Dimension
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Box extent / spread of mixture centers and duplicate locations
    #[arg(long, default_value_t = 1000.0)]
    extent: f64,
    /// Intra-pair spacing for tight-pairs
    #[arg(long, default_value_t = 1e-3)]
    gap: f64,
    /// Mixture components for gaussian-mixture
    #[arg(long, default_value_t = 5)]
    centers: usize,
    /// Component standard deviation for gaussian-mixture
    #[arg(long, default_value_t = 10.0)]
    sigma: f64,
    /// Largest multiplicity for multiset-duplicates
    #[arg(long, default_value_t = 3)]
    max_copies: u64,
    /// Output file (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Problem to answer exactly; same names as the top-level subcommands
    problem: String,
    /// Input point file; `-` reads standard input
    file: String,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    colors_min: Option<u64>,
    /// Input-size guard: quadratic oracles default to 2000 points,
    /// exhaustive ones (kcenter, min-ball, minmax-cluster) to 10
    #[arg(long)]
    cap: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Kcenter(a) => run_problem("kcenter", a),
        Cmd::KthDist(a) => run_problem("kth-dist", a),
        Cmd::KthMnn(a) => run_problem("kth-mnn", a),
        Cmd::KnnExact(a) => run_problem("knn-exact", a),
        Cmd::FurthestNn(a) => run_problem("furthest-nn", a),
        Cmd::MstKthEdge(a) => run_problem("mst-kth-edge", a),
        Cmd::MinBall(a) => run_problem("min-ball", a),
        Cmd::MinComponent(a) => run_problem("min-component", a),
        Cmd::MinmaxCluster(a) => run_problem("minmax-cluster", a),
        Cmd::ConnectedCluster(a) => run_problem("connected-cluster", a),
        Cmd::ClosestPair(a) => run_problem("closest-pair", a),
        Cmd::NonzeroDist(a) => run_problem("nonzero-dist", a),
        Cmd::Gen(a) => run_gen(a),
        Cmd::Oracle(a) => run_oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (2, m),
                Failure::Input(m) => (3, m),
                Failure::Infeasible(m) => (4, m),
                Failure::Contract(m) => (5, m),
            };
            eprintln!("netprune: {msg}");
            ExitCode::from(code)
        }
    }
}

fn need_k(a: &ProblemArgs, name: &str) -> Result<u64, Failure> {
    a.k.ok_or_else(|| Failure::Usage(format!("{name} requires --k")))
}

fn params_of(a: &ProblemArgs) -> Params {
    Params {
        k: a.k,
        m: a.m,
        eps: a.eps,
        family: a.family.clone(),
        alpha: a.alpha,
        colors_min: a.colors_min,
        hp: Some(a.hp),
    }
}

/// Resolve `--family` plus its parameter flags against the file's columns.
fn build_family(
    name: Option<&str>,
    k: Option<u64>,
    alpha: Option<f64>,
    colors_min: Option<u64>,
    file: &PointFile,
    problem: &str,
) -> Result<BuiltinFamily, Failure> {
    let name = name.ok_or_else(|| Failure::Usage(format!("{problem} requires --family")))?;
    match name {
        "at-least-points" => {
            let k =
                k.ok_or_else(|| Failure::Usage("--family at-least-points requires --k".into()))?;
            Ok(BuiltinFamily::AtLeastPoints { k })
        }
        "weight-at-least" => {
            let alpha = alpha
                .ok_or_else(|| Failure::Usage("--family weight-at-least requires --alpha".into()))?;
            Ok(BuiltinFamily::WeightAtLeast { alpha })
        }
        "all-colors" => {
            if file.colors == 0 {
                return Err(Failure::Input(
                    "--family all-colors needs a color column in the point file".into(),
                ));
            }
            Ok(BuiltinFamily::AllColors {
                colors: file.colors,
            })
        }
        "colors-at-least" => {
            if file.colors == 0 {
                return Err(Failure::Input(
                    "--family colors-at-least needs a color column in the point file".into(),
                ));
            }
            let t = colors_min.ok_or_else(|| {
                Failure::Usage("--family colors-at-least requires --colors-min".into())
            })?;
            Ok(BuiltinFamily::ColorsAtLeast {
                colors: file.colors,
                t: t as usize,
            })
        }
        "has-flagged" => {
            if file.flags == 0 {
                return Err(Failure::Input(
                    "--family has-flagged needs a flag column in the point file".into(),
                ));
            }
            // the first flag column sits right after the one-hot color block
            Ok(BuiltinFamily::HasFlagged { column: file.colors })
        }
        other => Err(Failure::Usage(format!(
            "unknown family '{other}' (expected at-least-points, weight-at-least, \
             all-colors, colors-at-least, or has-flagged)"
        ))),
    }
}

fn run_problem(name: &'static str, a: &ProblemArgs) -> Result<(), Failure> {
    let file = input::read_point_file(&a.file)?;
    let pts = &file.points;
    let rule = if a.hp {
        PivotRule::MidNn(HpConstants::default())
    } else {
        PivotRule::Sample
    };
    let eps = a.eps.unwrap_or(0.1);
    let mut report = Report::new(name, "solve", pts.len(), params_of(a));
    report.seed = Some(a.seed);
    let start = Instant::now();

    match name {
        "kcenter" => {
            let k = need_k(a, name)?;
            let (radius, centers) = problems::kcenter_2approx_with(pts, k, a.seed, rule)?;
            report.value = Some(radius);
            report.centers = Some(centers.len());
            if radius == 0.0 {
                report.note =
                    Some("zero radius: the center budget covers every distinct location".into());
            }
        }
        "kth-dist" => {
            let k = need_k(a, name)?;
            report.params.eps = Some(eps);
            let (interval, trace) =
                problems::kth_distance_with(pts, k as u128, eps, a.seed, rule)?;
            report.set_interval(interval);
            report.absorb_trace(trace, a.trace);
        }
        "kth-mnn" => {
            let k = need_k(a, name)?;
            let m = a.m.unwrap_or(1);
            report.params.eps = Some(eps);
            report.params.m = Some(m);
            let (interval, trace) =
                problems::kth_mnn_with(pts, k as u128, m, eps, a.seed, rule)?;
            report.set_interval(interval);
            report.absorb_trace(trace, a.trace);
        }
        "knn-exact" => {
            let k = need_k(a, name)?;
            report.value = Some(problems::exact_kth_nn_with(pts, k, a.seed, rule)?);
        }
        "furthest-nn" => {
            report.value = Some(problems::furthest_nn_with(pts, a.seed, rule)?);
        }
        "mst-kth-edge" => {
            let k = need_k(a, name)?;
            report.params.eps = Some(eps);
            let (interval, trace) = problems::mst_kth_longest_with(pts, k, eps, a.seed, rule)?;
            report.set_interval(interval);
            report.absorb_trace(trace, a.trace);
        }
        "min-ball" | "min-component" | "connected-cluster" => {
            let family = build_family(a.family.as_deref(), a.k, a.alpha, a.colors_min, &file, name)?;
            report.params.eps = Some(eps);
            let run = match name {
                "min-ball" => problems::min_ball_with,
                "min-component" => problems::min_component_with,
                _ => problems::connected_cluster_with,
            };
            let (interval, trace) = run(pts, &family, eps, a.seed, rule)?;
            report.set_interval(interval);
            report.absorb_trace(trace, a.trace);
        }
        "minmax-cluster" => {
            let family = build_family(a.family.as_deref(), a.k, a.alpha, a.colors_min, &file, name)?;
            report.params.eps = Some(eps);
            let clustering = problems::minmax_cluster_with(pts, &family, eps, a.seed, rule)?;
            report.value = Some(clustering.value);
            let mut ids: Vec<u32> = clustering.assignment.clone();
            ids.sort_unstable();
            ids.dedup();
            report.clusters = Some(ids.len());
            report.absorb_trace(clustering.trace, a.trace);
        }
        "closest-pair" => {
            let (d, (p, q)) = problems::closest_pair_with(pts, a.seed, rule)?;
            report.value = Some(d);
            report.pair = Some([p.coords().to_vec(), q.coords().to_vec()]);
        }
        "nonzero-dist" => {
            report.value = Some(problems::smallest_nonzero_distance_with(pts, a.seed, rule)?);
        }
        _ => unreachable!("subcommand list is fixed"),
    }

    if a.trace && report.trace.is_none() {
        let msg = "this subcommand returns a plain value and surfaces no driver trace";
        report.note = Some(match report.note.take() {
            Some(n) => format!("{n}; {msg}"),
            None => msg.to_string(),
        });
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    report.print();
    Ok(())
}

fn run_gen(a: &GenArgs) -> Result<(), Failure> {
    if a.n == 0 || a.d == 0 {
        return Err(Failure::Usage("gen needs --n and --d at least 1".into()));
    }
    if !(a.extent > 0.0 && a.extent.is_finite()) {
        return Err(Failure::Usage("--extent must be positive".into()));
    }
    let pts = match a.distribution.as_str() {
        "uniform-box" => datagen::uniform_box(a.n, a.d, a.extent, a.seed),
        "gaussian-mixture" => {
            if a.centers == 0 || !(a.sigma >= 0.0 && a.sigma.is_finite()) {
                return Err(Failure::Usage(
                    "gaussian-mixture needs --centers >= 1 and a finite --sigma >= 0".into(),
                ));
            }
            datagen::gaussian_mixture(a.n, a.d, a.centers, a.extent, a.sigma, a.seed)
        }
        "tight-pairs" => {
            if !a.n.is_multiple_of(2) {
                return Err(Failure::Usage("tight-pairs needs an even --n".into()));
            }
            if !(a.gap > 0.0 && a.gap.is_finite()) {
                return Err(Failure::Usage("--gap must be positive".into()));
            }
            datagen::tight_pairs(a.n / 2, a.d, a.extent, a.gap, a.seed)
        }
        "lattice" => {
            let side = (a.n as f64).powf(1.0 / a.d as f64).round().max(1.0) as usize;
            datagen::lattice(side, a.d)
        }
        "multiset-duplicates" => {
            if a.max_copies == 0 {
                return Err(Failure::Usage("--max-copies must be at least 1".into()));
            }
            let mut pts =
                datagen::with_duplicates(a.n, a.d, a.extent, a.max_copies, a.seed);
            // the format promises at least one repeated location
            if merge_coincident(&pts).len() == pts.len() {
                if let Some(first) = pts.first().cloned() {
                    pts.push(first);
                }
            }
            pts
        }
        other => {
            return Err(Failure::Usage(format!(
                "unknown distribution '{other}' (expected uniform-box, gaussian-mixture, \
                 tight-pairs, lattice, or multiset-duplicates)"
            )))
        }
    };
    let text = input::format_points(&pts);
    match &a.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Build a subset-membership predicate from a family, for the exhaustive
/// and sweep oracles.
fn family_member<'a>(
    family: &'a BuiltinFamily,
    points: &'a [WeightedPoint],
) -> impl Fn(&[usize]) -> bool + 'a {
    move |idx: &[usize]| {
        let mut s = Sketch::default();
        for &i in idx {
            s.combine(&family.sketch_of(&points[i]));
        }
        family.member(&s)
    }
}

fn run_oracle(a: &OracleArgs) -> Result<(), Failure> {
    let file = input::read_point_file(&a.file)?;
    let pts = &file.points;
    let exhaustive = matches!(a.problem.as_str(), "kcenter" | "min-ball" | "minmax-cluster");
    let cap = a.cap.unwrap_or(if exhaustive { 10 } else { 2000 });
    if pts.len() > cap {
        return Err(Failure::Input(format!(
            "oracle cap exceeded: {} points > {cap} (raise with --cap)",
            pts.len()
        )));
    }
    let need_k = || {
        a.k.ok_or_else(|| Failure::Usage(format!("oracle {} requires --k", a.problem)))
    };
    let family = || {
        build_family(
            a.family.as_deref(),
            a.k,
            a.alpha,
            a.colors_min,
            &file,
            &format!("oracle {}", a.problem),
        )
    };
    let mut report = Report::new(
        &a.problem,
        "oracle",
        pts.len(),
        Params {
            k: a.k,
            m: a.m,
            family: a.family.clone(),
            alpha: a.alpha,
            colors_min: a.colors_min,
            ..Params::default()
        },
    );
    let start = Instant::now();
    let value = match a.problem.as_str() {
        "kcenter" => oracle::kcenter_opt(pts, need_k()? as usize)?,
        "kth-dist" => oracle::kth_distance(pts, need_k()?)?,
        "kth-mnn" => oracle::kth_mnn(pts, need_k()?, a.m.unwrap_or(1))?,
        "knn-exact" => oracle::kth_mnn(pts, need_k()?, 1)?,
        "furthest-nn" => oracle::furthest_nn(pts)?,
        "mst-kth-edge" => oracle::mst_kth_longest_edge(pts, need_k()?)?,
        "closest-pair" | "nonzero-dist" => oracle::smallest_nonzero_distance(pts)?,
        "min-ball" => {
            let fam = family()?;
            let member = family_member(&fam, pts);
            oracle::min_ball_opt(pts, &member)?
        }
        "min-component" => {
            let fam = family()?;
            let member = family_member(&fam, pts);
            oracle::min_component_opt(pts, &member)?
        }
        "minmax-cluster" => {
            let fam = family()?;
            let member = family_member(&fam, pts);
            oracle::minmax_cluster_opt(pts, &member)?
        }
        "connected-cluster" => {
            let fam = family()?;
            let member = family_member(&fam, pts);
            oracle::connected_cluster_opt(pts, &member)?
        }
        other => {
            return Err(Failure::Usage(format!(
                "unknown oracle problem '{other}'"
            )))
        }
    };
    report.value = Some(value);
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    report.print();
    Ok(())
}
