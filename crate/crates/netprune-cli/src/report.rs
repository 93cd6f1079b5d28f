//! The JSON run report printed on standard output.

use netprune::framework::{Action, Interval, RunTrace};
use serde::Serialize;

/// Versioned result document. `value` and `interval` are bit-reproducible
/// for a fixed seed; `elapsed_ms` is not.
#[derive(Serialize)]
pub struct Report {
    pub schema: u32,
    pub problem: String,
    /// "solve" for driver runs, "oracle" for brute-force reference answers.
    pub mode: &'static str,
    /// Input rows before coincident points merge.
    pub n: usize,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<Interval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<[Vec<f64>; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clusters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actions: Option<ActionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<RunTrace>,
}

/// Echo of the flags that shaped the run; absent flags are omitted.
#[derive(Serialize, Default)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colors_min: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hp: Option<bool>,
}

#[derive(Serialize)]
pub struct ActionSummary {
    pub nets: usize,
    pub prunes: usize,
    /// "bounded", "sandwiched", or "screened" (no driver iterations).
    pub stop: &'static str,
}

impl Report {
    pub fn new(problem: &str, mode: &'static str, n: usize, params: Params) -> Report {
        Report {
            schema: 1,
            problem: problem.to_string(),
            mode,
            n,
            params,
            value: None,
            interval: None,
            note: None,
            pair: None,
            centers: None,
            clusters: None,
            iterations: None,
            actions: None,
            seed: None,
            elapsed_ms: 0.0,
            trace: None,
        }
    }

    /// Record an interval result plus a representative point value (the
    /// geometric midpoint, which is within the square root of the spread
    /// of both endpoints).
    pub fn set_interval(&mut self, interval: Interval) {
        self.value = Some(if interval.lo > 0.0 {
            (interval.lo * interval.hi).sqrt()
        } else {
            interval.hi
        });
        self.interval = Some(interval);
    }

    pub fn absorb_trace(&mut self, trace: RunTrace, keep_full: bool) {
        self.iterations = Some(trace.iterations.len());
        let nets = trace
            .iterations
            .iter()
            .filter(|r| r.action == Action::Net)
            .count();
        let prunes = trace
            .iterations
            .iter()
            .filter(|r| r.action == Action::Prune)
            .count();
        let stop = match trace.iterations.last().map(|r| r.action) {
            Some(Action::StopBounded) => "bounded",
            Some(Action::StopSandwiched) => "sandwiched",
            _ => "screened",
        };
        self.actions = Some(ActionSummary { nets, prunes, stop });
        if keep_full {
            self.trace = Some(trace);
        }
    }

    pub fn print(&self) {
        println!(
            "{}",
            serde_json::to_string_pretty(self).expect("report serializes")
        );
    }
}
