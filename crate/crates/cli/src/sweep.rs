//! Seeded sweeps over control-sample counts, one metrics row per
//! (method, count, seed) cell.
//!
//! A sweep reseeds only the per-edge control draws; positions come from the
//! scenario and stay fixed. `metrics.csv` carries the deterministic planning
//! results (byte-identical across reruns and worker counts), wall-clock
//! numbers go to `timings.csv`, and `summary.csv` aggregates mean and the
//! 3-sigma interval per (method, count).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use gliderpath::planner::schema::{load_scenario, LoadedScenario};
use gliderpath::planner::{plan, Method, PlanOutcome};
use gliderpath::steering::ControlSampling;
use gliderpath::Result;

/// Sweep specification document.
///
/// ```json
/// {
///   "scenario": "scenarios/hard.json",
///   "control_counts": [16, 54, 100],
///   "repetitions": 8,
///   "base_seed": 1000,
///   "methods": ["streamline", "baseline"]
/// }
/// ```
///
/// An explicit `"seeds": [...]` list overrides `repetitions`/`base_seed`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub scenario: String,
    pub control_counts: Vec<usize>,
    #[serde(default = "default_reps")]
    pub repetitions: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    pub methods: Vec<Method>,
}

fn default_reps() -> usize {
    1
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn seeds(&self) -> Vec<u64> {
        match &self.seeds {
            Some(s) => s.clone(),
            None => (0..self.repetitions as u64)
                .map(|r| self.base_seed + r)
                .collect(),
        }
    }

    pub fn resolve_scenario(&self, base_dir: &Path) -> PathBuf {
        let p = Path::new(&self.scenario);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base_dir.join(p)
        }
    }
}

/// One sweep cell's planning results (no wall-clock data).
#[derive(Debug, Clone, Serialize)]
pub struct MetricsRow {
    pub method: Method,
    pub n_controls: usize,
    pub seed: Option<u64>,
    pub nodes: usize,
    pub pairs_considered: usize,
    pub equal_depth_skips: usize,
    pub degenerate_skips: usize,
    pub edges_attempted: usize,
    pub infeasible_skips: usize,
    pub edges_connected: usize,
    pub solved: bool,
    pub total_travel_time_s: Option<f64>,
    pub legs: Option<usize>,
}

/// Wall-clock split for one cell.
#[derive(Debug, Clone, Serialize)]
pub struct TimingRow {
    pub method: Method,
    pub n_controls: usize,
    pub seed: Option<u64>,
    pub sampling_s: f64,
    pub steering_s: f64,
    pub search_s: f64,
    pub total_s: f64,
}

pub fn rows_from_outcome(
    method: Method,
    n_controls: usize,
    seed: Option<u64>,
    outcome: &PlanOutcome<f64>,
) -> (MetricsRow, TimingRow) {
    let b = &outcome.metrics.build;
    let metrics = MetricsRow {
        method,
        n_controls,
        seed,
        nodes: b.nodes,
        pairs_considered: b.pairs_considered,
        equal_depth_skips: b.equal_depth_skips,
        degenerate_skips: b.degenerate_skips,
        edges_attempted: b.edges_attempted,
        infeasible_skips: b.infeasible_skips,
        edges_connected: b.edges_connected,
        solved: outcome.plan.is_some(),
        total_travel_time_s: outcome.plan.as_ref().map(|p| p.total_time),
        legs: outcome.plan.as_ref().map(|p| p.legs.len()),
    };
    let timing = TimingRow {
        method,
        n_controls,
        seed,
        sampling_s: b.sampling_seconds,
        steering_s: b.steering_seconds,
        search_s: outcome.metrics.search_seconds,
        total_s: outcome.metrics.total_seconds,
    };
    (metrics, timing)
}

/// Aggregates per (method, n_controls): mean and mean +- 3 sigma (sample
/// standard deviation); travel-time statistics cover solved rows only.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub method: Method,
    pub n_controls: usize,
    pub runs: usize,
    pub solved_runs: usize,
    pub edges_mean: f64,
    pub edges_lo3: f64,
    pub edges_hi3: f64,
    pub time_mean: Option<f64>,
    pub time_lo3: Option<f64>,
    pub time_hi3: Option<f64>,
}

fn mean_sigma(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Deterministic aggregation in (method, count) spec order.
pub fn summarize(spec: &SweepSpec, rows: &[MetricsRow]) -> Vec<SummaryRow> {
    let mut out = Vec::new();
    for &method in &spec.methods {
        for &count in &spec.control_counts {
            let cell: Vec<&MetricsRow> = rows
                .iter()
                .filter(|r| r.method == method && r.n_controls == count)
                .collect();
            if cell.is_empty() {
                continue;
            }
            let edges: Vec<f64> = cell.iter().map(|r| r.edges_connected as f64).collect();
            let times: Vec<f64> = cell.iter().filter_map(|r| r.total_travel_time_s).collect();
            let (edges_mean, edges_sigma) = mean_sigma(&edges);
            let (time_mean, time_sigma) = mean_sigma(&times);
            out.push(SummaryRow {
                method,
                n_controls: count,
                runs: cell.len(),
                solved_runs: times.len(),
                edges_mean,
                edges_lo3: edges_mean - 3.0 * edges_sigma,
                edges_hi3: edges_mean + 3.0 * edges_sigma,
                time_mean: (!times.is_empty()).then_some(time_mean),
                time_lo3: (!times.is_empty()).then_some(time_mean - 3.0 * time_sigma),
                time_hi3: (!times.is_empty()).then_some(time_mean + 3.0 * time_sigma),
            });
        }
    }
    out
}

/// Sweep results, in deterministic (method, count, seed) order.
pub struct SweepResults {
    pub rows: Vec<MetricsRow>,
    pub timings: Vec<TimingRow>,
    pub summary: Vec<SummaryRow>,
}

/// Run every (method, count, seed) cell of the sweep. Cells run in parallel;
/// results are ordered by the spec regardless of scheduling.
pub fn execute(spec: &SweepSpec, base_dir: &Path) -> Result<SweepResults> {
    let scenario_path = spec.resolve_scenario(base_dir);
    let loaded: LoadedScenario<f64> = load_scenario(&scenario_path)?;
    let seeds = spec.seeds();

    let mut cells = Vec::new();
    for &method in &spec.methods {
        for &count in &spec.control_counts {
            for &seed in &seeds {
                cells.push((method, count, seed));
            }
        }
    }

    let outcomes: Vec<Result<(MetricsRow, TimingRow)>> = cells
        .par_iter()
        .map(|&(method, count, seed)| {
            let mut scenario = loaded.scenario.clone();
            scenario.method = method;
            scenario.steering.n_controls = count;
            scenario.control_sampling = ControlSampling::Random { seed };
            let outcome = plan(&scenario, &loaded.field, &loaded.model)?;
            Ok(rows_from_outcome(method, count, Some(seed), &outcome))
        })
        .collect();

    let mut rows = Vec::with_capacity(outcomes.len());
    let mut timings = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        let (m, t) = outcome?;
        rows.push(m);
        timings.push(t);
    }
    let summary = summarize(spec, &rows);
    Ok(SweepResults {
        rows,
        timings,
        summary,
    })
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn fmt_opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn metrics_csv(rows: &[MetricsRow]) -> String {
    let mut s = String::from(
        "method,n_controls,seed,nodes,pairs_considered,equal_depth_skips,degenerate_skips,\
         edges_attempted,infeasible_skips,edges_connected,solved,total_travel_time_s,legs\n",
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.method.as_str(),
            r.n_controls,
            fmt_opt(r.seed),
            r.nodes,
            r.pairs_considered,
            r.equal_depth_skips,
            r.degenerate_skips,
            r.edges_attempted,
            r.infeasible_skips,
            r.edges_connected,
            r.solved,
            fmt_opt_f64(r.total_travel_time_s),
            fmt_opt(r.legs),
        );
    }
    s
}

pub fn timings_csv(rows: &[TimingRow]) -> String {
    let mut s = String::from("method,n_controls,seed,sampling_s,steering_s,search_s,total_s\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{:.6},{:.6},{:.6},{:.6}",
            r.method.as_str(),
            r.n_controls,
            fmt_opt(r.seed),
            r.sampling_s,
            r.steering_s,
            r.search_s,
            r.total_s,
        );
    }
    s
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut s = String::from(
        "method,n_controls,runs,solved_runs,edges_mean,edges_lo3,edges_hi3,\
         time_mean,time_lo3,time_hi3\n",
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            r.method.as_str(),
            r.n_controls,
            r.runs,
            r.solved_runs,
            r.edges_mean,
            r.edges_lo3,
            r.edges_hi3,
            fmt_opt_f64(r.time_mean),
            fmt_opt_f64(r.time_lo3),
            fmt_opt_f64(r.time_hi3),
        );
    }
    s
}

/// Execute a sweep and write `metrics.csv`, `timings.csv` and `summary.csv`.
pub fn run_sweep(spec: &SweepSpec, base_dir: &Path, out_dir: &Path) -> Result<SweepResults> {
    let results = execute(spec, base_dir)?;
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join("metrics.csv"), metrics_csv(&results.rows))?;
    std::fs::write(out_dir.join("timings.csv"), timings_csv(&results.timings))?;
    std::fs::write(out_dir.join("summary.csv"), summary_csv(&results.summary))?;
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_derive_from_base_or_list() {
        let spec: SweepSpec = serde_json::from_str(
            r#"{"scenario": "s.json", "control_counts": [16], "repetitions": 3,
                "base_seed": 10, "methods": ["streamline"]}"#,
        )
        .unwrap();
        assert_eq!(spec.seeds(), vec![10, 11, 12]);

        let spec: SweepSpec = serde_json::from_str(
            r#"{"scenario": "s.json", "control_counts": [16], "seeds": [5, 9],
                "methods": ["streamline", "baseline"]}"#,
        )
        .unwrap();
        assert_eq!(spec.seeds(), vec![5, 9]);
    }

    #[test]
    fn summary_is_recomputable_and_exact() {
        let spec: SweepSpec = serde_json::from_str(
            r#"{"scenario": "s.json", "control_counts": [4], "seeds": [1, 2, 3],
                "methods": ["streamline"]}"#,
        )
        .unwrap();
        let mk = |seed: u64, edges: usize, time: Option<f64>| MetricsRow {
            method: Method::Streamline,
            n_controls: 4,
            seed: Some(seed),
            nodes: 10,
            pairs_considered: 40,
            equal_depth_skips: 4,
            degenerate_skips: 0,
            edges_attempted: 36,
            infeasible_skips: 2,
            edges_connected: edges,
            solved: time.is_some(),
            total_travel_time_s: time,
            legs: time.map(|_| 3),
        };
        let rows = vec![
            mk(1, 10, Some(100.0)),
            mk(2, 14, Some(140.0)),
            mk(3, 18, None),
        ];
        let s1 = summarize(&spec, &rows);
        let s2 = summarize(&spec, &rows);
        assert_eq!(summary_csv(&s1), summary_csv(&s2));
        assert_eq!(s1.len(), 1);
        assert_eq!(s1[0].runs, 3);
        assert_eq!(s1[0].solved_runs, 2);
        assert_eq!(s1[0].edges_mean, 14.0);
        assert_eq!(s1[0].time_mean, Some(120.0));
        // 3-sigma interval from the sample standard deviation
        let sigma = ((10.0f64 - 14.0).powi(2) * 2.0 / 2.0).sqrt();
        assert!((s1[0].edges_hi3 - (14.0 + 3.0 * sigma)).abs() < 1e-12);
    }

    #[test]
    fn csv_handles_no_solution_rows() {
        let row = MetricsRow {
            method: Method::Baseline,
            n_controls: 16,
            seed: Some(7),
            nodes: 100,
            pairs_considered: 400,
            equal_depth_skips: 10,
            degenerate_skips: 1,
            edges_attempted: 389,
            infeasible_skips: 0,
            edges_connected: 12,
            solved: false,
            total_travel_time_s: None,
            legs: None,
        };
        let csv = metrics_csv(&[row]);
        let line = csv.lines().nth(1).unwrap();
        assert_eq!(line, "baseline,16,7,100,400,10,1,389,0,12,false,,");
    }
}
