//! Single planning runs: load a scenario, plan, write outputs.

use std::path::Path;

use gliderpath::planner::schema::{load_scenario, LoadedScenario};
use gliderpath::planner::{plan, Method, PlanOutcome};
use gliderpath::steering::ControlSampling;
use gliderpath::Result;

use crate::export::{depth_profile_csv, depth_profile_rows, PlanDoc, TrajectoryDoc};
use crate::sweep::{metrics_csv, rows_from_outcome, timings_csv};

/// Command-line overrides applied on top of the scenario file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub method: Option<Method>,
    pub n_controls: Option<usize>,
    /// Switches per-edge control draws from the deterministic grid to seeded
    /// random sampling.
    pub seed: Option<u64>,
}

/// Outcome of `run_plan`, mapped to the process exit code by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Solved,
    NoSolution,
}

/// Plan a scenario and write `plan.json`, `trajectory.json`,
/// `depth_profile.csv`, `metrics.csv` and `timings.csv` into `out_dir`.
pub fn run_plan(scenario_path: &Path, overrides: Overrides, out_dir: &Path) -> Result<RunStatus> {
    let loaded: LoadedScenario<f64> = load_scenario(scenario_path)?;
    let mut scenario = loaded.scenario;
    if let Some(m) = overrides.method {
        scenario.method = m;
    }
    if let Some(n) = overrides.n_controls {
        scenario.steering.n_controls = n;
    }
    if let Some(seed) = overrides.seed {
        scenario.control_sampling = ControlSampling::Random { seed };
    }

    let outcome: PlanOutcome<f64> = plan(&scenario, &loaded.field, &loaded.model)?;
    std::fs::create_dir_all(out_dir)?;

    let (metrics, timing) = rows_from_outcome(
        scenario.method,
        scenario.steering.n_controls,
        overrides.seed,
        &outcome,
    );
    std::fs::write(out_dir.join("metrics.csv"), metrics_csv(&[metrics]))?;
    std::fs::write(out_dir.join("timings.csv"), timings_csv(&[timing]))?;

    match &outcome.plan {
        Some(p) => {
            let plan_doc = PlanDoc::from_plan(p);
            std::fs::write(
                out_dir.join("plan.json"),
                serde_json::to_string_pretty(&plan_doc)?,
            )?;
            let traj = TrajectoryDoc::from_plan(p);
            std::fs::write(
                out_dir.join("trajectory.json"),
                serde_json::to_string_pretty(&traj)?,
            )?;
            let rows = depth_profile_rows(p, &loaded.field)?;
            std::fs::write(out_dir.join("depth_profile.csv"), depth_profile_csv(&rows))?;
            Ok(RunStatus::Solved)
        }
        None => Ok(RunStatus::NoSolution),
    }
}
