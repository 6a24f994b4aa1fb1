//! Experiment harness around the planner: single runs, seeded sweeps over
//! control counts, sample-density analysis and plot-ready exports.

pub mod density;
pub mod export;
pub mod run;
pub mod sweep;
pub mod workers;
