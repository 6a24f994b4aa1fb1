//! Plot-ready exports: plan and trajectory documents, and the depth-profile
//! CSV with the current projected onto the glider's ground track.

use std::fmt::Write as _;

use serde::Serialize;

use gliderpath::dynamics::TrimState;
use gliderpath::flowfield::FlowField2p5;
use gliderpath::planner::Plan;
use gliderpath::{ControlVectord, Position3d, Result};

/// plan.json: the position sequence, one trim per leg, per-leg times.
#[derive(Debug, Serialize)]
pub struct PlanDoc {
    pub positions: Vec<[f64; 3]>,
    pub legs: Vec<LegDoc>,
    pub total_time_s: f64,
}

#[derive(Debug, Serialize)]
pub struct LegDoc {
    pub from: [f64; 3],
    pub to: [f64; 3],
    pub trim: TrimState<f64>,
    pub control: [f64; 3],
    pub travel_time_s: f64,
    pub miss_distance_m: f64,
}

impl PlanDoc {
    pub fn from_plan(plan: &Plan<f64>) -> Self {
        let positions: Vec<[f64; 3]> = plan.positions.iter().map(|p| [p.x, p.y, p.z]).collect();
        let legs = plan
            .legs
            .iter()
            .enumerate()
            .map(|(k, leg)| LegDoc {
                from: positions[k],
                to: positions[k + 1],
                trim: leg.trim,
                control: [
                    leg.trajectory.control.u,
                    leg.trajectory.control.v,
                    leg.trajectory.control.w,
                ],
                travel_time_s: leg.travel_time,
                miss_distance_m: leg.miss_distance,
            })
            .collect();
        Self {
            positions,
            legs,
            total_time_s: plan.total_time,
        }
    }
}

/// One executed sample along the concatenated plan.
#[derive(Debug, Clone, Copy)]
pub struct PathSample {
    pub t: f64,
    pub position: Position3d,
    pub control: ControlVectord,
}

/// Concatenate the plan's legs on a global clock. Each leg contributes its
/// samples up to the arrival time plus one interpolated sample exactly at it.
pub fn stitched_samples(plan: &Plan<f64>) -> Vec<PathSample> {
    let mut out = Vec::new();
    let mut offset = 0.0;
    for leg in &plan.legs {
        let control = leg.trajectory.control;
        let samples = &leg.trajectory.samples;
        for (i, &(t, p)) in samples.iter().enumerate() {
            if t > leg.travel_time {
                // interpolate the arrival point between this and the previous
                // sample (skip when arrival fell exactly on the sample before)
                if i > 0 {
                    let (t0, p0) = samples[i - 1];
                    if leg.travel_time > t0 {
                        let f = (leg.travel_time - t0) / (t - t0);
                        out.push(PathSample {
                            t: offset + leg.travel_time,
                            position: Position3d::new(
                                p0.x + (p.x - p0.x) * f,
                                p0.y + (p.y - p0.y) * f,
                                p0.z + (p.z - p0.z) * f,
                            ),
                            control,
                        });
                    }
                }
                break;
            }
            out.push(PathSample {
                t: offset + t,
                position: p,
                control,
            });
        }
        offset += leg.travel_time;
    }
    out
}

/// trajectory.json: flat `[t, x, y, z]` rows over the whole plan.
#[derive(Debug, Serialize)]
pub struct TrajectoryDoc {
    pub samples: Vec<[f64; 4]>,
    pub total_time_s: f64,
}

impl TrajectoryDoc {
    pub fn from_plan(plan: &Plan<f64>) -> Self {
        let samples = stitched_samples(plan)
            .into_iter()
            .map(|s| [s.t, s.position.x, s.position.y, s.position.z])
            .collect();
        Self {
            samples,
            total_time_s: plan.total_time,
        }
    }
}

/// Depth-profile rows `(t_s, depth_m, along_path_current_mps)`: the current
/// at each executed sample, projected onto the instantaneous ground-velocity
/// direction (positive = assisting).
pub fn depth_profile_rows(
    plan: &Plan<f64>,
    field: &FlowField2p5<f64>,
) -> Result<Vec<(f64, f64, f64)>> {
    let mut rows = Vec::new();
    for s in stitched_samples(plan) {
        let current = field.eval_flow(&s.position)?;
        let ground = [
            s.control.u + current.u,
            s.control.v + current.v,
            s.control.w,
        ];
        let speed = (ground[0] * ground[0] + ground[1] * ground[1] + ground[2] * ground[2]).sqrt();
        let along = if speed > 0.0 {
            (current.u * ground[0] + current.v * ground[1]) / speed
        } else {
            0.0
        };
        // 0.0 - z rather than -z so the surface prints 0, not -0
        rows.push((s.t, 0.0 - s.position.z, along));
    }
    Ok(rows)
}

pub fn depth_profile_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut s = String::from("t_s,depth_m,along_path_current_mps\n");
    for (t, depth, along) in rows {
        let _ = writeln!(s, "{t},{depth},{along}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use gliderpath::dynamics::GliderModel;
    use gliderpath::steering::{steer, ControlSampling, SteerParams};
    use gliderpath::Position3;

    fn tiny_plan() -> (Plan<f64>, FlowField2p5<f64>) {
        let field = FlowField2p5::uniform(0.2, 0.0);
        let model = GliderModel::<f64>::default_model();
        let from = Position3::new(0.0, 0.0, -10.0);
        let to = Position3::new(200.0, 0.0, -110.0);
        let params = SteerParams::protocol(32);
        let leg = steer(&field, &model, &from, &to, &params, ControlSampling::Grid)
            .unwrap()
            .result
            .unwrap();
        let total = leg.travel_time;
        (
            Plan {
                node_indices: vec![0, 1],
                positions: vec![from, to],
                legs: vec![leg],
                total_time: total,
            },
            field,
        )
    }

    #[test]
    fn stitched_samples_end_at_travel_time() {
        let (plan, _) = tiny_plan();
        let samples = stitched_samples(&plan);
        assert!(samples.len() > 2);
        let last = samples.last().unwrap();
        assert!((last.t - plan.total_time).abs() < 1e-9);
        // monotone global clock
        for w in samples.windows(2) {
            assert!(w[1].t > w[0].t);
        }
    }

    #[test]
    fn depth_profile_projects_current_onto_track() {
        let (plan, field) = tiny_plan();
        let rows = depth_profile_rows(&plan, &field).unwrap();
        assert_eq!(rows.len(), stitched_samples(&plan).len());
        for (_, depth, along) in &rows {
            // dive leg: depth grows from 10 toward 110
            assert!(*depth >= 10.0 - 1e-9 && *depth <= 110.0 + 1.0);
            // current is 0.2 m/s east; the glider moves broadly east, so the
            // projection is positive and bounded by the current speed
            assert!(*along > 0.0 && *along <= 0.2 + 1e-12);
        }
        let csv = depth_profile_csv(&rows);
        assert!(csv.starts_with("t_s,depth_m,along_path_current_mps\n"));
        assert_eq!(csv.lines().count(), rows.len() + 1);
    }
}
