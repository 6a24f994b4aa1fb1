//! PRM*-style roadmap planning: sample positions, steer each node to its k
//! nearest neighbours in both directions, weight edges by travel time, then
//! run Dijkstra from start to goal.

mod dijkstra;
mod knn;
pub mod schema;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::GliderModel;
use crate::error::Result;
use crate::flowfield::FlowField2p5;
use crate::geom::{Bounds3, Position3};
use crate::real::{real, Real};
use crate::steering::{steer, steer_baseline, ControlSampling, SteerParams, SteerResult};

/// Which steering function connects roadmap edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Streamline,
    Baseline,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Streamline => "streamline",
            Method::Baseline => "baseline",
        }
    }
}

/// Position sampling strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SamplingMode {
    /// Equispaced grid whose per-axis counts factor `n_positions` exactly,
    /// matched to the workspace proportions.
    Lattice,
    /// Seeded uniform draws.
    UniformRandom { seed: u64 },
}

/// A complete planning problem.
#[derive(Debug, Clone)]
pub struct Scenario<T> {
    pub bounds: Bounds3<T>,
    pub start: Position3<T>,
    pub goal: Position3<T>,
    pub n_positions: usize,
    pub k_neighbors: usize,
    pub sampling: SamplingMode,
    pub steering: SteerParams<T>,
    pub method: Method,
    /// How per-edge candidate controls are drawn (sweeps reseed this).
    pub control_sampling: ControlSampling,
}

impl<T: Real> Scenario<T> {
    pub fn validate(&self) -> Result<()> {
        let ext = self.bounds.extent();
        if !(ext[0] > T::zero() && ext[1] > T::zero() && ext[2] > T::zero()) {
            return Err(crate::Error::Schema {
                location: "scenario.bounds".into(),
                message: "workspace extents must be positive".into(),
            });
        }
        for (name, p) in [("start", &self.start), ("goal", &self.goal)] {
            if !self.bounds.contains(p) {
                return Err(crate::Error::Schema {
                    location: format!("scenario.{name}"),
                    message: "position outside workspace bounds".into(),
                });
            }
        }
        if self.n_positions < 2 || self.k_neighbors < 1 {
            return Err(crate::Error::Schema {
                location: "scenario".into(),
                message: "need n_positions >= 2 and k_neighbors >= 1".into(),
            });
        }
        Ok(())
    }
}

/// Factor `n` into per-axis counts `(nx, ny, nz)` with `nx * ny * nz = n`,
/// minimising the log deviation from counts proportional to the box extents.
/// Ties break toward the lexicographically smallest triple.
pub fn lattice_counts(n: usize, extents: [f64; 3]) -> [usize; 3] {
    let volume = extents[0] * extents[1] * extents[2];
    let density = (n as f64 / volume).cbrt();
    let ideal = [
        (extents[0] * density).max(1e-9),
        (extents[1] * density).max(1e-9),
        (extents[2] * density).max(1e-9),
    ];
    let mut best: Option<([usize; 3], f64)> = None;
    for a in 1..=n {
        if !n.is_multiple_of(a) {
            continue;
        }
        let rest = n / a;
        for b in 1..=rest {
            if !rest.is_multiple_of(b) {
                continue;
            }
            let c = rest / b;
            let counts = [a, b, c];
            let score: f64 = counts
                .iter()
                .zip(ideal.iter())
                .map(|(&c, &i)| (c as f64 / i).ln().powi(2))
                .sum();
            let better = match &best {
                Some((bc, bs)) => score < bs - 1e-12 || (score < bs + 1e-12 && counts < *bc),
                None => true,
            };
            if better {
                best = Some((counts, score));
            }
        }
    }
    best.expect("n >= 1 always factors").0
}

/// Sample the scenario's positions; the start and goal are appended last, so
/// `nodes[n_positions]` is the start and `nodes[n_positions + 1]` the goal.
pub fn sample_positions<T: Real>(scenario: &Scenario<T>) -> Vec<Position3<T>> {
    let b = &scenario.bounds;
    let ext = b.extent();
    let mut nodes = Vec::with_capacity(scenario.n_positions + 2);
    match scenario.sampling {
        SamplingMode::Lattice => {
            let counts = lattice_counts(
                scenario.n_positions,
                [
                    ext[0].to_f64().unwrap(),
                    ext[1].to_f64().unwrap(),
                    ext[2].to_f64().unwrap(),
                ],
            );
            let axis = |min: T, extent: T, count: usize, i: usize| {
                if count == 1 {
                    min + extent * real::<T>(0.5)
                } else {
                    min + extent * real::<T>(i as f64 / (count - 1) as f64)
                }
            };
            for ix in 0..counts[0] {
                for iy in 0..counts[1] {
                    for iz in 0..counts[2] {
                        nodes.push(Position3::new(
                            axis(b.min.x, ext[0], counts[0], ix),
                            axis(b.min.y, ext[1], counts[1], iy),
                            axis(b.min.z, ext[2], counts[2], iz),
                        ));
                    }
                }
            }
        }
        SamplingMode::UniformRandom { seed } => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..scenario.n_positions {
                let fx: f64 = rng.gen_range(0.0..1.0);
                let fy: f64 = rng.gen_range(0.0..1.0);
                let fz: f64 = rng.gen_range(0.0..1.0);
                nodes.push(Position3::new(
                    b.min.x + ext[0] * real::<T>(fx),
                    b.min.y + ext[1] * real::<T>(fy),
                    b.min.z + ext[2] * real::<T>(fz),
                ));
            }
        }
    }
    nodes.push(scenario.start);
    nodes.push(scenario.goal);
    nodes
}

/// A steered connection between two roadmap nodes.
#[derive(Debug, Clone)]
pub struct Edge<T> {
    pub from: usize,
    pub to: usize,
    pub result: SteerResult<T>,
}

/// Directed roadmap over the sampled positions.
#[derive(Debug, Clone)]
pub struct Roadmap<T> {
    pub nodes: Vec<Position3<T>>,
    pub edges: Vec<Edge<T>>,
    /// Outgoing edge indices per node.
    pub adjacency: Vec<Vec<usize>>,
    pub start_index: usize,
    pub goal_index: usize,
}

/// Exact counters from roadmap construction.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct BuildMetrics {
    pub nodes: usize,
    /// Directed pairs produced by the k-nearest-neighbour pass.
    pub pairs_considered: usize,
    /// Pairs skipped because both endpoints share a depth.
    pub equal_depth_skips: usize,
    /// Pairs skipped for coincident horizontal positions.
    pub degenerate_skips: usize,
    /// Directed pairs handed to the steering function.
    pub edges_attempted: usize,
    /// Attempts rejected by the lowest-speed condition before integrating.
    pub infeasible_skips: usize,
    pub edges_connected: usize,
    pub sampling_seconds: f64,
    pub steering_seconds: f64,
}

/// Deterministic per-edge seed so randomised control draws do not depend on
/// scheduling (splitmix64 finaliser over the cell seed and both endpoints).
fn edge_seed(base: u64, from: usize, to: usize) -> u64 {
    let mut x = base
        ^ (from as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (to as u64 + 1).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    x
}

/// Directed candidate pairs from the k-nearest-neighbour pass: every node to
/// each of its k nearest, in both directions, sorted and deduplicated.
pub fn neighbor_pairs<T: Real>(nodes: &[Position3<T>], k: usize) -> Vec<(usize, usize)> {
    let tree = knn::KdTree::build(nodes.to_vec());
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..nodes.len() {
        for j in tree.k_nearest(i, k) {
            pairs.push((i, j));
            pairs.push((j, i));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Build the roadmap: steer every node to its k nearest neighbours, in both
/// directions, skipping equal-depth and horizontally coincident pairs.
/// Connection failures are data (counted), not errors.
pub fn build_roadmap<T: Real>(
    scenario: &Scenario<T>,
    field: &FlowField2p5<T>,
    model: &GliderModel<T>,
) -> Result<(Roadmap<T>, BuildMetrics)> {
    scenario.validate()?;
    let t0 = Instant::now();
    let nodes = sample_positions(scenario);
    let pairs = neighbor_pairs(&nodes, scenario.k_neighbors);

    let mut metrics = BuildMetrics {
        nodes: nodes.len(),
        pairs_considered: pairs.len(),
        sampling_seconds: t0.elapsed().as_secs_f64(),
        ..BuildMetrics::default()
    };

    let mut attempts: Vec<(usize, usize)> = Vec::with_capacity(pairs.len());
    for (i, j) in pairs {
        if nodes[i].z == nodes[j].z {
            metrics.equal_depth_skips += 1;
        } else if nodes[i].x == nodes[j].x && nodes[i].y == nodes[j].y {
            metrics.degenerate_skips += 1;
        } else {
            attempts.push((i, j));
        }
    }
    metrics.edges_attempted = attempts.len();

    let t1 = Instant::now();
    let steered: Vec<_> = attempts
        .par_iter()
        .map(|&(i, j)| {
            let sampling = match scenario.control_sampling {
                ControlSampling::Grid => ControlSampling::Grid,
                ControlSampling::Random { seed } => ControlSampling::Random {
                    seed: edge_seed(seed, i, j),
                },
            };
            match scenario.method {
                Method::Streamline => steer(
                    field,
                    model,
                    &nodes[i],
                    &nodes[j],
                    &scenario.steering,
                    sampling,
                ),
                Method::Baseline => steer_baseline(
                    field,
                    model,
                    &nodes[i],
                    &nodes[j],
                    &scenario.steering,
                    sampling,
                ),
            }
        })
        .collect();
    metrics.steering_seconds = t1.elapsed().as_secs_f64();

    let mut edges = Vec::new();
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for ((i, j), outcome) in attempts.into_iter().zip(steered) {
        let outcome = outcome?;
        if !outcome.stats.feasible {
            metrics.infeasible_skips += 1;
        }
        if let Some(result) = outcome.result {
            adjacency[i].push(edges.len());
            edges.push(Edge {
                from: i,
                to: j,
                result,
            });
        }
    }
    metrics.edges_connected = edges.len();

    let start_index = nodes.len() - 2;
    let goal_index = nodes.len() - 1;
    Ok((
        Roadmap {
            nodes,
            edges,
            adjacency,
            start_index,
            goal_index,
        },
        metrics,
    ))
}

/// A start-to-goal plan: the position sequence, the trim legs realising it,
/// and the summed travel time.
#[derive(Debug, Clone, Serialize)]
pub struct Plan<T> {
    pub node_indices: Vec<usize>,
    pub positions: Vec<Position3<T>>,
    pub legs: Vec<SteerResult<T>>,
    pub total_time: T,
}

/// Minimum-travel-time path over the roadmap's directed edges.
pub fn shortest_path<T: Real>(roadmap: &Roadmap<T>) -> Option<Plan<T>> {
    let adjacency: Vec<Vec<(usize, usize, T)>> = roadmap
        .adjacency
        .iter()
        .map(|out| {
            out.iter()
                .map(|&e| {
                    let edge = &roadmap.edges[e];
                    (e, edge.to, edge.result.travel_time)
                })
                .collect()
        })
        .collect();
    let (total, edge_path) =
        dijkstra::shortest_path_edges(&adjacency, roadmap.start_index, roadmap.goal_index)?;
    let mut node_indices = vec![roadmap.start_index];
    let mut legs = Vec::with_capacity(edge_path.len());
    for e in edge_path {
        let edge = &roadmap.edges[e];
        node_indices.push(edge.to);
        legs.push(edge.result.clone());
    }
    let positions = node_indices.iter().map(|&i| roadmap.nodes[i]).collect();
    Some(Plan {
        node_indices,
        positions,
        legs,
        total_time: total,
    })
}

/// Wall-time breakdown and roadmap counters for one planning run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PlanMetrics {
    pub build: BuildMetrics,
    pub search_seconds: f64,
    pub total_seconds: f64,
}

/// The outcome of a full planning run; `plan` is `None` when the goal is
/// unreachable within the roadmap (the metrics still describe it).
#[derive(Debug, Clone)]
pub struct PlanOutcome<T> {
    pub plan: Option<Plan<T>>,
    pub metrics: PlanMetrics,
}

/// Sample, build, search.
pub fn plan<T: Real>(
    scenario: &Scenario<T>,
    field: &FlowField2p5<T>,
    model: &GliderModel<T>,
) -> Result<PlanOutcome<T>> {
    let t0 = Instant::now();
    let (roadmap, build) = build_roadmap(scenario, field, model)?;
    let t1 = Instant::now();
    let plan = shortest_path(&roadmap);
    let search_seconds = t1.elapsed().as_secs_f64();
    Ok(PlanOutcome {
        plan,
        metrics: PlanMetrics {
            build,
            search_seconds,
            total_seconds: t0.elapsed().as_secs_f64(),
        },
    })
}
