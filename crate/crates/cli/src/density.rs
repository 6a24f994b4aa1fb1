//! Sample-density analysis: how densely `c` control samples cover the
//! baseline's search region (the control surface) versus the streamline
//! method's (the parameterised control line).
//!
//! The surface area is bounded by sphere segments of radius `max_speed` over
//! the glide-angle band, on both branches; the line length is measured
//! numerically in control space. As the plane's lowest speed approaches the
//! glider's maximum horizontal speed the feasible line shrinks, and the
//! density ratio grows like `1 / sqrt(V*^2 - V_min^2)`.

use serde::Serialize;

use gliderpath::dynamics::GliderModel;
use gliderpath::flowfield::FlowField2p5;
use gliderpath::planner::{neighbor_pairs, sample_positions, Scenario};
use gliderpath::steering::{control_line_length, control_plane, lowest_plane_speed, GlideDir};
use gliderpath::{Position3d, Result};

/// Densities for one position pair and control budget.
#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub c: usize,
    pub v_min: f64,
    pub v_horizontal_max: f64,
    /// Sphere-segment bound on the control-surface area, both branches.
    pub surface_area: f64,
    pub rho_surface: f64,
    /// Length of the feasible control line; `None` when the pair fails the
    /// lowest-speed condition.
    pub line_length: Option<f64>,
    pub rho_line: Option<f64>,
    /// `rho_line / rho_surface`.
    pub ratio: Option<f64>,
}

/// Sphere-segment area bound for the control surface: two zones (climb and
/// dive) of radius `max_speed` spanning the glide-angle band.
pub fn surface_area_bound(model: &GliderModel<f64>) -> f64 {
    let r = model.max_speed();
    let band = model.gamma_max().sin() - model.gamma_min().sin();
    2.0 * (2.0 * std::f64::consts::PI * r * r * band)
}

/// Densities for a single pair.
pub fn density_report(
    model: &GliderModel<f64>,
    field: &FlowField2p5<f64>,
    from: &Position3d,
    to: &Position3d,
    c: usize,
) -> Result<DensityReport> {
    let planar = field.averaged_layer(from.z, to.z)?;
    let plane = control_plane(&planar, from, to)?;
    let v_min = lowest_plane_speed(&plane);
    let (v_star, _) = model.max_horizontal_speed();
    let area = surface_area_bound(model);
    let dir = GlideDir::from_dz(to.z - from.z);
    let line_length = if v_min <= v_star {
        control_line_length(&plane, model, dir, 4096)
    } else {
        None
    };
    let rho_line = line_length.map(|len| c as f64 / len);
    Ok(DensityReport {
        c,
        v_min,
        v_horizontal_max: v_star,
        surface_area: area,
        rho_surface: c as f64 / area,
        line_length,
        rho_line,
        ratio: rho_line.map(|rl| rl / (c as f64 / area)),
    })
}

/// Density reports over a deterministic subset of the scenario's
/// neighbour pairs (the ones the roadmap would attempt).
pub fn scenario_density(
    scenario: &Scenario<f64>,
    field: &FlowField2p5<f64>,
    model: &GliderModel<f64>,
    c: usize,
    max_pairs: usize,
) -> Result<Vec<(Position3d, Position3d, DensityReport)>> {
    let nodes = sample_positions(scenario);
    let pairs = neighbor_pairs(&nodes, scenario.k_neighbors);
    let mut out = Vec::new();
    for (i, j) in pairs {
        if out.len() >= max_pairs {
            break;
        }
        let (from, to) = (nodes[i], nodes[j]);
        if from.z == to.z || (from.x == to.x && from.y == to.y) {
            continue;
        }
        let report = density_report(model, field, &from, &to, c)?;
        out.push((from, to, report));
    }
    Ok(out)
}
