//! JSON schema for layered-field files.
//!
//! ```json
//! {
//!   "layers": [
//!     {"depth": 0.0,   "kind": "gyre", "origin": [-500, -500], "size": [1000, 1000], "amplitude": 120.0},
//!     {"depth": -50.0, "kind": "superposition", "parts": [
//!        {"kind": "uniform", "u": 0.3, "v": 0.0},
//!        {"kind": "vortex", "centre": [0, 0], "strength": 1.0, "radius": 150}
//!     ]},
//!     {"depth": -100.0, "origin": [-500, -500], "spacing": [25, 25], "shape": [41, 41],
//!      "u": [...], "v": [...]}
//!   ]
//! }
//! ```
//!
//! `depth` is the layer's z coordinate (positive up, so underwater layers are
//! negative) and must be strictly decreasing through the list. Layers without
//! a `kind` are regular grids, row-major over x (`index = ix * ny + iy`).
//! Units are metres and metres/second.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::real::{real, Real};

use super::{AnalyticFlow, FlowField2p5, GridLayer, Layer, GRID_DIVERGENCE_TOL};

#[derive(Debug, Deserialize)]
struct UniformParams {
    u: f64,
    v: f64,
}

#[derive(Debug, Deserialize)]
struct VortexParams {
    centre: [f64; 2],
    strength: f64,
    radius: f64,
}

#[derive(Debug, Deserialize)]
struct GyreParams {
    origin: [f64; 2],
    size: [f64; 2],
    amplitude: f64,
}

#[derive(Debug, Deserialize)]
struct GridParams {
    origin: [f64; 2],
    spacing: [f64; 2],
    shape: [usize; 2],
    u: Vec<f64>,
    v: Vec<f64>,
}

fn schema_err(location: &str, message: impl ToString) -> Error {
    Error::Schema {
        location: location.to_string(),
        message: message.to_string(),
    }
}

fn parse_analytic<T: Real>(value: &Value, location: &str) -> Result<AnalyticFlow<T>> {
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| schema_err(location, "missing string field `kind`"))?;
    match kind {
        "uniform" => {
            let p: UniformParams =
                serde_json::from_value(value.clone()).map_err(|e| schema_err(location, e))?;
            Ok(AnalyticFlow::uniform(real(p.u), real(p.v)))
        }
        "vortex" => {
            let p: VortexParams =
                serde_json::from_value(value.clone()).map_err(|e| schema_err(location, e))?;
            if p.radius <= 0.0 {
                return Err(schema_err(location, "vortex radius must be positive"));
            }
            Ok(AnalyticFlow::vortex(
                Point2::new(real(p.centre[0]), real(p.centre[1])),
                real(p.strength),
                real(p.radius),
            ))
        }
        "gyre" => {
            let p: GyreParams =
                serde_json::from_value(value.clone()).map_err(|e| schema_err(location, e))?;
            if p.size[0] <= 0.0 || p.size[1] <= 0.0 {
                return Err(schema_err(location, "gyre size must be positive"));
            }
            Ok(AnalyticFlow::gyre(
                Point2::new(real(p.origin[0]), real(p.origin[1])),
                [real(p.size[0]), real(p.size[1])],
                real(p.amplitude),
            ))
        }
        "superposition" => {
            let parts = value
                .get("parts")
                .and_then(Value::as_array)
                .ok_or_else(|| {
                    schema_err(location, "superposition needs an array field `parts`")
                })?;
            let mut flows = Vec::with_capacity(parts.len());
            for (i, part) in parts.iter().enumerate() {
                flows.push(parse_analytic(part, &format!("{location}.parts[{i}]"))?);
            }
            Ok(AnalyticFlow::superposition(flows))
        }
        other => Err(schema_err(location, format!("unknown flow kind `{other}`"))),
    }
}

fn parse_layer<T: Real>(value: &Value, location: &str) -> Result<Layer<T>> {
    let depth = value
        .get("depth")
        .and_then(Value::as_f64)
        .ok_or_else(|| schema_err(location, "missing numeric field `depth`"))?;
    if !depth.is_finite() {
        return Err(schema_err(location, "`depth` must be finite"));
    }
    let z = real::<T>(depth);
    if value.get("kind").is_some() {
        Ok(Layer::analytic(z, parse_analytic(value, location)?))
    } else {
        let p: GridParams =
            serde_json::from_value(value.clone()).map_err(|e| schema_err(location, e))?;
        let grid = GridLayer::new(
            [real(p.origin[0]), real(p.origin[1])],
            [real(p.spacing[0]), real(p.spacing[1])],
            p.shape,
            p.u.into_iter().map(real).collect(),
            p.v.into_iter().map(real).collect(),
        )
        .map_err(|e| schema_err(location, e))?;
        Ok(Layer::grid(z, grid))
    }
}

/// Parse a layered-field document and run the divergence check on grid layers.
pub fn field_from_str<T: Real>(text: &str) -> Result<FlowField2p5<T>> {
    let root: Value = serde_json::from_str(text)?;
    field_from_value(&root)
}

/// Same as [`field_from_str`] for an already-parsed document.
pub fn field_from_value<T: Real>(root: &Value) -> Result<FlowField2p5<T>> {
    let layers_value = root
        .get("layers")
        .and_then(Value::as_array)
        .ok_or_else(|| schema_err("field", "missing array field `layers`"))?;
    let mut layers = Vec::with_capacity(layers_value.len());
    for (i, lv) in layers_value.iter().enumerate() {
        layers.push(parse_layer(lv, &format!("layers[{i}]"))?);
    }
    let field = FlowField2p5::new(layers)?;
    field.validate(real(GRID_DIVERGENCE_TOL))?;
    Ok(field)
}

/// Load a layered-field file.
pub fn load_field<T: Real>(path: impl AsRef<Path>) -> Result<FlowField2p5<T>> {
    let text = std::fs::read_to_string(path)?;
    field_from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Position3;

    #[test]
    fn loads_analytic_layers() {
        let doc = r#"{"layers": [
            {"depth": 0.0, "kind": "uniform", "u": 0.5, "v": 0.0},
            {"depth": -100.0, "kind": "superposition", "parts": [
                {"kind": "uniform", "u": 0.0, "v": 1.0},
                {"kind": "vortex", "centre": [0.0, 0.0], "strength": 0.5, "radius": 100.0}
            ]}
        ]}"#;
        let f: FlowField2p5<f64> = field_from_str(doc).unwrap();
        let v = f.eval_flow(&Position3::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!((v.u, v.v), (0.5, 0.0));
    }

    #[test]
    fn loads_grid_layer() {
        let doc = r#"{"layers": [
            {"depth": 0.0, "origin": [0.0, 0.0], "spacing": [10.0, 10.0], "shape": [2, 2],
             "u": [0.1, 0.1, 0.1, 0.1], "v": [0.0, 0.0, 0.0, 0.0]}
        ]}"#;
        let f: FlowField2p5<f64> = field_from_str(doc).unwrap();
        let v = f.eval_flow(&Position3::new(5.0, 5.0, -20.0)).unwrap();
        assert!((v.u - 0.1).abs() < 1e-12);
    }

    #[test]
    fn rejects_unordered_depths_with_location() {
        let doc = r#"{"layers": [
            {"depth": -50.0, "kind": "uniform", "u": 0.0, "v": 0.0},
            {"depth": 0.0, "kind": "uniform", "u": 0.0, "v": 0.0}
        ]}"#;
        let err = field_from_str::<f64>(doc).unwrap_err();
        assert!(err.to_string().contains("strictly decreasing"), "{err}");
    }

    #[test]
    fn rejects_bad_kind_and_bad_grid() {
        let doc = r#"{"layers": [{"depth": 0.0, "kind": "tide"}]}"#;
        let err = field_from_str::<f64>(doc).unwrap_err();
        assert!(err.to_string().contains("layers[0]"), "{err}");

        let doc = r#"{"layers": [
            {"depth": 0.0, "origin": [0.0, 0.0], "spacing": [10.0, 10.0], "shape": [2, 2],
             "u": [0.1], "v": [0.0]}
        ]}"#;
        let err = field_from_str::<f64>(doc).unwrap_err();
        assert!(err.to_string().contains("layers[0]"), "{err}");
    }

    #[test]
    fn rejects_divergent_grid() {
        // u = x on a grid: divergence 1 > tolerance
        let mut u = Vec::new();
        let mut v = Vec::new();
        for ix in 0..5 {
            for _iy in 0..5 {
                u.push(ix as f64 * 10.0);
                v.push(0.0);
            }
        }
        let doc = serde_json::json!({"layers": [{
            "depth": 0.0, "origin": [0.0, 0.0], "spacing": [10.0, 10.0], "shape": [5, 5],
            "u": u, "v": v
        }]});
        let err = field_from_str::<f64>(&doc.to_string()).unwrap_err();
        assert!(err.to_string().contains("divergence"), "{err}");
    }
}
