//! JSON scenario files: workspace, endpoints, sampling, steering parameters
//! and references to (or inline copies of) the field and model documents.
//!
//! ```json
//! {
//!   "bounds": {"min": [-500, -500, -200], "max": [500, 500, 0]},
//!   "start": [-450, 450, 0],
//!   "goal": [450, -450, 0],
//!   "n_positions": 1024,
//!   "n_controls": 16,
//!   "k_neighbors": 27,
//!   "sampling": {"mode": "lattice"},
//!   "steering": {"dt_s": 5.0, "steps": 125, "tol_m": 5.0},
//!   "method": "streamline",
//!   "field": {"file": "fields/hard.json"},
//!   "model": {"file": "models/default.json"}
//! }
//! ```
//!
//! `sampling` may also be `{"mode": "random", "seed": 7}`; `field` and
//! `model` accept `{"inline": {...}}` documents. Omitted `k_neighbors`,
//! `steering`, `sampling` and `method` take the experiment defaults (27
//! neighbours; dt 5 s, 125 steps, 5 m tolerance; lattice; streamline).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dynamics::{GliderModel, ModelFile};
use crate::error::{Error, Result};
use crate::flowfield::{schema::field_from_value, FlowField2p5};
use crate::geom::{Bounds3, Position3};
use crate::real::{real, Real};
use crate::steering::{ControlSampling, SteerParams};

use super::{Method, SamplingMode, Scenario};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsSchema {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SamplingSchema {
    Lattice,
    Random { seed: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SteeringSchema {
    pub dt_s: f64,
    pub steps: usize,
    pub tol_m: f64,
}

impl Default for SteeringSchema {
    fn default() -> Self {
        Self {
            dt_s: 5.0,
            steps: 125,
            tol_m: 5.0,
        }
    }
}

/// A sub-document given inline or by file reference.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocRef {
    File(String),
    Inline(Value),
}

fn default_k() -> usize {
    27
}

fn default_controls() -> usize {
    16
}

fn default_sampling() -> SamplingSchema {
    SamplingSchema::Lattice
}

fn default_method() -> Method {
    Method::Streamline
}

/// On-disk scenario document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub bounds: BoundsSchema,
    pub start: [f64; 3],
    pub goal: [f64; 3],
    pub n_positions: usize,
    #[serde(default = "default_controls")]
    pub n_controls: usize,
    #[serde(default = "default_k")]
    pub k_neighbors: usize,
    #[serde(default = "default_sampling")]
    pub sampling: SamplingSchema,
    #[serde(default)]
    pub steering: SteeringSchema,
    #[serde(default = "default_method")]
    pub method: Method,
    pub field: DocRef,
    pub model: DocRef,
}

/// A scenario plus the field and model it references.
pub struct LoadedScenario<T> {
    pub scenario: Scenario<T>,
    pub field: FlowField2p5<T>,
    pub model: GliderModel<T>,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Build the in-memory scenario; `base_dir` resolves relative file
    /// references.
    pub fn build<T: Real>(&self, base_dir: &Path) -> Result<LoadedScenario<T>> {
        let p3 = |a: [f64; 3]| Position3::new(real::<T>(a[0]), real::<T>(a[1]), real::<T>(a[2]));
        let scenario = Scenario {
            bounds: Bounds3::new(p3(self.bounds.min), p3(self.bounds.max)),
            start: p3(self.start),
            goal: p3(self.goal),
            n_positions: self.n_positions,
            k_neighbors: self.k_neighbors,
            sampling: match self.sampling {
                SamplingSchema::Lattice => SamplingMode::Lattice,
                SamplingSchema::Random { seed } => SamplingMode::UniformRandom { seed },
            },
            steering: SteerParams {
                n_controls: self.n_controls,
                dt: real(self.steering.dt_s),
                steps: self.steering.steps,
                tol: real(self.steering.tol_m),
            },
            method: self.method,
            control_sampling: ControlSampling::Grid,
        };
        scenario.validate()?;

        let field = match &self.field {
            DocRef::File(rel) => {
                let path = resolve(base_dir, rel);
                let text = std::fs::read_to_string(&path).map_err(|e| Error::Schema {
                    location: path.display().to_string(),
                    message: e.to_string(),
                })?;
                crate::flowfield::schema::field_from_str(&text)?
            }
            DocRef::Inline(value) => field_from_value(value)?,
        };
        let model = match &self.model {
            DocRef::File(rel) => {
                let path = resolve(base_dir, rel);
                let text = std::fs::read_to_string(&path).map_err(|e| Error::Schema {
                    location: path.display().to_string(),
                    message: e.to_string(),
                })?;
                let file: ModelFile = serde_json::from_str(&text)?;
                file.build()?
            }
            DocRef::Inline(value) => {
                let file: ModelFile = serde_json::from_value(value.clone())?;
                file.build()?
            }
        };
        Ok(LoadedScenario {
            scenario,
            field,
            model,
        })
    }
}

fn resolve(base: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Load and build a scenario file; relative references resolve against the
/// file's directory.
pub fn load_scenario<T: Real>(path: impl AsRef<Path>) -> Result<LoadedScenario<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let file = ScenarioFile::from_json(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    file.build(base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_with_defaults_and_inline_docs() {
        let doc = r#"{
            "bounds": {"min": [-500, -500, -200], "max": [500, 500, 0]},
            "start": [-450, 450, 0],
            "goal": [450, -450, 0],
            "n_positions": 64,
            "field": {"inline": {"layers": [{"depth": 0.0, "kind": "uniform", "u": 0.1, "v": 0.0}]}},
            "model": {"inline": {"gamma_min_deg": 15.0, "gamma_max_deg": 45.0, "ballast_max_kg": 1.0,
                                  "table": [[0.0, 1.0], [45.0, 1.0]]}}
        }"#;
        let file = ScenarioFile::from_json(doc).unwrap();
        let loaded: LoadedScenario<f64> = file.build(Path::new(".")).unwrap();
        assert_eq!(loaded.scenario.k_neighbors, 27);
        assert_eq!(loaded.scenario.steering.steps, 125);
        assert_eq!(loaded.scenario.steering.dt, 5.0);
        assert_eq!(loaded.scenario.steering.tol, 5.0);
        assert_eq!(loaded.scenario.method, Method::Streamline);
        assert!(matches!(loaded.scenario.sampling, SamplingMode::Lattice));
    }

    #[test]
    fn rejects_start_outside_bounds() {
        let doc = r#"{
            "bounds": {"min": [0, 0, -10], "max": [10, 10, 0]},
            "start": [-450, 450, 0],
            "goal": [5, 5, -5],
            "n_positions": 8,
            "field": {"inline": {"layers": [{"depth": 0.0, "kind": "uniform", "u": 0.0, "v": 0.0}]}},
            "model": {"inline": {"gamma_min_deg": 15.0, "gamma_max_deg": 45.0, "ballast_max_kg": 1.0,
                                  "table": [[0.0, 1.0], [45.0, 1.0]]}}
        }"#;
        let file = ScenarioFile::from_json(doc).unwrap();
        assert!(file.build::<f64>(Path::new(".")).is_err());
    }
}
