//! Minimum-travel-time trajectory planning for buoyancy-driven underwater
//! gliders in layered ocean currents.
//!
//! The crate has four parts:
//!
//! - [`flowfield`]: 2.5D current fields (horizontal flow varying with depth,
//!   zero vertical component) with exact or quadrature stream values.
//! - [`dynamics`]: the trim-state glider model, its speed law over glide
//!   angle, and sampling of the feasible control surface.
//! - [`steering`]: the two-point boundary connection. The streamline steerer
//!   intersects the glider's control surface with the control plane induced
//!   by the stream-value constraint, reducing the per-edge search to a line
//!   parameterised by glide angle; a brute-force control-surface steerer
//!   serves as the baseline.
//! - [`planner`]: PRM*-style roadmap construction over sampled positions with
//!   steered, travel-time-weighted directed edges, plus Dijkstra extraction.
//!
//! All numeric code is generic over the scalar type via [`real::Real`]
//! (implemented for `f32` and `f64`); the aliases below fix common choices.

pub mod dynamics;
pub mod error;
pub mod flowfield;
pub mod geom;
pub mod planner;
pub mod real;
pub mod steering;

pub use error::{Error, Result};
pub use real::Real;

pub use geom::{Bounds3, ControlVector, FlowVector, Point2, Position3};

/// Double-precision aliases; the CLI and file formats use these.
pub type Position3d = geom::Position3<f64>;
pub type Point2d = geom::Point2<f64>;
pub type FlowVectord = geom::FlowVector<f64>;
pub type ControlVectord = geom::ControlVector<f64>;
pub type Bounds3d = geom::Bounds3<f64>;

/// Single-precision aliases.
pub type Position3f = geom::Position3<f32>;
pub type Point2f = geom::Point2<f32>;
pub type FlowVectorf = geom::FlowVector<f32>;
pub type ControlVectorf = geom::ControlVector<f32>;
pub type Bounds3f = geom::Bounds3<f32>;
