//! Closed-form incompressible planar flows.
//!
//! Every variant carries an exact stream function `psi` with
//! `u = d(psi)/dy`, `v = -d(psi)/dx`, so stream values between points are
//! evaluated without quadrature and divergence is zero by construction.

use serde::{Deserialize, Serialize};

use crate::geom::{FlowVector, Point2};
use crate::real::{real, Real};

/// An analytic planar flow with a closed-form stream function.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum AnalyticFlow<T> {
    /// Spatially constant current.
    Uniform { u: T, v: T },
    /// Smooth vortex with Gaussian velocity profile. `strength` is the peak
    /// tangential speed (m/s, positive = counterclockwise) reached at
    /// distance `radius` from the centre.
    Vortex {
        centre: Point2<T>,
        strength: T,
        radius: T,
    },
    /// Rectangular recirculation cell, psi = amplitude * sin(pi x'/Lx) * sin(pi y'/Ly).
    /// The pattern tiles the plane with alternating cells.
    Gyre {
        origin: Point2<T>,
        size: [T; 2],
        amplitude: T,
    },
    /// Sum of component flows; stream functions add.
    Superposition(Vec<AnalyticFlow<T>>),
}

impl<T: Real> AnalyticFlow<T> {
    pub fn uniform(u: T, v: T) -> Self {
        AnalyticFlow::Uniform { u, v }
    }

    pub fn vortex(centre: Point2<T>, strength: T, radius: T) -> Self {
        AnalyticFlow::Vortex {
            centre,
            strength,
            radius,
        }
    }

    pub fn gyre(origin: Point2<T>, size: [T; 2], amplitude: T) -> Self {
        AnalyticFlow::Gyre {
            origin,
            size,
            amplitude,
        }
    }

    pub fn superposition(parts: Vec<AnalyticFlow<T>>) -> Self {
        AnalyticFlow::Superposition(parts)
    }

    /// Flow velocity at a horizontal point.
    pub fn eval(&self, p: Point2<T>) -> FlowVector<T> {
        match self {
            AnalyticFlow::Uniform { u, v } => FlowVector::new(*u, *v),
            AnalyticFlow::Vortex {
                centre,
                strength,
                radius,
            } => {
                let dx = p.x - centre.x;
                let dy = p.y - centre.y;
                let r2 = (dx * dx + dy * dy) / (*radius * *radius);
                let half = real::<T>(0.5);
                let g = *strength / *radius * ((T::one() - r2) * half).exp();
                FlowVector::new(-g * dy, g * dx)
            }
            AnalyticFlow::Gyre {
                origin,
                size,
                amplitude,
            } => {
                let pi = T::PI();
                let kx = pi / size[0];
                let ky = pi / size[1];
                let sx = (kx * (p.x - origin.x)).sin();
                let cx = (kx * (p.x - origin.x)).cos();
                let sy = (ky * (p.y - origin.y)).sin();
                let cy = (ky * (p.y - origin.y)).cos();
                FlowVector::new(*amplitude * ky * sx * cy, -*amplitude * kx * cx * sy)
            }
            AnalyticFlow::Superposition(parts) => parts
                .iter()
                .fold(FlowVector::zero(), |acc, f| acc + f.eval(p)),
        }
    }

    /// Stream function value at a horizontal point. Only differences of this
    /// value are meaningful.
    pub fn psi(&self, p: Point2<T>) -> T {
        match self {
            AnalyticFlow::Uniform { u, v } => *u * p.y - *v * p.x,
            AnalyticFlow::Vortex {
                centre,
                strength,
                radius,
            } => {
                let dx = p.x - centre.x;
                let dy = p.y - centre.y;
                let r2 = (dx * dx + dy * dy) / (*radius * *radius);
                let half = real::<T>(0.5);
                *strength * *radius * ((T::one() - r2) * half).exp()
            }
            AnalyticFlow::Gyre {
                origin,
                size,
                amplitude,
            } => {
                let pi = T::PI();
                let sx = (pi / size[0] * (p.x - origin.x)).sin();
                let sy = (pi / size[1] * (p.y - origin.y)).sin();
                *amplitude * sx * sy
            }
            AnalyticFlow::Superposition(parts) => parts.iter().map(|f| f.psi(p)).sum(),
        }
    }
}
