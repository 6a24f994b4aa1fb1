//! Regular-grid planar flow layers with bilinear interpolation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{FlowVector, Point2};
use crate::real::Real;

/// A planar current sampled on a regular grid. Samples are row-major over x,
/// i.e. index `ix * ny + iy`. Queries outside the grid clamp to the boundary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridLayer<T> {
    pub origin: [T; 2],
    pub spacing: [T; 2],
    pub shape: [usize; 2],
    pub u: Vec<T>,
    pub v: Vec<T>,
}

impl<T: Real> GridLayer<T> {
    pub fn new(
        origin: [T; 2],
        spacing: [T; 2],
        shape: [usize; 2],
        u: Vec<T>,
        v: Vec<T>,
    ) -> Result<Self> {
        let n = shape[0] * shape[1];
        if shape[0] < 2 || shape[1] < 2 {
            return Err(Error::FieldValidation(format!(
                "grid shape {:?} too small, need at least 2x2",
                shape
            )));
        }
        if u.len() != n || v.len() != n {
            return Err(Error::FieldValidation(format!(
                "grid data length {}/{} does not match shape {:?} ({} samples)",
                u.len(),
                v.len(),
                shape,
                n
            )));
        }
        if !(spacing[0] > T::zero() && spacing[1] > T::zero()) {
            return Err(Error::FieldValidation(
                "grid spacing must be positive".into(),
            ));
        }
        if u.iter().chain(v.iter()).any(|s| !s.is_finite()) {
            return Err(Error::FieldValidation(
                "grid contains non-finite samples".into(),
            ));
        }
        Ok(Self {
            origin,
            spacing,
            shape,
            u,
            v,
        })
    }

    /// Sample a grid from a velocity function, mostly for tests and field
    /// generation.
    pub fn from_fn<F>(origin: [T; 2], spacing: [T; 2], shape: [usize; 2], f: F) -> Self
    where
        F: Fn(Point2<T>) -> FlowVector<T>,
    {
        let mut u = Vec::with_capacity(shape[0] * shape[1]);
        let mut v = Vec::with_capacity(shape[0] * shape[1]);
        for ix in 0..shape[0] {
            for iy in 0..shape[1] {
                let x = origin[0] + spacing[0] * T::from_usize(ix).unwrap();
                let y = origin[1] + spacing[1] * T::from_usize(iy).unwrap();
                let vel = f(Point2::new(x, y));
                u.push(vel.u);
                v.push(vel.v);
            }
        }
        Self {
            origin,
            spacing,
            shape,
            u,
            v,
        }
    }

    #[inline]
    fn idx(&self, ix: usize, iy: usize) -> usize {
        ix * self.shape[1] + iy
    }

    /// Bilinear interpolation, clamped to the grid extent.
    pub fn eval(&self, p: Point2<T>) -> FlowVector<T> {
        let gx = ((p.x - self.origin[0]) / self.spacing[0])
            .max(T::zero())
            .min(T::from_usize(self.shape[0] - 1).unwrap());
        let gy = ((p.y - self.origin[1]) / self.spacing[1])
            .max(T::zero())
            .min(T::from_usize(self.shape[1] - 1).unwrap());
        let ix = gx.floor().to_usize().unwrap().min(self.shape[0] - 2);
        let iy = gy.floor().to_usize().unwrap().min(self.shape[1] - 2);
        let fx = gx - T::from_usize(ix).unwrap();
        let fy = gy - T::from_usize(iy).unwrap();
        let one = T::one();

        let w00 = (one - fx) * (one - fy);
        let w10 = fx * (one - fy);
        let w01 = (one - fx) * fy;
        let w11 = fx * fy;

        let i00 = self.idx(ix, iy);
        let i10 = self.idx(ix + 1, iy);
        let i01 = self.idx(ix, iy + 1);
        let i11 = self.idx(ix + 1, iy + 1);

        FlowVector::new(
            w00 * self.u[i00] + w10 * self.u[i10] + w01 * self.u[i01] + w11 * self.u[i11],
            w00 * self.v[i00] + w10 * self.v[i10] + w01 * self.v[i01] + w11 * self.v[i11],
        )
    }

    /// Maximum |du/dx + dv/dy| over interior grid nodes, by central
    /// differences on the samples.
    pub fn max_divergence(&self) -> T {
        let [nx, ny] = self.shape;
        if nx < 3 || ny < 3 {
            return T::zero();
        }
        let two = T::one() + T::one();
        let mut max = T::zero();
        for ix in 1..nx - 1 {
            for iy in 1..ny - 1 {
                let dudx = (self.u[self.idx(ix + 1, iy)] - self.u[self.idx(ix - 1, iy)])
                    / (two * self.spacing[0]);
                let dvdy = (self.v[self.idx(ix, iy + 1)] - self.v[self.idx(ix, iy - 1)])
                    / (two * self.spacing[1]);
                let d = (dudx + dvdy).abs();
                if d > max {
                    max = d;
                }
            }
        }
        max
    }
}
