//! Depth-layered incompressible current fields.
//!
//! A field is an ordered stack of planar layers (strictly decreasing z, i.e.
//! surface first). Velocity between layers interpolates linearly in depth;
//! queries above the first or below the last layer clamp to it. Vertical
//! current is zero everywhere.

mod analytic;
mod grid;
pub mod schema;

pub use analytic::AnalyticFlow;
pub use grid::GridLayer;

use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{Bounds3, FlowVector, Point2, Position3};
use crate::real::{real, Real};

/// Default divergence tolerance for loaded grid layers, 1/s.
pub const GRID_DIVERGENCE_TOL: f64 = 1e-3;
/// Default divergence tolerance for analytic layers, 1/s. Analytic flows are
/// incompressible in exact arithmetic; this only guards numeric probes.
pub const ANALYTIC_DIVERGENCE_TOL: f64 = 1e-6;

/// One planar flow, either closed-form or gridded.
#[derive(Debug, Clone)]
pub enum LayerFlow<T> {
    Analytic(Arc<AnalyticFlow<T>>),
    Grid(Arc<GridLayer<T>>),
}

impl<T: Real> LayerFlow<T> {
    pub fn eval(&self, p: Point2<T>) -> FlowVector<T> {
        match self {
            LayerFlow::Analytic(f) => f.eval(p),
            LayerFlow::Grid(g) => g.eval(p),
        }
    }

    fn ptr_eq(&self, other: &Self) -> bool {
        match (self, other) {
            (LayerFlow::Analytic(a), LayerFlow::Analytic(b)) => Arc::ptr_eq(a, b),
            (LayerFlow::Grid(a), LayerFlow::Grid(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// One depth layer.
#[derive(Debug, Clone)]
pub struct Layer<T> {
    /// z coordinate of the layer (positive up; 0 = surface, negative below).
    pub z: T,
    pub flow: LayerFlow<T>,
}

impl<T: Real> Layer<T> {
    pub fn analytic(z: T, flow: AnalyticFlow<T>) -> Self {
        Self {
            z,
            flow: LayerFlow::Analytic(Arc::new(flow)),
        }
    }

    pub fn grid(z: T, grid: GridLayer<T>) -> Self {
        Self {
            z,
            flow: LayerFlow::Grid(Arc::new(grid)),
        }
    }
}

/// A 2.5D current field: horizontal flow varying with depth, zero vertical
/// component. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FlowField2p5<T> {
    layers: Vec<Layer<T>>,
}

impl<T: Real> FlowField2p5<T> {
    /// Build a field from layers ordered surface-down (strictly decreasing z).
    pub fn new(layers: Vec<Layer<T>>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::FieldValidation(
                "field needs at least one layer".into(),
            ));
        }
        if layers.iter().any(|l| !l.z.is_finite()) {
            return Err(Error::FieldValidation("non-finite layer depth".into()));
        }
        for w in layers.windows(2) {
            if w[0].z <= w[1].z {
                return Err(Error::FieldValidation(format!(
                    "layer depths must be strictly decreasing, got z = {} then z = {}",
                    w[0].z, w[1].z
                )));
            }
        }
        Ok(Self { layers })
    }

    /// A depth-independent constant current.
    pub fn uniform(u: T, v: T) -> Self {
        Self {
            layers: vec![Layer::analytic(T::zero(), AnalyticFlow::uniform(u, v))],
        }
    }

    pub fn layers(&self) -> &[Layer<T>] {
        &self.layers
    }

    /// Check each grid layer's sampled divergence against a tolerance.
    /// Analytic layers carry exact stream functions and are accepted as-is.
    pub fn validate(&self, grid_divergence_tol: T) -> Result<()> {
        for (i, layer) in self.layers.iter().enumerate() {
            if let LayerFlow::Grid(g) = &layer.flow {
                let d = g.max_divergence();
                if d > grid_divergence_tol {
                    return Err(Error::FieldValidation(format!(
                        "layer {} (z = {}) has max divergence {} above tolerance {}",
                        i, layer.z, d, grid_divergence_tol
                    )));
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn bracket(&self, z: T) -> (usize, usize, T) {
        let layers = &self.layers;
        if z >= layers[0].z {
            return (0, 0, T::zero());
        }
        let last = layers.len() - 1;
        if z <= layers[last].z {
            return (last, last, T::zero());
        }
        // strictly decreasing z, linear scan is fine for the few layers fields have
        for i in 0..last {
            if z <= layers[i].z && z >= layers[i + 1].z {
                let t = (layers[i].z - z) / (layers[i].z - layers[i + 1].z);
                return (i, i + 1, t);
            }
        }
        unreachable!("bracketing by construction");
    }

    /// Current at a 3D position, without finiteness checks. Used by the
    /// integrator which validates its own state.
    #[inline]
    pub(crate) fn eval_unchecked(&self, p: &Position3<T>) -> FlowVector<T> {
        let (i, j, t) = self.bracket(p.z);
        let h = p.horizontal();
        if i == j {
            return self.layers[i].flow.eval(h);
        }
        let a = self.layers[i].flow.eval(h);
        let b = self.layers[j].flow.eval(h);
        a * (T::one() - t) + b * t
    }

    /// Current at a 3D position: linear in depth between the bracketing
    /// layers, clamped to the nearest layer outside the stack.
    pub fn eval_flow(&self, p: &Position3<T>) -> Result<FlowVector<T>> {
        if !p.is_finite() {
            return Err(Error::NonFiniteInput("position"));
        }
        Ok(self.eval_unchecked(p))
    }

    /// The planar flow at a single depth (a weighted blend of the bracketing
    /// layers).
    pub fn slice_at(&self, z: T) -> PlanarFlow<T> {
        let (i, j, t) = self.bracket(z);
        if i == j || t == T::zero() {
            return PlanarFlow::from_components(vec![(T::one(), self.layers[i].flow.clone())]);
        }
        if t == T::one() {
            return PlanarFlow::from_components(vec![(T::one(), self.layers[j].flow.clone())]);
        }
        PlanarFlow::from_components(vec![
            (T::one() - t, self.layers[i].flow.clone()),
            (t, self.layers[j].flow.clone()),
        ])
    }

    /// Depth-averaged planar approximation between two depths: the mean of
    /// the two bounding slices.
    pub fn averaged_layer(&self, z_a: T, z_b: T) -> Result<PlanarFlow<T>> {
        if !(z_a.is_finite() && z_b.is_finite()) {
            return Err(Error::NonFiniteInput("averaging depths"));
        }
        if z_a == z_b {
            return Err(Error::DegenerateDepthPair(z_a.to_f64().unwrap_or(f64::NAN)));
        }
        let half = real::<T>(0.5);
        let mut components = Vec::new();
        for slice in [self.slice_at(z_a), self.slice_at(z_b)] {
            for (w, f) in slice.components {
                components.push((w * half, f));
            }
        }
        Ok(PlanarFlow::from_components(components))
    }

    /// Per-layer maximum |div v| from central differences at seeded random
    /// probes inside the workspace.
    pub fn divergence_report(
        &self,
        bounds: &Bounds3<T>,
        probes: usize,
        seed: u64,
    ) -> Vec<LayerDivergence<T>> {
        let probes = probes.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ext = bounds.extent();
        let h64 = (ext[0].min(ext[1]).to_f64().unwrap_or(1.0) * 1e-4).max(1e-3);
        let h = real::<T>(h64);
        let two_h = h + h;
        self.layers
            .iter()
            .map(|layer| {
                let mut max = T::zero();
                for _ in 0..probes {
                    // keep the stencil inside the box
                    let fx: f64 = rng.gen_range(0.0..1.0);
                    let fy: f64 = rng.gen_range(0.0..1.0);
                    let x = bounds.min.x + h + (ext[0] - two_h).max(T::zero()) * real::<T>(fx);
                    let y = bounds.min.y + h + (ext[1] - two_h).max(T::zero()) * real::<T>(fy);
                    let up = layer.flow.eval(Point2::new(x + h, y));
                    let um = layer.flow.eval(Point2::new(x - h, y));
                    let vp = layer.flow.eval(Point2::new(x, y + h));
                    let vm = layer.flow.eval(Point2::new(x, y - h));
                    let div = ((up.u - um.u) + (vp.v - vm.v)) / two_h;
                    if div.abs() > max {
                        max = div.abs();
                    }
                }
                LayerDivergence {
                    z: layer.z,
                    max_abs_divergence: max,
                }
            })
            .collect()
    }
}

/// Divergence probe summary for one layer.
#[derive(Debug, Clone, Copy)]
pub struct LayerDivergence<T> {
    pub z: T,
    pub max_abs_divergence: T,
}

/// A planar (single effective depth band) incompressible flow: a weighted
/// combination of layer flows, with stream values evaluated exactly for
/// analytic components and by fixed-order Gauss-Legendre quadrature for
/// gridded ones.
#[derive(Debug, Clone)]
pub struct PlanarFlow<T> {
    components: Vec<(T, LayerFlow<T>)>,
}

impl<T: Real> PlanarFlow<T> {
    pub fn from_components(raw: Vec<(T, LayerFlow<T>)>) -> Self {
        // merge repeated references so an average of identical slices stays exact
        let mut components: Vec<(T, LayerFlow<T>)> = Vec::with_capacity(raw.len());
        'outer: for (w, f) in raw {
            for (wc, fc) in components.iter_mut() {
                if fc.ptr_eq(&f) {
                    *wc += w;
                    continue 'outer;
                }
            }
            components.push((w, f));
        }
        Self { components }
    }

    pub fn from_analytic(flow: AnalyticFlow<T>) -> Self {
        Self {
            components: vec![(T::one(), LayerFlow::Analytic(Arc::new(flow)))],
        }
    }

    pub fn eval(&self, p: Point2<T>) -> FlowVector<T> {
        self.components
            .iter()
            .fold(FlowVector::zero(), |acc, (w, f)| acc + f.eval(p) * *w)
    }

    /// Net flow flux across any curve from `a` to `b` (path independent for
    /// incompressible flow): integral of `u dy - v dx`.
    pub fn stream_value(&self, a: Point2<T>, b: Point2<T>) -> Result<T> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::NonFiniteInput("stream value endpoints"));
        }
        let mut total = T::zero();
        let mut grid_part: Option<Vec<(T, &GridLayer<T>)>> = None;
        for (w, f) in &self.components {
            match f {
                LayerFlow::Analytic(flow) => {
                    total += *w * (flow.psi(b) - flow.psi(a));
                }
                LayerFlow::Grid(g) => {
                    grid_part
                        .get_or_insert_with(Vec::new)
                        .push((*w, g.as_ref()));
                }
            }
        }
        if let Some(grids) = grid_part {
            let dx = b.x - a.x;
            let dy = b.y - a.y;
            let mut acc = T::zero();
            for &(node, weight) in gauss_legendre_32() {
                let t = real::<T>(node);
                let p = Point2::new(a.x + dx * t, a.y + dy * t);
                let mut vel = FlowVector::zero();
                for (w, g) in &grids {
                    vel = vel + g.eval(p) * *w;
                }
                acc += real::<T>(weight) * (vel.u * dy - vel.v * dx);
            }
            total += acc;
        }
        Ok(total)
    }
}

/// 32-point Gauss-Legendre rule mapped to [0, 1]: (node, weight) pairs.
fn gauss_legendre_32() -> &'static [(f64, f64); 32] {
    static RULE: OnceLock<[(f64, f64); 32]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = 32usize;
        let mut rule = [(0.0, 0.0); 32];
        for k in 0..n {
            // Newton iterations on P_n from the standard cosine initial guess
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // map from [-1, 1] to [0, 1]
            rule[n - 1 - k] = ((1.0 + x) / 2.0, w / 2.0);
        }
        rule
    })
}

/// Legendre polynomial P_n and derivative at x, by recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
