//! Trim-state glider model.
//!
//! Between control changes the glider holds a trim: a dynamic equilibrium at
//! fixed glide angle `gamma`, heading `delta` and ballast state, moving at
//! the steady speed the hydrodynamics allow. That reduces the dynamics to a
//! constant velocity vector per leg, the *control vector*
//! `(V cos(gamma) cos(delta), V cos(gamma) sin(delta), V sin(gamma))`.
//!
//! Glide angles live in `Gamma = [gamma_min, gamma_max] u [-gamma_max,
//! -gamma_min]`: positive climbs, negative dives, near-level angles are
//! excluded. Climbing requires the buoyant ballast state, diving the heavy
//! one.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::ControlVector;
use crate::real::{real, Real};

/// Ballast tank state. The tank is assumed either empty or full; empty is
/// the buoyant (climbing) state, full the heavy (diving) state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BallastState {
    Buoyant,
    Heavy,
}

impl BallastState {
    /// Ballast state required for a glide direction.
    pub fn for_gamma<T: Real>(gamma: T) -> Self {
        if gamma > T::zero() {
            BallastState::Buoyant
        } else {
            BallastState::Heavy
        }
    }
}

/// Steady glide speed as a function of glide angle and ballast state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum SpeedLaw<T> {
    /// `V(gamma) = sqrt(m0 * g / (-D(gamma) sin(gamma) + L(gamma) cos(gamma)))`
    /// with polynomial lift/drag coefficient laws (coefficients ascending in
    /// powers of gamma, radians) and a net buoyant mass term per ballast
    /// state.
    Hydrodynamic {
        m0_buoyant: T,
        m0_heavy: T,
        g: T,
        lift: Vec<T>,
        drag: Vec<T>,
    },
    /// Piecewise-linear interpolation of `(gamma, speed)` samples, gamma
    /// ascending in radians. A table with only non-negative gammas is applied
    /// symmetrically to both branches.
    Table(Vec<(T, T)>),
}

fn poly_eval<T: Real>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

impl<T: Real> SpeedLaw<T> {
    /// Raw speed evaluation; `gamma`'s sign selects the ballast branch.
    fn speed(&self, gamma: T) -> Result<T> {
        match self {
            SpeedLaw::Hydrodynamic {
                m0_buoyant,
                m0_heavy,
                g,
                lift,
                drag,
            } => {
                let m0 = if gamma > T::zero() {
                    *m0_buoyant
                } else {
                    *m0_heavy
                };
                let denom =
                    -poly_eval(drag, gamma) * gamma.sin() + poly_eval(lift, gamma) * gamma.cos();
                let radicand = m0 * *g / denom;
                if !radicand.is_finite() || radicand <= T::zero() {
                    return Err(Error::ModelConfig(format!(
                        "speed law radicand {} not positive at gamma = {} rad",
                        radicand, gamma
                    )));
                }
                Ok(radicand.sqrt())
            }
            SpeedLaw::Table(samples) => {
                let symmetric = samples.first().is_some_and(|s| s.0 >= T::zero());
                let x = if symmetric { gamma.abs() } else { gamma };
                let first = samples.first().unwrap();
                let last = samples.last().unwrap();
                if x < first.0 || x > last.0 {
                    return Err(Error::ModelConfig(format!(
                        "speed table does not cover gamma = {} rad",
                        gamma
                    )));
                }
                let idx = samples.partition_point(|s| s.0 <= x).min(samples.len() - 1);
                let (x1, v1) = samples[idx];
                let (x0, v0) = samples[idx - 1];
                let t = if x1 == x0 {
                    T::zero()
                } else {
                    (x - x0) / (x1 - x0)
                };
                Ok(v0 + (v1 - v0) * t)
            }
        }
    }
}

/// A sampled point of the control surface.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SurfaceControl<T> {
    pub gamma: T,
    pub delta: T,
    pub control: ControlVector<T>,
}

/// Trim state realised along one leg.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrimState<T> {
    /// Glide speed through the water, m/s.
    pub speed: T,
    /// Glide angle, radians (positive climbs).
    pub gamma: T,
    /// Heading, radians.
    pub delta: T,
    /// Ballast state and its tank mass in kg.
    pub ballast: BallastState,
    pub ballast_kg: T,
}

/// Immutable glider model: glide-angle bounds, ballast states and speed law,
/// with the maximum horizontal speed cached at construction.
#[derive(Debug, Clone)]
pub struct GliderModel<T> {
    gamma_min: T,
    gamma_max: T,
    ballast_max: T,
    law: SpeedLaw<T>,
    v_horizontal_max: T,
    gamma_at_vmax: T,
    v_speed_max: T,
}

impl<T: Real> GliderModel<T> {
    pub fn new(gamma_min: T, gamma_max: T, ballast_max: T, law: SpeedLaw<T>) -> Result<Self> {
        let half_pi = T::FRAC_PI_2();
        if !(T::zero() < gamma_min && gamma_min < gamma_max && gamma_max < half_pi) {
            return Err(Error::ModelConfig(format!(
                "glide-angle bounds must satisfy 0 < {} < {} < pi/2",
                gamma_min, gamma_max
            )));
        }
        if !ballast_max.is_finite() || ballast_max <= T::zero() {
            return Err(Error::ModelConfig("ballast_max must be positive".into()));
        }
        let mut model = Self {
            gamma_min,
            gamma_max,
            ballast_max,
            law,
            v_horizontal_max: T::zero(),
            gamma_at_vmax: gamma_min,
            v_speed_max: T::zero(),
        };
        // construction-time sweep: every gamma in Gamma must yield a positive
        // finite speed, i.e. the law's numerator and denominator agree in sign
        const SCAN: usize = 512;
        let mut best = (T::neg_infinity(), gamma_min);
        let mut fastest = T::zero();
        for sign in [T::one(), -T::one()] {
            for k in 0..=SCAN {
                let t = real::<T>(k as f64 / SCAN as f64);
                let gamma = sign * (gamma_min + (gamma_max - gamma_min) * t);
                let v = model.law.speed(gamma)?;
                if !v.is_finite() || v <= T::zero() {
                    return Err(Error::ModelConfig(format!(
                        "speed {} not positive and finite at gamma = {}",
                        v, gamma
                    )));
                }
                if v > fastest {
                    fastest = v;
                }
                let vh = v * gamma.cos();
                if vh > best.0 {
                    best = (vh, gamma);
                }
            }
        }
        model.v_speed_max = fastest;
        // golden-section refinement around the best scan sample
        let step = (gamma_max - gamma_min) / real::<T>(SCAN as f64);
        let (lo, hi) = (best.1 - step, best.1 + step);
        let refined = golden_max(lo, hi, |g| {
            let g = clamp_to_branch(g, gamma_min, gamma_max);
            model
                .law
                .speed(g)
                .map(|v| v * g.cos())
                .unwrap_or(T::neg_infinity())
        });
        if refined.1 > best.0 {
            best = (refined.1, clamp_to_branch(refined.0, gamma_min, gamma_max));
        }
        model.v_horizontal_max = best.0;
        model.gamma_at_vmax = best.1;
        Ok(model)
    }

    /// The bundled default: hydrodynamic law calibrated so the maximum
    /// horizontal glide speed is 0.9 m/s, with 15..45 degree glide angles.
    pub fn default_model() -> Self {
        let deg = |d: f64| real::<T>(d.to_radians());
        GliderModel::new(
            deg(15.0),
            deg(45.0),
            T::one(),
            SpeedLaw::Hydrodynamic {
                m0_buoyant: real(0.505813),
                m0_heavy: real(-0.505813),
                g: real(9.81),
                lift: vec![T::zero(), real(25.0)],
                drag: vec![real(2.0), T::zero(), real(5.0)],
            },
        )
        .expect("default model is well-formed")
    }

    pub fn gamma_min(&self) -> T {
        self.gamma_min
    }

    pub fn gamma_max(&self) -> T {
        self.gamma_max
    }

    pub fn ballast_max(&self) -> T {
        self.ballast_max
    }

    pub fn ballast_mass(&self, state: BallastState) -> T {
        match state {
            BallastState::Buoyant => T::zero(),
            BallastState::Heavy => self.ballast_max,
        }
    }

    fn check_gamma(&self, gamma: T) -> Result<()> {
        let a = gamma.abs();
        if a < self.gamma_min || a > self.gamma_max {
            return Err(Error::GlideAngleOutOfRange {
                gamma_deg: gamma.to_f64().unwrap_or(f64::NAN).to_degrees(),
                min_deg: self.gamma_min.to_f64().unwrap_or(f64::NAN).to_degrees(),
                max_deg: self.gamma_max.to_f64().unwrap_or(f64::NAN).to_degrees(),
            });
        }
        Ok(())
    }

    /// Steady glide speed for a glide angle and ballast state.
    pub fn glider_speed(&self, gamma: T, ballast: BallastState) -> Result<T> {
        self.check_gamma(gamma)?;
        if ballast != BallastState::for_gamma(gamma) {
            return Err(Error::BallastMismatch(if gamma > T::zero() {
                "climbing requires the buoyant state"
            } else {
                "diving requires the heavy state"
            }));
        }
        self.law.speed(gamma)
    }

    /// Speed lookup for gammas already known to lie in Gamma (clamps
    /// float-noise overshoot at the branch edges).
    pub(crate) fn speed_unchecked(&self, gamma: T) -> T {
        let g = clamp_to_branch(gamma, self.gamma_min, self.gamma_max);
        self.law.speed(g).expect("gamma validated at construction")
    }

    /// Horizontal glide speed `V(gamma) cos(gamma)` for gammas in Gamma.
    pub(crate) fn horizontal_speed_unchecked(&self, gamma: T) -> T {
        self.speed_unchecked(gamma) * gamma.cos()
    }

    /// The still-water velocity vector for a glide angle and heading.
    pub fn control_vector(&self, gamma: T, delta: T) -> Result<ControlVector<T>> {
        self.check_gamma(gamma)?;
        let v = self.law.speed(gamma)?;
        Ok(ControlVector::new(
            v * gamma.cos() * delta.cos(),
            v * gamma.cos() * delta.sin(),
            v * gamma.sin(),
        ))
    }

    /// Maximum of `V(gamma) cos(gamma)` over Gamma and its argmax, cached at
    /// construction.
    pub fn max_horizontal_speed(&self) -> (T, T) {
        (self.v_horizontal_max, self.gamma_at_vmax)
    }

    /// Maximum glide speed over Gamma (the radius of the sphere segments
    /// bounding the control surface).
    pub fn max_speed(&self) -> T {
        self.v_speed_max
    }

    /// Full trim state for a glide angle and heading.
    pub fn trim(&self, gamma: T, delta: T) -> Result<TrimState<T>> {
        let ballast = BallastState::for_gamma(gamma);
        let speed = self.glider_speed(gamma, ballast)?;
        Ok(TrimState {
            speed,
            gamma,
            delta,
            ballast,
            ballast_kg: self.ballast_mass(ballast),
        })
    }

    /// Deterministic near-uniform sampling of the control surface: `n`
    /// controls on a (gamma rows x delta columns) grid with counts
    /// proportional to the parameter extents, covering both glide branches.
    pub fn sample_control_surface(&self, n: usize) -> Vec<SurfaceControl<T>> {
        let n = n.max(1);
        let span = self.gamma_max - self.gamma_min;
        let ext_gamma = (span + span).to_f64().unwrap_or(1.0);
        let ext_delta = std::f64::consts::TAU;
        let n_gamma = ((n as f64 * ext_gamma / ext_delta).sqrt().round() as usize).clamp(1, n);
        let n_delta = n.div_ceil(n_gamma);
        let mut out = Vec::with_capacity(n);
        'fill: for i in 0..n_gamma {
            let xi = (span + span) * real::<T>(i as f64 / n_gamma as f64);
            let gamma = self.unfold_gamma(xi);
            for j in 0..n_delta {
                if out.len() == n {
                    break 'fill;
                }
                let delta = real::<T>(ext_delta * j as f64 / n_delta as f64);
                out.push(self.surface_control(gamma, delta));
            }
        }
        out
    }

    /// Seeded random control-surface draws: gamma uniform over both branches,
    /// delta uniform over the circle.
    pub fn sample_control_surface_random<R: rand::Rng>(
        &self,
        n: usize,
        rng: &mut R,
    ) -> Vec<SurfaceControl<T>> {
        let span = self.gamma_max - self.gamma_min;
        (0..n)
            .map(|_| {
                let xi = (span + span) * real::<T>(rng.gen_range(0.0..1.0));
                let gamma = self.unfold_gamma(xi);
                let delta = real::<T>(rng.gen_range(0.0..std::f64::consts::TAU));
                self.surface_control(gamma, delta)
            })
            .collect()
    }

    fn surface_control(&self, gamma: T, delta: T) -> SurfaceControl<T> {
        let v = self.speed_unchecked(gamma);
        SurfaceControl {
            gamma,
            delta,
            control: ControlVector::new(
                v * gamma.cos() * delta.cos(),
                v * gamma.cos() * delta.sin(),
                v * gamma.sin(),
            ),
        }
    }

    /// Map an unfolded coordinate in `[0, 2(gamma_max - gamma_min))` onto the
    /// two glide branches, climbing first.
    fn unfold_gamma(&self, xi: T) -> T {
        let span = self.gamma_max - self.gamma_min;
        if xi < span {
            self.gamma_min + xi
        } else {
            -(self.gamma_min + (xi - span))
        }
    }
}

fn clamp_to_branch<T: Real>(gamma: T, gamma_min: T, gamma_max: T) -> T {
    let a = gamma.abs().max(gamma_min).min(gamma_max);
    if gamma < T::zero() {
        -a
    } else {
        a
    }
}

fn golden_max<T: Real>(mut lo: T, mut hi: T, f: impl Fn(T) -> T) -> (T, T) {
    let phi = real::<T>(0.618_033_988_749_894_9);
    for _ in 0..80 {
        let d = (hi - lo) * phi;
        let a = hi - d;
        let b = lo + d;
        if f(a) < f(b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    let mid = (lo + hi) / (T::one() + T::one());
    (mid, f(mid))
}

// ---------------------------------------------------------------------------
// model file schema

#[derive(Debug, Serialize, Deserialize)]
struct HydroSchema {
    m0_buoyant_kg: f64,
    m0_heavy_kg: f64,
    g: f64,
    lift_poly: Vec<f64>,
    drag_poly: Vec<f64>,
}

/// JSON model file: glide-angle bounds in degrees, ballast capacity, and
/// either a `table` of `[gamma_deg, speed_mps]` rows or a `hydro` block.
#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub gamma_min_deg: f64,
    pub gamma_max_deg: f64,
    pub ballast_max_kg: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hydro: Option<HydroSchema>,
}

impl ModelFile {
    pub fn build<T: Real>(&self) -> Result<GliderModel<T>> {
        let law = match (&self.table, &self.hydro) {
            (Some(table), None) => {
                let mut samples: Vec<(T, T)> = table
                    .iter()
                    .map(|row| (real(row[0].to_radians()), real(row[1])))
                    .collect();
                samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                if samples.len() < 2 {
                    return Err(Error::ModelConfig(
                        "speed table needs at least 2 rows".into(),
                    ));
                }
                SpeedLaw::Table(samples)
            }
            (None, Some(h)) => SpeedLaw::Hydrodynamic {
                m0_buoyant: real(h.m0_buoyant_kg),
                m0_heavy: real(h.m0_heavy_kg),
                g: real(h.g),
                lift: h.lift_poly.iter().copied().map(real).collect(),
                drag: h.drag_poly.iter().copied().map(real).collect(),
            },
            _ => {
                return Err(Error::ModelConfig(
                    "model file needs exactly one of `table` or `hydro`".into(),
                ))
            }
        };
        GliderModel::new(
            real(self.gamma_min_deg.to_radians()),
            real(self.gamma_max_deg.to_radians()),
            real(self.ballast_max_kg),
            law,
        )
    }
}

/// Load a glider model file.
pub fn load_model<T: Real>(path: impl AsRef<Path>) -> Result<GliderModel<T>> {
    let text = std::fs::read_to_string(path)?;
    let file: ModelFile = serde_json::from_str(&text)?;
    file.build()
}
