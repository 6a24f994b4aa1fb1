//! Two-point steering: find a trim control that carries the glider from one
//! position to another through the current field.
//!
//! The streamline steerer works in control space. Reaching the target
//! requires the superimposed (current + control) stream value between the two
//! positions to vanish; under the depth-averaged planar approximation that
//! constraint is the *control plane* `A u + B v + C = 0` with `A = dy`,
//! `B = -dx` and `C` the stream value of the averaged layer. Intersecting the
//! plane with the glider's control surface leaves a 1D set of candidate
//! controls parameterised by glide angle, which is searched densely and
//! forward-integrated against the full field. Candidates exist at a glide
//! angle only when the horizontal glide speed reaches the plane's lowest
//! speed `|C| / sqrt(A^2 + B^2)`; if even the glider's maximum horizontal
//! speed falls short the edge is infeasible and no integration runs at all.
//!
//! The baseline steerer integrates controls sampled across the whole control
//! surface instead, with no plane and no feasibility gate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{GliderModel, TrimState};
use crate::error::{Error, Result};
use crate::flowfield::{FlowField2p5, PlanarFlow};
use crate::geom::{Bounds3, ControlVector, Position3};
use crate::real::{real, Real};

/// Direction of a glide leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GlideDir {
    Climb,
    Dive,
}

impl GlideDir {
    pub fn from_dz<T: Real>(dz: T) -> Self {
        if dz > T::zero() {
            GlideDir::Climb
        } else {
            GlideDir::Dive
        }
    }

    fn sign<T: Real>(self) -> T {
        match self {
            GlideDir::Climb => T::one(),
            GlideDir::Dive => -T::one(),
        }
    }
}

/// Which line-circle intersection branch a candidate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Pos,
    Neg,
}

/// The constraint `A u + B v + C = 0` on horizontal control components for a
/// position pair, from the depth-averaged stream value.
#[derive(Debug, Clone, Copy)]
pub struct ControlPlane<T> {
    /// `y_to - y_from`, metres.
    pub a: T,
    /// `-(x_to - x_from)`, metres.
    pub b: T,
    /// Stream value of the averaged layer between the two positions, m^2/s.
    pub c: T,
    pub from: Position3<T>,
    pub to: Position3<T>,
}

fn validate_pair<T: Real>(from: &Position3<T>, to: &Position3<T>) -> Result<()> {
    if !(from.is_finite() && to.is_finite()) {
        return Err(Error::NonFiniteInput("steering positions"));
    }
    if from.x == to.x && from.y == to.y {
        return Err(Error::DegenerateEdge);
    }
    if from.z == to.z {
        return Err(Error::EqualDepthPair(from.z.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// Build the control plane for a pair of positions over a planar flow.
pub fn control_plane<T: Real>(
    flow: &PlanarFlow<T>,
    from: &Position3<T>,
    to: &Position3<T>,
) -> Result<ControlPlane<T>> {
    validate_pair(from, to)?;
    let c = flow.stream_value(from.horizontal(), to.horizontal())?;
    Ok(ControlPlane {
        a: to.y - from.y,
        b: -(to.x - from.x),
        c,
        from: *from,
        to: *to,
    })
}

/// Minimum horizontal speed of any control on the plane: the distance from
/// the origin to the constraint line.
pub fn lowest_plane_speed<T: Real>(plane: &ControlPlane<T>) -> T {
    plane.c.abs() / (plane.a * plane.a + plane.b * plane.b).sqrt()
}

/// Lowest-speed condition: a connection can exist only if the plane's lowest
/// speed does not exceed the glider's maximum horizontal speed (boundary
/// counts as feasible; tangency yields a single candidate).
pub fn feasible<T: Real>(plane: &ControlPlane<T>, model: &GliderModel<T>) -> bool {
    lowest_plane_speed(plane) <= model.max_horizontal_speed().0
}

/// Signed glide-angle intervals on one branch where the horizontal glide
/// speed reaches `v_min`, found by scanning and bisection. Intervals are
/// returned ascending with `lo <= hi`; a tangency collapses to a point.
pub fn feasible_gamma_intervals<T: Real>(
    model: &GliderModel<T>,
    dir: GlideDir,
    v_min: T,
) -> Vec<(T, T)> {
    const SCAN: usize = 256;
    let sign = dir.sign::<T>();
    let lo = model.gamma_min();
    let hi = model.gamma_max();
    let span = hi - lo;
    let gamma_at = |s: f64| sign * (lo + span * real::<T>(s));
    let phi = |s: f64| model.horizontal_speed_unchecked(gamma_at(s)) - v_min;

    let mut vals = Vec::with_capacity(SCAN + 1);
    for k in 0..=SCAN {
        vals.push(phi(k as f64 / SCAN as f64));
    }
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut start: Option<f64> = if vals[0] >= T::zero() {
        Some(0.0)
    } else {
        None
    };
    for k in 0..SCAN {
        let s0 = k as f64 / SCAN as f64;
        let s1 = (k + 1) as f64 / SCAN as f64;
        let (a, b) = (vals[k], vals[k + 1]);
        if a >= T::zero() && b < T::zero() {
            let root = bisect(&phi, s0, s1, false);
            intervals.push((start.take().unwrap_or(s0), root));
        } else if a < T::zero() && b >= T::zero() {
            let root = bisect(&phi, s0, s1, true);
            start = Some(root);
        }
    }
    if let Some(s) = start {
        intervals.push((s, 1.0));
    }
    if intervals.is_empty() {
        // possible tangency between scan samples: refine around the branch max
        let (s_best, best) = golden_max_s(&phi);
        if best >= -real::<T>(1e-12) * v_min.max(T::one()) {
            intervals.push((s_best, s_best));
        }
    }
    intervals
        .into_iter()
        .map(|(s0, s1)| {
            let g0 = gamma_at(s0);
            let g1 = gamma_at(s1);
            if g0 <= g1 {
                (g0, g1)
            } else {
                (g1, g0)
            }
        })
        .collect()
}

fn bisect<T: Real>(phi: &impl Fn(f64) -> T, mut lo: f64, mut hi: f64, rising: bool) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let v = phi(mid) >= T::zero();
        if v == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_max_s<T: Real>(phi: &impl Fn(f64) -> T) -> (f64, T) {
    let ratio = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..80 {
        let d = (hi - lo) * ratio;
        let a = hi - d;
        let b = lo + d;
        if phi(a) < phi(b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, phi(mid))
}

/// A control on both the control surface and the control plane.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ControlCandidate<T> {
    pub gamma: T,
    pub branch: Branch,
    pub delta: T,
    pub control: ControlVector<T>,
}

/// The two (or one, at tangency) controls at a given glide angle where the
/// horizontal-speed circle meets the plane line. Returns `None` when the
/// glide angle is too slow for the plane.
pub fn plane_circle_controls<T: Real>(
    plane: &ControlPlane<T>,
    model: &GliderModel<T>,
    gamma: T,
) -> Option<(ControlCandidate<T>, Option<ControlCandidate<T>>)> {
    let s = plane.a * plane.a + plane.b * plane.b;
    let radius = model.horizontal_speed_unchecked(gamma);
    let disc = s * radius * radius - plane.c * plane.c;
    // candidates are generated inside feasible intervals; clamp float noise
    let tiny = real::<T>(1e-9) * s * radius * radius;
    if disc < -tiny {
        return None;
    }
    let root = disc.max(T::zero()).sqrt();
    let w = model.speed_unchecked(gamma) * gamma.sin();
    let make = |sign: T, branch: Branch| {
        let u = (-plane.a * plane.c - sign * plane.b * root) / s;
        let v = (-plane.b * plane.c + sign * plane.a * root) / s;
        ControlCandidate {
            gamma,
            branch,
            delta: v.atan2(u),
            control: ControlVector::new(u, v, w),
        }
    };
    let first = make(T::one(), Branch::Pos);
    // chord between the two intersections; treat near-tangency as one control
    let sep = (root + root) / s.sqrt();
    if sep <= radius * real::<T>(1e-9) {
        Some((first, None))
    } else {
        Some((first, Some(make(-T::one(), Branch::Neg))))
    }
}

/// Candidates along the parameterised control line: `n` glide angles spread
/// uniformly over the feasible subset of the sign-matched branch, up to two
/// intersection-branch controls each. The left-closed grid nests under
/// integer refinement of `n`.
pub fn parameterized_controls<T: Real>(
    plane: &ControlPlane<T>,
    model: &GliderModel<T>,
    dir: GlideDir,
    n: usize,
) -> Vec<ControlCandidate<T>> {
    let v_min = lowest_plane_speed(plane);
    let intervals = feasible_gamma_intervals(model, dir, v_min);
    let gammas = grid_over_intervals(&intervals, n);
    gammas_to_candidates(plane, model, &gammas)
}

fn gammas_to_candidates<T: Real>(
    plane: &ControlPlane<T>,
    model: &GliderModel<T>,
    gammas: &[T],
) -> Vec<ControlCandidate<T>> {
    let dedup_eps = model.max_horizontal_speed().0 * real::<T>(1e-9);
    let mut out: Vec<ControlCandidate<T>> = Vec::with_capacity(gammas.len() * 2);
    let mut last: [Option<ControlVector<T>>; 2] = [None, None];
    let mut push = |out: &mut Vec<ControlCandidate<T>>, cand: ControlCandidate<T>| {
        let slot = match cand.branch {
            Branch::Pos => 0,
            Branch::Neg => 1,
        };
        // consecutive gammas at a tangency collapse to one control
        if let Some(prev) = &last[slot] {
            if dist3(prev, &cand.control) <= dedup_eps {
                return;
            }
        }
        last[slot] = Some(cand.control);
        out.push(cand);
    };
    for &gamma in gammas {
        if let Some((a, b)) = plane_circle_controls(plane, model, gamma) {
            push(&mut out, a);
            if let Some(b) = b {
                push(&mut out, b);
            }
        }
    }
    out
}

/// Left-closed uniform grid of `n` points over a union of intervals,
/// measured by arc position. Point sets nest when `n` refines by an integer
/// multiple.
fn grid_over_intervals<T: Real>(intervals: &[(T, T)], n: usize) -> Vec<T> {
    if intervals.is_empty() || n == 0 {
        return Vec::new();
    }
    let measure: T = intervals.iter().map(|&(a, b)| b - a).sum();
    if measure <= T::zero() {
        // tangency: all grid points coincide
        return vec![intervals[0].0];
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut xi = measure * real::<T>(j as f64 / n as f64);
        let mut placed = false;
        for &(a, b) in intervals {
            let len = b - a;
            if xi <= len {
                out.push(a + xi);
                placed = true;
                break;
            }
            xi -= len;
        }
        if !placed {
            out.push(intervals.last().unwrap().1);
        }
    }
    out
}

fn gammas_random<T: Real>(intervals: &[(T, T)], n: usize, rng: &mut impl Rng) -> Vec<T> {
    if intervals.is_empty() {
        return Vec::new();
    }
    let measure: T = intervals.iter().map(|&(a, b)| b - a).sum();
    (0..n)
        .map(|_| {
            let mut xi = measure * real::<T>(rng.gen_range(0.0..1.0));
            for &(a, b) in intervals {
                let len = b - a;
                if xi <= len {
                    return a + xi;
                }
                xi -= len;
            }
            intervals.last().unwrap().1
        })
        .collect()
}

/// Arc length of the parameterised control line (both intersection branches)
/// in control space, by dense chord summation. `None` when no glide angle on
/// the branch satisfies the plane.
pub fn control_line_length<T: Real>(
    plane: &ControlPlane<T>,
    model: &GliderModel<T>,
    dir: GlideDir,
    samples_per_interval: usize,
) -> Option<T> {
    let v_min = lowest_plane_speed(plane);
    let intervals = feasible_gamma_intervals(model, dir, v_min);
    if intervals.is_empty() {
        return None;
    }
    let m = samples_per_interval.max(2);
    let mut total = T::zero();
    for &(lo, hi) in &intervals {
        let mut prev: Option<(ControlVector<T>, Option<ControlVector<T>>)> = None;
        for k in 0..=m {
            let g = lo + (hi - lo) * real::<T>(k as f64 / m as f64);
            let pair = plane_circle_controls(plane, model, g)
                .map(|(a, b)| (a.control, b.map(|b| b.control)));
            if let (Some((pa, pb)), Some((qa, qb))) = (prev, pair) {
                total += dist3(&pa, &qa);
                if let (Some(pb), Some(qb)) = (pb, qb) {
                    total += dist3(&pb, &qb);
                }
            }
            prev = pair;
        }
    }
    Some(total)
}

fn dist3<T: Real>(a: &ControlVector<T>, b: &ControlVector<T>) -> T {
    let du = a.u - b.u;
    let dv = a.v - b.v;
    let dw = a.w - b.w;
    (du * du + dv * dv + dw * dw).sqrt()
}

// ---------------------------------------------------------------------------
// forward integration

/// A forward-integrated path under one fixed control.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory<T> {
    /// `(t, position)` samples at a uniform step, starting at t = 0.
    pub samples: Vec<(T, Position3<T>)>,
    pub control: ControlVector<T>,
    pub reached: bool,
    pub exited_bounds: bool,
}

/// Fixed-step RK4 on `dp/dt = control + current(p)`, the control held
/// constant and the current evaluated at the true 3D position each stage.
/// Stops early (with the flag set) if the state leaves `bounds`.
pub fn integrate<T: Real>(
    field: &FlowField2p5<T>,
    start: &Position3<T>,
    control: &ControlVector<T>,
    dt: T,
    steps: usize,
    bounds: Option<&Bounds3<T>>,
) -> Result<Trajectory<T>> {
    if !dt.is_finite() || dt <= T::zero() || steps == 0 {
        return Err(Error::NonFiniteInput("integration step"));
    }
    let mut samples = Vec::with_capacity(steps + 1);
    let exited = integrate_into(field, start, control, dt, steps, bounds, &mut samples)?;
    Ok(Trajectory {
        samples,
        control: *control,
        reached: false,
        exited_bounds: exited,
    })
}

fn integrate_into<T: Real>(
    field: &FlowField2p5<T>,
    start: &Position3<T>,
    control: &ControlVector<T>,
    dt: T,
    steps: usize,
    bounds: Option<&Bounds3<T>>,
    samples: &mut Vec<(T, Position3<T>)>,
) -> Result<bool> {
    let deriv = |p: &Position3<T>| {
        let current = field.eval_unchecked(p);
        [control.u + current.u, control.v + current.v, control.w]
    };
    let half = real::<T>(0.5);
    let sixth = real::<T>(1.0 / 6.0);
    let two = T::one() + T::one();

    samples.clear();
    samples.push((T::zero(), *start));
    let mut p = *start;
    for i in 1..=steps {
        let k1 = deriv(&p);
        let p2 = offset(&p, &k1, dt * half);
        let k2 = deriv(&p2);
        let p3 = offset(&p, &k2, dt * half);
        let k3 = deriv(&p3);
        let p4 = offset(&p, &k3, dt);
        let k4 = deriv(&p4);
        p = Position3::new(
            p.x + dt * sixth * (k1[0] + two * k2[0] + two * k3[0] + k4[0]),
            p.y + dt * sixth * (k1[1] + two * k2[1] + two * k3[1] + k4[1]),
            p.z + dt * sixth * (k1[2] + two * k2[2] + two * k3[2] + k4[2]),
        );
        let t = dt * real::<T>(i as f64);
        if !p.is_finite() {
            return Err(Error::IntegrationDiverged {
                t: t.to_f64().unwrap_or(f64::NAN),
            });
        }
        samples.push((t, p));
        if let Some(b) = bounds {
            if !b.contains(&p) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[inline]
fn offset<T: Real>(p: &Position3<T>, k: &[T; 3], h: T) -> Position3<T> {
    Position3::new(p.x + k[0] * h, p.y + k[1] * h, p.z + k[2] * h)
}

// ---------------------------------------------------------------------------
// steering

/// Per-edge steering parameters. Arrival is detected on integration samples,
/// so the per-step travel `speed * dt` should stay below `2 * tol` (the
/// protocol defaults give 4.5 m steps against a 5 m tolerance).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SteerParams<T> {
    /// Number of control samples (glide angles for the streamline method,
    /// surface samples for the baseline).
    pub n_controls: usize,
    /// Integration step, seconds.
    pub dt: T,
    /// Integration steps per candidate (horizon = dt * steps).
    pub steps: usize,
    /// Arrival tolerance, metres.
    pub tol: T,
}

impl<T: Real> SteerParams<T> {
    /// Experiment defaults: dt = 5 s, 125 steps, 5 m tolerance.
    pub fn protocol(n_controls: usize) -> Self {
        Self {
            n_controls,
            dt: real(5.0),
            steps: 125,
            tol: real(5.0),
        }
    }
}

/// How candidate controls are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ControlSampling {
    /// Deterministic grids (nested under integer refinement for the
    /// streamline method).
    Grid,
    /// Seeded uniform draws.
    Random { seed: u64 },
}

/// A successful two-point connection.
#[derive(Debug, Clone, Serialize)]
pub struct SteerResult<T> {
    pub trim: TrimState<T>,
    pub trajectory: Trajectory<T>,
    /// Time of first entry into the arrival sphere, linearly interpolated
    /// between integration steps.
    pub travel_time: T,
    /// Closest approach to the target along the trajectory.
    pub miss_distance: T,
}

/// Steering outcome plus bookkeeping for roadmap metrics.
#[derive(Debug, Clone)]
pub struct Steered<T> {
    pub result: Option<SteerResult<T>>,
    pub stats: SteerStats,
}

/// What a steering attempt did.
#[derive(Debug, Clone, Copy, Default)]
pub struct SteerStats {
    /// False when the lowest-speed condition rejected the pair outright.
    pub feasible: bool,
    pub candidates: usize,
    pub integrations: usize,
}

struct RankedCandidate<T> {
    gamma: T,
    delta: T,
    control: ControlVector<T>,
}

impl<T: Real> RankedCandidate<T> {
    /// Travel-time tie-break key: gentler glide first, then heading.
    fn tie_key(&self) -> (T, T) {
        (self.gamma.abs(), self.delta)
    }
}

/// Streamline steering: averaged layer, control plane, lowest-speed gate,
/// candidates on the parameterised control line, forward integration of each
/// against the full field, minimum-travel-time selection.
pub fn steer<T: Real>(
    field: &FlowField2p5<T>,
    model: &GliderModel<T>,
    from: &Position3<T>,
    to: &Position3<T>,
    params: &SteerParams<T>,
    sampling: ControlSampling,
) -> Result<Steered<T>> {
    validate_pair(from, to)?;
    let planar = field.averaged_layer(from.z, to.z)?;
    let plane = control_plane(&planar, from, to)?;
    let v_min = lowest_plane_speed(&plane);
    if v_min > model.max_horizontal_speed().0 {
        return Ok(Steered {
            result: None,
            stats: SteerStats {
                feasible: false,
                candidates: 0,
                integrations: 0,
            },
        });
    }
    let dir = GlideDir::from_dz(to.z - from.z);
    let candidates = match sampling {
        ControlSampling::Grid => parameterized_controls(&plane, model, dir, params.n_controls),
        ControlSampling::Random { seed } => {
            let intervals = feasible_gamma_intervals(model, dir, v_min);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gammas = gammas_random(&intervals, params.n_controls, &mut rng);
            gammas_to_candidates(&plane, model, &gammas)
        }
    };
    let mut ranked: Vec<RankedCandidate<T>> = candidates
        .iter()
        .map(|c| RankedCandidate {
            gamma: c.gamma,
            delta: c.delta,
            control: c.control,
        })
        .collect();
    sort_candidates(&mut ranked, field, from, to);
    select_best(field, model, from, to, params, &ranked)
}

/// Baseline steering: integrate controls sampled over the whole control
/// surface, restricted to the glide direction of the pair.
pub fn steer_baseline<T: Real>(
    field: &FlowField2p5<T>,
    model: &GliderModel<T>,
    from: &Position3<T>,
    to: &Position3<T>,
    params: &SteerParams<T>,
    sampling: ControlSampling,
) -> Result<Steered<T>> {
    validate_pair(from, to)?;
    let dir = GlideDir::from_dz(to.z - from.z);
    let surface = match sampling {
        ControlSampling::Grid => model.sample_control_surface(params.n_controls),
        ControlSampling::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            model.sample_control_surface_random(params.n_controls, &mut rng)
        }
    };
    let mut ranked: Vec<RankedCandidate<T>> = surface
        .into_iter()
        .filter(|s| GlideDir::from_dz(s.gamma) == dir)
        .map(|s| RankedCandidate {
            gamma: s.gamma,
            delta: s.delta,
            control: s.control,
        })
        .collect();
    sort_candidates(&mut ranked, field, from, to);
    select_best(field, model, from, to, params, &ranked)
}

/// Evaluation order: candidates likeliest to arrive soonest first, so the
/// horizon cap engages early. The straight-line estimate uses the current at
/// the leg midpoint. Selection is order-independent (exact travel-time ties
/// resolve by the gentlest-glide key), so this is purely a speedup.
fn sort_candidates<T: Real>(
    cands: &mut [RankedCandidate<T>],
    field: &FlowField2p5<T>,
    from: &Position3<T>,
    to: &Position3<T>,
) {
    let mid = Position3::new(
        (from.x + to.x) * real::<T>(0.5),
        (from.y + to.y) * real::<T>(0.5),
        (from.z + to.z) * real::<T>(0.5),
    );
    let current = field.eval_unchecked(&mid);
    let leg = [to.x - from.x, to.y - from.y, to.z - from.z];
    let dist = (leg[0] * leg[0] + leg[1] * leg[1] + leg[2] * leg[2]).sqrt();
    let est = |c: &RankedCandidate<T>| {
        let closing = ((c.control.u + current.u) * leg[0]
            + (c.control.v + current.v) * leg[1]
            + c.control.w * leg[2])
            / dist;
        if closing > T::zero() {
            dist / closing
        } else {
            T::infinity()
        }
    };
    cands.sort_by(|a, b| {
        est(a)
            .partial_cmp(&est(b))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| {
                a.tie_key()
                    .partial_cmp(&b.tie_key())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });
}

fn select_best<T: Real>(
    field: &FlowField2p5<T>,
    model: &GliderModel<T>,
    from: &Position3<T>,
    to: &Position3<T>,
    params: &SteerParams<T>,
    candidates: &[RankedCandidate<T>],
) -> Result<Steered<T>> {
    struct Hit<T> {
        travel_time: T,
        miss: T,
        candidate: usize,
        samples: Vec<(T, Position3<T>)>,
    }
    let mut stats = SteerStats {
        feasible: true,
        candidates: candidates.len(),
        integrations: 0,
    };
    let mut best: Option<Hit<T>> = None;
    let mut buf: Vec<(T, Position3<T>)> = Vec::with_capacity(params.steps + 1);
    for (idx, cand) in candidates.iter().enumerate() {
        // no later entry can beat the current best, so cap the horizon at it
        let cap = match &best {
            Some(hit) => {
                let needed = (hit.travel_time / params.dt)
                    .ceil()
                    .to_usize()
                    .unwrap_or(params.steps)
                    + 1;
                needed.min(params.steps)
            }
            None => params.steps,
        };
        integrate_into(field, from, &cand.control, params.dt, cap, None, &mut buf)?;
        stats.integrations += 1;
        if let Some((t_entry, miss)) = first_entry(&buf, to, params.tol, params.dt) {
            let better = match &best {
                Some(hit) => {
                    t_entry < hit.travel_time
                        || (t_entry == hit.travel_time
                            && cand.tie_key() < candidates[hit.candidate].tie_key())
                }
                None => true,
            };
            if better {
                best = Some(Hit {
                    travel_time: t_entry,
                    miss,
                    candidate: idx,
                    samples: buf.clone(),
                });
            }
        }
    }
    let result = match best {
        Some(Hit {
            travel_time,
            miss: miss_distance,
            candidate,
            samples,
        }) => {
            let cand = &candidates[candidate];
            let trim = model.trim(cand.gamma, cand.delta)?;
            Some(SteerResult {
                trim,
                trajectory: Trajectory {
                    samples,
                    control: cand.control,
                    reached: true,
                    exited_bounds: false,
                },
                travel_time,
                miss_distance,
            })
        }
        None => None,
    };
    Ok(Steered { result, stats })
}

/// First entry time into the tolerance sphere (linearly interpolated in
/// distance between the bracketing samples) and closest approach.
fn first_entry<T: Real>(
    samples: &[(T, Position3<T>)],
    target: &Position3<T>,
    tol: T,
    dt: T,
) -> Option<(T, T)> {
    let mut min_d = T::infinity();
    let mut entry: Option<T> = None;
    let mut prev_d = T::infinity();
    for (i, (t, p)) in samples.iter().enumerate() {
        let d = p.distance(target);
        if d < min_d {
            min_d = d;
        }
        if entry.is_none() && d <= tol {
            entry = Some(if i == 0 {
                T::zero()
            } else {
                let frac = (prev_d - tol) / (prev_d - d);
                *t - dt + dt * frac
            });
        }
        prev_d = d;
    }
    entry.map(|t| (t, min_d))
}
