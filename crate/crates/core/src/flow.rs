//! The moment map flow `dx/dt = J sigma_x(mu(x))`, its stabilizer-orthogonal
//! projection, the flow of an extension to projective space, and analysis of
//! flow limits.
//!
//! Integration uses the Dormand-Prince 5(4) pair. A step is accepted only if
//! its local error estimate is within `error_tol` and `|mu|^2` did not grow by
//! more than `error_tol`; otherwise the step is shrunk and retried.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector, SVD};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    complexified_action, stabilizer_algebra, LieVector, Point, RepKind, Representation, C64,
    DEFAULT_STABILIZER_TOL,
};
use crate::error::{Error, Result};
use crate::git;
use crate::symplectic::{moment_vector, normalize_projective, Chart};

/// Integration controls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowParams {
    pub max_time: f64,
    /// Stop once `|sigma_x(mu(x))| <= grad_tol`.
    pub grad_tol: f64,
    pub initial_step: f64,
    pub max_step: f64,
    /// Per-step local error tolerance.
    pub error_tol: f64,
    /// Minimum time between recorded samples.
    pub record_every: f64,
    /// Replace the terminal point by `x(T) + T x'(T)`. Off by default.
    pub richardson: bool,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams {
            max_time: 1e4,
            grad_tol: 1e-7,
            initial_step: 1e-2,
            max_step: 100.0,
            error_tol: 1e-9,
            record_every: 0.1,
            richardson: false,
        }
    }
}

impl FlowParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            (self.max_time, "max_time"),
            (self.grad_tol, "grad_tol"),
            (self.initial_step, "initial_step"),
            (self.max_step, "max_step"),
            (self.error_tol, "error_tol"),
            (self.record_every, "record_every"),
        ];
        for (v, name) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidFlowParams(name));
            }
        }
        if self.grad_tol >= 1.0 {
            return Err(Error::InvalidFlowParams("grad_tol"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Termination {
    GradTolReached,
    MaxTimeReached,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowSample {
    pub t: f64,
    pub point: Point,
    pub mu_norm_sq: f64,
    /// Size of the step that produced this sample (0 for the initial sample).
    pub step: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowTrajectory {
    pub samples: Vec<FlowSample>,
    pub terminal: Point,
    pub terminal_time: f64,
    pub termination: Termination,
    /// Orthonormal basis of the torus the flow was projected away from.
    pub restricted_to: Option<Vec<LieVector>>,
    /// `Projective` for [`projective_flow`]; points are then affine-chart
    /// coordinates of `P^d`.
    pub chart: Chart,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// Largest increase of `|mu|^2` over any accepted step (negative when the
    /// energy strictly decreased every step).
    pub max_energy_increase: f64,
}

impl FlowTrajectory {
    pub fn terminal_mu_norm_sq(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.mu_norm_sq)
    }
}

/// Radius of the ball on which the projective extension agrees with the flat
/// structure.
pub const EXTENSION_RADIUS: f64 = 1.0;

/// The vector field of a (possibly projected or extended) moment map flow.
#[derive(Clone, Debug)]
pub struct FlowField<'a> {
    rep: &'a Representation,
    torus: Vec<LieVector>,
    extension_radius: Option<f64>,
}

impl<'a> FlowField<'a> {
    pub fn new(rep: &'a Representation) -> Self {
        FlowField { rep, torus: Vec::new(), extension_radius: None }
    }

    /// Flow of `mu_{T-perp}`: the moment map with its component along the span
    /// of `torus` removed.
    pub fn projected(rep: &'a Representation, torus: &[LieVector]) -> Result<Self> {
        for v in torus {
            rep.check_vector(v)?;
        }
        for a in 0..torus.len() {
            for b in (a + 1)..torus.len() {
                let norm = rep.bracket_norm(&torus[a], &torus[b]);
                if norm > 1e-10 {
                    return Err(Error::NotCommuting { a, b, norm });
                }
            }
        }
        Ok(FlowField { rep, torus: rep.orthonormalize(torus), extension_radius: None })
    }

    /// Moment map of the Kahler potential `f(|x|^2)` with `f'(s) = 1` for
    /// `s <= R^2` and `f'(s) = (1 + R^2) / (1 + s)` beyond: flat on the ball of
    /// radius `R`, a multiple of Fubini-Study on `P^d` outside it.
    pub fn projective(rep: &'a Representation) -> Self {
        FlowField { rep, torus: Vec::new(), extension_radius: Some(EXTENSION_RADIUS) }
    }

    pub fn torus(&self) -> &[LieVector] {
        &self.torus
    }

    fn project(&self, mu: LieVector) -> LieVector {
        let mut out = mu;
        for h in &self.torus {
            let p = self.rep.pair(h, &out);
            out = &out - &(h * p);
        }
        out
    }

    /// The (projected, extended) moment map value driving the flow.
    pub fn mu_hat(&self, x: &Point) -> LieVector {
        let mu = moment_vector(self.rep, x, Chart::Affine).expect("affine moment map is total");
        let mu = self.project(mu);
        match self.extension_radius {
            Some(r) => {
                let s = x.norm_squared();
                if s > r * r {
                    &mu * ((1.0 + r * r) / (1.0 + s))
                } else {
                    mu
                }
            }
            None => mu,
        }
    }

    /// `J sigma_x(mu_hat) = -i rho(mu_hat) x`.
    pub fn velocity(&self, x: &Point) -> Point {
        let mu = self.mu_hat(x);
        self.rep.apply_rho(&mu, x) * C64::new(0.0, -1.0)
    }

    pub fn energy(&self, x: &Point) -> f64 {
        let mu = self.mu_hat(x);
        self.rep.pair(&mu, &mu)
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const MIN_STEP: f64 = 1e-14;

fn integrate(field: &FlowField<'_>, x0: &Point, params: &FlowParams, chart: Chart) -> Result<FlowTrajectory> {
    params.validate()?;
    field.rep.check_point(x0)?;
    let mut x = x0.clone();
    let mut t = 0.0;
    let mut h = params.initial_step.min(params.max_step);
    let mut k1 = field.velocity(&x);
    let mut energy = field.energy(&x);
    let mut samples = vec![FlowSample { t, point: x.clone(), mu_norm_sq: energy, step: 0.0 }];
    let mut last_record = 0.0;
    let mut accepted = 0;
    let mut rejected = 0;
    let mut max_increase = f64::NEG_INFINITY;
    let mut termination = Termination::MaxTimeReached;

    if k1.norm() <= params.grad_tol {
        termination = Termination::GradTolReached;
    } else {
        while t < params.max_time {
            // Stretch a step that would leave a sliver before max_time.
            let remaining = params.max_time - t;
            h = h.min(params.max_step);
            let last = h * 1.01 >= remaining;
            if last {
                h = remaining;
            }
            if h < MIN_STEP && !last {
                return Err(Error::StepUnderflow { t, h });
            }
            let mut k: Vec<Point> = Vec::with_capacity(7);
            k.push(k1.clone());
            for s in 1..7 {
                let mut y = x.clone();
                for (j, kj) in k.iter().enumerate() {
                    if A[s][j] != 0.0 {
                        y += kj * C64::new(h * A[s][j], 0.0);
                    }
                }
                k.push(field.velocity(&y));
            }
            // Stage 7 is evaluated at the 5th-order solution (FSAL).
            let mut x_new = x.clone();
            for (j, kj) in k.iter().take(6).enumerate() {
                if A[6][j] != 0.0 {
                    x_new += kj * C64::new(h * A[6][j], 0.0);
                }
            }
            let mut err_vec = Point::zeros(x.len());
            for (j, kj) in k.iter().enumerate() {
                if E[j] != 0.0 {
                    err_vec += kj * C64::new(h * E[j], 0.0);
                }
            }
            let err = err_vec
                .iter()
                .zip(x.iter().zip(x_new.iter()))
                .map(|(e, (a, b))| e.norm() / (params.error_tol * (1.0 + a.norm().max(b.norm()))))
                .fold(0.0, f64::max);
            let new_energy = field.energy(&x_new);
            let energy_ok = new_energy <= energy + params.error_tol;
            if err <= 1.0 && energy_ok && x_new.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                t = if last { params.max_time } else { t + h };
                accepted += 1;
                max_increase = max_increase.max(new_energy - energy);
                x = x_new;
                energy = new_energy;
                k1 = k.swap_remove(6);
                let grad = k1.norm();
                let done = grad <= params.grad_tol;
                if t - last_record >= params.record_every || done || t >= params.max_time {
                    samples.push(FlowSample { t, point: x.clone(), mu_norm_sq: energy, step: h });
                    last_record = t;
                }
                if done {
                    termination = Termination::GradTolReached;
                    break;
                }
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                h *= factor;
            } else {
                rejected += 1;
                h *= if err > 1.0 { (0.9 * err.powf(-0.2)).clamp(0.1, 0.5) } else { 0.5 };
                if h < MIN_STEP {
                    return Err(Error::StepUnderflow { t, h });
                }
            }
        }
    }
    let terminal = if params.richardson {
        &x + &k1 * C64::new(t, 0.0)
    } else {
        x.clone()
    };
    Ok(FlowTrajectory {
        samples,
        terminal,
        terminal_time: t,
        termination,
        restricted_to: if field.torus.is_empty() { None } else { Some(field.torus.clone()) },
        chart,
        accepted_steps: accepted,
        rejected_steps: rejected,
        max_energy_increase: if accepted == 0 { 0.0 } else { max_increase },
    })
}

/// Integrates the moment map flow from `x0` on `C^d`.
pub fn integrate_flow(rep: &Representation, x0: &Point, params: &FlowParams) -> Result<FlowTrajectory> {
    integrate(&FlowField::new(rep), x0, params, Chart::Affine)
}

/// Integrates the flow of `mu_{T-perp}`, the moment map projected onto the
/// inner-product orthogonal complement of the span of `torus`.
pub fn projected_flow(
    rep: &Representation,
    x0: &Point,
    torus: &[LieVector],
    params: &FlowParams,
) -> Result<FlowTrajectory> {
    let field = FlowField::projected(rep, torus)?;
    integrate(&field, x0, params, Chart::Affine)
}

/// Integrates the flow of the extension of the moment map to `P^d` that agrees
/// with the flat one on the unit ball. Samples are affine-chart coordinates;
/// [`homogeneous`] maps them to normalized points of `P^d`.
pub fn projective_flow(rep: &Representation, x0: &Point, params: &FlowParams) -> Result<FlowTrajectory> {
    integrate(&FlowField::projective(rep), x0, params, Chart::Projective)
}

/// Normalized homogeneous coordinates `[1 : x]` of an affine-chart point.
pub fn homogeneous(x: &Point) -> Point {
    let mut z = Point::zeros(x.len() + 1);
    z[0] = C64::new(1.0, 0.0);
    z.rows_mut(1, x.len()).copy_from(x);
    normalize_projective(&z).expect("[1 : x] is nonzero")
}

/// Orbit-level outcome of a flow.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Dichotomy {
    /// The limit has vanishing moment map and lies in the complexified orbit.
    InOrbit,
    /// The limit only lies in the orbit closure; `exp(-i t witness) x0`
    /// converges as `t -> infinity`.
    OrbitClosureOnly { witness: LieVector },
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitReport {
    /// `|mu(x_inf)|` (projected when the flow was).
    pub mu_norm: f64,
    /// `|mu|` at the raw terminal point of the trajectory.
    pub terminal_mu_norm: f64,
    pub stabilizer_dim: usize,
    pub initial_stabilizer_dim: usize,
    pub support: Vec<usize>,
    pub initial_support: Vec<usize>,
    #[serde(serialize_with = "crate::scenario::serialize_point")]
    pub limit: Point,
    /// Whether the limit was completed beyond the terminal point (torus only).
    pub refined: bool,
    pub dichotomy: Dichotomy,
    /// `<mu(x~), witness>` for the limit `x~` of the witness ray.
    pub witness_pairing: Option<f64>,
    /// Result of the check that, when the witness pairing vanishes, `x~` and
    /// the flow limit lie on the same closed orbit.
    pub final_clause: Option<bool>,
}

/// Tolerances for [`analyze_limit_with`].
#[derive(Clone, Debug, PartialEq)]
pub struct LimitOptions {
    /// `|mu(x_inf)|` at or below this counts as a zero of the moment map.
    pub mu_tol: f64,
    /// Coordinates below `support_rel * max |x0_i|` count as zero.
    pub support_rel: f64,
    /// A coordinate whose log-log decay rate `T d/dt log|z_i|` at the final
    /// time is at or below `-decay_slope` is vanishing in the limit.
    pub decay_slope: f64,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions { mu_tol: 1e-5, support_rel: 1e-9, decay_slope: 0.05 }
    }
}

/// [`analyze_limit_with`] under default options.
pub fn analyze_limit(rep: &Representation, traj: &FlowTrajectory, x0: &Point) -> LimitReport {
    analyze_limit_with(rep, traj, x0, &LimitOptions::default())
}

fn coordinate_support(x: &Point, eps: f64) -> Vec<usize> {
    x.iter().enumerate().filter(|(_, z)| z.norm() > eps).map(|(i, _)| i).collect()
}

/// Determines the limit of a finished flow and which case of the orbit
/// dichotomy it falls in.
///
/// For torus representations the vanishing coordinates are read off from the
/// terminal decay rates, the limit is completed on the surviving coordinates
/// by minimizing the Kempf-Ness energy along the directions the flow moves in,
/// and the dichotomy is decided from supports. Matrix representations report
/// [`Dichotomy::Undetermined`].
pub fn analyze_limit_with(
    rep: &Representation,
    traj: &FlowTrajectory,
    x0: &Point,
    opts: &LimitOptions,
) -> LimitReport {
    let torus = traj.restricted_to.clone().unwrap_or_default();
    let field = FlowField::projected(rep, &torus).unwrap_or_else(|_| FlowField::new(rep));
    let scale = x0.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let eps = opts.support_rel * scale;
    let initial_support = coordinate_support(x0, eps);
    let initial_stabilizer_dim = stabilizer_algebra(rep, x0, DEFAULT_STABILIZER_TOL).len();
    let terminal = &traj.terminal;
    let terminal_mu_norm = field.energy(terminal).sqrt();

    let RepKind::Torus { weights, .. } = rep.kind() else {
        let limit = terminal.clone();
        return LimitReport {
            mu_norm: terminal_mu_norm,
            terminal_mu_norm,
            stabilizer_dim: stabilizer_algebra(rep, &limit, DEFAULT_STABILIZER_TOL).len(),
            initial_stabilizer_dim,
            support: coordinate_support(&limit, eps),
            initial_support,
            limit,
            refined: false,
            dichotomy: Dichotomy::Undetermined,
            witness_pairing: None,
            final_clause: None,
        };
    };

    let mu_t = field.mu_hat(terminal);
    let time = traj.terminal_time;
    let survivors: Vec<usize> = initial_support
        .iter()
        .copied()
        .filter(|&i| {
            if terminal[i].norm() <= eps {
                return false;
            }
            let rate: f64 = weights[i].iter().zip(mu_t.coords().iter()).map(|(w, m)| *w as f64 * m).sum();
            time * rate > -opts.decay_slope
        })
        .collect();
    let mut truncated = Point::zeros(terminal.len());
    for &i in &survivors {
        truncated[i] = terminal[i];
    }
    let allowed = allowed_directions(rep, field.torus());
    let (limit, refined) = match complete_limit(weights, &truncated, &allowed) {
        Some(p) => (p, true),
        None => (truncated, false),
    };
    let mu_norm = field.energy(&limit).sqrt();
    let support: Vec<usize> = coordinate_support(&limit, 0.0);
    let stabilizer_dim = stabilizer_algebra(rep, &limit, DEFAULT_STABILIZER_TOL).len();

    let same_support = support == initial_support;
    let shrank = {
        let s: BTreeSet<_> = support.iter().collect();
        let s0: BTreeSet<_> = initial_support.iter().collect();
        s.is_subset(&s0) && s.len() < s0.len()
    };
    let mut witness_pairing = None;
    let mut final_clause = None;
    let dichotomy = if !refined {
        Dichotomy::Undetermined
    } else if same_support && mu_norm <= opts.mu_tol {
        Dichotomy::InOrbit
    } else if shrank {
        match witness_direction(rep, &field, x0, &initial_support, &support, &limit, opts) {
            Some(xi) => {
                let (x_tilde, pairing) = witness_limit(rep, &field, weights, x0, &xi);
                witness_pairing = Some(pairing);
                if pairing.abs() <= opts.mu_tol {
                    let tilde_support = coordinate_support(&x_tilde, 0.0);
                    let same_orbit = if tilde_support.is_empty() {
                        limit.norm() <= opts.mu_tol
                    } else {
                        tilde_support == support && mu_norm <= opts.mu_tol
                    };
                    final_clause = Some(same_orbit);
                }
                Dichotomy::OrbitClosureOnly { witness: xi }
            }
            None => Dichotomy::Undetermined,
        }
    } else {
        Dichotomy::Undetermined
    };

    LimitReport {
        mu_norm,
        terminal_mu_norm,
        stabilizer_dim,
        initial_stabilizer_dim,
        support,
        initial_support,
        limit,
        refined,
        dichotomy,
        witness_pairing,
        final_clause,
    }
}

/// Coordinate basis of the inner-product orthogonal complement of `torus`.
fn allowed_directions(rep: &Representation, torus: &[LieVector]) -> Vec<DVector<f64>> {
    let m = rep.algebra_dim();
    let mut basis: Vec<LieVector> = torus.to_vec();
    for a in 0..m {
        basis.push(LieVector::basis(m, a));
    }
    rep.orthonormalize(&basis)
        .into_iter()
        .skip(torus.len())
        .map(|v| v.coords().clone())
        .collect()
}

/// Scales the coordinates of `x` by `exp(<w_i, lambda>)`, `lambda` in the span
/// of `allowed`, to the minimizer of `(1/2) sum |x_i|^2 exp(2 <w_i, lambda>)`.
///
/// Along a torus flow each coordinate moves by exactly such a factor, so this
/// is the flow's limit from `x` when the minimum exists. Returns `None` when
/// the damped Newton iteration fails to converge.
fn complete_limit(weights: &[Vec<i64>], x: &Point, allowed: &[DVector<f64>]) -> Option<Point> {
    let k = allowed.len();
    let idx: Vec<usize> = (0..x.len()).filter(|&i| x[i].norm() > 0.0).collect();
    if idx.is_empty() || k == 0 {
        return Some(x.clone());
    }
    // Pairings of each surviving weight with the allowed directions.
    let p = DMatrix::from_fn(idx.len(), k, |r, c| {
        weights[idx[r]].iter().zip(allowed[c].iter()).map(|(w, a)| *w as f64 * a).sum::<f64>()
    });
    let c: Vec<f64> = idx.iter().map(|&i| x[i].norm_sqr()).collect();
    let scale: f64 = c.iter().sum();
    let energy = |beta: &DVector<f64>| -> f64 {
        let e = &p * beta;
        c.iter().zip(e.iter()).map(|(ci, ei)| 0.5 * ci * (2.0 * ei).exp()).sum()
    };
    let mut beta = DVector::<f64>::zeros(k);
    for _ in 0..200 {
        let e = &p * &beta;
        let g_i: Vec<f64> = c.iter().zip(e.iter()).map(|(ci, ei)| ci * (2.0 * ei).exp()).collect();
        let grad = p.transpose() * DVector::from_vec(g_i.clone());
        let weight_mat = DMatrix::from_diagonal(&DVector::from_vec(g_i.iter().map(|g| 2.0 * g).collect()));
        let hess = p.transpose() * weight_mat * &p;
        if grad.norm() <= 1e-14 * scale {
            break;
        }
        let svd = SVD::new(hess, true, true);
        let step = svd.solve(&(-&grad), 1e-12 * scale).ok()?;
        let f0 = energy(&beta);
        let slope = grad.dot(&step);
        let mut alpha = 1.0;
        loop {
            let trial = &beta + &step * alpha;
            if energy(&trial) <= f0 + 1e-4 * alpha * slope {
                beta = trial;
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-12 {
                return None;
            }
        }
        if beta.amax() > 200.0 {
            return None;
        }
    }
    let e = &p * &beta;
    let e = &e;
    let g_final: f64 = {
        let g_i: Vec<f64> = c.iter().zip(e.iter()).map(|(ci, ei)| ci * (2.0 * ei).exp()).collect();
        (p.transpose() * DVector::from_vec(g_i)).norm()
    };
    if g_final > 1e-9 * scale.max(1.0) {
        return None;
    }
    let mut out = Point::zeros(x.len());
    for (r, &i) in idx.iter().enumerate() {
        out[i] = x[i] * e[r].exp();
    }
    Some(out)
}

/// A direction `xi` with `exp(-i t xi) x0` converging to a point of the limit's
/// support set, or `None` when none is found.
fn witness_direction(
    rep: &Representation,
    field: &FlowField<'_>,
    x0: &Point,
    initial_support: &[usize],
    support: &[usize],
    limit: &Point,
    opts: &LimitOptions,
) -> Option<LieVector> {
    let mu = field.mu_hat(limit);
    let candidate = if rep.norm(&mu) > opts.mu_tol {
        mu
    } else {
        let weights = rep.weights()?;
        let kept: Vec<Vec<i64>> = support.iter().map(|&i| weights[i].clone()).collect();
        let lost: Vec<Vec<i64>> = initial_support
            .iter()
            .filter(|i| !support.contains(i))
            .map(|&i| weights[i].clone())
            .collect();
        let lambda = git::face_functional(&kept, &lost)?;
        let xi = lambda.as_lie_vector();
        // Remove components along the projected-away torus; they pair to zero
        // with every support weight of x0.
        let mut out = xi;
        for h in field.torus() {
            let p = rep.pair(h, &out);
            out = &out - &(h * p);
        }
        out
    };
    // Sign fixed by forward simulation: the ray must not diverge.
    let probe = 50.0;
    match complexified_action(rep, &candidate, probe, x0) {
        Ok(y) if y.norm() <= 2.0 * x0.norm() + 1.0 => Some(candidate),
        _ => {
            let flipped = -&candidate;
            complexified_action(rep, &flipped, probe, x0).ok().map(|_| flipped)
        }
    }
}

/// The limit of `exp(-i t xi) x0` as `t -> infinity` for a torus and the
/// pairing `<mu(x~), xi>`.
fn witness_limit(
    rep: &Representation,
    field: &FlowField<'_>,
    weights: &[Vec<i64>],
    x0: &Point,
    xi: &LieVector,
) -> (Point, f64) {
    let mut x_tilde = Point::zeros(x0.len());
    for (i, z) in x0.iter().enumerate() {
        let s: f64 = weights[i].iter().zip(xi.coords().iter()).map(|(w, c)| *w as f64 * c).sum();
        if s.abs() <= 1e-12 {
            x_tilde[i] = *z;
        }
    }
    let mu = field.mu_hat(&x_tilde);
    (x_tilde.clone(), rep.pair(&mu, xi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_matrix_rep, make_torus_rep, point, su2_basis};
    use approx::assert_relative_eq;

    fn pm1() -> Representation {
        make_torus_rep(1, &[vec![1], vec![-1]]).unwrap()
    }

    fn rank2() -> Representation {
        make_torus_rep(2, &[vec![1, 0], vec![-1, 0], vec![0, 1]]).unwrap()
    }

    fn until(t: f64) -> FlowParams {
        FlowParams { max_time: t, grad_tol: 1e-300_f64.max(f64::MIN_POSITIVE), ..FlowParams::default() }
    }

    #[test]
    fn params_validation() {
        assert!(FlowParams::default().validate().is_ok());
        let bad = FlowParams { grad_tol: 1.5, ..FlowParams::default() };
        assert_eq!(bad.validate().unwrap_err(), Error::InvalidFlowParams("grad_tol"));
        let bad = FlowParams { max_step: 0.0, ..FlowParams::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn closed_form_decay_on_axis() {
        // z' = -|z|^2 z / 2 gives |z(t)|^2 = 1 / (1 + t).
        let rep = pm1();
        let traj = integrate_flow(&rep, &point(&[(1.0, 0.0), (0.0, 0.0)]), &until(10.0)).unwrap();
        assert_eq!(traj.termination, Termination::MaxTimeReached);
        assert_relative_eq!(traj.terminal_time, 10.0);
        assert!((traj.terminal[0].norm_sqr() - 1.0 / 11.0).abs() < 1e-6);
        assert!(traj.max_energy_increase <= 0.0);
    }

    #[test]
    fn zero_of_moment_map_is_stationary() {
        let rep = pm1();
        let x = point(&[(1.0, 0.0), (1.0, 0.0)]);
        let traj = integrate_flow(&rep, &x, &FlowParams::default()).unwrap();
        assert_eq!(traj.termination, Termination::GradTolReached);
        assert_eq!(traj.terminal, x);
        assert_eq!(traj.samples.len(), 1);
    }

    /// Reduced oracle for weights (1, -1) from (2, 1): with u = |z1|^2, the
    /// conserved product gives |z2|^2 = 4/u and u' = -u (u - 4/u).
    fn reduced_oracle(t_end: f64) -> f64 {
        let f = |u: f64| -u * (u - 4.0 / u);
        let n = 200_000;
        let h = t_end / n as f64;
        let mut u = 4.0;
        for _ in 0..n {
            let k1 = f(u);
            let k2 = f(u + 0.5 * h * k1);
            let k3 = f(u + 0.5 * h * k2);
            let k4 = f(u + h * k3);
            u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        u
    }

    #[test]
    fn balanced_limit_from_two_one() {
        let rep = pm1();
        let x0 = point(&[(2.0, 0.0), (1.0, 0.0)]);
        let mid = integrate_flow(&rep, &x0, &until(0.5)).unwrap();
        assert!((mid.terminal[0].norm_sqr() - reduced_oracle(0.5)).abs() < 1e-8);
        let traj = integrate_flow(&rep, &x0, &FlowParams::default()).unwrap();
        assert_eq!(traj.termination, Termination::GradTolReached);
        let s = 2f64.sqrt();
        assert!((traj.terminal[0] - C64::new(s, 0.0)).norm() < 1e-6);
        assert!((traj.terminal[1] - C64::new(s, 0.0)).norm() < 1e-6);
        assert!(traj.terminal_mu_norm_sq().sqrt() <= 1e-6);
    }

    #[test]
    fn product_is_conserved() {
        let rep = pm1();
        let x0 = point(&[(2.0, 0.0), (1.0, 0.0)]);
        let traj = integrate_flow(&rep, &x0, &until(100.0)).unwrap();
        for s in &traj.samples {
            assert!((s.point[0] * s.point[1] - C64::new(2.0, 0.0)).norm() < 1e-8, "t = {}", s.t);
        }
    }

    #[test]
    fn velocity_is_the_gradient_of_half_energy() {
        // J sigma(mu) = -(1/2) grad |mu|^2, checked by central differences.
        let rep = make_torus_rep(2, &[vec![1, 2], vec![-3, 0], vec![2, -1]]).unwrap();
        let field = FlowField::new(&rep);
        let x = point(&[(0.4, -0.9), (1.2, 0.3), (-0.5, 0.8)]);
        let v = field.velocity(&x);
        let h = 1e-6;
        for i in 0..3 {
            for unit in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                let mut w = Point::zeros(3);
                w[i] = unit;
                let dir = (field.energy(&(&x + &w * C64::new(h, 0.0))) - field.energy(&(&x - &w * C64::new(h, 0.0)))) / (2.0 * h);
                let comp = (w.dotc(&v)).re;
                assert!((comp + 0.5 * dir).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn projected_flow_examples() {
        let rep = rank2();
        // Torus = whole algebra: nothing moves.
        let all = vec![LieVector::basis(2, 0), LieVector::basis(2, 1)];
        let x0 = point(&[(0.3, 0.0), (1.0, 0.5), (0.2, 0.0)]);
        let traj = projected_flow(&rep, &x0, &all, &FlowParams::default()).unwrap();
        assert_eq!(traj.terminal, x0);

        // Torus {e2} from (1,0,0): the e1 part decays as 1/(1+t).
        let x0 = point(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let traj = projected_flow(&rep, &x0, &[LieVector::basis(2, 1)], &until(10.0)).unwrap();
        assert!((traj.terminal[0].norm_sqr() - 1.0 / 11.0).abs() < 1e-6);
        let report = analyze_limit(&rep, &integrate_flow(&rep, &x0, &FlowParams::default()).unwrap(), &x0);
        assert!(report.limit.norm() < 1e-12);
        assert!(report.mu_norm <= 1e-6);
    }

    #[test]
    fn empty_torus_matches_plain_flow() {
        let rep = make_torus_rep(2, &[vec![1, 2], vec![-3, 0], vec![2, -1]]).unwrap();
        let x0 = point(&[(0.4, -0.9), (1.2, 0.3), (-0.5, 0.8)]);
        let p = FlowParams { max_time: 5.0, ..FlowParams::default() };
        let a = integrate_flow(&rep, &x0, &p).unwrap();
        let b = projected_flow(&rep, &x0, &[], &p).unwrap();
        assert_eq!(a.samples.len(), b.samples.len());
        for (s, r) in a.samples.iter().zip(&b.samples) {
            assert!((&s.point - &r.point).norm() <= 1e-9);
        }
    }

    #[test]
    fn projected_flow_rejects_non_commuting_torus() {
        let rep = make_matrix_rep(su2_basis()).unwrap();
        let v = vec![LieVector::basis(3, 0), LieVector::basis(3, 1)];
        let x0 = point(&[(1.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(
            projected_flow(&rep, &x0, &v, &FlowParams::default()),
            Err(Error::NotCommuting { a: 0, b: 1, .. })
        ));
    }

    #[test]
    fn analyze_limit_examples() {
        let rep = pm1();
        let x0 = point(&[(1.0, 0.0), (0.0, 0.0)]);
        let traj = integrate_flow(&rep, &x0, &FlowParams::default()).unwrap();
        let r = analyze_limit(&rep, &traj, &x0);
        assert_eq!(r.initial_support, vec![0]);
        assert!(r.support.is_empty());
        match &r.dichotomy {
            Dichotomy::OrbitClosureOnly { witness } => {
                assert_eq!(witness.to_vec(), vec![-1.0]);
                // exp(-i t xi) x0 -> 0.
                let y = complexified_action(&rep, witness, 40.0, &x0).unwrap();
                assert!(y.norm() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(r.final_clause, Some(true));

        let x0 = point(&[(1.0, 0.0), (1.0, 0.0)]);
        let r = analyze_limit(&rep, &integrate_flow(&rep, &x0, &FlowParams::default()).unwrap(), &x0);
        assert_eq!(r.dichotomy, Dichotomy::InOrbit);
        assert_eq!(r.mu_norm, 0.0);

        let x0 = point(&[(2.0, 0.0), (1.0, 0.0)]);
        let r = analyze_limit(&rep, &integrate_flow(&rep, &x0, &FlowParams::default()).unwrap(), &x0);
        assert_eq!(r.dichotomy, Dichotomy::InOrbit);
        assert!(r.mu_norm <= 1e-6);
        assert!((r.limit[0].re - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn semistable_limit_drops_the_boundary_face() {
        // Weights (1,0), (-1,0), (1,1): the origin sits on the edge between the
        // first two, so the third coordinate dies and the limit balances.
        let rep = make_torus_rep(2, &[vec![1, 0], vec![-1, 0], vec![1, 1]]).unwrap();
        let x0 = point(&[(1.0, 0.0), (0.5, 0.0), (0.8, 0.0)]);
        let traj = integrate_flow(&rep, &x0, &FlowParams::default()).unwrap();
        let r = analyze_limit(&rep, &traj, &x0);
        assert_eq!(r.support, vec![0, 1]);
        assert!(r.mu_norm <= 1e-9);
        assert!(matches!(r.dichotomy, Dichotomy::OrbitClosureOnly { .. }));
        assert!(r.stabilizer_dim >= r.initial_stabilizer_dim);
    }

    #[test]
    fn matrix_limits_are_undetermined() {
        let rep = make_matrix_rep(su2_basis()).unwrap();
        let x0 = point(&[(0.6, 0.1), (0.2, -0.3)]);
        let traj = integrate_flow(&rep, &x0, &FlowParams { max_time: 50.0, ..FlowParams::default() }).unwrap();
        let r = analyze_limit(&rep, &traj, &x0);
        assert_eq!(r.dichotomy, Dichotomy::Undetermined);
        // SU(2) on C^2 is unstable everywhere except 0: the flow decays.
        assert!(traj.terminal.norm() < x0.norm());
    }

    #[test]
    fn projective_flow_examples() {
        let rep = pm1();
        let x = point(&[(0.0, 0.0), (0.0, 0.0)]);
        let traj = projective_flow(&rep, &x, &FlowParams::default()).unwrap();
        assert_eq!(traj.terminal, x);
        let x0 = point(&[(0.05, 0.0), (0.0, 0.0)]);
        let traj = projective_flow(&rep, &x0, &FlowParams { max_time: 100.0, ..FlowParams::default() }).unwrap();
        let mut prev = f64::INFINITY;
        for s in &traj.samples {
            assert!(s.point.norm() <= 0.05 + 1e-15);
            assert!(s.point.norm() <= prev);
            prev = s.point.norm();
        }
    }

    #[test]
    fn projective_extension_is_fubini_study_outside_the_ball() {
        use crate::symplectic::moment_vector;
        let rep = make_torus_rep(2, &[vec![1, 2], vec![-3, 0], vec![2, -1]]).unwrap();
        let big = rep.with_trivial_summand();
        let field = FlowField::projective(&rep);
        let x = point(&[(1.4, -0.9), (1.2, 0.3), (-0.5, 0.8)]);
        let mut z = Point::zeros(4);
        z[0] = C64::new(1.0, 0.0);
        z.rows_mut(1, 3).copy_from(&x);
        let fs = moment_vector(&big, &z, Chart::Projective).unwrap();
        let r2 = EXTENSION_RADIUS * EXTENSION_RADIUS;
        let ext = field.mu_hat(&x);
        assert!((ext.coords() - fs.coords() * (1.0 + r2)).norm() < 1e-14);
        let h = homogeneous(&x);
        assert_relative_eq!(h.norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn projective_and_affine_flows_agree_inside_ball() {
        let rep = make_torus_rep(2, &[vec![1, 2], vec![-3, 0], vec![2, -1]]).unwrap();
        let x0 = point(&[(0.2, -0.1), (0.25, 0.1), (-0.15, 0.2)]);
        let p = FlowParams { max_time: 10.0, grad_tol: 1e-300, error_tol: 1e-11, ..FlowParams::default() };
        let a = integrate_flow(&rep, &x0, &p).unwrap();
        let b = projective_flow(&rep, &x0, &p).unwrap();
        assert!((&a.terminal - &b.terminal).norm() < 1e-4);
    }
}
