//! The continuous-time counterpart of the iteration:
//!
//! ```text
//! ẍ(t) + γ(t)ẋ(t) + τ(t)·Mx(t) = 0,    x(0) = x₀, ẋ(0) = v₀
//! ```
//!
//! with `M` the residual operator of [`fbf_residual_m`]. Integration runs on
//! a fixed grid with explicit Euler or classical Runge–Kutta.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::operators::{fbf_residual_m, InclusionProblem};
use crate::vecspace::Vector;

/// A nonnegative coefficient `t ↦ f(t)` on `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeFunction {
    Constant {
        value: f64,
    },
    /// `max(c0 + c1·t, floor)`
    Affine {
        c0: f64,
        c1: f64,
        floor: f64,
    },
    /// Piecewise linear through `(times[i], values[i])`, held constant
    /// outside the table.
    Table {
        times: Vec<f64>,
        values: Vec<f64>,
    },
}

impl TimeFunction {
    pub fn constant(value: f64) -> Self {
        TimeFunction::Constant { value }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TimeFunction::Constant { value } => *value,
            TimeFunction::Affine { c0, c1, floor } => (c0 + c1 * t).max(*floor),
            TimeFunction::Table { times, values } => {
                let i = times.partition_point(|s| *s <= t);
                if i == 0 {
                    values[0]
                } else if i == times.len() {
                    values[i - 1]
                } else {
                    let w = (t - times[i - 1]) / (times[i] - times[i - 1]);
                    values[i - 1] + w * (values[i] - values[i - 1])
                }
            }
        }
    }

    /// Right derivative, where a closed form exists.
    pub fn derivative(&self, t: f64) -> Option<f64> {
        match self {
            TimeFunction::Constant { .. } => Some(0.0),
            TimeFunction::Affine { c0, c1, floor } => {
                let line = c0 + c1 * t;
                Some(if line > *floor || (line == *floor && *c1 > 0.0) { *c1 } else { 0.0 })
            }
            TimeFunction::Table { .. } => None,
        }
    }

    fn validate(&self, name: &str, horizon: f64) -> Result<()> {
        let ok = match self {
            TimeFunction::Constant { value } => value.is_finite() && *value >= 0.0,
            TimeFunction::Affine { c0, c1, floor } => {
                [c0, c1, floor].iter().all(|c| c.is_finite()) && self.eval(0.0) >= 0.0 && self.eval(horizon) >= 0.0
            }
            TimeFunction::Table { times, values } => {
                !times.is_empty()
                    && times.len() == values.len()
                    && times.windows(2).all(|w| w[0] < w[1])
                    && times.iter().chain(values).all(|c| c.is_finite())
                    && values.iter().all(|v| *v >= 0.0)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::usage(format!("{name} must be a finite, nonnegative time function")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    ExplicitEuler,
    #[default]
    Rk4,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DynamicsConfig {
    pub gamma: TimeFunction,
    pub tau: TimeFunction,
    pub lambda: f64,
    pub x0: Vector,
    pub v0: Vector,
    pub horizon: f64,
    pub dt: f64,
    pub integrator: Integrator,
    /// Keep every `record_every`-th grid point (the final one is always kept).
    pub record_every: usize,
}

impl DynamicsConfig {
    /// rk4, records every step.
    pub fn new(gamma: TimeFunction, tau: TimeFunction, lambda: f64, x0: Vector, v0: Vector, horizon: f64, dt: f64) -> Self {
        DynamicsConfig { gamma, tau, lambda, x0, v0, horizon, dt, integrator: Integrator::Rk4, record_every: 1 }
    }

    pub fn with_integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    /// Number of grid steps, `round(T/Δt)`; the grid is `t_j = j·Δt`.
    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    pub fn validate(&self, p: &InclusionProblem) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::usage("dt must be positive"));
        }
        if !(self.horizon >= self.dt && self.horizon.is_finite()) {
            return Err(Error::usage("horizon must be at least dt"));
        }
        if self.record_every == 0 {
            return Err(Error::usage("record_every must be positive"));
        }
        check_dim(p.dim, self.x0.dim())?;
        check_dim(p.dim, self.v0.dim())?;
        self.gamma.validate("gamma", self.horizon)?;
        self.tau.validate("tau", self.horizon)?;
        if !(self.lambda > 0.0) {
            return Err(Error::usage("lambda must be positive"));
        }
        if let Some(l) = p.lipschitz() {
            if self.lambda * l >= 1.0 {
                return Err(Error::usage(format!("lambda*L = {} must be below 1", self.lambda * l)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrajectoryStatus {
    Complete,
    /// The state became non-finite at this time; samples stop before it.
    Diverged {
        time: f64,
    },
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vector>,
    pub velocities: Vec<Vector>,
    /// `‖ẋ(t_j)‖`
    pub speed: Vec<f64>,
    /// `‖Mx(t_j)‖`
    pub residual_m: Vec<f64>,
    /// `‖x(t_j) − y(t_j)‖`, `y = J_{λA}(x − λBx)`
    pub residual_xy: Vec<f64>,
    pub status: TrajectoryStatus,
}

impl Trajectory {
    fn with_capacity(n: usize) -> Self {
        Trajectory {
            times: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
            velocities: Vec::with_capacity(n),
            speed: Vec::with_capacity(n),
            residual_m: Vec::with_capacity(n),
            residual_xy: Vec::with_capacity(n),
            status: TrajectoryStatus::Complete,
        }
    }

    fn push(&mut self, t: f64, x: &Vector, v: &Vector, mx: &Vector, y: &Vector) {
        self.times.push(t);
        self.speed.push(v.norm());
        self.residual_m.push(mx.norm());
        self.residual_xy.push(x.dist(y));
        self.states.push(x.clone());
        self.velocities.push(v.clone());
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&Vector> {
        self.states.last()
    }

    pub fn is_complete(&self) -> bool {
        self.status == TrajectoryStatus::Complete
    }
}

/// Right-hand side `(v, −γ(t)v − τ(t)Mx)`; also hands back `Mx` and `y`.
fn field(p: &InclusionProblem, cfg: &DynamicsConfig, t: f64, x: &Vector, v: &Vector) -> Result<(Vector, Vector, Vector)> {
    let (mx, y) = fbf_residual_m(p, cfg.lambda, x)?;
    let acc = Vector::lincomb(-cfg.gamma.eval(t), v, -cfg.tau.eval(t), &mx);
    Ok((acc, mx, y))
}

/// Integrates the system on the grid `t_j = j·Δt`, `j = 0..=round(T/Δt)`.
///
/// A non-finite state stops the integration; the samples recorded so far
/// are returned with [`TrajectoryStatus::Diverged`].
pub fn integrate(p: &InclusionProblem, cfg: &DynamicsConfig) -> Result<Trajectory> {
    cfg.validate(p)?;
    let steps = cfg.steps();
    let dt = cfg.dt;
    let mut traj = Trajectory::with_capacity(steps / cfg.record_every + 2);
    let mut x = cfg.x0.clone();
    let mut v = cfg.v0.clone();
    for j in 0..=steps {
        let t = j as f64 * dt;
        let (acc, mx, y) = field(p, cfg, t, &x, &v)?;
        if !(x.is_finite() && v.is_finite() && mx.is_finite()) {
            traj.status = TrajectoryStatus::Diverged { time: t };
            break;
        }
        if j % cfg.record_every == 0 || j == steps {
            traj.push(t, &x, &v, &mx, &y);
        }
        if j == steps {
            break;
        }
        match cfg.integrator {
            Integrator::ExplicitEuler => {
                x.axpy(dt, &v);
                v.axpy(dt, &acc);
            }
            Integrator::Rk4 => {
                let (k1x, k1v) = (v.clone(), acc);
                let x2 = Vector::lincomb(1.0, &x, 0.5 * dt, &k1x);
                let v2 = Vector::lincomb(1.0, &v, 0.5 * dt, &k1v);
                let k2v = field(p, cfg, t + 0.5 * dt, &x2, &v2)?.0;
                let k2x = v2;
                let x3 = Vector::lincomb(1.0, &x, 0.5 * dt, &k2x);
                let v3 = Vector::lincomb(1.0, &v, 0.5 * dt, &k2v);
                let k3v = field(p, cfg, t + 0.5 * dt, &x3, &v3)?.0;
                let k3x = v3;
                let x4 = Vector::lincomb(1.0, &x, dt, &k3x);
                let v4 = Vector::lincomb(1.0, &v, dt, &k3v);
                let k4v = field(p, cfg, t + dt, &x4, &v4)?.0;
                let k4x = v4;
                for (target, k1, k2, k3, k4) in [(&mut x, &k1x, &k2x, &k3x, &k4x), (&mut v, &k1v, &k2v, &k3v, &k4v)] {
                    let slots = target.as_mut_slice();
                    for (i, s) in slots.iter_mut().enumerate() {
                        *s += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                    }
                }
            }
        }
    }
    log::debug!("integrated {} samples, status {:?}", traj.len(), traj.status);
    Ok(traj)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub time: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub ok: bool,
    /// `θ = κ·inf(γ²/τ) − 1` over the grid.
    pub margin: f64,
    pub first_violation: Option<Violation>,
}

/// Checks `γ̇ ≤ 0 ≤ τ̇` and `γ²/τ ≥ (1 + θ)/κ` with `θ > 0` on the grid.
///
/// Derivatives are analytic for constant and affine functions and forward
/// differences along the grid for tables.
///
/// ```
/// use rifbf::dynamics::{check_assumption, TimeFunction};
///
/// let grid: Vec<f64> = (0..=10).map(f64::from).collect();
/// let r = check_assumption(&TimeFunction::constant(3.0), &TimeFunction::constant(1.0), 0.5, &grid).unwrap();
/// assert!(r.ok);
/// assert!((r.margin - 3.5).abs() < 1e-15);
/// ```
pub fn check_assumption(gamma: &TimeFunction, tau: &TimeFunction, kappa: f64, grid: &[f64]) -> Result<AssumptionReport> {
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(Error::usage(format!("kappa must lie in (0, 1], got {kappa}")));
    }
    if grid.is_empty() || !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::usage("grid must be non-empty and strictly increasing"));
    }
    let slope = |f: &TimeFunction, i: usize| -> Option<f64> {
        f.derivative(grid[i]).or_else(|| grid.get(i + 1).map(|next| f.eval(*next) - f.eval(grid[i])))
    };
    let mut inf_ratio = f64::INFINITY;
    let mut first_violation = None;
    let mut note = |time: f64, reason: String| {
        if first_violation.is_none() {
            first_violation = Some(Violation { time, reason });
        }
    };
    for (i, &t) in grid.iter().enumerate() {
        let (g, s) = (gamma.eval(t), tau.eval(t));
        if s == 0.0 {
            return Err(Error::usage(format!("tau vanishes at t = {t}")));
        }
        if g < 0.0 || s < 0.0 {
            note(t, format!("negative coefficient: gamma = {g}, tau = {s}"));
        }
        if let Some(dg) = slope(gamma, i).filter(|d| *d > 0.0) {
            note(t, format!("gamma increasing (slope {dg})"));
        }
        if let Some(ds) = slope(tau, i).filter(|d| *d < 0.0) {
            note(t, format!("tau decreasing (slope {ds})"));
        }
        let ratio = g * g / s;
        if kappa * ratio - 1.0 <= 0.0 {
            note(t, format!("kappa*gamma^2/tau - 1 = {} is not positive", kappa * ratio - 1.0));
        }
        inf_ratio = inf_ratio.min(ratio);
    }
    let margin = kappa * inf_ratio - 1.0;
    Ok(AssumptionReport { ok: first_violation.is_none() && margin > 0.0, margin, first_violation })
}

/// `α_k = 1 − γ_k h_k`, `ρ_k = h_k²τ_k`: the explicit two-step
/// discretization of the system, written as the inertial iteration.
pub fn discretize_to_rifbf(gammas: &[f64], taus: &[f64], hs: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if gammas.len() != taus.len() || gammas.len() != hs.len() {
        return Err(Error::usage("gamma, tau and h sequences must have equal length"));
    }
    let mut alphas = Vec::with_capacity(hs.len());
    let mut rhos = Vec::with_capacity(hs.len());
    for (k, ((&g, &s), &h)) in gammas.iter().zip(taus).zip(hs).enumerate() {
        if !(h > 0.0 && g >= 0.0 && s > 0.0) || !(h.is_finite() && g.is_finite() && s.is_finite()) {
            return Err(Error::usage(format!("need h > 0, gamma >= 0, tau > 0 at k = {}", k + 1)));
        }
        if g * h > 1.0 {
            return Err(Error::usage(format!("gamma*h = {} exceeds 1 at k = {}", g * h, k + 1)));
        }
        alphas.push(1.0 - g * h);
        rhos.push(h * h * s);
    }
    Ok((alphas, rhos))
}
