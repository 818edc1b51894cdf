//! The relaxed inertial forward-backward-forward iteration.
//!
//! From `x_{k−1}, x_k` and stepsize `λ_k`:
//!
//! ```text
//! z_k     = x_k + α_k (x_k − x_{k−1})
//! y_k     = J_{λ_k A}(z_k − λ_k B z_k)
//! t_k     = y_k − λ_k (B y_k − B z_k)
//! x_{k+1} = (1 − ρ_k) z_k + ρ_k t_k
//! ```
//!
//! `ρ ≡ 1` gives the inertial variant, `α ≡ 0` the relaxed one, and both
//! together Tseng's method. The run loop stops on `‖y_k − z_k‖ ≤ ε`, which is
//! tested before `t_k` is formed, so a terminating iteration costs one
//! forward evaluation less than a full step.

mod baselines;
mod diagnostics;
mod schedule;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::operators::InclusionProblem;
use crate::stepsize::{next_lambda, StepsizeKind, StepsizeRule};
use crate::vecspace::Vector;

pub use baselines::{extragradient_step, fb_step, run_extragradient, run_forward_backward};
pub use diagnostics::{delta_k, lyapunov_h, monitor_main_inequality, past_descent_threshold, rho_bound, validate_params, ParamCheck};
pub use schedule::Schedule;

/// Which optional diagnostics a run records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Monitors {
    /// `H_k` and the main inequality slack; needs a known solution.
    pub lyapunov: bool,
    /// Merit function at every iterate; needs a problem with a gap.
    pub gap: bool,
}

impl Monitors {
    pub fn none() -> Self {
        Monitors::default()
    }

    pub fn all() -> Self {
        Monitors { lyapunov: true, gap: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub alpha: Schedule,
    pub rho: Schedule,
    pub stepsize: StepsizeKind,
    pub eps: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub monitors: Monitors,
}

impl SolverConfig {
    /// Constant `α`, `ρ` with the given stepsize rule, `ε = 1e-5`, `10⁴`
    /// iterations and no optional monitors.
    pub fn new(alpha: f64, rho: f64, stepsize: StepsizeKind) -> Self {
        SolverConfig {
            alpha: Schedule::constant(alpha),
            rho: Schedule::constant(rho),
            stepsize,
            eps: 1e-5,
            max_iter: 10_000,
            seed: 0,
            monitors: Monitors::none(),
        }
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_monitors(mut self, monitors: Monitors) -> Self {
        self.monitors = monitors;
        self
    }

    /// Checks schedule shapes and the relaxation bound at the limiting
    /// `(α, ρ, μ)`. `μ` is `λL` for a constant stepsize; when `L` is
    /// unknown there the bound cannot be checked and only a warning is logged.
    pub fn validate(&self, lipschitz: Option<f64>) -> Result<()> {
        self.alpha.check_inertial()?;
        self.rho.check_relaxation()?;
        if !(self.eps > 0.0) {
            return Err(Error::usage("tolerance must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::usage("max_iter must be at least 1"));
        }
        let rule = StepsizeRule::from_kind(self.stepsize)?;
        let Some(mu) = rule.mu(lipschitz) else {
            log::warn!("constant stepsize without a Lipschitz constant; relaxation bound not checked");
            return Ok(());
        };
        match validate_params(self.alpha.limit(), self.rho.limit(), mu)? {
            ParamCheck::Ok { .. } => Ok(()),
            ParamCheck::Violation { reason, .. } => Err(Error::Usage(reason)),
        }
    }
}

/// `(x_{k−1}, x_k)` together with the stepsize `λ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateState {
    pub k: usize,
    pub x_prev: Vector,
    pub x: Vector,
    pub lambda: f64,
}

impl IterateState {
    /// `x_1 = x_0`.
    pub fn start(x0: Vector, lambda: f64) -> Self {
        IterateState { k: 1, x_prev: x0.clone(), x: x0, lambda }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutput {
    pub next: IterateState,
    pub y: Vector,
    pub z: Vector,
    pub t: Vector,
    pub theta: f64,
}

struct Extrapolated {
    z: Vector,
    bz: Vector,
    y: Vector,
}

fn ensure_finite(k: usize, vs: &[&Vector]) -> Result<()> {
    if vs.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NumericalFailure { iteration: k })
    }
}

fn extrapolate(p: &InclusionProblem, k: usize, x_prev: &Vector, x: &Vector, alpha: f64, lambda: f64) -> Result<Extrapolated> {
    let z = if alpha == 0.0 { x.clone() } else { Vector::lincomb(1.0 + alpha, x, -alpha, x_prev) };
    let bz = p.forward.eval(&z)?;
    let y = p.resolvent.resolve(lambda, &Vector::lincomb(1.0, &z, -lambda, &bz))?;
    ensure_finite(k, &[&z, &bz, &y])?;
    Ok(Extrapolated { z, bz, y })
}

/// Returns `(By, t, x_next)`.
fn complete(p: &InclusionProblem, k: usize, e: &Extrapolated, lambda: f64, rho: f64) -> Result<(Vector, Vector, Vector)> {
    let by = p.forward.eval(&e.y)?;
    let mut t = e.y.clone();
    t.axpy(-lambda, &by);
    t.axpy(lambda, &e.bz);
    let x_next = Vector::lincomb(1.0 - rho, &e.z, rho, &t);
    ensure_finite(k, &[&by, &t, &x_next])?;
    Ok((by, t, x_next))
}

/// One full step. Uses `λ_k = rule.current()`, then advances the rule with
/// `(y_k, z_k)`. Exactly two evaluations of `B` and one resolvent call.
pub fn rifbf_step(p: &InclusionProblem, s: &IterateState, alpha: f64, rho: f64, rule: &mut StepsizeRule) -> Result<StepOutput> {
    if !(0.0..1.0).contains(&alpha) || !(rho > 0.0) {
        return Err(Error::usage(format!("need alpha in [0, 1) and rho > 0, got {alpha}, {rho}")));
    }
    check_dim(p.dim, s.x.dim())?;
    check_dim(p.dim, s.x_prev.dim())?;
    let lambda = rule.current();
    let e = extrapolate(p, s.k, &s.x_prev, &s.x, alpha, lambda)?;
    let (by, t, x_next) = complete(p, s.k, &e, lambda, rho)?;
    let (lambda_next, theta) = next_lambda(rule, &e.y, &e.z, &by, &e.bz);
    Ok(StepOutput { next: IterateState { k: s.k + 1, x_prev: s.x.clone(), x: x_next, lambda: lambda_next }, y: e.y, z: e.z, t, theta })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIter,
    NumericalFailure,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxIter => "max_iter",
            Termination::NumericalFailure => "numerical_failure",
        }
    }
}

/// One row of a run trace. Fields that need a completed step are `None` on
/// the terminating row; `delta` of row `k` needs `θ_{k+1}` and is filled in
/// when step `k + 1` completes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRow {
    pub k: usize,
    pub residual: f64,
    pub lambda: f64,
    pub theta: Option<f64>,
    pub delta: Option<f64>,
    pub h: Option<f64>,
    pub main_slack: Option<f64>,
    pub gap: Option<f64>,
    pub step_norm: Option<f64>,
}

impl IterationRow {
    fn new(k: usize, residual: f64, lambda: f64) -> Self {
        IterationRow { k, residual, lambda, theta: None, delta: None, h: None, main_slack: None, gap: None, step_norm: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub rows: Vec<IterationRow>,
    pub termination: Termination,
    pub iterations_used: usize,
    pub wall_time: f64,
    /// `μ` used by the diagnostics, when known.
    pub mu: Option<f64>,
    /// Last iterate `x_k` whose residual was measured.
    pub final_x: Vector,
}

impl RunRecord {
    pub fn final_residual(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.residual)
    }

    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    /// First `k` with `μ²θ_k² < (1 + μ²)/2`.
    pub fn k0(&self) -> Option<usize> {
        let mu = self.mu?;
        self.rows.iter().find(|r| r.theta.is_some_and(|th| past_descent_threshold(mu, th))).map(|r| r.k)
    }

    /// Iterations `k ≥ k₀` where `H_{k+1} − H_k ≤ −δ_k‖x_{k+1} − x_k‖² + slack`
    /// fails, with the excess.
    pub fn descent_violations(&self, slack: f64) -> Vec<(usize, f64)> {
        let Some(k0) = self.k0() else { return Vec::new() };
        self.rows
            .windows(2)
            .filter(|w| w[0].k >= k0)
            .filter_map(|w| {
                let (h0, h1, delta, step) = (w[0].h?, w[1].h?, w[0].delta?, w[0].step_norm?);
                let excess = (h1 - h0) + delta * step * step;
                (excess > slack).then_some((w[0].k, excess))
            })
            .collect()
    }

    /// Number of consecutive row pairs the descent check actually covers.
    pub fn descent_checked_pairs(&self) -> usize {
        let Some(k0) = self.k0() else { return 0 };
        self.rows.windows(2).filter(|w| w[0].k >= k0 && w[0].h.is_some() && w[1].h.is_some() && w[0].delta.is_some()).count()
    }

    pub fn min_main_slack(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.main_slack).reduce(f64::min)
    }

    /// Partial sum `Σ δ_k ‖x_{k+1} − x_k‖²`.
    pub fn weighted_step_sum(&self) -> f64 {
        self.rows.iter().filter_map(|r| Some(r.delta? * r.step_norm?.powi(2))).sum()
    }
}

/// Iterates from `x_1 = x_0` until `‖y_k − z_k‖ ≤ ε` or `k = max_iter`.
///
/// Parameters are validated first; an inadmissible `(α, ρ, μ)` is rejected
/// before any work. A non-finite value ends the run with
/// [`Termination::NumericalFailure`] and the partial trace.
pub fn run(p: &InclusionProblem, cfg: &SolverConfig, x0: &Vector) -> Result<RunRecord> {
    check_dim(p.dim, x0.dim())?;
    if !x0.is_finite() {
        return Err(Error::usage("starting point must be finite"));
    }
    cfg.validate(p.lipschitz())?;
    let started = Instant::now();
    let mut rule = StepsizeRule::from_kind(cfg.stepsize)?;
    let mu = rule.mu(p.lipschitz());
    let x_star = if cfg.monitors.lyapunov { p.known_solution.as_ref() } else { None };
    let gap = if cfg.monitors.gap { p.gap.as_ref() } else { None };

    let mut x_prev = x0.clone();
    let mut x = x0.clone();
    let mut rows: Vec<IterationRow> = Vec::new();
    // (α_k, ρ_k, θ_k) of the last completed step, for δ_k
    let mut last_step: Option<(f64, f64, f64)> = None;
    let mut termination = Termination::MaxIter;

    for k in 1..=cfg.max_iter {
        let (alpha, rho, lambda) = (cfg.alpha.at(k), cfg.rho.at(k), rule.current());
        let e = match extrapolate(p, k, &x_prev, &x, alpha, lambda) {
            Ok(e) => e,
            Err(Error::NumericalFailure { .. }) => {
                termination = Termination::NumericalFailure;
                break;
            }
            Err(err) => return Err(err),
        };
        let mut row = IterationRow::new(k, e.y.dist(&e.z), lambda);
        if let Some(g) = gap {
            row.gap = Some(g(&x)?);
        }
        if !row.residual.is_finite() {
            rows.push(row);
            termination = Termination::NumericalFailure;
            break;
        }
        if row.residual <= cfg.eps {
            rows.push(row);
            termination = Termination::Converged;
            break;
        }
        if k == cfg.max_iter {
            rows.push(row);
            break;
        }
        let (by, t, x_next) = match complete(p, k, &e, lambda, rho) {
            Ok(v) => v,
            Err(Error::NumericalFailure { .. }) => {
                rows.push(row);
                termination = Termination::NumericalFailure;
                break;
            }
            Err(err) => return Err(err),
        };
        let (_, theta) = next_lambda(&mut rule, &e.y, &e.z, &by, &e.bz);
        row.theta = Some(theta);
        row.step_norm = Some(x_next.dist(&x));
        if let (Some(xs), Some(mu)) = (x_star, mu) {
            row.h = Some(lyapunov_h(&x, &x_prev, xs, alpha, rho, theta, mu));
            row.main_slack = Some(monitor_main_inequality(&e.z, &e.y, &t, xs, mu, theta));
        }
        if let (Some((a0, r0, th0)), Some(mu)) = (last_step, mu) {
            if let Some(prev) = rows.last_mut() {
                prev.delta = Some(delta_k(a0, alpha, r0, rho, th0, theta, mu));
            }
        }
        last_step = Some((alpha, rho, theta));
        rows.push(row);
        x_prev = std::mem::replace(&mut x, x_next);
    }

    let record = RunRecord { iterations_used: rows.len(), rows, termination, wall_time: started.elapsed().as_secs_f64(), mu, final_x: x };
    if let Some(k0) = record.k0() {
        if let Some(bad) = record.rows.iter().find(|r| r.k >= k0 && r.delta.is_some_and(|d| d <= 0.0)) {
            log::warn!("delta_k = {:?} is not positive at k = {} (k0 = {k0})", bad.delta, bad.k);
        }
    }
    Ok(record)
}
