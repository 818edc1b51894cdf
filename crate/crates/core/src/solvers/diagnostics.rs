//! Parameter admissibility and the Lyapunov quantities used to monitor runs.
//!
//! For a solution `x*`, the iteration satisfies
//!
//! ```text
//! ‖t_k − x*‖² ≤ ‖z_k − x*‖² − (1 − μ²θ_k²)‖y_k − z_k‖²
//! H_{k+1} − H_k ≤ −δ_k ‖x_{k+1} − x_k‖²          (k ≥ k₀)
//! ```
//!
//! with `H_k` from [`lyapunov_h`] and `δ_k` from [`delta_k`]. Both are
//! recorded per iteration by [`run`](super::run) when `x*` is known.

use crate::error::{Error, Result};
use crate::vecspace::Vector;

/// Outcome of [`validate_params`].
#[derive(Debug, Clone, PartialEq)]
pub enum ParamCheck {
    Ok { bound: f64 },
    Violation { bound: f64, reason: String },
}

impl ParamCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, ParamCheck::Ok { .. })
    }

    pub fn bound(&self) -> f64 {
        match self {
            ParamCheck::Ok { bound } | ParamCheck::Violation { bound, .. } => *bound,
        }
    }
}

/// Largest admissible limiting relaxation for inertia `α` and stepsize
/// parameter `μ`: `(2/(1+μ))·(1−α)²/(2α² − α + 1)`.
pub fn rho_bound(alpha: f64, mu: f64) -> f64 {
    2.0 / (1.0 + mu) * (1.0 - alpha).powi(2) / (2.0 * alpha * alpha - alpha + 1.0)
}

/// Checks `0 < ρ < ρ̄(α, μ)`, which makes the limiting `δ` positive.
///
/// Out-of-domain arguments (`α ∉ [0,1)`, `μ ∉ [0,1)`, `ρ ≤ 0`) are usage
/// errors rather than violations.
pub fn validate_params(alpha: f64, rho: f64, mu: f64) -> Result<ParamCheck> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::usage(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    if !(0.0..1.0).contains(&mu) {
        return Err(Error::usage(format!("mu must lie in [0, 1), got {mu}")));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::usage(format!("rho must be positive, got {rho}")));
    }
    let bound = rho_bound(alpha, mu);
    if rho < bound {
        Ok(ParamCheck::Ok { bound })
    } else {
        Ok(ParamCheck::Violation { bound, reason: format!("rho = {rho} is not below the bound {bound:.6} for alpha = {alpha}, mu = {mu}") })
    }
}

fn weight(alpha: f64, rho: f64, theta: f64, mu: f64) -> f64 {
    2.0 * alpha * (alpha + (1.0 - alpha) / (rho * (1.0 + mu * theta)))
}

/// `δ_k = (1−α_k)(2/(ρ_k(1+μθ_k)) − 1) − 2α_{k+1}(α_{k+1} + (1−α_{k+1})/(ρ_{k+1}(1+μθ_{k+1})))`
pub fn delta_k(alpha_k: f64, alpha_next: f64, rho_k: f64, rho_next: f64, theta_k: f64, theta_next: f64, mu: f64) -> f64 {
    (1.0 - alpha_k) * (2.0 / (rho_k * (1.0 + mu * theta_k)) - 1.0) - weight(alpha_next, rho_next, theta_next, mu)
}

/// `H_k = ‖x_k − x*‖² − α_k‖x_{k−1} − x*‖² + 2α_k(α_k + (1−α_k)/(ρ_k(1+μθ_k)))‖x_k − x_{k−1}‖²`
pub fn lyapunov_h(x_k: &Vector, x_prev: &Vector, x_star: &Vector, alpha_k: f64, rho_k: f64, theta_k: f64, mu: f64) -> f64 {
    let d_k = x_k.dist(x_star);
    let d_prev = x_prev.dist(x_star);
    let step = x_k.dist(x_prev);
    d_k * d_k - alpha_k * d_prev * d_prev + weight(alpha_k, rho_k, theta_k, mu) * step * step
}

/// Slack `RHS − LHS` of `‖t − x*‖² ≤ ‖z − x*‖² − (1 − μ²θ²)‖y − z‖²`.
pub fn monitor_main_inequality(z: &Vector, y: &Vector, t: &Vector, x_star: &Vector, mu: f64, theta: f64) -> f64 {
    let lhs = t.dist(x_star).powi(2);
    let rhs = z.dist(x_star).powi(2) - (1.0 - mu * mu * theta * theta) * y.dist(z).powi(2);
    rhs - lhs
}

/// Whether iteration `k` with stepsize ratio `θ_k` lies past the threshold
/// `μ²θ_k² < (1 + μ²)/2` from which descent of `H_k` is guaranteed.
pub fn past_descent_threshold(mu: f64, theta: f64) -> bool {
    mu * mu * theta * theta < (1.0 + mu * mu) / 2.0
}
