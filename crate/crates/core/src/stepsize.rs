//! Stepsize schedules for the forward-backward-forward family.
//!
//! A constant `λ ∈ (0, 1/L)` needs the Lipschitz constant of `B`; the
//! adaptive rule
//!
//! ```text
//! λ_{k+1} = min{ λ_k, μ‖y_k − z_k‖ / ‖By_k − Bz_k‖ }   if By_k ≠ Bz_k
//!         = λ_k                                       otherwise
//! ```
//!
//! does not. The constant rule is the adaptive one with `λ₁ = λ`, `μ = λL`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vecspace::Vector;

/// Default adaptive parameters.
pub const DEFAULT_MU: f64 = 0.5;
pub const DEFAULT_LAMBDA1: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepsizeKind {
    Constant { lambda: f64 },
    Adaptive { mu: f64, lambda1: f64 },
}

/// A stepsize rule together with its per-run state `λ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepsizeRule {
    kind: StepsizeKind,
    current: f64,
}

impl StepsizeRule {
    pub fn constant(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::usage(format!("constant stepsize must be positive, got {lambda}")));
        }
        Ok(StepsizeRule { kind: StepsizeKind::Constant { lambda }, current: lambda })
    }

    pub fn adaptive(mu: f64, lambda1: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::usage(format!("adaptive rule needs mu in (0, 1), got {mu}")));
        }
        if !(lambda1 > 0.0 && lambda1.is_finite()) {
            return Err(Error::usage(format!("initial stepsize must be positive, got {lambda1}")));
        }
        Ok(StepsizeRule { kind: StepsizeKind::Adaptive { mu, lambda1 }, current: lambda1 })
    }

    pub fn from_kind(kind: StepsizeKind) -> Result<Self> {
        match kind {
            StepsizeKind::Constant { lambda } => Self::constant(lambda),
            StepsizeKind::Adaptive { mu, lambda1 } => Self::adaptive(mu, lambda1),
        }
    }

    pub fn kind(&self) -> StepsizeKind {
        self.kind
    }

    /// The stepsize `λ_k` the next step will use.
    pub fn current(&self) -> f64 {
        self.current
    }

    /// Restores `λ_1` for a fresh run.
    pub fn reset(&mut self) {
        self.current = match self.kind {
            StepsizeKind::Constant { lambda } => lambda,
            StepsizeKind::Adaptive { lambda1, .. } => lambda1,
        };
    }

    /// The `μ` that the convergence analysis attaches to this rule: the
    /// adaptive parameter itself, or `λL` for a constant stepsize.
    pub fn mu(&self, lipschitz: Option<f64>) -> Option<f64> {
        match self.kind {
            StepsizeKind::Adaptive { mu, .. } => Some(mu),
            StepsizeKind::Constant { lambda } => lipschitz.map(|l| lambda * l),
        }
    }

    /// Guaranteed floor `min{λ₁, μ/L}` of the adaptive sequence.
    pub fn lower_bound(&self, lipschitz: f64) -> f64 {
        match self.kind {
            StepsizeKind::Constant { lambda } => lambda,
            StepsizeKind::Adaptive { mu, lambda1 } => lambda1.min(mu / lipschitz),
        }
    }
}

/// Advances the rule from `λ_k` to `λ_{k+1}` using the pair `(y_k, z_k)`.
///
/// Returns `(λ_{k+1}, θ_k)` with `θ_k = λ_k / λ_{k+1}`. The `By = Bz` branch
/// is decided by comparing the difference norm to exactly `0.0`.
pub fn next_lambda(rule: &mut StepsizeRule, y: &Vector, z: &Vector, by: &Vector, bz: &Vector) -> (f64, f64) {
    let lambda_k = rule.current;
    let next = match rule.kind {
        StepsizeKind::Constant { lambda } => lambda,
        StepsizeKind::Adaptive { mu, .. } => {
            let diff = by.dist(bz);
            if diff != 0.0 {
                lambda_k.min(mu * y.dist(z) / diff)
            } else {
                lambda_k
            }
        }
    };
    rule.current = next;
    (next, lambda_k / next)
}

/// `‖By − Bz‖ ≤ (μ/λ_{k+1})‖y − z‖`, up to a relative slack of `1e-12`.
pub fn check_lips_inequality(lambda_next: f64, mu: f64, y: &Vector, z: &Vector, by: &Vector, bz: &Vector) -> bool {
    let lhs = by.dist(bz);
    if lhs == 0.0 {
        return true;
    }
    let rhs = mu / lambda_next * y.dist(z);
    lhs <= rhs * (1.0 + 1e-12)
}
