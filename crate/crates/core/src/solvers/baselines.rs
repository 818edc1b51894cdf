//! Reference methods: forward-backward and the extragradient method.

use std::time::Instant;

use crate::error::{check_dim, Error, Result};
use crate::operators::{Forward, InclusionProblem, Resolvent};
use crate::vecspace::Vector;

use super::{IterationRow, RunRecord, Termination};

/// `J_{λA}(x − λBx)`. Convergent for cocoercive `B` with `λ ∈ (0, 2/L)`.
pub fn fb_step(p: &InclusionProblem, x: &Vector, lambda: f64) -> Result<Vector> {
    check_dim(p.dim, x.dim())?;
    let bx = p.forward.eval(x)?;
    p.resolvent.resolve(lambda, &Vector::lincomb(1.0, x, -lambda, &bx))
}

/// Returns `(y, x_next)` with `y = P_C(x − λBx)`, `x_next = P_C(x − λBy)`.
fn extragradient_pair(b: &dyn Forward, project: &dyn Resolvent, x: &Vector, lambda: f64) -> Result<(Vector, Vector)> {
    let bx = b.eval(x)?;
    let y = project.resolve(lambda, &Vector::lincomb(1.0, x, -lambda, &bx))?;
    let by = b.eval(&y)?;
    let next = project.resolve(lambda, &Vector::lincomb(1.0, x, -lambda, &by))?;
    Ok((y, next))
}

/// Korpelevich's step: two projections onto `C` and two forward evaluations.
pub fn extragradient_step(b: &dyn Forward, project: &dyn Resolvent, x: &Vector, lambda: f64) -> Result<Vector> {
    Ok(extragradient_pair(b, project, x, lambda)?.1)
}

fn baseline_run(
    x0: &Vector,
    lambda: f64,
    eps: f64,
    max_iter: usize,
    mut step: impl FnMut(&Vector) -> Result<(Vector, Vector)>,
) -> Result<RunRecord> {
    if !(lambda > 0.0) || !(eps > 0.0) || max_iter == 0 {
        return Err(Error::usage("need lambda > 0, eps > 0 and max_iter >= 1"));
    }
    let started = Instant::now();
    let mut x = x0.clone();
    let mut rows = Vec::new();
    let mut termination = Termination::MaxIter;
    for k in 1..=max_iter {
        let (y, next) = step(&x)?;
        let residual = y.dist(&x);
        let mut row = IterationRow::new(k, residual, lambda);
        if !residual.is_finite() || !next.is_finite() {
            rows.push(row);
            termination = Termination::NumericalFailure;
            break;
        }
        if residual <= eps {
            rows.push(row);
            termination = Termination::Converged;
            break;
        }
        if k == max_iter {
            rows.push(row);
            break;
        }
        row.step_norm = Some(next.dist(&x));
        rows.push(row);
        x = next;
    }
    Ok(RunRecord { iterations_used: rows.len(), rows, termination, wall_time: started.elapsed().as_secs_f64(), mu: None, final_x: x })
}

/// Forward-backward iteration; the residual is `‖x_{k+1} − x_k‖`.
pub fn run_forward_backward(p: &InclusionProblem, lambda: f64, eps: f64, max_iter: usize, x0: &Vector) -> Result<RunRecord> {
    check_dim(p.dim, x0.dim())?;
    baseline_run(x0, lambda, eps, max_iter, |x| {
        let next = fb_step(p, x, lambda)?;
        Ok((next.clone(), next))
    })
}

/// Extragradient iteration on `C` given by the problem's resolvent; the
/// residual is `‖y_k − x_k‖`.
pub fn run_extragradient(p: &InclusionProblem, lambda: f64, eps: f64, max_iter: usize, x0: &Vector) -> Result<RunRecord> {
    check_dim(p.dim, x0.dim())?;
    baseline_run(x0, lambda, eps, max_iter, |x| extragradient_pair(p.forward.as_ref(), p.resolvent.as_ref(), x, lambda))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::operators::{AffineOperator, BallProjection, OperatorClass, ZeroOperator};
    use crate::vecspace::Matrix;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn fb_with_zero_forward_is_the_resolvent() {
        let p = InclusionProblem::new("ball", 2, Arc::new(BallProjection::new(2, 1.0).unwrap()), Arc::new(ZeroOperator { dim: 2 }));
        let out = fb_step(&p, &v(&[3.0, 4.0]), 0.7).unwrap();
        assert!((out[0] - 0.6).abs() < 1e-15 && (out[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn fb_identity_forward_lands_on_zero() {
        let id = AffineOperator::new(Matrix::identity(3), Vector::zeros(3), OperatorClass::Cocoercive).unwrap();
        let p = InclusionProblem::new("id", 3, Arc::new(ZeroOperator { dim: 3 }), Arc::new(id));
        assert_eq!(fb_step(&p, &v(&[1.0, -7.0, 2.5]), 1.0).unwrap(), Vector::zeros(3));
    }

    #[test]
    fn extragradient_zero_forward_projects() {
        let ball = BallProjection::new(2, 1.0).unwrap();
        let out = extragradient_step(&ZeroOperator { dim: 2 }, &ball, &v(&[3.0, 4.0]), 0.1).unwrap();
        assert!((out[0] - 0.6).abs() < 1e-15 && (out[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn extragradient_keeps_a_solution_fixed() {
        // B(x) = x − c with c outside the unit ball: x* = c/‖c‖
        let c = v(&[2.0, 0.0]);
        let b = AffineOperator::new(Matrix::identity(2), -&c, OperatorClass::Cocoercive).unwrap();
        let ball = BallProjection::new(2, 1.0).unwrap();
        let x_star = v(&[1.0, 0.0]);
        let out = extragradient_step(&b, &ball, &x_star, 0.4).unwrap();
        assert!(out.dist(&x_star) < 1e-12);
    }
}
