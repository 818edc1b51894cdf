//! Shared test oracles. Nothing here calls into the solver code paths being
//! tested except the operator evaluations themselves.
#![allow(dead_code)]

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rifbf::operators::{Forward, OperatorClass, Resolvent};
use rifbf::{Matrix, Result, Rng, Vector};

/// Singular values by one-sided Jacobi rotations, largest first.
pub fn jacobi_singular_values(m: &Matrix) -> Vec<f64> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut c: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| m.get(i, j)).collect()).collect();
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = c[p].iter().map(|x| x * x).sum();
                let beta: f64 = c[q].iter().map(|x| x * x).sum();
                let gamma: f64 = c[p].iter().zip(&c[q]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 {
                    continue;
                }
                off = off.max(gamma.abs() / (alpha * beta).sqrt());
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..rows {
                    let (x, y) = (c[p][i], c[q][i]);
                    c[p][i] = cs * x - sn * y;
                    c[q][i] = sn * x + cs * y;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut s: Vec<f64> = c.iter().map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `[[0, A], [−Aᵀ, 0]]`
pub fn skew_block(a: &Matrix) -> Matrix {
    let (m, n) = (a.rows(), a.cols());
    let mut s = Matrix::zeros(m + n, m + n);
    for i in 0..m {
        for j in 0..n {
            s.set(i, m + j, a.get(i, j));
            s.set(m + j, i, -a.get(i, j));
        }
    }
    s
}

pub fn random_matrix(rng: &mut Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.uniform(lo, hi)).collect();
    Matrix::new(rows, cols, data).unwrap()
}

pub fn random_vector(rng: &mut Rng, dim: usize, lo: f64, hi: f64) -> Vector {
    Vector::from_fn(dim, |_| rng.uniform(lo, hi))
}

/// Counts calls on the wrapped oracles.
pub struct CountingForward {
    pub inner: Arc<dyn Forward>,
    pub calls: AtomicUsize,
}

impl Forward for CountingForward {
    fn eval(&self, x: &Vector) -> Result<Vector> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.inner.eval(x)
    }
    fn lipschitz(&self) -> Option<f64> {
        self.inner.lipschitz()
    }
    fn class(&self) -> OperatorClass {
        self.inner.class()
    }
    fn name(&self) -> String {
        format!("counting({})", self.inner.name())
    }
}

pub struct CountingResolvent {
    pub inner: Arc<dyn Resolvent>,
    pub calls: AtomicUsize,
}

impl Resolvent for CountingResolvent {
    fn resolve(&self, lambda: f64, x: &Vector) -> Result<Vector> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.inner.resolve(lambda, x)
    }
    fn name(&self) -> String {
        format!("counting({})", self.inner.name())
    }
}

/// Plain-slice helpers so oracles do not lean on the vector type's algebra.
pub fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}
