//! Dense real vectors and matrices, the seeded generator, and spectral-norm
//! estimation.
//!
//! Everything in the crate works in `f64` over `R^d`. Arithmetic on [`Vector`]
//! through the `std::ops` impls assumes matching dimensions and panics
//! otherwise; the free functions [`dot`] and [`random_uniform_vector`] report
//! misuse as [`Error`] values instead.

use std::ops::{Add, Mul, Neg, Sub};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// A point of `R^d`.
///
/// Construction through [`Vector::new`] rejects empty input and non-finite
/// coordinates. Arithmetic may still overflow; the solvers check
/// [`Vector::is_finite`] after every step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::usage("vector dimension must be positive"));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::usage(format!("coordinate {i} is not finite")));
        }
        Ok(Vector(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize) -> f64) -> Self {
        Vector((0..dim).map(f).collect())
    }

    /// Concatenates two blocks, e.g. `(θ, φ)` of a saddle problem.
    pub fn concat(head: &[f64], tail: &[f64]) -> Self {
        let mut v = Vec::with_capacity(head.len() + tail.len());
        v.extend_from_slice(head);
        v.extend_from_slice(tail);
        Vector(v)
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        Vector(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn norm_sq(&self) -> f64 {
        dot_slices(&self.0, &self.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `‖self − other‖`.
    pub fn dist(&self, other: &Vector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    /// `self += a·x`
    pub fn axpy(&mut self, a: f64, x: &Vector) {
        assert_eq!(self.dim(), x.dim(), "dimension mismatch");
        for (s, xi) in self.0.iter_mut().zip(&x.0) {
            *s += a * xi;
        }
    }

    /// `a·x + b·y`
    pub fn lincomb(a: f64, x: &Vector, b: f64, y: &Vector) -> Vector {
        assert_eq!(x.dim(), y.dim(), "dimension mismatch");
        Vector(x.0.iter().zip(&y.0).map(|(xi, yi)| a * xi + b * yi).collect())
    }

    pub fn scale(&self, a: f64) -> Vector {
        Vector(self.0.iter().map(|c| a * c).collect())
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<&Vector> for f64 {
    type Output = Vector;
    fn mul(self, rhs: &Vector) -> Vector {
        rhs.scale(self)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

/// Inner product `Σ uᵢvᵢ`.
pub fn dot(u: &Vector, v: &Vector) -> Result<f64> {
    check_dim(u.dim(), v.dim())?;
    Ok(dot_slices(u.as_slice(), v.as_slice()))
}

pub fn norm(u: &Vector) -> f64 {
    u.norm()
}

/// Four-accumulator dot product; the split lets the compiler vectorize.
pub(crate) fn dot_slices(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::usage("matrix dimensions must be positive"));
        }
        check_dim(rows * cols, data.len())?;
        if data.iter().any(|c| !c.is_finite()) {
            return Err(Error::usage("matrix entries must be finite"));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        Matrix::new(rows.len(), cols, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::diag(&vec![1.0; n])
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// `out = M x`
    pub fn mul_into(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        assert_eq!(out.len(), self.rows, "dimension mismatch");
        for (o, row) in out.iter_mut().zip(self.data.chunks_exact(self.cols)) {
            *o = dot_slices(row, x);
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        self.mul_into(x, &mut out);
        out
    }

    /// `Mᵀ x`, accumulated row by row without forming the transpose.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows, "dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for (xi, row) in x.iter().zip(self.data.chunks_exact(self.cols)) {
            for (o, r) in out.iter_mut().zip(row) {
                *o += xi * r;
            }
        }
        out
    }
}

/// Largest singular value of `m` by power iteration on `MᵀM`.
///
/// Starts from the normalized all-ones vector. If the iterate collapses to
/// zero (the start lies in the null space) the start is perturbed once by
/// `1e-6` on coordinate 0 and iteration restarts; a second collapse means
/// `m` is zero. Stops when the Rayleigh estimate `‖Mv‖` changes by at most
/// `tol` relative between sweeps.
pub fn spectral_norm(m: &Matrix, tol: f64, max_iter: usize) -> Result<f64> {
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::usage("spectral_norm needs tol > 0 and max_iter >= 1"));
    }
    // keep MᵀM representable by working on a rescaled copy
    let scale = m.data().iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    if !(1e-100..=1e100).contains(&scale) {
        let data = m.data().iter().map(|c| c / scale).collect();
        let unit = Matrix::new(m.rows(), m.cols(), data)?;
        return match spectral_norm(&unit, tol, max_iter) {
            Ok(s) => Ok(s * scale),
            Err(Error::NoConvergence { iterations, estimate }) => Err(Error::NoConvergence { iterations, estimate: estimate * scale }),
            Err(e) => Err(e),
        };
    }
    let n = m.cols();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut restarted = false;
    let mut prev = f64::NAN;
    let mut estimate = 0.0;
    for it in 1..=max_iter {
        let u = m.mul_vec(&v);
        let w = m.tr_mul_vec(&u);
        let w_norm = dot_slices(&w, &w).sqrt();
        if w_norm == 0.0 {
            if restarted {
                return Ok(0.0);
            }
            restarted = true;
            v = vec![1.0; n];
            v[0] += 1e-6;
            let s = dot_slices(&v, &v).sqrt();
            v.iter_mut().for_each(|c| *c /= s);
            prev = f64::NAN;
            continue;
        }
        estimate = dot_slices(&u, &u).sqrt();
        v = w.into_iter().map(|c| c / w_norm).collect();
        if (estimate - prev).abs() <= tol * estimate {
            return Ok(estimate);
        }
        prev = estimate;
        if it == max_iter {
            break;
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, estimate })
}

/// Seeded pseudo-random source.
///
/// The stream is ChaCha8 (`rand_chacha::ChaCha8Rng`) keyed through
/// `SeedableRng::seed_from_u64`, which is platform independent. Uniform
/// reals take the top 53 bits of `next_u64`, scale by `2⁻⁵³` onto `[0, 1)`
/// and map affinely onto `[lo, hi)`, so streams are reproducible without
/// depending on any distribution implementation.
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { seed, inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// An independent generator on ChaCha stream `stream` of the same key.
    pub fn fork(&self, stream: u64) -> Rng {
        let mut inner = ChaCha8Rng::seed_from_u64(self.seed);
        inner.set_stream(stream);
        Rng { seed: self.seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal draw (Box–Muller), used for isotropic directions.
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform point of the Euclidean ball of `radius` in `R^dim`.
    pub fn in_ball(&mut self, dim: usize, radius: f64) -> Vector {
        let dir = Vector::from_fn(dim, |_| self.normal());
        let r = radius * self.next_f64().powf(1.0 / dim as f64);
        dir.scale(r / dir.norm())
    }
}

/// Vector with i.i.d. uniform coordinates on `[lo, hi)`.
pub fn random_uniform_vector(rng: &mut Rng, dim: usize, lo: f64, hi: f64) -> Result<Vector> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::usage(format!("need finite lo < hi, got [{lo}, {hi}]")));
    }
    if dim == 0 {
        return Err(Error::usage("dimension must be positive"));
    }
    Ok(Vector::from_fn(dim, |_| rng.uniform(lo, hi)))
}
