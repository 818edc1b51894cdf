//! Operator oracles for the inclusion `0 ∈ Ax + Bx`.
//!
//! The set-valued part `A` is only ever touched through its resolvent
//! `J_{λA} = (I + λA)⁻¹` ([`Resolvent`]); the single-valued part `B` through
//! forward evaluations ([`Forward`]). Concrete oracles cover the zero
//! operator, normal cones of balls and boxes (projections), products of
//! balls, affine maps, the skew saddle-point field and positive rescalings of
//! monotone maps.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::vecspace::{dot_slices, spectral_norm, Matrix, Rng, Vector};

/// Tolerance and iteration cap used whenever an operator computes its own
/// Lipschitz constant by power iteration.
pub const SPECTRAL_TOL: f64 = 1e-13;
pub const SPECTRAL_MAX_ITER: usize = 100_000;

/// Resolvent `J_{λA}` of a maximally monotone operator `A`.
pub trait Resolvent: Send + Sync {
    fn resolve(&self, lambda: f64, v: &Vector) -> Result<Vector>;
    fn name(&self) -> String;
}

/// What is known about the monotonicity of a forward operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorClass {
    Monotone,
    /// Pseudo-monotone on the constraint set only.
    PseudoMonotoneOnC,
    Cocoercive,
}

impl OperatorClass {
    pub fn is_monotone(self) -> bool {
        matches!(self, OperatorClass::Monotone | OperatorClass::Cocoercive)
    }
}

/// Single-valued operator `B` accessed through forward evaluations.
pub trait Forward: Send + Sync {
    fn eval(&self, x: &Vector) -> Result<Vector>;
    /// Global Lipschitz constant, when known.
    fn lipschitz(&self) -> Option<f64>;
    fn class(&self) -> OperatorClass;
    fn name(&self) -> String;
}

/// `A = 0` (resolvent is the identity) or `B = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroOperator {
    pub dim: usize,
}

impl Resolvent for ZeroOperator {
    fn resolve(&self, _lambda: f64, v: &Vector) -> Result<Vector> {
        check_dim(self.dim, v.dim())?;
        Ok(v.clone())
    }
    fn name(&self) -> String {
        "zero".into()
    }
}

impl Forward for ZeroOperator {
    fn eval(&self, x: &Vector) -> Result<Vector> {
        check_dim(self.dim, x.dim())?;
        Ok(Vector::zeros(x.dim()))
    }
    fn lipschitz(&self) -> Option<f64> {
        Some(0.0)
    }
    fn class(&self) -> OperatorClass {
        OperatorClass::Cocoercive
    }
    fn name(&self) -> String {
        "zero".into()
    }
}

/// Projection onto the closed Euclidean ball of `radius` around the origin.
pub fn project_ball(x: &Vector, radius: f64) -> Vector {
    let mut out = x.clone();
    project_ball_in_place(out.as_mut_slice(), radius);
    out
}

fn project_ball_in_place(x: &mut [f64], radius: f64) {
    let n = dot_slices(x, x).sqrt();
    if n > radius {
        let s = radius / n;
        x.iter_mut().for_each(|c| *c *= s);
    }
}

/// Resolvent of the normal cone of a centered ball: the projection.
#[derive(Debug, Clone, Copy)]
pub struct BallProjection {
    pub dim: usize,
    pub radius: f64,
}

impl BallProjection {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || dim == 0 {
            return Err(Error::usage("ball needs radius > 0 and dim >= 1"));
        }
        Ok(BallProjection { dim, radius })
    }
}

impl Resolvent for BallProjection {
    fn resolve(&self, _lambda: f64, v: &Vector) -> Result<Vector> {
        check_dim(self.dim, v.dim())?;
        Ok(project_ball(v, self.radius))
    }
    fn name(&self) -> String {
        format!("ball(r={})", self.radius)
    }
}

/// Resolvent of the normal cone of the box `[lo, hi]`: coordinatewise clamp.
#[derive(Debug, Clone)]
pub struct BoxProjection {
    lo: Vector,
    hi: Vector,
}

impl BoxProjection {
    pub fn new(lo: Vector, hi: Vector) -> Result<Self> {
        check_dim(lo.dim(), hi.dim())?;
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
            return Err(Error::usage("box needs lo <= hi in every coordinate"));
        }
        Ok(BoxProjection { lo, hi })
    }
}

impl Resolvent for BoxProjection {
    fn resolve(&self, _lambda: f64, v: &Vector) -> Result<Vector> {
        check_dim(self.lo.dim(), v.dim())?;
        Ok(Vector::from_fn(v.dim(), |i| v[i].clamp(self.lo[i], self.hi[i])))
    }
    fn name(&self) -> String {
        "box".into()
    }
}

/// Resolvent of `N_{Θ×Φ}` for two centered balls: blockwise projection.
#[derive(Debug, Clone, Copy)]
pub struct ProductBall {
    pub dim_theta: usize,
    pub dim_phi: usize,
    pub r_theta: f64,
    pub r_phi: f64,
}

pub fn product_ball_resolvent(dim_theta: usize, dim_phi: usize, r_theta: f64, r_phi: f64) -> Result<ProductBall> {
    if dim_theta == 0 || dim_phi == 0 {
        return Err(Error::usage("block dimensions must be positive"));
    }
    if !(r_theta > 0.0 && r_phi > 0.0) {
        return Err(Error::usage("ball radii must be positive"));
    }
    Ok(ProductBall { dim_theta, dim_phi, r_theta, r_phi })
}

impl Resolvent for ProductBall {
    fn resolve(&self, _lambda: f64, v: &Vector) -> Result<Vector> {
        check_dim(self.dim_theta + self.dim_phi, v.dim())?;
        let mut out = v.clone();
        let (theta, phi) = out.as_mut_slice().split_at_mut(self.dim_theta);
        project_ball_in_place(theta, self.r_theta);
        project_ball_in_place(phi, self.r_phi);
        Ok(out)
    }
    fn name(&self) -> String {
        format!("ball(r={}) x ball(r={})", self.r_theta, self.r_phi)
    }
}

/// `x ↦ Mx + c` with a dense square `M`.
#[derive(Debug, Clone)]
pub struct AffineOperator {
    matrix: Matrix,
    shift: Vector,
    lipschitz: f64,
    class: OperatorClass,
}

impl AffineOperator {
    /// The Lipschitz constant is computed as `‖M‖₂`. The caller asserts the
    /// monotonicity class.
    pub fn new(matrix: Matrix, shift: Vector, class: OperatorClass) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::usage("affine operator needs a square matrix"));
        }
        check_dim(matrix.rows(), shift.dim())?;
        let lipschitz = spectral_norm(&matrix, SPECTRAL_TOL, SPECTRAL_MAX_ITER)?;
        Ok(AffineOperator { matrix, shift, lipschitz, class })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn shift(&self) -> &Vector {
        &self.shift
    }
}

impl Forward for AffineOperator {
    fn eval(&self, x: &Vector) -> Result<Vector> {
        check_dim(self.matrix.cols(), x.dim())?;
        let mut out = self.matrix.mul_vec(x.as_slice());
        for (o, c) in out.iter_mut().zip(self.shift.iter()) {
            *o += c;
        }
        Ok(Vector::from_raw(out))
    }
    fn lipschitz(&self) -> Option<f64> {
        Some(self.lipschitz)
    }
    fn class(&self) -> OperatorClass {
        self.class
    }
    fn name(&self) -> String {
        format!("affine(d={})", self.matrix.rows())
    }
}

/// Saddle field `F(θ, φ) = (Aφ + a, −Aᵀθ − b)` of `V(θ, φ) = θᵀAφ + aᵀθ + bᵀφ`.
///
/// Both `A` and `Aᵀ` are kept row-major so each evaluation is two streams of
/// dot products.
#[derive(Debug, Clone)]
pub struct SaddleOperator {
    a: Matrix,
    a_t: Matrix,
    shift_theta: Vector,
    shift_phi: Vector,
    lipschitz: f64,
}

/// Builds the saddle field; its Lipschitz constant is the spectral norm of the
/// skew block matrix `[[0, A], [−Aᵀ, 0]]`, which equals `‖A‖₂`.
pub fn saddle_forward_operator(a: Matrix, shift_theta: Vector, shift_phi: Vector) -> Result<SaddleOperator> {
    check_dim(a.rows(), shift_theta.dim())?;
    check_dim(a.cols(), shift_phi.dim())?;
    let lipschitz = spectral_norm(&a, SPECTRAL_TOL, SPECTRAL_MAX_ITER)?;
    let a_t = a.transpose();
    Ok(SaddleOperator { a, a_t, shift_theta, shift_phi, lipschitz })
}

impl SaddleOperator {
    pub fn coupling(&self) -> &Matrix {
        &self.a
    }

    /// `[[0, A], [−Aᵀ, 0]]` assembled densely.
    pub fn skew_block(&self) -> Matrix {
        let (m, n) = (self.a.rows(), self.a.cols());
        let mut out = Matrix::zeros(m + n, m + n);
        for i in 0..m {
            for j in 0..n {
                out.set(i, m + j, self.a.get(i, j));
                out.set(m + j, i, -self.a.get(i, j));
            }
        }
        out
    }
}

impl Forward for SaddleOperator {
    fn eval(&self, x: &Vector) -> Result<Vector> {
        let (m, n) = (self.a.rows(), self.a.cols());
        check_dim(m + n, x.dim())?;
        let (theta, phi) = x.as_slice().split_at(m);
        let mut out = vec![0.0; m + n];
        let (top, bottom) = out.split_at_mut(m);
        self.a.mul_into(phi, top);
        self.a_t.mul_into(theta, bottom);
        for (o, s) in top.iter_mut().zip(self.shift_theta.iter()) {
            *o += s;
        }
        for (o, s) in bottom.iter_mut().zip(self.shift_phi.iter()) {
            *o = -*o - s;
        }
        Ok(Vector::from_raw(out))
    }
    fn lipschitz(&self) -> Option<f64> {
        Some(self.lipschitz)
    }
    fn class(&self) -> OperatorClass {
        OperatorClass::Monotone
    }
    fn name(&self) -> String {
        format!("saddle({}x{})", self.a.rows(), self.a.cols())
    }
}

pub type ScaleFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;

/// `x ↦ φ(x)·G(x)` for monotone `G` and positive scalar `φ`.
///
/// Positive rescaling keeps pseudo-monotonicity (the sign of `⟨Gx, y − x⟩`
/// is unchanged) but generally breaks monotonicity. No global Lipschitz
/// constant is attached; see [`estimate_lipschitz_on_ball`].
#[derive(Clone)]
pub struct PseudoMonotoneWrap {
    inner: Arc<dyn Forward>,
    scale: ScaleFn,
    scale_name: String,
}

impl fmt::Debug for PseudoMonotoneWrap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PseudoMonotoneWrap").field("inner", &self.inner.name()).field("scale", &self.scale_name).finish()
    }
}

pub fn pseudo_mono_wrap(inner: Arc<dyn Forward>, scale: ScaleFn, scale_name: impl Into<String>) -> Result<PseudoMonotoneWrap> {
    if !inner.class().is_monotone() {
        return Err(Error::usage("pseudo-monotone wrapper needs a monotone inner operator"));
    }
    Ok(PseudoMonotoneWrap { inner, scale, scale_name: scale_name.into() })
}

/// `φ(x) = 1/(1 + ‖x‖²)`.
pub fn inverse_quadratic_scale() -> ScaleFn {
    Arc::new(|x: &Vector| 1.0 / (1.0 + x.norm_sq()))
}

impl Forward for PseudoMonotoneWrap {
    fn eval(&self, x: &Vector) -> Result<Vector> {
        let s = (self.scale)(x);
        if !(s > 0.0) {
            return Err(Error::usage(format!("scale function returned non-positive value {s}")));
        }
        Ok(self.inner.eval(x)?.scale(s))
    }
    fn lipschitz(&self) -> Option<f64> {
        None
    }
    fn class(&self) -> OperatorClass {
        OperatorClass::PseudoMonotoneOnC
    }
    fn name(&self) -> String {
        format!("{} * {}", self.scale_name, self.inner.name())
    }
}

/// Empirical Lipschitz bound of `op` on the centered ball: the largest
/// observed `‖Bx − By‖/‖x − y‖` over `samples` uniform pairs, times 1.1.
pub fn estimate_lipschitz_on_ball(op: &dyn Forward, dim: usize, radius: f64, samples: usize, rng: &mut Rng) -> Result<f64> {
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let x = rng.in_ball(dim, radius);
        let y = rng.in_ball(dim, radius);
        let d = x.dist(&y);
        if d > 0.0 {
            best = best.max(op.eval(&x)?.dist(&op.eval(&y)?) / d);
        }
    }
    Ok(1.1 * best)
}

/// Merit function evaluated along a run (the saddle gap, for instance).
pub type GapFn = Arc<dyn Fn(&Vector) -> Result<f64> + Send + Sync>;

/// The inclusion `0 ∈ Ax + Bx` as a pair of oracles.
#[derive(Clone)]
pub struct InclusionProblem {
    pub name: String,
    pub dim: usize,
    pub resolvent: Arc<dyn Resolvent>,
    pub forward: Arc<dyn Forward>,
    pub known_solution: Option<Vector>,
    pub gap: Option<GapFn>,
}

impl fmt::Debug for InclusionProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InclusionProblem")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("resolvent", &self.resolvent.name())
            .field("forward", &self.forward.name())
            .field("known_solution", &self.known_solution.is_some())
            .field("gap", &self.gap.is_some())
            .finish()
    }
}

impl InclusionProblem {
    pub fn new(name: impl Into<String>, dim: usize, resolvent: Arc<dyn Resolvent>, forward: Arc<dyn Forward>) -> Self {
        InclusionProblem { name: name.into(), dim, resolvent, forward, known_solution: None, gap: None }
    }

    pub fn with_solution(mut self, x: Vector) -> Result<Self> {
        check_dim(self.dim, x.dim())?;
        self.known_solution = Some(x);
        Ok(self)
    }

    pub fn with_gap(mut self, gap: GapFn) -> Self {
        self.gap = Some(gap);
        self
    }

    pub fn lipschitz(&self) -> Option<f64> {
        self.forward.lipschitz()
    }
}

/// FBF residual `Mx = x − y − λ(Bx − By)` with `y = J_{λA}(x − λBx)`.
///
/// Returns `(Mx, y)`. Rejects `λL ≥ 1` when `B` carries a Lipschitz constant.
pub fn fbf_residual_m(p: &InclusionProblem, lambda: f64, x: &Vector) -> Result<(Vector, Vector)> {
    if !(lambda > 0.0) {
        return Err(Error::usage("stepsize must be positive"));
    }
    if let Some(l) = p.lipschitz() {
        if lambda * l >= 1.0 {
            return Err(Error::usage(format!("need lambda*L < 1, got {}", lambda * l)));
        }
    }
    check_dim(p.dim, x.dim())?;
    let bx = p.forward.eval(x)?;
    let y = p.resolvent.resolve(lambda, &Vector::lincomb(1.0, x, -lambda, &bx))?;
    let by = p.forward.eval(&y)?;
    let mut mx = x - &y;
    mx.axpy(-lambda, &bx);
    mx.axpy(lambda, &by);
    Ok((mx, y))
}

/// `κ = (1 − λL)/(1 + λL)²`, the modulus in `⟨Mx, x − x*⟩ ≥ κ‖Mx‖²`.
///
/// `L = 0` is allowed and gives `κ = 1`.
pub fn coercivity_kappa(lambda: f64, lipschitz: f64) -> Result<f64> {
    let s = lambda * lipschitz;
    if !(lambda > 0.0 && lipschitz >= 0.0 && s < 1.0) {
        return Err(Error::usage(format!("coercivity needs lambda > 0 and 0 <= lambda*L < 1, got lambda = {lambda}, L = {lipschitz}")));
    }
    Ok((1.0 - s) / ((1.0 + s) * (1.0 + s)))
}

/// Lipschitz constant `(1 + λL)(2 + λL)` of the residual operator `M`.
pub fn residual_lipschitz(lambda: f64, lipschitz: f64) -> f64 {
    let s = lambda * lipschitz;
    (1.0 + s) * (2.0 + s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn rotation() -> AffineOperator {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        AffineOperator::new(m, Vector::zeros(2), OperatorClass::Monotone).unwrap()
    }

    #[test]
    fn ball_projection_cases() {
        assert_eq!(project_ball(&v(&[0.0, 0.0]), 1.0), v(&[0.0, 0.0]));
        let p = project_ball(&v(&[3.0, 4.0]), 1.0);
        assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15);
        assert_eq!(project_ball(&v(&[0.2, 0.1]), 1.0), v(&[0.2, 0.1]));
    }

    #[test]
    fn product_ball_is_blockwise() {
        let r = product_ball_resolvent(2, 2, 1.0, 1.0).unwrap();
        let out = r.resolve(0.3, &v(&[3.0, 4.0, 0.0, 0.0])).unwrap();
        assert!((out[0] - 0.6).abs() < 1e-15 && (out[1] - 0.8).abs() < 1e-15);
        assert_eq!(&out.as_slice()[2..], &[0.0, 0.0]);
        let inner = v(&[0.1, 0.2, -0.3, 0.1]);
        assert_eq!(r.resolve(7.0, &inner).unwrap(), inner);
        assert!(matches!(r.resolve(1.0, &v(&[1.0, 2.0, 3.0])), Err(Error::DimensionMismatch { expected: 4, found: 3 })));
        assert!(product_ball_resolvent(0, 2, 1.0, 1.0).is_err());
        assert!(product_ball_resolvent(2, 2, 0.0, 1.0).is_err());
    }

    #[test]
    fn product_ball_respects_radii_on_random_inputs() {
        let r = product_ball_resolvent(3, 4, 0.5, 2.0).unwrap();
        let mut rng = Rng::new(21);
        for _ in 0..1000 {
            let x = Vector::from_fn(7, |_| rng.uniform(-5.0, 5.0));
            let out = r.resolve(1.0, &x).unwrap();
            let (t, p) = out.as_slice().split_at(3);
            assert!(dot_slices(t, t).sqrt() <= 0.5 * (1.0 + 1e-15));
            assert!(dot_slices(p, p).sqrt() <= 2.0 * (1.0 + 1e-15));
        }
    }

    #[test]
    fn box_projection_clamps() {
        let b = BoxProjection::new(v(&[0.0, -1.0]), v(&[1.0, 1.0])).unwrap();
        assert_eq!(b.resolve(1.0, &v(&[2.0, -3.0])).unwrap(), v(&[1.0, -1.0]));
        assert!(BoxProjection::new(v(&[1.0]), v(&[0.0])).is_err());
    }

    #[test]
    fn saddle_operator_small_cases() {
        let zero = saddle_forward_operator(Matrix::zeros(2, 3), Vector::zeros(2), Vector::zeros(3)).unwrap();
        let x = v(&[1.0, -2.0, 3.0, 0.5, 4.0]);
        assert_eq!(zero.eval(&x).unwrap(), Vector::zeros(5));

        let one = saddle_forward_operator(Matrix::identity(1), v(&[0.0]), v(&[0.0])).unwrap();
        assert_eq!(one.eval(&v(&[1.0, 1.0])).unwrap(), v(&[1.0, -1.0]));
        assert!((one.lipschitz().unwrap() - 1.0).abs() < 1e-12);

        assert!(saddle_forward_operator(Matrix::identity(2), v(&[0.0]), v(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn saddle_operator_is_skew_without_shift() {
        let mut rng = Rng::new(4);
        let a = Matrix::new(3, 4, (0..12).map(|_| rng.uniform(0.0, 1.0)).collect()).unwrap();
        let f = saddle_forward_operator(a, Vector::zeros(3), Vector::zeros(4)).unwrap();
        for _ in 0..200 {
            let x = Vector::from_fn(7, |_| rng.uniform(-1.0, 1.0));
            let y = Vector::from_fn(7, |_| rng.uniform(-1.0, 1.0));
            let d = &f.eval(&x).unwrap() - &f.eval(&y).unwrap();
            let inner = dot_slices(d.as_slice(), (&x - &y).as_slice());
            assert!(inner.abs() <= 1e-14, "{inner}");
        }
    }

    #[test]
    fn saddle_lipschitz_matches_skew_block() {
        let mut rng = Rng::new(8);
        let a = Matrix::new(4, 6, (0..24).map(|_| rng.uniform(0.0, 1.0)).collect()).unwrap();
        let f = saddle_forward_operator(a, Vector::zeros(4), Vector::zeros(6)).unwrap();
        let block = spectral_norm(&f.skew_block(), 1e-14, 100_000).unwrap();
        let l = f.lipschitz().unwrap();
        assert!((block - l).abs() <= 1e-8 * l, "{block} vs {l}");
    }

    #[test]
    fn residual_of_rotation_by_hand() {
        // y = x − λBx = (1, 0.5); By = (0.5, −1); Mx = x − y − λ(Bx − By) = (0.25, −0.5)
        let p = InclusionProblem::new("rotation", 2, Arc::new(ZeroOperator { dim: 2 }), Arc::new(rotation()));
        let (mx, y) = fbf_residual_m(&p, 0.5, &v(&[1.0, 0.0])).unwrap();
        assert_eq!(y, v(&[1.0, 0.5]));
        assert!((mx[0] - 0.25).abs() < 1e-15 && (mx[1] + 0.5).abs() < 1e-15, "{mx:?}");
    }

    #[test]
    fn residual_rejects_large_steps() {
        let p = InclusionProblem::new("rot", 2, Arc::new(ZeroOperator { dim: 2 }), Arc::new(rotation()));
        assert!(fbf_residual_m(&p, 1.0, &v(&[1.0, 0.0])).is_err());
        assert!(fbf_residual_m(&p, 0.0, &v(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn kappa_values() {
        assert!((coercivity_kappa(0.5, 1.0).unwrap() - 0.5 / 2.25).abs() < 1e-15);
        assert!((coercivity_kappa(1e-12, 1.0).unwrap() - 1.0).abs() < 1e-11);
        assert!(coercivity_kappa(1.0, 1.0).is_err());
        assert!(coercivity_kappa(2.0, 1.0).is_err());
        assert_eq!(coercivity_kappa(0.5, 0.0).unwrap(), 1.0);
        assert!(coercivity_kappa(0.0, 1.0).is_err());
        assert_eq!(residual_lipschitz(0.5, 1.0), 1.5 * 2.5);
    }

    #[test]
    fn wrap_with_unit_scale_is_identity() {
        let g: Arc<dyn Forward> = Arc::new(rotation());
        let w = pseudo_mono_wrap(g.clone(), Arc::new(|_: &Vector| 1.0), "one").unwrap();
        let mut rng = Rng::new(2);
        for _ in 0..50 {
            let x = Vector::from_fn(2, |_| rng.uniform(-3.0, 3.0));
            assert_eq!(w.eval(&x).unwrap(), g.eval(&x).unwrap());
        }
        assert_eq!(w.class(), OperatorClass::PseudoMonotoneOnC);
        assert!(w.lipschitz().is_none());
    }

    #[test]
    fn wrap_rejects_nonpositive_scale() {
        let w = pseudo_mono_wrap(Arc::new(rotation()), Arc::new(|x: &Vector| x[0]), "x0").unwrap();
        assert!(w.eval(&v(&[1.0, 0.0])).is_ok());
        assert!(matches!(w.eval(&v(&[-1.0, 0.0])), Err(Error::Usage(_))));
    }

    #[test]
    fn wrap_needs_monotone_inner() {
        let inner = pseudo_mono_wrap(Arc::new(rotation()), inverse_quadratic_scale(), "q").unwrap();
        assert!(pseudo_mono_wrap(Arc::new(inner), inverse_quadratic_scale(), "q").is_err());
    }
}
