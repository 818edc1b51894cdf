//! Test and benchmark instances.
//!
//! * [`SaddleInstance`]: `min_θ max_φ θᵀAφ + aᵀθ + bᵀφ` over two balls, with
//!   the closed-form gap for unit balls.
//! * [`PseudoMonoInstance`]: a variational inequality on a ball whose field is
//!   a positive rescaling of a skew affine map, pseudo-monotone but not
//!   monotone.
//! * [`known_solution_instance`]: `B(x) = x − c`, `A = 0`, solution `c`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::operators::{
    inverse_quadratic_scale, product_ball_resolvent, pseudo_mono_wrap, saddle_forward_operator, AffineOperator, BallProjection, Forward,
    InclusionProblem, OperatorClass, SaddleOperator, ZeroOperator,
};
use crate::vecspace::{dot_slices, random_uniform_vector, Matrix, Rng, Vector};

/// Bilinear saddle problem on `Θ × Φ`, two centered balls.
#[derive(Debug, Clone)]
pub struct SaddleInstance {
    op: Arc<SaddleOperator>,
    a: Vector,
    b: Vector,
    pub r_theta: f64,
    pub r_phi: f64,
}

impl SaddleInstance {
    pub fn new(coupling: Matrix, a: Vector, b: Vector, r_theta: f64, r_phi: f64) -> Result<Self> {
        if !(r_theta > 0.0 && r_phi > 0.0) {
            return Err(Error::usage("ball radii must be positive"));
        }
        let op = saddle_forward_operator(coupling, a.clone(), b.clone())?;
        Ok(SaddleInstance { op: Arc::new(op), a, b, r_theta, r_phi })
    }

    pub fn m(&self) -> usize {
        self.a.dim()
    }

    pub fn n(&self) -> usize {
        self.b.dim()
    }

    pub fn dim(&self) -> usize {
        self.m() + self.n()
    }

    pub fn coupling(&self) -> &Matrix {
        self.op.coupling()
    }

    pub fn a(&self) -> &Vector {
        &self.a
    }

    pub fn b(&self) -> &Vector {
        &self.b
    }

    /// `L = ‖[[0, A], [−Aᵀ, 0]]‖₂`.
    pub fn lipschitz(&self) -> f64 {
        self.op.lipschitz().expect("saddle operator carries its Lipschitz constant")
    }

    pub fn operator(&self) -> Arc<SaddleOperator> {
        self.op.clone()
    }

    /// `0 ∈ N_{Θ×Φ}(θ, φ) + F(θ, φ)`. The gap is attached for unit balls.
    pub fn as_inclusion(&self) -> Result<InclusionProblem> {
        let resolvent = product_ball_resolvent(self.m(), self.n(), self.r_theta, self.r_phi)?;
        let mut p = InclusionProblem::new(format!("bilinear({}x{})", self.m(), self.n()), self.dim(), Arc::new(resolvent), self.op.clone());
        if self.r_theta == 1.0 && self.r_phi == 1.0 {
            let inst = self.clone();
            p = p.with_gap(Arc::new(move |x: &Vector| inst.gap_at(x)));
        }
        Ok(p)
    }

    /// Gap at a stacked point `(θ, φ)`.
    pub fn gap_at(&self, x: &Vector) -> Result<f64> {
        check_dim(self.dim(), x.dim())?;
        let (theta, phi) = x.as_slice().split_at(self.m());
        self.gap_slices(theta, phi)
    }

    fn gap_slices(&self, theta: &[f64], phi: &[f64]) -> Result<f64> {
        if self.r_theta != 1.0 || self.r_phi != 1.0 {
            return Err(Error::usage("closed-form gap is only valid for unit balls"));
        }
        check_dim(self.m(), theta.len())?;
        check_dim(self.n(), phi.len())?;
        let a_mat = self.coupling();
        let mut a_phi = a_mat.mul_vec(phi);
        a_phi.iter_mut().zip(self.a.iter()).for_each(|(v, s)| *v += s);
        let mut at_theta = a_mat.tr_mul_vec(theta);
        at_theta.iter_mut().zip(self.b.iter()).for_each(|(v, s)| *v += s);
        Ok(-dot_slices(&a_phi, &a_phi).sqrt() + dot_slices(self.b.as_slice(), phi)
            - dot_slices(&at_theta, &at_theta).sqrt()
            - dot_slices(self.a.as_slice(), theta))
    }
}

/// Random bilinear instance: `A`, `a`, `b` i.i.d. uniform on `[0, 1]`
/// (drawn in that order, `A` row-major), unit balls.
pub fn gen_bilinear(rng: &mut Rng, m: usize, n: usize) -> Result<SaddleInstance> {
    if m == 0 || n == 0 {
        return Err(Error::usage("m and n must be positive"));
    }
    let data = (0..m * n).map(|_| rng.uniform(0.0, 1.0)).collect();
    let coupling = Matrix::new(m, n, data)?;
    let a = random_uniform_vector(rng, m, 0.0, 1.0)?;
    let b = random_uniform_vector(rng, n, 0.0, 1.0)?;
    SaddleInstance::new(coupling, a, b, 1.0, 1.0)
}

/// `G(θ, φ) = −‖Aφ + a‖ + bᵀφ − ‖Aᵀθ + b‖ − aᵀθ` (unit balls only).
pub fn gap(inst: &SaddleInstance, theta: &Vector, phi: &Vector) -> Result<f64> {
    inst.gap_slices(theta.as_slice(), phi.as_slice())
}

pub fn as_inclusion(inst: &SaddleInstance) -> Result<InclusionProblem> {
    inst.as_inclusion()
}

/// Serializable description of a bilinear instance; the data are
/// regenerated from the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    #[serde(default = "unit_radii")]
    pub radii: [f64; 2],
}

fn unit_radii() -> [f64; 2] {
    [1.0, 1.0]
}

impl InstanceSpec {
    pub fn new(m: usize, n: usize, seed: u64) -> Self {
        InstanceSpec { m, n, seed, radii: unit_radii() }
    }

    pub fn build(&self) -> Result<SaddleInstance> {
        Ok(self.build_with_start()?.0)
    }

    /// Instance plus the default start: after the instance data, the same
    /// stream supplies `x₀` with uniform `[0, 1]` entries.
    pub fn build_with_start(&self) -> Result<(SaddleInstance, Vector)> {
        let mut rng = Rng::new(self.seed);
        let unit = gen_bilinear(&mut rng, self.m, self.n)?;
        let inst = if self.radii == unit_radii() {
            unit
        } else {
            SaddleInstance::new(unit.coupling().clone(), unit.a().clone(), unit.b().clone(), self.radii[0], self.radii[1])?
        };
        let x0 = random_uniform_vector(&mut rng, self.m + self.n, 0.0, 1.0)?;
        Ok((inst, x0))
    }
}

/// VI on the ball of `radius` with `B(x) = (Sx + q)/(1 + ‖x‖²)`, `S` block
/// diagonal with 2×2 blocks `[[0, 1], [−1, 0]]`.
#[derive(Debug, Clone)]
pub struct PseudoMonoInstance {
    pub skew: Matrix,
    pub shift: Vector,
    pub radius: f64,
}

impl PseudoMonoInstance {
    /// `q` i.i.d. uniform on `[0, 1]`.
    pub fn generate(rng: &mut Rng, dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::usage("pseudo-monotone instance needs an even positive dimension"));
        }
        if !(radius > 0.0) {
            return Err(Error::usage("radius must be positive"));
        }
        let mut skew = Matrix::zeros(dim, dim);
        for blk in (0..dim).step_by(2) {
            skew.set(blk, blk + 1, 1.0);
            skew.set(blk + 1, blk, -1.0);
        }
        let shift = random_uniform_vector(rng, dim, 0.0, 1.0)?;
        Ok(PseudoMonoInstance { skew, shift, radius })
    }

    pub fn dim(&self) -> usize {
        self.shift.dim()
    }

    /// The unwrapped monotone field `G(x) = Sx + q`.
    pub fn inner(&self) -> Result<AffineOperator> {
        AffineOperator::new(self.skew.clone(), self.shift.clone(), OperatorClass::Monotone)
    }

    /// Zero of `G`: `x* = Sq` because `S² = −I`. It solves the VI whenever it
    /// lies inside the ball.
    pub fn interior_solution(&self) -> Option<Vector> {
        let x = Vector::from_raw(self.skew.mul_vec(self.shift.as_slice()));
        (x.norm() <= self.radius).then_some(x)
    }

    pub fn as_inclusion(&self) -> Result<InclusionProblem> {
        let inner: Arc<dyn Forward> = Arc::new(self.inner()?);
        let wrapped = pseudo_mono_wrap(inner, inverse_quadratic_scale(), "1/(1+|x|^2)")?;
        let p = InclusionProblem::new(
            format!("pseudo-monotone(d={})", self.dim()),
            self.dim(),
            Arc::new(BallProjection::new(self.dim(), self.radius)?),
            Arc::new(wrapped),
        );
        match self.interior_solution() {
            Some(x) => p.with_solution(x),
            None => Ok(p),
        }
    }
}

pub fn make_pseudo_instance(rng: &mut Rng, dim: usize, radius: f64) -> Result<InclusionProblem> {
    PseudoMonoInstance::generate(rng, dim, radius)?.as_inclusion()
}

/// Bilinear saddle problem on unit balls with a planted interior saddle
/// point `(θ*, φ*)`: `A` uniform on `[0, 1]`, `θ*`, `φ*` uniform in a cube of
/// half-width `1/(2√dim)`, then `a = −Aφ*` and `b = −Aᵀθ*`, so that
/// `F(θ*, φ*) = 0` and the solution is recorded as known.
pub fn planted_bilinear(rng: &mut Rng, m: usize, n: usize) -> Result<InclusionProblem> {
    if m == 0 || n == 0 {
        return Err(Error::usage("m and n must be positive"));
    }
    let data = (0..m * n).map(|_| rng.uniform(0.0, 1.0)).collect();
    let coupling = Matrix::new(m, n, data)?;
    let theta = random_uniform_vector(rng, m, -1.0, 1.0)?.scale(0.5 / (m as f64).sqrt());
    let phi = random_uniform_vector(rng, n, -1.0, 1.0)?.scale(0.5 / (n as f64).sqrt());
    let a = Vector::from_raw(coupling.mul_vec(phi.as_slice())).scale(-1.0);
    let b = Vector::from_raw(coupling.tr_mul_vec(theta.as_slice())).scale(-1.0);
    let mut p = SaddleInstance::new(coupling, a, b, 1.0, 1.0)?.as_inclusion()?;
    p.name = format!("planted-bilinear({m}x{n})");
    p.with_solution(Vector::concat(theta.as_slice(), phi.as_slice()))
}

/// Centre `c` used by [`known_solution_instance`].
pub fn known_solution_center(dim: usize) -> Vector {
    Vector::from_fn(dim, |i| ((i % 7) as f64 - 3.0) / 4.0)
}

/// `A = 0`, `B(x) = x − c` with the fixed `c` of [`known_solution_center`];
/// `x* = c`, `L = 1`, `B` cocoercive.
pub fn known_solution_instance(dim: usize) -> Result<InclusionProblem> {
    if dim == 0 {
        return Err(Error::usage("dimension must be positive"));
    }
    let c = known_solution_center(dim);
    let b = AffineOperator::new(Matrix::identity(dim), -&c, OperatorClass::Cocoercive)?;
    InclusionProblem::new(format!("known-solution(d={dim})"), dim, Arc::new(ZeroOperator { dim }), Arc::new(b)).with_solution(c)
}

/// Searches `budget` random pairs of the ball for `⟨Bx − By, x − y⟩ < −tol`.
pub fn find_monotonicity_violation(
    op: &dyn Forward,
    dim: usize,
    radius: f64,
    budget: usize,
    tol: f64,
    rng: &mut Rng,
) -> Result<Option<(Vector, Vector, f64)>> {
    for _ in 0..budget {
        let x = rng.in_ball(dim, radius);
        let y = rng.in_ball(dim, radius);
        let d = &op.eval(&x)? - &op.eval(&y)?;
        let inner = dot_slices(d.as_slice(), (&x - &y).as_slice());
        if inner < -tol {
            return Ok(Some((x, y, inner)));
        }
    }
    Ok(None)
}
