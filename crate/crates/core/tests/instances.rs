mod common;

use common::{dot, norm};
use rifbf::operators::fbf_residual_m;
use rifbf::problems::{find_monotonicity_violation, gap, gen_bilinear, PseudoMonoInstance, SaddleInstance};
use rifbf::solvers::{run, SolverConfig};
use rifbf::stepsize::StepsizeKind;
use rifbf::{Matrix, Rng, Vector};

/// `V(θ, φ) = θᵀAφ + aᵀθ + bᵀφ` by explicit loops.
fn value(a: &Matrix, av: &[f64], bv: &[f64], theta: &[f64], phi: &[f64]) -> f64 {
    let mut v = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            v += theta[i] * a.get(i, j) * phi[j];
        }
    }
    v + dot(av, theta) + dot(bv, phi)
}

/// `inf_{‖θ'‖≤1} V(θ', φ) − sup_{‖φ'‖≤1} V(θ, φ')` with the extremal points
/// written down explicitly.
fn gap_by_definition(inst: &SaddleInstance, theta: &[f64], phi: &[f64]) -> f64 {
    let a = inst.coupling();
    let (av, bv) = (inst.a().as_slice(), inst.b().as_slice());
    let c: Vec<f64> = (0..a.rows()).map(|i| dot(a.row(i), phi) + av[i]).collect();
    let theta_min: Vec<f64> = c.iter().map(|ci| -ci / norm(&c)).collect();
    let d: Vec<f64> = (0..a.cols()).map(|j| (0..a.rows()).map(|i| a.get(i, j) * theta[i]).sum::<f64>() + bv[j]).collect();
    let phi_max: Vec<f64> = d.iter().map(|dj| dj / norm(&d)).collect();
    value(a, av, bv, &theta_min, phi) - value(a, av, bv, theta, &phi_max)
}

#[test]
fn closed_form_gap_matches_definition() {
    let mut rng = Rng::new(12);
    let inst = gen_bilinear(&mut rng, 7, 5).unwrap();
    for _ in 0..200 {
        let theta = rng.in_ball(7, 1.0);
        let phi = rng.in_ball(5, 1.0);
        let closed = gap(&inst, &theta, &phi).unwrap();
        let def = gap_by_definition(&inst, theta.as_slice(), phi.as_slice());
        assert!((closed - def).abs() <= 1e-10, "{closed} vs {def}");
        assert!(closed <= 1e-12);
    }
}

#[test]
fn extremal_points_are_not_beaten_by_samples() {
    let mut rng = Rng::new(13);
    let inst = gen_bilinear(&mut rng, 4, 3).unwrap();
    let a = inst.coupling();
    let (av, bv) = (inst.a().as_slice(), inst.b().as_slice());
    let theta = rng.in_ball(4, 1.0);
    let phi = rng.in_ball(3, 1.0);
    let g = gap_by_definition(&inst, theta.as_slice(), phi.as_slice());
    for _ in 0..2000 {
        let t2 = rng.in_ball(4, 1.0);
        let p2 = rng.in_ball(3, 1.0);
        let sampled = value(a, av, bv, t2.as_slice(), phi.as_slice()) - value(a, av, bv, theta.as_slice(), p2.as_slice());
        assert!(sampled >= g - 1e-12);
    }
}

#[test]
fn benchmark_sized_instance_builds() {
    let inst = gen_bilinear(&mut Rng::new(1), 500, 500).unwrap();
    let l = inst.lipschitz();
    assert!(l.is_finite() && l > 0.0);
    // ‖A‖₂ of a uniform [0, 1] matrix is close to n/2
    assert!((l - 250.0).abs() < 5.0, "{l}");
}

#[test]
fn terminal_residual_bounds_the_residual_operator() {
    let inst = gen_bilinear(&mut Rng::new(4), 60, 50).unwrap();
    let p = inst.as_inclusion().unwrap();
    let l = inst.lipschitz();
    let lambda = 0.5 / l;
    let x0 = common::random_vector(&mut Rng::new(5), 110, 0.0, 1.0);
    let eps = 1e-6;
    let cfg = SolverConfig::new(0.0, 1.0, StepsizeKind::Constant { lambda }).with_eps(eps);
    let rec = run(&p, &cfg, &x0).unwrap();
    assert!(rec.converged());
    let (mx, _) = fbf_residual_m(&p, lambda, &rec.final_x).unwrap();
    assert!(mx.norm() <= (1.0 + lambda * l) * eps);
}

#[test]
fn pseudo_monotone_but_not_monotone() {
    let inst = PseudoMonoInstance::generate(&mut Rng::new(1), 20, 5.0).unwrap();
    let p = inst.as_inclusion().unwrap();
    let b = p.forward.as_ref();
    let mut rng = Rng::new(21);
    let mut premises = 0;
    for _ in 0..10_000 {
        let x = rng.in_ball(20, 5.0);
        let y = rng.in_ball(20, 5.0);
        let d: Vec<f64> = common::sub(y.as_slice(), x.as_slice());
        if dot(b.eval(&x).unwrap().as_slice(), &d) >= 0.0 {
            premises += 1;
            assert!(dot(b.eval(&y).unwrap().as_slice(), &d) >= -1e-12);
        }
    }
    assert!(premises > 1000);

    let (x, y, inner) = find_monotonicity_violation(b, 20, 5.0, 100_000, 1e-6, &mut Rng::new(1)).unwrap().expect("a witness pair");
    let d = &b.eval(&x).unwrap() - &b.eval(&y).unwrap();
    let recomputed = dot(d.as_slice(), common::sub(x.as_slice(), y.as_slice()).as_slice());
    assert!(recomputed < -1e-6);
    assert!((recomputed - inner).abs() <= 1e-12 * inner.abs());
}

#[test]
fn pseudo_monotone_vi_converges() {
    let mut rng = Rng::new(1);
    let p = PseudoMonoInstance::generate(&mut rng, 20, 5.0).unwrap().as_inclusion().unwrap();
    let x0 = Vector::new((0..20).map(|_| rng.uniform(0.0, 1.0)).collect()).unwrap();
    let cfg = SolverConfig::new(0.1, 1.0, StepsizeKind::Adaptive { mu: 0.5, lambda1: 1.0 });
    let rec = run(&p, &cfg, &x0).unwrap();
    assert!(rec.converged(), "residual {}", rec.final_residual());
    assert!(rec.final_x.dist(p.known_solution.as_ref().unwrap()) < 1e-3);
}

#[test]
fn unit_radius_is_required_for_the_gap() {
    let inst = SaddleInstance::new(Matrix::identity(2), Vector::zeros(2), Vector::zeros(2), 1.0, 3.0).unwrap();
    assert!(gap(&inst, &Vector::zeros(2), &Vector::zeros(2)).is_err());
}
