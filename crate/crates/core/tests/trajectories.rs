mod common;

use rifbf::dynamics::{check_assumption, integrate, DynamicsConfig, Integrator, TimeFunction};
use rifbf::operators::coercivity_kappa;
use rifbf::problems::{known_solution_center, known_solution_instance, planted_bilinear, InstanceSpec};
use rifbf::{Rng, Vector};

/// `u'' + γu' + ω²u = 0` with `ω² = λ(1 − λ)τ`, solved in closed form
/// (overdamped case). This is the known-solution instance, where
/// `Mx = λ(1 − λ)(x − c)`.
fn overdamped_exact(u0: f64, v0: f64, gamma: f64, omega2: f64, t: f64) -> f64 {
    let disc = (gamma * gamma - 4.0 * omega2).sqrt();
    let (s1, s2) = ((-gamma + disc) / 2.0, (-gamma - disc) / 2.0);
    let b = (v0 - s1 * u0) / (s2 - s1);
    let a = u0 - b;
    a * (s1 * t).exp() + b * (s2 * t).exp()
}

fn linear_setup() -> (rifbf::InclusionProblem, Vector, Vector, Vec<f64>) {
    let p = known_solution_instance(3).unwrap();
    let x0 = Vector::new(vec![1.0, -0.5, 2.0]).unwrap();
    let v0 = Vector::new(vec![0.3, 0.0, -1.0]).unwrap();
    let c = known_solution_center(3).into_inner();
    (p, x0, v0, c)
}

fn error_at(dt: f64, integrator: Integrator) -> f64 {
    let (p, x0, v0, c) = linear_setup();
    let (gamma, tau, lambda, horizon) = (3.0, 1.0, 0.5, 4.0);
    let cfg = DynamicsConfig::new(TimeFunction::constant(gamma), TimeFunction::constant(tau), lambda, x0.clone(), v0.clone(), horizon, dt)
        .with_integrator(integrator)
        .with_record_every(usize::MAX);
    let traj = integrate(&p, &cfg).unwrap();
    let xt = traj.final_state().unwrap();
    let omega2 = lambda * (1.0 - lambda) * tau;
    let exact: Vec<f64> = (0..3).map(|i| c[i] + overdamped_exact(x0[i] - c[i], v0[i], gamma, omega2, horizon)).collect();
    common::norm(&common::sub(xt.as_slice(), &exact))
}

#[test]
fn rk4_matches_closed_form_with_fourth_order() {
    let errors: Vec<f64> = [0.2, 0.1, 0.05].iter().map(|dt| error_at(*dt, Integrator::Rk4)).collect();
    assert!(errors[2] < 1e-6, "{errors:?}");
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 4.0).abs() <= 0.5, "observed order {order}, errors {errors:?}");
    }
}

#[test]
fn euler_has_first_order() {
    let errors: Vec<f64> = [0.02, 0.01, 0.005].iter().map(|dt| error_at(*dt, Integrator::ExplicitEuler)).collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 1.0).abs() <= 0.5, "observed order {order}, errors {errors:?}");
    }
}

#[test]
fn solution_at_rest_stays_put() {
    let p = planted_bilinear(&mut Rng::new(3), 6, 6).unwrap();
    let xs = p.known_solution.clone().unwrap();
    let lambda = 0.5 / p.lipschitz().unwrap();
    let cfg =
        DynamicsConfig::new(TimeFunction::constant(3.0), TimeFunction::constant(1.0), lambda, xs.clone(), Vector::zeros(12), 5.0, 0.05);
    let traj = integrate(&p, &cfg).unwrap();
    for x in &traj.states {
        assert!(x.dist(&xs) <= 1e-12);
    }
    assert!(traj.residual_m.iter().all(|r| *r <= 1e-12));
}

#[test]
fn distance_to_solution_eventually_nonincreasing() {
    let p = planted_bilinear(&mut Rng::new(8), 10, 10).unwrap();
    let xs = p.known_solution.clone().unwrap();
    let l = p.lipschitz().unwrap();
    let lambda = 0.5 / l;
    let (gamma, tau) = (TimeFunction::constant(3.0), TimeFunction::constant(1.0));
    let report = check_assumption(&gamma, &tau, coercivity_kappa(lambda, l).unwrap(), &[0.0, 100.0]).unwrap();
    assert!(report.ok);
    let x0 = common::random_vector(&mut Rng::new(9), 20, 0.0, 1.0);
    let cfg = DynamicsConfig::new(gamma, tau, lambda, x0, Vector::zeros(20), 100.0, 0.05).with_record_every(10);
    let traj = integrate(&p, &cfg).unwrap();
    let dist: Vec<f64> = traj.states.iter().map(|x| x.dist(&xs)).collect();
    let half = dist.len() / 2;
    for w in dist[half..].windows(2) {
        assert!(w[1] <= w[0] + 1e-8, "{} -> {}", w[0], w[1]);
    }
}

#[test]
fn residual_decays_on_a_small_bilinear_instance() {
    let (inst, x0) = InstanceSpec::new(30, 30, 2).build_with_start().unwrap();
    let p = inst.as_inclusion().unwrap();
    let lambda = 0.5 / inst.lipschitz();
    let mut horizon = 10.0;
    loop {
        let cfg = DynamicsConfig::new(
            TimeFunction::constant(3.0),
            TimeFunction::constant(1.0),
            lambda,
            x0.clone(),
            Vector::zeros(60),
            horizon,
            0.1,
        )
        .with_record_every(usize::MAX);
        let traj = integrate(&p, &cfg).unwrap();
        if traj.residual_m.last().unwrap() <= &(1e-2 * traj.residual_m[0]) {
            break;
        }
        horizon *= 2.0;
        assert!(horizon <= 10_000.0, "no decay by a factor 100");
    }
}
