mod common;

use common::{dot, norm, random_vector, sub};
use rifbf::operators::{coercivity_kappa, fbf_residual_m, residual_lipschitz, InclusionProblem};
use rifbf::problems::{known_solution_instance, planted_bilinear};
use rifbf::{Rng, Vector};

const PAIRS: usize = 2000;

/// `Mx` composed by hand from the two oracles.
fn m_by_hand(p: &InclusionProblem, lambda: f64, x: &Vector) -> (Vec<f64>, Vec<f64>) {
    let bx = p.forward.eval(x).unwrap();
    let arg: Vec<f64> = x.iter().zip(bx.iter()).map(|(xi, bi)| xi - lambda * bi).collect();
    let y = p.resolvent.resolve(lambda, &Vector::new(arg).unwrap()).unwrap();
    let by = p.forward.eval(&y).unwrap();
    let mx = (0..x.dim()).map(|i| x[i] - y[i] - lambda * (bx[i] - by[i])).collect();
    (mx, y.into_inner())
}

fn problems() -> Vec<InclusionProblem> {
    vec![planted_bilinear(&mut Rng::new(11), 20, 20).unwrap(), known_solution_instance(10).unwrap()]
}

#[test]
fn library_residual_matches_hand_composition() {
    for p in problems() {
        let l = p.lipschitz().unwrap();
        let mut rng = Rng::new(2);
        for _ in 0..50 {
            let x = random_vector(&mut rng, p.dim, -2.0, 2.0);
            let (mx, y) = fbf_residual_m(&p, 0.5 / l, &x).unwrap();
            let (mx_ref, y_ref) = m_by_hand(&p, 0.5 / l, &x);
            assert!(norm(&sub(mx.as_slice(), &mx_ref)) <= 1e-14 * (1.0 + norm(&mx_ref)));
            assert!(norm(&sub(y.as_slice(), &y_ref)) <= 1e-14 * (1.0 + norm(&y_ref)));
        }
    }
}

#[test]
fn residual_vanishes_exactly_at_solutions() {
    for p in problems() {
        let l = p.lipschitz().unwrap();
        let xs = p.known_solution.clone().unwrap();
        for ratio in [0.1, 0.5, 0.9] {
            let (mx, y) = fbf_residual_m(&p, ratio / l, &xs).unwrap();
            assert!(mx.norm() <= 1e-8, "{}: {}", p.name, mx.norm());
            assert!(y.dist(&xs) <= 1e-8);
        }
    }
}

#[test]
fn sandwich_coercivity_and_lipschitz_bounds() {
    for p in problems() {
        let l = p.lipschitz().unwrap();
        let xs = p.known_solution.clone().unwrap();
        for ratio in [0.1, 0.5, 0.9] {
            let lambda = ratio / l;
            let kappa = coercivity_kappa(lambda, l).unwrap();
            let lip = residual_lipschitz(lambda, l);
            let mut rng = Rng::new(100 + (ratio * 10.0) as u64);
            for _ in 0..PAIRS {
                let x = random_vector(&mut rng, p.dim, -2.0, 2.0);
                let x2 = random_vector(&mut rng, p.dim, -2.0, 2.0);
                let (mx, y) = fbf_residual_m(&p, lambda, &x).unwrap();
                let (mx2, _) = fbf_residual_m(&p, lambda, &x2).unwrap();
                let xy = x.dist(&y);
                let mn = mx.norm();
                assert!((1.0 - ratio) * xy <= mn * (1.0 + 1e-12) + 1e-14, "lower sandwich");
                assert!(mn <= (1.0 + ratio) * xy * (1.0 + 1e-12) + 1e-14, "upper sandwich");

                let x_minus_star = sub(x.as_slice(), xs.as_slice());
                let coercive = dot(mx.as_slice(), &x_minus_star) - kappa * mn * mn;
                assert!(coercive >= -1e-10 * (1.0 + x.norm_sq()), "coercivity {coercive}");

                let d = sub(mx.as_slice(), mx2.as_slice());
                assert!(norm(&d) <= lip * x.dist(&x2) * (1.0 + 1e-12), "Lipschitz bound");
            }
        }
    }
}

#[test]
fn large_steps_are_refused() {
    let p = known_solution_instance(3).unwrap();
    assert!(fbf_residual_m(&p, 1.0, &Vector::zeros(3)).is_err());
    assert!(fbf_residual_m(&p, 0.0, &Vector::zeros(3)).is_err());
    assert!(coercivity_kappa(2.0, 0.5).is_err());
}
