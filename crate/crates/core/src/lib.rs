//! Relaxed inertial forward-backward-forward splitting.
//!
//! Finds zeros of `A + B` where `A` is maximally monotone and accessed
//! through its resolvent `J_{λA}`, and `B` is single-valued, monotone (or
//! pseudo-monotone on a convex set) and Lipschitz continuous:
//!
//! ```text
//! z_k     = x_k + α_k(x_k − x_{k−1})
//! y_k     = J_{λ_k A}(z_k − λ_k B z_k)
//! t_k     = y_k − λ_k(B y_k − B z_k)
//! x_{k+1} = (1 − ρ_k) z_k + ρ_k t_k
//! ```
//!
//! The stepsize is either constant or adapted from local Lipschitz
//! estimates, so `L` need not be known.
//!
//! ```
//! use rifbf::problems::known_solution_instance;
//! use rifbf::solvers::{run, SolverConfig};
//! use rifbf::stepsize::StepsizeKind;
//! use rifbf::Vector;
//!
//! let p = known_solution_instance(4).unwrap();
//! let cfg = SolverConfig::new(0.2, 0.9, StepsizeKind::Adaptive { mu: 0.5, lambda1: 1.0 }).with_eps(1e-10);
//! let rec = run(&p, &cfg, &Vector::zeros(4)).unwrap();
//! assert!(rec.converged());
//! assert!(rec.final_x.dist(p.known_solution.as_ref().unwrap()) < 1e-8);
//! ```
//!
//! Modules:
//!
//! * [`vecspace`]: vectors, dense matrices, spectral norm, seeded randomness.
//! * [`operators`]: resolvents, forward operators, the residual operator `M`.
//! * [`stepsize`]: constant and adaptive stepsize rules.
//! * [`solvers`]: the iteration, its driver, diagnostics and baselines.
//! * [`dynamics`]: the second-order dynamical system behind the iteration.
//! * [`problems`]: bilinear saddle, pseudo-monotone and known-solution instances.

pub mod dynamics;
pub mod error;
pub mod operators;
pub mod problems;
pub mod solvers;
pub mod stepsize;
pub mod vecspace;

pub use error::{Error, Result};
pub use operators::{Forward, InclusionProblem, Resolvent};
pub use vecspace::{Matrix, Rng, Vector};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/stepsize.md")]
    mod stepsize {}
    #[doc = include_str!("../../../book/src/iteration.md")]
    mod iteration {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
}
