//! The `rifbf` command line.
//!
//! Exit codes: 0 on success (converged, admissible, trajectory written),
//! 2 when a solve hits the iteration cap, 1 on usage, I/O or numerical
//! errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rifbf::dynamics::{check_assumption, integrate, DynamicsConfig, Integrator, TimeFunction};
use rifbf::operators::{coercivity_kappa, InclusionProblem, ZeroOperator};
use rifbf::problems::{known_solution_instance, InstanceSpec, PseudoMonoInstance};
use rifbf::solvers::{run, validate_params, Monitors, ParamCheck, SolverConfig, Termination};
use rifbf::stepsize::{StepsizeKind, DEFAULT_LAMBDA1};
use rifbf::vecspace::random_uniform_vector;
use rifbf::{Rng, Vector};
use serde_json::json;

use crate::error::{BenchError, Result};
use crate::report::{write_summary, write_summary_file, write_trace_file, write_trajectory, Summary};
use crate::sweep::{run_sweep, write_sweep, write_sweep_file, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "rifbf", version, about = "Relaxed inertial forward-backward-forward experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the solver once and write a trace and a summary
    Solve(SolveArgs),
    /// Run a grid of (mu, alpha, rho) cells from a JSON spec
    Sweep(SweepArgs),
    /// Integrate the continuous-time system
    Dynamics(DynamicsArgs),
    /// Check (alpha, rho, mu) against the relaxation bound
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemKind {
    /// Bilinear saddle point on unit balls, uniform random data
    Bilinear,
    /// Pseudo-monotone variational inequality on a ball
    Pseudo,
    /// B(x) = x - c without constraints
    Known,
    /// A = B = 0, so the residual operator vanishes
    Zero,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    #[arg(long, value_enum, default_value = "bilinear")]
    pub problem: ProblemKind,
    #[arg(long, default_value_t = 500)]
    pub m: usize,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    /// Dimension for the pseudo, known and zero problems
    #[arg(long, default_value_t = 20)]
    pub dim: usize,
    /// Ball radius for the pseudo problem
    #[arg(long, default_value_t = 5.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl ProblemArgs {
    /// The problem with its default start: uniform `[0, 1]` entries drawn
    /// after the instance data.
    pub fn build(&self) -> Result<(InclusionProblem, Vector)> {
        match self.problem {
            ProblemKind::Bilinear => {
                let (inst, x0) = InstanceSpec::new(self.m, self.n, self.seed).build_with_start()?;
                Ok((inst.as_inclusion()?, x0))
            }
            ProblemKind::Pseudo => {
                let mut rng = Rng::new(self.seed);
                let p = PseudoMonoInstance::generate(&mut rng, self.dim, self.radius)?.as_inclusion()?;
                let x0 = random_uniform_vector(&mut rng, self.dim, 0.0, 1.0)?;
                Ok((p, x0))
            }
            ProblemKind::Known => {
                let p = known_solution_instance(self.dim)?;
                Ok((p, random_uniform_vector(&mut Rng::new(self.seed), self.dim, 0.0, 1.0)?))
            }
            ProblemKind::Zero => {
                if self.dim == 0 {
                    return Err(BenchError::Usage("dimension must be positive".into()));
                }
                let zero = Arc::new(ZeroOperator { dim: self.dim });
                let p = InclusionProblem::new(format!("zero(d={})", self.dim), self.dim, zero.clone(), zero);
                Ok((p, random_uniform_vector(&mut Rng::new(self.seed), self.dim, 0.0, 1.0)?))
            }
        }
    }

    fn describe(&self) -> serde_json::Value {
        match self.problem {
            ProblemKind::Bilinear => json!({"kind": "bilinear", "m": self.m, "n": self.n, "seed": self.seed}),
            ProblemKind::Pseudo => json!({"kind": "pseudo", "dim": self.dim, "radius": self.radius, "seed": self.seed}),
            ProblemKind::Known => json!({"kind": "known", "dim": self.dim, "seed": self.seed}),
            ProblemKind::Zero => json!({"kind": "zero", "dim": self.dim, "seed": self.seed}),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StepsizeArgs {
    /// Constant stepsize
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Adaptive rule parameter in (0, 1)
    #[arg(long)]
    pub mu: Option<f64>,
    /// Initial stepsize of the adaptive rule
    #[arg(long)]
    pub lambda1: Option<f64>,
    /// With --mu: use the constant stepsize mu/L instead of the adaptive rule
    #[arg(long)]
    pub fixed: bool,
}

impl StepsizeArgs {
    pub fn resolve(&self, lipschitz: Option<f64>) -> Result<StepsizeKind> {
        match (self.lambda, self.mu) {
            (Some(_), Some(_)) => Err(BenchError::Usage("--lambda and --mu are mutually exclusive".into())),
            (None, None) => Err(BenchError::Usage("give either --lambda or --mu".into())),
            (Some(lambda), None) => {
                if self.lambda1.is_some() || self.fixed {
                    return Err(BenchError::Usage("--lambda1 and --fixed require --mu".into()));
                }
                Ok(StepsizeKind::Constant { lambda })
            }
            (None, Some(mu)) if self.fixed => {
                if self.lambda1.is_some() {
                    return Err(BenchError::Usage("--fixed does not take --lambda1".into()));
                }
                match lipschitz {
                    Some(l) if l > 0.0 => Ok(StepsizeKind::Constant { lambda: mu / l }),
                    _ => Err(BenchError::Usage("--fixed needs a problem with a known positive Lipschitz constant".into())),
                }
            }
            (None, Some(mu)) => Ok(StepsizeKind::Adaptive { mu, lambda1: self.lambda1.unwrap_or(DEFAULT_LAMBDA1) }),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub stepsize: StepsizeArgs,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub eps: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Trace CSV, one row per iteration
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Summary JSON (stdout when absent)
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Record the gap at every iterate
    #[arg(long)]
    pub gap: bool,
    /// Record H_k and the main inequality slack (needs a known solution)
    #[arg(long)]
    pub lyapunov: bool,
    /// Leave wall-clock timings out of the summary
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// JSON sweep specification
    pub spec: PathBuf,
    /// Overrides the output path of the spec (stdout when neither is set)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Leave the wall_time column empty
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegratorArg {
    Euler,
    Rk4,
}

#[derive(Debug, Clone, Args)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 3.0)]
    pub gamma: f64,
    /// Slope of gamma(t) = max(gamma + rate*t, 0)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma_rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Slope of tau(t) = max(tau + rate*t, 0)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub tau_rate: f64,
    /// Stepsize inside the residual operator
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Sets lambda = mu/L
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, value_enum, default_value = "rk4")]
    pub integrator: IntegratorArg,
    #[arg(long, default_value_t = 1)]
    pub record_every: usize,
    /// Trajectory CSV (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Abort when the parameter assumption fails
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub rho: f64,
    #[arg(long)]
    pub mu: f64,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn execute(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Solve(a) => cmd_solve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Dynamics(a) => cmd_dynamics(a),
        Command::Validate(a) => cmd_validate(a),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<i32> {
    let (p, x0) = args.problem.build()?;
    let stepsize = args.stepsize.resolve(p.lipschitz())?;
    let cfg = SolverConfig::new(args.alpha, args.rho, stepsize)
        .with_eps(args.eps)
        .with_max_iter(args.max_iter)
        .with_monitors(Monitors { lyapunov: args.lyapunov, gap: args.gap });
    if args.lyapunov && p.known_solution.is_none() {
        return Err(BenchError::Usage(format!("--lyapunov needs a known solution, {} has none", p.name)));
    }
    let rec = run(&p, &cfg, &x0)?;
    if let Some(path) = &args.trace {
        write_trace_file(&rec.rows, path)?;
    }
    let gap = match (&p.gap, rec.termination) {
        (Some(g), Termination::Converged | Termination::MaxIter) => Some(g(&rec.final_x)?),
        _ => None,
    };
    let config = json!({
        "problem": args.problem.describe(),
        "alpha": args.alpha,
        "rho": args.rho,
        "stepsize": stepsize,
        "eps": args.eps,
        "max_iter": args.max_iter,
    });
    let summary = Summary::new(config, &rec, gap, !args.no_timings);
    match &args.summary {
        Some(path) => write_summary_file(&summary, path)?,
        None => write_summary(&summary, std::io::stdout().lock())?,
    }
    Ok(match rec.termination {
        Termination::Converged => 0,
        Termination::MaxIter => 2,
        Termination::NumericalFailure => {
            eprintln!("error: numerical failure after {} iterations", rec.iterations_used);
            1
        }
    })
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32> {
    let spec = SweepSpec::from_path(&args.spec)?;
    let rows = run_sweep(&spec, !args.no_timings)?;
    match args.output.as_ref().or(spec.output.as_ref()) {
        Some(path) => write_sweep_file(&rows, path)?,
        None => write_sweep(&rows, std::io::stdout().lock())?,
    }
    Ok(0)
}

fn time_function(c0: f64, rate: f64) -> TimeFunction {
    if rate == 0.0 {
        TimeFunction::constant(c0)
    } else {
        TimeFunction::Affine { c0, c1: rate, floor: 0.0 }
    }
}

fn cmd_dynamics(args: &DynamicsArgs) -> Result<i32> {
    let (p, x0) = args.problem.build()?;
    let lipschitz = p.lipschitz();
    let lambda = match (args.lambda, args.mu) {
        (Some(l), None) => l,
        (None, Some(mu)) => match lipschitz {
            Some(l) if l > 0.0 => mu / l,
            _ => return Err(BenchError::Usage("--mu needs a known positive Lipschitz constant; use --lambda".into())),
        },
        _ => return Err(BenchError::Usage("give exactly one of --lambda and --mu".into())),
    };
    let gamma = time_function(args.gamma, args.gamma_rate);
    let tau = time_function(args.tau, args.tau_rate);
    let integrator = match args.integrator {
        IntegratorArg::Euler => Integrator::ExplicitEuler,
        IntegratorArg::Rk4 => Integrator::Rk4,
    };
    let v0 = Vector::zeros(p.dim);
    let cfg = DynamicsConfig::new(gamma.clone(), tau.clone(), lambda, x0, v0, args.horizon, args.dt)
        .with_integrator(integrator)
        .with_record_every(args.record_every);
    cfg.validate(&p)?;

    match lipschitz {
        Some(l) => {
            let kappa = coercivity_kappa(lambda, l)?;
            let grid: Vec<f64> = (0..=cfg.steps()).map(|j| j as f64 * cfg.dt).collect();
            let report = check_assumption(&gamma, &tau, kappa, &grid)?;
            if report.ok {
                eprintln!("assumption ok: kappa = {kappa:.6}, margin theta = {:.6}", report.margin);
            } else {
                let why = report.first_violation.map_or_else(
                    || format!("margin theta = {:.6} is not positive", report.margin),
                    |v| format!("t = {}: {}", v.time, v.reason),
                );
                if args.strict {
                    eprintln!("error: assumption violated ({why}); aborting");
                    return Ok(1);
                }
                eprintln!("warning: assumption violated ({why}); integrating anyway");
            }
        }
        None => eprintln!("warning: Lipschitz constant unknown, assumption not checked"),
    }

    let traj = integrate(&p, &cfg)?;
    match &args.out {
        Some(path) => write_trajectory(&traj, crate::report::create(path)?)?,
        None => write_trajectory(&traj, std::io::stdout().lock())?,
    }
    if !traj.is_complete() {
        eprintln!("error: trajectory diverged ({:?})", traj.status);
        return Ok(1);
    }
    Ok(0)
}

fn cmd_validate(args: &ValidateArgs) -> Result<i32> {
    let check = validate_params(args.alpha, args.rho, args.mu)?;
    let mut out = std::io::stdout().lock();
    let line = match &check {
        ParamCheck::Ok { bound } => format!("admissible: rho = {} < bound {bound:.16e}", args.rho),
        ParamCheck::Violation { reason, .. } => format!("not admissible: {reason}"),
    };
    writeln!(out, "{line}").map_err(|e| BenchError::io("<stdout>", e))?;
    Ok(if check.is_ok() { 0 } else { 1 })
}
