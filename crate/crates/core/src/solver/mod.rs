//! Iteration engines and the run loop.
//!
//! Three algorithms share one state layout:
//!
//! * [`Algorithm::Modified`]: golden-ratio steps with the increasing
//!   step-size rule of [`StepSizeController`]; needs no Lipschitz constant.
//! * [`Algorithm::BGraal`]: constant step `λ = φ/(2L)`.
//! * [`Algorithm::AGraal`]: adaptive baseline with averaging weight 1.5,
//!   see [`iterate_agraal`].

mod state;
mod step;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::invalid;
use crate::geometry::Geometry;
use crate::linalg::dist2;
use crate::proximal::Regularizer;
use crate::{Error, Result, PHI};

pub use state::{bar_update, iterate_agraal, iterate_bgraal_fixed, iterate_modified, residual, AgraalParams, SolverState, Step};
pub use step::{gamma, GammaSchedule, StepBranch, StepSizeController};

/// A mixed variational inequality: monotone `A`, regularizer `g`, and the
/// Bregman geometry used to solve it.
pub trait Problem {
    fn geometry(&self) -> &Geometry;

    fn regularizer(&self) -> &Regularizer;

    /// Writes `A(w)` into `out`. Both slices have length [`dim`](Self::dim).
    fn apply(&self, w: &[f64], out: &mut [f64]);

    fn dim(&self) -> usize {
        self.geometry().dim()
    }

    /// Global Lipschitz constant of `A`, if known.
    fn lipschitz(&self) -> Option<f64> {
        None
    }

    /// The starting point `w₀ = w̄₀`.
    fn initial_point(&self) -> Vec<f64>;

    /// Problem-specific optimality measure at `w`, given `A(w)`.
    fn merit(&self, _w: &[f64], _a_w: &[f64]) -> Option<f64> {
        None
    }
}

impl<P: Problem + ?Sized> Problem for &P {
    fn geometry(&self) -> &Geometry {
        (**self).geometry()
    }
    fn regularizer(&self) -> &Regularizer {
        (**self).regularizer()
    }
    fn apply(&self, w: &[f64], out: &mut [f64]) {
        (**self).apply(w, out)
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn lipschitz(&self) -> Option<f64> {
        (**self).lipschitz()
    }
    fn initial_point(&self) -> Vec<f64> {
        (**self).initial_point()
    }
    fn merit(&self, w: &[f64], a_w: &[f64]) -> Option<f64> {
        (**self).merit(w, a_w)
    }
}

/// A problem given by a closure.
#[derive(Clone)]
pub struct OperatorProblem<F> {
    geometry: Geometry,
    regularizer: Regularizer,
    op: F,
    initial: Vec<f64>,
    lipschitz: Option<f64>,
}

impl<F: Fn(&[f64], &mut [f64])> OperatorProblem<F> {
    pub fn new(geometry: Geometry, regularizer: Regularizer, op: F, initial: Vec<f64>) -> Self {
        Self {
            geometry,
            regularizer,
            op,
            initial,
            lipschitz: None,
        }
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }
}

impl<F: Fn(&[f64], &mut [f64])> Problem for OperatorProblem<F> {
    fn geometry(&self) -> &Geometry {
        &self.geometry
    }
    fn regularizer(&self) -> &Regularizer {
        &self.regularizer
    }
    fn apply(&self, w: &[f64], out: &mut [f64]) {
        (self.op)(w, out)
    }
    fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }
    fn initial_point(&self) -> Vec<f64> {
        self.initial.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Modified,
    BGraal,
    AGraal,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Modified, Algorithm::BGraal, Algorithm::AGraal];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Modified => "modified",
            Algorithm::BGraal => "bgraal",
            Algorithm::AGraal => "agraal",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "modified" => Ok(Algorithm::Modified),
            "bgraal" => Ok(Algorithm::BGraal),
            "agraal" => Ok(Algorithm::AGraal),
            other => Err(invalid!("unknown algorithm {other:?} (expected modified, bgraal or agraal)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// Stop once `‖J_k‖₂ <= tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Seeds the perturbation that produces `w₁`.
    pub seed: u64,
    pub eta0: f64,
    pub eta1: f64,
    pub gamma: GammaSchedule,
    pub agraal: AgraalParams,
    /// Scale of the uniform noise added to `w₀`.
    pub perturbation: f64,
    /// Step for [`Algorithm::BGraal`]; `None` means `φ/(2L)`.
    pub fixed_step: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Modified,
            tol: 1e-6,
            max_iter: 100_000,
            seed: 0,
            eta0: 0.8,
            eta1: 0.75,
            gamma: GammaSchedule::MATRIX_GAME,
            agraal: AgraalParams::default(),
            perturbation: 1e-9,
            fixed_step: None,
        }
    }
}

impl SolverConfig {
    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Config(alloc::format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        if !(self.perturbation > 0.0 && self.perturbation.is_finite()) {
            return Err(Error::Config("perturbation must be positive".into()));
        }
        if let Some(l) = self.fixed_step {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::Config(alloc::format!("fixed step must be positive, got {l}")));
            }
        }
        step::validate_etas(self.eta0, self.eta1)?;
        self.gamma.validate()?;
        self.agraal.validate()
    }
}

/// One row of a convergence trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord {
    /// 1-based iteration index.
    pub iter: usize,
    pub elapsed_seconds: f64,
    pub lambda: f64,
    pub residual_norm: f64,
    /// Duality gap, objective value, or the residual norm when the problem
    /// defines neither.
    pub merit: f64,
    pub branch: StepBranch,
}

/// Time source for [`RunRecord::elapsed_seconds`].
pub trait Clock {
    /// Seconds since an arbitrary fixed origin.
    fn now(&self) -> f64;
}

/// Reports zero elapsed time; keeps traces fully deterministic.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now(&self) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub algorithm: Algorithm,
    pub records: Vec<RunRecord>,
    pub converged: bool,
    pub lambda0: f64,
    /// `w₀` and the perturbed `w₁`.
    pub start: (Vec<f64>, Vec<f64>),
    pub final_point: Vec<f64>,
    pub final_bar: Vec<f64>,
}

impl RunOutput {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn final_residual(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.residual_norm)
    }

    pub fn final_merit(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.merit)
    }
}

/// Runs `config.algorithm` on `problem` without timing.
pub fn run<P: Problem + ?Sized>(problem: &P, config: &SolverConfig) -> Result<RunOutput> {
    run_with_clock(problem, config, &NoClock)
}

pub fn run_with_clock<P: Problem + ?Sized, C: Clock + ?Sized>(problem: &P, config: &SolverConfig, clock: &C) -> Result<RunOutput> {
    run_observed(problem, config, clock, |_, _| {})
}

/// [`run_with_clock`] that also hands every iteration's state and record
/// to `observe`.
pub fn run_observed<P, C, O>(problem: &P, config: &SolverConfig, clock: &C, mut observe: O) -> Result<RunOutput>
where
    P: Problem + ?Sized,
    C: Clock + ?Sized,
    O: FnMut(&SolverState, &RunRecord),
{
    config.validate()?;
    let t0 = clock.now();
    let Start { w0, w1, a0, a1, ratio } = initial_pair(problem, config)?;
    let alpha = problem.geometry().alpha();
    let lambda0 = match config.algorithm {
        Algorithm::Modified => PHI / 2.0 * ratio,
        Algorithm::BGraal => {
            let l = problem
                .lipschitz()
                .ok_or_else(|| Error::Config("fixed-step B-GRAAL needs a known Lipschitz constant".into()))?;
            config.fixed_step.unwrap_or(PHI / (2.0 * l))
        }
        Algorithm::AGraal => config.agraal.phi / 2.0 * ratio,
    };
    let controller = StepSizeController::new(lambda0, config.eta0, config.eta1, config.gamma, alpha)?;
    let mut state = SolverState::from_parts(problem, &w0, &w1, a0, a1, controller)?;

    let mut records = Vec::with_capacity(config.max_iter.min(1 << 20));
    let mut converged = false;
    for iter in 1..=config.max_iter {
        let step = match config.algorithm {
            Algorithm::Modified => iterate_modified(problem, &mut state)?,
            Algorithm::BGraal => iterate_bgraal_fixed(problem, &mut state, lambda0)?,
            Algorithm::AGraal => iterate_agraal(problem, &mut state, &config.agraal)?,
        };
        let merit = problem.merit(state.w(), state.a_w()).unwrap_or(step.residual_norm);
        let rec = RunRecord {
            iter,
            elapsed_seconds: (clock.now() - t0).max(0.0),
            lambda: step.lambda,
            residual_norm: step.residual_norm,
            merit,
            branch: step.branch,
        };
        observe(&state, &rec);
        records.push(rec);
        if !step.residual_norm.is_finite() {
            break;
        }
        if step.residual_norm <= config.tol {
            converged = true;
            break;
        }
    }
    Ok(RunOutput {
        algorithm: config.algorithm,
        records,
        converged,
        lambda0,
        start: (w0, w1),
        final_point: state.w().to_vec(),
        final_bar: state.w_bar().to_vec(),
    })
}

const MAX_PERTURBATION_RETRIES: usize = 5;

struct Start {
    w0: Vec<f64>,
    w1: Vec<f64>,
    a0: Vec<f64>,
    a1: Vec<f64>,
    /// `‖w₁ − w₀‖ / ‖A(w₁) − A(w₀)‖`
    ratio: f64,
}

/// `w₀`, its seeded perturbation `w₁`, and their operator values.
fn initial_pair<P: Problem + ?Sized>(problem: &P, config: &SolverConfig) -> Result<Start> {
    let geo = problem.geometry();
    let g = problem.regularizer();
    let n = problem.dim();
    let w0 = problem.initial_point();
    if w0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: w0.len(),
        });
    }
    geo.check_interior(&w0)?;
    g.check_len(n)?;
    crate::proximal::check_pairing(geo, g)?;
    let mut a0 = vec![0.0; n];
    let mut a1 = vec![0.0; n];
    problem.apply(&w0, &mut a0);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut scale = config.perturbation;
    let mut noisy = vec![0.0; n];
    for _ in 0..=MAX_PERTURBATION_RETRIES {
        for (v, w) in noisy.iter_mut().zip(&w0) {
            *v = w + scale * rng.random::<f64>();
        }
        let w1 = g.project_feasible(geo, &noisy)?;
        problem.apply(&w1, &mut a1);
        let dw = dist2(&w1, &w0);
        let da = dist2(&a1, &a0);
        if da > 0.0 && dw > 0.0 && da.is_finite() {
            return Ok(Start {
                w0,
                w1,
                a0,
                a1,
                ratio: dw / da,
            });
        }
        scale *= 10.0;
    }
    let msg: String = alloc::format!(
        "operator did not change under perturbations up to {:e}; cannot initialize the step size",
        scale / 10.0
    );
    Err(Error::Config(msg))
}
