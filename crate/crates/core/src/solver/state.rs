//! Iterate bookkeeping and the per-iteration updates.

use alloc::vec;
use alloc::vec::Vec;

use super::step::{StepBranch, StepSizeController};
use super::Problem;
use crate::error::invalid;
use crate::geometry::Geometry;
use crate::linalg::{check_dim, dist2, norm2};
use crate::proximal::mirror_prox_step;
use crate::{Error, Result, PHI};

/// Golden-ratio averaging in mirror coordinates:
/// `w̄_k = (∇h)⁻¹(((φ−1)∇h(w_k) + ∇h(w̄_{k−1})) / φ)`.
pub fn bar_update(geo: &Geometry, w_k: &[f64], w_bar_prev: &[f64]) -> Result<Vec<f64>> {
    let gw = geo.grad(w_k)?;
    let gb = geo.grad(w_bar_prev)?;
    let mut dual = vec![0.0; gw.len()];
    average_dual(PHI, &gw, &gb, &mut dual);
    geo.grad_inv(&dual)
}

#[inline]
fn average_dual(phi: f64, dual_w: &[f64], dual_bar_prev: &[f64], out: &mut [f64]) {
    for ((o, w), b) in out.iter_mut().zip(dual_w).zip(dual_bar_prev) {
        *o = ((phi - 1.0) * w + b) / phi;
    }
}

/// Natural residual `J_k = (∇h(w̄_k) − ∇h(w_{k+1}))/λ_k + A(w_{k+1}) − A(w_k)`,
/// an element of `A(w_{k+1}) + ∂g(w_{k+1})`. Returns `(J_k, ‖J_k‖₂)`.
pub fn residual(
    geo: &Geometry,
    lambda: f64,
    w_bar_k: &[f64],
    w_next: &[f64],
    a_wk: &[f64],
    a_wnext: &[f64],
) -> Result<(Vec<f64>, f64)> {
    let gb = geo.grad(w_bar_k)?;
    let gn = geo.grad(w_next)?;
    check_dim(geo.dim(), a_wk.len())?;
    check_dim(geo.dim(), a_wnext.len())?;
    let mut j = vec![0.0; gb.len()];
    residual_into(lambda, &gb, &gn, a_wk, a_wnext, &mut j);
    let n = norm2(&j);
    Ok((j, n))
}

fn residual_into(lambda: f64, dual_bar: &[f64], dual_next: &[f64], a_wk: &[f64], a_next: &[f64], out: &mut [f64]) {
    for i in 0..out.len() {
        out[i] = (dual_bar[i] - dual_next[i]) / lambda + a_next[i] - a_wk[i];
    }
}

/// Result of one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub lambda: f64,
    pub branch: StepBranch,
    pub residual_norm: f64,
}

/// Parameters of the adaptive golden-ratio baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgraalParams {
    /// Averaging parameter in `(1, φ]`.
    pub phi: f64,
    pub lambda_max: f64,
}

impl Default for AgraalParams {
    fn default() -> Self {
        Self {
            phi: 1.5,
            lambda_max: 1e6,
        }
    }
}

impl AgraalParams {
    /// Growth cap `ρ = 1/φ + 1/φ²`.
    pub fn rho(&self) -> f64 {
        1.0 / self.phi + 1.0 / (self.phi * self.phi)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.phi > 1.0 && self.phi <= PHI) {
            return Err(invalid!("agraal phi must lie in (1, {PHI}], got {}", self.phi));
        }
        if !(self.lambda_max > 0.0) {
            return Err(invalid!("agraal lambda_max must be positive"));
        }
        Ok(())
    }
}

/// Everything carried between iterations.
///
/// Besides the primal iterates the state keeps their mirror images `∇h(w_k)`
/// and `∇h(w̄_k)`. All updates are performed on those, so entropic iterates
/// whose coordinates decay below the floating-point range stay well defined.
#[derive(Debug, Clone)]
pub struct SolverState {
    w: Vec<f64>,
    w_prev: Vec<f64>,
    w_bar: Vec<f64>,
    a_w: Vec<f64>,
    a_w_prev: Vec<f64>,
    dual_w: Vec<f64>,
    dual_w_bar: Vec<f64>,
    controller: StepSizeController,
    /// λ of the last completed step (λ₀ before the first one).
    lambda: f64,
    /// aGRAAL's θ_{k−1}.
    theta: f64,
    k: usize,
    residual: Vec<f64>,
    scratch_w: Vec<f64>,
    scratch_dual: Vec<f64>,
    scratch_a: Vec<f64>,
    scratch_bar: Vec<f64>,
}

impl SolverState {
    /// Starts from `w₀ = w̄₀` and `w₁`, evaluating `A(w₀)` and `A(w₁)`.
    pub fn new<P: Problem + ?Sized>(problem: &P, w0: &[f64], w1: &[f64], controller: StepSizeController) -> Result<Self> {
        let n = problem.dim();
        let mut a_w_prev = vec![0.0; n];
        let mut a_w = vec![0.0; n];
        problem.apply(w0, &mut a_w_prev);
        problem.apply(w1, &mut a_w);
        Self::from_parts(problem, w0, w1, a_w_prev, a_w, controller)
    }

    /// Like [`new`](Self::new) with `A(w₀)` and `A(w₁)` already evaluated.
    pub fn from_parts<P: Problem + ?Sized>(
        problem: &P,
        w0: &[f64],
        w1: &[f64],
        a_w_prev: Vec<f64>,
        a_w: Vec<f64>,
        controller: StepSizeController,
    ) -> Result<Self> {
        let geo = problem.geometry();
        geo.check_interior(w0)?;
        geo.check_interior(w1)?;
        let n = geo.dim();
        check_dim(n, a_w_prev.len())?;
        check_dim(n, a_w.len())?;
        let mut dual_w = vec![0.0; n];
        let mut dual_w_bar = vec![0.0; n];
        geo.grad_unchecked(w1, &mut dual_w);
        geo.grad_unchecked(w0, &mut dual_w_bar);
        Ok(Self {
            w: w1.to_vec(),
            w_prev: w0.to_vec(),
            w_bar: w0.to_vec(),
            a_w,
            a_w_prev,
            dual_w,
            dual_w_bar,
            lambda: controller.lambda(),
            controller,
            theta: 1.0,
            k: 0,
            residual: vec![0.0; n],
            scratch_w: vec![0.0; n],
            scratch_dual: vec![0.0; n],
            scratch_a: vec![0.0; n],
            scratch_bar: vec![0.0; n],
        })
    }

    /// Current iterate `w_k`.
    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn w_prev(&self) -> &[f64] {
        &self.w_prev
    }

    /// Current average `w̄_{k−1}` (the one the next step starts from).
    pub fn w_bar(&self) -> &[f64] {
        &self.w_bar
    }

    /// `∇h(w_k)`.
    pub fn dual_w(&self) -> &[f64] {
        &self.dual_w
    }

    /// `∇h(w̄)`.
    pub fn dual_w_bar(&self) -> &[f64] {
        &self.dual_w_bar
    }

    /// Cached `A(w_k)`.
    pub fn a_w(&self) -> &[f64] {
        &self.a_w
    }

    pub fn a_w_prev(&self) -> &[f64] {
        &self.a_w_prev
    }

    pub fn controller(&self) -> &StepSizeController {
        &self.controller
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Completed iterations.
    pub fn iterations(&self) -> usize {
        self.k
    }

    /// `J` from the last completed iteration.
    pub fn residual(&self) -> &[f64] {
        &self.residual
    }

    /// Averaging, proximal step, one operator evaluation, residual, shift.
    fn advance<P: Problem + ?Sized>(&mut self, problem: &P, lambda: f64, phi: f64) -> f64 {
        let geo = problem.geometry();
        average_dual(phi, &self.dual_w, &self.dual_w_bar, &mut self.scratch_bar);
        mirror_prox_step(
            geo,
            problem.regularizer(),
            lambda,
            &self.scratch_bar,
            &self.a_w,
            &mut self.scratch_w,
            &mut self.scratch_dual,
        );
        problem.apply(&self.scratch_w, &mut self.scratch_a);
        residual_into(lambda, &self.scratch_bar, &self.scratch_dual, &self.a_w, &self.scratch_a, &mut self.residual);

        core::mem::swap(&mut self.dual_w_bar, &mut self.scratch_bar);
        geo.grad_inv_unchecked(&self.dual_w_bar, &mut self.w_bar);
        // w_prev <- w <- w_next
        core::mem::swap(&mut self.w_prev, &mut self.w);
        core::mem::swap(&mut self.w, &mut self.scratch_w);
        core::mem::swap(&mut self.a_w_prev, &mut self.a_w);
        core::mem::swap(&mut self.a_w, &mut self.scratch_a);
        core::mem::swap(&mut self.dual_w, &mut self.scratch_dual);
        self.lambda = lambda;
        self.k += 1;
        norm2(&self.residual)
    }
}

/// One iteration of the modified method: step-size rule, then the
/// golden-ratio proximal update.
pub fn iterate_modified<P: Problem + ?Sized>(problem: &P, state: &mut SolverState) -> Result<Step> {
    let branch = state
        .controller
        .update(&state.w, &state.w_prev, &state.a_w, &state.a_w_prev);
    let lambda = state.controller.lambda();
    let residual_norm = state.advance(problem, lambda, PHI);
    Ok(Step {
        lambda,
        branch,
        residual_norm,
    })
}

/// One iteration of B-GRAAL with a constant step. The problem must expose a
/// Lipschitz constant.
pub fn iterate_bgraal_fixed<P: Problem + ?Sized>(problem: &P, state: &mut SolverState, lambda_fixed: f64) -> Result<Step> {
    if problem.lipschitz().is_none() {
        return Err(Error::Config("fixed-step B-GRAAL needs a known Lipschitz constant".into()));
    }
    if !(lambda_fixed > 0.0 && lambda_fixed.is_finite()) {
        return Err(invalid!("fixed step must be positive, got {lambda_fixed}"));
    }
    let residual_norm = state.advance(problem, lambda_fixed, PHI);
    Ok(Step {
        lambda: lambda_fixed,
        branch: StepBranch::Fixed,
        residual_norm,
    })
}

/// One iteration of the adaptive golden-ratio baseline:
///
/// ```text
/// λ_k = min{ ρ λ_{k−1}, α φ θ_{k−1} ‖Δw‖² / (4 λ_{k−1} ‖ΔA‖²), λ_max }
/// θ_k = φ λ_k / λ_{k−1}
/// ```
/// followed by the usual update with averaging weight `φ`.
pub fn iterate_agraal<P: Problem + ?Sized>(problem: &P, state: &mut SolverState, params: &AgraalParams) -> Result<Step> {
    params.validate()?;
    let alpha = problem.geometry().alpha();
    let dw = dist2(&state.w, &state.w_prev);
    let da = dist2(&state.a_w, &state.a_w_prev);
    let prev = state.lambda;
    let mut lambda = (params.rho() * prev).min(params.lambda_max);
    if da > 0.0 {
        let local = alpha * params.phi * state.theta * dw * dw / (4.0 * prev * da * da);
        lambda = lambda.min(local);
    }
    if !(lambda > 0.0) {
        return Err(Error::Config("adaptive step collapsed to zero".into()));
    }
    state.theta = params.phi * lambda / prev;
    let residual_norm = state.advance(problem, lambda, params.phi);
    Ok(Step {
        lambda,
        branch: StepBranch::Adaptive,
        residual_norm,
    })
}
