//! Step-size control for the modified golden-ratio method.

use crate::error::invalid;
use crate::linalg::dist2;
use crate::{Result, PHI};

/// Summable growth sequence `γ_k = r (log(k+1))^s / (k+1)^t`, `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSchedule {
    pub r: f64,
    pub s: f64,
    pub t: f64,
}

impl GammaSchedule {
    /// Setting used for the server-placement matrix games.
    pub const MATRIX_GAME: Self = Self {
        r: 0.0007,
        s: 7.5,
        t: 1.1,
    };
    /// Setting used for logistic regression on ijcnn1 and a9a.
    pub const LOGREG: Self = Self {
        r: 0.0001,
        s: 7.2,
        t: 1.01,
    };
    /// Setting used for logistic regression on duke (few rows, many features).
    pub const LOGREG_WIDE: Self = Self {
        r: 0.0005,
        s: 7.0,
        t: 1.1,
    };

    pub fn new(r: f64, s: f64, t: f64) -> Result<Self> {
        let g = Self { r, s, t };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(invalid!("gamma r must be positive, got {}", self.r));
        }
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(invalid!("gamma s must be positive, got {}", self.s));
        }
        if !(self.t > 1.0 && self.t.is_finite()) {
            return Err(invalid!("gamma t must exceed 1, got {}", self.t));
        }
        Ok(())
    }

    /// `γ_k` for `k >= 1`.
    pub fn term(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(invalid!("gamma index starts at 1"));
        }
        self.validate()?;
        Ok(self.term_unchecked(k))
    }

    fn term_unchecked(&self, k: usize) -> f64 {
        let kp1 = (k + 1) as f64;
        self.r * libm::pow(libm::log(kp1), self.s) / libm::pow(kp1, self.t)
    }

    /// The factor `γ_{k−1}` consumed at iteration `k >= 1`. There is no
    /// closed form for `γ_0`, so it is taken equal to `γ_1`.
    pub fn for_iteration(&self, k: usize) -> f64 {
        self.term_unchecked(k.saturating_sub(1).max(1))
    }
}

/// Free-function form of [`GammaSchedule::term`].
pub fn gamma(params: GammaSchedule, k: usize) -> Result<f64> {
    params.term(k)
}

/// Which rule produced a step size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepBranch {
    /// Local Lipschitz estimate exceeded the threshold; step shrunk.
    Decrease,
    /// Step grown by `1 + γ_{k−1}`.
    Increase,
    /// Constant step (fixed-step B-GRAAL).
    Fixed,
    /// Adaptive golden-ratio baseline.
    Adaptive,
}

impl StepBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepBranch::Decrease => "decrease",
            StepBranch::Increase => "increase",
            StepBranch::Fixed => "fixed",
            StepBranch::Adaptive => "adaptive",
        }
    }
}

/// State of the increasing step-size rule:
///
/// ```text
/// if ‖A(w_k) − A(w_{k−1})‖ > (η₀ α / λ_{k−1}) ‖w_k − w_{k−1}‖
///     λ_k = η₁ α ‖w_k − w_{k−1}‖ / ‖A(w_k) − A(w_{k−1})‖
/// else
///     λ_k = (1 + γ_{k−1}) λ_{k−1}
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct StepSizeController {
    lambda: f64,
    lambda_prev: f64,
    lambda0: f64,
    eta0: f64,
    eta1: f64,
    gamma: GammaSchedule,
    k: usize,
    alpha: f64,
}

pub(crate) fn validate_etas(eta0: f64, eta1: f64) -> Result<()> {
    if !(0.0 < eta1 && eta1 < eta0 && eta0 < PHI / 2.0) {
        return Err(invalid!(
            "step parameters must satisfy 0 < eta1 < eta0 < phi/2 ({}), got eta1={eta1}, eta0={eta0}",
            PHI / 2.0
        ));
    }
    Ok(())
}

impl StepSizeController {
    pub fn new(lambda0: f64, eta0: f64, eta1: f64, gamma: GammaSchedule, alpha: f64) -> Result<Self> {
        if !(lambda0 > 0.0 && lambda0.is_finite()) {
            return Err(invalid!("initial step size must be positive, got {lambda0}"));
        }
        if !(alpha > 0.0) {
            return Err(invalid!("strong convexity constant must be positive, got {alpha}"));
        }
        validate_etas(eta0, eta1)?;
        gamma.validate()?;
        Ok(Self {
            lambda: lambda0,
            lambda_prev: lambda0,
            lambda0,
            eta0,
            eta1,
            gamma,
            k: 0,
            alpha,
        })
    }

    /// Current step `λ_k`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn lambda_prev(&self) -> f64 {
        self.lambda_prev
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    /// Index of the most recently computed step (0 before the first update).
    pub fn iteration(&self) -> usize {
        self.k
    }

    pub fn gamma(&self) -> GammaSchedule {
        self.gamma
    }

    /// Computes `λ_k` from consecutive iterates and operator values.
    pub fn update(&mut self, w_k: &[f64], w_prev: &[f64], a_k: &[f64], a_prev: &[f64]) -> StepBranch {
        self.update_from_norms(dist2(w_k, w_prev), dist2(a_k, a_prev))
    }

    /// Same as [`update`](Self::update) given `‖Δw‖` and `‖ΔA‖`.
    pub fn update_from_norms(&mut self, dw: f64, da: f64) -> StepBranch {
        self.k += 1;
        self.lambda_prev = self.lambda;
        // strict: equality (including 0 = 0) grows the step
        if da > self.eta0 * self.alpha / self.lambda * dw {
            self.lambda = self.eta1 * self.alpha * dw / da;
            StepBranch::Decrease
        } else {
            self.lambda *= 1.0 + self.gamma.for_iteration(self.k);
            StepBranch::Increase
        }
    }
}
