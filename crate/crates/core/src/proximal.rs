//! Regularizers and their Bregman proximal maps.
//!
//! The golden-ratio update
//! `w⁺ = argmin_w { ⟨a, w⟩ + g(w) + B_h(w, w̄)/λ }`
//! is evaluated as `prox_{λg}((∇h)⁻¹(∇h(w̄) − λa))`, i.e. a mirror step
//! followed by a Bregman proximal map of `g`. Only pairings with a closed-form
//! proximal map are supported:
//!
//! | geometry | `Zero` | `L1` | `SimplexIndicator` |
//! |----------|--------|------|--------------------|
//! | Euclidean | identity | soft-threshold | sort-and-pivot projection |
//! | Mahalanobis | identity | weighted soft-threshold | unsupported |
//! | NegativeEntropy | identity | unsupported | per-block normalization |

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::invalid;
use crate::geometry::{Geometry, GeometryKind};
use crate::linalg::check_dim;
use crate::{Error, Result};

/// Tolerance on block sums when testing simplex membership.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// The nonsmooth convex term `g`.
#[derive(Debug, Clone, PartialEq)]
pub enum Regularizer {
    Zero,
    /// `weight · ‖x‖₁`
    L1 { weight: f64 },
    /// Indicator of a product of unit simplices, one per block.
    SimplexIndicator { blocks: Vec<Range<usize>> },
}

impl Regularizer {
    pub fn l1(weight: f64) -> Result<Self> {
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(invalid!("l1 weight must be a nonnegative finite number, got {weight}"));
        }
        Ok(Regularizer::L1 { weight })
    }

    /// Blocks must be nonempty and tile `0..dim` in order.
    pub fn simplices(blocks: Vec<Range<usize>>, dim: usize) -> Result<Self> {
        let mut next = 0;
        for b in &blocks {
            if b.start != next || b.end <= b.start {
                return Err(invalid!("simplex blocks must be nonempty and partition 0..{dim}"));
            }
            next = b.end;
        }
        if next != dim {
            return Err(invalid!("simplex blocks cover 0..{next}, expected 0..{dim}"));
        }
        Ok(Regularizer::SimplexIndicator { blocks })
    }

    /// Consecutive simplex blocks of the given sizes.
    pub fn simplices_of_sizes(sizes: &[usize]) -> Result<Self> {
        let mut blocks = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for &s in sizes {
            blocks.push(start..start + s);
            start += s;
        }
        Self::simplices(blocks, start)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regularizer::Zero => "zero",
            Regularizer::L1 { .. } => "l1",
            Regularizer::SimplexIndicator { .. } => "simplex-indicator",
        }
    }

    /// `g(x)`; `+∞` outside the product of simplices.
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Regularizer::Zero => 0.0,
            Regularizer::L1 { weight } => weight * x.iter().map(|v| v.abs()).sum::<f64>(),
            Regularizer::SimplexIndicator { blocks } => {
                if self.is_feasible(x) && blocks.last().map_or(0, |b| b.end) == x.len() {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Whether `x` lies in `dom g`.
    pub fn is_feasible(&self, x: &[f64]) -> bool {
        match self {
            Regularizer::SimplexIndicator { blocks } => blocks.iter().all(|b| {
                let block = &x[b.clone()];
                block.iter().all(|v| *v >= 0.0)
                    && (block.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOL
            }),
            _ => x.iter().all(|v| v.is_finite()),
        }
    }

    /// Maps `v` back into `dom g` (projection onto the simplices in the
    /// given geometry); identity for regularizers with full domain.
    pub fn project_feasible(&self, geo: &Geometry, v: &[f64]) -> Result<Vec<f64>> {
        match self {
            Regularizer::SimplexIndicator { .. } => prox(geo, self, 1.0, v),
            _ => {
                check_dim(geo.dim(), v.len())?;
                Ok(v.to_vec())
            }
        }
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if let Regularizer::SimplexIndicator { blocks } = self {
            check_dim(blocks.last().map_or(0, |b| b.end), n)?;
        }
        Ok(())
    }
}

pub(crate) fn check_pairing(geo: &Geometry, g: &Regularizer) -> Result<()> {
    match (geo.kind(), g) {
        (_, Regularizer::Zero)
        | (GeometryKind::Euclidean, _)
        | (GeometryKind::Mahalanobis(_), Regularizer::L1 { .. })
        | (GeometryKind::NegativeEntropy, Regularizer::SimplexIndicator { .. }) => Ok(()),
        (kind, g) => Err(Error::Unsupported {
            geometry: kind.name(),
            regularizer: g.name(),
        }),
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(invalid!("step size must be positive and finite, got {lambda}"))
    }
}

/// `(∇h)⁻¹(∇h(w̄) − λa)`.
pub fn mirror_step(geo: &Geometry, w_bar: &[f64], lambda: f64, a: &[f64]) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    geo.check_interior(w_bar)?;
    check_dim(geo.dim(), a.len())?;
    let mut z = vec![0.0; w_bar.len()];
    if let GeometryKind::NegativeEntropy = geo.kind() {
        for ((z, w), a) in z.iter_mut().zip(w_bar).zip(a) {
            *z = libm::exp(libm::log(*w) - lambda * a).min(f64::MAX);
        }
        return Ok(z);
    }
    geo.grad_unchecked(w_bar, &mut z);
    for (z, a) in z.iter_mut().zip(a) {
        *z -= lambda * a;
    }
    let mut out = vec![0.0; z.len()];
    geo.grad_inv_unchecked(&z, &mut out);
    Ok(out)
}

/// Bregman proximal map `argmin_x { λ g(x) + B_h(x, v) }`.
pub fn prox(geo: &Geometry, g: &Regularizer, lambda: f64, v: &[f64]) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    check_pairing(geo, g)?;
    geo.check_interior(v)?;
    g.check_len(v.len())?;
    let mut x = v.to_vec();
    match (geo.kind(), g) {
        (_, Regularizer::Zero) => {}
        (GeometryKind::NegativeEntropy, Regularizer::SimplexIndicator { blocks }) => {
            for b in blocks {
                let block = &mut x[b.clone()];
                let s: f64 = block.iter().sum();
                block.iter_mut().for_each(|v| *v /= s);
            }
        }
        _ => prox_primal_in_place(geo, g, lambda, &mut x),
    }
    Ok(x)
}

/// Closed-form maps for the Euclidean and Mahalanobis pairings.
fn prox_primal_in_place(geo: &Geometry, g: &Regularizer, lambda: f64, x: &mut [f64]) {
    match (geo.kind(), g) {
        (_, Regularizer::Zero) => {}
        (GeometryKind::Euclidean, Regularizer::L1 { weight }) => {
            let tau = lambda * weight;
            x.iter_mut().for_each(|v| *v = soft_threshold(*v, tau));
        }
        (GeometryKind::Mahalanobis(q), Regularizer::L1 { weight }) => {
            for (v, q) in x.iter_mut().zip(q) {
                *v = soft_threshold(*v, lambda * weight / q);
            }
        }
        (GeometryKind::Euclidean, Regularizer::SimplexIndicator { blocks }) => {
            for b in blocks {
                project_simplex_in_place(&mut x[b.clone()]);
            }
        }
        _ => unreachable!("pairing checked by caller"),
    }
}

#[inline]
pub fn soft_threshold(v: f64, tau: f64) -> f64 {
    if v > tau {
        v - tau
    } else if v < -tau {
        v + tau
    } else {
        0.0
    }
}

/// Euclidean projection onto `{x >= 0, Σx = 1}` by sorting and locating the
/// pivot `θ` with `x = max(v − θ, 0)`.
pub fn project_simplex_in_place(v: &mut [f64]) {
    let mut u = v.to_vec();
    u.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    v.iter_mut().for_each(|x| *x = (*x - theta).max(0.0));
}

/// One golden-ratio proximal step `prox_{λg}((∇h)⁻¹(∇h(w̄) − λa))`.
pub fn graal_prox_step(
    geo: &Geometry,
    g: &Regularizer,
    lambda: f64,
    w_bar: &[f64],
    a_wk: &[f64],
) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    check_pairing(geo, g)?;
    geo.check_interior(w_bar)?;
    check_dim(geo.dim(), a_wk.len())?;
    g.check_len(w_bar.len())?;
    let n = w_bar.len();
    let mut dual_bar = vec![0.0; n];
    geo.grad_unchecked(w_bar, &mut dual_bar);
    let mut primal = vec![0.0; n];
    let mut dual = vec![0.0; n];
    mirror_prox_step(geo, g, lambda, &dual_bar, a_wk, &mut primal, &mut dual);
    Ok(primal)
}

/// [`graal_prox_step`] in mirror coordinates: takes `∇h(w̄)` and writes both
/// the new point and its gradient `∇h(w⁺)`. Under entropy the gradient is
/// exact even when primal coordinates underflow to zero.
///
/// The pairing and dimensions must already have been validated.
pub(crate) fn mirror_prox_step(
    geo: &Geometry,
    g: &Regularizer,
    lambda: f64,
    dual_bar: &[f64],
    a: &[f64],
    primal: &mut [f64],
    dual: &mut [f64],
) {
    for ((d, b), a) in dual.iter_mut().zip(dual_bar).zip(a) {
        *d = b - lambda * a;
    }
    match (geo.kind(), g) {
        (_, Regularizer::Zero) => geo.grad_inv_unchecked(dual, primal),
        (GeometryKind::NegativeEntropy, Regularizer::SimplexIndicator { blocks }) => {
            for b in blocks {
                entropic_normalize(&mut dual[b.clone()], &mut primal[b.clone()]);
            }
        }
        _ => {
            geo.grad_inv_unchecked(dual, primal);
            prox_primal_in_place(geo, g, lambda, primal);
            geo.grad_unchecked(primal, dual);
        }
    }
}

/// Given unnormalized entropy gradients `z = 1 + log u`, writes
/// `x = u / Σu` and replaces `z` with `1 + log x`, shifting by the block
/// maximum before exponentiating.
fn entropic_normalize(z: &mut [f64], x: &mut [f64]) {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = 0.0;
    for (x, z) in x.iter_mut().zip(z.iter()) {
        *x = libm::exp(z - m);
        s += *x;
    }
    let log_s = libm::log(s);
    for (x, z) in x.iter_mut().zip(z.iter_mut()) {
        *x /= s;
        *z = 1.0 + (*z - m) - log_s;
    }
}
