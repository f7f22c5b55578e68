//! Legendre distance-generating functions and their Bregman divergences.
//!
//! Three generators are built in:
//!
//! * `Euclidean`: `h(z) = ½‖z‖²`, `B_h(x, y) = ½‖x − y‖²`.
//! * `NegativeEntropy`: `h(z) = Σ z_i log z_i` on the positive orthant; its
//!   divergence is the (generalized) Kullback–Leibler distance
//!   `Σ x_i (log(x_i / y_i) − 1) + Σ y_i`.
//! * `Mahalanobis(q)`: `h(z) = ½ zᵀ diag(q) z`, `B_h(x, y) = ½ (x − y)ᵀ diag(q) (x − y)`.
//!
//! Every divergence satisfies `B_h(x, y) >= (alpha / 2) ‖x − y‖²` where
//! `alpha` is the strong-convexity constant stored on the [`Geometry`]. For
//! negative entropy the bound with `alpha = 1` only holds when both points lie
//! on a unit simplex (Pinsker's inequality); the solvers only pair entropy
//! with simplex constraints.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::invalid;
use crate::linalg::check_dim;
use crate::{Error, Result};

/// Entries at or below this value are outside the interior of the entropy domain.
pub const ENTROPY_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub enum GeometryKind {
    Euclidean,
    NegativeEntropy,
    /// Diagonal weights `q`, all strictly positive.
    Mahalanobis(Vec<f64>),
}

impl GeometryKind {
    pub fn name(&self) -> &'static str {
        match self {
            GeometryKind::Euclidean => "euclidean",
            GeometryKind::NegativeEntropy => "negative-entropy",
            GeometryKind::Mahalanobis(_) => "mahalanobis",
        }
    }
}

/// A distance-generating function of fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    kind: GeometryKind,
    alpha: f64,
    dim: usize,
}

impl Geometry {
    pub fn euclidean(dim: usize) -> Self {
        Self {
            kind: GeometryKind::Euclidean,
            alpha: 1.0,
            dim,
        }
    }

    pub fn negative_entropy(dim: usize) -> Self {
        Self {
            kind: GeometryKind::NegativeEntropy,
            alpha: 1.0,
            dim,
        }
    }

    pub fn mahalanobis(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() {
            return Err(invalid!("mahalanobis weights must be nonempty"));
        }
        if let Some((i, v)) = q.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(invalid!("mahalanobis weight q[{i}] = {v} must be positive"));
        }
        let alpha = q.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Self {
            dim: q.len(),
            kind: GeometryKind::Mahalanobis(q),
            alpha,
        })
    }

    /// `Q = diag(1, 2, ..., n)`.
    pub fn mahalanobis_standard(dim: usize) -> Result<Self> {
        Self::mahalanobis((1..=dim).map(|i| i as f64).collect())
    }

    pub fn kind(&self) -> &GeometryKind {
        &self.kind
    }

    /// Strong-convexity constant.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Checks that `x` has the right length and lies in the interior of `dom h`.
    pub fn check_interior(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim, x.len())?;
        if let GeometryKind::NegativeEntropy = self.kind {
            if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !(**v > ENTROPY_FLOOR)) {
                return Err(Error::Domain { index, value });
            }
        }
        Ok(())
    }

    /// Checks that `x` lies in `dom h` (zero coordinates allowed under entropy).
    fn check_domain(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim, x.len())?;
        if let GeometryKind::NegativeEntropy = self.kind {
            if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
                return Err(Error::Domain { index, value });
            }
        }
        Ok(())
    }

    /// `h(x)`.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_interior(x)?;
        Ok(match &self.kind {
            GeometryKind::Euclidean => 0.5 * x.iter().map(|v| v * v).sum::<f64>(),
            GeometryKind::NegativeEntropy => x.iter().map(|v| v * libm::log(*v)).sum(),
            GeometryKind::Mahalanobis(q) => 0.5 * x.iter().zip(q).map(|(v, q)| q * v * v).sum::<f64>(),
        })
    }

    /// `∇h(x)`.
    pub fn grad(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_interior(x)?;
        let mut out = vec![0.0; x.len()];
        self.grad_unchecked(x, &mut out);
        Ok(out)
    }

    pub(crate) fn grad_unchecked(&self, x: &[f64], out: &mut [f64]) {
        match &self.kind {
            GeometryKind::Euclidean => out.copy_from_slice(x),
            GeometryKind::NegativeEntropy => {
                for (o, v) in out.iter_mut().zip(x) {
                    *o = 1.0 + libm::log(*v);
                }
            }
            GeometryKind::Mahalanobis(q) => {
                for ((o, v), q) in out.iter_mut().zip(x).zip(q) {
                    *o = q * v;
                }
            }
        }
    }

    /// `(∇h)⁻¹(v)`. Total on all of ℝⁿ; under entropy the result saturates at
    /// `f64::MAX` instead of overflowing.
    pub fn grad_inv(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, v.len())?;
        let mut out = vec![0.0; v.len()];
        self.grad_inv_unchecked(v, &mut out);
        Ok(out)
    }

    pub(crate) fn grad_inv_unchecked(&self, v: &[f64], out: &mut [f64]) {
        match &self.kind {
            GeometryKind::Euclidean => out.copy_from_slice(v),
            GeometryKind::NegativeEntropy => {
                for (o, v) in out.iter_mut().zip(v) {
                    *o = libm::exp(v - 1.0).min(f64::MAX);
                }
            }
            GeometryKind::Mahalanobis(q) => {
                for ((o, v), q) in out.iter_mut().zip(v).zip(q) {
                    *o = v / q;
                }
            }
        }
    }

    /// `B_h(x, y) = h(x) − h(y) − ⟨∇h(y), x − y⟩` with `x ∈ dom h`, `y ∈ int dom h`.
    pub fn bregman(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_domain(x)?;
        self.check_interior(y)?;
        Ok(match &self.kind {
            GeometryKind::Euclidean => {
                0.5 * x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
            }
            GeometryKind::NegativeEntropy => x
                .iter()
                .zip(y)
                .map(|(&a, &b)| {
                    let xlog = if a == 0.0 { 0.0 } else { a * libm::log(a / b) };
                    xlog - a + b
                })
                .sum(),
            GeometryKind::Mahalanobis(q) => {
                0.5 * x
                    .iter()
                    .zip(y)
                    .zip(q)
                    .map(|((a, b), q)| q * (a - b) * (a - b))
                    .sum::<f64>()
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::E;
    use proptest::prelude::*;

    fn maha12() -> Geometry {
        Geometry::mahalanobis(vec![1.0, 2.0]).unwrap()
    }

    #[test]
    fn value_examples() {
        assert_eq!(Geometry::euclidean(2).value(&[3.0, 4.0]).unwrap(), 12.5);
        assert_eq!(Geometry::negative_entropy(2).value(&[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(maha12().value(&[1.0, 1.0]).unwrap(), 1.5);
    }

    #[test]
    fn grad_examples() {
        assert_eq!(Geometry::euclidean(2).grad(&[2.0, -1.0]).unwrap(), vec![2.0, -1.0]);
        let g = Geometry::negative_entropy(2).grad(&[1.0, E]).unwrap();
        assert_relative_eq!(g[0], 1.0);
        assert_relative_eq!(g[1], 2.0);
        assert_eq!(maha12().grad(&[3.0, 3.0]).unwrap(), vec![3.0, 6.0]);
    }

    #[test]
    fn grad_inv_examples() {
        assert_eq!(Geometry::euclidean(2).grad_inv(&[2.0, -1.0]).unwrap(), vec![2.0, -1.0]);
        let x = Geometry::negative_entropy(2).grad_inv(&[1.0, 2.0]).unwrap();
        assert_relative_eq!(x[0], 1.0);
        assert_relative_eq!(x[1], E);
        assert_eq!(maha12().grad_inv(&[3.0, 6.0]).unwrap(), vec![3.0, 3.0]);
    }

    #[test]
    fn grad_inv_saturates() {
        let x = Geometry::negative_entropy(1).grad_inv(&[1e6]).unwrap();
        assert_eq!(x[0], f64::MAX);
    }

    #[test]
    fn bregman_examples() {
        let p = [0.3, 0.7];
        assert_eq!(Geometry::euclidean(2).bregman(&p, &p).unwrap(), 0.0);
        assert_eq!(Geometry::negative_entropy(2).bregman(&p, &p).unwrap(), 0.0);
        assert_eq!(maha12().bregman(&p, &p).unwrap(), 0.0);
        let kl = Geometry::negative_entropy(1).bregman(&[2.0], &[1.0]).unwrap();
        assert_relative_eq!(kl, 2.0 * 2f64.ln() - 1.0, epsilon = 1e-15);
        assert_relative_eq!(kl, 0.3863, epsilon = 1e-4);
        assert_eq!(maha12().bregman(&[1.0, 1.0], &[0.0, 0.0]).unwrap(), 1.5);
    }

    #[test]
    fn entropy_domain_errors() {
        let geo = Geometry::negative_entropy(2);
        assert_eq!(
            geo.value(&[1.0, 0.0]),
            Err(Error::Domain { index: 1, value: 0.0 })
        );
        assert!(geo.grad(&[-1.0, 1.0]).is_err());
        assert!(geo.grad(&[1e-301, 1.0]).is_err());
        assert!(geo.bregman(&[0.5, 0.5], &[1.0, 0.0]).is_err());
        // zero coordinates are fine in the first argument
        assert!(geo.bregman(&[0.0, 1.0], &[0.5, 0.5]).is_ok());
    }

    #[test]
    fn dimension_checked() {
        let geo = Geometry::euclidean(3);
        assert_eq!(
            geo.grad(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        );
        assert!(geo.bregman(&[1.0, 2.0, 3.0], &[1.0]).is_err());
    }

    #[test]
    fn mahalanobis_alpha_is_min_weight() {
        assert_eq!(Geometry::mahalanobis(vec![3.0, 0.5, 2.0]).unwrap().alpha(), 0.5);
        assert_eq!(Geometry::mahalanobis_standard(4).unwrap().alpha(), 1.0);
        assert!(Geometry::mahalanobis(vec![1.0, 0.0]).is_err());
        assert!(Geometry::mahalanobis(vec![]).is_err());
    }

    fn arb_geometry() -> impl Strategy<Value = Geometry> {
        prop_oneof![
            Just(Geometry::euclidean(4)),
            Just(Geometry::negative_entropy(4)),
            proptest::collection::vec(0.1f64..10.0, 4).prop_map(|q| Geometry::mahalanobis(q).unwrap()),
        ]
    }

    fn arb_point(geo: &Geometry) -> BoxedStrategy<Vec<f64>> {
        match geo.kind() {
            GeometryKind::NegativeEntropy => proptest::collection::vec(1e-3f64..10.0, 4).boxed(),
            _ => proptest::collection::vec(-10.0f64..10.0, 4).boxed(),
        }
    }

    proptest! {
        #[test]
        fn euclidean_reduction(x in proptest::collection::vec(-10.0f64..10.0, 5),
                               y in proptest::collection::vec(-10.0f64..10.0, 5)) {
            let b = Geometry::euclidean(5).bregman(&x, &y).unwrap();
            let half_sq: f64 = 0.5 * x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
            prop_assert_eq!(b, half_sq);
        }

        #[test]
        fn inversion_round_trips((geo, x) in arb_geometry().prop_flat_map(|g| {
            let p = arb_point(&g);
            (Just(g), p)
        })) {
            let back = geo.grad_inv(&geo.grad(&x).unwrap()).unwrap();
            for (a, b) in back.iter().zip(&x) {
                prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-300));
            }
        }

        #[test]
        fn three_point_identity((geo, w, x, y) in arb_geometry().prop_flat_map(|g| {
            let (a, b, c) = (arb_point(&g), arb_point(&g), arb_point(&g));
            (Just(g), a, b, c)
        })) {
            let lhs = geo.bregman(&w, &x).unwrap() - geo.bregman(&w, &y).unwrap()
                - geo.bregman(&y, &x).unwrap();
            let gx = geo.grad(&x).unwrap();
            let gy = geo.grad(&y).unwrap();
            let rhs: f64 = gx.iter().zip(&gy).zip(y.iter().zip(&w))
                .map(|((a, b), (c, d))| (a - b) * (c - d)).sum();
            let scale = geo.bregman(&w, &x).unwrap().abs() + geo.bregman(&y, &x).unwrap().abs() + 1.0;
            prop_assert!((lhs - rhs).abs() <= 1e-9 * scale, "lhs {} rhs {}", lhs, rhs);
        }
    }
}
