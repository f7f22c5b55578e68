use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::{graph_distance_matrix, Graph};
use crate::error::invalid;
use crate::geometry::Geometry;
use crate::linalg::{check_dim, norm2, DenseMatrix};
use crate::proximal::{Regularizer, SIMPLEX_TOL};
use crate::solver::Problem;
use crate::{Error, Result};

const POWER_TOL: f64 = 1e-8;
const POWER_MAX_ITER: usize = 10_000;

/// Zero-sum game `min_{x ∈ Δ} max_{y ∈ Δ} ⟨Px, y⟩` as the variational
/// inequality with operator `A(x, y) = (Pᵀy, −Px)`.
///
/// For a `m × n` payoff `P`, `w = (x, y)` has `n + m` coordinates.
#[derive(Debug, Clone)]
pub struct MatrixGame {
    p: DenseMatrix,
    lipschitz: f64,
    geometry: Geometry,
    regularizer: Regularizer,
}

impl MatrixGame {
    pub fn new(p: DenseMatrix) -> Result<Self> {
        if p.rows() == 0 || p.cols() == 0 {
            return Err(invalid!("payoff matrix must be nonempty"));
        }
        if let Some(v) = (0..p.rows()).flat_map(|i| p.row(i)).find(|v| !v.is_finite()) {
            return Err(invalid!("payoff matrix has a non-finite entry {v}"));
        }
        let lipschitz = spectral_norm(&p)?;
        let (n, m) = (p.cols(), p.rows());
        Ok(Self {
            geometry: Geometry::negative_entropy(n + m),
            regularizer: Regularizer::simplices_of_sizes(&[n, m])?,
            p,
            lipschitz,
        })
    }

    /// Server-placement game: `P` is the hop distance matrix of `graph`.
    pub fn from_graph(graph: &Graph) -> Result<Self> {
        Self::new(graph_distance_matrix(graph)?)
    }

    pub fn payoff(&self) -> &DenseMatrix {
        &self.p
    }

    /// Dimension of the minimizing player's strategy `x`.
    pub fn x_dim(&self) -> usize {
        self.p.cols()
    }

    pub fn y_dim(&self) -> usize {
        self.p.rows()
    }

    /// Splits `w` into `(x, y)`.
    pub fn split<'a>(&self, w: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        w.split_at(self.x_dim())
    }

    pub fn duality_gap(&self, w: &[f64]) -> Result<f64> {
        check_dim(self.dim(), w.len())?;
        let (x, y) = self.split(w);
        duality_gap(&self.p, x, y)
    }
}

impl Problem for MatrixGame {
    fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    fn regularizer(&self) -> &Regularizer {
        &self.regularizer
    }

    fn apply(&self, w: &[f64], out: &mut [f64]) {
        let n = self.x_dim();
        let (x, y) = w.split_at(n);
        let (ax, ay) = out.split_at_mut(n);
        self.p.mul_t_vec_into(y, ax);
        self.p.mul_vec_into(x, ay);
        ay.iter_mut().for_each(|v| *v = -*v);
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(self.lipschitz)
    }

    /// Uniform strategies for both players.
    fn initial_point(&self) -> Vec<f64> {
        let (n, m) = (self.x_dim(), self.y_dim());
        let mut w = vec![1.0 / n as f64; n + m];
        w[n..].fill(1.0 / m as f64);
        w
    }

    /// Duality gap `max(Px) − min(Pᵀy)`, read off the cached operator value.
    fn merit(&self, _w: &[f64], a_w: &[f64]) -> Option<f64> {
        let (ax, ay) = a_w.split_at(self.x_dim());
        let max_px = ay.iter().map(|v| -v).fold(f64::NEG_INFINITY, f64::max);
        let min_pty = ax.iter().copied().fold(f64::INFINITY, f64::min);
        Some(max_px - min_pty)
    }
}

/// `(Pᵀy, −Px)` for `w = (x, y)`.
pub fn game_operator(p: &DenseMatrix, w: &[f64]) -> Result<Vec<f64>> {
    let n = p.cols();
    check_dim(n + p.rows(), w.len())?;
    let (x, y) = w.split_at(n);
    let mut out = p.mul_t_vec(y);
    out.extend(p.mul_vec(x).into_iter().map(|v| -v));
    Ok(out)
}

/// Largest singular value of `p` by power iteration on `PᵀP`.
pub fn spectral_norm(p: &DenseMatrix) -> Result<f64> {
    if p.is_zero() {
        return Err(invalid!("spectral norm of the zero matrix is not a valid Lipschitz constant"));
    }
    let n = p.cols();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.5).collect();
    let mut pv = vec![0.0; p.rows()];
    let mut sigma = 0.0;
    for _ in 0..POWER_MAX_ITER {
        let nv = norm2(&v);
        if nv == 0.0 {
            // start was orthogonal to the row space; restart from a fresh draw
            v.iter_mut().for_each(|x| *x = rng.random::<f64>() - 0.5);
            continue;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        p.mul_vec_into(&v, &mut pv);
        let next = norm2(&pv);
        p.mul_t_vec_into(&pv, &mut v);
        if (next - sigma).abs() <= POWER_TOL * next {
            return Ok(next);
        }
        sigma = next;
    }
    Ok(sigma)
}

/// `max_i (Px)_i − min_j (Pᵀy)_j` for strategies `x`, `y`.
pub fn duality_gap(p: &DenseMatrix, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dim(p.cols(), x.len())?;
    check_dim(p.rows(), y.len())?;
    for (name, s) in [("x", x), ("y", y)] {
        let sum: f64 = s.iter().sum();
        if s.iter().any(|v| !(*v >= 0.0)) || (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::Infeasible(alloc::format!("{name} is not a probability vector")));
        }
    }
    let max_px = p.mul_vec(x).into_iter().fold(f64::NEG_INFINITY, f64::max);
    let min_pty = p.mul_t_vec(y).into_iter().fold(f64::INFINITY, f64::min);
    Ok(max_px - min_pty)
}
