use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::invalid;
use crate::geometry::Geometry;
use crate::linalg::{check_dim, norm2};
use crate::proximal::Regularizer;
use crate::solver::Problem;
use crate::Result;

/// Binary classification data in compressed sparse row form.
///
/// Feature indices are 0-based here; file formats with 1-based indices are
/// converted by their readers.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRegDataset {
    labels: Vec<f64>,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
    n: usize,
    beta_bar: f64,
}

impl LogRegDataset {
    /// Empty dataset with `n` features.
    pub fn new(n: usize) -> Self {
        Self {
            labels: Vec::new(),
            indptr: vec![0],
            indices: Vec::new(),
            values: Vec::new(),
            n,
            beta_bar: 0.0,
        }
    }

    /// Appends a row. `label` must be ±1 and indices strictly increasing
    /// and below `n`.
    pub fn push_row(&mut self, label: f64, entries: &[(usize, f64)]) -> Result<()> {
        if label != 1.0 && label != -1.0 {
            return Err(invalid!("label must be +1 or -1, got {label}"));
        }
        let mut prev = None;
        for &(j, v) in entries {
            if j >= self.n {
                return Err(invalid!("feature index {j} out of range for {} features", self.n));
            }
            if prev.is_some_and(|p| j <= p) {
                return Err(invalid!("feature indices must be strictly increasing"));
            }
            if !v.is_finite() {
                return Err(invalid!("non-finite feature value {v}"));
            }
            prev = Some(j);
        }
        self.labels.push(label);
        for &(j, v) in entries {
            self.indices.push(j);
            self.values.push(v);
        }
        self.indptr.push(self.indices.len());
        Ok(())
    }

    /// Builds a dataset and sets `β̄` to [`regularization_weight`].
    pub fn from_rows(n: usize, rows: &[(f64, Vec<(usize, f64)>)]) -> Result<Self> {
        let mut ds = Self::new(n);
        for (c, d) in rows {
            ds.push_row(*c, d)?;
        }
        ds.beta_bar = regularization_weight(&ds)?;
        Ok(ds)
    }

    /// Recomputes `β̄ = 0.005‖Cᵀc‖∞`.
    pub fn with_auto_beta(mut self) -> Result<Self> {
        self.beta_bar = regularization_weight(&self)?;
        Ok(self)
    }

    pub fn with_beta_bar(mut self, beta_bar: f64) -> Result<Self> {
        if !(beta_bar >= 0.0 && beta_bar.is_finite()) {
            return Err(invalid!("regularization weight must be nonnegative, got {beta_bar}"));
        }
        self.beta_bar = beta_bar;
        Ok(self)
    }

    /// Number of rows `M`.
    pub fn m(&self) -> usize {
        self.labels.len()
    }

    /// Feature dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta_bar(&self) -> f64 {
        self.beta_bar
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn label(&self, i: usize) -> f64 {
        self.labels[i]
    }

    /// Row `i` as parallel index and value slices.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[r.clone()], &self.values[r])
    }

    fn margin(&self, i: usize, x: &[f64]) -> f64 {
        let (idx, val) = self.row(i);
        self.labels[i] * idx.iter().zip(val).map(|(&j, v)| v * x[j]).sum::<f64>()
    }

    /// Spectral norm of the design matrix, by power iteration on `CᵀC`.
    pub fn design_norm(&self) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut v: Vec<f64> = (0..self.n).map(|_| rng.random::<f64>() + 0.5).collect();
        let mut cv = vec![0.0; self.m()];
        let mut sigma = 0.0;
        for _ in 0..10_000 {
            let nv = norm2(&v);
            if nv == 0.0 {
                return 0.0;
            }
            v.iter_mut().for_each(|x| *x /= nv);
            for (i, c) in cv.iter_mut().enumerate() {
                let (idx, val) = self.row(i);
                *c = idx.iter().zip(val).map(|(&j, a)| a * v[j]).sum();
            }
            let next = norm2(&cv);
            v.fill(0.0);
            for (i, c) in cv.iter().enumerate() {
                let (idx, val) = self.row(i);
                for (&j, a) in idx.iter().zip(val) {
                    v[j] += a * c;
                }
            }
            if (next - sigma).abs() <= 1e-8 * next {
                return next;
            }
            sigma = next;
        }
        sigma
    }

    /// Seeded synthetic data: features uniform in `[-1, 1]`, labels from a
    /// random hyperplane through the origin, each flipped with probability
    /// `flip_prob`.
    pub fn synthetic(m: usize, n: usize, flip_prob: f64, seed: u64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(invalid!("synthetic dataset needs m, n >= 1"));
        }
        if !(0.0..=1.0).contains(&flip_prob) {
            return Err(invalid!("flip probability must lie in [0, 1], got {flip_prob}"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let truth: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut ds = Self::new(n);
        let mut row = Vec::with_capacity(n);
        for _ in 0..m {
            row.clear();
            let mut s = 0.0;
            for (j, t) in truth.iter().enumerate() {
                let v: f64 = rng.random_range(-1.0..1.0);
                s += v * t;
                row.push((j, v));
            }
            let mut c = if s >= 0.0 { 1.0 } else { -1.0 };
            if rng.random::<f64>() < flip_prob {
                c = -c;
            }
            ds.push_row(c, &row)?;
        }
        ds.with_auto_beta()
    }
}

/// Logistic sigmoid `1 / (1 + e^{−u})` without overflow.
fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + libm::exp(-u))
    } else {
        let e = libm::exp(u);
        e / (1.0 + e)
    }
}

/// `log(1 + e^u)` without overflow.
fn softplus(u: f64) -> f64 {
    u.max(0.0) + libm::log1p(libm::exp(-u.abs()))
}

fn operator_into(ds: &LogRegDataset, x: &[f64], out: &mut [f64]) {
    out.fill(0.0);
    for i in 0..ds.m() {
        let c = ds.labels[i];
        let coef = -c * sigmoid(-ds.margin(i, x));
        let (idx, val) = ds.row(i);
        for (&j, v) in idx.iter().zip(val) {
            out[j] += coef * v;
        }
    }
}

/// Gradient of the logistic loss: `Σ −cᵢ dᵢ σ(−cᵢ⟨dᵢ, x⟩)`.
pub fn logreg_operator(ds: &LogRegDataset, x: &[f64]) -> Result<Vec<f64>> {
    check_dim(ds.n(), x.len())?;
    let mut out = vec![0.0; ds.n()];
    operator_into(ds, x, &mut out);
    Ok(out)
}

/// `Σ log(1 + exp(−cᵢ⟨dᵢ, x⟩)) + β̄‖x‖₁`.
pub fn logreg_objective(ds: &LogRegDataset, x: &[f64]) -> Result<f64> {
    check_dim(ds.n(), x.len())?;
    Ok(objective_unchecked(ds, x))
}

fn objective_unchecked(ds: &LogRegDataset, x: &[f64]) -> f64 {
    let loss: f64 = (0..ds.m()).map(|i| softplus(-ds.margin(i, x))).sum();
    loss + ds.beta_bar * x.iter().map(|v| v.abs()).sum::<f64>()
}

/// `0.005 · max_j |Σᵢ C_ij cᵢ|`.
pub fn regularization_weight(ds: &LogRegDataset) -> Result<f64> {
    if ds.m() == 0 {
        return Err(invalid!("dataset has no rows"));
    }
    let mut ctc = vec![0.0; ds.n()];
    for i in 0..ds.m() {
        let (idx, val) = ds.row(i);
        for (&j, v) in idx.iter().zip(val) {
            ctc[j] += v * ds.labels[i];
        }
    }
    Ok(0.005 * ctc.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// `ℓ₁`-regularized logistic regression as a variational inequality with
/// `A = ∇loss`, `g = β̄‖·‖₁`, Euclidean geometry, started at `x = 0`.
#[derive(Debug, Clone)]
pub struct LogisticRegression {
    data: LogRegDataset,
    geometry: Geometry,
    regularizer: Regularizer,
    lipschitz: f64,
}

impl LogisticRegression {
    pub fn new(data: LogRegDataset) -> Result<Self> {
        if data.m() == 0 || data.n() == 0 {
            return Err(invalid!("dataset must have at least one row and one feature"));
        }
        let s = data.design_norm();
        Ok(Self {
            geometry: Geometry::euclidean(data.n()),
            regularizer: Regularizer::l1(data.beta_bar())?,
            lipschitz: 0.25 * s * s,
            data,
        })
    }

    pub fn data(&self) -> &LogRegDataset {
        &self.data
    }

    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        logreg_objective(&self.data, x)
    }
}

impl Problem for LogisticRegression {
    fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    fn regularizer(&self) -> &Regularizer {
        &self.regularizer
    }

    fn apply(&self, w: &[f64], out: &mut [f64]) {
        operator_into(&self.data, w, out)
    }

    /// `‖C‖₂² / 4`, the Lipschitz constant of the loss gradient.
    fn lipschitz(&self) -> Option<f64> {
        (self.lipschitz > 0.0).then_some(self.lipschitz)
    }

    fn initial_point(&self) -> Vec<f64> {
        vec![0.0; self.data.n()]
    }

    fn merit(&self, w: &[f64], _a_w: &[f64]) -> Option<f64> {
        Some(objective_unchecked(&self.data, w))
    }
}
