//! Golden-ratio solvers for mixed variational inequalities.
//!
//! Finds `w*` with `<A(w*), w - w*> + g(w) - g(w*) >= 0` for all `w`, where `A`
//! is a monotone operator and `g` a convex, possibly nonsmooth, regularizer.
//! Distances are Bregman divergences of a Legendre function `h`, so the same
//! iteration runs as a Euclidean proximal method or as an entropic
//! (multiplicative) method on products of simplices.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`geometry`] | distance-generating functions, their gradients, Bregman divergences |
//! | [`proximal`] | regularizers and their Bregman proximal maps |
//! | [`solver`] | modified B-GRAAL, fixed-step B-GRAAL, adaptive baseline, run loop |
//! | [`problems`] | server-placement matrix games and sparse logistic regression |
//!
//! The crate is `no_std` and only needs `alloc`; file formats, wall-clock
//! timing and the command-line harness live in `graal-bench`.
//!
//! ```
//! use graal_core::problems::{MatrixGame, DenseMatrix};
//! use graal_core::solver::{run, SolverConfig};
//!
//! let p = DenseMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
//! let game = MatrixGame::new(p).unwrap();
//! let out = run(&game, &SolverConfig::default()).unwrap();
//! assert!(out.converged);
//! ```
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod geometry;
pub mod linalg;
pub mod problems;
pub mod proximal;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::{Geometry, GeometryKind};
pub use proximal::Regularizer;
pub use solver::{Algorithm, Problem, RunRecord, SolverConfig, SolverState};

/// The golden ratio `(sqrt(5) + 1) / 2`.
pub const PHI: f64 = 1.618_033_988_749_895;
