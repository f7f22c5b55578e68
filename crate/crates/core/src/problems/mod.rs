//! Benchmark problem families.
//!
//! * [`MatrixGame`]: `min_x max_y ⟨Px, y⟩` over two unit simplices, solved
//!   in the entropic geometry. Server-placement instances use the hop
//!   distance matrix of a connected graph as `P`.
//! * [`LogisticRegression`]: `Σ log(1 + exp(−cᵢ⟨dᵢ, x⟩)) + β̄‖x‖₁` in the
//!   Euclidean geometry.

mod game;
mod graph;
mod logreg;

pub use crate::linalg::DenseMatrix;
pub use game::{duality_gap, game_operator, spectral_norm, MatrixGame};
pub use graph::{graph_distance_matrix, random_connected_graph, Graph};
pub use logreg::{logreg_objective, logreg_operator, regularization_weight, LogRegDataset, LogisticRegression};
