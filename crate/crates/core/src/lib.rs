//! Memory-accelerated average consensus on undirected graphs.
//!
//! Agents run `x(k+1) = ((1+θ0)I − αL)x(k) + Σ θm x(k−m)`; this crate builds the
//! graphs and Laplacians, computes optimal `(α, θ)` from the extreme nonzero
//! Laplacian eigenvalues, evaluates convergence rates through characteristic
//! polynomial roots, and simulates the competing first-order and memory schemes.
//!
//! Numerical kernels (Jacobi, Francis QR, Routh arrays, Kharitonov corners,
//! gain-margin eigenproblems) are implemented in-crate on small dense matrices.

pub mod error;
pub mod graph;
pub mod linalg;
pub mod margin;
pub mod polynomial;
pub mod protocols;
pub mod sim;
pub mod spectral;
pub mod stability;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{gen_named, Graph, GraphFamily, SymMatrix};
pub use linalg::Matrix;
pub use polynomial::{AugmentedSystem, MemoryParams, Polynomial};
pub use protocols::{ProtocolKind, ProtocolParams, RateReport};
pub use sim::{SimConfig, Trajectory};
pub use spectral::Spectrum;
