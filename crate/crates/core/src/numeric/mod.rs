//! Exact and floating-point linear algebra for cylinder frameworks.

pub mod framework;
pub mod matrix;
pub mod scalar;
pub mod stress;

use thiserror::Error;

use crate::graph::GraphError;

pub use framework::{circle_point, coincident_rank, random_framework, Framework, Measurement, Sampling, DEFAULT_BITS};
pub use matrix::{schur_rank_identity, Matrix, SchurReport, DEFAULT_TOLERANCE};
pub use scalar::{parse_rational, Field, Quadratic, Rational};
pub use stress::{equilibrium_stress, is_maximum_rank, stress_matrix_rank, verify_stress, Residual, Stress, StressMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("expected a 1-dimensional cokernel, found dimension {0}")]
    CokernelDimension(usize),
    #[error("vertex {vertex} is not on its cylinder")]
    OffCylinder { vertex: usize },
    #[error("vertex {vertex} has a non-positive radius")]
    BadRadius { vertex: usize },
    #[error("coordinates mix different quadratic fields")]
    MixedField,
    #[error("the first vertex has height zero")]
    ZeroZ1,
    #[error("the top-left block is singular")]
    SingularBlock,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}
