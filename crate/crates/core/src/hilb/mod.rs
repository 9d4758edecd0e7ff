//! Finite-dimensional Hilbert space semantics: dense complex tensors and the
//! evaluation of diagrams as tensor networks.

mod eval;
mod random;
mod tensor;

use thiserror::Error;

pub use eval::{eval, eval_with_order, kronecker_epsilon, ContractionOrder, Interpretation, ObjectInterp};
pub use random::{random_diagram, random_matrix, random_unitary, RandomDiagramParams};
pub use tensor::{c, equal, equal_upto_scalar, ComplexTensor, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbError {
    #[error("invalid tensor: {0}")]
    InvalidTensor(String),
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch { expected: Vec<usize>, found: Vec<usize> },
    #[error("no tensor for box `{0}`")]
    UnknownBox(String),
    #[error("object `{0}` is not interpreted")]
    UnknownObject(String),
    #[error("object `{0}` has no basis structure")]
    MissingBasis(String),
    #[error("basis of `{object}` does not factorise the ambient pairing (residual {residual:e})")]
    InconsistentDualiser { object: String, residual: f64 },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
}
