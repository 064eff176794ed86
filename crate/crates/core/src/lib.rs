//! Quantum automorphism presentations of finite multigraphs.

pub mod multigraph;
pub mod characters;
pub mod cli;
pub mod matmodel;
pub mod ncalg;
pub mod presentation;
pub mod scalar;
pub mod verify;

pub use multigraph::{Edge, GraphError, Multigraph, Slot};
pub use characters::Character;
pub use ncalg::{GeneratorId, NCPolynomial, Word};
pub use presentation::Presentation;
pub use verify::{Status, SuiteReport};

/// Exact coefficients used by the symbolic engine.
pub type Rational = num_rational::Rational64;
pub type Polynomial = NCPolynomial<Rational>;
/// Double-precision matrix models.
pub type Model = matmodel::MatrixModel<f64>;
