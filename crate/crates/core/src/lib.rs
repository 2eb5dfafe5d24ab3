//! Exact ribbon Schur functors, multi-Schur functors and Koszulness
//! certification for quadratic algebras and modules.
//!
//! Every object is realized inside a tensor power of the generator space:
//! graded pieces and Schur modules are subquotients cut out by placements of
//! the quadratic relations, and every merge map is induced by the identity of
//! that ambient space. The engine is generic over an exact [`field::Field`];
//! the aliases below fix the two fields used in practice.

pub mod compositions;
pub mod error;
pub mod field;
pub mod homology;
pub mod lattice;
pub mod linalg;
pub mod multischur;
pub mod quadratic;
pub mod schur;
pub mod symfunc;
pub mod tensor;

pub use error::{EngineError, Result};
pub use field::{Field, FieldKind, Fp, Rational};

/// GF(32003), the default prime field.
pub type Gf32003 = Fp<32003>;

pub type QMatrix = linalg::Matrix<Rational>;
pub type QSubspace = linalg::Subspace<Rational>;
pub type QSubquotient = linalg::Subquotient<Rational>;
pub type QAlgebra = quadratic::QuadraticAlgebra<Rational>;
pub type QModule = quadratic::QuadraticModule<Rational>;
pub type QContext = quadratic::GradedContext<Rational>;

pub type PMatrix = linalg::Matrix<Gf32003>;
pub type PSubspace = linalg::Subspace<Gf32003>;
pub type PAlgebra = quadratic::QuadraticAlgebra<Gf32003>;
pub type PContext = quadratic::GradedContext<Gf32003>;
