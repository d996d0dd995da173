//! Exact computations with finite-dimensional nonassociative algebras given
//! by structure constants: multiplication algebras, basis graphs, the Kantor
//! construction of W(n), automorphism families and derivations.

pub mod algebra;
pub mod automorphisms;
pub mod catalog;
pub mod derivation;
pub mod error;
pub mod graph;
pub mod field;
pub mod kantor;
pub mod linalg;
mod modp;
pub mod mult_algebra;
pub mod reference;
pub mod suite;

pub use algebra::{StructureAlgebra, Quotient, Annihilators, HomomorphismReport};
pub use catalog::{catalog, CatalogName};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use linalg::{LinearOp, Matrix, Subspace, Vector};
