use thiserror::Error;

/// Errors raised by algebra constructions and checks.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime; only prime fields F_p are supported in this version")]
    NotPrime(u64),

    #[error("unknown field `{0}` (expected Q or Fp with p prime, e.g. F5)")]
    UnknownField(String),

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not an exact scalar: `{0}`")]
    InexactScalar(String),

    #[error("division by zero in {0}")]
    DivisionByZero(String),

    #[error("unknown catalog algebra `{0}` (expected S2, S2_char2, W2 or W2x2)")]
    UnknownCatalog(String),

    #[error("{what} requires {requirement}, got field {field}")]
    Characteristic {
        what: String,
        requirement: String,
        field: String,
    },

    #[error("span is not closed: e{i}*e{j} = {product} leaves it")]
    NotClosed { i: usize, j: usize, product: String },

    #[error("subspace is not a two-sided ideal: {0}")]
    NotIdeal(String),

    #[error("basis change is singular over {field} (determinant {det})")]
    SingularBasisChange { field: String, det: String },

    #[error("zero-multiplication algebra")]
    ZeroMultiplication,

    #[error("subspace is not contained in the operator algebra")]
    NotContained,

    #[error("{0}")]
    OutOfDomain(String),

    #[error("unknown invariant set for `{0}` (expected W2 or W2x2)")]
    UnknownInvariantSet(String),

    #[error("unknown automorphism family `{0}`")]
    UnknownFamily(String),

    #[error("no orientation makes family `{0}` act by automorphisms")]
    Orientation(String),

    #[error("{0} too large for exhaustive mode")]
    TooLarge(String),

    #[error("search budget of {budget} nodes exceeded after finding {found} automorphisms")]
    BudgetExceeded { budget: u64, found: usize },

    #[error("invalid algebra file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
