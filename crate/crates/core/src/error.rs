//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Text input could not be parsed; `offset` is a byte position into the source.
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// An identifier in a source expression is not a ring variable.
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    /// A Laurent exponent reached an operation that requires nonnegative exponents.
    #[error("negative exponent not supported here: {0}")]
    NegativeExponent(String),

    #[error("zero input: {0}")]
    ZeroInput(String),

    #[error("invalid matrix document: {0}")]
    InvalidDocument(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    /// Support family fails one of the two validity conditions.
    #[error("{0}")]
    SupportsInvalid(SupportValidationError),

    /// A polynomial carries a monomial outside its declared support.
    #[error("polynomial {index} has monomial {monomial:?} outside the declared support")]
    SupportViolation { index: usize, monomial: Vec<i32> },

    /// The eliminated ideal is not generated by a single polynomial.
    #[error("ideal is not principal (reduced basis has {basis_len} elements)")]
    NotPrincipal { basis_len: usize },

    /// The dual variety has codimension at least two; no discriminant exists.
    #[error("dual variety is not a hypersurface")]
    DualNotHypersurface,

    #[error("determinant does not exist for shape {0:?}")]
    DetDoesNotExist(Vec<usize>),

    #[error("unsupported shape {shape:?}: {reason}")]
    UnsupportedShape { shape: Vec<usize>, reason: String },

    #[error("shape {0:?} is not of boundary format")]
    NotBoundaryShape(Vec<usize>),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("polynomial is not multilinear: {0}")]
    NotMultilinear(String),

    /// Leading coefficient stayed zero through the retry budget of coordinate changes.
    #[error("degenerate leading coefficient after {0} coordinate changes")]
    DegenerateLeadingCoefficient(usize),

    /// A violated internal assertion; never a user error.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Which of the two support conditions failed, and where.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportValidationError {
    /// Indices of supports whose points do not affinely span the ambient space.
    pub affine_span_failures: Vec<usize>,
    /// True when the union of all points does not generate the full lattice.
    pub lattice_span_failure: bool,
}

impl std::fmt::Display for SupportValidationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for i in &self.affine_span_failures {
            parts.push(format!("condition 1 fails for support {i} (affine span deficient)"));
        }
        if self.lattice_span_failure {
            parts.push("condition 2 fails (union does not generate the lattice)".to_string());
        }
        write!(f, "{}", parts.join("; "))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
