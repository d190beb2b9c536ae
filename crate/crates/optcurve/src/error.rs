use thiserror::Error;

/// Errors shared across the crate.
///
/// Every arithmetic precondition that can fail does so loudly through one of
/// these variants; no operation silently returns a wrong count.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("q = {q} does not have discriminant -19 (no odd m >= 11 with m^2 - 4q = -19)")]
    NotDisc19 { q: u64 },

    #[error("element {value} is not reduced mod {q}")]
    NotReduced { value: u64, q: u64 },

    #[error("field context has no degree-{0} extension attached")]
    NoExtension(usize),

    #[error("curve y^2 = x^3 + {a}x + {b} over F_{q} is singular")]
    SingularCurve { q: u64, a: u64, b: u64 },

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("polynomial has unexpected degree {got}, wanted {want}")]
    WrongDegree { got: i64, want: i64 },

    #[error("degenerate recipe: the linear factor divides the cubic")]
    DegenerateRecipe,

    #[error("cover data u = v = 0 does not define a curve")]
    ZeroCover,

    #[error("cover is split or a constant-field extension (branch number 0)")]
    SplitCover,

    #[error("extension count unsupported: {0}")]
    ExtensionCountUnsupported(String),

    #[error("extension degree {0} unsupported (expected 2 or 3)")]
    BadExtensionDegree(usize),

    #[error("counts do not come from a Weil polynomial: {0}")]
    InconsistentCounts(String),

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("matrix determinant is {0}, expected 1")]
    NotUnimodular(i64),

    #[error("search exhausted its space without a hit; existence was guaranteed, so this is a bug: {0}")]
    SearchFailed(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
