use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("adaptive quadrature exceeded {intervals} subintervals (estimated error {error:e})")]
    QuadratureFailure { intervals: usize, error: f64 },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("pencil construction failed: {0}")]
    ConstructionError(String),

    #[error("determinant of the pencil vanishes identically")]
    DegeneratePencil,

    #[error("scale parameter must be positive, got {0}")]
    InvalidScale(f64),

    #[error("resolvent requested at the singular point z = 0")]
    SingularPoint,

    #[error("{0} is not an indicial root (pencil is invertible there)")]
    NotARoot(num_complex::Complex64),

    #[error("indicial root {0} lies on the boundary of the critical strip")]
    BoundaryRoot(num_complex::Complex64),

    #[error("element is not in the maximal domain (singular part norm {0:e})")]
    NotInMaxDomain(f64),

    #[error("degenerate crossing at sigma = {0}")]
    DegenerateCrossing(f64),

    #[error("pencil is not invertible with margin at the window endpoints (T = {0})")]
    WindowError(f64),

    #[error("resonant indicial roots: {0}")]
    ResonantRoots(String),

    #[error("no Lagrangian subspace: leading coefficient has signature {signature}")]
    LagrangianObstruction { signature: i64 },

    #[error("leading coefficient is singular")]
    InvalidLeadingCoefficient,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
