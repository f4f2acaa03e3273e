use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix failed a construction invariant (determinant, J-orthogonality, ...).
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    /// An operation that needs a hyperbolic element received |tr| <= 2.
    #[error("element is not hyperbolic (|tr| = {trace_abs})")]
    NotHyperbolic { trace_abs: f64 },

    /// No length-8 cyclic word over the octagon generators evaluates to +/-I.
    #[error("relator search failed: no admissible word within tolerance {tol}")]
    RelatorSearchFailed { tol: f64 },

    /// Newton projection onto the relator variety did not reach the target residual.
    #[error("Newton projection diverged (residual {residual} after {iterations} iterations)")]
    NewtonDiverged { residual: f64, iterations: usize },

    /// A shared-axis configuration where the eigenvalue expansion is invalid.
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    /// Not enough samples to fit an entropy slope.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Power iteration did not converge within the iteration cap.
    #[error("power iteration did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },

    /// Cycle enumeration exceeded its budget.
    #[error("cycle enumeration budget of {budget} exceeded")]
    Overflow { budget: usize },

    /// The base potential of a pressure form must lie on {P = 0}.
    #[error("potential is not on the pressure-zero locus (P = {pressure})")]
    NotOnPressureZero { pressure: f64 },

    /// The direction of a pressure form must be tangent to {P = 0}.
    #[error("direction is not tangent to the pressure-zero locus (dP = {derivative})")]
    NotTangent { derivative: f64 },

    /// The Gram matrix of the frame inner product was numerically singular.
    #[error("Gram matrix singular or ill-conditioned (cond ~ {cond:e})")]
    GramSingular { cond: f64 },

    /// Invalid graph data (not strongly connected, periodic, bad edge ids, ...).
    #[error("invalid shift: {0}")]
    InvalidShift(String),

    /// Malformed word, presentation or parameter.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// File format problems when reading structured-text documents.
    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
