use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown graph family `{0}`")]
    InvalidFamily(String),

    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),

    #[error("graph not connected after {attempts} generation attempts")]
    ConnectivityRetries { attempts: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: vertex index {index} out of range for n = {n}")]
    IndexOutOfRange { line: usize, index: usize, n: usize },

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("edge ({0}, {1}) has non-positive or non-finite weight {2}")]
    InvalidWeight(usize, usize, f64),

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("weight matrix has no eigenvalue within 1e-9 of 1")]
    NotStochastic,

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("memory coefficients must sum to zero, got {0:e}")]
    ThetaSum(f64),

    #[error("augmented dimension {dim} exceeds cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("sample point is (numerically) a characteristic root; resample")]
    SingularEvaluation,

    #[error("left eigenvector normalization is degenerate (denominator {0:e})")]
    DegenerateNormalization(f64),

    #[error("degree {degree} unsupported (max {max}); corner tests do not extend to discrete-time polynomials beyond degree 3")]
    UnsupportedDegree { degree: usize, max: usize },

    #[error("protocol diverges (rate {0} >= 1)")]
    Divergent(f64),

    #[error("protocol `{0}` does not match the requested simulation")]
    KindMismatch(&'static str),
}
