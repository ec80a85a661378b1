use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure class, used by front-ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad parameters or configuration.
    Config,
    /// Input data violates a precondition.
    Data,
    /// A numerical routine could not complete.
    Numeric,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("column {0} has zero variance")]
    ConstantColumn(usize),
    #[error("trait vector has zero variance")]
    ConstantTrait,
    #[error("column {0} is monomorphic in the pooled sample")]
    MonomorphicColumn(usize),
    #[error("case or control group is empty")]
    EmptyGroup,
    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),
    #[error("sample size {n} is too small (need at least {min})")]
    BadSampleSize { n: usize, min: usize },
    #[error("correlation at index {0} has magnitude 1")]
    DegenerateCorrelation(usize),
    #[error("non-finite input at index {0}")]
    NonFiniteInput(usize),
    #[error("empty input")]
    EmptyInput,
    #[error("p-value {value} at index {index} lies outside [0, 1]")]
    PValueOutOfRange { index: usize, value: f64 },
    #[error("threshold grid is empty")]
    EmptyGrid,
    #[error("threshold {0} gives a degenerate tail probability")]
    DegenerateGridPoint(f64),
    #[error("lower threshold {s} exceeds the grid ceiling {upper}")]
    BadRange { s: f64, upper: f64 },
    #[error("rarity alpha = {0} is outside (1/2, 1)")]
    AlphaOutOfRange(f64),
    #[error("e' Sigma e = {0} is not positive")]
    NonPositiveQuadForm(f64),
    #[error("matrix is not positive definite (leading minor {index} fails)")]
    NotPositiveDefinite { index: usize },
    #[error("LD target {spec} is not positive definite (leading minor {index} fails)")]
    LdNotPositiveDefinite { spec: String, index: usize },
    #[error("latent Gaussian correlation matrix is not positive definite (leading minor {index} fails)")]
    LatentNotPD { index: usize },
    #[error("matrix is not square ({rows} x {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("target correlation {rho} is unattainable for margins ({q1}, {q2}); bounds [{lo}, {hi}]")]
    Unattainable { rho: f64, q1: f64, q2: f64, lo: f64, hi: f64 },
    #[error("signal count {k} is invalid for {l} SNPs")]
    BadK { k: usize, l: usize },
    #[error("case/control sampling stalled: acceptance probability {0:e} for one class")]
    QuotaStall(f64),
    #[error("{n_perms} permutations are too few for level {level} (need {required})")]
    TooFewPermutations { n_perms: usize, level: f64, required: usize },
    #[error("gene {0} has no SNPs")]
    EmptyGene(String),
    #[error("genotype value {value} at row {row}, column {col} is not an allele count")]
    InvalidGenotype { row: usize, col: usize, value: f64 },
    #[error("method {method} does not apply to {trait_kind} traits")]
    MethodNotApplicable { method: &'static str, trait_kind: &'static str },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            NonPositiveSigma(_)
            | AlphaOutOfRange(_)
            | BadRange { .. }
            | EmptyGrid
            | BadK { .. }
            | TooFewPermutations { .. }
            | MethodNotApplicable { .. }
            | InvalidParameter { .. }
            | LdNotPositiveDefinite { .. }
            | Unattainable { .. } => ErrorClass::Config,
            ConstantColumn(_)
            | ConstantTrait
            | MonomorphicColumn(_)
            | EmptyGroup
            | BadSampleSize { .. }
            | NonFiniteInput(_)
            | EmptyInput
            | PValueOutOfRange { .. }
            | NotSquare { .. }
            | DimensionMismatch { .. }
            | EmptyGene(_)
            | InvalidGenotype { .. }
            | Io(_) => ErrorClass::Data,
            DegenerateCorrelation(_)
            | DegenerateGridPoint(_)
            | NonPositiveQuadForm(_)
            | NotPositiveDefinite { .. }
            | LatentNotPD { .. }
            | QuotaStall(_) => ErrorClass::Numeric,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
