use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("iteration limit reached: {0}")]
    IterationLimit(String),
    #[error("two lowest eigenvalues {lower} and {upper} are not separated")]
    NearDegenerate { lower: f64, upper: f64 },
    #[error("size {size} exceeds limit {limit}")]
    SizeExceeded { size: usize, limit: usize },
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("grid spacing {dx} exceeds sqrt(hbar)/8 = {limit}")]
    ResolutionGuard { dx: f64, limit: f64 },
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("perturbation kind does not match the model")]
    KindMismatch,
    #[error("operator leaks out of the symmetric sector (deviation {0:e})")]
    SectorLeak(f64),
    #[error("polynomial degree {degree} exceeds cap {cap}")]
    DegreeExceeded { degree: usize, cap: usize },
    #[error("quadrature degree {available} below required {required}")]
    QuadratureTooCoarse { required: usize, available: usize },
    #[error("coherent state centred at q = {q} escapes the grid")]
    TailEscape { q: f64 },
    #[error("phase-space window holds only {mass} of the Husimi mass")]
    WindowTooSmall { mass: f64 },
    #[error("point does not belong to the model's phase space")]
    DomainMismatch,
    #[error("Newton refinement diverged near {0:?}")]
    RefinementDiverged(Vec<f64>),
    #[error("symmetry does not act transitively on the minima")]
    NotTransitive,
    #[error("extrapolation fit is degenerate")]
    FitDegenerate,
    #[error("at {name} = {value}: {source}")]
    AtParameter {
        name: String,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn at(self, name: &str, value: f64) -> Error {
        Error::AtParameter {
            name: name.to_string(),
            value,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
