use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the series, operator and fixed-point routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("disc radius must be finite and positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("series radii differ: {left} vs {right}")]
    RadiusMismatch { left: f64, right: f64 },

    #[error("image disc of radius {image_extent} is not inside the domain disc of radius {radius}")]
    ImageNotContained { image_extent: f64, radius: f64 },

    #[error("singularity at {location} lies inside or on the disc of radius {radius}")]
    SingularityInsideDisc { location: Complex64, radius: f64 },

    #[error("point {point} lies outside the open disc of radius {radius}")]
    PointOutsideDisc { point: Complex64, radius: f64 },

    #[error("evaluation at the singular location {point}")]
    SingularEvaluation { point: Complex64 },

    #[error("duplicate singular term at {location}")]
    DuplicateTerm { location: Complex64 },

    #[error("pole order must be at least 1")]
    ZeroPoleOrder,

    #[error("non-simple configuration: singularity at {location} is moved by map {map} into the closed image disc")]
    NonSimple { location: Complex64, map: usize },

    #[error("operator has no terms")]
    EmptyOperator,

    #[error("coefficient of term {index} is zero")]
    ZeroCoefficient { index: usize },

    #[error("map {index} has rate modulus {modulus} >= 1")]
    NotContractingMap { index: usize, modulus: f64 },

    #[error("maps {first} and {second} coincide")]
    DuplicateMap { first: usize, second: usize },

    #[error("target rate mu={mu} must satisfy max|s|={max_rate} < mu <= 1")]
    InvalidMu { mu: f64, max_rate: f64 },

    #[error("index {index} out of range for operator of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("projection onto map {index} is undefined: off-index coefficient sum is zero")]
    DegenerateProjection { index: usize },

    #[error("seed location {location} is not the fixed point of any map")]
    SeedNotFixed { location: Complex64 },

    #[error("seed location {location} is fixed by several maps {maps:?}")]
    SeedMultiplyFixed { location: Complex64, maps: Vec<usize> },

    #[error("inadmissible seed: {0}")]
    Inadmissible(String),

    #[error("operator is not a certified contraction on G_R (rate bound {rate})")]
    NotAContraction { rate: f64 },

    #[error("fixed point of map {index} is not independent on the disc of radius {radius}")]
    NotIndependent { index: usize, radius: f64 },

    #[error("Neumann iteration did not converge after {iterations} steps (last increment {increment:e})")]
    MaxIterations { iterations: usize, increment: f64 },

    #[error("no k <= {k_max} makes the remainder regular on the disc")]
    NoAdmissibleK { k_max: usize },

    #[error("remainder keeps singular terms on the disc of radius {radius}")]
    RemainderNotRegular { radius: f64 },

    #[error("polynomial correction system is singular at degree {degree}")]
    PolynomialSystemSingular { degree: usize },

    #[error("residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Coarse failure class, used by front ends to pick exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Precondition,
    Convergence,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::MaxIterations { .. } | Error::ResidualTooLarge { .. } => ErrorClass::Convergence,
            _ => ErrorClass::Precondition,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
