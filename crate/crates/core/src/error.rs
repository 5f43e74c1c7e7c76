use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("substitution image is not affine-linear in the coordinates of an exponent")]
    NonLinearExponentSubstitution,
    #[error("expression has a pole at the origin of parameter space")]
    PoleAtOrigin,
    #[error("exponent does not vanish at the origin of parameter space; series does not truncate")]
    NonTruncatableExponent,
    #[error("representation is not faithful: {0}")]
    NotFaithful(String),
    #[error("matrix spectrum does not factor into parameter-affine roots over Q(i)")]
    NonClosedFormSpectrum,
    #[error("coordinate recipe search failed: {0}")]
    RecipeSearchFailed(String),
    #[error("domain error while evaluating a recipe: {0}")]
    DomainError(String),
    #[error("log argument is not a single group-like tensor term")]
    NonGroupLikeLog,
    #[error("exponent contains a non-primitive coordinate; coproduct is not group-like")]
    NonGroupLikeExponent,
    #[error("group element is not invertible as a matrix of expressions")]
    NonInvertibleElement,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("solution is not unique: {0} residual free parameters")]
    NonUniqueSolution(usize),
    #[error("bracket table has ordering ambiguities in pair ({0}, {1}); rerun with symmetrization")]
    AmbiguousOrdering(String, String),
    #[error("normal ordering did not terminate within the fuel limit")]
    FuelExhausted,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
