use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("homomorphism is not well defined: {0}")]
    IllDefinedHom(String),

    #[error("A and B do not cover X: simplex {0} lies in neither piece")]
    CoverFailure(String),

    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),

    #[error("cochains disagree on the overlap at simplex {0}")]
    GlueMismatch(String),

    #[error("not a cocycle: {0}")]
    NotCocycle(String),

    #[error("not a cocycle modulo the integers: {0}")]
    NotFlatCocycle(String),

    #[error("differential class has nonzero characteristic class")]
    NonzeroCharacteristic,

    #[error("class does not lie in the subgroup: {0}")]
    NotInSubgroup(String),

    #[error("incoherent pair: {0}")]
    IncoherentPair(String),

    #[error("objects live on different complexes or degrees: {0}")]
    Incompatible(String),

    #[error("internal solver failure: {0}")]
    Internal(String),

    #[error("scene error: {0}")]
    Scene(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
