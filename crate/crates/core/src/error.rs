use crate::geometry::Window;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("kind mismatch: {0} vs {1}")]
    KindMismatch(String, String),
    #[error("rotation part is not an element of the point group")]
    RotationOutsideGroup,
    #[error("unbounded request: {0}")]
    UnboundedRequest(String),
    #[error("family is not pairwise compatible: {0}")]
    NotPairwiseCompatible(String),
    #[error("family is not locally finite (witness window {witness:?})")]
    NotLocallyFinite { witness: Window },
    #[error("not a Delone set: {0}")]
    NotDelone(String),
    #[error("point set is not uniformly discrete")]
    NotUniformlyDiscrete,
    #[error("Dirac comb weight must be nonzero")]
    ZeroWeight,
    #[error("pattern kind is not glueable: {0}")]
    NotGlueable(String),
    #[error("invalid payload: {0}")]
    InvalidPayload(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("scale infeasible: {0}")]
    ScaleInfeasible(String),
    #[error("grid search exhausted: {0}")]
    GridSearchExhausted(String),
    #[error("no nonzero fixed vector for the representation on this point group")]
    NoFixedVector,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
