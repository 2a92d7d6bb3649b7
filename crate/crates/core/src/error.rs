use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grade {0} is outside 0..=6")]
    GradeOutOfRange(usize),

    #[error("expected a homogeneous multivector of grade {expected}")]
    NotHomogeneous { expected: &'static str },

    #[error("exponential series did not converge within {max_terms} terms")]
    NoConvergence { max_terms: usize },

    #[error("result is not a paravector: residue {residue:.3e} outside grades 0 and 1")]
    NonParavectorResidue { residue: f64 },

    #[error("result contains covector directions: residue {residue:.3e}")]
    CovectorResidue { residue: f64 },

    #[error("hodge star undefined: residue {residue:.3e} outside grades 0..=3")]
    HodgeDomain { residue: f64 },

    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("versor is not hodge-compatible: condition residual {residual:.3e}")]
    NotHodgeCompatible { residual: f64 },

    #[error("transform is not linear on (w, p): probe mismatch {mismatch:.3e}")]
    NotLinear { mismatch: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
