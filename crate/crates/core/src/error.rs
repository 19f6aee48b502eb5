use thiserror::Error;

use crate::opalg::BasisTag;

/// Errors raised by operator construction and the verification pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis mismatch: {left:?} vs {right:?}")]
    BasisMismatch { left: BasisTag, right: BasisTag },

    #[error("matrix is {rows}x{cols} but basis {basis:?} has dimension {expected}")]
    DimensionMismatch {
        basis: BasisTag,
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("operator is not Hermitian (relative residual {residual:.3e} > {tolerance:.1e})")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("negative spectrum: eigenvalue {min_eigenvalue:.6e} is below {threshold:.3e}")]
    NegativeSpectrum { min_eigenvalue: f64, threshold: f64 },

    #[error("sign function is near-singular: smallest eigenvalue of H^2 is {min_eigenvalue:.3e} (threshold {threshold:.3e})")]
    NearSingular { min_eigenvalue: f64, threshold: f64 },

    #[error("shift {re}{im:+}i lies {distance:.3e} from the spectrum (margin {margin:.1e})")]
    ShiftOnSpectrum {
        re: f64,
        im: f64,
        distance: f64,
        margin: f64,
    },

    #[error("operator with basis {0:?} is not graded")]
    NotGraded(BasisTag),

    #[error("unsupported spin {0}")]
    UnsupportedSpin(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numeric level {energy:.12e} is {distance:.3e} from every analytic candidate (tolerance {tolerance:.1e})")]
    UnmatchedLevel {
        energy: f64,
        distance: f64,
        tolerance: f64,
    },

    #[error("level label {label} is inconsistent with the {case} model")]
    LabelMismatch { label: String, case: String },
}

impl Error {
    /// True for failures that come from the spectrum itself rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NegativeSpectrum { .. }
                | Error::NearSingular { .. }
                | Error::ShiftOnSpectrum { .. }
                | Error::NotHermitian { .. }
                | Error::UnmatchedLevel { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
