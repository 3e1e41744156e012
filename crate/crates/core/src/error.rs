use thiserror::Error;

/// Errors produced by mesh construction, assembly, factorization, and
/// estimator builds.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("boundary triangle at ({0:.6}, {1:.6}, {2:.6}) matches no tagged surface")]
    UntaggableTriangle(f64, f64, f64),

    #[error("sensor at ({0:.6}, {1:.6}, {2:.6}) has no containing element within snap tolerance")]
    SensorPlacement(f64, f64, f64),

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("matrix is not positive definite (pivot {pivot:.3e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: String,
    },

    #[error("rank deficiency: singular value ratio {ratio:.3e} below {tol:.3e} in direction {direction}")]
    RankDeficient {
        direction: usize,
        ratio: f64,
        tol: f64,
    },

    #[error("conditioning failure: {0}")]
    Conditioning(String),

    #[error("regularization bracket [{lo:.3e}, {hi:.3e}] does not straddle target misfit {delta:.6e} (misfit at lo {misfit_lo:.6e}, at hi {misfit_hi:.6e})")]
    BracketMiss {
        lo: f64,
        hi: f64,
        delta: f64,
        misfit_lo: f64,
        misfit_hi: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),

    #[error("checksum mismatch in container (stored {stored}, computed {computed})")]
    Checksum { stored: String, computed: String },
}

pub type Result<T> = std::result::Result<T, Error>;
