use thiserror::Error;

/// Errors raised while building operators or extracting spectral data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("clock dimension N must be at least 2, got {0}")]
    InvalidN(usize),
    #[error("site {site} out of range 1..={len}")]
    SiteOutOfRange { site: usize, len: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("root iteration did not converge after {iterations} iterations (last step {last_step:e})")]
    NonConvergence { iterations: usize, last_step: f64 },
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("degenerate spectrum: |lambda_{i} - lambda_{j}| = {gap:e} <= gap_min {gap_min:e}")]
    DegenerateSpectrum {
        i: usize,
        j: usize,
        gap: f64,
        gap_min: f64,
    },
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("functional product is not proportional to the identity at power {power} (residual {residual:e})")]
    NotScalar { power: usize, residual: f64 },
    #[error("functional product has a surviving power {power} not divisible by N (residual {residual:e})")]
    NotPeriodic { power: usize, residual: f64 },
    #[error("root x_{0} of the functional polynomial vanishes")]
    ZeroRoot(usize),
    #[error("leading coefficient A0 = {0:e} is too small to invert")]
    SingularLeading(f64),
    #[error("projected vector vanished after {attempts} attempts")]
    ZeroProjection { attempts: usize },
    #[error("constructed basis vector {index} has norm {norm:e}")]
    DegenerateBasis { index: usize, norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
