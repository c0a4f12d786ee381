//! Error type and the global Hilbert-dimension cap.

use std::sync::OnceLock;

/// Default cap on the total Hilbert-space dimension of any dense object.
pub const DEFAULT_DIM_CAP: usize = 1 << 16;

/// Environment variable that overrides [`DEFAULT_DIM_CAP`].
pub const DIM_CAP_ENV: &str = "MEMCHAN_DIM_CAP";

/// Current Hilbert-dimension cap (read once from `MEMCHAN_DIM_CAP`).
pub fn dim_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(DIM_CAP_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&c| c >= 2)
            .unwrap_or(DEFAULT_DIM_CAP)
    })
}

/// Checks a requested dense dimension against the cap.
pub fn check_dim(needed: usize) -> Result<()> {
    let cap = dim_cap();
    if needed > cap {
        Err(Error::CapExceeded { needed, cap })
    } else {
        Ok(())
    }
}

/// Checks `base^exp` against the cap without overflowing.
pub fn check_dim_pow(base: usize, exp: usize) -> Result<usize> {
    let cap = dim_cap();
    let mut dim: usize = 1;
    for _ in 0..exp {
        dim = dim
            .checked_mul(base)
            .ok_or(Error::CapExceeded { needed: usize::MAX, cap })?;
        if dim > cap {
            return Err(Error::CapExceeded { needed: dim, cap });
        }
    }
    Ok(dim)
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("Hilbert dimension {needed} exceeds cap {cap} (set {} to raise)", DIM_CAP_ENV)]
    CapExceeded { needed: usize, cap: usize },
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("null state: all configuration amplitudes vanish")]
    NullState,
    #[error("matrix is not rank-1 (singular value ratio {0:.3e})")]
    NotRankOne(f64),
    #[error("degenerate environment: {0}")]
    DegenerateEnvironment(String),
    #[error("domain-wall count on a ring must be even (got {0})")]
    OddWallCount(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("c = 0 has no finite-temperature Ising image (coupling diverges)")]
    NoIsingImage,
    #[error("finite-difference step underflow at beta = {0}")]
    StepUnderflow(f64),
    #[error("Choi state is not a mixture of Pauli-frame unitaries (per-outcome residual {0:.3e})")]
    NonPauliMixture(f64),
    #[error("non-finite value encountered in {0}")]
    NonFinite(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
