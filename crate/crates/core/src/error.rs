//! Error type shared by the scattering and phase-time modules.

use thiserror::Error;

/// Errors produced by network construction, solving, and sweeps.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A precondition on a physical quantity was violated (e.g. `E <= 0`).
    #[error("domain error: {0}")]
    Domain(String),

    /// The linear solve failed or produced an unusable result.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The analytic energy derivative is ill-conditioned because some barrier
    /// strength is within `gap` of the energy; callers should fall back to
    /// finite differences.
    #[error(
        "branch {branch}: |V - E| = {gap:.3e} is too close to the barrier top \
         for the analytic derivative; use finite differences"
    )]
    NearBarrierTop { branch: usize, gap: f64 },

    /// The transmission amplitude vanished, so its phase (and phase time) is
    /// undefined.
    #[error("branch {branch}: transmission amplitude is zero, phase undefined")]
    UndefinedPhase { branch: usize },

    /// A sweep axis or observable addressed a parameter that does not exist.
    #[error("invalid parameter path: {0}")]
    ParameterPath(String),
}

pub type Result<T> = std::result::Result<T, Error>;
