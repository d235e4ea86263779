use thiserror::Error;

/// Errors shared by all numerical modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A linear solve or eigenvalue iteration broke down. Carries a
    /// diagnostic message; not expected for the matrices built here.
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    /// An asymptotic expansion was queried outside its validity range.
    #[error("out of validity range: {0}")]
    OutOfRange(String),

    /// A time step was rejected by a stability bound.
    #[error("time step {dt} rejected, maximal stable step is {dt_max}")]
    UnstableTimeStep { dt: f64, dt_max: f64 },

    /// The disordered-phase diffusion model is queried where its
    /// Chapman-Enskog derivation is no longer valid (density too close
    /// to the threshold).
    #[error("diffusion model validity lost: {0}")]
    ValidityLoss(String),

    /// A hydrodynamic cell left the hyperbolic safety region.
    #[error("hyperbolicity lost: {0}")]
    HyperbolicityLoss(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// A relaxation run whose late-time distance is not monotone:
    /// the target equilibrium was misidentified.
    #[error("equilibrium misidentified: {0}")]
    EquilibriumMisidentified(String),
}

pub type Result<T> = std::result::Result<T, Error>;
