//! Kinetic alignment models of self-propelled particles: equilibria,
//! closure coefficients of the macroscopic limits, spectral relaxation
//! rates, and direct solvers for the homogeneous kinetic equation, the
//! particle system, and the macroscopic PDEs.

pub mod asymptotics;
pub mod equilibria;
pub mod error;
pub mod gci;
pub mod grid;
pub mod kinetic;
pub mod macroscopic;
pub mod particles;
pub mod quadrature;
pub mod spectrum;
pub mod tridiagonal;
pub mod validation;

pub use equilibria::{kappa_of_rho, rho_of_kappa, EquilibriumClass, EquilibriumKind};
pub use error::{Error, Result};
pub use gci::{closure_coefficients, solve_gci, ClosureCoefficients, GciSolution};
pub use grid::{Dimension, ThetaGrid};
pub use kinetic::{relax, AxisymState, RelaxationSeries, SamplePoint};
pub use macroscopic::{
    characteristic_speeds, diffusion_step, hydro_step_1d, region_map, CoefficientTable,
    DiffusionState1D, HydroState1D, Region, RegionMap, SpeedDiagnostics, WaveSpeeds,
};
pub use particles::{sample_vmf, EnsembleStats, KernelSpec, ParticleEnsemble};
pub use quadrature::{order_parameter, vmf_average, VmfParams};
pub use spectrum::{
    convergence_rate, poincare_constant, spectral_diagnostics, RateKind, RateResult,
    SpectralDiagnostics, SpectralResult,
};
pub use tridiagonal::TridiagonalSystem;
pub use validation::CriterionReport;
