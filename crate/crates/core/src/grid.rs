//! Polar-angle grid on (0, π).
//!
//! Everything downstream (quadrature, the elliptic closure solve, the
//! eigenvalue problems, the kinetic solver) works on the same uniform
//! grid θ_i = iπ/N, with half-nodes θ_{i+1/2} interleaved.

use crate::error::{Error, Result};

/// Ambient dimension n ≥ 2; orientations live on the sphere S^{n-1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("dimension must be >= 2, got {n}")));
        }
        Ok(Dimension(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// n as f64, for formulas.
    pub fn nf(self) -> f64 {
        f64::from(self.0)
    }

    /// Exponent of the sin θ volume weight on S^{n-1}.
    pub fn sin_exponent(self) -> f64 {
        f64::from(self.0) - 2.0
    }
}

/// Uniform discretization of (0, π) with N intervals.
#[derive(Debug, Clone)]
pub struct ThetaGrid {
    pub n: Dimension,
    num_intervals: usize,
    nodes: Vec<f64>,
    half_nodes: Vec<f64>,
}

impl ThetaGrid {
    /// Default interval count for coefficient quadrature.
    pub const DEFAULT_N_COEFF: usize = 3000;
    /// Default interval count for eigenvalue problems.
    pub const DEFAULT_N_EIG: usize = 300;

    pub fn new(n: Dimension, num_intervals: usize) -> Result<Self> {
        if num_intervals < 8 {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 8 intervals, got {num_intervals}"
            )));
        }
        let h = std::f64::consts::PI / num_intervals as f64;
        let nodes = (0..=num_intervals).map(|i| i as f64 * h).collect();
        let half_nodes = (0..num_intervals).map(|i| (i as f64 + 0.5) * h).collect();
        Ok(ThetaGrid { n, num_intervals, nodes, half_nodes })
    }

    pub fn num_intervals(&self) -> usize {
        self.num_intervals
    }

    /// Mesh width π/N.
    pub fn h(&self) -> f64 {
        std::f64::consts::PI / self.num_intervals as f64
    }

    /// Nodes θ_i, i = 0..=N.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Half-nodes θ_{i+1/2}, i = 0..N.
    pub fn half_nodes(&self) -> &[f64] {
        &self.half_nodes
    }
}
