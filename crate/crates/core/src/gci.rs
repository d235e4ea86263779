//! Generalized-collisional-invariant solve and the ordered-phase closure
//! coefficients (c, c̃, λ, γ, θ_c).
//!
//! The elliptic problem for the GCI profile is discretized on the node
//! grid as a tridiagonal system A F = S with Dirichlet data, where
//! F holds f(θ_i) = (sin θ_i)^{n/2-1} g(θ_i) at interior nodes and
//! S_i = sin^{n/2} θ_i. c̃ is then a weighted trapezoid average of cos θ
//! against f (sin θ)^{n/2} e^{κ cos θ}.

use crate::equilibria::{kappa_of_rho, EquilibriumKind};
use crate::error::{Error, Result};
use crate::grid::{Dimension, ThetaGrid};
use crate::quadrature::{order_parameter, VmfParams};
use crate::tridiagonal::TridiagonalSystem;

/// Solution of the GCI elliptic problem at one concentration.
#[derive(Debug, Clone)]
pub struct GciSolution {
    pub kappa: f64,
    pub grid: ThetaGrid,
    /// f(θ_i) at interior nodes i = 1..N-1; f(θ_0) = f(θ_N) = 0.
    pub f_values: Vec<f64>,
}

/// Closure coefficients of the ordered-phase hydrodynamics at one
/// density ρ > n.
#[derive(Debug, Clone, Copy)]
pub struct ClosureCoefficients {
    pub n_dim: Dimension,
    pub rho: f64,
    pub kappa: f64,
    /// Order parameter c(κ(ρ)) ∈ (0, 1): mass flux speed factor.
    pub c: f64,
    /// Orientation convection speed c̃.
    pub c_tilde: f64,
    /// Pressure-like coupling of ∇ρ into the orientation equation.
    pub lambda: f64,
    /// γ = d(ρc)/dρ = c/(n - ρ + κc): density-wave speed factor.
    pub gamma: f64,
    /// Critical propagation angle; `None` when λ ≥ 0 (hyperbolic for
    /// every angle, not observed in practice).
    pub theta_c: Option<f64>,
}

/// Assemble the (N-1)×(N-1) tridiagonal Dirichlet operator at the
/// interior nodes:
///   d_i = (n-2)/(2 sin²θ_i) (1 + (n-2)/2 cos²θ_i) - (n/2-1) κ cos θ_i
///         + (N²/π²)(e_{i-1/2} + e_{i+1/2})/e_i,
///   b_i = -(N²/π²) e_{i+1/2}/e_i,   b̃_i = -(N²/π²) e_{i-1/2}/e_i,
/// with e evaluated at nodes and half-nodes. The exponential ratios are
/// formed directly from cos θ differences, so large κ cannot overflow.
pub fn assemble_matrix_a(n: Dimension, kappa: f64, num_intervals: usize) -> Result<TridiagonalSystem> {
    let grid = ThetaGrid::new(n, num_intervals)?;
    let nn = num_intervals;
    let nf = n.nf();
    let inv_h2 = (nn as f64 / std::f64::consts::PI).powi(2);
    let nodes = grid.nodes();
    let half = grid.half_nodes();
    let e_ratio = |theta_half: f64, theta_node: f64| (kappa * (theta_half.cos() - theta_node.cos())).exp();

    let m = nn - 1;
    let mut diag = Vec::with_capacity(m);
    let mut upper = Vec::with_capacity(m - 1);
    let mut lower = Vec::with_capacity(m - 1);
    for i in 1..nn {
        let th = nodes[i];
        let s2 = th.sin() * th.sin();
        let potential = (nf - 2.0) / (2.0 * s2) * (1.0 + (nf - 2.0) / 2.0 * th.cos() * th.cos());
        let em = e_ratio(half[i - 1], th); // e_{i-1/2}/e_i
        let ep = e_ratio(half[i], th); // e_{i+1/2}/e_i
        // The κ cos θ term carries the factor n/2-1 from substituting
        // f = sin^{n/2-1}θ g; in particular it vanishes in dimension 2.
        diag.push(potential - (nf / 2.0 - 1.0) * kappa * th.cos() + inv_h2 * (em + ep));
        if i < nn - 1 {
            upper.push(-inv_h2 * ep);
        }
        if i > 1 {
            lower.push(-inv_h2 * em);
        }
    }
    TridiagonalSystem::new(diag, upper, lower)
}

/// Symmetrization weights for matrix A: w_i = e^{κ(cos θ_i - 1)} at the
/// interior nodes (the sin weight is already absorbed into f).
pub fn matrix_a_weights(n: Dimension, kappa: f64, num_intervals: usize) -> Result<Vec<f64>> {
    let grid = ThetaGrid::new(n, num_intervals)?;
    Ok(grid.nodes()[1..num_intervals]
        .iter()
        .map(|&th| (kappa * (th.cos() - 1.0)).exp())
        .collect())
}

/// Solve A F = S with S_i = sin^{n/2} θ_i by the Thomas algorithm.
pub fn solve_gci(n: Dimension, kappa: f64, num_intervals: usize) -> Result<GciSolution> {
    if kappa <= 0.0 {
        return Err(Error::InvalidInput(format!("GCI solve needs kappa > 0, got {kappa}")));
    }
    let grid = ThetaGrid::new(n, num_intervals)?;
    let a = assemble_matrix_a(n, kappa, num_intervals)?;
    let half_n = n.nf() / 2.0;
    let rhs: Vec<f64> = grid.nodes()[1..num_intervals]
        .iter()
        .map(|&th| th.sin().powf(half_n))
        .collect();
    let f = a.solve(&rhs)?;
    // residual check, relative to ‖S‖_∞
    let res = a
        .matvec(&f)
        .iter()
        .zip(&rhs)
        .map(|(y, s)| (y - s).abs())
        .fold(0.0, f64::max);
    let s_inf = rhs.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if res > 1e-8 * s_inf {
        return Err(Error::NumericalBreakdown(format!(
            "GCI solve residual {res:.3e} exceeds 1e-8 * {s_inf:.3e}"
        )));
    }
    Ok(GciSolution { kappa, grid, f_values: f })
}

/// c̃(κ): trapezoid average of cos θ with weight f(θ) sin^{n/2}θ e^{κcosθ}
/// over the interior nodes (the endpoint contributions vanish with the
/// Dirichlet data).
pub fn c_tilde_from_solution(sol: &GciSolution) -> f64 {
    let grid = &sol.grid;
    let half_n = grid.n.nf() / 2.0;
    let mut num = 0.0;
    let mut den = 0.0;
    for (idx, &f) in sol.f_values.iter().enumerate() {
        let th = grid.nodes()[idx + 1];
        let w = f * th.sin().powf(half_n) * (sol.kappa * (th.cos() - 1.0)).exp();
        num += w * th.cos();
        den += w;
    }
    num / den
}

/// Margin below which ρ is considered too close to the threshold for a
/// closure solve.
pub const DEFAULT_RHO_MARGIN: f64 = 1e-6;

/// Compute the full closure coefficient tuple at density ρ > n.
pub fn closure_coefficients(n: Dimension, rho: f64, num_intervals: usize) -> Result<ClosureCoefficients> {
    let nf = n.nf();
    if rho <= nf + DEFAULT_RHO_MARGIN {
        return Err(Error::InvalidInput(format!(
            "closure needs rho > n + {DEFAULT_RHO_MARGIN}, got rho = {rho}, n = {nf}"
        )));
    }
    let grid = ThetaGrid::new(n, num_intervals)?;
    let eq = kappa_of_rho(n, rho, crate::equilibria::DEFAULT_TOL, &grid);
    debug_assert_eq!(eq.kind, EquilibriumKind::UniformPlusVmfManifold);
    let kappa = eq.kappa_root;
    let c = order_parameter(VmfParams::new(kappa)?, &grid);
    let sol = solve_gci(n, kappa, num_intervals)?;
    let c_tilde = c_tilde_from_solution(&sol);

    // denominator n - ρ + κc = c dρ/dκ > 0 in the ordered phase
    let denom = nf - rho + kappa * c;
    let lambda = (nf - rho + kappa * c_tilde) / (kappa * denom);
    let gamma = c / denom;
    let theta_c = if lambda < 0.0 {
        Some(((c_tilde - gamma).abs() / (2.0 * (-lambda * c).sqrt())).atan())
    } else {
        None
    };
    Ok(ClosureCoefficients { n_dim: n, rho, kappa, c, c_tilde, lambda, gamma, theta_c })
}

/// Both algebraic routes to λ, for diagnostics: the closed form used in
/// `closure_coefficients` and the sum form 1/κ + (c̃-c)/(n-ρ+κc).
pub fn lambda_identity_pair(coeffs: &ClosureCoefficients) -> (f64, f64) {
    let nf = coeffs.n_dim.nf();
    let denom = nf - coeffs.rho + coeffs.kappa * coeffs.c;
    let closed = (nf - coeffs.rho + coeffs.kappa * coeffs.c_tilde) / (coeffs.kappa * denom);
    let sum_form = 1.0 / coeffs.kappa + (coeffs.c_tilde - coeffs.c) / denom;
    (closed, sum_form)
}
