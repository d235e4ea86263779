//! Poincaré constant of the VMF-weighted Laplacian on the sphere and the
//! relaxation-rate formulas.
//!
//! Two Sturm-Liouville problems on (0, π) with weight
//! m(θ) = sin^{n-2}θ e^{κcosθ}:
//!   - the Neumann problem on half-nodes (matrix B), whose smallest
//!     positive eigenvalue is λ_{κ,0};
//!   - the Dirichlet problem with the (n-2)/sin²θ angular potential
//!     (matrix A from the GCI module), whose smallest eigenvalue is
//!     λ_{κ,1}.
//! The Poincaré constant is Λ_κ = min(λ_{κ,0}, λ_{κ,1}).

use crate::equilibria::kappa_of_rho;
use crate::error::Result;
use crate::gci::{assemble_matrix_a, matrix_a_weights};
use crate::grid::{Dimension, ThetaGrid};
use crate::quadrature::{order_parameter, shifted_weight, VmfParams};
use crate::tridiagonal::{smallest_eigenvalue, TridiagonalSystem};

pub const DEFAULT_EIG_TOL: f64 = 1e-11;

#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub kappa: f64,
    pub n_dim: Dimension,
    /// Smallest positive eigenvalue of the Neumann problem.
    pub lambda_0: f64,
    /// Smallest eigenvalue of the Dirichlet problem.
    pub lambda_1: f64,
    /// min(λ_{κ,0}, λ_{κ,1}).
    pub poincare: f64,
    /// Neumann ground mode at half-nodes (weighted-norm normalized).
    pub eigvec_neumann: Vec<f64>,
    /// Dirichlet ground mode at interior nodes.
    pub eigvec_dirichlet: Vec<f64>,
    pub num_intervals: usize,
}

/// Assemble the N×N Neumann operator on the half-nodes. Row i (cell
/// between θ_i and θ_{i+1}) reads
///   (N²/π²) [ -m_i/m_{i+1/2}, (m_i + m_{i+1})/m_{i+1/2}, -m_{i+1}/m_{i+1/2} ],
/// with the boundary fluxes dropped in the first and last rows, so that
/// B·1 = 0 exactly. m is evaluated in the shifted form
/// sin^{n-2}θ e^{κ(cosθ-1)} (ratios are unchanged).
pub fn assemble_matrix_b(n: Dimension, kappa: f64, num_intervals: usize) -> Result<TridiagonalSystem> {
    let grid = ThetaGrid::new(n, num_intervals)?;
    let nn = num_intervals;
    let inv_h2 = (nn as f64 / std::f64::consts::PI).powi(2);
    let m_node: Vec<f64> = grid.nodes().iter().map(|&t| shifted_weight(&grid, kappa, t)).collect();
    let m_half: Vec<f64> = grid.half_nodes().iter().map(|&t| shifted_weight(&grid, kappa, t)).collect();

    let mut diag = Vec::with_capacity(nn);
    let mut upper = Vec::with_capacity(nn - 1);
    let mut lower = Vec::with_capacity(nn - 1);
    for i in 0..nn {
        let left = if i == 0 { 0.0 } else { m_node[i] };
        let right = if i == nn - 1 { 0.0 } else { m_node[i + 1] };
        diag.push(inv_h2 * (left + right) / m_half[i]);
        if i + 1 < nn {
            upper.push(-inv_h2 * right / m_half[i]);
        }
        if i > 0 {
            lower.push(-inv_h2 * left / m_half[i]);
        }
    }
    TridiagonalSystem::new(diag, upper, lower)
}

/// Symmetrization weights of matrix B: m at half-nodes.
pub fn matrix_b_weights(n: Dimension, kappa: f64, num_intervals: usize) -> Result<Vec<f64>> {
    let grid = ThetaGrid::new(n, num_intervals)?;
    Ok(grid
        .half_nodes()
        .iter()
        .map(|&t| shifted_weight(&grid, kappa, t))
        .collect())
}

/// Compute λ_{κ,0}, λ_{κ,1} and Λ_κ with eigenvectors.
pub fn poincare_constant(n: Dimension, kappa: f64, num_intervals: usize) -> Result<SpectralResult> {
    let b = assemble_matrix_b(n, kappa, num_intervals)?;
    let wb = matrix_b_weights(n, kappa, num_intervals)?;
    let (lambda_0, eigvec_neumann) = smallest_eigenvalue(&b, &wb, true, DEFAULT_EIG_TOL)?;

    let a = assemble_matrix_a(n, kappa, num_intervals)?;
    let wa = matrix_a_weights(n, kappa, num_intervals)?;
    let (lambda_1, eigvec_dirichlet) = smallest_eigenvalue(&a, &wa, false, DEFAULT_EIG_TOL)?;

    Ok(SpectralResult {
        kappa,
        n_dim: n,
        lambda_0,
        lambda_1,
        poincare: lambda_0.min(lambda_1),
        eigvec_neumann,
        eigvec_dirichlet,
        num_intervals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateKind {
    /// ρ < n: exponential with a global rate.
    ExponentialGlobal,
    /// ρ > n: exponential with an asymptotic rate (lower bound).
    ExponentialAsymptotic,
    /// ρ = n: algebraic decay with exponent 1/2.
    AlgebraicHalf,
    /// zero-flux data: heat dynamics on the sphere, rate 2n/ε.
    HeatMode,
}

#[derive(Debug, Clone, Copy)]
pub struct RateResult {
    pub rho: f64,
    pub eps: f64,
    pub kind: RateKind,
    /// 1/time; unused for `AlgebraicHalf` (the exponent 1/2 is implied).
    pub rate: f64,
}

/// Relaxation rate of the homogeneous kinetic dynamics at density ρ.
pub fn convergence_rate(
    n: Dimension,
    rho: f64,
    eps: f64,
    zero_flux_initial: bool,
    num_intervals: usize,
) -> Result<RateResult> {
    assert!(rho >= 0.0 && eps > 0.0);
    let nf = n.nf();
    if zero_flux_initial {
        return Ok(RateResult { rho, eps, kind: RateKind::HeatMode, rate: 2.0 * nf / eps });
    }
    if rho < nf {
        return Ok(RateResult {
            rho,
            eps,
            kind: RateKind::ExponentialGlobal,
            rate: (nf - 1.0) * (nf - rho) / (nf * eps),
        });
    }
    if rho == nf {
        return Ok(RateResult { rho, eps, kind: RateKind::AlgebraicHalf, rate: 0.0 });
    }
    let grid = ThetaGrid::new(n, ThetaGrid::DEFAULT_N_COEFF)?;
    let kappa = kappa_of_rho(n, rho, crate::equilibria::DEFAULT_TOL, &grid).kappa_root;
    let c = order_parameter(VmfParams::new(kappa)?, &grid);
    let spec = poincare_constant(n, kappa, num_intervals)?;
    Ok(RateResult {
        rho,
        eps,
        kind: RateKind::ExponentialAsymptotic,
        rate: (rho * c * c + nf - rho) * spec.poincare / eps,
    })
}

/// Structural diagnostics of a spectral result; reported, not asserted.
#[derive(Debug, Clone)]
pub struct SpectralDiagnostics {
    /// Sign changes of the Neumann ground mode (expected 1).
    pub neumann_sign_changes: usize,
    /// Sign changes of the Dirichlet ground mode (expected 0).
    pub dirichlet_sign_changes: usize,
    /// ∫ cosθ f̃² sin^{n-2}θ e^{κcosθ} dθ with f̃ = e^{-κcosθ} ∂_θ f(π-θ)
    /// built from the Neumann ground state; a positive value supports
    /// λ_1 < λ_0 in dimension n ≥ 3.
    pub reflected_mode_integral: f64,
    /// Whether λ_{κ,1} < λ_{κ,0} (evidence that the Dirichlet problem
    /// carries the Poincaré constant for n ≥ 3).
    pub dirichlet_is_minimal: bool,
    /// In dimension 2 only: relative residual of the reflected transform
    /// of the Neumann mode against the Dirichlet mode (they span the
    /// same eigenvalue). `None` for n ≥ 3.
    pub n2_transform_residual: Option<f64>,
}

fn sign_changes(v: &[f64]) -> usize {
    let tol = v.iter().fold(0.0f64, |a, &x| a.max(x.abs())) * 1e-8;
    let mut count = 0;
    let mut prev = 0.0f64;
    for &x in v {
        if x.abs() <= tol {
            continue;
        }
        if prev != 0.0 && x.signum() != prev.signum() {
            count += 1;
        }
        prev = x;
    }
    count
}

pub fn spectral_diagnostics(result: &SpectralResult) -> SpectralDiagnostics {
    let n = result.n_dim;
    let kappa = result.kappa;
    let nn = result.num_intervals;
    let grid = ThetaGrid::new(n, nn).expect("grid parameters already validated");
    let h = grid.h();
    let half = grid.half_nodes();
    let f = &result.eigvec_neumann;

    // f̃(θ) = e^{-κcosθ} ∂_θ f(π-θ), centered differences on half-nodes.
    // f̃ at half-node i uses the derivative of f at the reflected
    // half-node nn-1-i (the half-node grid is symmetric about π/2).
    let deriv = |j: usize| -> f64 {
        if j == 0 {
            (f[1] - f[0]) / h
        } else if j == nn - 1 {
            (f[nn - 1] - f[nn - 2]) / h
        } else {
            (f[j + 1] - f[j - 1]) / (2.0 * h)
        }
    };
    let f_tilde: Vec<f64> = (0..nn)
        .map(|i| {
            let theta = half[i];
            // ∂_θ [f(π-θ)] = -f'(π-θ)
            (-kappa * theta.cos()).exp() * (-deriv(nn - 1 - i))
        })
        .collect();

    // shifted weight keeps the integral finite at large κ; only the sign
    // is reported so the constant factor is irrelevant
    let mut integral = 0.0;
    for i in 0..nn {
        let theta = half[i];
        integral += theta.cos() * f_tilde[i] * f_tilde[i] * shifted_weight(&grid, kappa, theta) * h;
    }

    let n2_transform_residual = if n.get() == 2 {
        // compare f̃ (at half-nodes, interpolated to nodes) with the
        // Dirichlet ground mode at interior nodes, up to scale
        let g = &result.eigvec_dirichlet; // at nodes 1..nn-1
        let ft_nodes: Vec<f64> = (1..nn).map(|i| 0.5 * (f_tilde[i - 1] + f_tilde[i])).collect();
        let dot: f64 = ft_nodes.iter().zip(g).map(|(a, b)| a * b).sum();
        let nf2: f64 = ft_nodes.iter().map(|x| x * x).sum();
        let scale = dot / nf2;
        let res: f64 = ft_nodes
            .iter()
            .zip(g)
            .map(|(a, b)| (scale * a - b) * (scale * a - b))
            .sum::<f64>()
            .sqrt()
            / g.iter().map(|x| x * x).sum::<f64>().sqrt();
        Some(res)
    } else {
        None
    };

    SpectralDiagnostics {
        neumann_sign_changes: sign_changes(f),
        dirichlet_sign_changes: sign_changes(&result.eigvec_dirichlet),
        reflected_mode_integral: integral,
        dirichlet_is_minimal: result.lambda_1 < result.lambda_0,
        n2_transform_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn b_annihilates_constants() {
        for (n, kappa) in [(2u32, 0.0), (3, 1.0), (4, 7.0)] {
            let b = assemble_matrix_b(dim(n), kappa, 60).unwrap();
            let y = b.matvec(&vec![1.0; 60]);
            let scale = b.diag.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
            for v in y {
                assert!(v.abs() <= 1e-12 * scale, "B·1 != 0: {v}");
            }
        }
    }

    #[test]
    fn b_spectral_gap_is_sphere_gap_at_kappa_zero() {
        // smallest positive eigenvalue → n-1 as the grid refines
        let b = assemble_matrix_b(dim(3), 0.0, 300).unwrap();
        let w = matrix_b_weights(dim(3), 0.0, 300).unwrap();
        let (val, _) = smallest_eigenvalue(&b, &w, true, 1e-12).unwrap();
        assert_abs_diff_eq!(val, 2.0, epsilon = 1e-3);
    }

    #[test]
    fn b_symmetrization_against_dense_oracle() {
        // compare the scaled matrix entries directly at N = 100
        let nn = 100;
        let b = assemble_matrix_b(dim(3), 2.0, nn).unwrap();
        let w = matrix_b_weights(dim(3), 2.0, nn).unwrap();
        for i in 0..nn - 1 {
            let upper_scaled = b.upper[i] * w[i].sqrt() / w[i + 1].sqrt();
            let lower_scaled = b.lower[i] * w[i + 1].sqrt() / w[i].sqrt();
            assert_abs_diff_eq!(upper_scaled, lower_scaled, epsilon = 1e-9 * upper_scaled.abs());
        }
    }

    #[test]
    fn poincare_constant_anchors() {
        // κ = 0, n = 3: Λ = n-1 = 2 within 1e-3 at N = 300
        let r = poincare_constant(dim(3), 0.0, 300).unwrap();
        assert_abs_diff_eq!(r.poincare, 2.0, epsilon = 1e-3);
        assert_eq!(r.poincare, r.lambda_0.min(r.lambda_1));
    }

    #[test]
    fn n2_eigenvalues_coincide() {
        for kappa in [0.5, 1.0, 2.0, 5.0] {
            let r = poincare_constant(dim(2), kappa, 300).unwrap();
            let rel = (r.lambda_0 - r.lambda_1).abs() / r.lambda_1;
            assert!(rel < 1e-3, "kappa={kappa}: {} vs {}", r.lambda_0, r.lambda_1);
        }
    }

    #[test]
    fn dirichlet_eigenvalue_scales_like_kappa() {
        let r = poincare_constant(dim(3), 20.0, 300).unwrap();
        let ratio = r.lambda_1 / 20.0;
        assert!((0.8..=1.2).contains(&ratio), "lambda_1/kappa = {ratio}");
    }

    #[test]
    fn lower_bound_exponential_in_kappa() {
        // Λ_κ ≥ (n-1) e^{-2κ}
        for n in [2u32, 3] {
            let mut kappa = 0.0;
            while kappa <= 10.0 {
                let r = poincare_constant(dim(n), kappa, 150).unwrap();
                let bound = (n as f64 - 1.0) * (-2.0 * kappa).exp();
                assert!(r.poincare >= bound * 0.999, "n={n} kappa={kappa}: {} < {bound}", r.poincare);
                kappa += 1.0;
            }
        }
    }

    #[test]
    fn rate_formulas() {
        // ρ < n closed form
        let r = convergence_rate(dim(3), 2.0, 1.0, false, 150).unwrap();
        assert_eq!(r.kind, RateKind::ExponentialGlobal);
        assert_abs_diff_eq!(r.rate, 2.0 / 3.0, epsilon = 1e-14);
        // zero flux
        let r = convergence_rate(dim(3), 5.0, 1.0, true, 150).unwrap();
        assert_eq!(r.kind, RateKind::HeatMode);
        assert_abs_diff_eq!(r.rate, 6.0, epsilon = 1e-14);
        // ρ = n
        let r = convergence_rate(dim(3), 3.0, 1.0, false, 150).unwrap();
        assert_eq!(r.kind, RateKind::AlgebraicHalf);
        // ρ slightly above n: matches 2(n-1)(ρ/n - 1) within 10%
        let rho = 3.0 * (1.0 + 1e-3);
        let r = convergence_rate(dim(3), rho, 1.0, false, 300).unwrap();
        assert_eq!(r.kind, RateKind::ExponentialAsymptotic);
        let pred = 2.0 * 2.0 * (rho / 3.0 - 1.0);
        assert!((r.rate - pred).abs() / pred < 0.1, "{} vs {pred}", r.rate);
    }

    #[test]
    fn diagnostics_sign_structure() {
        let r = poincare_constant(dim(3), 1.0, 200).unwrap();
        let d = spectral_diagnostics(&r);
        assert_eq!(d.neumann_sign_changes, 1);
        assert_eq!(d.dirichlet_sign_changes, 0);
        assert!(d.dirichlet_is_minimal);
    }

    #[test]
    fn n2_reflected_transform_maps_between_ground_modes() {
        let r = poincare_constant(dim(2), 1.5, 400).unwrap();
        let d = spectral_diagnostics(&r);
        let res = d.n2_transform_residual.unwrap();
        assert!(res < 5e-3, "transform residual {res}");
    }

    #[test]
    fn eigenvalue_grid_convergence() {
        let vals: Vec<f64> = [150usize, 300, 600]
            .iter()
            .map(|&nn| poincare_constant(dim(3), 1.0, nn).unwrap().lambda_1)
            .collect();
        let ratio = (vals[0] - vals[1]) / (vals[1] - vals[2]);
        assert!((ratio - 4.0).abs() < 0.5, "Richardson ratio {ratio}");
    }
}
