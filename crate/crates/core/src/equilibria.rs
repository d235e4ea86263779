//! The compatibility condition ρ c(κ) = κ and equilibrium classification.
//!
//! Below the threshold density ρ = n only the uniform state solves it;
//! above, a unique positive concentration κ(ρ) appears (a manifold of
//! aligned states).

use crate::grid::{Dimension, ThetaGrid};
use crate::quadrature::{c_over_kappa, order_parameter, VmfParams};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    /// ρ ≤ n: the uniform state is the only equilibrium.
    UniformOnly,
    /// ρ > n: uniform state plus the aligned VMF manifold at κ_root.
    UniformPlusVmfManifold,
}

#[derive(Debug, Clone, Copy)]
pub struct EquilibriumClass {
    pub kind: EquilibriumKind,
    pub kappa_root: f64,
}

/// Solve ρ c(κ) = κ for the equilibrium concentration.
///
/// Bisection on the strictly decreasing map κ ↦ ρ c(κ)/κ - 1 over
/// [max(tol, ε_machine), ρ]: since c < 1 the positive root lies below ρ,
/// and the left endpoint value ρ/n - 1 is positive whenever ρ > n.
pub fn kappa_of_rho(n: Dimension, rho: f64, tol: f64, grid: &ThetaGrid) -> EquilibriumClass {
    assert!(rho >= 0.0 && tol > 0.0);
    if rho <= n.nf() {
        return EquilibriumClass { kind: EquilibriumKind::UniformOnly, kappa_root: 0.0 };
    }
    let f = |k: f64| rho * c_over_kappa(VmfParams::new(k).unwrap(), grid) - 1.0;
    let mut lo = tol.max(f64::EPSILON);
    let mut hi = rho;
    // f(lo) > 0 > f(hi) for rho > n; bisect until the residual bound holds.
    debug_assert!(f(lo) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        let c = order_parameter(VmfParams::new(mid).unwrap(), grid);
        if (rho * c - mid).abs() <= tol && (hi - lo) <= tol {
            break;
        }
    }
    EquilibriumClass {
        kind: EquilibriumKind::UniformPlusVmfManifold,
        kappa_root: 0.5 * (lo + hi),
    }
}

/// ρ(κ) = κ/c(κ), with the limit value n at κ = 0. Strictly increasing;
/// inverse of `kappa_of_rho` on ρ > n.
pub fn rho_of_kappa(n: Dimension, kappa: f64, grid: &ThetaGrid) -> f64 {
    assert!(kappa >= 0.0);
    if kappa == 0.0 {
        return n.nf();
    }
    kappa / order_parameter(VmfParams::new(kappa).unwrap(), grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::ThetaGrid;
    use approx::assert_abs_diff_eq;

    fn setup(n: u32) -> (Dimension, ThetaGrid) {
        let d = Dimension::new(n).unwrap();
        (d, ThetaGrid::new(d, 3000).unwrap())
    }

    #[test]
    fn subcritical_is_uniform_only() {
        let (d, g) = setup(3);
        let e = kappa_of_rho(d, 2.0, DEFAULT_TOL, &g);
        assert_eq!(e.kind, EquilibriumKind::UniformOnly);
        assert_eq!(e.kappa_root, 0.0);
    }

    #[test]
    fn supercritical_root_n3() {
        // Oracle: bisection on 4(coth κ - 1/κ) = κ with the closed form.
        let c3 = |k: f64| 1.0 / k.tanh() - 1.0 / k;
        let (mut lo, mut hi) = (1.0, 4.0);
        for _ in 0..80 {
            let m = 0.5 * (lo + hi);
            if 4.0 * c3(m) - m > 0.0 {
                lo = m;
            } else {
                hi = m;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert_abs_diff_eq!(oracle, 2.3995, epsilon = 1e-3);

        let (d, g) = setup(3);
        let e = kappa_of_rho(d, 4.0, DEFAULT_TOL, &g);
        assert_eq!(e.kind, EquilibriumKind::UniformPlusVmfManifold);
        assert_abs_diff_eq!(e.kappa_root, oracle, epsilon = 1e-6);
    }

    #[test]
    fn near_threshold_square_root_scaling() {
        // κ ≈ √(n+2) √(ρ-n) just above threshold; 5% at δ = 1e-3.
        for n in [2, 3, 4] {
            let (d, g) = setup(n);
            let nf = n as f64;
            let rho = nf * (1.0 + 1e-3);
            let e = kappa_of_rho(d, rho, DEFAULT_TOL, &g);
            let pred = (nf + 2.0).sqrt() * (rho - nf).sqrt();
            assert!((e.kappa_root - pred).abs() / pred < 0.05);
        }
    }

    #[test]
    fn scaling_exponent_is_half() {
        // fit log κ vs log(ρ-n) on ρ-n ∈ [1e-4, 1e-2]
        let (d, g) = setup(3);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut delta = 1e-4;
        while delta <= 1e-2 + 1e-12 {
            let e = kappa_of_rho(d, 3.0 + delta, DEFAULT_TOL, &g);
            xs.push(delta.ln());
            ys.push(e.kappa_root.ln());
            delta *= 10.0f64.sqrt();
        }
        let m = xs.len() as f64;
        let xb = xs.iter().sum::<f64>() / m;
        let yb = ys.iter().sum::<f64>() / m;
        let slope = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (x - xb) * (y - yb))
            .sum::<f64>()
            / xs.iter().map(|x| (x - xb) * (x - xb)).sum::<f64>();
        assert!((slope - 0.5).abs() <= 0.02, "slope {slope}");
    }

    #[test]
    fn rho_of_kappa_limits_and_round_trip() {
        let (d, g) = setup(3);
        assert_eq!(rho_of_kappa(d, 0.0, &g), 3.0);
        // inverse of the ρ = 4 example
        assert_abs_diff_eq!(rho_of_kappa(d, 2.3995, &g), 4.0, epsilon = 1e-3);
        // large κ: ρ ≈ κ + (n-1)/2 within 0.1%
        let r = rho_of_kappa(d, 100.0, &g);
        assert!((r - 101.0).abs() / 101.0 < 1e-3);
        // round trips
        for rho in [3.1, 4.0, 6.0, 30.0] {
            let e = kappa_of_rho(d, rho, DEFAULT_TOL, &g);
            let back = rho_of_kappa(d, e.kappa_root, &g);
            assert!((back - rho).abs() <= 10.0 * DEFAULT_TOL * rho.max(1.0), "rho {rho} -> {back}");
        }
    }

    #[test]
    fn bracketing_function_single_sign_change() {
        let (_d, g) = setup(3);
        let rho = 5.0;
        let f = |k: f64| rho * c_over_kappa(VmfParams::new(k).unwrap(), &g) - 1.0;
        let mut changes = 0;
        let mut prev = f(1e-6);
        let steps = 400;
        for i in 1..=steps {
            let k = rho * i as f64 / steps as f64;
            let v = f(k);
            if prev > 0.0 && v <= 0.0 {
                changes += 1;
            }
            prev = v;
        }
        assert_eq!(changes, 1);
    }
}
