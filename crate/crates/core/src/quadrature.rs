//! Weighted trapezoid quadrature and Von-Mises-Fisher averages.
//!
//! Averages of γ(cos θ) against the density e^{κ cos θ} sin^{n-2}θ on
//! (0, π). The weight is computed in the shifted form e^{κ(cos θ - 1)}
//! in numerator and denominator at once, so ratios stay finite for
//! arbitrarily large κ.

use crate::error::{Error, Result};
use crate::grid::ThetaGrid;

/// Von-Mises-Fisher concentration κ ≥ 0 on S^{n-1}.
#[derive(Debug, Clone, Copy)]
pub struct VmfParams {
    pub kappa: f64,
}

impl VmfParams {
    pub fn new(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(Error::InvalidInput(format!("kappa must be finite and >= 0, got {kappa}")));
        }
        Ok(VmfParams { kappa })
    }
}

/// Trapezoid weights for ∫ f(θ) dθ on the node grid: h at interior
/// nodes, h/2 at the endpoints.
fn trapezoid_factor(i: usize, num_intervals: usize) -> f64 {
    if i == 0 || i == num_intervals {
        0.5
    } else {
        1.0
    }
}

/// VMF weight at angle θ, shifted by e^{-κ}: e^{κ(cos θ - 1)} sin^{n-2}θ.
pub fn shifted_weight(grid: &ThetaGrid, kappa: f64, theta: f64) -> f64 {
    let p = grid.n.sin_exponent();
    let s = theta.sin().max(0.0);
    let sp = if p == 0.0 { 1.0 } else { s.powf(p) };
    (kappa * (theta.cos() - 1.0)).exp() * sp
}

/// Average of γ(cos θ) under the VMF distribution with concentration κ,
/// by composite trapezoid on the grid nodes.
pub fn vmf_average<F: Fn(f64) -> f64>(p: VmfParams, grid: &ThetaGrid, gamma: F) -> Result<f64> {
    let nn = grid.num_intervals();
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, &theta) in grid.nodes().iter().enumerate() {
        let w = trapezoid_factor(i, nn) * shifted_weight(grid, p.kappa, theta);
        let g = gamma(theta.cos());
        if !g.is_finite() {
            return Err(Error::InvalidInput(format!(
                "integrand is non-finite at theta = {theta}"
            )));
        }
        num += w * g;
        den += w;
    }
    Ok(num / den)
}

/// Order parameter c(κ) = ⟨cos θ⟩ under the VMF distribution.
pub fn order_parameter(p: VmfParams, grid: &ThetaGrid) -> f64 {
    vmf_average(p, grid, |t| t).expect("cos is finite")
}

/// dc/dκ via the identity dc/dκ = 1 - (n-1)c/κ - c², with the limit
/// value 1/n at κ = 0 (from c = κ/n - κ³/(n²(n+2)) + O(κ⁵)).
pub fn dc_dkappa(p: VmfParams, grid: &ThetaGrid) -> f64 {
    let n = grid.n.nf();
    if p.kappa == 0.0 {
        return 1.0 / n;
    }
    let c = order_parameter(p, grid);
    1.0 - (n - 1.0) * c / p.kappa - c * c
}

/// c(κ)/κ with its κ → 0 limit 1/n; strictly decreasing in κ.
pub fn c_over_kappa(p: VmfParams, grid: &ThetaGrid) -> f64 {
    let n = grid.n.nf();
    if p.kappa == 0.0 {
        return 1.0 / n;
    }
    order_parameter(p, grid) / p.kappa
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Dimension;
    use approx::assert_abs_diff_eq;

    fn grid(n: u32, num: usize) -> ThetaGrid {
        ThetaGrid::new(Dimension::new(n).unwrap(), num).unwrap()
    }

    /// Closed form at n = 3: c(κ) = coth κ - 1/κ.
    fn c3(kappa: f64) -> f64 {
        1.0 / kappa.tanh() - 1.0 / kappa
    }

    #[test]
    fn constant_average_is_one() {
        for n in [2, 3, 4] {
            let g = grid(n, 2000);
            for kappa in [0.0, 1.0, 10.0, 100.0] {
                let v = vmf_average(VmfParams::new(kappa).unwrap(), &g, |_| 1.0).unwrap();
                assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn odd_average_vanishes_at_zero_concentration() {
        let g = grid(3, 1000);
        let v = vmf_average(VmfParams::new(0.0).unwrap(), &g, |t| t).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn cos_squared_uniform_n3() {
        // ∫cos²θ sinθ dθ / ∫sinθ dθ = 1/3, exact.
        let g = grid(3, 3000);
        let v = vmf_average(VmfParams::new(0.0).unwrap(), &g, |t| t * t).unwrap();
        assert_abs_diff_eq!(v, 1.0 / 3.0, epsilon = 1e-6);
    }

    #[test]
    fn order_parameter_matches_closed_form_n3() {
        let g = grid(3, 3000);
        let c = order_parameter(VmfParams::new(1.0).unwrap(), &g);
        assert_abs_diff_eq!(c, c3(1.0), epsilon = 1e-6);
    }

    #[test]
    fn order_parameter_n2_bessel_ratio() {
        // Oracle: I1(1)/I0(1) from high-order series of the modified
        // Bessel functions.
        fn bessel_i(nu: u32, x: f64) -> f64 {
            let mut sum = 0.0;
            for k in 0..40u32 {
                let mut term = (x / 2.0).powi((2 * k + nu) as i32);
                for j in 1..=k {
                    term /= j as f64;
                }
                for j in 1..=(k + nu) {
                    term /= j as f64;
                }
                sum += term;
            }
            sum
        }
        let oracle = bessel_i(1, 1.0) / bessel_i(0, 1.0);
        assert_abs_diff_eq!(oracle, 0.446390, epsilon = 1e-6);
        let g = grid(2, 3000);
        let c = order_parameter(VmfParams::new(1.0).unwrap(), &g);
        assert_abs_diff_eq!(c, oracle, epsilon = 1e-8);
    }

    #[test]
    fn order_parameter_monotone_in_kappa() {
        for n in [2, 3, 4] {
            let g = grid(n, 2000);
            let mut prev = -1.0;
            let mut k = 0.0;
            while k <= 50.0 {
                let c = order_parameter(VmfParams::new(k).unwrap(), &g);
                assert!(c > prev, "c not increasing at n={n}, kappa={k}");
                // c(0) = 0 up to rounding, so allow a hair of slack at zero
                assert!(c > -1e-14 && c < 1.0);
                prev = c;
                k += 0.5;
            }
        }
    }

    #[test]
    fn c_over_kappa_decreasing_with_limit() {
        let g = grid(3, 2000);
        assert_abs_diff_eq!(c_over_kappa(VmfParams::new(0.0).unwrap(), &g), 1.0 / 3.0, epsilon = 1e-12);
        let mut prev = f64::INFINITY;
        for k in [1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0] {
            let v = c_over_kappa(VmfParams::new(k).unwrap(), &g);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn dc_dkappa_closed_form_and_finite_differences() {
        let g = grid(3, 3000);
        // n = 3, κ = 1: d/dκ (coth κ - 1/κ) = 1 - csch²(1).
        let exact = 1.0 - 1.0 / (1.0f64.sinh() * 1.0f64.sinh());
        assert_abs_diff_eq!(exact, 0.275938, epsilon = 1e-6);
        let d = dc_dkappa(VmfParams::new(1.0).unwrap(), &g);
        assert_abs_diff_eq!(d, exact, epsilon = 1e-6);

        // identity vs centered differences at κ = 2, any n
        let h = 1e-4;
        for n in [2, 3, 4] {
            let g = grid(n, 3000);
            let cp = order_parameter(VmfParams::new(2.0 + h).unwrap(), &g);
            let cm = order_parameter(VmfParams::new(2.0 - h).unwrap(), &g);
            let fd = (cp - cm) / (2.0 * h);
            let id = dc_dkappa(VmfParams::new(2.0).unwrap(), &g);
            assert_abs_diff_eq!(id, fd, epsilon = 1e-6);
        }
    }

    #[test]
    fn dc_dkappa_limit_is_one_over_n() {
        for n in [2, 3, 4, 7] {
            let g = grid(n, 1000);
            assert_abs_diff_eq!(
                dc_dkappa(VmfParams::new(0.0).unwrap(), &g),
                1.0 / n as f64,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn grid_convergence_second_order() {
        // |c_N - c_2N| should shrink by ~4 per doubling at n = 3.
        let k = VmfParams::new(1.5).unwrap();
        let c150 = order_parameter(k, &grid(3, 150));
        let c300 = order_parameter(k, &grid(3, 300));
        let c600 = order_parameter(k, &grid(3, 600));
        let ratio = (c150 - c300) / (c300 - c600);
        assert!((ratio - 4.0).abs() < 0.5, "Richardson ratio {ratio}");
    }

    #[test]
    fn non_finite_integrand_rejected() {
        let g = grid(3, 100);
        let r = vmf_average(VmfParams::new(1.0).unwrap(), &g, |t| 1.0 / (t - t.cos().cos()));
        // not necessarily non-finite; use an explicit NaN instead
        let _ = r;
        let r = vmf_average(VmfParams::new(1.0).unwrap(), &g, |_| f64::NAN);
        assert!(r.is_err());
    }

    #[test]
    fn large_kappa_no_overflow() {
        let g = grid(3, 2000);
        let c = order_parameter(VmfParams::new(5000.0).unwrap(), &g);
        assert!(c.is_finite() && c > 0.99);
    }
}
