//! Truncated asymptotic expansions of the closure quantities, used as
//! independent oracles for the computed coefficients.
//!
//! Near the threshold (small κ, ρ close to n) and in the concentrated
//! regime (large κ or ρ), every coefficient has a closed-form expansion.
//! These are implemented exactly as truncated, so they double as frozen
//! reference values in tests.
//!
//! One caveat, kept for the record: the ρ⁻² coefficient of `C` in the
//! large-ρ list is +(n-1)(n+1)/8 here, but substituting κ(ρ) into the
//! (accurate) large-κ expansion of c yields -(n-1)(n+1)/8. The two-term
//! truncations agree; only the third term differs, and the κ-side
//! expansions are the ones validated against quadrature.

use crate::error::{Error, Result};
use crate::grid::Dimension;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// Order parameter c.
    C,
    /// Orientation convection speed c̃.
    CTilde,
    /// Pressure-like coupling λ.
    Lambda,
    /// Critical propagation angle θ_c.
    ThetaC,
    /// ρ as a function of κ.
    RhoOfKappa,
    /// κ as a function of ρ.
    KappaOfRho,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// 0 < ρ - n ≪ 1 (argument is ρ) or κ ≪ 1 (argument is κ for
    /// `RhoOfKappa`).
    NearThreshold,
    /// ρ ≫ n or κ ≫ 1.
    LargeArgument,
}

#[derive(Debug, Clone, Copy)]
pub struct ExpansionQuery {
    pub quantity: Quantity,
    pub regime: Regime,
    pub n: Dimension,
    /// κ for `RhoOfKappa`, ρ otherwise.
    pub x: f64,
}

/// Validity windows; empirically where the truncation error sits below
/// the test tolerances.
const NEAR_THRESHOLD_RHO_FRACTION: f64 = 0.1;
const NEAR_THRESHOLD_KAPPA_MAX: f64 = 0.3;
const LARGE_KAPPA_MIN: f64 = 20.0;
const LARGE_RHO_FACTOR: f64 = 20.0;

fn check_range(q: &ExpansionQuery) -> Result<()> {
    let n = q.n.nf();
    let ok = match (q.quantity, q.regime) {
        (Quantity::RhoOfKappa, Regime::NearThreshold) => q.x >= 0.0 && q.x <= NEAR_THRESHOLD_KAPPA_MAX,
        (Quantity::RhoOfKappa, Regime::LargeArgument) => q.x >= LARGE_KAPPA_MIN,
        (_, Regime::NearThreshold) => q.x > n && q.x - n <= NEAR_THRESHOLD_RHO_FRACTION * n,
        (_, Regime::LargeArgument) => q.x >= LARGE_RHO_FACTOR * n,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "{:?} in regime {:?} is not valid at x = {}",
            q.quantity, q.regime, q.x
        )))
    }
}

/// Evaluate the truncated expansion for the query.
pub fn asymptotic_value(q: ExpansionQuery) -> Result<f64> {
    check_range(&q)?;
    let n = q.n.nf();
    let x = q.x;
    let v = match (q.quantity, q.regime) {
        (Quantity::C, Regime::NearThreshold) => (n + 2.0).sqrt() / n * (x - n).sqrt(),
        (Quantity::C, Regime::LargeArgument) => {
            1.0 - (n - 1.0) / 2.0 / x + (n - 1.0) * (n + 1.0) / 8.0 / (x * x)
        }
        (Quantity::CTilde, Regime::NearThreshold) => {
            (2.0 * n - 1.0) / (2.0 * n * (n + 2.0).sqrt()) * (x - n).sqrt()
        }
        (Quantity::CTilde, Regime::LargeArgument) => {
            1.0 - (n + 1.0) / 2.0 / x - (n + 1.0) * (3.0 * n + 1.0) / 24.0 / (x * x)
        }
        (Quantity::Lambda, Regime::NearThreshold) => {
            -1.0 / (4.0 * (n + 2.0).sqrt()) / (x - n).sqrt()
        }
        (Quantity::Lambda, Regime::LargeArgument) => -(n + 1.0) / 6.0 / (x * x),
        (Quantity::ThetaC, Regime::NearThreshold) => {
            std::f64::consts::FRAC_PI_2 - 2.0 / ((n + 2.0).sqrt() * n.sqrt()) * (x - n).sqrt()
        }
        (Quantity::ThetaC, Regime::LargeArgument) => ((n + 1.0).sqrt() * 6.0f64.sqrt() / 4.0).atan(),
        (Quantity::RhoOfKappa, Regime::NearThreshold) => n + x * x / (n + 2.0),
        (Quantity::RhoOfKappa, Regime::LargeArgument) => {
            x + (n - 1.0) / 2.0 + (n - 1.0) * (n + 1.0) / 8.0 / x
        }
        (Quantity::KappaOfRho, Regime::NearThreshold) => (n + 2.0).sqrt() * (x - n).sqrt(),
        (Quantity::KappaOfRho, Regime::LargeArgument) => {
            x - (n - 1.0) / 2.0 - (n - 1.0) * (n + 1.0) / 8.0 / x
        }
    };
    Ok(v)
}

/// Two-term large-κ expansions of c and c̃ (as functions of κ, not ρ);
/// these are the anchors used by the coefficient acceptance checks.
pub fn large_kappa_c(n: Dimension, kappa: f64) -> f64 {
    let n = n.nf();
    1.0 - (n - 1.0) / (2.0 * kappa) + (n - 1.0) * (n - 3.0) / (8.0 * kappa * kappa)
}

pub fn large_kappa_c_tilde(n: Dimension, kappa: f64) -> f64 {
    let n = n.nf();
    1.0 - (n + 1.0) / (2.0 * kappa) + (n + 1.0) * (3.0 * n - 7.0) / (24.0 * kappa * kappa)
}

/// Leading large-κ behavior of λ.
pub fn large_kappa_lambda(n: Dimension, kappa: f64) -> f64 {
    -(n.nf() + 1.0) / (6.0 * kappa * kappa)
}

/// Leading small-κ behavior: c ≈ κ/n, c̃ ≈ (2n-1)κ/(2n(n+2)).
pub fn small_kappa_c(n: Dimension, kappa: f64) -> f64 {
    let n = n.nf();
    kappa / n - kappa.powi(3) / (n * n * (n + 2.0))
}

pub fn small_kappa_c_tilde(n: Dimension, kappa: f64) -> f64 {
    let n = n.nf();
    (2.0 * n - 1.0) / (2.0 * n * (n + 2.0)) * kappa
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn theta_c_large_rho_n2() {
        let v = asymptotic_value(ExpansionQuery {
            quantity: Quantity::ThetaC,
            regime: Regime::LargeArgument,
            n: dim(2),
            x: 100.0,
        })
        .unwrap();
        assert_abs_diff_eq!(v, (18.0f64.sqrt() / 4.0).atan(), epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.81483, epsilon = 1e-5);
    }

    #[test]
    fn lambda_near_threshold_n3() {
        let v = asymptotic_value(ExpansionQuery {
            quantity: Quantity::Lambda,
            regime: Regime::NearThreshold,
            n: dim(3),
            x: 3.0 + 1e-4,
        })
        .unwrap();
        // (3.0 + 1e-4) - 3.0 is not exactly 1e-4 in floating point
        assert_abs_diff_eq!(v, -1.0 / (4.0 * 5.0f64.sqrt() * 1e-2), epsilon = 1e-9);
    }

    #[test]
    fn c_large_rho_n3() {
        let v = asymptotic_value(ExpansionQuery {
            quantity: Quantity::C,
            regime: Regime::LargeArgument,
            n: dim(3),
            x: 100.0,
        })
        .unwrap();
        assert_abs_diff_eq!(v, 0.9901, epsilon = 1e-12);
    }

    #[test]
    fn out_of_range_refused() {
        let r = asymptotic_value(ExpansionQuery {
            quantity: Quantity::C,
            regime: Regime::NearThreshold,
            n: dim(3),
            x: 10.0,
        });
        assert!(r.is_err());
        let r = asymptotic_value(ExpansionQuery {
            quantity: Quantity::Lambda,
            regime: Regime::LargeArgument,
            n: dim(3),
            x: 5.0,
        });
        assert!(r.is_err());
    }

    #[test]
    fn kappa_rho_expansions_consistent() {
        // substituting the large-κ form of ρ(κ) into κ(ρ) returns κ to
        // the printed order
        let n = dim(3);
        // κ large enough that ρ(κ) also clears the large-ρ validity window
        for kappa in [70.0, 140.0, 280.0] {
            let rho = asymptotic_value(ExpansionQuery {
                quantity: Quantity::RhoOfKappa,
                regime: Regime::LargeArgument,
                n,
                x: kappa,
            })
            .unwrap();
            let back = asymptotic_value(ExpansionQuery {
                quantity: Quantity::KappaOfRho,
                regime: Regime::LargeArgument,
                n,
                x: rho,
            })
            .unwrap();
            assert!((back - kappa).abs() < 0.5 / kappa, "kappa {kappa} -> {back}");
        }
    }

    #[test]
    fn c_tilde_kappa_and_rho_sides_agree() {
        // The κ-side and ρ-side printed series for c̃ are mutually
        // consistent: difference is O(ρ⁻³).
        let n = dim(3);
        for rho in [80.0, 160.0, 320.0] {
            let kappa = asymptotic_value(ExpansionQuery {
                quantity: Quantity::KappaOfRho,
                regime: Regime::LargeArgument,
                n,
                x: rho,
            })
            .unwrap();
            let via_kappa = large_kappa_c_tilde(n, kappa);
            let via_rho = asymptotic_value(ExpansionQuery {
                quantity: Quantity::CTilde,
                regime: Regime::LargeArgument,
                n,
                x: rho,
            })
            .unwrap();
            assert!((via_kappa - via_rho).abs() < 20.0 / rho.powi(3));
        }
    }
}
