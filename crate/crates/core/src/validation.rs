//! The acceptance suite: eleven numbered criteria covering asymptotics,
//! spectra, kinetic and particle relaxation, hyperbolicity, and the
//! macroscopic solvers. Shared by the `validate` CLI command and the
//! acceptance test target.

use crate::asymptotics::{
    large_kappa_c, large_kappa_c_tilde, large_kappa_lambda, small_kappa_c, small_kappa_c_tilde,
};
use crate::equilibria::{kappa_of_rho, DEFAULT_TOL};
use crate::error::Error;
use crate::gci::{c_tilde_from_solution, closure_coefficients, solve_gci};
use crate::grid::{Dimension, ThetaGrid};
use crate::kinetic::{
    fit_algebraic_exponent, fit_exponential_rate, max_time_step, relax, AxisymState,
};
use crate::macroscopic::{
    characteristic_speeds, diffusion_step, hydro_step_1d, CoefficientTable, DiffusionState1D,
    HydroState1D, WaveSpeeds, DEFAULT_VALIDITY_MARGIN,
};
use crate::particles::ParticleEnsemble;
use crate::quadrature::{order_parameter, VmfParams};
use crate::spectrum::poincare_constant;
use std::f64::consts::{FRAC_PI_2, PI};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

struct Checker {
    passed: bool,
    details: String,
}

impl Checker {
    fn new() -> Self {
        Checker { passed: true, details: String::new() }
    }

    fn check(&mut self, ok: bool, label: impl AsRef<str>) {
        if !ok {
            self.passed = false;
        }
        self.details.push_str(if ok { "  ok   " } else { "  FAIL " });
        self.details.push_str(label.as_ref());
        self.details.push('\n');
    }

    fn fail(&mut self, label: impl AsRef<str>) {
        self.check(false, label);
    }

    fn report(self, id: usize, name: &'static str) -> CriterionReport {
        CriterionReport { id, name, passed: self.passed, details: self.details }
    }
}

fn dim(n: u32) -> Dimension {
    Dimension::new(n).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// 1. Small-κ coefficient asymptotics at κ = 0.05 for n ∈ {2, 3, 4}.
pub fn criterion_1_small_kappa() -> CriterionReport {
    let mut ck = Checker::new();
    let kappa = 0.05;
    for n in [2u32, 3, 4] {
        let d = dim(n);
        let grid = ThetaGrid::new(d, ThetaGrid::DEFAULT_N_COEFF).unwrap();
        let c = order_parameter(VmfParams::new(kappa).unwrap(), &grid);
        let c_ref = kappa / n as f64;
        ck.check(
            (c - c_ref).abs() <= 0.02 * c_ref,
            format!("n={n}: c({kappa}) = {c:.6e} vs kappa/n = {c_ref:.6e} (2%)"),
        );
        match solve_gci(d, kappa, ThetaGrid::DEFAULT_N_COEFF) {
            Ok(sol) => {
                let ct = c_tilde_from_solution(&sol);
                let ct_ref = small_kappa_c_tilde(d, kappa);
                ck.check(
                    (ct - ct_ref).abs() <= 0.05 * ct_ref.abs(),
                    format!("n={n}: c_tilde = {ct:.6e} vs leading order {ct_ref:.6e} (5%)"),
                );
            }
            Err(e) => ck.fail(format!("n={n}: GCI solve failed: {e}")),
        }
        // the cubic refinement should only improve the c comparison
        let c_ref3 = small_kappa_c(d, kappa);
        ck.check(
            (c - c_ref3).abs() <= (c - c_ref).abs() + 1e-15,
            format!("n={n}: cubic correction moves toward c"),
        );
    }
    ck.report(1, "small-kappa coefficient asymptotics")
}

/// 2. Large-κ coefficient asymptotics at κ = 50 for n ∈ {2, 3, 4}.
pub fn criterion_2_large_kappa() -> CriterionReport {
    let mut ck = Checker::new();
    let kappa = 50.0;
    for n in [2u32, 3, 4] {
        let d = dim(n);
        let nf = n as f64;
        let grid = ThetaGrid::new(d, ThetaGrid::DEFAULT_N_COEFF).unwrap();
        let c = order_parameter(VmfParams::new(kappa).unwrap(), &grid);
        ck.check(
            rel(c, large_kappa_c(d, kappa)) <= 5e-3,
            format!("n={n}: c({kappa}) = {c:.8} vs expansion {:.8} (0.5%)", large_kappa_c(d, kappa)),
        );
        match solve_gci(d, kappa, ThetaGrid::DEFAULT_N_COEFF) {
            Ok(sol) => {
                let ct = c_tilde_from_solution(&sol);
                ck.check(
                    rel(ct, large_kappa_c_tilde(d, kappa)) <= 5e-3,
                    format!(
                        "n={n}: c_tilde = {ct:.8} vs expansion {:.8} (0.5%)",
                        large_kappa_c_tilde(d, kappa)
                    ),
                );
                // λ from the κ-side identities with ρ = κ/c
                let rho = kappa / c;
                let lambda = (nf - rho + kappa * ct) / (kappa * (nf - rho + kappa * c));
                let lam_ref = large_kappa_lambda(d, kappa);
                ck.check(
                    rel(lambda, lam_ref) <= 0.05,
                    format!("n={n}: lambda = {lambda:.4e} vs -(n+1)/(6 kappa^2) = {lam_ref:.4e} (5%)"),
                );
            }
            Err(e) => ck.fail(format!("n={n}: GCI solve failed: {e}")),
        }
    }
    ck.report(2, "large-kappa coefficient asymptotics")
}

/// 3. Critical-angle limits: θ_c → π/2 at threshold, and the large-ρ
/// plateau arctan(√(6(n+1))/4).
pub fn criterion_3_theta_c_limits() -> CriterionReport {
    let mut ck = Checker::new();
    for n in [2u32, 3, 4] {
        let d = dim(n);
        let nf = n as f64;
        match closure_coefficients(d, nf + 1e-4, ThetaGrid::DEFAULT_N_COEFF) {
            Ok(co) => match co.theta_c {
                Some(tc) => ck.check(
                    (tc - FRAC_PI_2).abs() <= 0.02,
                    format!("n={n}: theta_c(n+1e-4) = {tc:.5} vs pi/2 (0.02 rad)"),
                ),
                None => ck.fail(format!("n={n}: theta_c undefined just above threshold")),
            },
            Err(e) => ck.fail(format!("n={n}: closure at threshold failed: {e}")),
        }
        // large-ρ plateau needs the λ cancellation resolved: refine grid
        match closure_coefficients(d, 100.0 * nf, 12000) {
            Ok(co) => {
                let plateau = ((6.0 * (nf + 1.0)).sqrt() / 4.0).atan();
                match co.theta_c {
                    Some(tc) => ck.check(
                        rel(tc, plateau) <= 0.01,
                        format!("n={n}: theta_c(100n) = {tc:.5} vs plateau {plateau:.5} (1%)"),
                    ),
                    None => ck.fail(format!("n={n}: theta_c undefined at rho = 100n")),
                }
            }
            Err(e) => ck.fail(format!("n={n}: closure at rho = 100n failed: {e}")),
        }
    }
    ck.report(3, "critical-angle limits")
}

/// 4. λ < 0 on a 200-point ρ-grid over (n, 10n] for n ∈ {2, 3, 4}.
pub fn criterion_4_lambda_negative() -> CriterionReport {
    let mut ck = Checker::new();
    for n in [2u32, 3, 4] {
        let d = dim(n);
        let nf = n as f64;
        let mut worst = f64::NEG_INFINITY;
        let mut all_neg = true;
        for i in 1..=200 {
            let rho = nf + (10.0 * nf - nf) * i as f64 / 200.0;
            match closure_coefficients(d, rho, 1500) {
                Ok(co) => {
                    worst = worst.max(co.lambda);
                    if co.lambda >= 0.0 {
                        all_neg = false;
                    }
                }
                Err(e) => {
                    all_neg = false;
                    ck.fail(format!("n={n}: closure failed at rho = {rho}: {e}"));
                }
            }
        }
        ck.check(all_neg, format!("n={n}: lambda < 0 at all 200 points (max = {worst:.4e})"));
    }
    ck.report(4, "lambda negativity across the ordered phase")
}

/// 5. Rate formulas: closed form below threshold, near-threshold match,
/// continuity at ρ = n, and monotone growth above.
pub fn criterion_5_rate_formulas() -> CriterionReport {
    let mut ck = Checker::new();
    let eps = 1.0;
    for n in [2u32, 3, 4] {
        let d = dim(n);
        let nf = n as f64;
        // closed form below threshold
        let mut exact = true;
        for i in 0..20 {
            let rho = nf * i as f64 / 20.0;
            let r = crate::spectrum::convergence_rate(d, rho, eps, false, ThetaGrid::DEFAULT_N_EIG)
                .unwrap();
            if (r.rate - (nf - 1.0) * (nf - rho) / (nf * eps)).abs() > 1e-14 {
                exact = false;
            }
        }
        ck.check(exact, format!("n={n}: subcritical rate equals (n-1)(n-rho)/(n eps)"));

        // near-threshold supercritical rate vs 2(n-1)(rho/n - 1)
        let rho = nf * (1.0 + 1e-3);
        let r = crate::spectrum::convergence_rate(d, rho, eps, false, ThetaGrid::DEFAULT_N_EIG)
            .unwrap();
        let lin = 2.0 * (nf - 1.0) * (rho / nf - 1.0);
        ck.check(
            rel(r.rate, lin) <= 0.10,
            format!("n={n}: rate(n(1+1e-3)) = {:.6e} vs linearization {lin:.6e} (10%)", r.rate),
        );
        // continuity at rho = n from both branches
        ck.check(
            r.rate <= 1e-2 * nf && (nf - 1.0) * (nf - rho).max(0.0) / nf <= 1e-3,
            format!("n={n}: both branches vanish at the threshold (rate {:.2e})", r.rate),
        );

        // monotone growth on [n + 0.5, 10n] at 50 points
        let mut prev = f64::NEG_INFINITY;
        let mut monotone = true;
        for i in 0..50 {
            let rho = (nf + 0.5) + (10.0 * nf - nf - 0.5) * i as f64 / 49.0;
            let r = crate::spectrum::convergence_rate(d, rho, eps, false, ThetaGrid::DEFAULT_N_EIG)
                .unwrap();
            if r.rate <= prev {
                monotone = false;
            }
            prev = r.rate;
        }
        ck.check(monotone, format!("n={n}: rate increasing on [n+0.5, 10n] (50 points)"));
    }
    ck.report(5, "relaxation-rate formulas")
}

/// 6. Spectral anchors: Λ₀ = n-1, the n = 2 eigenvalue coincidence, the
/// exponential lower bound, and λ_{κ,1} ~ κ.
pub fn criterion_6_spectral_anchors() -> CriterionReport {
    let mut ck = Checker::new();
    for n in [2u32, 3, 4] {
        let nf = n as f64;
        let r = poincare_constant(dim(n), 0.0, 300).unwrap();
        ck.check(
            (r.poincare - (nf - 1.0)).abs() <= 1e-3,
            format!("n={n}: Lambda_0 = {:.6} vs n-1 = {} (1e-3)", r.poincare, nf - 1.0),
        );
    }
    for kappa in [0.5, 1.0, 2.0, 5.0] {
        let r = poincare_constant(dim(2), kappa, 300).unwrap();
        ck.check(
            rel(r.lambda_0, r.lambda_1) <= 1e-3,
            format!(
                "n=2 kappa={kappa}: lambda_0 = {:.6} matches lambda_1 = {:.6} (1e-3 rel)",
                r.lambda_0, r.lambda_1
            ),
        );
    }
    for n in [2u32, 3, 4] {
        let nf = n as f64;
        let mut ok = true;
        let mut margin: f64 = f64::INFINITY;
        for i in 0..=20 {
            let kappa = 0.5 * i as f64;
            let r = poincare_constant(dim(n), kappa, 300).unwrap();
            let bound = (nf - 1.0) * (-2.0 * kappa).exp();
            margin = margin.min(r.poincare / bound);
            if r.poincare < bound * 0.999 {
                ok = false;
            }
        }
        ck.check(
            ok,
            format!("n={n}: Lambda_kappa >= (n-1) e^(-2 kappa) on [0,10] (min ratio {margin:.3})"),
        );
    }
    let r = poincare_constant(dim(3), 20.0, 300).unwrap();
    let ratio = r.lambda_1 / 20.0;
    ck.check(
        (0.8..=1.2).contains(&ratio),
        format!("n=3 kappa=20: lambda_1/kappa = {ratio:.4} in [0.8, 1.2]"),
    );
    ck.report(6, "spectral anchors")
}

/// 7. Kinetic relaxation rates at n = 3, N = 400: the four regimes.
pub fn criterion_7_kinetic_relaxation() -> CriterionReport {
    let mut ck = Checker::new();
    let d = dim(3);
    let nn = 400usize;
    let eps = 1.0;

    // subcritical rho = 2: exponential rate 2/3
    {
        let grid = ThetaGrid::new(d, nn).unwrap();
        let mut st = AxisymState::new(grid.clone(), 2.0, |t| 1.0 + 0.2 * t.cos()).unwrap();
        let target = AxisymState::uniform(grid, 2.0).unwrap();
        let dt = max_time_step(eps, 2.0).min(0.01);
        match relax(&mut st, &target, eps, dt, 25.0, 0.25) {
            Ok(series) => {
                let d0 = series.samples[0].distance;
                match fit_exponential_rate(&series.samples, d0 * 1e-4, d0 * 0.3) {
                    Ok(rate) => ck.check(
                        rel(rate, 2.0 / 3.0) <= 0.05,
                        format!("rho=2: fitted rate {rate:.5} vs 2/3 (5%)"),
                    ),
                    Err(e) => ck.fail(format!("rho=2: fit failed: {e}")),
                }
            }
            Err(e) => ck.fail(format!("rho=2: relaxation failed: {e}")),
        }
    }

    // supercritical rho = 4: measured >= 0.85 * [rho c^2 + n - rho] Lambda
    {
        let grid = ThetaGrid::new(d, nn).unwrap();
        let kappa = kappa_of_rho(d, 4.0, DEFAULT_TOL, &grid).kappa_root;
        let c = order_parameter(VmfParams::new(kappa).unwrap(), &grid);
        let spec = poincare_constant(d, kappa, nn).unwrap();
        let predicted = (4.0 * c * c + 3.0 - 4.0) * spec.poincare / eps;
        let mut st =
            AxisymState::new(grid.clone(), 4.0, |t| (1.3 * kappa * (t.cos() - 1.0)).exp()).unwrap();
        let target = match crate::kinetic::natural_target(&st) {
            Ok(t) => t,
            Err(e) => {
                ck.fail(format!("rho=4: target construction failed: {e}"));
                return ck.report(7, "kinetic relaxation rates");
            }
        };
        let dt = max_time_step(eps, 4.0).min(0.01);
        match relax(&mut st, &target, eps, dt, 60.0, 0.5) {
            Ok(series) => {
                let d0 = series.samples[0].distance;
                match fit_exponential_rate(&series.samples, d0 * 1e-5, d0 * 0.2) {
                    Ok(rate) => ck.check(
                        rate >= 0.85 * predicted,
                        format!(
                            "rho=4: fitted rate {rate:.5} >= 0.85 * predicted {predicted:.5}"
                        ),
                    ),
                    Err(e) => ck.fail(format!("rho=4: fit failed: {e}")),
                }
            }
            Err(e) => ck.fail(format!("rho=4: relaxation failed: {e}")),
        }
    }

    // critical rho = 3: algebraic decay, log-log slope -1/2
    {
        let grid = ThetaGrid::new(d, nn).unwrap();
        let mut st = AxisymState::new(grid.clone(), 3.0, |t| 1.0 + 0.3 * t.cos()).unwrap();
        let target = AxisymState::uniform(grid, 3.0).unwrap();
        // the cubic (pitchfork) regime sets in slowly: fit late times
        let dt = 0.02;
        match relax(&mut st, &target, eps, dt, 1500.0, 5.0) {
            Ok(series) => match fit_algebraic_exponent(&series.samples, 150.0) {
                Ok(slope) => ck.check(
                    (slope + 0.5).abs() <= 0.1,
                    format!("rho=3: log-log slope {slope:.4} vs -0.5 (0.1)"),
                ),
                Err(e) => ck.fail(format!("rho=3: fit failed: {e}")),
            },
            Err(e) => ck.fail(format!("rho=3: relaxation failed: {e}")),
        }
    }

    // zero-flux data at rho = 4: heat-mode rate 2n = 6
    {
        let grid = ThetaGrid::new(d, nn).unwrap();
        let mut st =
            AxisymState::new(grid.clone(), 4.0, |t| 1.0 + 0.3 * (3.0 * t.cos() * t.cos() - 1.0))
                .unwrap();
        let target = AxisymState::uniform(grid, 4.0).unwrap();
        let dt = 5e-4;
        match relax(&mut st, &target, eps, dt, 2.5, 0.05) {
            Ok(series) => {
                let d0 = series.samples[0].distance;
                match fit_exponential_rate(&series.samples, d0 * 1e-5, d0 * 0.3) {
                    Ok(rate) => ck.check(
                        rel(rate, 6.0) <= 0.05,
                        format!("zero-flux: fitted rate {rate:.4} vs 2n = 6 (5%)"),
                    ),
                    Err(e) => ck.fail(format!("zero-flux: fit failed: {e}")),
                }
            }
            Err(e) => ck.fail(format!("zero-flux: relaxation failed: {e}")),
        }
    }

    ck.report(7, "kinetic relaxation rates")
}

/// 8. Particle/kinetic agreement at n = 3, Np = 2·10⁴.
pub fn criterion_8_particles(seed: u64) -> CriterionReport {
    let mut ck = Checker::new();
    let d = dim(3);
    let np = 20_000usize;
    let dt = 0.01;
    let grid = ThetaGrid::new(d, ThetaGrid::DEFAULT_N_COEFF).unwrap();

    let mean_order = |ens: &mut ParticleEnsemble, burn: usize, window: usize| -> Result<f64, Error> {
        for _ in 0..burn {
            ens.step_homogeneous(dt)?;
        }
        let mut acc = 0.0;
        let mut count = 0usize;
        for s in 0..window {
            ens.step_homogeneous(dt)?;
            if s % 10 == 0 {
                let m = ens.mean_orientation();
                acc += m.iter().map(|x| x * x).sum::<f64>().sqrt();
                count += 1;
            }
        }
        Ok(acc / count as f64)
    };

    for (k, rho) in [4.0, 6.0].into_iter().enumerate() {
        let kappa = kappa_of_rho(d, rho, DEFAULT_TOL, &grid).kappa_root;
        let c = order_parameter(VmfParams::new(kappa).unwrap(), &grid);
        match ParticleEnsemble::new_homogeneous(d, rho, np, seed + k as u64) {
            Ok(mut ens) => {
                if let Err(e) = ens.seed_vmf(kappa, &[0.0, 0.0, 1.0]) {
                    ck.fail(format!("rho={rho}: seeding failed: {e}"));
                    continue;
                }
                match mean_order(&mut ens, 2000, 2000) {
                    Ok(order) => ck.check(
                        rel(order, c) <= 0.05,
                        format!("rho={rho}: order parameter {order:.4} vs c(kappa) = {c:.4} (5%)"),
                    ),
                    Err(e) => ck.fail(format!("rho={rho}: run failed: {e}")),
                }
            }
            Err(e) => ck.fail(format!("rho={rho}: setup failed: {e}")),
        }
    }

    // disordered rho = 2: residual order at the sampling-noise scale
    match ParticleEnsemble::new_homogeneous(d, 2.0, np, seed + 7) {
        Ok(mut ens) => match mean_order(&mut ens, 2000, 2000) {
            Ok(order) => {
                let bound = 3.0 / (np as f64).sqrt();
                ck.check(
                    order <= bound,
                    format!("rho=2: order parameter {order:.5} <= 3/sqrt(Np) = {bound:.5}"),
                );
            }
            Err(e) => ck.fail(format!("rho=2: run failed: {e}")),
        },
        Err(e) => ck.fail(format!("rho=2: setup failed: {e}")),
    }

    ck.report(8, "particle/kinetic agreement")
}

/// 9. Hyperbolicity equivalence: discriminant sign vs the critical-angle
/// criterion on a 50×50 (ρ, θ) grid.
pub fn criterion_9_hyperbolicity() -> CriterionReport {
    let mut ck = Checker::new();
    let d = dim(3);
    let mut tested = 0usize;
    let mut agree = 0usize;
    for i in 0..50 {
        let rho = 3.2 + (12.0 - 3.2) * i as f64 / 49.0;
        let co = match closure_coefficients(d, rho, 1500) {
            Ok(co) => co,
            Err(e) => {
                ck.fail(format!("closure failed at rho = {rho}: {e}"));
                continue;
            }
        };
        let tc = match co.theta_c {
            Some(tc) => tc,
            None => {
                ck.fail(format!("theta_c undefined at rho = {rho}"));
                continue;
            }
        };
        for j in 0..50 {
            let theta = FRAC_PI_2 * (j as f64 + 0.5) / 50.0;
            let u = theta.cos();
            let disc =
                (co.gamma - co.c_tilde).powi(2) * u * u + 4.0 * co.lambda * co.c * (1.0 - u * u);
            if disc.abs() <= 1e-6 {
                continue;
            }
            tested += 1;
            let by_disc = disc > 0.0;
            let by_angle = theta.tan().abs() <= tc.tan();
            if by_disc == by_angle {
                agree += 1;
            }
        }
    }
    ck.check(
        tested > 0 && agree == tested,
        format!("discriminant sign matches the angle criterion in {agree}/{tested} cells"),
    );
    ck.report(9, "hyperbolicity equivalence")
}

/// 10. Macroscopic solvers: diffusion conservation and linear decay,
/// hydro wave speeds, and the non-hyperbolic error path.
pub fn criterion_10_macroscopic() -> CriterionReport {
    let mut ck = Checker::new();
    let d = dim(3);

    // diffusion: mass drift and mode decay
    {
        let m = 128;
        let rho0 = 1.0;
        let rho: Vec<f64> =
            (0..m).map(|j| rho0 + 0.01 * (2.0 * PI * j as f64 / m as f64).cos()).collect();
        let mut st = DiffusionState1D::new(d, 2.0 * PI, rho).unwrap();
        let mass0 = st.mass();
        let amp = |st: &DiffusionState1D| -> f64 {
            let m = st.values().len();
            let (mut a, mut b) = (0.0, 0.0);
            for (j, &r) in st.values().iter().enumerate() {
                let x = 2.0 * PI * j as f64 / m as f64;
                a += r * x.cos();
                b += r * x.sin();
            }
            (a * a + b * b).sqrt() * 2.0 / m as f64
        };
        let a0 = amp(&st);
        let dt = 1e-3;
        let mut failed = None;
        for _ in 0..1000 {
            if let Err(e) = diffusion_step(&mut st, dt, 1.0, DEFAULT_VALIDITY_MARGIN) {
                failed = Some(e);
                break;
            }
        }
        match failed {
            None => {
                let drift = (st.mass() - mass0).abs() / mass0;
                ck.check(drift <= 1e-12, format!("diffusion mass drift {drift:.2e} per 1e3 steps"));
                let rate = -(amp(&st) / a0).ln() / (dt * 1000.0);
                let rate_ref = 1.0 / ((3.0 - 1.0) * (3.0 - rho0));
                ck.check(
                    rel(rate, rate_ref) <= 0.05,
                    format!("diffusion mode-1 decay {rate:.5} vs eps k^2/((n-1)(n-rho0)) = {rate_ref:.5} (5%)"),
                );
            }
            Some(e) => ck.fail(format!("diffusion run failed: {e}")),
        }
    }

    // hydro: linear wave speeds at three hyperbolic states
    let table = match CoefficientTable::build(d, 3.2, 12.0, 300, 1500) {
        Ok(t) => t,
        Err(e) => {
            ck.fail(format!("coefficient table failed: {e}"));
            return ck.report(10, "macroscopic solvers");
        }
    };
    for (rho0, theta0) in [(4.0, 0.0), (5.0, 0.3), (6.0, 0.6)] {
        let co = table.eval(rho0).unwrap();
        let sd = characteristic_speeds(&co, theta0);
        let s = match sd.speeds {
            WaveSpeeds::Real { upper, .. } => upper,
            WaveSpeeds::Complex { .. } => {
                ck.fail(format!("state (rho={rho0}, theta={theta0}) is not hyperbolic"));
                continue;
            }
        };
        let u0 = theta0.cos();
        // right eigenvector of the upper speed: (rho c, s - gamma u)
        let (r1, r2) = (rho0 * co.c, s - co.gamma * u0);
        let norm = (r1 * r1 + r2 * r2).sqrt();
        let (r1, r2) = (r1 / norm, r2 / norm);
        let m = 1000;
        let l = 20.0;
        let h = l / m as f64;
        let bump = |x: f64| 1e-3 * (-((x - 5.0) / 0.4).powi(2)).exp();
        let rho: Vec<f64> = (0..m).map(|j| rho0 + r1 * bump(h * j as f64)).collect();
        let u: Vec<f64> = (0..m).map(|j| u0 + r2 * bump(h * j as f64)).collect();
        let mut st = HydroState1D::new(l, rho, u, None).unwrap();
        let dt = 0.8 * h / 3.0;
        let t_end = 2.0;
        let steps = (t_end / dt).ceil() as usize;
        let mut run_err = None;
        for _ in 0..steps {
            if let Err(e) = hydro_step_1d(&mut st, &table, dt) {
                run_err = Some(e);
                break;
            }
        }
        if let Some(e) = run_err {
            ck.fail(format!("hydro run (rho={rho0}, theta={theta0}) failed: {e}"));
            continue;
        }
        // project the perturbation onto the eigenvector and find its peak
        let proj: Vec<f64> =
            (0..m).map(|j| (st.rho[j] - rho0) * r1 + (st.u[j] - u0) * r2).collect();
        let jmax = proj.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        // quadratic sub-cell refinement
        let (pm, p0, pp) =
            (proj[(jmax + m - 1) % m], proj[jmax], proj[(jmax + 1) % m]);
        let frac = 0.5 * (pm - pp) / (pm - 2.0 * p0 + pp);
        let x_peak = h * (jmax as f64 + frac);
        let t_run = dt * steps as f64;
        let measured = (x_peak - 5.0) / t_run;
        ck.check(
            (measured - s).abs() <= 0.05 * s.abs().max(0.2),
            format!("hydro wave speed at (rho={rho0}, theta={theta0}): {measured:.4} vs {s:.4} (5%)"),
        );
    }

    // non-hyperbolic refusal
    {
        let m = 32;
        let mut st =
            HydroState1D::new(1.0, vec![4.0; m], vec![1.3f64.cos(); m], None).unwrap();
        let r = hydro_step_1d(&mut st, &table, 1e-3);
        ck.check(
            matches!(r, Err(Error::HyperbolicityLoss(_))),
            "hydro refuses a non-hyperbolic cell with HyperbolicityLoss",
        );
    }

    ck.report(10, "macroscopic solvers")
}

/// 11. Scheme orders: O(N⁻²) Richardson factors for the coefficients
/// and eigenvalues, first order for the hydro solver.
pub fn criterion_11_scheme_orders() -> CriterionReport {
    let mut ck = Checker::new();
    let d = dim(3);
    let kappa = 2.0;

    let richardson = |vals: [f64; 3]| (vals[0] - vals[1]) / (vals[1] - vals[2]);

    let mut cs = [0.0; 3];
    let mut cts = [0.0; 3];
    let mut l0 = [0.0; 3];
    let mut l1 = [0.0; 3];
    for (k, nn) in [150usize, 300, 600].into_iter().enumerate() {
        let grid = ThetaGrid::new(d, nn).unwrap();
        cs[k] = order_parameter(VmfParams::new(kappa).unwrap(), &grid);
        cts[k] = c_tilde_from_solution(&solve_gci(d, kappa, nn).unwrap());
        let spec = poincare_constant(d, kappa, nn).unwrap();
        l0[k] = spec.lambda_0;
        l1[k] = spec.lambda_1;
    }
    for (name, vals) in [("c", cs), ("c_tilde", cts), ("lambda_0", l0), ("lambda_1", l1)] {
        let q = richardson(vals);
        ck.check(
            (q - 4.0).abs() <= 0.5,
            format!("{name}: Richardson factor {q:.3} in 4 +/- 0.5 (N = 150/300/600)"),
        );
    }

    // hydro self-convergence on a smooth profile: first order
    let table = match CoefficientTable::build(d, 3.2, 6.0, 200, 1000) {
        Ok(t) => t,
        Err(e) => {
            ck.fail(format!("coefficient table failed: {e}"));
            return ck.report(11, "scheme orders");
        }
    };
    let l = 10.0;
    let t_end = 0.2;
    let run = |m: usize| -> Result<HydroState1D, Error> {
        let rho: Vec<f64> =
            (0..m).map(|j| 4.0 + 0.1 * (2.0 * PI * j as f64 / m as f64).sin()).collect();
        let u: Vec<f64> =
            (0..m).map(|j| 0.5 + 0.05 * (2.0 * PI * j as f64 / m as f64).cos()).collect();
        let mut st = HydroState1D::new(l, rho, u, None)?;
        let dt = t_end / (40.0 * m as f64 / 200.0); // dt ∝ h, CFL-safe
        let steps = (t_end / dt).round() as usize;
        for _ in 0..steps {
            hydro_step_1d(&mut st, &table, dt)?;
        }
        Ok(st)
    };
    match (run(200), run(400), run(800)) {
        (Ok(c200), Ok(c400), Ok(c800)) => {
            let err = |coarse: &HydroState1D, fine: &HydroState1D, ratio: usize| -> f64 {
                coarse
                    .rho
                    .iter()
                    .enumerate()
                    .map(|(j, r)| (r - fine.rho[j * ratio]).abs())
                    .fold(0.0, f64::max)
            };
            let e1 = err(&c200, &c400, 2);
            let e2 = err(&c400, &c800, 2);
            let q = e1 / e2;
            ck.check(
                (1.5..=3.0).contains(&q),
                format!("hydro self-convergence factor {q:.3} consistent with first order"),
            );
        }
        _ => ck.fail("hydro refinement runs failed"),
    }

    ck.report(11, "scheme orders")
}

/// Run the full acceptance suite in order. `seed` feeds the stochastic
/// particle criterion.
pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    vec![
        criterion_1_small_kappa(),
        criterion_2_large_kappa(),
        criterion_3_theta_c_limits(),
        criterion_4_lambda_negative(),
        criterion_5_rate_formulas(),
        criterion_6_spectral_anchors(),
        criterion_7_kinetic_relaxation(),
        criterion_8_particles(seed),
        criterion_9_hyperbolicity(),
        criterion_10_macroscopic(),
        criterion_11_scheme_orders(),
    ]
}
