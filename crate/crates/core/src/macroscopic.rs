//! Macroscopic limits on a 1-D periodic domain: the diffusion model of
//! the disordered region, the self-organized hydrodynamics of the
//! ordered region, the hyperbolicity region map, and a precomputed
//! closure-coefficient table for fast lookups.

use crate::error::{Error, Result};
use crate::gci::{closure_coefficients, ClosureCoefficients};
use crate::grid::Dimension;
use crate::tridiagonal::TridiagonalSystem;

/// Fraction of n by which ρ must stay below the threshold for the
/// diffusion model to be meaningful.
pub const DEFAULT_VALIDITY_MARGIN: f64 = 0.05;

/// Density field for ∂_t ρ = (ε/(n-1)) ∂_x(∂_x ρ / (n - ρ)) on a
/// periodic interval.
#[derive(Debug, Clone)]
pub struct DiffusionState1D {
    n: Dimension,
    length: f64,
    rho: Vec<f64>,
    time: f64,
}

impl DiffusionState1D {
    pub fn new(n: Dimension, length: f64, rho: Vec<f64>) -> Result<Self> {
        if !(length > 0.0) || rho.len() < 4 {
            return Err(Error::InvalidInput("need positive length and at least 4 cells".into()));
        }
        if rho.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::InvalidInput("density must be finite and nonnegative".into()));
        }
        Ok(DiffusionState1D { n, length, rho, time: 0.0 })
    }

    pub fn h(&self) -> f64 {
        self.length / self.rho.len() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.rho
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn mass(&self) -> f64 {
        self.h() * self.rho.iter().sum::<f64>()
    }

    /// First-order mass current -ε ∂_x ρ / ((n-1)(n-ρ)) at cell faces.
    pub fn first_order_current(&self, eps: f64) -> Vec<f64> {
        let m = self.rho.len();
        let h = self.h();
        let nf = self.n.nf();
        (0..m)
            .map(|j| {
                let jp = (j + 1) % m;
                let grad = (self.rho[jp] - self.rho[j]) / h;
                let mid = 0.5 * (self.rho[jp] + self.rho[j]);
                -eps * grad / ((nf - 1.0) * (nf - mid))
            })
            .collect()
    }

    fn check_validity(&self, margin: f64) -> Result<()> {
        let nf = self.n.nf();
        let cap = nf * (1.0 - margin);
        for (j, &r) in self.rho.iter().enumerate() {
            if r >= cap {
                return Err(Error::ValidityLoss(format!(
                    "rho = {r:.6} at cell {j} reaches the threshold band (limit {cap:.6})"
                )));
            }
        }
        Ok(())
    }
}

/// Solve a cyclic tridiagonal system by the Sherman-Morrison trick on
/// top of the Thomas algorithm. `corner` holds (top-right, bottom-left).
fn solve_cyclic(
    diag: &[f64],
    upper: &[f64],
    lower: &[f64],
    corner: (f64, f64),
    rhs: &[f64],
) -> Result<Vec<f64>> {
    let m = diag.len();
    let (tr, bl) = corner;
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[m - 1] -= tr * bl / gamma;
    let base = TridiagonalSystem::new(d, upper.to_vec(), lower.to_vec())?;
    let y = base.solve(rhs)?;
    let mut u = vec![0.0; m];
    u[0] = gamma;
    u[m - 1] = bl;
    let z = base.solve(&u)?;
    // v = (1, tr/gamma)ᵉ positions 0 and m-1
    let vy = y[0] + tr / gamma * y[m - 1];
    let vz = z[0] + tr / gamma * z[m - 1];
    let factor = vy / (1.0 + vz);
    Ok(y.iter().zip(&z).map(|(yi, zi)| yi - factor * zi).collect())
}

/// One implicit Euler step of the diffusion model. The mobility
/// 1/(n-ρ) is frozen at the current state; mass is conserved exactly.
pub fn diffusion_step(st: &mut DiffusionState1D, dt: f64, eps: f64, margin: f64) -> Result<()> {
    if !(dt > 0.0 && eps > 0.0) {
        return Err(Error::InvalidInput("dt and eps must be positive".into()));
    }
    st.check_validity(margin)?;
    let m = st.rho.len();
    let h = st.h();
    let nf = st.n.nf();
    let dtp = dt * eps / (nf - 1.0) / (h * h);

    // face mobilities a_{j+1/2} between cells j and j+1
    let a: Vec<f64> = (0..m)
        .map(|j| {
            let mid = 0.5 * (st.rho[j] + st.rho[(j + 1) % m]);
            1.0 / (nf - mid)
        })
        .collect();
    let mut diag = Vec::with_capacity(m);
    let mut upper = Vec::with_capacity(m - 1);
    let mut lower = Vec::with_capacity(m - 1);
    for j in 0..m {
        let left = a[(j + m - 1) % m];
        let right = a[j];
        diag.push(1.0 + dtp * (left + right));
        if j + 1 < m {
            upper.push(-dtp * right);
        }
        if j > 0 {
            lower.push(-dtp * a[j - 1]);
        }
    }
    let corner = (-dtp * a[m - 1], -dtp * a[m - 1]);
    let new = solve_cyclic(&diag, &upper, &lower, corner, &st.rho)?;
    if new.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalBreakdown("non-finite density after diffusion step".into()));
    }
    st.rho = new;
    st.time += dt;
    st.check_validity(margin)
}

/// Characteristic structure of the 1-D ordered-phase system at one
/// state (ρ, θ), with u = cos θ.
#[derive(Debug, Clone, Copy)]
pub enum WaveSpeeds {
    Real { lower: f64, upper: f64 },
    Complex { re: f64, im: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct SpeedDiagnostics {
    pub speeds: WaveSpeeds,
    /// Advection speed c̃ u of the passive transverse component.
    pub passive: f64,
    pub hyperbolic: bool,
}

pub fn characteristic_speeds(co: &ClosureCoefficients, theta: f64) -> SpeedDiagnostics {
    let u = theta.cos();
    let half_trace = 0.5 * (co.gamma + co.c_tilde) * u;
    let disc = (co.gamma - co.c_tilde).powi(2) * u * u + 4.0 * co.lambda * co.c * (1.0 - u * u);
    let passive = co.c_tilde * u;
    if disc >= 0.0 {
        let r = 0.5 * disc.sqrt();
        SpeedDiagnostics {
            speeds: WaveSpeeds::Real { lower: half_trace - r, upper: half_trace + r },
            passive,
            hyperbolic: true,
        }
    } else {
        SpeedDiagnostics {
            speeds: WaveSpeeds::Complex { re: half_trace, im: 0.5 * (-disc).sqrt() },
            passive,
            hyperbolic: false,
        }
    }
}

/// Precomputed closure coefficients on a uniform ρ grid with cubic
/// interpolation.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    n: Dimension,
    rho_min: f64,
    rho_max: f64,
    c: Vec<f64>,
    c_tilde: Vec<f64>,
    lambda: Vec<f64>,
    gamma: Vec<f64>,
    kappa: Vec<f64>,
}

impl CoefficientTable {
    pub const DEFAULT_POINTS: usize = 2000;

    /// Default range: [n + 0.01, 20 n].
    pub fn default_range(n: Dimension) -> (f64, f64) {
        (n.nf() + 0.01, 20.0 * n.nf())
    }

    pub fn build(
        n: Dimension,
        rho_min: f64,
        rho_max: f64,
        points: usize,
        num_intervals: usize,
    ) -> Result<Self> {
        if !(rho_min > n.nf()) || !(rho_max > rho_min) || points < 8 {
            return Err(Error::InvalidInput(format!(
                "table needs n < rho_min < rho_max and at least 8 points, got [{rho_min}, {rho_max}] x {points}"
            )));
        }
        let mut c = Vec::with_capacity(points);
        let mut c_tilde = Vec::with_capacity(points);
        let mut lambda = Vec::with_capacity(points);
        let mut gamma = Vec::with_capacity(points);
        let mut kappa = Vec::with_capacity(points);
        for i in 0..points {
            let rho = rho_min + (rho_max - rho_min) * i as f64 / (points - 1) as f64;
            let co = closure_coefficients(n, rho, num_intervals)?;
            c.push(co.c);
            c_tilde.push(co.c_tilde);
            lambda.push(co.lambda);
            gamma.push(co.gamma);
            kappa.push(co.kappa);
        }
        Ok(CoefficientTable { n, rho_min, rho_max, c, c_tilde, lambda, gamma, kappa })
    }

    pub fn rho_range(&self) -> (f64, f64) {
        (self.rho_min, self.rho_max)
    }

    pub fn n_dim(&self) -> Dimension {
        self.n
    }

    fn interp(&self, values: &[f64], rho: f64) -> f64 {
        // Catmull-Rom on the uniform grid, clamped stencil at the edges
        let m = values.len();
        let s = (rho - self.rho_min) / (self.rho_max - self.rho_min) * (m - 1) as f64;
        let i = (s.floor() as usize).min(m - 2);
        let t = s - i as f64;
        let p0 = values[i.saturating_sub(1)];
        let p1 = values[i];
        let p2 = values[i + 1];
        let p3 = values[(i + 2).min(m - 1)];
        let a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
        let b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
        let cc = -0.5 * p0 + 0.5 * p2;
        ((a * t + b) * t + cc) * t + p1
    }

    pub fn eval(&self, rho: f64) -> Result<ClosureCoefficients> {
        if !(self.rho_min..=self.rho_max).contains(&rho) {
            return Err(Error::OutOfRange(format!(
                "rho = {rho} outside table range [{}, {}]",
                self.rho_min, self.rho_max
            )));
        }
        let c = self.interp(&self.c, rho);
        let c_tilde = self.interp(&self.c_tilde, rho);
        let lambda = self.interp(&self.lambda, rho);
        let gamma = self.interp(&self.gamma, rho);
        let kappa = self.interp(&self.kappa, rho);
        let theta_c = if lambda < 0.0 {
            Some(((c_tilde - gamma).abs() / (2.0 * (-lambda * c).sqrt())).atan())
        } else {
            None
        };
        Ok(ClosureCoefficients { n_dim: self.n, rho, kappa, c, c_tilde, lambda, gamma, theta_c })
    }
}

/// Classification of a (ρ, θ) cell of the ordered phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Hyperbolic,
    Elliptic,
    /// Within one grid cell of the critical angle.
    Margin,
}

#[derive(Debug, Clone)]
pub struct RegionMap {
    pub rhos: Vec<f64>,
    /// θ ∈ [0, π/2].
    pub thetas: Vec<f64>,
    /// Row-major [rho][theta].
    pub cells: Vec<Region>,
    pub theta_c: Vec<f64>,
}

/// Map the hyperbolicity region over [rho_min, rho_max] x [0, π/2].
pub fn region_map(
    table: &CoefficientTable,
    rho_min: f64,
    rho_max: f64,
    n_rho: usize,
    n_theta: usize,
) -> Result<RegionMap> {
    if n_rho < 2 || n_theta < 2 {
        return Err(Error::InvalidInput("region map needs at least a 2x2 grid".into()));
    }
    let rhos: Vec<f64> = (0..n_rho)
        .map(|i| rho_min + (rho_max - rho_min) * i as f64 / (n_rho - 1) as f64)
        .collect();
    let thetas: Vec<f64> = (0..n_theta)
        .map(|j| std::f64::consts::FRAC_PI_2 * j as f64 / (n_theta - 1) as f64)
        .collect();
    let buffer = std::f64::consts::FRAC_PI_2 / (n_theta - 1) as f64;
    let mut cells = Vec::with_capacity(n_rho * n_theta);
    let mut theta_c_col = Vec::with_capacity(n_rho);
    for &rho in &rhos {
        let co = table.eval(rho)?;
        let tc = co.theta_c.unwrap_or(std::f64::consts::FRAC_PI_2);
        theta_c_col.push(tc);
        for &th in &thetas {
            let r = if (th - tc).abs() <= buffer {
                Region::Margin
            } else if th < tc {
                Region::Hyperbolic
            } else {
                Region::Elliptic
            };
            cells.push(r);
        }
    }
    Ok(RegionMap { rhos, thetas, cells, theta_c: theta_c_col })
}

/// Ordered-phase hydrodynamic state on a periodic interval: density ρ,
/// axial orientation component u = cos θ, and an optional passive
/// transverse unit vector per cell (two components, renormalized).
#[derive(Debug, Clone)]
pub struct HydroState1D {
    length: f64,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Option<Vec<[f64; 2]>>,
    time: f64,
}

impl HydroState1D {
    pub fn new(length: f64, rho: Vec<f64>, u: Vec<f64>, v: Option<Vec<[f64; 2]>>) -> Result<Self> {
        if !(length > 0.0) || rho.len() < 4 || rho.len() != u.len() {
            return Err(Error::InvalidInput("need positive length and matching fields".into()));
        }
        if u.iter().any(|x| x.abs() > 1.0) {
            return Err(Error::InvalidInput("u = cos(theta) must lie in [-1, 1]".into()));
        }
        if let Some(v) = &v {
            if v.len() != rho.len() {
                return Err(Error::InvalidInput("transverse field length mismatch".into()));
            }
        }
        Ok(HydroState1D { length, rho, u, v, time: 0.0 })
    }

    pub fn h(&self) -> f64 {
        self.length / self.rho.len() as f64
    }

    pub fn time(&self) -> f64 {
        self.time
    }
}

/// One local Lax-Friedrichs (Rusanov) step of the quasilinear system
///   ∂_t W + A(W) ∂_x W = 0,  W = (ρ, u),
///   A = [[γ u, ρ c], [λ (1-u²)/ρ, c̃ u]].
/// Fails with `HyperbolicityLoss` if any cell leaves the hyperbolic
/// region, and with `UnstableTimeStep` if dt violates CFL 0.9.
pub fn hydro_step_1d(st: &mut HydroState1D, table: &CoefficientTable, dt: f64) -> Result<()> {
    if !(dt > 0.0) {
        return Err(Error::InvalidInput("dt must be positive".into()));
    }
    let m = st.rho.len();
    let h = st.h();

    let mut mats = Vec::with_capacity(m);
    let mut alpha: f64 = 0.0;
    let mut passive = Vec::with_capacity(m);
    for j in 0..m {
        let co = table.eval(st.rho[j])?;
        let u = st.u[j];
        let sd = characteristic_speeds(&co, u.clamp(-1.0, 1.0).acos());
        let (lo, hi) = match sd.speeds {
            WaveSpeeds::Real { lower, upper } => (lower, upper),
            WaveSpeeds::Complex { re, im } => {
                return Err(Error::HyperbolicityLoss(format!(
                    "cell {j}: rho = {:.6}, u = {:.6} gives complex speeds {re:.4} ± {im:.4}i \
                     (theta exceeds the critical angle)",
                    st.rho[j], u
                )));
            }
        };
        alpha = alpha.max(lo.abs().max(hi.abs()));
        mats.push([
            [co.gamma * u, st.rho[j] * co.c],
            [co.lambda * (1.0 - u * u) / st.rho[j], co.c_tilde * u],
        ]);
        passive.push(sd.passive);
    }
    let dt_max = 0.9 * h / alpha.max(1e-300);
    if dt > dt_max {
        return Err(Error::UnstableTimeStep { dt, dt_max });
    }

    let rho0 = st.rho.clone();
    let u0 = st.u.clone();
    let get = |v: &Vec<f64>, j: isize| -> f64 { v[j.rem_euclid(m as isize) as usize] };
    for j in 0..m {
        let ji = j as isize;
        let drho = get(&rho0, ji + 1) - get(&rho0, ji - 1);
        let du = get(&u0, ji + 1) - get(&u0, ji - 1);
        let lrho = get(&rho0, ji + 1) - 2.0 * rho0[j] + get(&rho0, ji - 1);
        let lu = get(&u0, ji + 1) - 2.0 * u0[j] + get(&u0, ji - 1);
        let a = &mats[j];
        st.rho[j] = rho0[j] - dt / (2.0 * h) * (a[0][0] * drho + a[0][1] * du)
            + alpha * dt / (2.0 * h) * lrho;
        st.u[j] = (u0[j] - dt / (2.0 * h) * (a[1][0] * drho + a[1][1] * du)
            + alpha * dt / (2.0 * h) * lu)
            .clamp(-1.0, 1.0);
        if !st.rho[j].is_finite() || st.rho[j] <= 0.0 {
            return Err(Error::NumericalBreakdown(format!(
                "density broke down at cell {j}: {}",
                st.rho[j]
            )));
        }
    }

    if let Some(v) = &mut st.v {
        let v0 = v.clone();
        for j in 0..m {
            let s = passive[j];
            let up = v0[(j + 1) % m];
            let dn = v0[(j + m - 1) % m];
            let cur = v0[j];
            let mut nv = [0.0; 2];
            for k in 0..2 {
                nv[k] = if s >= 0.0 {
                    cur[k] - s * dt / h * (cur[k] - dn[k])
                } else {
                    cur[k] - s * dt / h * (up[k] - cur[k])
                };
            }
            let norm = (nv[0] * nv[0] + nv[1] * nv[1]).sqrt();
            if norm > 0.0 {
                nv[0] /= norm;
                nv[1] /= norm;
            }
            v[j] = nv;
        }
    }
    st.time += dt;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn small_table() -> CoefficientTable {
        CoefficientTable::build(dim(3), 3.2, 8.0, 120, 800).unwrap()
    }

    #[test]
    fn cyclic_solver_matches_dense() {
        let m = 6;
        let diag = vec![4.0, 4.1, 3.9, 4.2, 4.0, 4.3];
        let upper = vec![-1.0, -0.9, -1.1, -1.0, -0.95];
        let lower = vec![-1.05, -1.0, -0.9, -1.1, -1.0];
        let corner = (-0.8, -0.7);
        let rhs = vec![1.0, 2.0, 0.5, -1.0, 0.0, 3.0];
        let x = solve_cyclic(&diag, &upper, &lower, corner, &rhs).unwrap();
        // residual against the full cyclic matrix
        for i in 0..m {
            let mut y = diag[i] * x[i];
            if i + 1 < m {
                y += upper[i] * x[i + 1];
            }
            if i > 0 {
                y += lower[i - 1] * x[i - 1];
            }
            if i == 0 {
                y += corner.0 * x[m - 1];
            }
            if i == m - 1 {
                y += corner.1 * x[0];
            }
            assert_abs_diff_eq!(y, rhs[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn diffusion_conserves_mass_and_decays_modes() {
        let m = 128;
        let l = 2.0 * PI;
        let rho: Vec<f64> = (0..m)
            .map(|j| 1.0 + 0.01 * (2.0 * PI * j as f64 / m as f64).cos())
            .collect();
        let mut st = DiffusionState1D::new(dim(3), l, rho).unwrap();
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
        let t_end = 2.0;
        let steps = (t_end / dt) as usize;
        for _ in 0..steps {
            diffusion_step(&mut st, dt, 1.0, DEFAULT_VALIDITY_MARGIN).unwrap();
        }
        assert_abs_diff_eq!(st.mass(), mass0, epsilon = 1e-12 * mass0);
        // mode-1 decay rate ε k² / ((n-1)(n-ρ0)) = 1/4 at ρ0 = 1, n = 3
        let rate = -(amp(&st) / a0).ln() / t_end;
        assert!((rate - 0.25).abs() / 0.25 < 0.02, "rate {rate}");
    }

    #[test]
    fn diffusion_refuses_threshold_band() {
        let m = 16;
        let rho = vec![2.9; m];
        let mut st = DiffusionState1D::new(dim(3), 1.0, rho).unwrap();
        let r = diffusion_step(&mut st, 1e-3, 1.0, DEFAULT_VALIDITY_MARGIN);
        assert!(matches!(r, Err(Error::ValidityLoss(_))), "got {r:?}");
    }

    #[test]
    fn table_matches_direct_evaluation() {
        let t = small_table();
        for rho in [3.7, 4.33, 5.5, 7.21] {
            let direct = closure_coefficients(dim(3), rho, 800).unwrap();
            let interp = t.eval(rho).unwrap();
            assert_abs_diff_eq!(interp.c, direct.c, epsilon = 5e-6);
            assert_abs_diff_eq!(interp.c_tilde, direct.c_tilde, epsilon = 5e-6);
            assert_abs_diff_eq!(interp.lambda, direct.lambda, epsilon = 5e-5);
            assert_abs_diff_eq!(interp.gamma, direct.gamma, epsilon = 5e-5);
        }
        assert!(t.eval(2.0).is_err());
        assert!(t.eval(9.0).is_err());
    }

    #[test]
    fn speeds_at_axis_and_normal_incidence() {
        let co = closure_coefficients(dim(3), 4.0, 800).unwrap();
        // θ = 0: triangular matrix, speeds are exactly γ and c̃
        let sd = characteristic_speeds(&co, 0.0);
        match sd.speeds {
            WaveSpeeds::Real { lower, upper } => {
                assert_abs_diff_eq!(lower, co.c_tilde.min(co.gamma), epsilon = 1e-12);
                assert_abs_diff_eq!(upper, co.c_tilde.max(co.gamma), epsilon = 1e-12);
            }
            _ => panic!("expected real speeds at theta = 0"),
        }
        assert!(sd.hyperbolic);
        // θ = π/2: disc = 4λc < 0
        let sd = characteristic_speeds(&co, PI / 2.0);
        assert!(!sd.hyperbolic);
        match sd.speeds {
            WaveSpeeds::Complex { re, im } => {
                assert_abs_diff_eq!(re, 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(im, (-co.lambda * co.c).sqrt(), epsilon = 1e-12);
            }
            _ => panic!("expected complex speeds at theta = pi/2"),
        }
        // transition exactly at θ_c
        let tc = co.theta_c.unwrap();
        assert!(characteristic_speeds(&co, tc - 1e-6).hyperbolic);
        assert!(!characteristic_speeds(&co, tc + 1e-6).hyperbolic);
    }

    #[test]
    fn region_map_has_single_transition_per_density() {
        let t = small_table();
        let map = region_map(&t, 3.3, 7.5, 24, 64).unwrap();
        for (i, _) in map.rhos.iter().enumerate() {
            let row = &map.cells[i * map.thetas.len()..(i + 1) * map.thetas.len()];
            // pattern must be H..H M..M E..E
            let mut phase = 0;
            for r in row {
                let p = match r {
                    Region::Hyperbolic => 0,
                    Region::Margin => 1,
                    Region::Elliptic => 2,
                };
                assert!(p >= phase, "region ordering broken in row {i}");
                phase = p;
            }
            assert_eq!(row[0], Region::Hyperbolic);
            assert_eq!(*row.last().unwrap(), Region::Elliptic);
        }
    }

    #[test]
    fn hydro_constant_state_is_steady() {
        let t = small_table();
        let m = 64;
        let mut st = HydroState1D::new(1.0, vec![4.0; m], vec![0.5; m], None).unwrap();
        for _ in 0..50 {
            hydro_step_1d(&mut st, &t, 1e-3).unwrap();
        }
        for j in 0..m {
            assert_abs_diff_eq!(st.rho[j], 4.0, epsilon = 1e-12);
            assert_abs_diff_eq!(st.u[j], 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn hydro_density_bump_travels_at_gamma() {
        // u ≡ 1 decouples: ρ_t + γ(ρ) ρ_x = 0; a small bump drifts at γ(ρ0)
        let t = small_table();
        let m = 400;
        let l = 10.0;
        let rho0 = 4.0;
        let rho: Vec<f64> = (0..m)
            .map(|j| {
                let x = l * j as f64 / m as f64;
                rho0 + 0.01 * (-((x - 2.5) * (x - 2.5)) / 0.08).exp()
            })
            .collect();
        let mut st = HydroState1D::new(l, rho, vec![1.0; m], None).unwrap();
        let gamma = t.eval(rho0).unwrap().gamma;
        let dt = 0.9 * (l / m as f64) / 2.0; // alpha ~ gamma < 2
        let t_end = 1.5;
        let steps = (t_end / dt).ceil() as usize;
        for _ in 0..steps {
            hydro_step_1d(&mut st, &t, dt).unwrap();
        }
        let peak = st
            .rho
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let x_peak = l * peak as f64 / m as f64;
        let expected = 2.5 + gamma * (dt * steps as f64);
        assert!(
            (x_peak - expected).abs() < 0.15,
            "peak at {x_peak}, expected {expected} (gamma = {gamma})"
        );
    }

    #[test]
    fn hydro_reports_hyperbolicity_loss_and_cfl() {
        let t = small_table();
        let m = 32;
        // θ > θ_c(4.0) ≈ 1.11: u = cos(1.3)
        let mut st = HydroState1D::new(1.0, vec![4.0; m], vec![1.3f64.cos(); m], None).unwrap();
        let r = hydro_step_1d(&mut st, &t, 1e-3);
        assert!(matches!(r, Err(Error::HyperbolicityLoss(_))), "got {r:?}");

        let mut ok = HydroState1D::new(1.0, vec![4.0; m], vec![1.0; m], None).unwrap();
        let r = hydro_step_1d(&mut ok, &t, 1.0);
        assert!(matches!(r, Err(Error::UnstableTimeStep { .. })), "got {r:?}");
    }

    #[test]
    fn passive_component_advects_and_stays_unit() {
        let t = small_table();
        let m = 64;
        let v: Vec<[f64; 2]> = (0..m)
            .map(|j| {
                let a = 2.0 * PI * j as f64 / m as f64;
                [a.cos(), a.sin()]
            })
            .collect();
        let mut st = HydroState1D::new(1.0, vec![4.0; m], vec![0.8; m], Some(v)).unwrap();
        for _ in 0..40 {
            hydro_step_1d(&mut st, &t, 5e-4).unwrap();
        }
        for v in st.v.as_ref().unwrap() {
            assert_abs_diff_eq!(v[0] * v[0] + v[1] * v[1], 1.0, epsilon = 1e-12);
        }
    }
}
