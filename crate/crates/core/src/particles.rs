//! Individual-based model: N self-propelled particles with orientations
//! on S^{n-1}, mean-field alignment drift and angular diffusion.
//!
//! The orientation SDE is integrated by projected Euler-Maruyama with
//! renormalization (the projection plus renormalization reproduces the
//! Stratonovich sphere dynamics). An optional 1-D periodic spatial
//! coordinate moves with the first orientation component and localizes
//! the alignment flux through a compactly supported kernel.

use crate::error::{Error, Result};
use crate::grid::Dimension;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

/// Compactly supported bump kernel (1 - (x/R)²)³ on |x| < R, normalized
/// to unit integral on the line.
#[derive(Debug, Clone, Copy)]
pub struct KernelSpec {
    pub radius: f64,
}

impl KernelSpec {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidInput(format!("kernel radius must be positive, got {radius}")));
        }
        Ok(KernelSpec { radius })
    }

    /// Kernel value at signed separation dx (caller applies the periodic
    /// minimum-image convention first).
    pub fn weight(&self, dx: f64) -> f64 {
        let r = dx.abs() / self.radius;
        if r >= 1.0 {
            return 0.0;
        }
        let b = 1.0 - r * r;
        // ∫ (1-(x/R)²)³ dx = 32R/35
        35.0 / (32.0 * self.radius) * b * b * b
    }
}

#[derive(Debug, Clone)]
pub struct ParticleEnsemble {
    n: Dimension,
    rho: f64,
    /// Flat orientation storage, stride n.
    omega: Vec<f64>,
    /// Optional periodic positions on [0, length).
    position: Option<Vec<f64>>,
    length: f64,
    rng: ChaCha8Rng,
    time: f64,
}

/// Summary statistics of an ensemble.
#[derive(Debug, Clone)]
pub struct EnsembleStats {
    /// |mean ω| ∈ [0, 1].
    pub order: f64,
    /// Mean direction (unit vector), or `None` when the mean is ~0.
    pub mean_direction: Option<Vec<f64>>,
    /// Histogram of polar angles to the mean direction, [0, π] split in
    /// equal bins; counts sum to the particle number.
    pub theta_histogram: Vec<usize>,
}

impl ParticleEnsemble {
    /// Homogeneous ensemble: uniformly random orientations, no positions.
    pub fn new_homogeneous(n: Dimension, rho: f64, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidInput("particle count must be positive".into()));
        }
        if !(rho > 0.0) {
            return Err(Error::InvalidInput(format!("density must be positive, got {rho}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = n.get() as usize;
        let mut omega = Vec::with_capacity(count * d);
        for _ in 0..count {
            let v = random_unit_vector(d, &mut rng);
            omega.extend_from_slice(&v);
        }
        Ok(ParticleEnsemble { n, rho, omega, position: None, length: 0.0, rng, time: 0.0 })
    }

    /// Spatial ensemble on the periodic interval [0, length).
    pub fn new_spatial(
        n: Dimension,
        rho: f64,
        count: usize,
        length: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::InvalidInput(format!("domain length must be positive, got {length}")));
        }
        let mut e = Self::new_homogeneous(n, rho, count, seed)?;
        let pos: Vec<f64> = (0..count).map(|_| e.rng.gen::<f64>() * length).collect();
        e.position = Some(pos);
        e.length = length;
        Ok(e)
    }

    /// Replace all orientations by VMF samples around `axis`.
    pub fn seed_vmf(&mut self, kappa: f64, axis: &[f64]) -> Result<()> {
        let d = self.n.get() as usize;
        if axis.len() != d {
            return Err(Error::InvalidInput(format!(
                "axis has length {}, expected {d}",
                axis.len()
            )));
        }
        let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidInput("axis must be nonzero".into()));
        }
        let axis: Vec<f64> = axis.iter().map(|x| x / norm).collect();
        let count = self.count();
        for i in 0..count {
            let v = sample_vmf(self.n, kappa, &axis, &mut self.rng)?;
            self.omega[i * d..(i + 1) * d].copy_from_slice(&v);
        }
        Ok(())
    }

    pub fn count(&self) -> usize {
        self.omega.len() / self.n.get() as usize
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn orientation(&self, i: usize) -> &[f64] {
        let d = self.n.get() as usize;
        &self.omega[i * d..(i + 1) * d]
    }

    pub fn positions(&self) -> Option<&[f64]> {
        self.position.as_deref()
    }

    /// Mean orientation vector (not normalized).
    pub fn mean_orientation(&self) -> Vec<f64> {
        let d = self.n.get() as usize;
        let count = self.count();
        let mut m = vec![0.0; d];
        for i in 0..count {
            for k in 0..d {
                m[k] += self.omega[i * d + k];
            }
        }
        for v in &mut m {
            *v /= count as f64;
        }
        m
    }

    /// One mean-field step: J = ρ · mean(ω), shared by every particle.
    pub fn step_homogeneous(&mut self, dt: f64) -> Result<()> {
        if !(dt > 0.0) {
            return Err(Error::InvalidInput(format!("dt must be positive, got {dt}")));
        }
        let d = self.n.get() as usize;
        let count = self.count();
        let mean = self.mean_orientation();
        let flux: Vec<f64> = mean.iter().map(|m| self.rho * m).collect();
        for i in 0..count {
            let o = &mut self.omega[i * d..(i + 1) * d];
            advance_orientation(o, &flux, dt, &mut self.rng);
        }
        self.time += dt;
        Ok(())
    }

    /// One spatial step: kernel-localized flux via cell lists, then free
    /// transport of the position with the first orientation component.
    pub fn step_spatial(&mut self, dt: f64, kernel: KernelSpec) -> Result<()> {
        if !(dt > 0.0) {
            return Err(Error::InvalidInput(format!("dt must be positive, got {dt}")));
        }
        let pos = self
            .position
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("ensemble has no spatial coordinate".into()))?
            .clone();
        let d = self.n.get() as usize;
        let count = self.count();
        let ell = self.length;
        if kernel.radius * 2.0 >= ell {
            return Err(Error::InvalidInput(format!(
                "kernel radius {} too large for domain length {ell}",
                kernel.radius
            )));
        }

        // cell lists with cell width >= radius
        let ncell = ((ell / kernel.radius).floor() as usize).max(1);
        let cell_w = ell / ncell as f64;
        let mut cells: Vec<Vec<usize>> = vec![Vec::new(); ncell];
        for (i, &x) in pos.iter().enumerate() {
            let c = ((x / cell_w) as usize).min(ncell - 1);
            cells[c].push(i);
        }

        let min_image = |dx: f64| -> f64 {
            let mut dx = dx % ell;
            if dx > ell / 2.0 {
                dx -= ell;
            } else if dx < -ell / 2.0 {
                dx += ell;
            }
            dx
        };

        // mean-field weight ρ L / N so that the homogeneous limit gives
        // J = ρ mean(ω)
        let w_mf = self.rho * ell / count as f64;
        let mut fluxes = vec![0.0; count * d];
        for (c, members) in cells.iter().enumerate() {
            for &i in members {
                let xi = pos[i];
                let mut j = vec![0.0; d];
                for dc in [ncell - 1, 0, 1] {
                    let cc = (c + dc) % ncell;
                    for &k in &cells[cc] {
                        let w = kernel.weight(min_image(xi - pos[k]));
                        if w > 0.0 {
                            for q in 0..d {
                                j[q] += w * self.omega[k * d + q];
                            }
                        }
                    }
                }
                for q in 0..d {
                    fluxes[i * d + q] = w_mf * j[q];
                }
            }
        }

        for i in 0..count {
            let flux = fluxes[i * d..(i + 1) * d].to_vec();
            let o = &mut self.omega[i * d..(i + 1) * d];
            advance_orientation(o, &flux, dt, &mut self.rng);
        }
        let pos = self.position.as_mut().unwrap();
        for (i, x) in pos.iter_mut().enumerate() {
            *x = (*x + dt * self.omega[i * d]).rem_euclid(ell);
        }
        self.time += dt;
        Ok(())
    }

    pub fn stats(&self, bins: usize) -> EnsembleStats {
        let count = self.count();
        let mean = self.mean_orientation();
        let order = mean.iter().map(|x| x * x).sum::<f64>().sqrt();
        let dir: Option<Vec<f64>> = if order > 1e-12 {
            Some(mean.iter().map(|x| x / order).collect())
        } else {
            None
        };
        let bins = bins.max(1);
        let mut hist = vec![0usize; bins];
        if let Some(dir) = &dir {
            for i in 0..count {
                let dot: f64 = self.orientation(i).iter().zip(dir).map(|(a, b)| a * b).sum();
                let theta = dot.clamp(-1.0, 1.0).acos();
                let b = ((theta / std::f64::consts::PI) * bins as f64) as usize;
                hist[b.min(bins - 1)] += 1;
            }
        }
        EnsembleStats { order, mean_direction: dir, theta_histogram: hist }
    }
}

/// Projected Euler-Maruyama with renormalization:
/// ω ← normalize(ω + dt P_ω J + √(2dt) P_ω ξ), P_ω = Id - ω⊗ω.
fn advance_orientation(omega: &mut [f64], flux: &[f64], dt: f64, rng: &mut ChaCha8Rng) {
    let d = omega.len();
    let noise_scale = (2.0 * dt).sqrt();
    let mut delta = vec![0.0; d];
    let dot_flux: f64 = omega.iter().zip(flux).map(|(o, f)| o * f).sum();
    let mut xi = vec![0.0; d];
    for x in &mut xi {
        *x = rng.sample(StandardNormal);
    }
    let dot_xi: f64 = omega.iter().zip(&xi).map(|(o, x)| o * x).sum();
    for k in 0..d {
        delta[k] = dt * (flux[k] - dot_flux * omega[k]) + noise_scale * (xi[k] - dot_xi * omega[k]);
    }
    let mut norm2 = 0.0;
    for k in 0..d {
        omega[k] += delta[k];
        norm2 += omega[k] * omega[k];
    }
    let inv = 1.0 / norm2.sqrt();
    for o in omega {
        *o *= inv;
    }
}

fn random_unit_vector(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-12 {
            let inv = 1.0 / n2.sqrt();
            return v.iter().map(|x| x * inv).collect();
        }
    }
}

/// Draw one VMF(κ, axis) sample on S^{n-1} by the beta-proposal
/// rejection scheme (exact, efficient for all κ).
pub fn sample_vmf(n: Dimension, kappa: f64, axis: &[f64], rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    if !kappa.is_finite() || kappa < 0.0 {
        return Err(Error::InvalidInput(format!("kappa must be finite and >= 0, got {kappa}")));
    }
    let d = n.get() as usize;
    if kappa == 0.0 {
        return Ok(random_unit_vector(d, rng));
    }
    let m = d as f64;
    let b = (-2.0 * kappa + (4.0 * kappa * kappa + (m - 1.0) * (m - 1.0)).sqrt()) / (m - 1.0);
    let x0 = (1.0 - b) / (1.0 + b);
    let c = kappa * x0 + (m - 1.0) * (1.0 - x0 * x0).ln();
    let beta = Beta::new((m - 1.0) / 2.0, (m - 1.0) / 2.0)
        .map_err(|e| Error::NumericalBreakdown(format!("beta proposal: {e}")))?;
    let w = loop {
        let z: f64 = beta.sample(rng);
        let w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
        let u: f64 = rng.gen();
        if kappa * w + (m - 1.0) * (1.0 - x0 * w).ln() - c >= u.ln() {
            break w;
        }
    };
    // tangent direction orthogonal to the axis
    let tangent = loop {
        let v = random_unit_vector(d, rng);
        let dot: f64 = v.iter().zip(axis).map(|(a, b)| a * b).sum();
        let t: Vec<f64> = v.iter().zip(axis).map(|(v, a)| v - dot * a).collect();
        let n2: f64 = t.iter().map(|x| x * x).sum();
        if n2 > 1e-12 {
            let inv = 1.0 / n2.sqrt();
            break t.iter().map(|x| x * inv).collect::<Vec<f64>>();
        }
    };
    let s = (1.0 - w * w).max(0.0).sqrt();
    Ok(axis.iter().zip(&tangent).map(|(a, t)| w * a + s * t).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::ThetaGrid;
    use crate::quadrature::{order_parameter, VmfParams};
    use approx::assert_abs_diff_eq;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn kernel_normalized_and_compact() {
        let k = KernelSpec::new(0.8).unwrap();
        assert_eq!(k.weight(0.81), 0.0);
        assert_eq!(k.weight(-2.0), 0.0);
        let m = 20000;
        let h = 1.6 / m as f64;
        let integral: f64 = (0..m).map(|i| k.weight(-0.8 + (i as f64 + 0.5) * h) * h).sum();
        assert_abs_diff_eq!(integral, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn same_seed_reproduces_trajectories() {
        let mut a = ParticleEnsemble::new_homogeneous(dim(3), 4.0, 100, 7).unwrap();
        let mut b = ParticleEnsemble::new_homogeneous(dim(3), 4.0, 100, 7).unwrap();
        for _ in 0..20 {
            a.step_homogeneous(0.01).unwrap();
            b.step_homogeneous(0.01).unwrap();
        }
        assert_eq!(a.omega, b.omega);
        let mut c = ParticleEnsemble::new_homogeneous(dim(3), 4.0, 100, 8).unwrap();
        c.step_homogeneous(0.01).unwrap();
        assert_ne!(a.omega[..3], c.omega[..3]);
    }

    #[test]
    fn orientations_stay_unit() {
        let mut e = ParticleEnsemble::new_homogeneous(dim(4), 6.0, 50, 1).unwrap();
        for _ in 0..100 {
            e.step_homogeneous(0.02).unwrap();
        }
        for i in 0..e.count() {
            let n2: f64 = e.orientation(i).iter().map(|x| x * x).sum();
            assert_abs_diff_eq!(n2, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn vmf_sampler_matches_order_parameter() {
        let n = dim(3);
        let grid = ThetaGrid::new(n, 2000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let axis = vec![0.0, 0.0, 1.0];
        for kappa in [0.5, 2.0, 10.0] {
            let c_exact = order_parameter(VmfParams::new(kappa).unwrap(), &grid);
            let m = 100_000;
            let mut acc = 0.0;
            for _ in 0..m {
                let v = sample_vmf(n, kappa, &axis, &mut rng).unwrap();
                acc += v[2];
            }
            let c_emp = acc / m as f64;
            assert!((c_emp - c_exact).abs() < 5e-3, "kappa={kappa}: {c_emp} vs {c_exact}");
        }
    }

    #[test]
    fn vmf_sampler_dimension_two() {
        let n = dim(2);
        let grid = ThetaGrid::new(n, 2000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let axis = vec![1.0, 0.0];
        let c_exact = order_parameter(VmfParams::new(1.0).unwrap(), &grid);
        let m = 100_000;
        let mut acc = 0.0;
        for _ in 0..m {
            acc += sample_vmf(n, 1.0, &axis, &mut rng).unwrap()[0];
        }
        assert!((acc / m as f64 - c_exact).abs() < 5e-3);
    }

    #[test]
    fn supercritical_ensemble_orders() {
        // ρ = 6 > n = 3: order should settle near c(κ(6))
        let n = dim(3);
        let grid = ThetaGrid::new(n, 2000).unwrap();
        let kappa = crate::equilibria::kappa_of_rho(n, 6.0, 1e-10, &grid).kappa_root;
        let c_pred = order_parameter(VmfParams::new(kappa).unwrap(), &grid);
        let mut e = ParticleEnsemble::new_homogeneous(n, 6.0, 5000, 11).unwrap();
        // seed slightly ordered so the symmetric state breaks quickly
        e.seed_vmf(0.5, &[0.0, 0.0, 1.0]).unwrap();
        for _ in 0..800 {
            e.step_homogeneous(0.01).unwrap();
        }
        // average the order over a window to tame fluctuations
        let mut acc = 0.0;
        let m = 200;
        for _ in 0..m {
            e.step_homogeneous(0.01).unwrap();
            acc += e.stats(1).order;
        }
        let order = acc / m as f64;
        assert!((order - c_pred).abs() < 0.05, "order {order} vs c {c_pred}");
    }

    #[test]
    fn spatial_step_keeps_positions_in_domain() {
        let mut e = ParticleEnsemble::new_spatial(dim(2), 4.0, 400, 10.0, 5).unwrap();
        let k = KernelSpec::new(1.0).unwrap();
        for _ in 0..50 {
            e.step_spatial(0.02, k).unwrap();
        }
        for &x in e.positions().unwrap() {
            assert!((0.0..10.0).contains(&x));
        }
    }

    #[test]
    fn spatial_flux_reduces_to_mean_field_for_wide_kernel() {
        // kernel radius ~ L/2: one spatial step and one homogeneous step
        // from the same state should give nearly the same mean flux
        // magnitude; just sanity-check ordering emerges spatially too
        let mut e = ParticleEnsemble::new_spatial(dim(2), 6.0, 2000, 10.0, 9).unwrap();
        e.seed_vmf(0.5, &[1.0, 0.0]).unwrap();
        let k = KernelSpec::new(4.0).unwrap();
        for _ in 0..600 {
            e.step_spatial(0.01, k).unwrap();
        }
        let grid = ThetaGrid::new(dim(2), 2000).unwrap();
        let kappa = crate::equilibria::kappa_of_rho(dim(2), 6.0, 1e-10, &grid).kappa_root;
        let c_pred = order_parameter(VmfParams::new(kappa).unwrap(), &grid);
        let order = e.stats(1).order;
        assert!((order - c_pred).abs() < 0.08, "order {order} vs c {c_pred}");
    }

    #[test]
    fn histogram_counts_all_particles() {
        let mut e = ParticleEnsemble::new_homogeneous(dim(3), 4.0, 1234, 2).unwrap();
        e.seed_vmf(2.0, &[0.0, 1.0, 0.0]).unwrap();
        let st = e.stats(36);
        assert_eq!(st.theta_histogram.iter().sum::<usize>(), 1234);
        // concentration near θ = 0 relative to the mean direction
        assert!(st.theta_histogram[0] + st.theta_histogram[1] > st.theta_histogram[34] + st.theta_histogram[35]);
    }
}
