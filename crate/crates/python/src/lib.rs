//! Python bindings: the core scalar operations (order parameter,
//! equilibrium concentration, closure coefficients, spectra, rates,
//! characteristic speeds) plus small simulation drivers.

use align_kinetics::equilibria::DEFAULT_TOL;
use align_kinetics::gci;
use align_kinetics::grid::{Dimension, ThetaGrid};
use align_kinetics::kinetic;
use align_kinetics::macroscopic;
use align_kinetics::particles::ParticleEnsemble;
use align_kinetics::quadrature::{self, VmfParams};
use align_kinetics::spectrum;
use align_kinetics::Error as CoreError;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: CoreError) -> PyErr {
    match e {
        CoreError::InvalidInput(_) | CoreError::Config(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn dim(n: u32) -> PyResult<Dimension> {
    Dimension::new(n).map_err(err)
}

/// Order parameter c(kappa) of the von Mises-Fisher state on S^{n-1}.
#[pyfunction]
#[pyo3(signature = (n, kappa, grid_n = ThetaGrid::DEFAULT_N_COEFF))]
fn order_parameter(n: u32, kappa: f64, grid_n: usize) -> PyResult<f64> {
    let d = dim(n)?;
    let grid = ThetaGrid::new(d, grid_n).map_err(err)?;
    Ok(quadrature::order_parameter(VmfParams::new(kappa).map_err(err)?, &grid))
}

/// Equilibrium concentration kappa(rho): the positive root of
/// rho c(kappa) = kappa, or 0.0 at and below the threshold rho = n.
#[pyfunction]
#[pyo3(signature = (n, rho, grid_n = ThetaGrid::DEFAULT_N_COEFF))]
fn kappa_of_rho(n: u32, rho: f64, grid_n: usize) -> PyResult<f64> {
    let d = dim(n)?;
    let grid = ThetaGrid::new(d, grid_n).map_err(err)?;
    Ok(align_kinetics::equilibria::kappa_of_rho(d, rho, DEFAULT_TOL, &grid).kappa_root)
}

/// Closure coefficients of the ordered-phase hydrodynamics at rho > n:
/// dict with kappa, c, c_tilde, lambda, gamma, theta_c.
#[pyfunction]
#[pyo3(signature = (n, rho, grid_n = ThetaGrid::DEFAULT_N_COEFF))]
fn closure_coefficients(py: Python<'_>, n: u32, rho: f64, grid_n: usize) -> PyResult<PyObject> {
    let co = gci::closure_coefficients(dim(n)?, rho, grid_n).map_err(err)?;
    let d = PyDict::new_bound(py);
    d.set_item("rho", co.rho)?;
    d.set_item("kappa", co.kappa)?;
    d.set_item("c", co.c)?;
    d.set_item("c_tilde", co.c_tilde)?;
    d.set_item("lambda", co.lambda)?;
    d.set_item("gamma", co.gamma)?;
    d.set_item("theta_c", co.theta_c)?;
    Ok(d.into())
}

/// Poincare constant of the linearized operator at concentration kappa:
/// dict with lambda_0 (Neumann), lambda_1 (Dirichlet), poincare.
#[pyfunction]
#[pyo3(signature = (n, kappa, grid_n = ThetaGrid::DEFAULT_N_EIG))]
fn poincare_constant(py: Python<'_>, n: u32, kappa: f64, grid_n: usize) -> PyResult<PyObject> {
    let r = spectrum::poincare_constant(dim(n)?, kappa, grid_n).map_err(err)?;
    let d = PyDict::new_bound(py);
    d.set_item("kappa", r.kappa)?;
    d.set_item("lambda_0", r.lambda_0)?;
    d.set_item("lambda_1", r.lambda_1)?;
    d.set_item("poincare", r.poincare)?;
    Ok(d.into())
}

/// Relaxation rate of the homogeneous dynamics: (rate, kind) where kind
/// is one of "exponential-global", "exponential-asymptotic",
/// "algebraic-1/2", "heat-mode".
#[pyfunction]
#[pyo3(signature = (n, rho, eps = 1.0, zero_flux = false, grid_n = ThetaGrid::DEFAULT_N_EIG))]
fn convergence_rate(
    n: u32,
    rho: f64,
    eps: f64,
    zero_flux: bool,
    grid_n: usize,
) -> PyResult<(f64, String)> {
    let r = spectrum::convergence_rate(dim(n)?, rho, eps, zero_flux, grid_n).map_err(err)?;
    let kind = match r.kind {
        spectrum::RateKind::ExponentialGlobal => "exponential-global",
        spectrum::RateKind::ExponentialAsymptotic => "exponential-asymptotic",
        spectrum::RateKind::AlgebraicHalf => "algebraic-1/2",
        spectrum::RateKind::HeatMode => "heat-mode",
    };
    Ok((r.rate, kind.to_string()))
}

/// Characteristic speeds of the 1-D hydrodynamic system at (rho, theta):
/// dict with speeds (pair or None), complex_part, passive, hyperbolic.
#[pyfunction]
#[pyo3(signature = (n, rho, theta, grid_n = ThetaGrid::DEFAULT_N_COEFF))]
fn characteristic_speeds(
    py: Python<'_>,
    n: u32,
    rho: f64,
    theta: f64,
    grid_n: usize,
) -> PyResult<PyObject> {
    let co = gci::closure_coefficients(dim(n)?, rho, grid_n).map_err(err)?;
    let sd = macroscopic::characteristic_speeds(&co, theta);
    let d = PyDict::new_bound(py);
    match sd.speeds {
        macroscopic::WaveSpeeds::Real { lower, upper } => {
            d.set_item("speeds", (lower, upper))?;
            d.set_item("complex_part", py.None())?;
        }
        macroscopic::WaveSpeeds::Complex { re, im } => {
            d.set_item("speeds", py.None())?;
            d.set_item("complex_part", (re, im))?;
        }
    }
    d.set_item("passive", sd.passive)?;
    d.set_item("hyperbolic", sd.hyperbolic)?;
    Ok(d.into())
}

/// Run the homogeneous kinetic relaxation and return the sampled series
/// as a list of (time, flux, distance) tuples.
#[pyfunction]
#[pyo3(signature = (n, rho, t_end, eps = 1.0, dt = 0.01, sample_dt = 0.25, amplitude = 0.2,
                    grid_n = 400))]
#[allow(clippy::too_many_arguments)]
fn relax_homogeneous(
    n: u32,
    rho: f64,
    t_end: f64,
    eps: f64,
    dt: f64,
    sample_dt: f64,
    amplitude: f64,
    grid_n: usize,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let d = dim(n)?;
    let grid = ThetaGrid::new(d, grid_n).map_err(err)?;
    let mut st = kinetic::AxisymState::new(grid, rho, |t| 1.0 + amplitude * t.cos()).map_err(err)?;
    let target = kinetic::natural_target(&st).map_err(err)?;
    let series = kinetic::relax(&mut st, &target, eps, dt, t_end, sample_dt).map_err(err)?;
    Ok(series.samples.iter().map(|s| (s.time, s.flux, s.distance)).collect())
}

/// Run the homogeneous particle system and return the final order
/// parameter |mean orientation|.
#[pyfunction]
#[pyo3(signature = (n, rho, count, seed, t_end, dt = 0.01, kappa_init = None))]
fn particle_order(
    n: u32,
    rho: f64,
    count: usize,
    seed: u64,
    t_end: f64,
    dt: f64,
    kappa_init: Option<f64>,
) -> PyResult<f64> {
    let d = dim(n)?;
    let mut ens = ParticleEnsemble::new_homogeneous(d, rho, count, seed).map_err(err)?;
    if let Some(kappa) = kappa_init {
        let mut axis = vec![0.0; n as usize];
        axis[n as usize - 1] = 1.0;
        ens.seed_vmf(kappa, &axis).map_err(err)?;
    }
    let steps = (t_end / dt).round() as usize;
    for _ in 0..steps {
        ens.step_homogeneous(dt).map_err(err)?;
    }
    Ok(ens.mean_orientation().iter().map(|x| x * x).sum::<f64>().sqrt())
}

#[pymodule]
fn align_kinetics_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(order_parameter, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_of_rho, m)?)?;
    m.add_function(wrap_pyfunction!(closure_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(poincare_constant, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_rate, m)?)?;
    m.add_function(wrap_pyfunction!(characteristic_speeds, m)?)?;
    m.add_function(wrap_pyfunction!(relax_homogeneous, m)?)?;
    m.add_function(wrap_pyfunction!(particle_order, m)?)?;
    Ok(())
}
