//! `align-kinetics`: parameter sweeps, figure-data reproduction, and
//! simulation drivers for the kinetic alignment model.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 numerical error,
//! 3 I/O error.

mod table;

use align_kinetics::gci::closure_coefficients;
use align_kinetics::grid::{Dimension, ThetaGrid};
use align_kinetics::kinetic::{
    fit_algebraic_exponent, fit_exponential_rate, max_time_step, natural_target, relax,
    AxisymState,
};
use align_kinetics::macroscopic::{
    characteristic_speeds, diffusion_step, hydro_step_1d, region_map, CoefficientTable,
    DiffusionState1D, HydroState1D, Region, WaveSpeeds, DEFAULT_VALIDITY_MARGIN,
};
use align_kinetics::particles::{KernelSpec, ParticleEnsemble};
use align_kinetics::spectrum::{convergence_rate, poincare_constant, RateKind};
use align_kinetics::validation;
use align_kinetics::Error as CoreError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use table::{Format, Table, Value};

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidInput(_) | CoreError::Config(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "align-kinetics", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closure coefficient table over a density grid (figures 2 and 3)
    Coeffs(CoeffsArgs),
    /// Poincaré spectrum over a concentration grid
    Spectrum(SpectrumArgs),
    /// Relaxation rate r(rho) (figure 1)
    Rates(RatesArgs),
    /// Homogeneous kinetic relaxation run with a fitted rate
    Kinetic(KineticArgs),
    /// Individual-based particle run with an order-parameter series
    Particles(ParticlesArgs),
    /// Hyperbolicity region map over (rho, theta) (figure 4)
    HyperMap(HyperMapArgs),
    /// Disordered-phase nonlinear diffusion evolution
    Diffusion(DiffusionArgs),
    /// Ordered-phase hydrodynamic evolution
    Hydro(HydroArgs),
    /// Run the full acceptance suite and print a pass/fail table
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum KineticInit {
    /// Over-concentrated VMF profile (supercritical) or tilted uniform
    Aligned,
    /// Uniform state with a small cos(theta) perturbation
    Perturbed,
    /// Even, zero-flux perturbation of the uniform state
    ZeroFlux,
}

/// Flags shared by every command: config file, output path, format.
#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct CommonArgs {
    /// JSON config file; explicit flags override its values
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Config schema version tag (accepted: 1)
    #[arg(skip)]
    format_version: Option<u32>,
}

macro_rules! merge {
    ($flags:ident, $cfg:ident; $($f:ident),* $(,)?) => {
        $( if $flags.$f.is_none() { $flags.$f = $cfg.$f; } )*
    };
}

fn load_config<T: DeserializeOwned>(path: &Option<PathBuf>) -> Result<Option<T>, CliError> {
    let Some(path) = path else { return Ok(None) };
    let text = fs::read_to_string(path)?;
    let parsed =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config error: {e}")))?;
    Ok(Some(parsed))
}

fn check_version(v: Option<u32>) -> Result<(), CliError> {
    match v {
        None | Some(1) => Ok(()),
        Some(other) => Err(CliError::Usage(format!("unsupported format_version {other}"))),
    }
}

fn dimension(n: Option<u32>) -> Result<Dimension, CliError> {
    Dimension::new(n.unwrap_or(3)).map_err(CliError::from)
}

fn write_table(t: &Table, common: &CommonArgs) -> Result<(), CliError> {
    let format = match common.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
    };
    match &common.out {
        Some(path) => {
            let mut f = fs::File::create(path)?;
            t.write(&mut f, format)?;
            f.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            t.write(&mut stdout.lock(), format)?;
        }
    }
    Ok(())
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps == 0 || !(hi >= lo) {
        return Err(CliError::Usage(format!(
            "empty range: [{lo}, {hi}] with {steps} steps"
        )));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect())
}

// ------------------------------------------------------------------
// coeffs

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct CoeffsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: CommonArgs,
    /// Sphere dimension n
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    rho_min: Option<f64>,
    #[arg(long)]
    rho_max: Option<f64>,
    #[arg(long)]
    rho_steps: Option<usize>,
    /// Number of theta intervals
    #[arg(long = "grid-N")]
    grid_n: Option<usize>,
}

fn cmd_coeffs(mut a: CoeffsArgs) -> Result<(), CliError> {
    if let Some(cfg) = load_config::<CoeffsArgs>(&a.common.config)? {
        merge!(a, cfg; n, rho_min, rho_max, rho_steps, grid_n);
        merge_common(&mut a.common, cfg.common);
    }
    check_version(a.common.format_version)?;
    let n = dimension(a.n)?;
    let nf = n.nf();
    let rho_min = a.rho_min.unwrap_or(nf + 0.05);
    let rho_max = a.rho_max.unwrap_or(10.0 * nf);
    let steps = a.rho_steps.unwrap_or(100);
    let grid_n = a.grid_n.unwrap_or(ThetaGrid::DEFAULT_N_COEFF);
    if rho_min <= nf {
        return Err(CliError::Usage(format!("rho_min must exceed n = {nf}, got {rho_min}")));
    }
    let mut t = Table::new(vec!["rho", "kappa", "c", "c_tilde", "lambda", "gamma", "theta_c"]);
    t.comment(format!("figure: 2, 3 (coefficients vs density); n = {}", n.get()));
    for rho in linspace(rho_min, rho_max, steps)? {
        let co = closure_coefficients(n, rho, grid_n)?;
        t.push(vec![
            Value::Num(rho),
            Value::Num(co.kappa),
            Value::Num(co.c),
            Value::Num(co.c_tilde),
            Value::Num(co.lambda),
            Value::Num(co.gamma),
            co.theta_c.map_or(Value::Missing, Value::Num),
        ]);
    }
    write_table(&t, &a.common)
}

// ------------------------------------------------------------------
// spectrum

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    kappa_min: Option<f64>,
    #[arg(long)]
    kappa_max: Option<f64>,
    #[arg(long)]
    kappa_steps: Option<usize>,
    #[arg(long = "grid-N")]
    grid_n: Option<usize>,
}

fn cmd_spectrum(mut a: SpectrumArgs) -> Result<(), CliError> {
    if let Some(cfg) = load_config::<SpectrumArgs>(&a.common.config)? {
        merge!(a, cfg; n, kappa_min, kappa_max, kappa_steps, grid_n);
        merge_common(&mut a.common, cfg.common);
    }
    check_version(a.common.format_version)?;
    let n = dimension(a.n)?;
    let grid_n = a.grid_n.unwrap_or(ThetaGrid::DEFAULT_N_EIG);
    let mut t = Table::new(vec!["kappa", "lambda_0", "lambda_1", "poincare"]);
    t.comment(format!("Poincare spectrum; n = {}", n.get()));
    for kappa in linspace(
        a.kappa_min.unwrap_or(0.0),
        a.kappa_max.unwrap_or(10.0),
        a.kappa_steps.unwrap_or(51),
    )? {
        let r = poincare_constant(n, kappa, grid_n)?;
        t.push(vec![
            Value::Num(kappa),
            Value::Num(r.lambda_0),
            Value::Num(r.lambda_1),
            Value::Num(r.poincare),
        ]);
    }
    write_table(&t, &a.common)
}

// ------------------------------------------------------------------
// rates

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct RatesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    rho_min: Option<f64>,
    #[arg(long)]
    rho_max: Option<f64>,
    #[arg(long)]
    rho_steps: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long = "grid-N")]
    grid_n: Option<usize>,
}

fn cmd_rates(mut a: RatesArgs) -> Result<(), CliError> {
    if let Some(cfg) = load_config::<RatesArgs>(&a.common.config)? {
        merge!(a, cfg; n, rho_min, rho_max, rho_steps, eps, grid_n);
        merge_common(&mut a.common, cfg.common);
    }
    check_version(a.common.format_version)?;
    let n = dimension(a.n)?;
    let nf = n.nf();
    let eps = a.eps.unwrap_or(1.0);
    let grid_n = a.grid_n.unwrap_or(ThetaGrid::DEFAULT_N_EIG);
    let mut t = Table::new(vec!["rho", "rate", "kind"]);
    t.comment(format!("figure: 1 (relaxation rate vs density); n = {}, eps = {eps}", n.get()));
    for rho in linspace(
        a.rho_min.unwrap_or(0.0),
        a.rho_max.unwrap_or(3.0 * nf),
        a.rho_steps.unwrap_or(91),
    )? {
        let r = convergence_rate(n, rho, eps, false, grid_n)?;
        let kind = match r.kind {
            RateKind::ExponentialGlobal => "exponential-global",
            RateKind::ExponentialAsymptotic => "exponential-asymptotic",
            RateKind::AlgebraicHalf => "algebraic-1/2",
            RateKind::HeatMode => "heat-mode",
        };
        t.push(vec![Value::Num(rho), Value::Num(r.rate), Value::Text(kind.into())]);
    }
    write_table(&t, &a.common)
}

// ------------------------------------------------------------------
// kinetic

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct KineticArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long = "grid-N")]
    grid_n: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    sample_dt: Option<f64>,
    #[arg(long, value_enum)]
    init: Option<KineticInit>,
    #[arg(long)]
    amplitude: Option<f64>,
}

fn cmd_kinetic(mut a: KineticArgs) -> Result<(), CliError> {
    if let Some(cfg) = load_config::<KineticArgs>(&a.common.config)? {
        merge!(a, cfg; n, rho, grid_n, eps, dt, t_end, sample_dt, init, amplitude);
        merge_common(&mut a.common, cfg.common);
    }
    check_version(a.common.format_version)?;
    let n = dimension(a.n)?;
    let nf = n.nf();
    let rho = a.rho.unwrap_or(4.0);
    let grid_n = a.grid_n.unwrap_or(400);
    let eps = a.eps.unwrap_or(1.0);
    let dt = a.dt.unwrap_or_else(|| 0.5 * max_time_step(eps, rho)).min(0.01);
    let t_end = a.t_end.unwrap_or(30.0);
    let sample_dt = a.sample_dt.unwrap_or(0.25);
    let init = a.init.unwrap_or(KineticInit::Aligned);
    let amp = a.amplitude.unwrap_or(0.2);
    if !(0.0..0.9).contains(&amp) {
        return Err(CliError::Usage(format!("amplitude must lie in [0, 0.9), got {amp}")));
    }

    let grid = ThetaGrid::new(n, grid_n)?;
    let kappa_eq =
        align_kinetics::kinetic::discrete_equilibrium_kappa(&grid, rho);
    let mut st = match init {
        KineticInit::Aligned if kappa_eq > 0.0 => {
            AxisymState::new(grid.clone(), rho, |t| (1.3 * kappa_eq * (t.cos() - 1.0)).exp())?
        }
        KineticInit::Aligned | KineticInit::Perturbed => {
            AxisymState::new(grid.clone(), rho, |t| 1.0 + amp * t.cos())?
        }
        KineticInit::ZeroFlux => AxisymState::new(grid.clone(), rho, |t| {
            1.0 + amp * (nf * t.cos() * t.cos() - 1.0) / (nf - 1.0)
        })?,
    };
    let target = if init == KineticInit::ZeroFlux {
        AxisymState::uniform(grid, rho)?
    } else {
        natural_target(&st)?
    };
    let series = relax(&mut st, &target, eps, dt, t_end, sample_dt)?;

    let mut t = Table::new(vec!["time", "flux", "distance", "dissipation"]);
    t.comment(format!(
        "kinetic relaxation; n = {}, rho = {rho}, eps = {eps}, N = {grid_n}, init = {init:?}",
        n.get()
    ));
    let d0 = series.samples[0].distance;
    if rho == nf && init != KineticInit::ZeroFlux {
        if let Ok(slope) = fit_algebraic_exponent(&series.samples, 0.1 * t_end) {
            t.comment(format!("fitted log-log slope = {}", table::fmt_sig12(slope)));
        }
    } else if let Ok(rate) = fit_exponential_rate(&series.samples, d0 * 1e-5, d0 * 0.3) {
        t.comment(format!("fitted exponential rate = {}", table::fmt_sig12(rate)));
    }
    for s in &series.samples {
        t.push(vec![
            Value::Num(s.time),
            Value::Num(s.flux),
            Value::Num(s.distance),
            if s.dissipation.is_nan() { Value::Missing } else { Value::Num(s.dissipation) },
        ]);
    }
    write_table(&t, &a.common)
}

// ------------------------------------------------------------------
// particles

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct ParticlesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Record the order parameter every this many steps
    #[arg(long)]
    sample_every: Option<usize>,
    /// Seed the initial orientations from a VMF with this concentration
    #[arg(long)]
    kappa_init: Option<f64>,
    /// Spatially extended 1-D run instead of the homogeneous one
    #[arg(long)]
    spatial: Option<bool>,
    #[arg(long)]
    length: Option<f64>,
    /// Interaction kernel radius (spatial runs)
    #[arg(long)]
    radius: Option<f64>,
}

fn cmd_particles(mut a: ParticlesArgs) -> Result<(), CliError> {
    if let Some(cfg) = load_config::<ParticlesArgs>(&a.common.config)? {
        merge!(a, cfg; n, rho, count, seed, dt, t_end, sample_every, kappa_init, spatial, length, radius);
        merge_common(&mut a.common, cfg.common);
    }
    check_version(a.common.format_version)?;
    let n = dimension(a.n)?;
    let rho = a.rho.unwrap_or(4.0);
    let count = a.count.unwrap_or(20_000);
    let seed = a.seed.ok_or_else(|| {
        CliError::Usage("particles is stochastic: --seed is required".into())
    })?;
    let dt = a.dt.unwrap_or(0.01);
    let t_end = a.t_end.unwrap_or(30.0);
    let sample_every = a.sample_every.unwrap_or(10).max(1);
    let spatial = a.spatial.unwrap_or(false);

    let mut ens = if spatial {
        ParticleEnsemble::new_spatial(n, rho, count, a.length.unwrap_or(10.0), seed)?
    } else {
        ParticleEnsemble::new_homogeneous(n, rho, count, seed)?
    };
    if let Some(kappa) = a.kappa_init {
        let mut axis = vec![0.0; n.get() as usize];
        axis[n.get() as usize - 1] = 1.0;
        ens.seed_vmf(kappa, &axis)?;
    }
    let kernel = if spatial { Some(KernelSpec::new(a.radius.unwrap_or(1.0))?) } else { None };

    let mut t = Table::new(vec!["time", "order"]);
    t.comment(format!(
        "particle run; n = {}, rho = {rho}, Np = {count}, seed = {seed}, spatial = {spatial}",
        n.get()
    ));
    let order = |ens: &ParticleEnsemble| -> f64 {
        ens.mean_orientation().iter().map(|x| x * x).sum::<f64>().sqrt()
    };
    t.push(vec![Value::Num(0.0), Value::Num(order(&ens))]);
    let steps = (t_end / dt).round() as usize;
    for s in 1..=steps {
        match &kernel {
            Some(k) => ens.step_spatial(dt, *k)?,
            None => ens.step_homogeneous(dt)?,
        }
        if s % sample_every == 0 {
            t.push(vec![Value::Num(ens.time()), Value::Num(order(&ens))]);
        }
    }
    write_table(&t, &a.common)
}

// ------------------------------------------------------------------
// hyper-map

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct HyperMapArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    rho_min: Option<f64>,
    #[arg(long)]
    rho_max: Option<f64>,
    #[arg(long)]
    rho_steps: Option<usize>,
    #[arg(long)]
    theta_steps: Option<usize>,
    #[arg(long = "grid-N")]
    grid_n: Option<usize>,
}

fn cmd_hyper_map(mut a: HyperMapArgs) -> Result<(), CliError> {
    if let Some(cfg) = load_config::<HyperMapArgs>(&a.common.config)? {
        merge!(a, cfg; n, rho_min, rho_max, rho_steps, theta_steps, grid_n);
        merge_common(&mut a.common, cfg.common);
    }
    check_version(a.common.format_version)?;
    let n = dimension(a.n)?;
    let nf = n.nf();
    let rho_min = a.rho_min.unwrap_or(nf + 0.2);
    let rho_max = a.rho_max.unwrap_or(4.0 * nf);
    let rho_steps = a.rho_steps.unwrap_or(40);
    let theta_steps = a.theta_steps.unwrap_or(60);
    let grid_n = a.grid_n.unwrap_or(1500);
    let table = CoefficientTable::build(
        n,
        rho_min - 1e-9,
        rho_max + 1e-9,
        (4 * rho_steps).max(64),
        grid_n,
    )?;
    let map = region_map(&table, rho_min, rho_max, rho_steps, theta_steps)?;
    let mut t = Table::new(vec!["rho", "theta", "region", "theta_c"]);
    t.comment(format!("figure: 4 (hyperbolicity regions); n = {}", n.get()));
    for (i, &rho) in map.rhos.iter().enumerate() {
        for (j, &theta) in map.thetas.iter().enumerate() {
            let region = match map.cells[i * map.thetas.len() + j] {
                Region::Hyperbolic => "hyperbolic",
                Region::Elliptic => "elliptic",
                Region::Margin => "margin",
            };
            t.push(vec![
                Value::Num(rho),
                Value::Num(theta),
                Value::Text(region.into()),
                Value::Num(map.theta_c[i]),
            ]);
        }
    }
    write_table(&t, &a.common)
}

// ------------------------------------------------------------------
// diffusion

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct DiffusionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    length: Option<f64>,
    /// Background density (must stay below n)
    #[arg(long)]
    rho0: Option<f64>,
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Dump the field every this many steps
    #[arg(long)]
    dump_every: Option<usize>,
}

fn cmd_diffusion(mut a: DiffusionArgs) -> Result<(), CliError> {
    if let Some(cfg) = load_config::<DiffusionArgs>(&a.common.config)? {
        merge!(a, cfg; n, cells, length, rho0, amplitude, eps, dt, steps, dump_every);
        merge_common(&mut a.common, cfg.common);
    }
    check_version(a.common.format_version)?;
    let n = dimension(a.n)?;
    let cells = a.cells.unwrap_or(128);
    let length = a.length.unwrap_or(2.0 * PI);
    let rho0 = a.rho0.unwrap_or(1.0);
    let amp = a.amplitude.unwrap_or(0.1);
    let eps = a.eps.unwrap_or(1.0);
    let dt = a.dt.unwrap_or(1e-3);
    let steps = a.steps.unwrap_or(1000);
    let dump_every = a.dump_every.unwrap_or(steps.max(1)).max(1);

    let rho: Vec<f64> = (0..cells)
        .map(|j| rho0 + amp * (2.0 * PI * j as f64 / cells as f64).cos())
        .collect();
    let mut st = DiffusionState1D::new(n, length, rho)?;
    let mut t = Table::new(vec!["time", "x", "rho"]);
    t.comment(format!(
        "diffusion evolution; n = {}, rho0 = {rho0}, eps = {eps}, cells = {cells}",
        n.get()
    ));
    let dump = |t: &mut Table, st: &DiffusionState1D| {
        for (j, &r) in st.values().iter().enumerate() {
            t.push(vec![
                Value::Num(st.time()),
                Value::Num(length * j as f64 / cells as f64),
                Value::Num(r),
            ]);
        }
    };
    dump(&mut t, &st);
    for s in 1..=steps {
        diffusion_step(&mut st, dt, eps, DEFAULT_VALIDITY_MARGIN)?;
        if s % dump_every == 0 || s == steps {
            dump(&mut t, &st);
        }
    }
    write_table(&t, &a.common)
}

// ------------------------------------------------------------------
// hydro

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct HydroArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    length: Option<f64>,
    /// Background density (must exceed n)
    #[arg(long)]
    rho0: Option<f64>,
    #[arg(long)]
    amplitude: Option<f64>,
    /// Background axial orientation u = cos(theta)
    #[arg(long)]
    u0: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    dump_every: Option<usize>,
    #[arg(long = "grid-N")]
    grid_n: Option<usize>,
}

fn cmd_hydro(mut a: HydroArgs) -> Result<(), CliError> {
    if let Some(cfg) = load_config::<HydroArgs>(&a.common.config)? {
        merge!(a, cfg; n, cells, length, rho0, amplitude, u0, dt, steps, dump_every, grid_n);
        merge_common(&mut a.common, cfg.common);
    }
    check_version(a.common.format_version)?;
    let n = dimension(a.n)?;
    let nf = n.nf();
    let cells = a.cells.unwrap_or(256);
    let length = a.length.unwrap_or(10.0);
    let rho0 = a.rho0.unwrap_or(nf + 1.0);
    let amp = a.amplitude.unwrap_or(0.1);
    let u0 = a.u0.unwrap_or(0.8);
    let steps = a.steps.unwrap_or(400);
    let dump_every = a.dump_every.unwrap_or(steps.max(1)).max(1);
    let grid_n = a.grid_n.unwrap_or(1500);
    if rho0 - amp <= nf {
        return Err(CliError::Usage(format!(
            "hydro needs rho0 - amplitude > n, got {} vs n = {nf}",
            rho0 - amp
        )));
    }

    let table = CoefficientTable::build(
        n,
        (nf + 0.05).min(rho0 - amp - 0.05),
        2.0 * rho0,
        400,
        grid_n,
    )?;
    let co = table.eval(rho0)?;
    let alpha0 = match characteristic_speeds(&co, u0.clamp(-1.0, 1.0).acos()).speeds {
        WaveSpeeds::Real { lower, upper } => lower.abs().max(upper.abs()),
        WaveSpeeds::Complex { .. } => {
            return Err(CliError::Numerical(format!(
                "background state (rho0 = {rho0}, u0 = {u0}) is not hyperbolic"
            )))
        }
    };
    let h = length / cells as f64;
    let dt = a.dt.unwrap_or(0.5 * h / alpha0.max(1e-6));

    let rho: Vec<f64> = (0..cells)
        .map(|j| rho0 + amp * (2.0 * PI * j as f64 / cells as f64).sin())
        .collect();
    let u: Vec<f64> = vec![u0; cells];
    let mut st = HydroState1D::new(length, rho, u, None)?;
    let mut t = Table::new(vec!["time", "x", "rho", "u"]);
    t.comment(format!(
        "hydrodynamic evolution; n = {}, rho0 = {rho0}, u0 = {u0}, cells = {cells}",
        n.get()
    ));
    let dump = |t: &mut Table, st: &HydroState1D| {
        for j in 0..st.rho.len() {
            t.push(vec![
                Value::Num(st.time()),
                Value::Num(length * j as f64 / cells as f64),
                Value::Num(st.rho[j]),
                Value::Num(st.u[j]),
            ]);
        }
    };
    dump(&mut t, &st);
    for s in 1..=steps {
        hydro_step_1d(&mut st, &table, dt)?;
        if s % dump_every == 0 || s == steps {
            dump(&mut t, &st);
        }
    }
    write_table(&t, &a.common)
}

// ------------------------------------------------------------------
// validate

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct ValidateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: CommonArgs,
    /// Seed for the stochastic particle criterion
    #[arg(long)]
    seed: Option<u64>,
    /// Print the detail lines of every criterion, not just failures
    #[arg(long)]
    verbose: Option<bool>,
}

fn cmd_validate(mut a: ValidateArgs) -> Result<(), CliError> {
    if let Some(cfg) = load_config::<ValidateArgs>(&a.common.config)? {
        merge!(a, cfg; seed, verbose);
        merge_common(&mut a.common, cfg.common);
    }
    check_version(a.common.format_version)?;
    let seed = a.seed.unwrap_or(42);
    let verbose = a.verbose.unwrap_or(false);
    let reports = validation::run_all(seed);
    let mut all_pass = true;
    for r in &reports {
        println!("criterion {:2} [{}] {}", r.id, if r.passed { "PASS" } else { "FAIL" }, r.name);
        if verbose || !r.passed {
            print!("{}", r.details);
        }
        all_pass &= r.passed;
    }
    if all_pass {
        println!("all {} criteria passed", reports.len());
        Ok(())
    } else {
        Err(CliError::Numerical("acceptance suite reported failures".into()))
    }
}

// ------------------------------------------------------------------

fn merge_common(flags: &mut CommonArgs, cfg: CommonArgs) {
    if flags.out.is_none() {
        flags.out = cfg.out;
    }
    if flags.format.is_none() {
        flags.format = cfg.format;
    }
    if flags.format_version.is_none() {
        flags.format_version = cfg.format_version;
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Rates(a) => cmd_rates(a),
        Command::Kinetic(a) => cmd_kinetic(a),
        Command::Particles(a) => cmd_particles(a),
        Command::HyperMap(a) => cmd_hyper_map(a),
        Command::Diffusion(a) => cmd_diffusion(a),
        Command::Hydro(a) => cmd_hydro(a),
        Command::Validate(a) => cmd_validate(a),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        let (tag, msg) = match &e {
            CliError::Usage(m) => ("usage", m),
            CliError::Numerical(m) => ("numerical", m),
            CliError::Io(m) => ("io", m),
        };
        eprintln!("error ({tag}): {msg}");
        std::process::exit(e.code());
    }
}
