//! The `salpeter` command-line front end.
//!
//! Every subcommand prints a `key=value` summary on stdout. Subcommands that
//! produce tables write them as TSV to `--out` (or the config `out` key), or
//! to stdout ahead of the summary when no path is given.
//!
//! Exit status: 0 on success, 1 when `--assert` is set and a check failed,
//! 2 on invalid input or I/O failure.

pub mod config;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::densities::{self, PairKind};
use crate::grid::{GridSpec, GridState, MomentumState};
use crate::identities;
use crate::lorentz::{self, Boost};
use crate::operators::{self, SeriesTruncation};
use crate::specfun;
use crate::units::UnitSystem;
use crate::PlaneWaveMode;

pub use config::{load_config, parse_config, ConfigError, ModeSpec, RunConfig};
pub use output::{fmt_f64, Check, ResidualReport, TsvTable};

/// Phase advance `E_max dt / hbar` used when no time step is configured.
pub const DEFAULT_PHASE_STEP: f64 = 1e-3;

const CONFIG_HELP: &str = "\
Config file format: `key = value` lines, `#` comments, then optional [mode]
sections with keys amp, phase, p. Top-level keys and defaults:
  m = 1, c = 1, hbar = 1, n_points = 256, length = 200, v = 0.5 (units of c),
  dt = E_max dt / hbar = 1e-3, t_final = 10, time_steps = 10,
  p0 = 0.3, sigma_p = 0.05 (units of m c), x0 = 0, tolerance = per command,
  seed = 42, out = none.
Command-line flags override config values.
Set SALPETER_STRICT=1 to turn band-limit warnings into errors.";

#[derive(Debug, Parser)]
#[command(
    name = "salpeter",
    version,
    about = "Square-root Klein-Gordon densities, currents and Lorentz-covariance checks",
    after_help = CONFIG_HELP
)]
struct Cli {
    /// Run configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Exit with status 1 when any check fails.
    #[arg(long, global = true)]
    assert: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the Born consistency ratio over a (u1, u2) velocity grid.
    RatioSurface(RatioSurfaceArgs),
    /// Force the Born pair of two plane waves to transform as a four-vector.
    BornResidual(BornResidualArgs),
    /// Check the Dirac pair transforms as a four-vector on random states.
    DiracCheck(DiracCheckArgs),
    /// Run the seeded kinematic identity sweeps.
    SweepIdentities(SweepArgs),
    /// Evolve a packet and tabulate Born and Dirac densities and currents.
    Evolve(EvolveArgs),
    /// Continuity-equation residuals and their time-step scaling.
    Continuity(ContinuityArgs),
    /// Tabulate the three-dimensional kernel and Macdonald functions.
    Kernel(KernelArgs),
    /// Partial sums of the gradient series for E(p).
    Series(SeriesArgs),
}

#[derive(Debug, Args)]
struct OutArg {
    /// Output TSV path.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RatioSurfaceArgs {
    /// Boost velocity in units of c.
    #[arg(long, allow_hyphen_values = true)]
    v: Option<f64>,
    #[arg(long, default_value_t = -0.9, allow_hyphen_values = true)]
    u_min: f64,
    #[arg(long, default_value_t = 0.9, allow_hyphen_values = true)]
    u_max: f64,
    #[arg(long, default_value_t = 181)]
    steps: usize,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Args)]
struct BornResidualArgs {
    /// Momentum of the first mode in units of m c.
    #[arg(long, allow_hyphen_values = true)]
    p1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p2: Option<f64>,
    /// Boost velocity in units of c.
    #[arg(long, allow_hyphen_values = true)]
    v: Option<f64>,
    #[arg(long)]
    a1: Option<f64>,
    #[arg(long)]
    a2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phase1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phase2: Option<f64>,
    /// Bound on |r| (default 1e-12).
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Debug, Args)]
struct DiracCheckArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    states: usize,
    #[arg(long, default_value_t = 64)]
    events: usize,
    /// Momentum bound in units of m c.
    #[arg(long, default_value_t = 2.0)]
    p_max: f64,
    /// Bound on the residual (default 1e-10).
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Bound on every residual (default 1e-12).
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Debug, Args)]
struct PacketArgs {
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long)]
    length: Option<f64>,
    /// Central momentum in units of m c.
    #[arg(long, allow_hyphen_values = true)]
    p0: Option<f64>,
    /// Momentum width in units of m c.
    #[arg(long)]
    sigma_p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    #[command(flatten)]
    packet: PacketArgs,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    time_steps: Option<usize>,
    /// Bound on the relative drift of the integrated densities (default 1e-12).
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Args)]
struct ContinuityArgs {
    #[command(flatten)]
    packet: PacketArgs,
    /// Time step; derived from E_max dt / hbar = 1e-3 when absent.
    #[arg(long)]
    dt: Option<f64>,
    /// Time at which the residual is evaluated.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    time: f64,
    /// Bound on the residual (default 1e-6).
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Args)]
struct KernelArgs {
    /// Smallest separation in Compton lengths.
    #[arg(long, default_value_t = 0.1)]
    z_min: f64,
    #[arg(long, default_value_t = 10.0)]
    z_max: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    /// Momentum in units of m c.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    p: f64,
    #[arg(long, default_value_t = 40)]
    k_max: u32,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Config(ConfigError),
    Physics(crate::Error),
    Io(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(s) | Failure::Io(s) => f.write_str(s),
            Failure::Config(e) => write!(f, "{e}"),
            Failure::Physics(e) => write!(f, "{e}"),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Physics(e)
    }
}

/// What a subcommand produced.
struct Outcome {
    table: Option<TsvTable>,
    report: ResidualReport,
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((outcome, out_path)) => {
            if let Err(e) = emit(&outcome, out_path.as_ref(), out) {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            if cli.assert && !outcome.report.passed() {
                let _ = writeln!(err, "error: one or more checks failed");
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn emit(outcome: &Outcome, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(e.to_string());
    if let Some(table) = &outcome.table {
        match path {
            Some(p) => table
                .write_to(p)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display())))?,
            None => out.write_all(table.render().as_bytes()).map_err(io)?,
        }
    }
    out.write_all(outcome.report.render().as_bytes())
        .map_err(io)
}

fn execute(cli: &Cli) -> Result<(Outcome, Option<PathBuf>), Failure> {
    let mut cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    let mut out_flag = None;
    let mut params = Vec::<(&str, String)>::new();

    macro_rules! set {
        ($field:ident, $value:expr) => {
            if let Some(v) = $value {
                cfg.$field = v;
            }
        };
    }

    match &cli.command {
        Command::RatioSurface(a) => {
            set!(v, a.v);
            out_flag = a.out.out.clone();
        }
        Command::BornResidual(a) => {
            set!(v, a.v);
            if a.tolerance.is_some() {
                cfg.tolerance = a.tolerance;
            }
        }
        Command::DiracCheck(a) => {
            set!(seed, a.seed);
            if a.tolerance.is_some() {
                cfg.tolerance = a.tolerance;
            }
        }
        Command::SweepIdentities(a) => {
            set!(seed, a.seed);
            if a.tolerance.is_some() {
                cfg.tolerance = a.tolerance;
            }
        }
        Command::Evolve(a) => {
            apply_packet(&mut cfg, &a.packet);
            set!(t_final, a.t_final);
            set!(time_steps, a.time_steps);
            if a.tolerance.is_some() {
                cfg.tolerance = a.tolerance;
            }
            out_flag = a.out.out.clone();
        }
        Command::Continuity(a) => {
            apply_packet(&mut cfg, &a.packet);
            if a.dt.is_some() {
                cfg.dt = a.dt;
            }
            if a.tolerance.is_some() {
                cfg.tolerance = a.tolerance;
            }
            out_flag = a.out.out.clone();
        }
        Command::Kernel(a) => out_flag = a.out.out.clone(),
        Command::Series(a) => out_flag = a.out.out.clone(),
    }
    cfg.validate()?;
    let out_path = out_flag.or_else(|| cfg.out.clone());

    let outcome = match &cli.command {
        Command::RatioSurface(a) => {
            params.extend([
                ("u_min", a.u_min.to_string()),
                ("u_max", a.u_max.to_string()),
                ("steps", a.steps.to_string()),
            ]);
            ratio_surface_cmd(&cfg, a)?
        }
        Command::BornResidual(a) => born_residual_cmd(&cfg, a)?,
        Command::DiracCheck(a) => {
            params.extend([
                ("states", a.states.to_string()),
                ("events", a.events.to_string()),
                ("p_max", a.p_max.to_string()),
            ]);
            dirac_check_cmd(&cfg, a)?
        }
        Command::SweepIdentities(a) => {
            params.push(("samples", a.samples.to_string()));
            sweep_cmd(&cfg, a)
        }
        Command::Evolve(_) => evolve_cmd(&cfg)?,
        Command::Continuity(a) => {
            params.push(("time", a.time.to_string()));
            continuity_cmd(&cfg, a.time)?
        }
        Command::Kernel(a) => {
            params.extend([
                ("z_min", a.z_min.to_string()),
                ("z_max", a.z_max.to_string()),
                ("steps", a.steps.to_string()),
            ]);
            kernel_cmd(&cfg, a)?
        }
        Command::Series(a) => {
            params.extend([("p", a.p.to_string()), ("k_max", a.k_max.to_string())]);
            series_cmd(&cfg, a)?
        }
    };

    let mut outcome = outcome;
    if let Some(table) = &mut outcome.table {
        table.comment("resolved configuration:");
        table.comment(&cfg.to_config_string());
        if !params.is_empty() {
            table.comment("parameters:");
            for (k, v) in &params {
                table.comment(&format!("{k} = {v}"));
            }
        }
    }
    Ok((outcome, out_path))
}

fn apply_packet(cfg: &mut RunConfig, a: &PacketArgs) {
    if let Some(n) = a.n_points {
        cfg.n_points = n;
    }
    if let Some(l) = a.length {
        cfg.length = l;
    }
    if let Some(p) = a.p0 {
        cfg.p0 = p;
    }
    if let Some(s) = a.sigma_p {
        cfg.sigma_p = s;
    }
    if let Some(x) = a.x0 {
        cfg.x0 = x;
    }
}

fn boost_of(cfg: &RunConfig, units: &UnitSystem) -> Result<Boost, Failure> {
    Ok(Boost::new(cfg.v * units.c(), units)?)
}

fn ratio_surface_cmd(cfg: &RunConfig, a: &RatioSurfaceArgs) -> Result<Outcome, Failure> {
    let units = cfg.units();
    let c = units.c();
    let boost = boost_of(cfg, &units)?;
    let surface = lorentz::ratio_surface(a.u_min * c, a.u_max * c, a.steps, &boost, &units)?;
    let mut table = TsvTable::new("ratio-surface", &["u1/c", "u2/c", "ratio"]);
    for (i, u1) in surface.velocities.iter().enumerate() {
        for (j, u2) in surface.velocities.iter().enumerate() {
            table.row(&[u1 / c, u2 / c, surface.values[i][j]]);
        }
    }
    let mut report = ResidualReport::default();
    report.value("v", cfg.v);
    report.text("steps", a.steps);
    report.value("ratio_min", surface.min());
    report.value("ratio_max", surface.max());
    report.value("max_deviation", surface.max_deviation());
    Ok(Outcome {
        table: Some(table),
        report,
    })
}

fn born_residual_cmd(cfg: &RunConfig, a: &BornResidualArgs) -> Result<Outcome, Failure> {
    let units = cfg.units();
    let scale = units.momentum_scale();
    let default = |i: usize, fallback: ModeSpec| cfg.modes.get(i).copied().unwrap_or(fallback);
    let m1 = default(
        0,
        ModeSpec {
            amp: 1.0,
            phase: 0.0,
            p: 0.75,
        },
    );
    let m2 = default(
        1,
        ModeSpec {
            amp: 1.0,
            phase: 0.0,
            p: -0.75,
        },
    );
    let m1 = ModeSpec {
        amp: a.a1.unwrap_or(m1.amp),
        phase: a.phase1.unwrap_or(m1.phase),
        p: a.p1.unwrap_or(m1.p),
    };
    let m2 = ModeSpec {
        amp: a.a2.unwrap_or(m2.amp),
        phase: a.phase2.unwrap_or(m2.phase),
        p: a.p2.unwrap_or(m2.p),
    };
    let mode = |m: ModeSpec| {
        PlaneWaveMode::new(Complex64::from_polar(m.amp, m.phase), m.p * scale, &units)
    };
    let boost = boost_of(cfg, &units)?;
    let tol = cfg.tolerance.unwrap_or(1e-12);
    let rep = lorentz::born_transform_residual_modes(&mode(m1), &mode(m2), &boost, &units, tol);

    let mut report = ResidualReport::default();
    report.value("p1", m1.p);
    report.value("p2", m2.p);
    report.value("v", cfg.v);
    report.value("alpha_11", rep.alpha_11);
    report.value("alpha_22", rep.alpha_22);
    report.value("alpha_12", rep.alpha_12);
    match rep.beta_12 {
        Some(b) => report.value("beta_12", b),
        None => report.text("beta_12", "undefined"),
    }
    report.value("ratio", rep.ratio);
    report.value("boosted_modulus_sq_1", rep.boosted_modulus_sq[0]);
    report.value("boosted_modulus_sq_2", rep.boosted_modulus_sq[1]);
    report.value("cross_lhs", rep.cross_lhs);
    report.value("cross_rhs", rep.cross_rhs);
    report.value("r", rep.r);
    report.text("inconsistent", rep.inconsistent);
    report.at_most("abs_r", rep.r.abs(), tol);
    Ok(Outcome {
        table: None,
        report,
    })
}

fn dirac_check_cmd(cfg: &RunConfig, a: &DiracCheckArgs) -> Result<Outcome, Failure> {
    let units = cfg.units();
    let tol = cfg.tolerance.unwrap_or(1e-10);
    let cases = identities::draw_dirac_cases(cfg.seed, a.states, a.events, a.p_max, &units)?;
    let mut worst = 0.0f64;
    for case in &cases {
        let r = lorentz::dirac_fourvector_residual(&case.state, &case.boost, &case.events)?;
        if r > worst || r.is_nan() {
            worst = r;
        }
    }
    let mut report = ResidualReport::default();
    report.text("seed", cfg.seed);
    report.text("states", a.states);
    report.text("events", a.events);
    report.value("p_max", a.p_max);
    report.value("max_residual", worst);
    report.at_most("dirac_fourvector", worst, tol);
    Ok(Outcome {
        table: None,
        report,
    })
}

fn sweep_cmd(cfg: &RunConfig, a: &SweepArgs) -> Outcome {
    let units = cfg.units();
    let tol = cfg.tolerance.unwrap_or(1e-12);
    let mut report = ResidualReport::default();
    report.text("seed", cfg.seed);
    report.text("samples", a.samples);
    for s in identities::all_identity_sweeps(cfg.seed, a.samples, &units) {
        report.value(&format!("{}.max_residual", s.name), s.max_residual);
        report.text(&format!("{}.accepted", s.name), s.accepted);
        report.text(&format!("{}.rejected", s.name), s.rejected);
        report.at_most(s.name, s.max_residual, tol);
    }
    Outcome {
        table: None,
        report,
    }
}

/// Initial grid state: the configured `[mode]` plane waves (momenta rounded
/// to the nearest grid momentum) or, without modes, a Gaussian packet.
pub fn initial_state(cfg: &RunConfig) -> crate::Result<GridState> {
    let units = cfg.units();
    let grid = GridSpec::new(cfg.n_points, cfg.length)?;
    let scale = units.momentum_scale();
    if cfg.modes.is_empty() {
        return GridState::gaussian_packet(
            grid,
            units,
            cfg.x0,
            cfg.p0 * scale,
            cfg.sigma_p * scale,
        );
    }
    let dp = grid.dp(units.hbar());
    let mut amps = vec![Complex64::new(0.0, 0.0); grid.n_points()];
    for m in &cfg.modes {
        let k = (m.p * scale / dp).round() as i64;
        let slot = grid.slot_of(k).ok_or(crate::Error::InvalidParameter {
            name: "p",
            value: m.p,
            reason: "mode momentum lies outside the grid band",
        })?;
        amps[slot] += Complex64::from_polar(m.amp, m.phase);
    }
    // Unit plane-wave coefficients in momentum space carry the 1/dp density.
    let amps = amps.into_iter().map(|a| a / dp).collect();
    Ok(MomentumState::new(grid, amps, units)?.to_position())
}

fn relative_drift(values: &[f64]) -> f64 {
    let first = values[0];
    values
        .iter()
        .map(|v| ((v - first) / first).abs())
        .fold(0.0, f64::max)
}

fn evolve_cmd(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let state = initial_state(cfg)?;
    operators::BandLimitPolicy::from_env().check(&state)?;
    let grid = *state.grid();
    let tol = cfg.tolerance.unwrap_or(1e-12);
    let mut table = TsvTable::new("evolve", &["t", "x", "rho_B", "J_B", "rho_D", "J_D"]);
    let xs = grid.positions();
    let (mut nb, mut nd) = (Vec::new(), Vec::new());
    for j in 0..=cfg.time_steps {
        let t = cfg.t_final * j as f64 / cfg.time_steps as f64;
        let psi = operators::propagate(&state, t);
        let born = densities::born_pair(&psi);
        let dirac = densities::dirac_pair(&psi)?;
        nb.push(born.total_probability());
        nd.push(dirac.total_probability());
        for (n, x) in xs.iter().enumerate() {
            table.row(&[
                t,
                *x,
                born.rho[n],
                born.current[n],
                dirac.rho[n],
                dirac.current[n],
            ]);
        }
    }
    let (db, dd) = (relative_drift(&nb), relative_drift(&nd));
    let mut report = ResidualReport::default();
    report.value("t_final", cfg.t_final);
    report.text("time_steps", cfg.time_steps);
    report.value("born_norm", nb[0]);
    report.value("dirac_norm", nd[0]);
    report.value("born_norm_drift", db);
    report.value("dirac_norm_drift", dd);
    report.at_most("born_norm_drift", db, tol);
    report.at_most("dirac_norm_drift", dd, tol);
    Ok(Outcome {
        table: Some(table),
        report,
    })
}

/// Required reduction of the residual when the time step is halved.
pub const CONTINUITY_SCALING: f64 = 3.5;

fn continuity_cmd(cfg: &RunConfig, time: f64) -> Result<Outcome, Failure> {
    let state = initial_state(cfg)?;
    operators::BandLimitPolicy::from_env().check(&state)?;
    let dt = cfg
        .dt
        .unwrap_or_else(|| densities::time_step_for(&state, DEFAULT_PHASE_STEP));
    let tol = cfg.tolerance.unwrap_or(1e-6);
    let mut table = TsvTable::new("continuity", &["dt", "born_residual", "dirac_residual"]);
    let mut report = ResidualReport::default();
    report.value("time", time);
    report.value("dt", dt);
    let steps = [dt, dt / 2.0, dt / 4.0];
    let mut rows = [[0.0; 3]; 3];
    for (i, h) in steps.iter().enumerate() {
        rows[i][0] = *h;
    }
    for (col, kind) in [(1, PairKind::Born), (2, PairKind::Dirac)] {
        for (i, h) in steps.iter().enumerate() {
            rows[i][col] = densities::continuity_residual_at(&state, kind, time, *h)?;
        }
        let name = kind.name();
        let scaling = rows[0][col] / rows[1][col];
        report.value(&format!("{name}_residual"), rows[0][col]);
        report.value(&format!("{name}_residual_half"), rows[1][col]);
        report.value(&format!("{name}_scaling"), scaling);
        report.at_most(&format!("{name}_residual"), rows[0][col], tol);
        report.at_least(&format!("{name}_scaling"), scaling, CONTINUITY_SCALING);
    }
    for row in rows {
        table.row(&row);
    }
    Ok(Outcome {
        table: Some(table),
        report,
    })
}

fn kernel_cmd(cfg: &RunConfig, a: &KernelArgs) -> Result<Outcome, Failure> {
    if !(a.z_min > 0.0 && a.z_min < a.z_max && a.z_max.is_finite()) {
        return Err(Failure::Usage(
            "kernel range must satisfy 0 < z_min < z_max".to_string(),
        ));
    }
    if a.steps < 2 {
        return Err(Failure::Usage(
            "kernel needs at least two steps".to_string(),
        ));
    }
    let units = cfg.units();
    let lc = units.compton_length();
    let mut table = TsvTable::new("kernel", &["z/l_c", "kernel_3d", "K0", "K1", "K2"]);
    for i in 0..a.steps {
        let s = a.z_min + i as f64 * (a.z_max - a.z_min) / (a.steps - 1) as f64;
        table.row(&[
            s,
            specfun::kernel_3d(s * lc, &units)?,
            specfun::macdonald(0, s)?,
            specfun::macdonald(1, s)?,
            specfun::macdonald(2, s)?,
        ]);
    }
    let mut report = ResidualReport::default();
    report.text("steps", a.steps);
    report.value("z_min", a.z_min);
    report.value("z_max", a.z_max);
    Ok(Outcome {
        table: Some(table),
        report,
    })
}

fn series_cmd(cfg: &RunConfig, a: &SeriesArgs) -> Result<Outcome, Failure> {
    if !a.p.is_finite() {
        return Err(Failure::Usage("--p must be finite".to_string()));
    }
    let units = cfg.units();
    let p = a.p * units.momentum_scale();
    let exact = crate::kinematics::dispersion_energy(p, &units);
    let mut table = TsvTable::new("series", &["k_max", "partial_sum", "exact", "error"]);
    let mut last = 0.0;
    for k in 0..=a.k_max {
        let s = operators::series_partial_sum(p, SeriesTruncation::new(k), &units);
        last = (s - exact).abs();
        table.row(&[k as f64, s, exact, last]);
    }
    let mut report = ResidualReport::default();
    report.value("p", a.p);
    report.text("k_max", a.k_max);
    report.value("exact", exact);
    report.value("final_error", last);
    report.text("convergent", a.p.abs() < 1.0);
    Ok(Outcome {
        table: Some(table),
        report,
    })
}
