//! Command-line front end: angle and energy scans to CSV, the limit
//! comparison table and the self-test.
//!
//! Parsing produces a [`ScanRequest`]; each mode is a pure function of the
//! request that returns the text to be written, so identical flags give
//! byte-identical output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::amplitude::{interaction_strength, perturbativity_indicator, Coupling};
use crate::cross_section::{
    dsigma_energy_form_state, mott_like_limit, rutherford_limit, ultrarelativistic_limit,
    AngularGrid, Spacing,
};
use crate::error::Error;
use crate::kinematics::{build_state, KinematicState};
use crate::selftest::{run_selftest, SelfTestReport, DEFAULT_SEED};
use crate::GEV2_TO_MILLIBARN;

/// Newton's constant in natural units, GeV^-2.
pub const NEWTON_G: f64 = 6.70883e-39;

pub const CSV_COLUMNS: [&str; 8] = [
    "theta_rad",
    "E_prime_gev",
    "t_gev2",
    "dsigma_full",
    "dsigma_mott_like",
    "dsigma_rutherford",
    "dsigma_ultrarel",
    "interaction_strength",
];

/// Energy scans replace the first column with the incident energy.
pub const ENERGY_SCAN_FIRST_COLUMN: &str = "E_gev";

/// `E/M` values tabulated by `limit-compare`.
pub const LIMIT_ENERGY_RATIOS: [f64; 6] = [1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0];

/// Projectile speeds tabulated by `limit-compare`.
pub const LIMIT_BETAS: [f64; 7] = [1e-3, 1e-2, 0.1, 0.5, 0.9, 1.0 - 1e-10, 1.0];

/// Angles used by `limit-compare` when no grid is given.
pub const LIMIT_DEFAULT_ANGLES: [f64; 4] = [
    std::f64::consts::FRAC_PI_6,
    std::f64::consts::FRAC_PI_2,
    5.0 * std::f64::consts::FRAC_PI_6,
    std::f64::consts::PI,
];

/// Upper end of the asymptotic corner of each ratio.
pub const HEAVY_CORNER_ENERGY_RATIO: f64 = 1e-4;
pub const NEWTONIAN_CORNER_BETA: f64 = 1e-2;
pub const MASSLESS_CORNER_GAP: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("{0}")]
    Physics(String),
    #[error("--out: cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(e) if !e.use_stderr() => EXIT_SUCCESS,
            _ => EXIT_ERROR,
        }
    }
}

fn physics(flag: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Physics(format!("{}: {}", flag, err))
}

#[derive(Debug, Parser)]
#[command(
    name = "gravscatter",
    version,
    about = "Tree-level gravitational scattering of two Dirac particles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate cross-sections over scattering angle at fixed energy (CSV).
    AngleScan(AngleScanArgs),
    /// Tabulate cross-sections over incident energy at fixed angle (CSV).
    EnergyScan(EnergyScanArgs),
    /// Ratios of the exact cross-section to its limits on an E/M and beta grid.
    LimitCompare(LimitCompareArgs),
    /// Run the seeded invariant suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Units {
    #[default]
    #[value(name = "gev")]
    Gev,
    #[value(name = "millibarn")]
    Millibarn,
}

impl Units {
    /// Factor applied to cross-section columns.
    pub fn factor(self) -> f64 {
        match self {
            Units::Gev => 1.0,
            Units::Millibarn => GEV2_TO_MILLIBARN,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Units::Gev => "GeV^-2",
            Units::Millibarn => "mb",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum SpacingArg {
    #[default]
    #[value(name = "uniform_theta")]
    UniformTheta,
    #[value(name = "uniform_cos_theta")]
    UniformCosTheta,
}

impl From<SpacingArg> for Spacing {
    fn from(s: SpacingArg) -> Self {
        match s {
            SpacingArg::UniformTheta => Spacing::UniformTheta,
            SpacingArg::UniformCosTheta => Spacing::UniformCosTheta,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CouplingArgs {
    /// Newton constant in GeV^-2.
    #[arg(long = "G", default_value = "6.70883e-39")]
    pub newton_g: f64,
    /// Dimensionless coupling g^2.
    #[arg(long = "g2", default_value_t = 4.0 * std::f64::consts::PI)]
    pub g_squared: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Units::Gev)]
    pub units: Units,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AngleScanArgs {
    /// Light-particle mass in GeV.
    #[arg(long = "m-gev")]
    pub m_gev: f64,
    /// Heavy-particle mass in GeV.
    #[arg(long = "M-gev")]
    pub big_m_gev: f64,
    /// Total energy of the light particle in GeV.
    #[arg(long = "E-gev")]
    pub e_gev: f64,
    #[command(flatten)]
    pub coupling: CouplingArgs,
    /// Smallest angle in rad; must be positive.
    #[arg(long = "theta-min")]
    pub theta_min: f64,
    #[arg(long = "theta-max", default_value_t = std::f64::consts::PI)]
    pub theta_max: f64,
    /// Number of grid nodes.
    #[arg(long = "n", default_value_t = 181)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = SpacingArg::UniformTheta)]
    pub spacing: SpacingArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EnergyScanArgs {
    #[arg(long = "m-gev")]
    pub m_gev: f64,
    #[arg(long = "M-gev")]
    pub big_m_gev: f64,
    /// Lowest total energy in GeV.
    #[arg(long = "E-lo")]
    pub e_lo: f64,
    /// Highest total energy in GeV.
    #[arg(long = "E-hi")]
    pub e_hi: f64,
    /// Number of log-spaced energies.
    #[arg(long = "n", default_value_t = 50)]
    pub n: usize,
    /// Scattering angle in rad.
    #[arg(long = "theta")]
    pub theta: f64,
    #[command(flatten)]
    pub coupling: CouplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LimitCompareArgs {
    #[arg(long = "M-gev", default_value_t = 1.0)]
    pub big_m_gev: f64,
    #[command(flatten)]
    pub coupling: CouplingArgs,
    /// With --theta-max and --n, replaces the default angles.
    #[arg(long = "theta-min", requires = "theta_max")]
    pub theta_min: Option<f64>,
    #[arg(long = "theta-max", requires = "theta_min")]
    pub theta_max: Option<f64>,
    #[arg(long = "n", default_value_t = 4)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = SpacingArg::UniformTheta)]
    pub spacing: SpacingArg,
    /// Allowed |ratio - 1| inside an asymptotic corner.
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    AngleScan,
    EnergyScan,
    LimitCompare,
    Selftest,
}

/// Physical inputs. `light_mass` and `energy` are absent for modes that
/// derive them from a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physics {
    pub light_mass: Option<f64>,
    pub heavy_mass: f64,
    pub energy: Option<f64>,
    pub coupling: Coupling<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScanGrid {
    Angular(AngularGrid<f64>),
    Energy {
        lo: f64,
        hi: f64,
        n: usize,
        theta: f64,
    },
    Limits {
        angles: Vec<f64>,
        tolerance: f64,
    },
    Seed(u64),
}

/// A validated request.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRequest {
    pub mode: Mode,
    pub physics: Physics,
    pub grid: ScanGrid,
    pub output_path: Option<PathBuf>,
    pub units: Units,
}

fn positive(flag: &str, value: f64) -> Result<f64, CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(physics(
            flag,
            format!("must be positive and finite, got {}", value),
        ))
    }
}

fn coupling_from(args: &CouplingArgs) -> Result<Coupling<f64>, CliError> {
    let g = positive("--G", args.newton_g)?;
    let g2 = positive("--g2", args.g_squared)?;
    Coupling::with_g_squared(g, g2).map_err(|e| physics("--G/--g2", e))
}

fn angular_grid(
    theta_min: f64,
    theta_max: f64,
    n: usize,
    spacing: SpacingArg,
) -> Result<AngularGrid<f64>, CliError> {
    if !(theta_min > 0.0) {
        return Err(physics(
            "--theta-min",
            format!(
                "must be positive (the forward cross-section diverges), got {}",
                theta_min
            ),
        ));
    }
    if !(theta_max <= std::f64::consts::PI) {
        return Err(physics(
            "--theta-max",
            format!("must not exceed pi, got {}", theta_max),
        ));
    }
    if n < 2 {
        return Err(physics("--n", format!("needs at least 2 nodes, got {}", n)));
    }
    AngularGrid::new(theta_min, theta_max, n, spacing.into())
        .map_err(|e| physics("--theta-min/--theta-max", e))
}

impl ScanRequest {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        match cli.command {
            Command::AngleScan(a) => {
                let m = positive("--m-gev", a.m_gev)?;
                let big_m = positive("--M-gev", a.big_m_gev)?;
                let e = positive("--E-gev", a.e_gev)?;
                if !(e > m) {
                    return Err(physics(
                        "--E-gev",
                        format!("total energy {} must exceed --m-gev {}", e, m),
                    ));
                }
                Ok(Self {
                    mode: Mode::AngleScan,
                    physics: Physics {
                        light_mass: Some(m),
                        heavy_mass: big_m,
                        energy: Some(e),
                        coupling: coupling_from(&a.coupling)?,
                    },
                    grid: ScanGrid::Angular(angular_grid(
                        a.theta_min,
                        a.theta_max,
                        a.n,
                        a.spacing,
                    )?),
                    output_path: a.output.out,
                    units: a.output.units,
                })
            }
            Command::EnergyScan(a) => {
                let m = positive("--m-gev", a.m_gev)?;
                let big_m = positive("--M-gev", a.big_m_gev)?;
                let lo = positive("--E-lo", a.e_lo)?;
                let hi = positive("--E-hi", a.e_hi)?;
                if !(lo > m) {
                    return Err(physics(
                        "--E-lo",
                        format!("{} must exceed --m-gev {}", lo, m),
                    ));
                }
                if !(hi > lo) {
                    return Err(physics(
                        "--E-hi",
                        format!("{} must exceed --E-lo {}", hi, lo),
                    ));
                }
                if a.n < 2 {
                    return Err(physics(
                        "--n",
                        format!("needs at least 2 energies, got {}", a.n),
                    ));
                }
                if !(a.theta > 0.0 && a.theta <= std::f64::consts::PI) {
                    return Err(physics(
                        "--theta",
                        format!("must lie in (0, pi], got {}", a.theta),
                    ));
                }
                Ok(Self {
                    mode: Mode::EnergyScan,
                    physics: Physics {
                        light_mass: Some(m),
                        heavy_mass: big_m,
                        energy: None,
                        coupling: coupling_from(&a.coupling)?,
                    },
                    grid: ScanGrid::Energy {
                        lo,
                        hi,
                        n: a.n,
                        theta: a.theta,
                    },
                    output_path: a.output.out,
                    units: a.output.units,
                })
            }
            Command::LimitCompare(a) => {
                let big_m = positive("--M-gev", a.big_m_gev)?;
                let tolerance = positive("--tolerance", a.tolerance)?;
                let angles = match (a.theta_min, a.theta_max) {
                    (Some(lo), Some(hi)) => angular_grid(lo, hi, a.n, a.spacing)?.nodes(),
                    _ => LIMIT_DEFAULT_ANGLES.to_vec(),
                };
                Ok(Self {
                    mode: Mode::LimitCompare,
                    physics: Physics {
                        light_mass: None,
                        heavy_mass: big_m,
                        energy: None,
                        coupling: coupling_from(&a.coupling)?,
                    },
                    grid: ScanGrid::Limits { angles, tolerance },
                    output_path: a.output.out,
                    units: a.output.units,
                })
            }
            Command::Selftest(a) => Ok(Self {
                mode: Mode::Selftest,
                physics: Physics {
                    light_mass: None,
                    heavy_mass: 1.0,
                    energy: None,
                    coupling: Coupling::new(1.0).expect("G = 1 is valid"),
                },
                grid: ScanGrid::Seed(a.seed),
                output_path: None,
                units: Units::Gev,
            }),
        }
    }

    pub fn parse_from<I, A>(args: I) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = A>,
        A: Into<OsString> + Clone,
    {
        Self::from_cli(Cli::try_parse_from(args)?)
    }
}

/// 17 significant digits: every `f64` survives a print/parse round trip.
pub fn format_field(x: f64) -> String {
    format!("{:.16e}", x)
}

/// One row of a scan, in GeV units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub energy: f64,
    pub theta: f64,
    pub scattered_energy: f64,
    pub t: f64,
    pub full: f64,
    pub mott_like: f64,
    pub rutherford: f64,
    pub ultrarelativistic: f64,
    pub interaction_strength: f64,
    pub perturbative: bool,
}

fn state_error(state_desc: String, e: Error) -> CliError {
    let hint = match e {
        Error::NoPhysicalRoot { .. } => {
            " (for --m-gev above --M-gev the angle must stay below asin(M/m))"
        }
        _ => "",
    };
    CliError::Physics(format!("{}: {}{}", state_desc, e, hint))
}

/// Evaluates every tabulated quantity at one energy and angle.
pub fn scan_row(
    energy: f64,
    light_mass: f64,
    heavy_mass: f64,
    theta: f64,
    coupling: &Coupling<f64>,
) -> Result<ScanRow, CliError> {
    let at = || format!("E = {} GeV, theta = {} rad", energy, theta);
    let eval = || -> Result<(KinematicState<f64>, [f64; 4]), Error> {
        let state = build_state(energy, light_mass, heavy_mass, theta, 0.0)?;
        let beta = state.beta()?.value();
        let full = dsigma_energy_form_state(&state, coupling)?.value;
        let mott = mott_like_limit(beta, theta, heavy_mass, coupling)?.value;
        let ruth = rutherford_limit(beta, theta, heavy_mass, coupling.newton_g())?.value;
        let ur = ultrarelativistic_limit(energy, theta, heavy_mass, coupling)?.value;
        Ok((state, [full, mott, ruth, ur]))
    };
    let (state, [full, mott_like, rutherford, ultrarelativistic]) =
        eval().map_err(|e| state_error(at(), e))?;
    Ok(ScanRow {
        energy,
        theta,
        scattered_energy: state.scattered_energy,
        t: state.momenta.t(),
        full,
        mott_like,
        rutherford,
        ultrarelativistic,
        interaction_strength: interaction_strength(&state.momenta, coupling),
        perturbative: perturbativity_indicator(&state, coupling).perturbative,
    })
}

fn csv(first_column: &str, rows: &[ScanRow], units: Units, by_energy: bool) -> String {
    let mut out = String::new();
    let header: Vec<&str> = std::iter::once(first_column)
        .chain(CSV_COLUMNS[1..].iter().copied())
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    let k = units.factor();
    for r in rows {
        let first = if by_energy { r.energy } else { r.theta };
        let fields = [
            first,
            r.scattered_energy,
            r.t,
            r.full * k,
            r.mott_like * k,
            r.rutherford * k,
            r.ultrarelativistic * k,
            r.interaction_strength,
        ];
        let line: Vec<String> = fields.iter().map(|x| format_field(*x)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Output text of a mode together with a one-line summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub body: String,
    pub summary: String,
}

fn perturbativity_note(rows: &[ScanRow]) -> String {
    let flagged = rows.iter().filter(|r| !r.perturbative).count();
    if flagged == 0 {
        "leading order trusted in every row".to_string()
    } else {
        format!("{} rows beyond the perturbative threshold", flagged)
    }
}

pub fn angle_scan_rows(req: &ScanRequest) -> Result<Vec<ScanRow>, CliError> {
    let (ScanGrid::Angular(grid), Some(e), Some(m)) =
        (&req.grid, req.physics.energy, req.physics.light_mass)
    else {
        return Err(CliError::Physics(
            "angle scan needs --E-gev, --m-gev and an angular grid".into(),
        ));
    };
    grid.nodes()
        .into_iter()
        .map(|theta| scan_row(e, m, req.physics.heavy_mass, theta, &req.physics.coupling))
        .collect()
}

pub fn run_angle_scan(req: &ScanRequest) -> Result<Rendered, CliError> {
    let rows = angle_scan_rows(req)?;
    Ok(Rendered {
        body: csv(CSV_COLUMNS[0], &rows, req.units, false),
        summary: format!(
            "angle-scan: {} rows, cross-sections in {}, {}",
            rows.len(),
            req.units.label(),
            perturbativity_note(&rows)
        ),
    })
}

/// `n` log-spaced energies from `lo` to `hi`, end points exact.
pub fn energy_nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let ratio = (hi / lo).ln();
    let last = n - 1;
    (0..n)
        .map(|k| match k {
            0 => lo,
            k if k == last => hi,
            k => lo * (ratio * k as f64 / last as f64).exp(),
        })
        .collect()
}

pub fn energy_scan_rows(req: &ScanRequest) -> Result<Vec<ScanRow>, CliError> {
    let (ScanGrid::Energy { lo, hi, n, theta }, Some(m)) = (&req.grid, req.physics.light_mass)
    else {
        return Err(CliError::Physics(
            "energy scan needs --m-gev and an energy range".into(),
        ));
    };
    energy_nodes(*lo, *hi, *n)
        .into_iter()
        .map(|e| scan_row(e, m, req.physics.heavy_mass, *theta, &req.physics.coupling))
        .collect()
}

pub fn run_energy_scan(req: &ScanRequest) -> Result<Rendered, CliError> {
    let rows = energy_scan_rows(req)?;
    Ok(Rendered {
        body: csv(ENERGY_SCAN_FIRST_COLUMN, &rows, req.units, true),
        summary: format!(
            "energy-scan: {} rows, cross-sections in {}, {}",
            rows.len(),
            req.units.label(),
            perturbativity_note(&rows)
        ),
    })
}

/// A ratio cell of the limit table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Value(f64),
    /// Zero denominator, or an input that cannot be evaluated.
    Undefined,
}

impl Ratio {
    fn of(num: Option<f64>, den: Option<f64>) -> Self {
        match (num, den) {
            (Some(a), Some(b)) if b != 0.0 && (a / b).is_finite() => Ratio::Value(a / b),
            _ => Ratio::Undefined,
        }
    }

    fn outside(self, tolerance: f64) -> bool {
        matches!(self, Ratio::Value(r) if (r - 1.0).abs() > tolerance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRow {
    pub energy_ratio: f64,
    pub beta: f64,
    pub theta: f64,
    /// Heavy-scatterer cross-section in GeV^-2; `None` if not evaluable.
    pub mott_like: Option<f64>,
    pub full_over_mott: Ratio,
    pub mott_over_rutherford: Ratio,
    pub full_over_ultrarel: Ratio,
    /// Per ratio: whether the row lies in that ratio's asymptotic corner.
    pub in_corner: [bool; 3],
}

impl LimitRow {
    pub fn ratios(&self) -> [Ratio; 3] {
        [
            self.full_over_mott,
            self.mott_over_rutherford,
            self.full_over_ultrarel,
        ]
    }

    pub fn flags(&self, tolerance: f64) -> [bool; 3] {
        let r = self.ratios();
        [0, 1, 2].map(|k| self.in_corner[k] && r[k].outside(tolerance))
    }
}

/// Evaluates one `(E/M, beta, theta)` point. The light mass follows from
/// `m = E sqrt(1 - beta^2)`, so `beta = 1` leaves the exact form undefined.
pub fn limit_row(
    energy_ratio: f64,
    beta: f64,
    theta: f64,
    heavy_mass: f64,
    coupling: &Coupling<f64>,
) -> LimitRow {
    let energy = energy_ratio * heavy_mass;
    let light_mass = energy * ((1.0 - beta) * (1.0 + beta)).sqrt();
    let full = build_state(energy, light_mass, heavy_mass, theta, 0.0)
        .and_then(|s| dsigma_energy_form_state(&s, coupling))
        .map(|x| x.value)
        .ok();
    let mott = mott_like_limit(beta, theta, heavy_mass, coupling)
        .map(|x| x.value)
        .ok();
    let ruth = rutherford_limit(beta, theta, heavy_mass, coupling.newton_g())
        .map(|x| x.value)
        .ok();
    let ur = ultrarelativistic_limit(energy, theta, heavy_mass, coupling)
        .map(|x| x.value)
        .ok();
    LimitRow {
        energy_ratio,
        beta,
        theta,
        mott_like: mott,
        full_over_mott: Ratio::of(full, mott),
        mott_over_rutherford: Ratio::of(mott, ruth),
        full_over_ultrarel: Ratio::of(full, ur),
        in_corner: [
            energy_ratio <= HEAVY_CORNER_ENERGY_RATIO,
            beta <= NEWTONIAN_CORNER_BETA,
            1.0 - beta <= MASSLESS_CORNER_GAP,
        ],
    }
}

pub fn limit_rows(req: &ScanRequest) -> Result<Vec<LimitRow>, CliError> {
    let ScanGrid::Limits { angles, .. } = &req.grid else {
        return Err(CliError::Physics(
            "limit comparison needs a list of angles".into(),
        ));
    };
    let mut rows = Vec::new();
    for &x in &LIMIT_ENERGY_RATIOS {
        for &beta in &LIMIT_BETAS {
            for &theta in angles {
                rows.push(limit_row(
                    x,
                    beta,
                    theta,
                    req.physics.heavy_mass,
                    &req.physics.coupling,
                ));
            }
        }
    }
    Ok(rows)
}

fn ratio_cell(r: Ratio, flagged: bool) -> String {
    let text = match r {
        Ratio::Value(v) => format!("{:.9e}", v),
        Ratio::Undefined => "undefined".to_string(),
    };
    format!("{:>16}{}", text, if flagged { "*" } else { " " })
}

pub fn run_limit_compare(req: &ScanRequest) -> Result<Rendered, CliError> {
    let ScanGrid::Limits { tolerance, .. } = &req.grid else {
        return Err(CliError::Physics(
            "limit comparison needs a list of angles".into(),
        ));
    };
    let rows = limit_rows(req)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# M = {} GeV, g2 = {}, tolerance {:e}; * marks a ratio off 1 by more than the tolerance",
        req.physics.heavy_mass,
        req.physics.coupling.g_squared(),
        tolerance
    );
    let _ = writeln!(
        out,
        "# inside its corner: full/mott for E/M <= {:e}, mott/ruth for beta <= {:e}, full/ur for 1 - beta <= {:e}",
        HEAVY_CORNER_ENERGY_RATIO, NEWTONIAN_CORNER_BETA, MASSLESS_CORNER_GAP
    );
    let mott_header = format!("mott_like[{}]", req.units.label());
    let _ = writeln!(
        out,
        "{:>8} {:>18} {:>20} {:>24} {:>17} {:>17} {:>17}",
        "E/M", "beta", "theta_rad", mott_header, "full/mott", "mott/ruth", "full/ur"
    );
    let mut flagged = 0;
    for r in &rows {
        let flags = r.flags(*tolerance);
        flagged += flags.iter().filter(|f| **f).count();
        let mott = match r.mott_like {
            Some(v) => format!("{:.9e}", v * req.units.factor()),
            None => "undefined".to_string(),
        };
        let _ = writeln!(
            out,
            "{:>8.0e} {:>18.10} {:>20.17} {:>24} {}{}{}",
            r.energy_ratio,
            r.beta,
            r.theta,
            mott,
            ratio_cell(r.full_over_mott, flags[0]),
            ratio_cell(r.mott_over_rutherford, flags[1]),
            ratio_cell(r.full_over_ultrarel, flags[2]),
        );
    }
    Ok(Rendered {
        body: out,
        summary: format!(
            "limit-compare: {} rows, {} corner ratios outside tolerance {:e}",
            rows.len(),
            flagged,
            tolerance
        ),
    })
}

/// Exit status of the process.
pub const EXIT_SUCCESS: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_SELFTEST_FAILED: u8 = 2;

pub fn selftest_exit_code(report: &SelfTestReport) -> u8 {
    if report.passed() {
        EXIT_SUCCESS
    } else {
        EXIT_SELFTEST_FAILED
    }
}

fn emit(rendered: &Rendered, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(path) => {
            std::fs::write(path, &rendered.body).map_err(|source| CliError::Output {
                path: path.clone(),
                source,
            })?;
            println!("{} -> {}", rendered.summary, path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            let _ = lock.write_all(rendered.body.as_bytes());
            eprintln!("{}", rendered.summary);
        }
    }
    Ok(())
}

/// Executes a request, printing to standard streams; returns the exit code.
pub fn execute(req: &ScanRequest) -> Result<u8, CliError> {
    let rendered = match req.mode {
        Mode::AngleScan => run_angle_scan(req)?,
        Mode::EnergyScan => run_energy_scan(req)?,
        Mode::LimitCompare => run_limit_compare(req)?,
        Mode::Selftest => {
            let ScanGrid::Seed(seed) = req.grid else {
                return Err(CliError::Physics("selftest needs a seed".into()));
            };
            let report = run_selftest(seed);
            print!("{}", report);
            return Ok(selftest_exit_code(&report));
        }
    };
    emit(&rendered, req.output_path.as_ref())?;
    Ok(EXIT_SUCCESS)
}

pub fn main_with_args<I: IntoIterator<Item = OsString>>(args: I) -> ExitCode {
    let outcome = ScanRequest::parse_from(args).and_then(|req| execute(&req));
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            match &e {
                CliError::Usage(usage) => {
                    let _ = usage.print();
                }
                other => eprintln!("error: {}", other),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
