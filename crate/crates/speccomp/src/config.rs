//! Run configuration: command-line flags, the optional `key = value` file, and
//! the rules that turn a partial parameter set into a well.

use std::fs;
use std::path::{Path, PathBuf};

use aisw::WellConfig;
use clap::Parser;

/// Relative tolerance used to decide whether an over-determined parameter set
/// is self-consistent.
const CONSISTENCY_TOL: f64 = 1e-12;

pub const DEFAULT_N_MIN: usize = 1;
pub const DEFAULT_N_MAX: usize = 30;
/// Longest single-reflection family member used by the oracle (`j ≤ 40`).
pub const DEFAULT_ORBIT_MAX_LEN: usize = 79;
pub const DEFAULT_NU_MAX: u32 = 40;
pub const DEFAULT_TOL_BISECT: f64 = 1e-13;
pub const DEFAULT_TOL_SUM: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Syntax {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("invalid value {value:?} for {key}: {reason}")]
    Value {
        key: String,
        value: String,
        reason: String,
    },
    #[error("{0}")]
    Parameters(String),
    #[error(transparent)]
    Model(#[from] aisw::Error),
}

/// Command-line flags. Every flag may also be set in the `--config` file.
#[derive(Debug, Default, Clone, Parser)]
#[command(
    name = "speccomp",
    version,
    about = "Compare exact, perturbative and periodic-orbit spectra of the step well"
)]
pub struct Cli {
    /// Flat `key = value` file mirroring the flags; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Half-width of the well.
    #[arg(long)]
    pub a: Option<f64>,
    /// Step height.
    #[arg(long)]
    pub v0: Option<f64>,
    /// Particle mass (default 1).
    #[arg(long)]
    pub mass: Option<f64>,
    /// Reduced Planck constant (default 1).
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Dimensionless step strength m a² V0 / ħ².
    #[arg(long)]
    pub alpha: Option<f64>,
    /// First level index (default 1).
    #[arg(long)]
    pub n_min: Option<usize>,
    /// Last level index (default 30).
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Write the comparison table as CSV.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    /// Write the comparison table and run configuration as JSON.
    #[arg(long)]
    pub out_json: Option<PathBuf>,
    /// Write an energy-versus-n plot as SVG.
    #[arg(long)]
    pub out_svg: Option<PathBuf>,
    /// Write a whitespace-separated table for external plotting.
    #[arg(long)]
    pub out_dat: Option<PathBuf>,
    /// Run the quadrature cross-checks and print them.
    #[arg(long)]
    pub oracle: bool,
    /// Longest orbit word used by the oracle.
    #[arg(long)]
    pub orbit_max_len: Option<usize>,
    /// Repetition cutoff used by the oracle.
    #[arg(long)]
    pub nu_max: Option<u32>,
    /// Relative bracket width at which bisection stops.
    #[arg(long)]
    pub tol_bisect: Option<f64>,
    /// Relative tolerance of the second-order perturbation sum.
    #[arg(long)]
    pub tol_sum: Option<f64>,
    /// Also print the per-orbit oracle breakdown.
    #[arg(long)]
    pub verbose: bool,
}

impl Cli {
    /// Fills every unset field from the config file named by `--config`.
    pub fn merged(mut self) -> Result<Self, ConfigError> {
        if let Some(path) = self.config.clone() {
            let file = parse_config_file(&path)?;
            self = self.or(file);
        }
        Ok(self)
    }

    /// Field-wise `self.or(other)`; boolean switches are OR-ed.
    fn or(self, other: Self) -> Self {
        Self {
            config: self.config,
            a: self.a.or(other.a),
            v0: self.v0.or(other.v0),
            mass: self.mass.or(other.mass),
            hbar: self.hbar.or(other.hbar),
            alpha: self.alpha.or(other.alpha),
            n_min: self.n_min.or(other.n_min),
            n_max: self.n_max.or(other.n_max),
            out_csv: self.out_csv.or(other.out_csv),
            out_json: self.out_json.or(other.out_json),
            out_svg: self.out_svg.or(other.out_svg),
            out_dat: self.out_dat.or(other.out_dat),
            oracle: self.oracle || other.oracle,
            orbit_max_len: self.orbit_max_len.or(other.orbit_max_len),
            nu_max: self.nu_max.or(other.nu_max),
            tol_bisect: self.tol_bisect.or(other.tol_bisect),
            tol_sum: self.tol_sum.or(other.tol_sum),
            verbose: self.verbose || other.verbose,
        }
    }
}

/// Reads a flat `key = value` file. Keys are flag names without the leading
/// dashes (`n-max` and `n_max` both work); `#` starts a comment.
pub fn parse_config_file(path: &Path) -> Result<Cli, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_text(&text, path)
}

pub fn parse_config_text(text: &str, path: &Path) -> Result<Cli, ConfigError> {
    let mut cli = Cli::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |reason: String| ConfigError::Syntax {
            path: path.to_path_buf(),
            line: idx + 1,
            reason,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| syntax(format!("expected `key = value`, found {line:?}")))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        match key.as_str() {
            "a" => cli.a = Some(parse_value(&key, value)?),
            "v0" => cli.v0 = Some(parse_value(&key, value)?),
            "mass" => cli.mass = Some(parse_value(&key, value)?),
            "hbar" => cli.hbar = Some(parse_value(&key, value)?),
            "alpha" => cli.alpha = Some(parse_value(&key, value)?),
            "n-min" => cli.n_min = Some(parse_value(&key, value)?),
            "n-max" => cli.n_max = Some(parse_value(&key, value)?),
            "out-csv" => cli.out_csv = Some(PathBuf::from(value)),
            "out-json" => cli.out_json = Some(PathBuf::from(value)),
            "out-svg" => cli.out_svg = Some(PathBuf::from(value)),
            "out-dat" => cli.out_dat = Some(PathBuf::from(value)),
            "oracle" => cli.oracle = parse_value(&key, value)?,
            "orbit-max-len" => cli.orbit_max_len = Some(parse_value(&key, value)?),
            "nu-max" => cli.nu_max = Some(parse_value(&key, value)?),
            "tol-bisect" => cli.tol_bisect = Some(parse_value(&key, value)?),
            "tol-sum" => cli.tol_sum = Some(parse_value(&key, value)?),
            "verbose" => cli.verbose = parse_value(&key, value)?,
            "config" => {
                return Err(syntax(
                    "config files cannot include other config files".into(),
                ))
            }
            other => return Err(syntax(format!("unknown key {other:?}"))),
        }
    }
    Ok(cli)
}

fn parse_value<T>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::Value {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub well: WellConfig,
    pub n_min: usize,
    pub n_max: usize,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
    pub out_dat: Option<PathBuf>,
    pub oracle: bool,
    pub orbit_max_len: usize,
    pub nu_max: u32,
    pub tol_bisect: f64,
    pub tol_sum: f64,
    pub verbose: bool,
}

impl RunConfig {
    /// Settings for `well` with defaults everywhere else and no outputs.
    pub fn for_well(well: WellConfig, n_min: usize, n_max: usize) -> Result<Self, ConfigError> {
        let run = Self {
            well,
            n_min,
            n_max,
            out_csv: None,
            out_json: None,
            out_svg: None,
            out_dat: None,
            oracle: false,
            orbit_max_len: DEFAULT_ORBIT_MAX_LEN,
            nu_max: DEFAULT_NU_MAX,
            tol_bisect: DEFAULT_TOL_BISECT,
            tol_sum: DEFAULT_TOL_SUM,
            verbose: false,
        };
        run.validate()?;
        Ok(run)
    }

    /// Resolves already-merged flags.
    pub fn from_cli(cli: Cli) -> Result<Self, ConfigError> {
        let well = resolve_well(cli.alpha, cli.a, cli.v0, cli.mass, cli.hbar)?;
        let run = Self {
            well,
            n_min: cli.n_min.unwrap_or(DEFAULT_N_MIN),
            n_max: cli.n_max.unwrap_or(DEFAULT_N_MAX),
            out_csv: cli.out_csv,
            out_json: cli.out_json,
            out_svg: cli.out_svg,
            out_dat: cli.out_dat,
            oracle: cli.oracle,
            orbit_max_len: cli.orbit_max_len.unwrap_or(DEFAULT_ORBIT_MAX_LEN),
            nu_max: cli.nu_max.unwrap_or(DEFAULT_NU_MAX),
            tol_bisect: cli.tol_bisect.unwrap_or(DEFAULT_TOL_BISECT),
            tol_sum: cli.tol_sum.unwrap_or(DEFAULT_TOL_SUM),
            verbose: cli.verbose,
        };
        run.validate()?;
        Ok(run)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError::Parameters(msg));
        if self.n_min < 1 || self.n_min > self.n_max {
            return bad(format!(
                "level range must satisfy 1 <= n-min <= n-max, got {}..={}",
                self.n_min, self.n_max
            ));
        }
        if self.orbit_max_len < 1 {
            return bad("orbit-max-len must be at least 1".into());
        }
        if self.nu_max < 1 {
            return bad("nu-max must be at least 1".into());
        }
        if !(self.tol_bisect > 0.0 && self.tol_bisect < 1.0) {
            return bad(format!(
                "tol-bisect must lie in (0, 1), got {}",
                self.tol_bisect
            ));
        }
        if !(self.tol_sum > 0.0 && self.tol_sum < 1.0) {
            return bad(format!("tol-sum must lie in (0, 1), got {}", self.tol_sum));
        }
        Ok(())
    }
}

/// Turns the user's parameter set into a well.
///
/// * `alpha` alone: dimensionless well with `a = m = ħ = 1`, `V0 = alpha`.
/// * `alpha` with three of `a, v0, mass, hbar`: the fourth is solved for.
/// * `alpha` with all four: accepted only if consistent.
/// * `alpha` with one or two physical parameters: ambiguous, rejected.
/// * no `alpha`: `a` and `v0` are required, `mass` and `hbar` default to 1.
pub fn resolve_well(
    alpha: Option<f64>,
    a: Option<f64>,
    v0: Option<f64>,
    mass: Option<f64>,
    hbar: Option<f64>,
) -> Result<WellConfig, ConfigError> {
    let bad = |msg: String| Err(ConfigError::Parameters(msg));
    let Some(alpha) = alpha else {
        let (Some(a), Some(v0)) = (a, v0) else {
            return bad("give --alpha, or at least --a and --v0".into());
        };
        return Ok(WellConfig::new(
            a,
            v0,
            mass.unwrap_or(1.0),
            hbar.unwrap_or(1.0),
        )?);
    };
    if !(alpha.is_finite() && alpha >= 0.0) {
        return bad(format!(
            "alpha must be finite and non-negative, got {alpha}"
        ));
    }
    let given = [a, v0, mass, hbar].iter().filter(|x| x.is_some()).count();
    match (given, a, v0, mass, hbar) {
        (0, ..) => Ok(WellConfig::dimensionless(alpha)?),
        (1 | 2, ..) => bad(format!(
            "alpha together with {given} of a/v0/mass/hbar is ambiguous; give none or at least three"
        )),
        (3, None, Some(v0), Some(m), Some(h)) => {
            require_positive("v0", v0, "solving for a")?;
            Ok(WellConfig::new(h * (alpha / (m * v0)).sqrt(), v0, m, h)?)
        }
        (3, Some(a), None, Some(m), Some(h)) => Ok(WellConfig::new(a, alpha * h * h / (m * a * a), m, h)?),
        (3, Some(a), Some(v0), None, Some(h)) => {
            require_positive("v0", v0, "solving for mass")?;
            Ok(WellConfig::new(a, v0, alpha * h * h / (a * a * v0), h)?)
        }
        (3, Some(a), Some(v0), Some(m), None) => {
            require_positive("alpha", alpha, "solving for hbar")?;
            Ok(WellConfig::new(a, v0, m, (m * a * a * v0 / alpha).sqrt())?)
        }
        (_, Some(a), Some(v0), Some(m), Some(h)) => {
            let well = WellConfig::new(a, v0, m, h)?;
            let derived = well.alpha();
            if (derived - alpha).abs() > CONSISTENCY_TOL * alpha.max(derived).max(1.0) {
                return bad(format!(
                    "over-determined parameters are inconsistent: m a² V0 / ħ² = {derived} but alpha = {alpha}"
                ));
            }
            Ok(well)
        }
        _ => unreachable!("parameter count and options agree"),
    }
}

fn require_positive(name: &str, value: f64, purpose: &str) -> Result<(), ConfigError> {
    if value > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::Parameters(format!(
            "{name} must be positive when {purpose}, got {value}"
        )))
    }
}
