//! Flag parsing and validation into a [`RunConfig`].

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deformcalc::{DerivativeKind, DiffSettings, Error, HausdorffParams, KappaParam, QParam};

use crate::CliError;

pub const FORMAT_ENV: &str = "DEFCALC_FORMAT";

const GRAMMAR_HELP: &str = "\
Expressions (--fn) use the single variable x:
  numbers      2, 0.5, 1e-3          constants   pi, e
  operators    + - * / ^  (^ is right-associative and binds tighter than unary minus)
  functions    exp ln sin cos sqrt gamma abs (one argument), pow(a, b)
Example: --fn \"exp(-x^2/2) * sin(3*x)\"

Exit status: 0 success, 1 self-test failure, 2 configuration or parse error, 3 numerical failure.";

#[derive(Debug, Parser)]
#[command(name = "deformcalc", version, about = "Deformed and local-fractional derivatives on a grid", after_help = GRAMMAR_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Apply a derivative operator to --fn at every grid point.
    #[command(allow_negative_numbers = true, after_help = GRAMMAR_HELP)]
    Deriv(Opts),
    /// Integrate an eigen-equation and compare with its closed-form solution.
    #[command(allow_negative_numbers = true)]
    Solve(Opts),
    /// Convert between (zeta, l0) and q.
    #[command(allow_negative_numbers = true)]
    Map(Opts),
    /// Power-series coefficients of the Hausdorff or kappa prefactor.
    #[command(allow_negative_numbers = true)]
    Expand(Opts),
    /// Mittag-Leffler function E_alpha at --z or over --grid.
    #[command(allow_negative_numbers = true)]
    Ml(Opts),
    /// Run the built-in invariant suite.
    Selftest(Opts),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpName {
    Classical,
    Q,
    Kappa,
    Hausdorff,
    Conformable,
    Gl,
    Yang,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Which definition `deriv` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Form {
    #[default]
    Closed,
    Limit,
}

/// `start:stop:points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self, String> {
        if !start.is_finite() || !stop.is_finite() {
            return Err("grid bounds must be finite".into());
        }
        if !(start < stop) {
            return Err(format!("start {start} must be below stop {stop}"));
        }
        if points < 2 {
            return Err(format!("need at least 2 points, got {points}"));
        }
        Ok(Self { start, stop, points })
    }

    pub fn values(&self) -> Vec<f64> {
        deformcalc::eigen::linspace(self.start, self.stop, self.points)
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, points] = parts.as_slice() else {
            return Err(format!("expected start:stop:points, got `{s}`"));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("`{v}` is not a number"));
        let points = points
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("`{points}` is not a point count"))?;
        Grid::new(num(start)?, num(stop)?, points)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.points)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Operator.
    #[arg(long, value_enum)]
    pub op: Option<OpName>,
    /// Entropic index q.
    #[arg(long)]
    pub q: Option<f64>,
    /// Kaniadakis deformation kappa.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Hausdorff scaling exponent zeta.
    #[arg(long)]
    pub zeta: Option<f64>,
    /// Lower cutoff l0 (> 0).
    #[arg(long)]
    pub l0: Option<f64>,
    /// Fractional order alpha.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Grünwald-Letnikov step h.
    #[arg(long)]
    pub h: Option<f64>,
    /// Mittag-Leffler argument.
    #[arg(long)]
    pub z: Option<f64>,
    /// Function of x, see the expression syntax below.
    #[arg(long = "fn")]
    pub function: Option<String>,
    /// Grid as start:stop:points.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Output format.
    #[arg(long, value_enum, env = FORMAT_ENV, default_value = "csv")]
    pub format: OutputFormat,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Base step for finite differences and limit quotients.
    #[arg(long)]
    pub step: Option<f64>,
    /// Richardson levels (1 to 6).
    #[arg(long)]
    pub levels: Option<usize>,
    /// Relative tolerance for the Richardson table.
    #[arg(long)]
    pub rtol: Option<f64>,
    /// ODE integrator tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Series order for `expand`.
    #[arg(long, default_value_t = 8)]
    pub order: usize,
    /// Closed form or limit definition for `deriv`.
    #[arg(long, value_enum, default_value = "closed")]
    pub form: Form,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapRequest {
    FromZeta(HausdorffParams),
    FromQ { q: QParam, l0: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExpandRequest {
    Hausdorff { hp: HausdorffParams, order: usize },
    Kappa { kappa: KappaParam, order: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Deriv {
        operator: DerivativeKind,
        function_source: String,
        grid: Grid,
        form: Form,
    },
    Solve {
        operator: DerivativeKind,
        grid: Grid,
        tol: f64,
    },
    Map(MapRequest),
    Expand(ExpandRequest),
    Ml {
        alpha: f64,
        points: Vec<f64>,
    },
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Deriv { .. } => "deriv",
            Command::Solve { .. } => "solve",
            Command::Map(_) => "map",
            Command::Expand(_) => "expand",
            Command::Ml { .. } => "ml",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub tolerances: DiffSettings,
}

fn config(flag: &'static str, message: impl Into<String>) -> CliError {
    CliError::Config {
        flag,
        message: message.into(),
    }
}

fn require<T: Copy>(value: Option<T>, flag: &'static str) -> Result<T, CliError> {
    value.ok_or_else(|| config(flag, "is required here"))
}

/// Maps a core validation error to the flag that caused it.
fn invalid(flag: &'static str) -> impl Fn(Error) -> CliError {
    move |e| config(flag, e.to_string())
}

fn operator(opts: &Opts, default_h: f64) -> Result<DerivativeKind, CliError> {
    let op = require(opts.op, "op")?;
    let kind = match op {
        OpName::Classical => DerivativeKind::Classical,
        OpName::Q => DerivativeKind::QDeformed(QParam::new(require(opts.q, "q")?).map_err(invalid("q"))?),
        OpName::Kappa => {
            DerivativeKind::Kaniadakis(KappaParam::new(require(opts.kappa, "kappa")?).map_err(invalid("kappa"))?)
        }
        OpName::Hausdorff => DerivativeKind::Hausdorff(hausdorff(opts)?),
        OpName::Conformable => DerivativeKind::Conformable {
            alpha: require(opts.alpha, "alpha")?,
        },
        OpName::Gl => DerivativeKind::GrunwaldJumarie {
            alpha: require(opts.alpha, "alpha")?,
            h: opts.h.unwrap_or(default_h),
        },
        OpName::Yang => DerivativeKind::YangLfd {
            alpha: require(opts.alpha, "alpha")?,
            l0: require(opts.l0, "l0")?,
        },
    };
    kind.validate().map_err(|e| match e {
        Error::InvalidParameter { name: "h", .. } => config("h", e.to_string()),
        Error::InvalidParameter { name: "l0", .. } => config("l0", e.to_string()),
        _ => config("alpha", e.to_string()),
    })?;
    Ok(kind)
}

fn hausdorff(opts: &Opts) -> Result<HausdorffParams, CliError> {
    let zeta = require(opts.zeta, "zeta")?;
    let l0 = require(opts.l0, "l0")?;
    HausdorffParams::new(zeta, l0).map_err(|e| match e {
        Error::InvalidParameter { name: "zeta", .. } => config("zeta", e.to_string()),
        _ => config("l0", e.to_string()),
    })
}

fn settings(opts: &Opts) -> Result<DiffSettings, CliError> {
    let d = DiffSettings::default();
    DiffSettings::new(
        opts.step.unwrap_or(d.base_step()),
        opts.levels.unwrap_or(d.richardson_levels()),
        opts.rtol.unwrap_or(d.rel_tolerance()),
    )
    .map_err(|e| match e {
        Error::InvalidParameter { name: "base_step", .. } => config("step", e.to_string()),
        Error::InvalidParameter {
            name: "richardson_levels",
            ..
        } => config("levels", e.to_string()),
        _ => config("rtol", e.to_string()),
    })
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let (name, opts) = match cli.command {
            CommandArgs::Deriv(o) => ("deriv", o),
            CommandArgs::Solve(o) => ("solve", o),
            CommandArgs::Map(o) => ("map", o),
            CommandArgs::Expand(o) => ("expand", o),
            CommandArgs::Ml(o) => ("ml", o),
            CommandArgs::Selftest(o) => ("selftest", o),
        };
        Self::from_opts(name, opts)
    }

    pub fn from_opts(name: &str, opts: Opts) -> Result<Self, CliError> {
        let command = match name {
            "deriv" => Command::Deriv {
                operator: operator(&opts, 1e-3)?,
                function_source: opts.function.clone().ok_or_else(|| config("fn", "is required here"))?,
                grid: require(opts.grid, "grid")?,
                form: opts.form,
            },
            "solve" => {
                let operator = operator(&opts, 1e-3)?;
                if matches!(operator, DerivativeKind::YangLfd { .. }) {
                    return Err(config("op", "the Yang derivative has no eigen solver"));
                }
                if !(1e-12..=1e-4).contains(&opts.tol) {
                    return Err(config("tol", format!("{} is outside [1e-12, 1e-4]", opts.tol)));
                }
                let grid = require(opts.grid, "grid")?;
                if grid.points < deformcalc::eigen::MIN_GRID_POINTS {
                    return Err(config("grid", "eigen problems need at least 11 points"));
                }
                Command::Solve {
                    operator,
                    grid,
                    tol: opts.tol,
                }
            }
            "map" => {
                let l0 = require(opts.l0, "l0")?;
                match (opts.zeta, opts.q) {
                    (Some(_), None) => Command::Map(MapRequest::FromZeta(hausdorff(&opts)?)),
                    (None, Some(q)) => {
                        if !(l0 > 0.0 && l0.is_finite()) {
                            return Err(config("l0", format!("{l0} must be positive")));
                        }
                        Command::Map(MapRequest::FromQ {
                            q: QParam::new(q).map_err(invalid("q"))?,
                            l0,
                        })
                    }
                    _ => return Err(config("zeta", "give exactly one of --zeta or --q")),
                }
            }
            "expand" => {
                let order = opts.order;
                match opts.kappa {
                    Some(k) => {
                        if order < 2 {
                            return Err(config("order", "must be at least 2 for the kappa expansion"));
                        }
                        Command::Expand(ExpandRequest::Kappa {
                            kappa: KappaParam::new(k).map_err(invalid("kappa"))?,
                            order,
                        })
                    }
                    None => {
                        if order < 1 {
                            return Err(config("order", "must be at least 1"));
                        }
                        Command::Expand(ExpandRequest::Hausdorff {
                            hp: hausdorff(&opts)?,
                            order,
                        })
                    }
                }
            }
            "ml" => {
                let alpha = require(opts.alpha, "alpha")?;
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(config("alpha", format!("{alpha} must be positive")));
                }
                let points = match (opts.z, opts.grid) {
                    (Some(z), None) => vec![z],
                    (None, Some(g)) => g.values(),
                    _ => return Err(config("z", "give exactly one of --z or --grid")),
                };
                Command::Ml { alpha, points }
            }
            "selftest" => Command::Selftest,
            other => return Err(config("command", format!("unknown command `{other}`"))),
        };
        Ok(Self {
            command,
            output_format: opts.format,
            output_path: opts.output.clone(),
            tolerances: settings(&opts)?,
        })
    }
}
