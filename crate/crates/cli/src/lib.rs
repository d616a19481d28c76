//! Batch front end for `deformcalc`: evaluate operators over grids, verify
//! eigen-equations, and tabulate mappings and expansions as CSV or JSON.

// `!(a < b)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod table;

use std::io::Write;

use deformcalc::mapping::{expand_hausdorff_prefactor, kappa_expansion, q_from_zeta, zeta_from_q};
use deformcalc::special::mittag_leffler;
use deformcalc::{selftest, DerivativeKind, EigenProblem, MlSeriesConfig, RealFunction};
use rayon::prelude::*;
use thiserror::Error;

pub use config::{Cli, Command, ExpandRequest, Form, Grid, MapRequest, OutputFormat, RunConfig};
pub use table::Table;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("--{flag}: {message}")]
    Config { flag: &'static str, message: String },

    /// A `--fn` syntax error, already rendered with a caret under the source.
    #[error("--fn: {0}")]
    Parse(String),

    #[error("{op}{}: {source}", at.map(|x| format!(" at x = {x}")).unwrap_or_default())]
    Numerical {
        op: String,
        at: Option<f64>,
        source: deformcalc::Error,
    },

    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Parse(_) | CliError::Io { .. } => 2,
            CliError::Numerical { .. } => 3,
        }
    }
}

/// Rendered output and the status the process should exit with.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    pub exit_code: i32,
}

fn numerical(op: impl Into<String>, at: Option<f64>) -> impl FnOnce(deformcalc::Error) -> CliError {
    let op = op.into();
    move |source| CliError::Numerical { op, at, source }
}

fn operator_params(table: Table, kind: &DerivativeKind) -> Table {
    let table = table.param("op", kind.name());
    match *kind {
        DerivativeKind::Classical => table,
        DerivativeKind::QDeformed(q) => table.param("q", q.value()),
        DerivativeKind::Kaniadakis(k) => table.param("kappa", k.value()),
        DerivativeKind::Hausdorff(hp) => table.param("zeta", hp.zeta()).param("l0", hp.l0()),
        DerivativeKind::Conformable { alpha } => table.param("alpha", alpha),
        DerivativeKind::GrunwaldJumarie { alpha, h } => table.param("alpha", alpha).param("h", h),
        DerivativeKind::YangLfd { alpha, l0 } => table.param("alpha", alpha).param("l0", l0),
    }
}

/// Evaluates `xs` in parallel, keeping grid order and reporting the first
/// failure in grid order.
fn sweep<F>(xs: &[f64], f: F) -> Result<Vec<Vec<f64>>, (f64, deformcalc::Error)>
where
    F: Fn(f64) -> deformcalc::Result<f64> + Sync,
{
    let values: Vec<_> = xs.par_iter().map(|&x| (x, f(x))).collect();
    values
        .into_iter()
        .map(|(x, v)| v.map(|v| vec![x, v]).map_err(|e| (x, e)))
        .collect()
}

fn deriv(cfg: &RunConfig, kind: &DerivativeKind, source: &str, grid: &Grid, form: Form) -> Result<Table, CliError> {
    let f = RealFunction::parse(source).map_err(|e| match e {
        deformcalc::Error::Parse(p) => CliError::Parse(p.render(source)),
        other => CliError::Config {
            flag: "fn",
            message: other.to_string(),
        },
    })?;
    let s = cfg.tolerances;
    if form == Form::Limit && kind.apply_limit(&f, grid.start, &s).is_none() {
        return Err(CliError::Config {
            flag: "form",
            message: format!("the {} operator has no limit form", kind.name()),
        });
    }
    let rows = sweep(&grid.values(), |x| match form {
        Form::Closed => kind.apply(&f, x, &s),
        Form::Limit => kind.apply_limit(&f, x, &s).expect("checked above"),
    })
    .map_err(|(x, e)| numerical(kind.name(), Some(x))(e))?;
    let mut table = operator_params(Table::new("deriv", vec!["x", "value"]), kind)
        .param("fn", source)
        .param("grid", grid.to_string())
        .param("form", if form == Form::Closed { "closed" } else { "limit" })
        .param("step", s.base_step())
        .param("levels", s.richardson_levels() as u64)
        .param("rtol", s.rel_tolerance());
    table.rows = rows;
    Ok(table)
}

fn solve(kind: &DerivativeKind, grid: &Grid, tol: f64) -> Result<Table, CliError> {
    let problem =
        EigenProblem::new(*kind, (grid.start, grid.stop), grid.points).map_err(numerical(kind.name(), None))?;
    let report = problem.solve(tol).map_err(numerical(kind.name(), None))?;
    let mut table = operator_params(Table::new("solve", vec!["x", "value", "closed_form", "residual"]), kind)
        .param("grid", grid.to_string())
        .param("tol", tol)
        .param("y0", problem.y0)
        .param("max_rel_residual", report.max_rel_residual)
        .param("rms_rel_residual", report.rms_rel_residual);
    table.rows = report
        .grid
        .iter()
        .map(|s| vec![s.x, s.numeric, s.closed_form, s.rel_residual()])
        .collect();
    Ok(table)
}

fn map(req: &MapRequest) -> Result<Table, CliError> {
    let m = match *req {
        MapRequest::FromZeta(hp) => q_from_zeta(&hp),
        MapRequest::FromQ { q, l0 } => zeta_from_q(q, l0).map_err(numerical("map", None))?,
    };
    let direction = match req {
        MapRequest::FromZeta(_) => "zeta_to_q",
        MapRequest::FromQ { .. } => "q_to_zeta",
    };
    let mut table =
        Table::new("map", vec!["q", "zeta", "l0", "first_order_residual_bound"]).param("direction", direction);
    table.rows = vec![vec![m.q, m.zeta, m.l0, m.first_order_residual_bound]];
    Ok(table)
}

fn expand(req: &ExpandRequest) -> Result<Table, CliError> {
    let (series, table) = match *req {
        ExpandRequest::Hausdorff { hp, order } => (
            expand_hausdorff_prefactor(&hp, order).map_err(numerical("expand", None))?,
            Table::new("expand", vec!["k", "coefficient"])
                .param("op", "hausdorff")
                .param("zeta", hp.zeta())
                .param("l0", hp.l0()),
        ),
        ExpandRequest::Kappa { kappa, order } => (
            kappa_expansion(kappa, order).map_err(numerical("expand", None))?,
            Table::new("expand", vec!["k", "coefficient"])
                .param("op", "kappa")
                .param("kappa", kappa.value()),
        ),
    };
    let mut table = table
        .param("order", series.order() as u64)
        .param("expansion_point", series.expansion_point);
    table.rows = series
        .coefficients
        .iter()
        .enumerate()
        .map(|(k, &c)| vec![k as f64, c])
        .collect();
    Ok(table)
}

fn ml(alpha: f64, points: &[f64]) -> Result<Table, CliError> {
    let cfg = MlSeriesConfig::default();
    let rows =
        sweep(points, |z| mittag_leffler(z, alpha, &cfg)).map_err(|(z, e)| numerical("mittag_leffler", Some(z))(e))?;
    let mut table = Table::new("ml", vec!["x", "value"])
        .param("alpha", alpha)
        .param("rtol", cfg.rel_tolerance())
        .param("max_terms", cfg.max_terms() as u64);
    table.rows = rows;
    Ok(table)
}

/// Runs `config` and renders its output. Failing self-test checks are not an
/// error: they produce a report with exit status 1.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let table = match &config.command {
        Command::Deriv {
            operator,
            function_source,
            grid,
            form,
        } => deriv(config, operator, function_source, grid, *form)?,
        Command::Solve { operator, grid, tol } => solve(operator, grid, *tol)?,
        Command::Map(req) => map(req)?,
        Command::Expand(req) => expand(req)?,
        Command::Ml { alpha, points } => ml(*alpha, points)?,
        Command::Selftest => {
            let summary = selftest::run();
            return Ok(Report {
                body: format!("{summary}\n"),
                exit_code: if summary.all_passed() { 0 } else { 1 },
            });
        }
    };
    let body = match config.output_format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => table.to_json(),
    };
    Ok(Report { body, exit_code: 0 })
}

/// Runs `config`, writes the output to `--output` or stdout and any error to
/// stderr, and returns the process exit status.
pub fn execute(config: &RunConfig) -> i32 {
    let outcome = run(config).and_then(|report| {
        match &config.output_path {
            Some(path) => std::fs::write(path, &report.body).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?,
            None => {
                let mut out = std::io::stdout().lock();
                // a closed pipe is not worth a failure status
                let _ = out.write_all(report.body.as_bytes()).and_then(|_| out.flush());
            }
        }
        Ok(report.exit_code)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
