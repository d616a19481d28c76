//! Python bindings: deformed algebra, special functions, operators, eigen
//! solvers and the q/zeta mapping.

use deformcalc::{algebra, eigen, mapping, special, DerivativeKind, DiffSettings, Error, RealFunction};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Domain { .. }
        | Error::InvalidParameter { .. }
        | Error::Parse(_)
        | Error::Degenerate(_)
        | Error::UnsupportedDerivative(_) => PyValueError::new_err(e.to_string()),
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

fn qp(q: f64) -> PyResult<algebra::QParam> {
    algebra::QParam::new(q).map_err(py_err)
}

fn kp(kappa: f64) -> PyResult<algebra::KappaParam> {
    algebra::KappaParam::new(kappa).map_err(py_err)
}

fn hp(zeta: f64, l0: f64) -> PyResult<special::HausdorffParams> {
    special::HausdorffParams::new(zeta, l0).map_err(py_err)
}

#[pyfunction]
fn q_exp(x: f64, q: f64) -> PyResult<f64> {
    Ok(algebra::q_exp(x, qp(q)?))
}

#[pyfunction]
fn q_log(x: f64, q: f64) -> PyResult<f64> {
    algebra::q_log(x, qp(q)?).map_err(py_err)
}

#[pyfunction]
fn q_sum(x: f64, y: f64, q: f64) -> PyResult<f64> {
    Ok(algebra::q_sum(x, y, qp(q)?))
}

#[pyfunction]
fn q_difference(x: f64, y: f64, q: f64) -> PyResult<f64> {
    algebra::q_difference(x, y, qp(q)?).map_err(py_err)
}

#[pyfunction]
fn kappa_exp(x: f64, kappa: f64) -> PyResult<f64> {
    Ok(algebra::kappa_exp(x, kp(kappa)?))
}

#[pyfunction]
fn kappa_log(x: f64, kappa: f64) -> PyResult<f64> {
    algebra::kappa_log(x, kp(kappa)?).map_err(py_err)
}

#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    special::gamma(x).map_err(py_err)
}

#[pyfunction]
fn ln_gamma(x: f64) -> PyResult<f64> {
    special::ln_gamma(x).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (z, alpha, rel_tolerance=1e-16, max_terms=2000))]
fn mittag_leffler(z: f64, alpha: f64, rel_tolerance: f64, max_terms: usize) -> PyResult<f64> {
    let cfg = special::MlSeriesConfig::new(rel_tolerance, max_terms).map_err(py_err)?;
    special::mittag_leffler(z, alpha, &cfg).map_err(py_err)
}

#[pyfunction]
fn balankin_exp(x: f64, zeta: f64, l0: f64) -> PyResult<f64> {
    special::balankin_exp(x, &hp(zeta, l0)?).map_err(py_err)
}

fn mapping_dict<'py>(py: Python<'py>, m: &mapping::MappingResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("q", m.q)?;
    d.set_item("zeta", m.zeta)?;
    d.set_item("l0", m.l0)?;
    d.set_item("first_order_residual_bound", m.first_order_residual_bound)?;
    Ok(d)
}

#[pyfunction]
fn q_from_zeta<'py>(py: Python<'py>, zeta: f64, l0: f64) -> PyResult<Bound<'py, PyDict>> {
    mapping_dict(py, &mapping::q_from_zeta(&hp(zeta, l0)?))
}

#[pyfunction]
fn zeta_from_q<'py>(py: Python<'py>, q: f64, l0: f64) -> PyResult<Bound<'py, PyDict>> {
    mapping_dict(py, &mapping::zeta_from_q(qp(q)?, l0).map_err(py_err)?)
}

#[pyfunction]
fn first_order_agreement<'py>(py: Python<'py>, zeta: f64, l0: f64, x: f64) -> PyResult<Bound<'py, PyDict>> {
    let a = mapping::first_order_agreement(&hp(zeta, l0)?, x).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("hausdorff_prefactor", a.hausdorff_prefactor)?;
    d.set_item("q_prefactor", a.q_prefactor)?;
    d.set_item("residual", a.residual)?;
    d.set_item("bound", a.bound)?;
    Ok(d)
}

#[pyfunction]
fn expand_hausdorff_prefactor(zeta: f64, l0: f64, order: usize) -> PyResult<Vec<f64>> {
    Ok(mapping::expand_hausdorff_prefactor(&hp(zeta, l0)?, order)
        .map_err(py_err)?
        .coefficients)
}

#[pyfunction]
fn kappa_expansion(kappa: f64, order: usize) -> PyResult<Vec<f64>> {
    Ok(mapping::kappa_expansion(kp(kappa)?, order)
        .map_err(py_err)?
        .coefficients)
}

#[pyfunction]
fn rl_power_rule(gamma_exp: f64, alpha: f64, x: f64) -> PyResult<f64> {
    deformcalc::deriv::rl_power_rule(gamma_exp, alpha, x).map_err(py_err)
}

/// A function of `x` parsed from the expression language.
#[pyclass(name = "Function", frozen)]
struct PyFunction {
    inner: RealFunction,
}

#[pymethods]
impl PyFunction {
    #[new]
    fn new(source: &str) -> PyResult<Self> {
        Ok(Self {
            inner: RealFunction::parse(source).map_err(py_err)?,
        })
    }

    fn __call__(&self, x: f64) -> PyResult<f64> {
        self.inner.eval(x).map_err(py_err)
    }

    /// `f'(x)`: symbolic when available, numerical otherwise.
    fn derivative(&self, x: f64) -> PyResult<f64> {
        self.inner.derivative(x, &DiffSettings::default()).map_err(py_err)
    }

    #[getter]
    fn has_exact_derivative(&self) -> bool {
        self.inner.has_exact_derivative()
    }

    fn __repr__(&self) -> String {
        format!("Function({:?})", self.inner.label())
    }
}

/// A derivative operator with its parameters, e.g. `Operator("hausdorff", zeta=0.5, l0=1.0)`.
#[pyclass(name = "Operator", frozen)]
struct PyOperator {
    kind: DerivativeKind,
    settings: DiffSettings,
}

#[pymethods]
impl PyOperator {
    #[new]
    #[pyo3(signature = (name, *, q=None, kappa=None, zeta=None, l0=None, alpha=None, h=1e-3, base_step=1e-2, levels=4, rel_tolerance=1e-6))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        name: &str,
        q: Option<f64>,
        kappa: Option<f64>,
        zeta: Option<f64>,
        l0: Option<f64>,
        alpha: Option<f64>,
        h: f64,
        base_step: f64,
        levels: usize,
        rel_tolerance: f64,
    ) -> PyResult<Self> {
        let need = |v: Option<f64>, what: &str| v.ok_or_else(|| PyValueError::new_err(format!("{name} needs {what}=")));
        let kind = match name {
            "classical" => DerivativeKind::Classical,
            "q" => DerivativeKind::QDeformed(qp(need(q, "q")?)?),
            "kappa" => DerivativeKind::Kaniadakis(kp(need(kappa, "kappa")?)?),
            "hausdorff" => DerivativeKind::Hausdorff(hp(need(zeta, "zeta")?, need(l0, "l0")?)?),
            "conformable" => DerivativeKind::Conformable {
                alpha: need(alpha, "alpha")?,
            },
            "gl" => DerivativeKind::GrunwaldJumarie {
                alpha: need(alpha, "alpha")?,
                h,
            },
            "yang" => DerivativeKind::YangLfd {
                alpha: need(alpha, "alpha")?,
                l0: need(l0, "l0")?,
            },
            other => return Err(PyValueError::new_err(format!("unknown operator {other:?}"))),
        };
        kind.validate().map_err(py_err)?;
        let settings = DiffSettings::new(base_step, levels, rel_tolerance).map_err(py_err)?;
        Ok(Self { kind, settings })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Closed-form value at each point of `xs`.
    fn apply(&self, py: Python<'_>, f: &PyFunction, xs: Vec<f64>) -> PyResult<Vec<f64>> {
        py.detach(|| {
            xs.iter()
                .map(|&x| self.kind.apply(&f.inner, x, &self.settings))
                .collect::<Result<_, _>>()
        })
        .map_err(py_err)
    }

    /// Limit-definition value at each point of `xs`.
    fn apply_limit(&self, py: Python<'_>, f: &PyFunction, xs: Vec<f64>) -> PyResult<Vec<f64>> {
        let out = py.detach(|| {
            xs.iter()
                .map(|&x| self.kind.apply_limit(&f.inner, x, &self.settings))
                .collect::<Option<Result<Vec<f64>, Error>>>()
        });
        match out {
            Some(r) => r.map_err(py_err),
            None => Err(PyValueError::new_err(format!(
                "the {} operator has no limit form",
                self.kind.name()
            ))),
        }
    }

    /// Integrates the eigen-equation on `[start, stop]` and compares with its closed form.
    #[pyo3(signature = (start, stop, points, tol=1e-10))]
    fn solve_eigen<'py>(
        &self,
        py: Python<'py>,
        start: f64,
        stop: f64,
        points: usize,
        tol: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let report = py
            .detach(|| eigen::EigenProblem::new(self.kind, (start, stop), points).and_then(|p| p.solve(tol)))
            .map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("max_rel_residual", report.max_rel_residual)?;
        d.set_item("rms_rel_residual", report.rms_rel_residual)?;
        let grid: Vec<(f64, f64, f64)> = report.grid.iter().map(|s| (s.x, s.numeric, s.closed_form)).collect();
        d.set_item("grid", grid)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Operator({:?})", self.kind)
    }
}

/// Runs the built-in invariant suite; returns `(passed, failed, report)`.
#[pyfunction]
fn selftest(py: Python<'_>) -> (usize, usize, String) {
    let summary = py.detach(deformcalc::selftest::run);
    (summary.passed(), summary.failed(), summary.to_string())
}

#[pymodule]
fn pydeformcalc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(q_exp, m)?)?;
    m.add_function(wrap_pyfunction!(q_log, m)?)?;
    m.add_function(wrap_pyfunction!(q_sum, m)?)?;
    m.add_function(wrap_pyfunction!(q_difference, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_exp, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_log, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(ln_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(mittag_leffler, m)?)?;
    m.add_function(wrap_pyfunction!(balankin_exp, m)?)?;
    m.add_function(wrap_pyfunction!(q_from_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_from_q, m)?)?;
    m.add_function(wrap_pyfunction!(first_order_agreement, m)?)?;
    m.add_function(wrap_pyfunction!(expand_hausdorff_prefactor, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(rl_power_rule, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    m.add_class::<PyFunction>()?;
    m.add_class::<PyOperator>()?;
    Ok(())
}
