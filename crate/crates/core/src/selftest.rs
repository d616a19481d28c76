//! Built-in invariant suite: eigen residuals, mapping identities, classical
//! reductions and the special-function identities, each reported as pass/fail.

use std::fmt;

use crate::algebra::{kappa_exp, q_exp, q_log, KappaParam, QParam};
use crate::deriv::{
    classical_derivative, conformable_derivative, gl_jumarie_derivative, hausdorff_derivative, kaniadakis_derivative,
    q_derivative, rl_power_rule, DerivativeKind, DiffSettings,
};
use crate::eigen::{conformable_eigenfunction, linspace, solve_hausdorff_eigen, solve_q_eigen};
use crate::function::RealFunction;
use crate::mapping::{first_order_agreement, kappa_expansion, q_from_zeta, yang_hausdorff_check, zeta_from_q};
use crate::special::{balankin_exp, gamma, mittag_leffler, HausdorffParams, MlSeriesConfig};

/// Replaceable pieces of the library, so a test build can inject a fault and
/// confirm the suite catches it.
#[derive(Debug, Clone, Copy)]
pub struct Hooks {
    pub q_exp: fn(f64, QParam) -> f64,
}

impl Default for Hooks {
    fn default() -> Self {
        Self { q_exp }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub checks: Vec<CheckOutcome>,
}

impl Summary {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        write!(f, "{} passed, {} failed", self.passed(), self.failed())
    }
}

type CheckResult = Result<String, String>;
type Check<'a> = (&'static str, Box<dyn Fn() -> CheckResult + 'a>);

fn ensure(ok: bool, detail: String) -> CheckResult {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn qp(v: f64) -> QParam {
    QParam::new(v).expect("finite literal")
}

fn kp(v: f64) -> KappaParam {
    KappaParam::new(v).expect("finite literal")
}

fn hp(z: f64, l0: f64) -> HausdorffParams {
    HausdorffParams::new(z, l0).expect("valid literal")
}

fn rel(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / b.abs().max(a.abs())
    }
}

/// Runs every check with the library's own implementations.
pub fn run() -> Summary {
    run_with(&Hooks::default())
}

pub fn run_with(hooks: &Hooks) -> Summary {
    let checks: Vec<Check<'_>> = vec![
        ("q round trip", Box::new(|| check_q_round_trip(hooks))),
        ("q-exponential cutoff", Box::new(|| check_cutoff(hooks))),
        ("q eigen residual", Box::new(|| check_q_operator_eigen(hooks))),
        ("q eigen ODE", Box::new(check_q_ode)),
        ("hausdorff eigen residual", Box::new(check_hausdorff_eigen)),
        ("hausdorff eigen ODE", Box::new(check_hausdorff_ode)),
        ("kappa eigen residual", Box::new(check_kappa_eigen)),
        ("conformable eigen residual", Box::new(check_conformable_eigen)),
        ("classical reductions", Box::new(check_reductions)),
        ("mapping limits and round trip", Box::new(check_mapping)),
        ("first-order agreement", Box::new(check_first_order)),
        ("yang/hausdorff ratio", Box::new(check_yang)),
        ("mittag-leffler identities", Box::new(check_ml)),
        ("gl power rule", Box::new(check_gl)),
        ("kappa expansion parity", Box::new(check_kappa_parity)),
        ("symbolic derivatives", Box::new(check_symbolic)),
    ];
    let checks = checks
        .into_iter()
        .map(|(name, check)| {
            let (passed, detail) = match check() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome { name, passed, detail }
        })
        .collect();
    Summary { checks }
}

fn check_q_round_trip(hooks: &Hooks) -> CheckResult {
    let mut worst: f64 = 0.0;
    for q in [0.3, 0.5, 0.7, 1.0, 1.3] {
        for x in linspace(-0.5, 2.0, 26) {
            if 1.0 + (1.0 - q) * x <= 0.01 {
                continue;
            }
            let back = q_log((hooks.q_exp)(x, qp(q)), qp(q)).map_err(|e| e.to_string())?;
            worst = worst.max((back - x).abs());
        }
    }
    ensure(worst <= 1e-10, format!("max |q_log(q_exp(x)) - x| = {worst:.3e}"))
}

fn check_cutoff(hooks: &Hooks) -> CheckResult {
    let outside = [-2.0, -3.0, -10.0];
    let values: Vec<f64> = outside.iter().map(|&x| (hooks.q_exp)(x, qp(0.5))).collect();
    ensure(
        values.iter().all(|&v| v == 0.0),
        format!("q_exp(x, 0.5) at x = {outside:?}: {values:?}"),
    )
}

fn check_q_operator_eigen(hooks: &Hooks) -> CheckResult {
    let s = DiffSettings::default();
    let mut worst: f64 = 0.0;
    for q in [0.3, 0.7, 1.2] {
        let qv = qp(q);
        let q_exp = hooks.q_exp;
        let f = RealFunction::from_fn(move |x| Ok(q_exp(x, qv)));
        // the grid crosses the support edge x = -1/(1-q) for q < 1
        let edge = if q < 1.0 { -1.0 / (1.0 - q) } else { f64::NEG_INFINITY };
        for x in linspace(-2.5, 1.0, 36) {
            if (x - edge).abs() < 4.0 * s.base_step() {
                continue;
            }
            let y = f.eval(x).map_err(|e| format!("q = {q}, x = {x}: {e}"))?;
            let d = q_derivative(&f, x, qv, &s).map_err(|e| format!("q = {q}, x = {x}: {e}"))?;
            worst = worst.max((d - y).abs() / y.abs().max(1.0));
        }
    }
    ensure(worst <= 1e-6, format!("max |D_q y - y| = {worst:.3e}"))
}

fn check_q_ode() -> CheckResult {
    let mut worst: f64 = 0.0;
    for q in [0.3, 0.7, 1.2] {
        let r = solve_q_eigen(qp(q), (0.0, 2.0), 41, 1e-10).map_err(|e| e.to_string())?;
        worst = worst.max(r.max_rel_residual);
    }
    ensure(worst <= 1e-7, format!("max relative residual {worst:.3e}"))
}

fn check_hausdorff_eigen() -> CheckResult {
    let s = DiffSettings::default();
    let mut worst: f64 = 0.0;
    for (z, l0) in [(0.4, 1.0), (0.9, 2.0)] {
        let h = hp(z, l0);
        let f = RealFunction::from_fn(move |x| balankin_exp(x, &h));
        for x in linspace(0.0, 2.0, 21) {
            let d = hausdorff_derivative(&f, x, &h, &s).map_err(|e| e.to_string())?;
            worst = worst.max(rel(d, f.eval(x).map_err(|e| e.to_string())?));
        }
    }
    ensure(worst <= 1e-6, format!("max relative residual {worst:.3e}"))
}

fn check_hausdorff_ode() -> CheckResult {
    let mut worst: f64 = 0.0;
    for (z, l0) in [(0.4, 1.0), (0.9, 2.0), (0.5, 1.0)] {
        let r = solve_hausdorff_eigen(&hp(z, l0), (0.0, 2.0), 41, 1e-10).map_err(|e| e.to_string())?;
        worst = worst.max(r.max_rel_residual);
    }
    ensure(worst <= 1e-7, format!("max relative residual {worst:.3e}"))
}

fn check_kappa_eigen() -> CheckResult {
    let s = DiffSettings::default();
    let mut worst: f64 = 0.0;
    for k in [0.3, 0.8] {
        let kv = kp(k);
        let f = RealFunction::from_fn(move |x| Ok(kappa_exp(x, kv)));
        for x in linspace(-1.0, 2.0, 31) {
            let d = kaniadakis_derivative(&f, x, kv, &s).map_err(|e| e.to_string())?;
            worst = worst.max(rel(d, kappa_exp(x, kv)));
        }
    }
    ensure(worst <= 1e-6, format!("max relative residual {worst:.3e}"))
}

fn check_conformable_eigen() -> CheckResult {
    let s = DiffSettings::default();
    let mut worst: f64 = 0.0;
    for a in [0.5, 0.8] {
        let f = RealFunction::from_fn(move |t| Ok(conformable_eigenfunction(t, a)));
        for t in linspace(0.1, 2.0, 20) {
            let d = conformable_derivative(&f, t, a, &s).map_err(|e| e.to_string())?;
            worst = worst.max(rel(d, conformable_eigenfunction(t, a)));
        }
    }
    ensure(worst <= 1e-6, format!("max relative residual {worst:.3e}"))
}

fn corpus() -> Vec<RealFunction> {
    ["x", "x^2", "sin(x)", "exp(x)"]
        .iter()
        .map(|s| RealFunction::parse(s).expect("corpus parses"))
        .collect()
}

fn check_reductions() -> CheckResult {
    let s = DiffSettings::default();
    let kinds = [
        DerivativeKind::QDeformed(qp(1.0)),
        DerivativeKind::Kaniadakis(kp(0.0)),
        DerivativeKind::Hausdorff(hp(1.0, 1.5)),
        DerivativeKind::Conformable { alpha: 1.0 },
        DerivativeKind::YangLfd { alpha: 1.0, l0: 1.5 },
    ];
    let mut worst: f64 = 0.0;
    for f in corpus() {
        for x in linspace(0.2, 2.0, 10) {
            let classical = classical_derivative(&f, x, &s).map_err(|e| e.to_string())?;
            for k in &kinds {
                let v = k.apply(&f, x, &s).map_err(|e| e.to_string())?;
                worst = worst.max(rel(v, classical));
            }
        }
    }
    ensure(worst <= 1e-8, format!("max relative deviation {worst:.3e}"))
}

fn check_mapping() -> CheckResult {
    let exact_one = q_from_zeta(&hp(1.0, 2.7)).q == 1.0;
    let exact_edge = zeta_from_q(qp(0.0), 2.7).map_err(|e| e.to_string())?.zeta == 1.0 - 2.7;
    let far = (q_from_zeta(&hp(0.4, 1e12)).q - 1.0).abs();
    let mut worst: f64 = 0.0;
    for z in linspace(-1.0, 1.5, 11) {
        for l0 in linspace(0.1, 10.0, 10) {
            let m = q_from_zeta(&hp(z, l0));
            let back = zeta_from_q(qp(m.q), l0).map_err(|e| e.to_string())?;
            worst = worst.max((back.zeta - z).abs() / l0.max(1.0));
        }
    }
    ensure(
        exact_one && exact_edge && far <= 1e-12 && worst <= 1e-15,
        format!("q(1, l0) == 1: {exact_one}; zeta(0, l0) == 1 - l0: {exact_edge}; |q - 1| at l0 = 1e12: {far:.1e}; round trip (scaled by l0) {worst:.1e}"),
    )
}

fn check_first_order() -> CheckResult {
    let mut worst: f64 = 0.0;
    for (z, l0) in [(0.3, 0.5), (0.5, 1.0), (0.8, 2.0)] {
        let h = hp(z, l0);
        for x in linspace(1e-4 * l0, 1e-2 * l0, 10) {
            let a = first_order_agreement(&h, x).map_err(|e| e.to_string())?;
            let c2x2 = q_from_zeta(&h).first_order_residual_bound * x * x;
            worst = worst.max(a.residual / c2x2);
        }
    }
    ensure(worst <= 1.1, format!("max residual / (|c2| x^2) = {worst:.4}"))
}

fn check_yang() -> CheckResult {
    let s = DiffSettings::default();
    let mut worst: f64 = 0.0;
    for a in [0.3, 0.5, 0.9] {
        let g = gamma(a + 1.0).map_err(|e| e.to_string())?;
        for f in corpus() {
            for x in linspace(0.1, 2.0, 5) {
                let r = yang_hausdorff_check(a, &hp(a, 1.0), &f, x, &s).map_err(|e| e.to_string())?;
                worst = worst.max(rel(r, g));
            }
        }
    }
    ensure(worst <= 1e-10, format!("max |ratio - Γ(α+1)| / Γ(α+1) = {worst:.3e}"))
}

fn check_ml() -> CheckResult {
    let cfg = MlSeriesConfig::default();
    let mut e1: f64 = 0.0;
    for x in linspace(-2.0, 2.0, 41) {
        e1 = e1.max(rel(mittag_leffler(x, 1.0, &cfg).map_err(|e| e.to_string())?, x.exp()));
    }
    let mut e2: f64 = 0.0;
    for x in linspace(0.0, 2.0, 21) {
        e2 = e2.max(rel(
            mittag_leffler(x * x, 2.0, &cfg).map_err(|e| e.to_string())?,
            x.cosh(),
        ));
    }
    ensure(
        e1 <= 1e-10 && e2 <= 1e-8,
        format!("E1 vs exp {e1:.2e}, E2 vs cosh {e2:.2e}"),
    )
}

fn check_gl() -> CheckResult {
    let mut worst: f64 = 0.0;
    for g in [0.5, 1.0, 2.0] {
        let f = RealFunction::from_fn(move |t: f64| Ok(t.powf(g)));
        for x in [0.5, 1.0, 2.0] {
            let exact = rl_power_rule(g, 0.5, x).map_err(|e| e.to_string())?;
            let v = gl_jumarie_derivative(&f, x, 0.5, 1e-3).map_err(|e| e.to_string())?;
            worst = worst.max(rel(v, exact));
        }
    }
    ensure(worst <= 1e-2, format!("max relative error at h = 1e-3: {worst:.3e}"))
}

fn check_kappa_parity() -> CheckResult {
    for k in [0.3, 0.8, 1.0] {
        let e = kappa_expansion(kp(k), 12).map_err(|e| e.to_string())?;
        if e.coefficients.iter().skip(1).step_by(2).any(|c| *c != 0.0) {
            return Err(format!("non-zero odd coefficient for kappa = {k}"));
        }
    }
    Ok("odd coefficients identically zero".into())
}

fn check_symbolic() -> CheckResult {
    let s = DiffSettings::default();
    let sources = [
        "x^3 - 2*x",
        "exp(-x^2/2)",
        "sin(x)*cos(2*x)",
        "ln(1 + x^2)",
        "sqrt(x)/(1 + x)",
        "x^x",
        "pow(x, 1.5)",
        "2^x",
    ];
    let mut worst: f64 = 0.0;
    for src in sources {
        let f = RealFunction::parse(src).map_err(|e| e.to_string())?;
        let numeric = RealFunction::from_fn({
            let f = f.clone();
            move |x| f.eval(x)
        });
        for x in [0.5, 1.0, 1.7] {
            let exact = f.exact_derivative(x).ok_or(format!("{src}: no symbolic derivative"))?;
            let exact = exact.map_err(|e| e.to_string())?;
            let approx = classical_derivative(&numeric, x, &s).map_err(|e| e.to_string())?;
            worst = worst.max((exact - approx).abs() / exact.abs().max(1.0));
        }
    }
    ensure(worst <= 1e-6, format!("max symbolic vs numeric deviation {worst:.3e}"))
}
