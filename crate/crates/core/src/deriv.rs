//! Deformed and local-fractional derivative operators.
//!
//! Each operator comes in closed form (prefactor times `f'`) and, where a
//! limit definition exists, as a Richardson-extrapolated limit quotient over a
//! geometric (step-halving) probe sequence.

use crate::algebra::{q_difference, KappaParam, QParam};
use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::special::{gamma, HausdorffParams};

/// Finite-difference policy for numerical limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffSettings {
    base_step: f64,
    richardson_levels: usize,
    rel_tolerance: f64,
}

impl DiffSettings {
    pub const MAX_LEVELS: usize = 6;

    pub fn new(base_step: f64, richardson_levels: usize, rel_tolerance: f64) -> Result<Self> {
        if !(base_step > 0.0) || !base_step.is_finite() {
            return Err(Error::invalid("base_step", base_step, "must be positive"));
        }
        if !(1..=Self::MAX_LEVELS).contains(&richardson_levels) {
            return Err(Error::invalid(
                "richardson_levels",
                richardson_levels as f64,
                "must lie in 1..=6",
            ));
        }
        if !(rel_tolerance > 0.0) {
            return Err(Error::invalid("rel_tolerance", rel_tolerance, "must be positive"));
        }
        Ok(Self {
            base_step,
            richardson_levels,
            rel_tolerance,
        })
    }

    pub fn base_step(&self) -> f64 {
        self.base_step
    }

    pub fn richardson_levels(&self) -> usize {
        self.richardson_levels
    }

    pub fn rel_tolerance(&self) -> f64 {
        self.rel_tolerance
    }

    fn steps(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.richardson_levels).map(|n| self.base_step / f64::from(1u32 << n))
    }
}

impl Default for DiffSettings {
    fn default() -> Self {
        Self {
            base_step: 1e-2,
            richardson_levels: 4,
            rel_tolerance: 1e-6,
        }
    }
}

/// Richardson extrapolation of estimates taken at steps `h, h/2, h/4, ...`
/// whose error expands in powers `h^p, h^{2p}, h^{3p}, ...`.
pub fn richardson(estimates: &[f64], p: u32) -> f64 {
    let mut table = estimates.to_vec();
    for j in 1..table.len() {
        let factor = 2f64.powi((p as usize * j) as i32) - 1.0;
        for i in (j..table.len()).rev() {
            table[i] += (table[i] - table[i - 1]) / factor;
        }
    }
    *table.last().expect("at least one estimate")
}

fn one_sided_limit<F>(settings: &DiffSettings, mut quotient: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let estimates = settings.steps().map(&mut quotient).collect::<Result<Vec<_>>>()?;
    Ok(richardson(&estimates, 1))
}

/// Which operator to apply, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeKind {
    Classical,
    QDeformed(QParam),
    Kaniadakis(KappaParam),
    Hausdorff(HausdorffParams),
    Conformable {
        alpha: f64,
    },
    /// Grünwald-Letnikov sum with lower terminal 0; the term count is `floor(x/h)`.
    GrunwaldJumarie {
        alpha: f64,
        h: f64,
    },
    YangLfd {
        alpha: f64,
        l0: f64,
    },
}

fn check_order(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("alpha", alpha, "must lie in (0, 1]"))
    }
}

impl DerivativeKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DerivativeKind::Conformable { alpha } => check_order(alpha),
            DerivativeKind::GrunwaldJumarie { alpha, h } => {
                check_order(alpha)?;
                if h > 0.0 && h.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid("h", h, "must be positive"))
                }
            }
            DerivativeKind::YangLfd { alpha, l0 } => {
                check_order(alpha)?;
                HausdorffParams::new(alpha, l0).map(|_| ())
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DerivativeKind::Classical => "classical",
            DerivativeKind::QDeformed(_) => "q",
            DerivativeKind::Kaniadakis(_) => "kappa",
            DerivativeKind::Hausdorff(_) => "hausdorff",
            DerivativeKind::Conformable { .. } => "conformable",
            DerivativeKind::GrunwaldJumarie { .. } => "gl",
            DerivativeKind::YangLfd { .. } => "yang",
        }
    }

    /// Applies the operator in its closed form (the GL sum has only one form).
    pub fn apply(&self, f: &RealFunction, x: f64, s: &DiffSettings) -> Result<f64> {
        self.validate()?;
        match *self {
            DerivativeKind::Classical => f.derivative(x, s),
            DerivativeKind::QDeformed(q) => q_derivative(f, x, q, s),
            DerivativeKind::Kaniadakis(k) => kaniadakis_derivative(f, x, k, s),
            DerivativeKind::Hausdorff(hp) => hausdorff_derivative(f, x, &hp, s),
            DerivativeKind::Conformable { alpha } => conformable_closed(f, x, alpha, s),
            DerivativeKind::GrunwaldJumarie { alpha, h } => gl_jumarie_derivative(f, x, alpha, h),
            DerivativeKind::YangLfd { alpha, l0 } => yang_lfd(f, x, alpha, l0, s),
        }
    }

    /// Applies the operator through its limit definition, where it has one.
    pub fn apply_limit(&self, f: &RealFunction, x: f64, s: &DiffSettings) -> Option<Result<f64>> {
        if let Err(e) = self.validate() {
            return Some(Err(e));
        }
        match *self {
            DerivativeKind::Classical => Some(classical_derivative(f, x, s)),
            DerivativeKind::QDeformed(q) => Some(q_derivative_quotient(f, x, q, s)),
            DerivativeKind::Hausdorff(hp) => Some(hausdorff_derivative_limit(f, x, &hp, s)),
            DerivativeKind::Conformable { alpha } => Some(conformable_derivative(f, x, alpha, s)),
            _ => None,
        }
    }
}

/// Central difference with Richardson extrapolation over `richardson_levels` halvings.
pub fn classical_derivative(f: &RealFunction, x: f64, s: &DiffSettings) -> Result<f64> {
    let estimates = s
        .steps()
        .map(|h| Ok((f.eval(x + h)? - f.eval(x - h)?) / (2.0 * h)))
        .collect::<Result<Vec<_>>>()?;
    Ok(richardson(&estimates, 2))
}

/// Borges q-derivative `[1 + (1-q) x] f'(x)`.
pub fn q_derivative(f: &RealFunction, x: f64, q: QParam, s: &DiffSettings) -> Result<f64> {
    let df = f.derivative(x, s)?;
    if q.is_classical() {
        return Ok(df);
    }
    Ok((1.0 + q.deformation() * x) * df)
}

/// Limit form `lim_{y→x} (f(x) - f(y)) / (x ⊖_q y)` with `y = x - h 2^{-n}`.
pub fn q_derivative_quotient(f: &RealFunction, x: f64, q: QParam, s: &DiffSettings) -> Result<f64> {
    let fx = f.eval(x)?;
    one_sided_limit(s, |h| {
        let y = x - h;
        Ok((fx - f.eval(y)?) / q_difference(x, y, q)?)
    })
}

/// Hausdorff derivative `(x/l₀ + 1)^{1-ζ} f'(x)`.
pub fn hausdorff_derivative(f: &RealFunction, x: f64, hp: &HausdorffParams, s: &DiffSettings) -> Result<f64> {
    let prefactor = hp.prefactor("hausdorff_derivative", x)?;
    Ok(prefactor * f.derivative(x, s)?)
}

/// Quotient `(f(x') - f(x)) / (x'^ζ - x^ζ)` with `x' → x` from above; equals
/// `x^{1-ζ} f'(x) / ζ` for differentiable `f`.
pub fn hausdorff_quotient(f: &RealFunction, x: f64, zeta: f64, s: &DiffSettings) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("hausdorff_quotient", format!("x = {x} must be positive")));
    }
    if zeta == 0.0 || !zeta.is_finite() {
        return Err(Error::invalid("zeta", zeta, "must be finite and non-zero"));
    }
    let fx = f.eval(x)?;
    let x_pow = x.powf(zeta);
    one_sided_limit(s, |h| {
        // x'^ζ - x^ζ = x^ζ (exp(ζ ln(1 + h/x)) - 1), free of cancellation
        let measure = x_pow * (zeta * (h / x).ln_1p()).exp_m1();
        Ok((f.eval(x + h)? - fx) / measure)
    })
}

/// Limit form of the Hausdorff derivative: the fractal-measure quotient taken in
/// the shifted coordinate `u = x + l₀`, rescaled by `ζ l₀^{ζ-1}`.
pub fn hausdorff_derivative_limit(f: &RealFunction, x: f64, hp: &HausdorffParams, s: &DiffSettings) -> Result<f64> {
    hp.scaled("hausdorff_derivative_limit", x)?;
    let (zeta, l0) = (hp.zeta(), hp.l0());
    if (zeta - 1.0).abs() < crate::algebra::CLASSICAL_EPS {
        return classical_derivative(f, x, s);
    }
    let shifted = f.compose_affine(1.0, -l0);
    Ok(zeta * l0.powf(zeta - 1.0) * hausdorff_quotient(&shifted, x + l0, zeta, s)?)
}

/// Kaniadakis κ-derivative `sqrt(1 + κ²x²) f'(x)`.
pub fn kaniadakis_derivative(f: &RealFunction, x: f64, kappa: KappaParam, s: &DiffSettings) -> Result<f64> {
    let df = f.derivative(x, s)?;
    if kappa.is_classical() {
        return Ok(df);
    }
    Ok(1f64.hypot(kappa.value() * x) * df)
}

fn conformable_domain(t: f64, alpha: f64) -> Result<()> {
    check_order(alpha)?;
    if !(t > 0.0) {
        return Err(Error::domain(
            "conformable_derivative",
            format!("t = {t} must be positive"),
        ));
    }
    Ok(())
}

/// Conformable derivative as the limit `(f(t + ε t^{1-α}) - f(t)) / ε`.
pub fn conformable_derivative(f: &RealFunction, t: f64, alpha: f64, s: &DiffSettings) -> Result<f64> {
    conformable_domain(t, alpha)?;
    let ft = f.eval(t)?;
    let stretch = t.powf(1.0 - alpha);
    one_sided_limit(s, |eps| Ok((f.eval(t + eps * stretch)? - ft) / eps))
}

/// Conformable derivative of a differentiable function, `t^{1-α} f'(t)`.
pub fn conformable_closed(f: &RealFunction, t: f64, alpha: f64, s: &DiffSettings) -> Result<f64> {
    conformable_domain(t, alpha)?;
    Ok(t.powf(1.0 - alpha) * f.derivative(t, s)?)
}

/// Alternating Grünwald weights `(-1)^k C(α, k)` for `k = 0..=n`.
pub fn gl_weights(alpha: f64, n: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n + 1);
    let mut cur = 1.0;
    w.push(cur);
    for k in 1..=n {
        cur *= (k as f64 - 1.0 - alpha) / k as f64;
        w.push(cur);
    }
    w
}

fn gl_check(x: f64, alpha: f64, h: f64) -> Result<usize> {
    check_order(alpha)?;
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::invalid("h", h, "must be positive"));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(
            "gl_jumarie_derivative",
            format!("x = {x} must be non-negative"),
        ));
    }
    // the small bias keeps x = n h from truncating to n - 1
    Ok((x / h * (1.0 + 1e-12)).floor() as usize)
}

// x - k h, with the rounding overshoot past the lower terminal removed
fn lattice_point(x: f64, k: usize, h: f64) -> f64 {
    (x - k as f64 * h).max(0.0)
}

/// Grünwald-Letnikov sum `h^{-α} Σ_{k=0}^{N} (-1)^k C(α,k) f(x - k h)`, `N = floor(x/h)`.
pub fn gl_jumarie_derivative(f: &RealFunction, x: f64, alpha: f64, h: f64) -> Result<f64> {
    let n = gl_check(x, alpha, h)?;
    let weights = gl_weights(alpha, n);
    let mut sum = 0.0;
    for (k, w) in weights.iter().enumerate() {
        sum += w * f.eval(lattice_point(x, k, h))?;
    }
    Ok(sum * h.powf(-alpha))
}

/// GL sum applied to `f - f(0)`, so constants have zero derivative (Caputo-style).
pub fn caputo_gl_derivative(f: &RealFunction, x: f64, alpha: f64, h: f64) -> Result<f64> {
    let n = gl_check(x, alpha, h)?;
    let f0 = f.eval(0.0)?;
    let weights = gl_weights(alpha, n);
    let mut sum = 0.0;
    for (k, w) in weights.iter().enumerate() {
        sum += w * (f.eval(lattice_point(x, k, h))? - f0);
    }
    Ok(sum * h.powf(-alpha))
}

/// Power rule `D^α x^γ = Γ(γ+1) x^{γ-α} / Γ(γ-α+1)`.
pub fn rl_power_rule(gamma_exp: f64, alpha: f64, x: f64) -> Result<f64> {
    if !(gamma_exp > -1.0) {
        return Err(Error::invalid("gamma_exp", gamma_exp, "must exceed -1"));
    }
    if !(x > 0.0) {
        return Err(Error::domain("rl_power_rule", format!("x = {x} must be positive")));
    }
    Ok(gamma(gamma_exp + 1.0)? * x.powf(gamma_exp - alpha) / gamma(gamma_exp - alpha + 1.0)?)
}

/// Yang local fractional derivative under `Δ^α ≅ Γ(α+1) Δ`:
/// `Γ(α+1) (x/l₀ + 1)^{1-α} f'(x)`.
pub fn yang_lfd(f: &RealFunction, x: f64, alpha: f64, l0: f64, s: &DiffSettings) -> Result<f64> {
    check_order(alpha)?;
    let hp = HausdorffParams::new(alpha, l0)?;
    let prefactor = hp.prefactor("yang_lfd", x)?;
    Ok(gamma(alpha + 1.0)? * prefactor * f.derivative(x, s)?)
}

/// Truncated fractional Taylor sum `Σ_{k<terms} h^{αk} f^{(αk)}(x) / Γ(αk+1)`,
/// given `f^{(αk)}(x)` in `derivs[k]`.
pub fn jumarie_taylor_eval(derivs: &[f64], h: f64, alpha: f64, terms: usize) -> Result<f64> {
    if terms == 0 || terms > derivs.len() {
        return Err(Error::invalid(
            "terms",
            terms as f64,
            "must be at least 1 and at most the number of supplied derivatives",
        ));
    }
    derivs[..terms]
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let order = alpha * k as f64;
            Ok(h.powf(order) * d / gamma(order + 1.0)?)
        })
        .sum()
}
