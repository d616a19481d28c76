//! Gamma, generalized binomial coefficients, Mittag-Leffler and the stretched exponentials.

use std::f64::consts::PI;

use crate::algebra::CLASSICAL_EPS;
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
// published coefficients, kept digit for digit
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    LANCZOS_COEF[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEF[0], |acc, (i, c)| acc + c / (z + i as f64 + 1.0))
}

fn check_pole(x: f64) -> Result<()> {
    if x <= 0.0 && (x - x.round()).abs() < CLASSICAL_EPS {
        return Err(Error::Pole(x));
    }
    Ok(())
}

/// Gamma function. Exact factorials at integers up to 171, Lanczos
/// approximation (g = 7, n = 9) elsewhere for `x >= 0.5`,
/// reflection `Γ(x) Γ(1-x) = π / sin(πx)` below that.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("gamma", "NaN argument"));
    }
    check_pole(x)?;
    if (1.0..=171.0).contains(&x) && x == x.trunc() {
        return Ok((2..x as u32).fold(1.0, |acc, k| acc * k as f64));
    }
    if x < 0.5 {
        return Ok(PI / ((PI * x).sin() * gamma(1.0 - x)?));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split t^(z+1/2) so it does not overflow before e^{-t} brings it back down
    let half = t.powf(0.5 * (z + 0.5));
    Ok((2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(z))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("ln_gamma", format!("argument {x} must be positive")));
    }
    if x < 0.5 {
        // Γ(x) = Γ(x+1)/x keeps the Lanczos branch in range
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// Generalized binomial coefficient `C(α, k)` via the falling-factorial product,
/// which is defined for every real `α`.
pub fn gen_binomial(alpha: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (alpha - j as f64) / (j as f64 + 1.0))
}

/// Truncation policy for the Mittag-Leffler power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlSeriesConfig {
    rel_tolerance: f64,
    max_terms: usize,
}

impl MlSeriesConfig {
    pub const MAX_REL_TOLERANCE: f64 = 1e-4;
    pub const MIN_TERMS: usize = 50;

    pub fn new(rel_tolerance: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tolerance > 0.0 && rel_tolerance <= Self::MAX_REL_TOLERANCE) {
            return Err(Error::invalid("rel_tolerance", rel_tolerance, "must lie in (0, 1e-4]"));
        }
        if max_terms < Self::MIN_TERMS {
            return Err(Error::invalid("max_terms", max_terms as f64, "must be at least 50"));
        }
        Ok(Self {
            rel_tolerance,
            max_terms,
        })
    }

    pub fn rel_tolerance(&self) -> f64 {
        self.rel_tolerance
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for MlSeriesConfig {
    fn default() -> Self {
        Self {
            rel_tolerance: 1e-16,
            max_terms: 2000,
        }
    }
}

/// Declared argument domain of the series evaluation.
pub const ML_SERIES_DOMAIN: f64 = 10.0;

/// Terms larger than the result by this factor leave fewer than four
/// significant digits after cancellation.
const ML_CANCELLATION_LIMIT: f64 = 1e12;

/// One-parameter Mittag-Leffler function `E_α(z) = Σ z^k / Γ(αk + 1)`.
///
/// Terms are formed in log space so that neither `z^k` nor `Γ(αk+1)` overflows.
/// Returns [`Error::Convergence`] when `max_terms` runs out, or when an
/// alternating series cancels so badly that the sum has no trustworthy digits.
pub fn mittag_leffler(z: f64, alpha: f64, cfg: &MlSeriesConfig) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid("alpha", alpha, "must be positive"));
    }
    if !(z.abs() <= ML_SERIES_DOMAIN) {
        return Err(Error::domain(
            "mittag_leffler",
            format!("|z| = {} exceeds the series domain {ML_SERIES_DOMAIN}", z.abs()),
        ));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let ln_abs_z = z.abs().ln();
    let negative = z < 0.0;
    let mut sum = 1.0;
    let mut largest: f64 = 1.0;
    let mut small_run = 0;
    for k in 1..cfg.max_terms {
        let kf = k as f64;
        let magnitude = (kf * ln_abs_z - ln_gamma(alpha * kf + 1.0)?).exp();
        let term = if negative && k % 2 == 1 { -magnitude } else { magnitude };
        sum += term;
        largest = largest.max(magnitude);
        if magnitude < cfg.rel_tolerance * sum.abs() {
            small_run += 1;
            if small_run == 2 {
                if largest > ML_CANCELLATION_LIMIT * sum.abs() {
                    return Err(Error::Convergence {
                        op: "mittag_leffler (cancellation)",
                        terms: k + 1,
                    });
                }
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Convergence {
        op: "mittag_leffler",
        terms: cfg.max_terms,
    })
}

/// Stretched exponential `e^{x^α}` for `x >= 0`.
pub fn stretched_exp(x: f64, alpha: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("stretched_exp", format!("x = {x} must be non-negative")));
    }
    Ok(x.powf(alpha).exp())
}

/// Scaling exponent `ζ` and lower cutoff `l₀` of a fractal continuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HausdorffParams {
    zeta: f64,
    l0: f64,
}

impl HausdorffParams {
    pub fn new(zeta: f64, l0: f64) -> Result<Self> {
        if !zeta.is_finite() {
            return Err(Error::invalid("zeta", zeta, "must be finite"));
        }
        if !(l0 > 0.0) || !l0.is_finite() {
            return Err(Error::invalid("l0", l0, "must be positive and finite"));
        }
        Ok(Self { zeta, l0 })
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn l0(&self) -> f64 {
        self.l0
    }

    /// `x / l₀ + 1`, failing at or below the cutoff `x = -l₀`.
    pub fn scaled(&self, op: &'static str, x: f64) -> Result<f64> {
        let s = x / self.l0 + 1.0;
        if !(s > 0.0) {
            return Err(Error::domain(op, format!("x = {x} must exceed -l0 = {}", -self.l0)));
        }
        Ok(s)
    }

    /// Hausdorff prefactor `(x/l₀ + 1)^{1-ζ}`.
    pub fn prefactor(&self, op: &'static str, x: f64) -> Result<f64> {
        Ok(self.scaled(op, x)?.powf(1.0 - self.zeta))
    }
}

/// Balankin stretched exponential `exp((l₀/ζ) (x/l₀ + 1)^ζ)`.
pub fn balankin_exp(x: f64, hp: &HausdorffParams) -> Result<f64> {
    if hp.zeta.abs() < CLASSICAL_EPS {
        return Err(Error::domain("balankin_exp", "zeta must be non-zero"));
    }
    let s = hp.scaled("balankin_exp", x)?;
    Ok((hp.l0 / hp.zeta * s.powf(hp.zeta)).exp())
}
