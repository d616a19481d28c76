//! q- and κ-deformed arithmetic and the deformed exponential/logarithm pairs.
//!
//! Every function falls back to its classical form when the deformation is
//! within [`CLASSICAL_EPS`] of the undeformed value, so exponents such as
//! `1/(1-q)` are never formed near the singular point.

use crate::error::{Error, Result};

/// Deformations closer than this to the classical value are treated as classical.
pub const CLASSICAL_EPS: f64 = 1e-12;

/// Tsallis entropic index `q`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QParam(f64);

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::invalid("q", q, "must be finite"));
        }
        Ok(Self(q))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - q`, the quantity every deformed formula is written in.
    pub fn deformation(self) -> f64 {
        1.0 - self.0
    }

    pub fn is_classical(self) -> bool {
        self.deformation().abs() < CLASSICAL_EPS
    }
}

/// Kaniadakis deformation parameter `κ`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct KappaParam(f64);

impl KappaParam {
    pub fn new(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::invalid("kappa", kappa, "must be finite"));
        }
        Ok(Self(kappa))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_classical(self) -> bool {
        self.0.abs() < CLASSICAL_EPS
    }
}

/// Deformed difference `x ⊖_q y = (x - y) / (1 + (1-q) y)`.
pub fn q_difference(x: f64, y: f64, q: QParam) -> Result<f64> {
    if q.is_classical() {
        return Ok(x - y);
    }
    let singular = 1.0 / (q.value() - 1.0);
    if (y - singular).abs() < CLASSICAL_EPS {
        return Err(Error::domain(
            "q_difference",
            format!("y = {y} lies on the singular line y = 1/(q-1) for q = {}", q.value()),
        ));
    }
    Ok((x - y) / (1.0 + q.deformation() * y))
}

/// Deformed sum `x ⊕_q y = x + y + (1-q) x y`; inverse of [`q_difference`].
pub fn q_sum(x: f64, y: f64, q: QParam) -> f64 {
    if q.is_classical() {
        return x + y;
    }
    x + y + q.deformation() * x * y
}

/// q-exponential `[1 + (1-q) x]^{1/(1-q)}`, cut off to zero where the base is non-positive.
pub fn q_exp(x: f64, q: QParam) -> f64 {
    if q.is_classical() {
        return x.exp();
    }
    let d = q.deformation();
    let shift = d * x;
    if 1.0 + shift <= 0.0 {
        return 0.0;
    }
    (shift.ln_1p() / d).exp()
}

/// q-logarithm `(x^{1-q} - 1) / (1-q)`, the inverse of [`q_exp`] on its support.
pub fn q_log(x: f64, q: QParam) -> Result<f64> {
    if x <= 0.0 || x.is_nan() {
        return Err(Error::domain("q_log", format!("argument {x} must be positive")));
    }
    if q.is_classical() {
        return Ok(x.ln());
    }
    let d = q.deformation();
    Ok((d * x.ln()).exp_m1() / d)
}

/// κ-exponential `(κx + sqrt(1 + κ²x²))^{1/κ}`, even in κ.
pub fn kappa_exp(x: f64, kappa: KappaParam) -> f64 {
    if kappa.is_classical() {
        return x.exp();
    }
    let k = kappa.value();
    // ln(κx + sqrt(1 + κ²x²)) = asinh(κx)
    ((k * x).asinh() / k).exp()
}

/// κ-logarithm `(x^κ - x^{-κ}) / (2κ)`.
pub fn kappa_log(x: f64, kappa: KappaParam) -> Result<f64> {
    if x <= 0.0 || x.is_nan() {
        return Err(Error::domain("kappa_log", format!("argument {x} must be positive")));
    }
    if kappa.is_classical() {
        return Ok(x.ln());
    }
    let k = kappa.value();
    Ok((k * x.ln()).sinh() / k)
}
