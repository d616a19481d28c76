//! The bridge between the q-deformed derivative and the Hausdorff derivative.
//!
//! Expanding the Hausdorff prefactor `(1 + x/l₀)^{1-ζ}` binomially and matching
//! the linear term with the q-prefactor `1 + (1-q) x` gives
//! `1 - q = (1 - ζ) / l₀`. The q-derivative is therefore the first-order
//! truncation of the Hausdorff derivative; the gap between the two is
//! dominated by the quadratic coefficient `c₂ = (1-ζ)(-ζ) / (2 l₀²)`.
//!
//! Also here: the even-power expansion of the Kaniadakis prefactor and the
//! identifications of the conformable and Yang derivatives with the Hausdorff form.

use crate::algebra::{KappaParam, QParam};
use crate::deriv::{
    conformable_closed, conformable_derivative, hausdorff_derivative, q_derivative, yang_lfd, DiffSettings,
};
use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::special::{gamma, gen_binomial, HausdorffParams};

/// Truncated power series `Σ c_k (x - x₀)^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion {
    pub coefficients: Vec<f64>,
    pub expansion_point: f64,
}

impl SeriesExpansion {
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Partial sum at `x` using every stored coefficient.
    pub fn eval(&self, x: f64) -> f64 {
        let dx = x - self.expansion_point;
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * dx + c)
    }
}

/// A `(q, ζ, l₀)` triple satisfying `1 - q = (1 - ζ)/l₀`, with the magnitude
/// of the first neglected coefficient `|c₂|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappingResult {
    pub q: f64,
    pub zeta: f64,
    pub l0: f64,
    pub first_order_residual_bound: f64,
}

fn second_order_coefficient(zeta: f64, l0: f64) -> f64 {
    (1.0 - zeta) * (-zeta) / (2.0 * l0 * l0)
}

/// Coefficients `c_k = C(1-ζ, k) l₀^{-k}` of the Hausdorff prefactor in powers of `x`.
pub fn expand_hausdorff_prefactor(hp: &HausdorffParams, order: usize) -> Result<SeriesExpansion> {
    if order < 1 {
        return Err(Error::invalid("order", order as f64, "must be at least 1"));
    }
    let exponent = 1.0 - hp.zeta();
    let inv_l0 = hp.l0().recip();
    let coefficients = (0..=order)
        .map(|k| gen_binomial(exponent, k as u32) * inv_l0.powi(k as i32))
        .collect();
    Ok(SeriesExpansion {
        coefficients,
        expansion_point: 0.0,
    })
}

/// Entropic index matched to a fractal continuum: `q = 1 - (1-ζ)/l₀`.
pub fn q_from_zeta(hp: &HausdorffParams) -> MappingResult {
    let (zeta, l0) = (hp.zeta(), hp.l0());
    MappingResult {
        q: 1.0 - (1.0 - zeta) / l0,
        zeta,
        l0,
        first_order_residual_bound: second_order_coefficient(zeta, l0).abs(),
    }
}

/// Scaling exponent matched to an entropic index: `ζ = 1 - l₀(1-q)`.
pub fn zeta_from_q(q: QParam, l0: f64) -> Result<MappingResult> {
    if !(l0 > 0.0) || !l0.is_finite() {
        return Err(Error::invalid("l0", l0, "must be positive and finite"));
    }
    let zeta = (-l0).mul_add(q.deformation(), 1.0);
    Ok(MappingResult {
        q: q.value(),
        zeta,
        l0,
        first_order_residual_bound: second_order_coefficient(zeta, l0).abs(),
    })
}

/// Hausdorff and q prefactors at one point, with the gap between them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderAgreement {
    pub hausdorff_prefactor: f64,
    pub q_prefactor: f64,
    pub residual: f64,
    /// `|c₂| x² (1 + ρ)` with `ρ = |x/l₀|`.
    pub bound: f64,
}

/// Compares `(1 + x/l₀)^{1-ζ}` with `1 + (1-q) x` for the matched `q`.
/// Requires the series regime `|x/l₀| < 1`.
pub fn first_order_agreement(hp: &HausdorffParams, x: f64) -> Result<FirstOrderAgreement> {
    let rho = (x / hp.l0()).abs();
    if !(rho < 1.0) {
        return Err(Error::domain(
            "first_order_agreement",
            format!("|x/l0| = {rho} is outside the series regime |x/l0| < 1"),
        ));
    }
    let mapping = q_from_zeta(hp);
    let exponent = 1.0 - hp.zeta();
    let u = x / hp.l0();
    let linear = (1.0 - mapping.q) * x;
    // P_H - 1 without cancellation
    let excess = (exponent * u.ln_1p()).exp_m1();
    Ok(FirstOrderAgreement {
        hausdorff_prefactor: 1.0 + excess,
        q_prefactor: 1.0 + linear,
        residual: (excess - linear).abs(),
        bound: mapping.first_order_residual_bound * x * x * (1.0 + rho),
    })
}

/// Operator-level form of the first-order statement: q-derivative (with the
/// matched `q`) against the Hausdorff derivative of the same function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorGap {
    pub q_value: f64,
    pub hausdorff_value: f64,
    pub gap: f64,
    /// `|c₂| x² |f'(x)| (1 + ρ)`.
    pub bound: f64,
}

pub fn q_hausdorff_gap(f: &RealFunction, x: f64, hp: &HausdorffParams, s: &DiffSettings) -> Result<OperatorGap> {
    let agreement = first_order_agreement(hp, x)?;
    let q = QParam::new(q_from_zeta(hp).q)?;
    let q_value = q_derivative(f, x, q, s)?;
    let hausdorff_value = hausdorff_derivative(f, x, hp, s)?;
    let df = f.derivative(x, s)?;
    Ok(OperatorGap {
        q_value,
        hausdorff_value,
        gap: (q_value - hausdorff_value).abs(),
        bound: agreement.bound * df.abs(),
    })
}

/// Coefficients of `(1 + κ²x²)^{1/2}` in powers of `x`: `c_{2m} = C(1/2, m) κ^{2m}`,
/// odd coefficients exactly zero.
pub fn kappa_expansion(kappa: KappaParam, order: usize) -> Result<SeriesExpansion> {
    if order < 2 {
        return Err(Error::invalid("order", order as f64, "must be at least 2"));
    }
    let k2 = kappa.value() * kappa.value();
    let coefficients = (0..=order)
        .map(|n| {
            if n % 2 == 1 {
                0.0
            } else {
                let m = (n / 2) as u32;
                gen_binomial(0.5, m) * k2.powi(m as i32)
            }
        })
        .collect();
    Ok(SeriesExpansion {
        coefficients,
        expansion_point: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformableHausdorffCheck {
    /// Conformable derivative of `g(t) = f(l₀(t-1))` at `t = 1 + x/l₀`.
    pub lhs: f64,
    /// `l₀ (1 + x/l₀)^{1-α} f'(x)`, the Hausdorff derivative with `ζ = α` scaled by `l₀`.
    pub rhs: f64,
    pub rel_diff: f64,
}

/// Changes variable `t = 1 + x/l₀` in the conformable derivative and compares
/// with the Hausdorff form; the two agree up to the constant `l₀ = dx/dt`.
pub fn conformable_hausdorff_check(
    alpha: f64,
    l0: f64,
    f: &RealFunction,
    x: f64,
    s: &DiffSettings,
) -> Result<ConformableHausdorffCheck> {
    let hp = HausdorffParams::new(alpha, l0)?;
    let t = hp.scaled("conformable_hausdorff_check", x)?;
    let g = f.compose_affine(l0, -l0);
    let lhs = if g.has_exact_derivative() {
        conformable_closed(&g, t, alpha, s)?
    } else {
        conformable_derivative(&g, t, alpha, s)?
    };
    let rhs = l0 * hausdorff_derivative(f, x, &hp, s)?;
    let diff = (lhs - rhs).abs();
    let rel_diff = if diff == 0.0 {
        0.0
    } else {
        diff / lhs.abs().max(rhs.abs())
    };
    Ok(ConformableHausdorffCheck { lhs, rhs, rel_diff })
}

/// `yang_lfd / hausdorff_derivative(ζ = α)`; equals `Γ(α+1)` for any `f` with `f'(x) ≠ 0`.
pub fn yang_hausdorff_check(
    alpha: f64,
    hp: &HausdorffParams,
    f: &RealFunction,
    x: f64,
    s: &DiffSettings,
) -> Result<f64> {
    let df = f.derivative(x, s)?;
    if df.abs() < 1e-14 {
        return Err(Error::Degenerate(format!(
            "f'({x}) = {df} vanishes; the ratio is undefined"
        )));
    }
    let matched = HausdorffParams::new(alpha, hp.l0())?;
    let yang = yang_lfd(f, x, alpha, hp.l0(), s)?;
    Ok(yang / hausdorff_derivative(f, x, &matched, s)?)
}

/// Dilatation constant `Γ(α+1)` relating the Yang and Hausdorff derivatives.
pub fn dilatation_constant(alpha: f64) -> Result<f64> {
    gamma(alpha + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn hp(z: f64, l0: f64) -> HausdorffParams {
        HausdorffParams::new(z, l0).unwrap()
    }

    fn s() -> DiffSettings {
        DiffSettings::default()
    }

    #[test]
    fn prefactor_expansion_examples() {
        let flat = expand_hausdorff_prefactor(&hp(1.0, 2.0), 6).unwrap();
        assert_eq!(flat.coefficients[0], 1.0);
        assert!(flat.coefficients[1..].iter().all(|&c| c == 0.0));
        let e = expand_hausdorff_prefactor(&hp(0.5, 1.0), 2).unwrap();
        assert_eq!(e.coefficients, vec![1.0, 0.5, -0.125]);
        assert_eq!(e.order(), 2);
        let e = expand_hausdorff_prefactor(&hp(0.5, 1.0), 20).unwrap();
        assert!((e.eval(0.5) - 1.5f64.sqrt()).abs() <= 1e-6);
        assert!(expand_hausdorff_prefactor(&hp(0.5, 1.0), 0).is_err());
    }

    #[test]
    fn prefactor_coefficients_follow_the_written_pattern() {
        for (z, l0) in [(0.3, 0.5), (0.8, 2.0), (-0.5, 1.3)] {
            let e = expand_hausdorff_prefactor(&hp(z, l0), 3).unwrap();
            assert_relative_eq!(e.coefficients[1], (1.0 - z) / l0, max_relative = 1e-15);
            assert_relative_eq!(
                e.coefficients[2],
                (1.0 - z) * (-z) / (2.0 * l0 * l0),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn mapping_limits() {
        assert_eq!(q_from_zeta(&hp(1.0, 3.7)).q, 1.0);
        let m = zeta_from_q(QParam::new(0.0).unwrap(), 2.5).unwrap();
        assert_eq!(m.zeta, 1.0 - 2.5);
        assert_eq!(q_from_zeta(&hp(1.0 - 2.5, 2.5)).q, 0.0);
        let far = q_from_zeta(&hp(0.3, 1e12));
        assert!((far.q - 1.0).abs() <= 1e-12);
        assert_eq!(zeta_from_q(QParam::new(1.0).unwrap(), 4.0).unwrap().zeta, 1.0);
        assert_eq!(zeta_from_q(QParam::new(0.0).unwrap(), 1.0).unwrap().zeta, 0.0);
        assert!(zeta_from_q(QParam::new(0.5).unwrap(), 0.0).is_err());
    }

    #[test]
    fn mapping_round_trip_example() {
        let m = zeta_from_q(QParam::new(0.63).unwrap(), 1.7).unwrap();
        let back = q_from_zeta(&hp(m.zeta, 1.7));
        assert!((back.q - 0.63).abs() <= 1e-15);
        assert_relative_eq!(
            m.first_order_residual_bound,
            (1.0 - m.zeta) * m.zeta.abs() / (2.0 * 1.7 * 1.7),
            max_relative = 1e-15
        );
    }

    #[test]
    fn first_order_examples() {
        let a = first_order_agreement(&hp(0.5, 1.0), 0.0).unwrap();
        assert_eq!(a.residual, 0.0);
        let a = first_order_agreement(&hp(0.5, 1.0), 1e-3).unwrap();
        assert!((a.residual - 1.25e-7).abs() <= 0.1 * 1.25e-7);
        assert!(a.residual <= a.bound);
        for x in [-0.5, 0.1, 0.9] {
            assert_eq!(first_order_agreement(&hp(1.0, 1.0), x).unwrap().residual, 0.0);
        }
        assert!(first_order_agreement(&hp(0.5, 1.0), 1.0).is_err());
        assert!(first_order_agreement(&hp(0.5, 2.0), -2.5).is_err());
    }

    #[test]
    fn first_order_residual_matches_direct_difference() {
        let h = hp(0.3, 0.5);
        let x = 0.2;
        let a = first_order_agreement(&h, x).unwrap();
        let direct = (1.0f64 + x / 0.5).powf(0.7) - (1.0 + (1.0 - q_from_zeta(&h).q) * x);
        assert_relative_eq!(a.residual, direct.abs(), max_relative = 1e-12);
    }

    #[test]
    fn kappa_expansion_examples() {
        let k1 = kappa_expansion(KappaParam::new(1.0).unwrap(), 8).unwrap();
        assert_eq!(k1.coefficients[0], 1.0);
        assert_eq!(k1.coefficients[2], 0.5);
        assert_eq!(k1.coefficients[4], -0.125);
        for c in k1.coefficients.iter().skip(1).step_by(2) {
            assert_eq!(c.to_bits(), 0.0f64.to_bits());
        }
        let k = kappa_expansion(KappaParam::new(0.3).unwrap(), 30).unwrap();
        assert!((k.eval(0.5) - (1.0f64 + 0.09 * 0.25).sqrt()).abs() < 1e-14);
        assert!(kappa_expansion(KappaParam::new(1.0).unwrap(), 1).is_err());
    }

    #[test]
    fn conformable_examples() {
        let id = RealFunction::parse("x").unwrap();
        let c = conformable_hausdorff_check(0.5, 1.0, &id, 3.0, &s()).unwrap();
        assert_relative_eq!(c.lhs, 2.0, max_relative = 1e-14);
        assert_relative_eq!(c.rhs, 2.0, max_relative = 1e-14);
        let sin = RealFunction::parse("sin(x)").unwrap();
        let c = conformable_hausdorff_check(1.0, 2.0, &sin, 0.4, &s()).unwrap();
        assert!(c.rel_diff <= 1e-10);
        assert_relative_eq!(c.lhs, 2.0 * 0.4f64.cos(), max_relative = 1e-12);
        let exp = RealFunction::parse("exp(x)").unwrap();
        assert!(conformable_hausdorff_check(0.7, 2.0, &exp, 1.0, &s()).unwrap().rel_diff <= 1e-8);
        // without an exact derivative the limit form is used
        let native = RealFunction::from_fn(|x: f64| Ok(x.exp()));
        assert!(
            conformable_hausdorff_check(0.7, 2.0, &native, 1.0, &s())
                .unwrap()
                .rel_diff
                <= 1e-8
        );
        assert!(conformable_hausdorff_check(0.7, 2.0, &exp, -2.0, &s()).is_err());
    }

    #[test]
    fn yang_examples() {
        let f = RealFunction::parse("exp(x)").unwrap();
        let r = yang_hausdorff_check(1.0, &hp(0.2, 1.0), &f, 0.3, &s()).unwrap();
        assert_relative_eq!(r, 1.0, max_relative = 1e-14);
        let r = yang_hausdorff_check(0.5, &hp(0.2, 1.0), &f, 0.3, &s()).unwrap();
        assert_relative_eq!(r, 0.886_226_925_452_758, max_relative = 1e-12);
        let flat = RealFunction::parse("cos(x)").unwrap();
        assert!(matches!(
            yang_hausdorff_check(0.5, &hp(0.2, 1.0), &flat, 0.0, &s()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn operator_gap_example() {
        let f = RealFunction::parse("sin(x)").unwrap();
        let g = q_hausdorff_gap(&f, 0.01, &hp(0.5, 1.0), &s()).unwrap();
        assert!(g.gap <= 1.1 * 0.125 * 1e-4 * 0.01f64.cos());
        assert!(g.gap <= g.bound);
    }
}
