//! Numerical verification that each deformed eigen-equation is solved by its
//! closed-form eigenfunction.
//!
//! Local operators are recast as ordinary ODEs `y' = y / P(x, y)` and
//! integrated; the fractional equation is checked by applying the GL sum to the
//! sampled Mittag-Leffler solution.

use crate::algebra::{kappa_exp, q_exp, KappaParam, QParam};
use crate::deriv::{caputo_gl_derivative, DerivativeKind};
use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::ode::integrate_ode;
use crate::special::{balankin_exp, ln_gamma, HausdorffParams, ML_SERIES_DOMAIN};

pub const MIN_GRID_POINTS: usize = 11;

/// An eigen-equation `D y = y` on `[x_start, x_end]` with `y(x_start) = y0`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenProblem {
    pub kind: DerivativeKind,
    pub domain: (f64, f64),
    pub y0: f64,
    pub grid_points: usize,
}

impl EigenProblem {
    /// Builds the problem with `y0` taken from the closed-form eigenfunction.
    pub fn new(kind: DerivativeKind, domain: (f64, f64), grid_points: usize) -> Result<Self> {
        check_grid(domain, grid_points)?;
        let y0 = match kind {
            DerivativeKind::QDeformed(q) => q_exp(domain.0, q),
            DerivativeKind::Kaniadakis(k) => kappa_exp(domain.0, k),
            DerivativeKind::Hausdorff(hp) => balankin_exp(domain.0, &hp)?,
            DerivativeKind::Conformable { alpha } => conformable_eigenfunction(domain.0, alpha),
            DerivativeKind::Classical => domain.0.exp(),
            DerivativeKind::GrunwaldJumarie { alpha, .. } => {
                MittagLefflerSeries::new(alpha, domain.1)?.eval(domain.0.powf(alpha))
            }
            DerivativeKind::YangLfd { .. } => {
                return Err(Error::invalid(
                    "kind",
                    f64::NAN,
                    "no eigen solver for the Yang derivative",
                ))
            }
        };
        Ok(Self {
            kind,
            domain,
            y0,
            grid_points,
        })
    }

    /// Solves (or, for the GL kind, verifies) the problem.
    pub fn solve(&self, tol: f64) -> Result<EigenReport> {
        let (domain, n) = (self.domain, self.grid_points);
        match self.kind {
            DerivativeKind::QDeformed(q) => solve_q_eigen(q, domain, n, tol),
            DerivativeKind::Hausdorff(hp) => solve_hausdorff_eigen(&hp, domain, n, tol),
            DerivativeKind::Kaniadakis(k) => solve_kappa_eigen(k, domain, n, tol),
            DerivativeKind::Conformable { alpha } => solve_conformable_eigen(alpha, domain, n, tol),
            DerivativeKind::Classical => {
                let closed = |x: f64| Ok(x.exp());
                solve_local(|_, y| y, closed, domain, self.y0, n, tol)
            }
            DerivativeKind::GrunwaldJumarie { alpha, h } => verify_fractional_eigen(alpha, domain, n, h),
            DerivativeKind::YangLfd { .. } => Err(Error::invalid(
                "kind",
                f64::NAN,
                "no eigen solver for the Yang derivative",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSample {
    pub x: f64,
    pub numeric: f64,
    pub closed_form: f64,
}

impl EigenSample {
    pub fn rel_residual(&self) -> f64 {
        let diff = (self.numeric - self.closed_form).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.closed_form.abs()
        }
    }
}

/// Residual statistics of a numerical solution against the claimed eigenfunction.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenReport {
    pub max_rel_residual: f64,
    pub rms_rel_residual: f64,
    pub grid: Vec<EigenSample>,
}

impl EigenReport {
    pub fn from_samples(grid: Vec<EigenSample>) -> Self {
        let residuals: Vec<f64> = grid.iter().map(EigenSample::rel_residual).collect();
        let max = residuals.iter().copied().fold(0.0, f64::max);
        let rms = (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len().max(1) as f64).sqrt();
        Self {
            max_rel_residual: max,
            rms_rel_residual: rms,
            grid,
        }
    }
}

fn check_grid(domain: (f64, f64), grid_points: usize) -> Result<()> {
    if !(domain.0 < domain.1) || !domain.0.is_finite() || !domain.1.is_finite() {
        return Err(Error::domain(
            "eigen",
            format!("invalid domain [{}, {}]", domain.0, domain.1),
        ));
    }
    if grid_points < MIN_GRID_POINTS {
        return Err(Error::invalid("grid_points", grid_points as f64, "must be at least 11"));
    }
    Ok(())
}

/// `n` evenly spaced points including both ends.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn solve_local<F, C>(
    rhs: F,
    closed: C,
    domain: (f64, f64),
    y0: f64,
    grid_points: usize,
    tol: f64,
) -> Result<EigenReport>
where
    F: Fn(f64, f64) -> f64,
    C: Fn(f64) -> Result<f64>,
{
    check_grid(domain, grid_points)?;
    let xs = linspace(domain.0, domain.1, grid_points);
    let sol = integrate_ode(rhs, domain, y0, tol, &xs)?;
    let grid = sol
        .points
        .into_iter()
        .map(|(x, numeric)| {
            Ok(EigenSample {
                x,
                numeric,
                closed_form: closed(x)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenReport::from_samples(grid))
}

/// Integrates `dy/dx = y^q` and compares with `q_exp(x, q)`.
pub fn solve_q_eigen(q: QParam, domain: (f64, f64), grid_points: usize, tol: f64) -> Result<EigenReport> {
    check_grid(domain, grid_points)?;
    let d = q.deformation();
    for x in [domain.0, domain.1] {
        if 1.0 + d * x <= 0.0 {
            return Err(Error::domain(
                "solve_q_eigen",
                format!("x = {x} lies outside the q-exponential support for q = {}", q.value()),
            ));
        }
    }
    let qv = q.value();
    solve_local(
        |_, y: f64| y.max(0.0).powf(qv),
        |x| Ok(q_exp(x, q)),
        domain,
        q_exp(domain.0, q),
        grid_points,
        tol,
    )
}

/// Integrates `y' = (x/l₀ + 1)^{ζ-1} y` and compares with the Balankin exponential.
pub fn solve_hausdorff_eigen(
    hp: &HausdorffParams,
    domain: (f64, f64),
    grid_points: usize,
    tol: f64,
) -> Result<EigenReport> {
    check_grid(domain, grid_points)?;
    hp.scaled("solve_hausdorff_eigen", domain.0)?;
    let y0 = balankin_exp(domain.0, hp)?;
    let (zeta, l0) = (hp.zeta(), hp.l0());
    solve_local(
        move |x, y| (x / l0 + 1.0).powf(zeta - 1.0) * y,
        |x| balankin_exp(x, hp),
        domain,
        y0,
        grid_points,
        tol,
    )
}

/// Integrates `y' = y / sqrt(1 + κ²x²)` and compares with the κ-exponential.
pub fn solve_kappa_eigen(kappa: KappaParam, domain: (f64, f64), grid_points: usize, tol: f64) -> Result<EigenReport> {
    let k = kappa.value();
    solve_local(
        move |x, y| y / 1f64.hypot(k * x),
        |x| Ok(kappa_exp(x, kappa)),
        domain,
        kappa_exp(domain.0, kappa),
        grid_points,
        tol,
    )
}

/// Conformable eigenfunction `e^{t^α/α}`.
pub fn conformable_eigenfunction(t: f64, alpha: f64) -> f64 {
    (t.powf(alpha) / alpha).exp()
}

/// Integrates `y' = t^{α-1} y` on `t > 0` and compares with `e^{t^α/α}`.
pub fn solve_conformable_eigen(alpha: f64, domain: (f64, f64), grid_points: usize, tol: f64) -> Result<EigenReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid("alpha", alpha, "must lie in (0, 1]"));
    }
    if !(domain.0 > 0.0) {
        return Err(Error::domain("solve_conformable_eigen", "domain must start at t > 0"));
    }
    solve_local(
        move |t: f64, y| t.powf(alpha - 1.0) * y,
        |t| Ok(conformable_eigenfunction(t, alpha)),
        domain,
        conformable_eigenfunction(domain.0, alpha),
        grid_points,
        tol,
    )
}

/// `E_α(z)` for `0 <= z <= z_max` with the coefficients `1/Γ(αk+1)` cached.
#[derive(Debug, Clone)]
pub struct MittagLefflerSeries {
    coeffs: Vec<f64>,
    z_max: f64,
}

impl MittagLefflerSeries {
    /// Keeps terms until `z_max^k / Γ(αk+1)` falls below `1e-17`; since the
    /// sum is at least 1 on `z >= 0`, that is a relative truncation bound.
    pub fn new(alpha: f64, x_max: f64) -> Result<Self> {
        let z_max = x_max.max(0.0).powf(alpha);
        if !(z_max <= ML_SERIES_DOMAIN) {
            return Err(Error::domain(
                "mittag_leffler",
                format!("x_max^alpha = {z_max} exceeds the series domain {ML_SERIES_DOMAIN}"),
            ));
        }
        let ln_z = z_max.max(1e-300).ln();
        let mut coeffs = Vec::new();
        for k in 0..5000 {
            let kf = k as f64;
            let ln_c = -ln_gamma(alpha * kf + 1.0)?;
            coeffs.push(ln_c.exp());
            if k > 2 && kf * ln_z + ln_c < (1e-17f64).ln() {
                return Ok(Self { coeffs, z_max });
            }
        }
        Err(Error::Convergence {
            op: "mittag_leffler",
            terms: 5000,
        })
    }

    pub fn eval(&self, z: f64) -> f64 {
        debug_assert!(z >= 0.0 && z <= self.z_max * (1.0 + 1e-12));
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * z + c)
    }
}

/// Checks `D^α y = y` for `y = E_α(x^α)` by applying the Caputo-style GL sum
/// (GL of `y - y(0)`) at step `h`.
pub fn verify_fractional_eigen(alpha: f64, domain: (f64, f64), grid_points: usize, h: f64) -> Result<EigenReport> {
    check_grid(domain, grid_points)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("alpha", alpha, "must lie in (0, 1)"));
    }
    if !(domain.0 > 0.0) {
        return Err(Error::domain(
            "verify_fractional_eigen",
            "domain must lie in (0, x_max]",
        ));
    }
    let series = MittagLefflerSeries::new(alpha, domain.1)?;
    let ml = series.clone();
    let y = RealFunction::from_fn(move |x: f64| {
        if x < 0.0 {
            return Err(Error::domain("mittag_leffler", "negative sample point"));
        }
        Ok(ml.eval(x.powf(alpha)))
    });
    let grid = linspace(domain.0, domain.1, grid_points)
        .into_iter()
        .map(|x| {
            Ok(EigenSample {
                x,
                numeric: caputo_gl_derivative(&y, x, alpha, h)?,
                closed_form: series.eval(x.powf(alpha)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenReport::from_samples(grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{mittag_leffler, MlSeriesConfig};

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    #[test]
    fn q_eigen_examples() {
        let r = solve_q_eigen(q(1.0), (0.0, 2.0), 21, 1e-10).unwrap();
        assert!(r.max_rel_residual <= 1e-8);
        let r = solve_q_eigen(q(0.5), (0.0, 2.0), 21, 1e-10).unwrap();
        assert!(r.max_rel_residual <= 1e-7);
        let r = solve_q_eigen(q(2.0), (0.0, 0.9), 21, 1e-10).unwrap();
        assert!(r.max_rel_residual <= 1e-7, "{}", r.max_rel_residual);
        assert_eq!(r.grid.len(), 21);
        assert!((r.grid[20].closed_form - 10.0).abs() < 1e-9);
    }

    #[test]
    fn q_eigen_rejects_points_outside_support() {
        assert!(solve_q_eigen(q(2.0), (0.0, 1.0), 21, 1e-10).is_err());
        assert!(solve_q_eigen(q(0.5), (-3.0, 0.0), 21, 1e-10).is_err());
    }

    #[test]
    fn hausdorff_eigen_examples() {
        let hp = HausdorffParams::new(1.0, 1.0).unwrap();
        let r = solve_hausdorff_eigen(&hp, (0.0, 2.0), 21, 1e-10).unwrap();
        assert!(r.max_rel_residual <= 1e-8);
        assert!((r.grid[0].closed_form - 1f64.exp()).abs() < 1e-15);
        let hp = HausdorffParams::new(0.5, 1.0).unwrap();
        assert!(
            solve_hausdorff_eigen(&hp, (0.0, 3.0), 31, 1e-10)
                .unwrap()
                .max_rel_residual
                <= 1e-7
        );
        let hp = HausdorffParams::new(0.4, 2.0).unwrap();
        assert!(
            solve_hausdorff_eigen(&hp, (0.0, 2.0), 21, 1e-10)
                .unwrap()
                .max_rel_residual
                <= 1e-7
        );
        assert!(solve_hausdorff_eigen(&hp, (-2.0, 1.0), 21, 1e-10).is_err());
    }

    #[test]
    fn kappa_and_conformable_eigen() {
        let r = solve_kappa_eigen(KappaParam::new(0.8).unwrap(), (-1.0, 2.0), 31, 1e-10).unwrap();
        assert!(r.max_rel_residual <= 1e-7);
        let r = solve_conformable_eigen(0.5, (0.1, 2.0), 31, 1e-10).unwrap();
        assert!(r.max_rel_residual <= 1e-7);
        assert!(solve_conformable_eigen(0.5, (0.0, 2.0), 31, 1e-10).is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(solve_q_eigen(q(0.5), (0.0, 1.0), 10, 1e-10).is_err());
        assert!(solve_q_eigen(q(0.5), (1.0, 1.0), 11, 1e-10).is_err());
    }

    #[test]
    fn cached_series_matches_mittag_leffler() {
        let s = MittagLefflerSeries::new(0.5, 4.0).unwrap();
        let cfg = MlSeriesConfig::default();
        for i in 0..=20 {
            let z = 0.1 * i as f64;
            let direct = mittag_leffler(z, 0.5, &cfg).unwrap();
            assert!((s.eval(z) - direct).abs() <= 1e-13 * direct);
        }
        assert!(MittagLefflerSeries::new(0.5, 200.0).is_err());
    }

    #[test]
    fn fractional_eigen_examples() {
        let r = verify_fractional_eigen(0.999, (0.2, 2.0), 11, 1e-3).unwrap();
        assert!(r.max_rel_residual <= 1e-2, "{}", r.max_rel_residual);
        let r = verify_fractional_eigen(0.5, (0.2, 2.0), 11, 1e-3).unwrap();
        assert!(r.max_rel_residual <= 5e-2, "{}", r.max_rel_residual);
        assert!(verify_fractional_eigen(1.0, (0.2, 2.0), 11, 1e-3).is_err());
        assert!(verify_fractional_eigen(0.5, (0.0, 2.0), 11, 1e-3).is_err());
    }

    #[test]
    fn problem_dispatch() {
        let p = EigenProblem::new(DerivativeKind::QDeformed(q(0.7)), (0.0, 1.0), 11).unwrap();
        assert_eq!(p.y0, 1.0);
        assert!(p.solve(1e-10).unwrap().max_rel_residual <= 1e-7);
        let hp = HausdorffParams::new(0.9, 2.0).unwrap();
        let p = EigenProblem::new(DerivativeKind::Hausdorff(hp), (0.0, 1.0), 11).unwrap();
        assert!((p.y0 - (2.0f64 / 0.9).exp()).abs() < 1e-12);
        let p = EigenProblem::new(DerivativeKind::YangLfd { alpha: 0.5, l0: 1.0 }, (0.0, 1.0), 11);
        assert!(p.is_err());
    }

    #[test]
    fn linspace_hits_endpoints() {
        let g = linspace(0.1, 0.7, 7);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[6], 0.7);
        assert_eq!(g.len(), 7);
    }
}
