//! Adaptive Dormand-Prince 5(4) integration of scalar ODEs `y' = f(x, y)`
//! with the method's fourth-order continuous extension for dense output.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// dense output
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const MAX_STEPS: usize = 1_000_000;

pub const MIN_TOL: f64 = 1e-12;
pub const MAX_TOL: f64 = 1e-4;

/// Values of the solution at the requested output points, plus step statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub points: Vec<(f64, f64)>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Integrates `y' = rhs(x, y)` from `(domain.0, y0)` to `domain.1`.
///
/// The local error per step is held below `tol * (1 + |y|)`. `output` must be
/// sorted and inside the domain; each output value comes from the dense
/// interpolant of the step that covers it.
pub fn integrate_ode<F>(rhs: F, domain: (f64, f64), y0: f64, tol: f64, output: &[f64]) -> Result<OdeSolution>
where
    F: Fn(f64, f64) -> f64,
{
    let (x_start, x_end) = domain;
    if !(x_start < x_end) || !x_start.is_finite() || !x_end.is_finite() {
        return Err(Error::domain(
            "integrate_ode",
            format!("empty domain [{x_start}, {x_end}]"),
        ));
    }
    if !(MIN_TOL..=MAX_TOL).contains(&tol) {
        return Err(Error::invalid("tol", tol, "must lie in [1e-12, 1e-4]"));
    }
    if !y0.is_finite() {
        return Err(Error::invalid("y0", y0, "must be finite"));
    }
    if output.windows(2).any(|w| w[1] < w[0]) || output.iter().any(|&x| x < x_start || x > x_end) {
        return Err(Error::domain(
            "integrate_ode",
            "output points must be sorted and inside the domain",
        ));
    }

    let span = x_end - x_start;
    let mut x = x_start;
    let mut y = y0;
    let mut k1 = rhs(x, y);
    if !k1.is_finite() {
        return Err(Error::StepFailure { x, h: 0.0 });
    }
    let mut h = initial_step(y, k1, span, tol);
    let mut points = Vec::with_capacity(output.len());
    let mut next_out = 0;
    while next_out < output.len() && output[next_out] == x_start {
        points.push((x_start, y0));
        next_out += 1;
    }
    let (mut accepted, mut rejected) = (0, 0);

    while x < x_end {
        if accepted + rejected >= MAX_STEPS {
            return Err(Error::StepFailure { x, h });
        }
        if h <= 16.0 * f64::EPSILON * x.abs().max(span) {
            return Err(Error::StepFailure { x, h });
        }
        let last = x + h >= x_end;
        if last {
            h = x_end - x;
        }

        let k2 = rhs(x + C2 * h, y + h * A21 * k1);
        let k3 = rhs(x + C3 * h, y + h * (A31 * k1 + A32 * k2));
        let k4 = rhs(x + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
        let k5 = rhs(x + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        let k6 = rhs(x + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        let y_new = y + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6);
        let k7 = rhs(x + h, y_new);

        let err_est = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        let scale = tol * (1.0 + y.abs().max(y_new.abs()));
        let err = (err_est / scale).abs();

        if !err.is_finite() || !y_new.is_finite() || !k7.is_finite() {
            rejected += 1;
            h *= 0.25;
            continue;
        }

        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        if err > 1.0 {
            rejected += 1;
            h *= factor.min(1.0);
            continue;
        }

        let x_new = if last { x_end } else { x + h };
        if next_out < output.len() && output[next_out] <= x_new {
            let ydiff = y_new - y;
            let bspl = h * k1 - ydiff;
            let r4 = ydiff - h * k7 - bspl;
            let r5 = h * (D1 * k1 + D3 * k3 + D4 * k4 + D5 * k5 + D6 * k6 + D7 * k7);
            while next_out < output.len() && output[next_out] <= x_new {
                let xo = output[next_out];
                let value = if xo == x_new {
                    y_new
                } else {
                    let theta = (xo - x) / h;
                    let theta1 = 1.0 - theta;
                    y + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)))
                };
                points.push((xo, value));
                next_out += 1;
            }
        }

        accepted += 1;
        x = x_new;
        y = y_new;
        k1 = k7;
        h *= factor;
    }

    Ok(OdeSolution {
        points,
        accepted_steps: accepted,
        rejected_steps: rejected,
    })
}

fn initial_step(y: f64, dy: f64, span: f64, tol: f64) -> f64 {
    let d0 = y.abs().max(1.0);
    let d1 = dy.abs();
    let h = if d1 > 1e-10 { 0.01 * d0 / d1 } else { 0.01 * span };
    // a fifth-order method makes local error ~ h^5
    h.min(span * tol.powf(0.2)).min(span).max(span * 1e-10)
}
