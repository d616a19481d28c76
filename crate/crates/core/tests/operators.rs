use deformcalc::deriv::{DerivativeKind, DiffSettings};
use deformcalc::eigen::{linspace, solve_hausdorff_eigen, solve_kappa_eigen, solve_q_eigen, verify_fractional_eigen};
use deformcalc::mapping::{expand_hausdorff_prefactor, q_hausdorff_gap};
use deformcalc::{HausdorffParams, KappaParam, QParam, RealFunction};

fn corpus() -> Vec<RealFunction> {
    ["x", "x^2", "sin(x)", "exp(x)"]
        .iter()
        .map(|s| RealFunction::parse(s).unwrap())
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

#[test]
fn closed_and_limit_forms_agree() {
    let s = DiffSettings::default();
    let kinds = [
        (DerivativeKind::QDeformed(QParam::new(0.7).unwrap()), (0.1, 2.0)),
        (DerivativeKind::QDeformed(QParam::new(1.3).unwrap()), (0.1, 2.0)),
        (
            DerivativeKind::Hausdorff(HausdorffParams::new(0.4, 1.0).unwrap()),
            (0.1, 2.0),
        ),
        (
            DerivativeKind::Hausdorff(HausdorffParams::new(0.9, 2.0).unwrap()),
            (0.1, 2.0),
        ),
        (DerivativeKind::Conformable { alpha: 0.5 }, (0.1, 2.0)),
        (DerivativeKind::Conformable { alpha: 0.8 }, (0.1, 2.0)),
    ];
    for (kind, (a, b)) in kinds {
        for f in corpus() {
            for x in linspace(a, b, 21) {
                let closed = kind.apply(&f, x, &s).unwrap();
                let limit = kind.apply_limit(&f, x, &s).expect("has a limit form").unwrap();
                let r = rel(closed, limit);
                assert!(
                    r <= 1e-6,
                    "{} on {} at {x}: {closed} vs {limit}",
                    kind.name(),
                    f.label()
                );
            }
        }
    }
}

#[test]
fn operator_gap_is_second_order() {
    let s = DiffSettings::default();
    for (z, l0) in [(0.3, 0.5), (0.5, 1.0), (0.8, 2.0)] {
        let hp = HausdorffParams::new(z, l0).unwrap();
        for f in corpus() {
            for x in linspace(0.05 * l0, 0.5 * l0, 10) {
                let g = q_hausdorff_gap(&f, x, &hp, &s).unwrap();
                assert!(
                    g.gap <= g.bound,
                    "{} zeta={z} l0={l0} x={x}: {} > {}",
                    f.label(),
                    g.gap,
                    g.bound
                );
            }
        }
    }
}

#[test]
fn prefactor_series_converges_at_half_radius() {
    for (z, l0) in [(0.3, 0.5), (0.5, 1.0), (-0.5, 2.0)] {
        let hp = HausdorffParams::new(z, l0).unwrap();
        let series = expand_hausdorff_prefactor(&hp, 30).unwrap();
        for x in [0.5 * l0, -0.5 * l0] {
            let exact = (1.0 + x / l0).powf(1.0 - z);
            assert!((series.eval(x) - exact).abs() <= 1e-8, "zeta={z} l0={l0} x={x}");
        }
    }
}

#[test]
fn halving_tolerance_never_hurts_much() {
    let q = QParam::new(0.7).unwrap();
    let hp = HausdorffParams::new(0.5, 1.0).unwrap();
    let k = KappaParam::new(0.8).unwrap();
    let mut tol = 1e-6;
    while tol >= 1e-10 {
        let pairs = [
            (
                solve_q_eigen(q, (0.0, 2.0), 41, tol),
                solve_q_eigen(q, (0.0, 2.0), 41, tol / 2.0),
            ),
            (
                solve_hausdorff_eigen(&hp, (0.0, 3.0), 41, tol),
                solve_hausdorff_eigen(&hp, (0.0, 3.0), 41, tol / 2.0),
            ),
            (
                solve_kappa_eigen(k, (-1.0, 2.0), 41, tol),
                solve_kappa_eigen(k, (-1.0, 2.0), 41, tol / 2.0),
            ),
        ];
        for (coarse, fine) in pairs {
            let (c, f) = (coarse.unwrap().max_rel_residual, fine.unwrap().max_rel_residual);
            assert!(f <= 2.0 * c.max(1e-15), "tol={tol}: {c} -> {f}");
        }
        tol /= 10.0;
    }
}

#[test]
fn classical_parameters_recover_exp() {
    let q = solve_q_eigen(QParam::new(1.0).unwrap(), (0.0, 2.0), 21, 1e-10).unwrap();
    let hp = HausdorffParams::new(1.0, 1.0).unwrap();
    let h = solve_hausdorff_eigen(&hp, (0.0, 2.0), 21, 1e-10).unwrap();
    assert!(q.max_rel_residual <= 1e-8);
    assert!(h.max_rel_residual <= 1e-8);
    for s in &q.grid {
        assert!(rel(s.closed_form, s.x.exp()) <= 1e-15);
    }
    let frac = verify_fractional_eigen(0.999, (0.2, 2.0), 21, 1e-3).unwrap();
    assert!(frac.max_rel_residual <= 1e-2);
}

#[test]
fn q_eigen_at_pole_side() {
    let r = solve_q_eigen(QParam::new(2.0).unwrap(), (0.0, 0.9), 19, 1e-10).unwrap();
    assert!(r.max_rel_residual <= 1e-7);
    let last = r.grid.last().unwrap();
    assert!(rel(last.closed_form, 10.0) <= 1e-12);
}
