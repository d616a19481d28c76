"""Smoke test for the pydeformcalc extension.

Build and run from the repository root:

    cargo build --release -p pydeformcalc
    cp target/release/libpydeformcalc.so python/pydeformcalc.so
    python3 python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pydeformcalc as dc


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    assert close(dc.q_exp(1.0, 0.5), 2.25, 1e-15)
    assert dc.q_exp(-3.0, 0.5) == 0.0
    assert close(dc.q_log(dc.q_exp(0.7, 0.3), 0.3), 0.7, 1e-14)
    assert close(dc.kappa_exp(1.0, 1.0), 1.0 + math.sqrt(2.0), 1e-15)
    assert close(dc.gamma(0.5), math.sqrt(math.pi), 1e-14)
    assert close(dc.mittag_leffler(1.0, 1.0), math.e, 1e-14)

    m = dc.q_from_zeta(1.0, 3.0)
    assert m["q"] == 1.0
    assert dc.zeta_from_q(0.0, 2.0)["zeta"] == -1.0
    assert dc.kappa_expansion(1.0, 4) == [1.0, 0.0, 0.5, 0.0, -0.125]

    f = dc.Function("exp(x^0.5)")
    assert f.has_exact_derivative
    assert close(f.derivative(4.0), math.e ** 2 * 0.25, 1e-14)

    op = dc.Operator("hausdorff", zeta=0.5, l0=1.0)
    xs = [0.0, 0.5, 1.0, 1.5, 2.0]
    values = op.apply(dc.Function("x"), xs)
    assert all(close(v, math.sqrt(x + 1.0), 1e-15) for v, x in zip(values, xs))
    limits = op.apply_limit(dc.Function("sin(x)"), [0.5, 1.0])
    exact = op.apply(dc.Function("sin(x)"), [0.5, 1.0])
    assert all(close(a, b, 1e-6) for a, b in zip(limits, exact))

    report = dc.Operator("q", q=0.5).solve_eigen(0.0, 2.0, 21)
    assert report["max_rel_residual"] <= 1e-7
    assert len(report["grid"]) == 21

    try:
        dc.Function("2*")
    except ValueError as e:
        assert "expected operand" in str(e)
    else:
        raise AssertionError("parse error not raised")

    try:
        dc.mittag_leffler(-10.0, 0.5)
    except ArithmeticError:
        pass
    else:
        raise AssertionError("cancellation not reported")

    passed, failed, _ = dc.selftest()
    assert failed == 0 and passed > 0
    print(f"smoke test ok ({passed} self-test checks)")


if __name__ == "__main__":
    main()
