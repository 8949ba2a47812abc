"""Smoke test for the montroll_susy_py extension.

Build and install first:

    pip install maturin
    pip install --no-build-isolation ./crates/python
"""

import math

import montroll_susy_py as ms


def main():
    a1, a2, a3 = ms.solve_cubic(0.2)
    assert abs(a1 + a2 + a3) < 1e-12
    assert a1 > a3 > a2

    beta, gamma = ms.kink_params(1.0, -1.5)
    assert abs(beta + 2.5 / math.sqrt(2)) < 1e-15 and gamma == -0.5

    p = ms.SusyParams(beta, gamma, 0.1)
    xi = ms.grid_points(-8.0, 8.0, 2001)
    u = p.potential(xi)
    phi0 = p.ground_state(xi)
    assert phi0[1000] == 1.0
    assert ms.verify_eigenpair(u, phi0, 0.0, -8.0, 8.0) < 1e-3

    values, _ = ms.lowest_modes(u, -8.0, 8.0, 2)
    assert abs(values[1] - values[0] - 0.1) < 2e-3

    fam = p.deform(-8.0, 8.0, 2001, 5.0)
    assert fam["xi_star"] is not None and fam["xi_star"] < 0

    morse = p.morse(-8.0, 8.0, 2001)
    assert abs(morse["bias"] + 0.1) < 0.01

    try:
        p.deform(-8.0, 8.0, 2001, -0.5)
    except ValueError:
        pass
    else:
        raise AssertionError("lambda = -0.5 must be rejected")

    csv = ms.figure_csv(2, None, ["n=101"])
    assert csv.startswith("xi,value\n")

    passed, report, _ = ms.verify()
    assert passed, report
    assert abs(report["splitting"]["computed"] - 0.1) < 2e-3
    print("smoke test passed")


if __name__ == "__main__":
    main()
