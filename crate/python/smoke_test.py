"""Smoke test for the Python bindings.

    pip install --no-build-isolation ./crates/python
    python python/smoke_test.py
"""

import cmath
import math

import harmonic_eisenstein_py as he


def brute_c(n, h, m):
    total = 0
    for x1 in range(-m, m + 1):
        if x1 == 0 or m % x1:
            continue
        x2 = m // x1
        if (x1 - h[0]) % n == 0 and (x2 - h[1]) % n == 0:
            total += 1 if x1 > 0 else -1
    return total


def brute_c_tilde(n, h, m):
    total = 0.0
    for x1 in range(-m, m + 1):
        if x1 == 0 or m % x1:
            continue
        x2 = -m // x1
        if (x1 - h[0]) % n == 0 and (x2 - h[1]) % n == 0:
            total += (1 if x1 > 0 else -1) * math.log(abs(x1 / x2))
    return total


def main():
    lat = he.Lattice(3)
    assert len(lat.cosets()) == 9
    assert lat.c((1, 0), 0) == (1, 6)

    for h in lat.cosets():
        for m in range(1, 40):
            num, den = lat.c(h, m)
            assert den == 1 and num == brute_c(3, h, m), (h, m)
            ct = lat.c_tilde(h, m)
            assert abs(ct - brute_c_tilde(3, h, m)) < 1e-12, (h, m)
            sym = sum(q * math.log(p) for p, q in lat.c_tilde_symbolic(h, m))
            assert abs(sym - ct) < 1e-12

    s = lat.rho_s()
    s2 = [[sum(s[i][k] * s[k][j] for k in range(9)) for j in range(9)] for i in range(9)]
    cosets = lat.cosets()
    for i, (a, b) in enumerate(cosets):
        j = cosets.index(((-a) % 3, (-b) % 3))
        for k in range(9):
            assert abs(s2[i][k] - (1 if k == j else 0)) < 1e-14

    exp = lat.expansion((1, 0), 40)
    again = he.Expansion.from_json(exp.to_json())
    assert again == exp
    assert exp.to_csv().splitlines()[0] == "m,num,den,c_tilde,symbolic"

    tau = complex(0.1, 1.2)
    value, tail = exp.eval(tau, 1e-10)
    full = lat.vartheta_tilde(tau, 1e-12)[(1, 0)]
    assert tail <= 1e-10 and abs(value - full) < 2e-10

    # weight one: ϑ under ρ, θ̃ under the dual
    for series, mat in ((lat.vartheta, lat.rho_s()), (lat.vartheta_tilde, lat.rho_dual_s())):
        left = series(-1 / tau)
        right = series(tau)
        for i, h in enumerate(cosets):
            expect = tau * sum(mat[i][j] * right[g] for j, g in enumerate(cosets))
            assert abs(left[h] - expect) < 1e-10, h

    th, bound = lat.theta((1, 0), complex(0.2, 0.9), 1.3)
    assert bound <= 1e-12 and cmath.isfinite(th)
    tt, _ = lat.theta_tilde((1, 0), complex(0.2, 0.9), 1.3, shift=(0.1, -0.1))
    assert cmath.isfinite(tt)

    reports = lat.verify("weil")
    assert reports and all(r["passed"] for r in reports)

    for bad in (lambda: he.Lattice(0), lambda: lat.vartheta(complex(0, -1))):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    try:
        lat.expansion((1, 0), 2).eval(complex(0, 0.2), 1e-12)
    except ArithmeticError:
        pass
    else:
        raise AssertionError("expected ArithmeticError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
