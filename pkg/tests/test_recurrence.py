"""Heun reduction, coefficient recurrences, ratios, quasi-solutions."""

from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from modestab.ratpoly import MultiPoly
from modestab.recurrence import (
    CASES,
    case_spec,
    characteristic_roots,
    coeff_A,
    coeff_A_d3,
    coeff_B,
    coeff_B_d3,
    delta_numeric,
    derived_numeric,
    derived_quantities,
    heun_reduce,
    quasi,
    ratio_seq,
    ratio_symbolic,
    series_coefficients,
)

FRAC = st.fractions(-5, 5, max_denominator=9)


@pytest.fixture(scope="module")
def heun_general():
    return heun_reduce(None)


@pytest.fixture(scope="module")
def heun_d3():
    return heun_reduce(3)


# ---------------------------------------------------------------- case specs


def test_case_bounds():
    g = case_spec("general")
    assert g.n0 == 2 and g.shifts == {"n": 2, "k": 3}
    assert [g.bound_value(q, 6) for q in ("delta", "eps", "C")] == [
        Fraction(1, 2), Fraction(5, 12) - Fraction(1, 6), Fraction(1, 12) + Fraction(1, 6)
    ]
    k2 = case_spec("k2")
    assert (k2.n0, [k2.bound_value(q) for q in ("delta", "eps", "C")]) == (
        4, [Fraction(1, 3), Fraction(1, 18), Fraction(11, 20)]
    )
    d3 = case_spec("d3")
    assert (d3.n0, [d3.bound_value(q) for q in ("delta", "eps", "C")]) == (
        1, [Fraction(1, 3), Fraction(1, 12), Fraction(1, 2)]
    )
    with pytest.raises(ValueError):
        g.bound_value("C")


# ---------------------------------------------------------------- Heun reduction


def test_heun_exponents(heun_general):
    assert set(heun_general.exponents_at_0) == {0, -sp.Symbol("k") / 2 - 2} or any(
        sp.simplify(e + sp.Symbol("k", real=False) / 2 + 2) == 0 for e in heun_general.exponents_at_0
    )
    assert set(heun_reduce(4).exponents_at_0) == {0, -3}


def test_heun_d3_singular_points(heun_d3):
    assert heun_d3.transformed
    assert set(heun_d3.singular_points) == {0, 1, 2}


def _check_rederived(expr, rf, values):
    subs = {s: values[s.name] for s in expr.free_symbols}
    lhs = sp.Rational(expr.subs(subs))
    rhs = rf.evaluate(values)
    assert lhs == sp.Rational(rhs.numerator, rhs.denominator)


def test_heun_rederivation_matches_recurrence(heun_general, heun_d3):
    rng = np.random.default_rng(3)
    for _ in range(20):
        vals = {"lambda": Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))),
                "n": int(rng.integers(0, 30)), "k": int(rng.integers(2, 30))}
        _check_rederived(heun_general.A, coeff_A(), vals)
        _check_rederived(heun_general.B, coeff_B(), vals)
        v3 = {"lambda": vals["lambda"], "n": vals["n"]}
        _check_rederived(heun_d3.A, coeff_A_d3(), v3)
        _check_rederived(heun_d3.B, coeff_B_d3(), v3)


def test_heun_rejects_small_d():
    with pytest.raises(ValueError):
        heun_reduce(2)


# ---------------------------------------------------------------- coefficients


def test_coefficient_examples():
    assert coeff_A(0, 0, 2) == Fraction(3, 20)
    assert coeff_B(0, 0, 2) == Fraction(3, 40)
    assert coeff_A_d3(0, 0) == Fraction(7, 9)
    lam, k = MultiPoly.var("lambda"), MultiPoly.var("k")
    r0 = coeff_A(-1)
    assert r0 == (k * lam**2 + 5 * k * lam + 2 * k - 4) / (2 * k * (k + 6))
    assert coeff_A_d3(-1) == (lam**2 + 12 * lam + 12) / 28


def test_zero_denominator_rejected():
    with pytest.raises((ValueError, ZeroDivisionError)):
        coeff_A(-2, 0, 3)


@pytest.mark.parametrize("k", [2, 3, 7])
def test_coefficient_limits(k):
    big = 10**9
    assert float(coeff_A(big, 1, k)) == pytest.approx((k - 1) / k, rel=1e-6)
    assert float(coeff_B(big, 1, k)) == pytest.approx(1 / k, rel=1e-6)
    assert float(coeff_A_d3(big, 1)) == pytest.approx(1.5, rel=1e-6)
    assert float(coeff_B_d3(big, 1)) == pytest.approx(-0.5, rel=1e-6)


def test_characteristic_roots():
    assert characteristic_roots("d3") == (1, Fraction(1, 2))
    assert characteristic_roots("k2") == (1, Fraction(-1, 2))


# ---------------------------------------------------------------- ratios


def test_ratio_examples():
    s = ratio_seq("general", 0, 4, 2)
    assert s.value(0) == 0 and s.is_infinite(1) and not s.is_infinite(2)
    assert ratio_seq("general", 0, 2, 3).value(0) == Fraction(1, 27)
    assert ratio_seq("d3", 0, 2).value(0) == Fraction(3, 7)


@given(FRAC, st.sampled_from(CASES))
def test_series_vs_ratio_consistency(lam, case):
    k = 5 if case == "general" else None
    a = series_coefficients(case, lam, 50, k)
    r = ratio_seq(case, lam, 49, k)
    rebuilt = [Fraction(1)]
    for n in range(50):
        if r.is_infinite(n):
            assert rebuilt[-1] == 0
            rebuilt.append(a[n + 1])
            continue
        rebuilt.append(rebuilt[-1] * r.value(n) if rebuilt[-1] != 0 else a[n + 1])
    assert rebuilt == a


def test_float_ratio_matches_exact():
    exact = ratio_seq("general", Fraction(1, 3), 30, 4)
    fl = ratio_seq("general", 1 / 3, 30, 4)
    for n in range(31):
        assert complex(fl.value(n)) == pytest.approx(float(exact.value(n)), rel=1e-12)


@pytest.mark.parametrize("k", range(2, 11))
def test_poincare_dichotomy_numeric(k):
    rng = np.random.default_rng(k)
    lam = rng.uniform(0, 10, 20) + 1j * rng.uniform(-10, 10, 20)
    case = "k2" if k == 2 else "general"
    for z in lam:
        r = ratio_seq(case, complex(z), 5000, k).value(5000)
        # r_n = 1 + O(1/n): distance to the nearest root after Richardson-free check
        assert min(abs(r - 1), abs(r + 1 / k)) < 5e-3


def test_ratio_symbolic_matches_exact_sequence():
    rf = ratio_symbolic("general", 2)
    for lam, k in [(0, 3), (Fraction(1, 2), 5), (2, 4)]:
        assert rf.evaluate({"lambda": lam, "k": k}) == ratio_seq("general", lam, 2, k).value(2)


# ---------------------------------------------------------------- quasi-solutions


def test_quasi_examples():
    assert quasi("general", 2, 0, 3) == Fraction(7, 13)
    assert quasi("d3", 1, 0) == Fraction(11, 18)
    for case, k in (("general", 4), ("k2", 2), ("d3", None)):
        assert abs(quasi(case, 10**7, 2.0, k) - 1) < 1e-5


def test_quasi_symbolic():
    rf = quasi("general")
    assert set(rf.variables) == {"lambda", "n", "k"}
    assert rf.evaluate({"lambda": 0, "n": 2, "k": 3}) == Fraction(7, 13)


# ---------------------------------------------------------------- derived quantities


def test_delta_two_ways():
    dq = derived_quantities("general")
    exact = dq.delta_start.evaluate({"lambda": 0, "k": 3})
    via_ratio = ratio_seq("general", 0, 2, 3).value(2) / quasi("general", 2, 0, 3) - 1
    assert exact == via_ratio
    assert complex(delta_numeric("general", 0.0, 3)) == pytest.approx(float(exact), abs=1e-14)


def test_derived_limits():
    dq = derived_quantities("general")
    n = 10**6
    for k in (3, 8):
        C = float(dq.C.evaluate({"lambda": 1, "n": n, "k": k}))
        eps = float(dq.eps.evaluate({"lambda": 1, "n": n, "k": k}))
        assert C == pytest.approx(1 / k, rel=1e-4)
        assert abs(eps) < 1e-4


@pytest.mark.parametrize("case,k", [("general", 5), ("k2", 2), ("d3", None)])
def test_symbolic_and_numeric_derived_agree(case, k):
    dq = derived_quantities(case, k=k if case == "general" else None)
    for n, lam in [(3, 0.5j), (7, 2 + 1j)]:
        eps, C = derived_numeric(case, n, lam, k)
        pt = {"n": n, "k": k} if case == "general" else {"n": n}
        num = complex(_eval_complex(dq.C, pt, lam))
        assert complex(C) == pytest.approx(num, rel=1e-10)
        assert complex(eps) == pytest.approx(complex(_eval_complex(dq.eps, pt, lam)), rel=1e-9, abs=1e-12)


def _eval_complex(rf, point, lam):
    def ev(p):
        return sum(complex(c) * lam ** e[0] * point["n"] ** e[1] * point.get("k", 1) ** e[2] for e, c in p.items())

    return ev(rf.num) / ev(rf.den)
