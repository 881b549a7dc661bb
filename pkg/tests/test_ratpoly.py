"""Exact polynomial algebra and the certificate primitives."""

from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from modestab.ratpoly import (
    MultiPoly,
    RationalFunction,
    coeffs_nonneg,
    count_roots_halfline,
    from_sympy,
    hurwitz_stable,
    lambda_content,
    mod_square_imaginary,
    poly_arith,
    shift_vars,
    substitute,
    to_sympy,
)

LAM, N, K, U = (MultiPoly.var(v) for v in ("lambda", "n", "k", "u"))
SMALL = st.integers(-10, 10)


@st.composite
def polys(draw, names=("lambda", "n", "k"), max_terms=5, max_deg=3):
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        exp = [0] * 5
        for name in names:
            exp[("lambda", "n", "k", "t", "u").index(name)] = draw(st.integers(0, max_deg))
        terms[tuple(exp)] = draw(SMALL)
    return MultiPoly(terms)


# ---------------------------------------------------------------- arithmetic


def test_difference_of_squares():
    assert (LAM + 1) * (LAM - 1) == LAM**2 - 1


def test_binomial():
    assert poly_arith(N + K, 2, "pow") == N**2 + 2 * N * K + K**2


def test_floats_refused():
    with pytest.raises(TypeError):
        MultiPoly.const(0.5)


def test_product_of_recurrence_pieces_against_sympy():
    # A_n numerator times B_n numerator, expanded independently by sympy
    an = K * LAM**2 + K * (4 * N + 9) * LAM + 4 * K * N**2 + 16 * N * K - 4 * N**2 + 14 * K - 16 * N - 16
    bn = (LAM + 2 * N + 3) * (LAM + 2 * N + 2)
    l, n, k = sp.symbols("lambda n k")
    ref = sp.expand(
        (k * l**2 + k * (4 * n + 9) * l + 4 * k * n**2 + 16 * n * k - 4 * n**2 + 14 * k - 16 * n - 16)
        * (l + 2 * n + 3) * (l + 2 * n + 2)
    )
    assert from_sympy(ref) == an * bn
    rng = np.random.default_rng(1)
    prod = an * bn
    for _ in range(20):
        pt = {v: int(x) for v, x in zip(("lambda", "n", "k"), rng.integers(-9, 10, 3))}
        assert prod.evaluate(pt) == ref.subs({l: pt["lambda"], n: pt["n"], k: pt["k"]})


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(polys())
def test_sympy_roundtrip(p):
    assert from_sympy(to_sympy(p)) == p


def test_dump_format():
    text = (2 * LAM * N - Fraction(1, 3) * U).dump()
    lines = text.strip().splitlines()
    assert len(lines) == 2
    assert all("*" in line for line in lines)


# ---------------------------------------------------------------- substitute


def test_substitute_examples():
    assert substitute(LAM**2 + 1, "lambda", 0) == RationalFunction(MultiPoly.const(1))
    assert substitute(N**2 + N, "n", N + 2) == RationalFunction(N**2 + 5 * N + 6)
    r0_num = K * LAM**2 + 5 * K * LAM + 2 * K - 4
    assert substitute(substitute(r0_num, "lambda", 0).num, "k", 2).num.is_zero()


def test_substitute_rational_expr_denominator_is_power():
    rf = substitute(N**3 + 1, "n", RationalFunction(MultiPoly.const(1), K + 1))
    assert rf.den == (K + 1) ** 3 or rf.den * -1 == (K + 1) ** 3


def test_substitute_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        RationalFunction(N, MultiPoly.const(0))


# ---------------------------------------------------------------- mod square


def test_mod_square_examples():
    assert mod_square_imaginary(LAM + 1) == U + 1
    assert mod_square_imaginary(LAM**2 + 2 * LAM + 2) == U**2 + 4


@given(polys(), st.lists(st.tuples(SMALL, SMALL, SMALL), min_size=1, max_size=4))
def test_mod_square_matches_gaussian_rationals(p, points):
    q = mod_square_imaginary(p)
    assert "t" not in q.variables and "lambda" not in q.variables
    for t, n, k in points:
        # exact Gaussian-rational evaluation of p(i t)
        re = im = Fraction(0)
        for exp, c in p.items():
            a = exp[0]
            val = c * Fraction(n) ** exp[1] * Fraction(k) ** exp[2] * Fraction(t) ** a
            phase = a % 4
            if phase == 0:
                re += val
            elif phase == 1:
                im += val
            elif phase == 2:
                re -= val
            else:
                im -= val
        assert q.evaluate({"u": t * t, "n": n, "k": k}) == re * re + im * im


def test_mod_square_numeric_on_C_numerator():
    from modestab.recurrence import derived_quantities

    C = derived_quantities("general").C
    num = C.num.partial({"n": 3, "k": 4})
    q = mod_square_imaginary(num)
    lam = 3j
    val = complex(sum(float(c) * lam ** e[0] for e, c in num.items()))
    assert float(q.evaluate({"u": 9})) == pytest.approx(abs(val) ** 2, rel=1e-12)


# ---------------------------------------------------------------- shifts


def test_shift_examples():
    assert shift_vars(N**2, {"n": 2}) == N**2 + 4 * N + 4
    shifted = shift_vars(2 * K - 4, {"k": 3})
    assert shifted == 2 * K + 2
    assert coeffs_nonneg(shifted).passed


def test_shift_rejects_negative_offsets():
    with pytest.raises(ValueError):
        shift_vars(N, {"n": -1})


@given(polys(), polys(), st.integers(0, 4), st.integers(0, 4))
def test_shift_is_ring_homomorphism(a, b, sn, sk):
    s = {"n": sn, "k": sk}
    assert shift_vars(a * b, s) == shift_vars(a, s) * shift_vars(b, s)
    assert shift_vars(a + b, s) == shift_vars(a, s) + shift_vars(b, s)


# ---------------------------------------------------------------- positivity


def test_coeffs_nonneg_examples():
    assert coeffs_nonneg(U + 1).passed
    cert = coeffs_nonneg(U - 1)
    assert not cert.passed
    assert cert.violations[0]["monomial"] == {}
    assert cert.violations[0]["coeff"] == "-1"


@given(polys(("n", "k", "u")), st.lists(st.tuples(*[st.fractions(0, 20, max_denominator=7)] * 3), max_size=8))
def test_coeffs_nonneg_is_sound(p, points):
    if coeffs_nonneg(p).passed:
        for n, k, u in points:
            assert p.evaluate({"n": n, "k": k, "u": u}) >= 0


# ---------------------------------------------------------------- Hurwitz


def test_hurwitz_examples():
    assert hurwitz_stable(K * LAM**2 + 5 * K * LAM + 2 * K - 4, k_shift=3).passed
    assert not hurwitz_stable(LAM**2 - 1).passed
    assert not hurwitz_stable((LAM - 1) * (LAM + 2) * (LAM + 3)).passed
    assert not hurwitz_stable((LAM + 1) * (LAM**2 + 1)).passed
    assert hurwitz_stable((LAM + 1) * (LAM + 2) * (LAM + 3)).passed


PUBLISHED_QUARTIC = (
    K**2 * LAM**4 + 14 * K**2 * LAM**3 + K * (63 * K - 8) * LAM**2
    + 14 * K * (7 * K - 4) * LAM + 8 * (5 * K**2 - 2 * K + 8)
)


def test_hurwitz_published_quartic():
    cert = hurwitz_stable(PUBLISHED_QUARTIC, k_shift=3)
    assert cert.passed
    assert len(cert.info["routh_table"]) == 5


@pytest.mark.parametrize("k", list(range(3, 53)))
def test_hurwitz_pass_implies_numeric_left_half_plane(k):
    coeffs = [float(c.evaluate({"k": k})) for c in PUBLISHED_QUARTIC.coefficient_list("lambda")]
    roots = np.roots(coeffs[::-1])
    assert np.max(roots.real) < -1e-8


def test_hurwitz_degenerate_table_reported():
    # lambda^3 + lambda^2 + lambda + 1 has a zero first-column entry
    cert = hurwitz_stable(LAM**3 + LAM**2 + LAM + 1)
    assert not cert.passed
    assert any("degenerate" in str(v) for v in cert.violations)


def test_lambda_content():
    c, q = lambda_content((K + 1) * (LAM**2 + 2 * LAM + 3))
    assert c * q == (K + 1) * (LAM**2 + 2 * LAM + 3)
    assert q.degree("k") == 0


def test_sturm_count():
    # (u - 1)(u - 2)(u + 3): two nonnegative roots
    coeffs = [Fraction(6), Fraction(-7), Fraction(0), Fraction(1)]
    assert count_roots_halfline(coeffs) == 2


def test_rational_function_content_normalised():
    rf = RationalFunction(2 * N + 4, -4 * K)
    assert rf.den.leading_sign() > 0
    assert rf == RationalFunction(-(N + 2), 2 * K)
