"""Quasi-solution recipe: sequences, minimax lines, rational fits, validation."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone

from modestab.quasifit import (
    MinimaxLinear,
    QuasiSolutionFitter,
    check_sequence_identities,
    corrupted_quasi,
    gen_sequences,
    minimax_linear,
    minimax_linear_lp,
    pareto_front,
    rational_fit_in_n,
    validate_quasi,
)
from modestab.recurrence import default_quasi, ratio_seq


@pytest.fixture(scope="module")
def small_ds():
    return gen_sequences((0, 12), (3, 8))


def test_sequence_example(small_ds):
    assert small_ds.seq0[(0, 3)] == Fraction(1, 27)
    assert small_ds.probe == 1


def test_parity_reconstruction(small_ds):
    """seq0 +- seq1 + seq2 rebuilds r_n(+-1)."""
    for n, k in [(0, 3), (5, 6), (12, 8)]:
        s0, s1, s2 = (small_ds.seq0[(n, k)], small_ds.seq1[(n, k)], small_ds.seq2[(n, k)])
        assert s0 + s1 + s2 == ratio_seq("general", 1, n, k).value(n)
        assert s0 - s1 + s2 == ratio_seq("general", -1, n, k).value(n)


def test_sequence_identities_recheck(small_ds):
    assert check_sequence_identities(small_ds) == []
    tampered = gen_sequences((2, 6), (3, 4))
    tampered.seq1[(4, 3)] += 1
    assert check_sequence_identities(tampered, samples=100) == [(4, 3)]


def test_probe_scaling():
    ds = gen_sequences((2, 4), (3, 3), probe=Fraction(1, 2))
    r = {s: ratio_seq("general", Fraction(s, 2), 3, 3).value(3) for s in (-1, 0, 1)}
    assert ds.seq2[(3, 3)] == (r[1] + r[-1] - 2 * r[0]) * 2
    with pytest.raises(ValueError):
        gen_sequences((2, 4), (3, 3), probe=0)


def test_skipped_infinities():
    ds = gen_sequences((0, 3), (2, 3))
    assert (1, 2) in ds.skipped and (1, 2) not in ds.seq0


# ---------------------------------------------------------------- minimax


def test_minimax_exact_on_lines():
    xs = list(range(3, 12))
    fit = minimax_linear(xs, [Fraction(3, 2) * x - 7 for x in xs])
    assert (fit.slope, fit.intercept, fit.error) == (Fraction(3, 2), -7, 0)


def test_minimax_equioscillation_on_square():
    xs = list(range(11))
    fit = minimax_linear(xs, [x * x for x in xs])
    assert fit.slope == 10 and fit.intercept == Fraction(-25, 2) and fit.error == Fraction(25, 2)
    errs = [e for _, e in fit.witness]
    assert len(errs) == 3 and all(abs(e) == fit.error for e in errs)
    assert all(errs[i] * errs[i + 1] < 0 for i in range(2))
    a, b, h = minimax_linear_lp(xs, [x * x for x in xs])
    assert (a, b, h) == pytest.approx((10, -12.5, 12.5), abs=1e-7)


@settings(max_examples=40)
@given(st.lists(st.fractions(-50, 50, max_denominator=7), min_size=4, max_size=15))
def test_minimax_matches_linprog(ys):
    xs = list(range(len(ys)))
    fit = minimax_linear(xs, ys)
    _, _, h = minimax_linear_lp(xs, [float(y) for y in ys])
    assert float(fit.error) == pytest.approx(h, abs=1e-7)
    resid = [abs(y - (fit.slope * x + fit.intercept)) for x, y in zip(xs, ys)]
    assert max(resid) == fit.error


def test_minimax_needs_three_abscissae():
    with pytest.raises(ValueError):
        minimax_linear([1, 1, 2], [0, 1, 2])


def test_seq0_reciprocal_is_nearly_linear_in_k():
    ds = gen_sequences((5, 5), (3, 40))
    ks, vals = ds.stream(0, 5)
    y = [1 / v for v in vals]
    fit = minimax_linear(ks, y)
    assert fit.error < Fraction(2, 100) * (max(y) - min(y)) / 2


def test_sklearn_estimator_and_clone():
    X = np.arange(3, 30).reshape(-1, 1)
    y = 0.5 * X.ravel() + 2 + 0.01 * np.sin(X.ravel())
    est = MinimaxLinear().fit(X, y)
    assert est.coef_ == pytest.approx(0.5, abs=1e-3)
    assert est.sup_error_ <= 0.01 + 1e-12
    assert est.score(X, y) == pytest.approx(-est.sup_error_)
    c = clone(est)
    assert c.get_params() == est.get_params() and not hasattr(c, "coef_")
    lp = MinimaxLinear(exact=False).fit(X, y)
    assert lp.sup_error_ == pytest.approx(est.sup_error_, abs=1e-9)


# ---------------------------------------------------------------- rational fits


def test_rational_fit_recovers_known_function():
    k = 7
    n = np.arange(20, 121)
    y = (2 * n + 3) / (2 * n + k + 6)
    best, tried = rational_fit_in_n(n, y, rel_tol=1e-12)
    assert best.holdout_dev < 1e-12
    rf = best.exact()
    for nn in (20, 57, 300):
        assert float(rf.evaluate({"n": nn})) == pytest.approx((2 * nn + 3) / (2 * nn + 13), rel=1e-12)
    front = pareto_front(tried)
    assert front and all(front[i].bits() <= front[i + 1].bits() for i in range(len(front) - 1))


def test_rational_fit_prefers_simpler_shape_within_tolerance():
    n = np.arange(20, 121)
    best, _ = rational_fit_in_n(n, (2 * n + 3) / (2 * n + 13), rel_tol=1e-2)
    exact_bits = sum(np.log2(1 + np.array([3, 2, 13, 2])))
    assert best.holdout_dev <= 1e-2 and best.bits() < exact_bits


def test_rational_fit_rejects_zero_stream():
    with pytest.raises(ValueError):
        rational_fit_in_n(np.arange(10), np.zeros(10))


# ---------------------------------------------------------------- validation


@pytest.mark.parametrize("case", ["general", "k2", "d3"])
def test_published_quasi_solutions_validate(case):
    rep = validate_quasi(default_quasi(case), case, n_max=80, n_t=201, n_random=30)
    assert rep.passed, rep.sups


def test_corrupted_quasi_fails():
    rep = validate_quasi(corrupted_quasi(), "general", n_max=40, n_t=101, n_random=10)
    assert not rep.passed
    assert all(m < 0 for m in rep.bounds["min_margin"].values())


def test_fitter_rejects_k2():
    with pytest.raises(ValueError):
        QuasiSolutionFitter(case="k2").fit()


def test_fitter_small_run_artifacts():
    f = QuasiSolutionFitter(n_range=(2, 40), k_range=(3, 15), fit_n_min=10).fit()
    art = f.artifacts()
    assert set(art) >= {"dataset", "rational_fits", "selection", "quasi_solution", "minimax"}
    assert set(art["rational_fits"]) == {f"{s}{j}" for s in ("alpha", "beta") for j in range(3)}
    assert len(art["minimax"]) == 3 * 39
    pred = f.predict(np.array([[5, 1j, 4], [30, 2.0, 10]]))
    assert pred.shape == (2,) and np.all(np.isfinite(pred))
    assert clone(f).get_params()["fit_n_min"] == 10


def test_d3_recipe_probe_sequence_is_negative():
    """At unit probe the second difference of the d3 ratios is negative for
    large n, so its reciprocal cannot be a positive quadratic in n. This is
    the observed behaviour that keeps the automated d3 recipe from
    reproducing a valid quasi-solution at probe 1."""
    ds = gen_sequences((40, 60), None, case="d3")
    assert all(ds.seq2[(n, None)] < 0 for n in range(40, 61))
