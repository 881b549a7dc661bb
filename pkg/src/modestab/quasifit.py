"""Constructing quasi-solutions from the exact ratio sequences.

Recipe: the ratios ``r_n(lambda, k)`` grow like a quadratic in ``lambda``,
so their three quadratic coefficients are probed by

    seq0 = r_n(0, k)
    seq1 = (r_n(1, k) - r_n(-1, k)) / 2
    seq2 = (r_n(1, k) + r_n(-1, k) - 2 r_n(0, k)) / 2.

Each is close to ``1 / (alpha(n) k + beta(n))``; ``alpha`` and ``beta`` are
obtained per ``n`` as the discrete minimax line through the reciprocals,
then ``alpha(n)`` and ``beta(n)`` are fitted by small rational functions of
``n`` with integer coefficients. The result is checked numerically against
the case bounds with :func:`validate_quasi`.

The minimax fit is exposed as a scikit-learn estimator so that it can be
used (and cloned, grid-searched, ...) like any other regressor.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog
from sklearn.base import BaseEstimator, RegressorMixin

from .ratpoly import MultiPoly, RationalFunction
from .recurrence import (
    QuasiSolution,
    case_spec,
    coefficient_parts,
    ratio_seq,
)

N_SYM, K_SYM = MultiPoly.var("n"), MultiPoly.var("k")


# ---------------------------------------------------------------------------
# sequences


@dataclass
class FitDataset:
    """Exact probe sequences on an ``(n, k)`` lattice (``k`` is ``None`` for d3)."""

    case: str
    n_range: tuple
    k_range: tuple | None
    probe: Fraction = Fraction(1)
    seq0: dict = field(default_factory=dict)
    seq1: dict = field(default_factory=dict)
    seq2: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)

    def keys(self):
        return sorted(self.seq0)

    def stream(self, j: int, n: int) -> tuple[list, list]:
        """``(k values, seq_j values)`` at fixed ``n``."""
        seq = (self.seq0, self.seq1, self.seq2)[j]
        pts = sorted((k, v) for (nn, k), v in seq.items() if nn == n)
        return [p[0] for p in pts], [p[1] for p in pts]

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "n_range": list(self.n_range),
            "k_range": list(self.k_range) if self.k_range else None,
            "probe": str(self.probe),
            "points": len(self.seq0),
            "skipped": [list(s) for s in self.skipped],
        }


def gen_sequences(n_range=(2, 120), k_range=(3, 60), case: str = "general", probe=1) -> FitDataset:
    """Exact ``seq0, seq1, seq2`` for ``n`` and ``k`` in the (inclusive) ranges.

    With ``probe = h`` the sequences are the central differences
    ``r(0)``, ``[r(h) - r(-h)] / 2h`` and ``[r(h) + r(-h) - 2 r(0)] / 2h^2``;
    ``h = 1`` gives the plain parity extraction at ``lambda in {-1, 0, 1}``.
    Pairs where one of the three ratios is a projective infinity are
    recorded in ``skipped`` and left out.
    """
    h = Fraction(probe)
    if h <= 0:
        raise ValueError("probe must be positive")
    n_lo, n_hi = n_range
    ks = [None] if case == "d3" else list(range(k_range[0], k_range[1] + 1))
    ds = FitDataset(
        case=case, n_range=(n_lo, n_hi), k_range=None if case == "d3" else tuple(k_range), probe=h
    )
    cname = "d3" if case == "d3" else "general"
    for k in ks:
        seqs = {s: ratio_seq(cname, s * h, n_hi, k) for s in (-1, 0, 1)}
        for n in range(n_lo, n_hi + 1):
            if any(q.is_infinite(n) for q in seqs.values()):
                ds.skipped.append((n, k))
                continue
            rm, r0, rp = (seqs[s].value(n) for s in (-1, 0, 1))
            ds.seq0[(n, k)] = r0
            ds.seq1[(n, k)] = (rp - rm) / (2 * h)
            ds.seq2[(n, k)] = (rp + rm - 2 * r0) / (2 * h * h)
    return ds


# ---------------------------------------------------------------------------
# discrete minimax lines


@dataclass
class MinimaxFit:
    """Best uniform line ``a k + b`` on a finite point set."""

    slope: Fraction
    intercept: Fraction
    error: Fraction
    witness: list  # [(x, signed error)] on the alternating reference
    iterations: int = 0

    def to_dict(self) -> dict:
        return {
            "slope": str(self.slope),
            "intercept": str(self.intercept),
            "sup_error": str(self.error),
            "witness": [[str(x), str(e)] for x, e in self.witness],
            "note": "discrete minimax on the sample points, not on an interval",
        }


def _solve_reference(xs, ys):
    """Line and levelled error through three points with alternating signs."""
    (x0, x1, x2), (y0, y1, y2) = xs, ys
    # y_i - (a x_i + b) = (-1)^i h
    M = [[x0, 1, 1], [x1, 1, -1], [x2, 1, 1]]
    rhs = [y0, y1, y2]
    return _solve3(M, rhs)


def _solve3(M, rhs):
    M = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(M, rhs)]
    for c in range(3):
        p = next(r for r in range(c, 3) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        for r in range(3):
            if r != c and M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [M[i][3] / M[i][i] for i in range(3)]


def minimax_linear(xs, ys, max_iter: int = 200) -> MinimaxFit:
    """Exact discrete Chebyshev line by the single-point exchange algorithm.

    The final reference of three points equioscillates with the maximal
    error, which certifies optimality on the sample set. Collinear data
    returns the exact line with zero error.
    """
    pts = sorted(zip((Fraction(x) for x in xs), (Fraction(y) for y in ys)))
    if len(pts) < 3:
        raise ValueError("minimax_linear needs at least 3 points")
    if len({p[0] for p in pts}) != len(pts):
        raise ValueError("sample abscissae must be distinct")
    X = [p[0] for p in pts]
    Y = [p[1] for p in pts]
    ref = [0, len(pts) // 2, len(pts) - 1]
    for it in range(1, max_iter + 1):
        a, b, h = _solve_reference([X[i] for i in ref], [Y[i] for i in ref])
        err = [Y[i] - a * X[i] - b for i in range(len(X))]
        j = max(range(len(X)), key=lambda i: abs(err[i]))
        if abs(err[j]) <= abs(h):
            witness = [(X[i], err[i]) for i in ref]
            return MinimaxFit(a, b, abs(h), witness, it)
        ref = _exchange(ref, j, err)
    raise RuntimeError("exchange algorithm did not converge")


def _exchange(ref, j, err):
    """Swap ``j`` into the reference keeping the sign alternation."""
    sgn = lambda v: 1 if v > 0 else -1  # noqa: E731
    if j in ref:
        return ref
    r = sorted(ref)
    if j < r[0]:
        return [j, r[1], r[2]] if sgn(err[j]) == sgn(err[r[0]]) else [j, r[0], r[1]]
    if j > r[2]:
        return [r[0], r[1], j] if sgn(err[j]) == sgn(err[r[2]]) else [r[1], r[2], j]
    if j < r[1]:
        return [j, r[1], r[2]] if sgn(err[j]) == sgn(err[r[0]]) else [r[0], j, r[2]]
    return [r[0], j, r[2]] if sgn(err[j]) == sgn(err[r[1]]) else [r[0], r[1], j]


def minimax_linear_lp(xs, ys) -> tuple[float, float, float]:
    """Float LP oracle: ``min h`` subject to ``|y_i - a x_i - b| <= h``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    ones = np.ones_like(x)
    # variables (a, b, h)
    A = np.vstack([np.column_stack([-x, -ones, -ones]), np.column_stack([x, ones, -ones])])
    ub = np.concatenate([-y, y])
    res = linprog([0, 0, 1], A_ub=A, b_ub=ub, bounds=[(None, None)] * 3, method="highs")
    if not res.success:
        raise RuntimeError(res.message)
    return float(res.x[0]), float(res.x[1]), float(res.x[2])


class MinimaxLinear(BaseEstimator, RegressorMixin):
    """Uniform-norm line fit ``y ~ a x + b`` on the training points.

    Parameters
    ----------
    exact : bool
        Run the exchange algorithm in rational arithmetic (inputs are
        converted with ``Fraction``; floats are taken at face value).
    max_iter : int
        Exchange-step budget.

    Attributes
    ----------
    coef_, intercept_ : float
    fit_ : MinimaxFit
        Exact result with the equioscillation witness.
    sup_error_ : float
    """

    def __init__(self, exact: bool = True, max_iter: int = 200):
        self.exact = exact
        self.max_iter = max_iter

    def fit(self, X, y):
        x = _column(X)
        if self.exact:
            fit = minimax_linear([Fraction(v) for v in x], [Fraction(v) for v in y], self.max_iter)
        else:
            a, b, h = minimax_linear_lp(x, y)
            fit = MinimaxFit(Fraction(a), Fraction(b), Fraction(h), [], 0)
        self.fit_ = fit
        self.coef_ = float(fit.slope)
        self.intercept_ = float(fit.intercept)
        self.sup_error_ = float(fit.error)
        return self

    def predict(self, X):
        return self.coef_ * np.asarray(_column(X), dtype=float) + self.intercept_

    def score(self, X, y, sample_weight=None):
        """Negative sup-norm error (larger is better)."""
        return -float(np.max(np.abs(self.predict(X) - np.asarray(y, dtype=float))))


def _column(X):
    if isinstance(X, (list, tuple)) and X and not isinstance(X[0], (list, tuple, np.ndarray)):
        return list(X)
    arr = np.asarray(X, dtype=object)
    return list(arr.reshape(len(arr), -1)[:, 0]) if arr.ndim > 1 else list(arr)


# ---------------------------------------------------------------------------
# rational fits in n

SHAPES = ((0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1), (0, 2), (1, 2), (2, 2))


@dataclass
class RationalFitN:
    """``P(n) / Q(n)`` with integer coefficients (low-to-high)."""

    p: tuple
    q: tuple
    shape: tuple
    scale: int
    train_dev: float
    holdout_dev: float

    def __call__(self, n):
        n = np.asarray(n, dtype=float)
        return np.polyval(self.p[::-1], n) / np.polyval(self.q[::-1], n)

    def bits(self) -> float:
        """Description length of the integer coefficients."""
        return sum(math.log2(1 + abs(c)) for c in self.p + self.q)

    def exact(self) -> RationalFunction:
        P = sum((int(c) * N_SYM**i for i, c in enumerate(self.p)), MultiPoly.const(0))
        Q = sum((int(c) * N_SYM**i for i, c in enumerate(self.q)), MultiPoly.const(0))
        return RationalFunction(P, Q)

    def to_dict(self) -> dict:
        return {
            "P": list(self.p), "Q": list(self.q), "shape": list(self.shape), "scale": self.scale,
            "train_rel_dev": self.train_dev, "holdout_rel_dev": self.holdout_dev,
        }


def _linearized_fit(n, y, dp, dq, iters: int = 4):
    """Weighted linearised least squares for ``P - y Q = 0`` with ``Q`` monic."""
    n = np.asarray(n, dtype=float)
    y = np.asarray(y, dtype=float)
    w = 1.0 / np.maximum(np.abs(y), 1e-300)
    q = np.zeros(dq + 1)
    q[-1] = 1.0
    p = np.zeros(dp + 1)
    for _ in range(iters):
        cols = [n**i for i in range(dp + 1)] + [-y * n**j for j in range(dq)]
        A = np.column_stack(cols) * w[:, None]
        b = y * n**dq * w
        sol, *_ = np.linalg.lstsq(A, b, rcond=None)
        p = sol[: dp + 1]
        q = np.concatenate([sol[dp + 1:], [1.0]])
        Qn = np.polyval(q[::-1], n)
        if np.any(Qn == 0):
            break
        w = 1.0 / np.maximum(np.abs(y * Qn), 1e-300)
    return p, q


def _rel_dev(p, q, n, y) -> float:
    n = np.asarray(n, dtype=float)
    y = np.asarray(y, dtype=float)
    Qn = np.polyval(np.asarray(q, dtype=float)[::-1], n)
    if np.any(np.abs(Qn) < 1e-12):
        return math.inf
    return float(np.max(np.abs(np.polyval(np.asarray(p, dtype=float)[::-1], n) / Qn - y) / np.abs(y)))


def rational_fit_in_n(
    n, y, shapes=SHAPES, holdout: float = 0.2, max_scale: int = 24, rel_tol: float = 1e-2
) -> tuple[RationalFitN, list]:
    """Simplest integer-coefficient ``P(n)/Q(n)`` matching a coefficient stream.

    Each shape is fitted by weighted linearised least squares on the first
    ``1 - holdout`` of the ``n`` values; the float coefficients are scaled
    by ``s = 1..max_scale`` and rounded. Among rounded candidates whose
    holdout (large ``n``) relative deviation is at most ``rel_tol``, the one
    with the lowest total degree, then the fewest coefficient bits, then the
    smallest deviation wins. If none qualifies the smallest holdout
    deviation wins. Returns the winner and
    every candidate tried.
    """
    n = np.asarray(n, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(y == 0):
        raise ValueError("coefficient stream contains zeros")
    cut = max(int(len(n) * (1 - holdout)), 3)
    tried = []
    for dp, dq in shapes:
        if dp + dq + 1 > cut:
            continue
        pf, qf = _linearized_fit(n[:cut], y[:cut], dp, dq)
        for s in range(1, max_scale + 1):
            p = tuple(int(round(s * c)) for c in pf)
            q = tuple(int(round(s * c)) for c in qf)
            if not any(q) or not any(p):
                continue
            tr = _rel_dev(p, q, n[:cut], y[:cut])
            ho = _rel_dev(p, q, n[cut:], y[cut:]) if cut < len(n) else tr
            tried.append(RationalFitN(p, q, (dp, dq), s, tr, ho))
    if not tried:
        raise ValueError("no admissible rational shape")
    ok = [c for c in tried if c.holdout_dev <= rel_tol]
    if ok:
        best = min(ok, key=lambda c: (sum(c.shape), c.bits(), c.holdout_dev))
    else:
        best = min(tried, key=lambda c: (c.holdout_dev, sum(c.shape), c.bits()))
    return best, tried


def pareto_front(tried, rel_tol: float = 5e-2, max_bits: float = 40.0) -> list:
    """Candidates not beaten in both coefficient bits and holdout deviation."""
    pool = sorted(
        (c for c in tried if c.holdout_dev <= rel_tol and c.bits() <= max_bits),
        key=lambda c: (c.bits(), c.holdout_dev),
    )
    front, best = [], math.inf
    for c in pool:
        if c.holdout_dev < best:
            front.append(c)
            best = c.holdout_dev
    return front


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    case: str
    sups: dict
    bounds: dict
    worst: dict
    passed: bool
    lattice: dict

    def to_dict(self) -> dict:
        return {
            "case": self.case, "sups": self.sups, "bounds": self.bounds,
            "worst": self.worst, "passed": self.passed, "lattice": self.lattice,
        }


def _quasi_numeric(sol: QuasiSolution, n, lam, k):
    c2, c1, c0 = sol.coefficient_values(np.float64(n), None if k is None else k)
    return (c2 * lam + c1) * lam + c0


def validate_quasi(
    candidate: QuasiSolution,
    case: str = "general",
    n_max: int = 200,
    k_values=None,
    t_max: float = 100.0,
    n_t: int = 401,
    n_random: int = 100,
    seed: int = 0,
    slack: float = 1e-9,
) -> ValidationReport:
    """Numeric sups of ``|delta_n|, |eps_n|, |C_n|`` against the case bounds.

    Lattice: ``n0 <= n <= n_max``, the case's ``k`` values, ``lambda = i t``
    with ``|t| <= t_max`` plus ``n_random`` random points with
    ``0 < Re lambda <= 20``, ``|Im lambda| <= t_max``. For the general case the
    bounds depend on ``k`` and are compared per ``k``.
    """
    spec = case_spec(case)
    if case == "general":
        ks = list(range(3, 61)) if k_values is None else list(k_values)
    elif case == "k2":
        ks = [2]
    else:
        ks = [None]
    rng = np.random.default_rng(seed)
    lam = np.concatenate([
        1j * np.linspace(-t_max, t_max, n_t),
        rng.uniform(0, 20, n_random) + 1j * rng.uniform(-t_max, t_max, n_random),
    ])
    cname = case
    sups = {"delta": 0.0, "eps": 0.0, "C": 0.0}
    worst = {}
    ok = True
    margins = {}
    for k in ks:
        kq = k if case == "general" else None
        # projective pair (a_{n+1}, a_n); exact zeros of a_n are harmless
        an, bn, d = coefficient_parts(cname, -1, lam, k)
        hi, lo = an / d, np.ones_like(lam)
        local = {"delta": 0.0, "eps": 0.0, "C": 0.0}
        where = {}
        qn = None
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            for n in range(0, n_max + 1):
                if n >= spec.n0:
                    qn = _quasi_numeric(candidate, n, lam, kq) if qn is None else qn
                    qn1 = _quasi_numeric(candidate, n + 1, lam, kq)
                    A_, B_, D_ = coefficient_parts(cname, n, lam, k)
                    A, B = A_ / D_, B_ / D_
                    vals = {
                        "delta": np.abs(hi / (lo * qn) - 1),
                        "eps": np.abs((A * qn + B) / (qn * qn1) - 1),
                        "C": np.abs(B / (qn * qn1)),
                    }
                    for key, v in vals.items():
                        v = np.where(np.isfinite(v), v, np.inf)
                        i = int(np.argmax(v))
                        if v[i] > local[key]:
                            local[key] = float(v[i])
                            where[key] = {"n": n, "k": k, "lambda": [float(lam[i].real), float(lam[i].imag)]}
                    qn = qn1
                an, bn, d = coefficient_parts(cname, n, lam, k)
                hi, lo = (an * hi + bn * lo) / d, hi
                s = np.maximum(np.abs(hi), np.abs(lo))
                hi, lo = hi / s, lo / s
        bound = {q: float(spec.bound_value(q, k)) for q in ("delta", "eps", "C")}
        for key in local:
            if local[key] > sups[key]:
                sups[key] = local[key]
                worst[key] = where.get(key)
            margin = bound[key] - local[key]
            margins.setdefault(key, math.inf)
            margins[key] = min(margins[key], margin)
            if local[key] > bound[key] + slack:
                ok = False
    bounds = (
        {"delta": "1/2", "eps": "5/12 - 1/k", "C": "1/12 + 1/k"}
        if case == "general"
        else {q: str(spec.bound_value(q)) for q in ("delta", "eps", "C")}
    )
    return ValidationReport(
        case=case,
        sups=sups,
        bounds={**bounds, "min_margin": margins},
        worst=worst,
        passed=ok,
        lattice={
            "n": [spec.n0, n_max], "k": [ks[0], ks[-1]] if ks[0] is not None else None,
            "t_max": t_max, "n_t": n_t, "n_random": n_random, "seed": seed,
        },
    )


# ---------------------------------------------------------------------------
# pipeline


COARSE_LATTICE = {
    "general": {"n_max": 60, "k_values": (3, 4, 5, 6, 8, 12, 20, 40, 60), "n_t": 101, "n_random": 20},
    "d3": {"n_max": 60, "n_t": 101, "n_random": 20},
}


class QuasiSolutionFitter(BaseEstimator):
    """End-to-end quasi-solution construction.

    Parameters
    ----------
    case : {"general", "d3"}
    n_range, k_range : tuple of int
        Inclusive sample ranges (``k_range`` unused for d3).
    fit_n_min : int
        Smallest ``n`` used by the rational fits; below it the streams are
        dominated by transients of the recurrence and are only recorded.
    holdout : float
        Fraction of the ``n`` range held out when choosing rational shapes.
    max_scale : int
        Largest integer scale tried when rounding rational-fit coefficients.
    rel_tol : float
        Relative deviation accepted when preferring simpler rational shapes.
    probe : int or Fraction
        Step of the central differences in ``lambda`` (see :func:`gen_sequences`).
    max_bits : float
        Coefficient-bit budget for candidates kept on a stream's Pareto front.
    max_combos : int
        Number of front combinations tried by the coarse validation.

    Attributes
    ----------
    dataset_ : FitDataset
    minimax_ : dict
        ``(j, n) -> MinimaxFit`` for the reciprocal of ``seq_j`` (general case).
    rational_ : dict
        Name of each fitted stream -> selected :class:`RationalFitN`.
    selection_ : dict
        Outcome of the coarse-validation search over Pareto fronts.
    quasi_solution_ : QuasiSolution
    """

    def __init__(
        self,
        case: str = "general",
        n_range=(2, 120),
        k_range=(3, 60),
        fit_n_min: int = 20,
        holdout: float = 0.2,
        max_scale: int = 24,
        rel_tol: float = 5e-2,
        probe=1,
        max_bits: float = 40.0,
        max_combos: int = 4096,
    ):
        self.probe = probe
        self.max_bits = max_bits
        self.max_combos = max_combos
        self.case = case
        self.n_range = n_range
        self.k_range = k_range
        self.fit_n_min = fit_n_min
        self.holdout = holdout
        self.max_scale = max_scale
        self.rel_tol = rel_tol

    def fit(self, X=None, y=None):
        if self.case not in ("general", "d3"):
            raise ValueError("the recipe is defined for the general and d3 cases")
        ds = gen_sequences(self.n_range, self.k_range, self.case, probe=self.probe)
        self.dataset_ = ds
        all_n = sorted({n for n, _ in ds.keys()})
        ns = [n for n in all_n if n >= self.fit_n_min]
        if len(ns) < 5:
            raise ValueError("fewer than 5 sample indices at or above fit_n_min")
        opts = {"holdout": self.holdout, "max_scale": self.max_scale, "rel_tol": self.rel_tol}
        self.minimax_ = {}
        self.rational_ = {}
        fronts = {}
        for j in range(3):
            seq = (ds.seq0, ds.seq1, ds.seq2)[j]
            if self.case == "d3":
                streams = {f"recip{j}": [1 / float(seq[(n, None)]) for n in ns]}
            else:
                slopes, inters = {}, {}
                for n in all_n:
                    ks, vals = ds.stream(j, n)
                    mm = minimax_linear(ks, [1 / v for v in vals])
                    self.minimax_[(j, n)] = mm
                    slopes[n], inters[n] = float(mm.slope), float(mm.intercept)
                streams = {f"alpha{j}": [slopes[n] for n in ns], f"beta{j}": [inters[n] for n in ns]}
            for name, y_ in streams.items():
                best, tried = rational_fit_in_n(ns, y_, **opts)
                self.rational_[name] = best
                fronts[name] = pareto_front(tried, self.rel_tol, self.max_bits) or [best]
        self.selection_ = self._select(fronts)
        self.quasi_solution_ = self._assemble(self.rational_)
        return self

    def _assemble(self, fits: dict) -> QuasiSolution:
        coeffs = []
        for j in range(3):
            if self.case == "d3":
                R = fits[f"recip{j}"].exact()
                coeffs.append(RationalFunction(R.den, R.num))
                continue
            a, b = fits[f"alpha{j}"].exact(), fits[f"beta{j}"].exact()
            # 1 / (a k + b) with a = Pa/Qa, b = Pb/Qb
            coeffs.append(RationalFunction(a.den * b.den, a.num * b.den * K_SYM + b.num * a.den))
        return QuasiSolution(c2=coeffs[2], c1=coeffs[1], c0=coeffs[0], label=f"fitted-{self.case}")

    def _select(self, fronts: dict) -> dict:
        """Simplest front combination passing a coarse validation.

        Combinations are visited by increasing total coefficient bits; the
        first one whose coarse-lattice sups meet the case bounds replaces the
        per-stream winners in ``rational_``. Without a passing combination the
        per-stream winners are kept and the outcome is recorded.
        """
        names = sorted(fronts)
        combos = sorted(
            itertools.product(*(fronts[name] for name in names)),
            key=lambda c: (sum(f.bits() for f in c), max(f.holdout_dev for f in c)),
        )[: self.max_combos]
        for i, combo in enumerate(combos):
            fits = dict(zip(names, combo))
            report = validate_quasi(self._assemble(fits), self.case, **COARSE_LATTICE[self.case])
            if report.passed:
                self.rational_ = fits
                return {"front_sizes": {k: len(v) for k, v in fronts.items()}, "visited": i + 1,
                        "passed": True, "coarse_sups": report.sups}
        return {"front_sizes": {k: len(v) for k, v in fronts.items()}, "visited": len(combos),
                "passed": False, "coarse_sups": None}

    def predict(self, X):
        """``r~_n(lambda, k)`` for rows ``(n, lambda[, k])``."""
        X = np.asarray(X, dtype=complex)
        k = None if self.case == "d3" else X[:, 2].real
        return self.quasi_solution_.evaluate(X[:, 0].real, X[:, 1], k)

    def artifacts(self) -> dict:
        """Per-stage outputs in JSON-able form."""
        out = {
            "dataset": self.dataset_.to_dict(),
            "rational_fits": {name: f.to_dict() for name, f in self.rational_.items()},
            "selection": self.selection_,
            "fit_n_min": self.fit_n_min,
            "quasi_solution": self.quasi_solution_.to_dict(),
        }
        if self.minimax_:
            out["minimax"] = {
                f"seq{j}/n={n}": fit.to_dict() for (j, n), fit in sorted(self.minimax_.items())
            }
        return out


def corrupted_quasi() -> QuasiSolution:
    """The constant quasi-solution 1 (negative control)."""
    zero = RationalFunction(MultiPoly.const(0))
    return QuasiSolution(c2=zero, c1=zero, c0=RationalFunction(MultiPoly.const(1)), label="constant-1")


def check_sequence_identities(ds: FitDataset, samples: int = 20, seed: int = 0) -> list:
    """Recompute a few lattice points directly from :func:`ratio_seq` and list mismatches."""
    rng = np.random.default_rng(seed)
    keys = ds.keys()
    picks = [keys[i] for i in rng.choice(len(keys), size=min(samples, len(keys)), replace=False)]
    bad = []
    cname = "d3" if ds.case == "d3" else "general"
    for n, k in picks:
        h = ds.probe
        r = {s: ratio_seq(cname, s * h, n, k).value(n) for s in (-1, 0, 1)}
        if (
            ds.seq0[(n, k)] != r[0]
            or ds.seq1[(n, k)] != (r[1] - r[-1]) / (2 * h)
            or ds.seq2[(n, k)] != (r[1] + r[-1] - 2 * r[0]) / (2 * h * h)
        ):
            bad.append((n, k))
    return bad


__all__ = [
    "FitDataset", "MinimaxFit", "MinimaxLinear", "QuasiSolutionFitter", "RationalFitN", "ValidationReport",
    "check_sequence_identities", "corrupted_quasi", "gen_sequences", "minimax_linear", "minimax_linear_lp",
    "pareto_front", "rational_fit_in_n", "validate_quasi",
]
