"""Heun-series recurrences, ratio sequences and quasi-solutions.

The power series ``sum a_n x^n`` (``a_0 = 1``, ``a_{-1} = 0``) of the
solution analytic at the origin obeys a three-term recurrence

    a_{n+2} = A_n a_{n+1} + B_n a_n,

and its ratios ``r_n = a_{n+1} / a_n`` obey ``r_{n+1} = A_n + B_n / r_n``.
The coefficient formulas are written once, generically in ``(n, lam, k)``,
so the same code returns exact ``Fraction`` values, float/complex numpy
arrays, or :class:`RationalFunction` objects when fed :class:`MultiPoly`
symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ratpoly import MultiPoly, RationalFunction, shift_vars

LAM, N, K = MultiPoly.vars("lambda n k")

CASES = ("general", "k2", "d3")


# ---------------------------------------------------------------------------
# case bookkeeping


@dataclass(frozen=True)
class CaseSpec:
    """One branch of the proof with its start index, shifts and bounds.

    ``bounds`` maps ``delta``, ``eps`` and ``C`` to rational functions of
    ``k`` (constants outside the general case). ``shifts`` moves the case's
    ``n``/``k`` domain onto the nonnegative integers.
    """

    name: str
    k: int | None
    n0: int
    bounds: dict = field(hash=False)
    shifts: dict = field(hash=False)
    k_domain: str = ""

    @property
    def small_root(self):
        if self.name == "d3":
            return Fraction(1, 2)
        if self.k is None:
            return RationalFunction(MultiPoly.const(-1), K)
        return Fraction(-1, self.k)

    def bound(self, quantity: str) -> RationalFunction:
        return self.bounds[quantity]

    def bound_value(self, quantity: str, k=None):
        b = self.bounds[quantity]
        if self.name == "general":
            if k is None:
                raise ValueError("general case bounds depend on k")
            return b.evaluate({"k": k})
        return b.evaluate({})

    def describe(self) -> dict:
        return {
            "case": self.name,
            "k": self.k if self.k is not None else ("1 (d = 3)" if self.name == "d3" else "symbolic (k >= 3)"),
            "n0": self.n0,
            "shifts": dict(self.shifts),
            "bounds": {q: str(b) for q, b in self.bounds.items()},
            "k_domain": self.k_domain,
        }


def _const(x) -> RationalFunction:
    return RationalFunction(MultiPoly.const(Fraction(x)))


def case_spec(name: str) -> CaseSpec:
    if name == "general":
        return CaseSpec(
            name="general",
            k=None,
            n0=2,
            bounds={
                "delta": _const(Fraction(1, 2)),
                "eps": Fraction(5, 12) - RationalFunction(MultiPoly.const(1), K),
                "C": Fraction(1, 12) + RationalFunction(MultiPoly.const(1), K),
            },
            shifts={"n": 2, "k": 3},
            k_domain="k >= 3 (k -> k+3)",
        )
    if name == "k2":
        return CaseSpec(
            name="k2",
            k=2,
            n0=4,
            bounds={
                "delta": _const(Fraction(1, 3)),
                "eps": _const(Fraction(1, 18)),
                "C": _const(Fraction(11, 20)),
            },
            shifts={"n": 4},
            k_domain="k = 2",
        )
    if name == "d3":
        return CaseSpec(
            name="d3",
            k=None,
            n0=1,
            bounds={
                "delta": _const(Fraction(1, 3)),
                "eps": _const(Fraction(1, 12)),
                "C": _const(Fraction(1, 2)),
            },
            shifts={"n": 1},
            k_domain="d = 3 (Moebius-transformed equation)",
        )
    raise ValueError(f"unknown case {name!r}; expected one of {CASES}")


def _resolve(case) -> CaseSpec:
    return case if isinstance(case, CaseSpec) else case_spec(case)


# ---------------------------------------------------------------------------
# coefficients


def _is_symbolic(*xs) -> bool:
    return any(isinstance(x, (MultiPoly, RationalFunction)) for x in xs)


def _quotient(num, den):
    if isinstance(num, MultiPoly) or isinstance(den, MultiPoly):
        return RationalFunction(num, den)
    if isinstance(den, (int, Fraction)) and not isinstance(den, bool):
        if den == 0:
            raise ZeroDivisionError("zero denominator in recurrence coefficient")
        if isinstance(num, (int, Fraction)):
            return Fraction(num) / den
    return num / den


def _A_parts(n, lam, k):
    num = k * lam**2 + k * (4 * n + 9) * lam + 4 * k * n**2 + 16 * n * k - 4 * n**2 + 14 * k - 16 * n - 16
    return num, _AB_den(n, k)


def _B_parts(n, lam, k):
    return (lam + 2 * n + 3) * (lam + 2 * n + 2), _AB_den(n, k)


def _AB_den(n, k):
    return 2 * k * (n + 2) * (2 * n + k + 8)


def _check_n(n):
    if not _is_symbolic(n) and isinstance(n, (int, Fraction)) and n == -2:
        raise ValueError("A_n, B_n are undefined at n = -2 (zero denominator)")


def coeff_A(n=N, lam=LAM, k=K):
    """``A_n(lam, k)``; pass MultiPoly symbols (the defaults) for the symbolic form."""
    _check_n(n)
    return _quotient(*_A_parts(n, lam, k))


def coeff_B(n=N, lam=LAM, k=K):
    """``B_n(lam, k) = (lam+2n+3)(lam+2n+2) / (2k(n+2)(2n+k+8))``."""
    _check_n(n)
    return _quotient(*_B_parts(n, lam, k))


def _A3_parts(n, lam):
    return 12 * n**2 + (8 * lam + 56) * n + lam**2 + 20 * lam + 56, _AB3_den(n)


def _B3_parts(n, lam):
    return -(4 * n**2 + (4 * lam + 12) * n + lam**2 + 6 * lam + 8), _AB3_den(n)


def _AB3_den(n):
    return 8 * n**2 + 52 * n + 72


def coeff_A_d3(n=N, lam=LAM):
    """Recurrence coefficient ``A_n`` of the transformed ``d = 3`` equation."""
    return _quotient(*_A3_parts(n, lam))


def coeff_B_d3(n=N, lam=LAM):
    return _quotient(*_B3_parts(n, lam))


def coefficient_parts(case, n, lam, k=None):
    """Return ``(A_num, B_num, common_den)`` for the case."""
    spec = _resolve(case)
    if spec.name == "d3":
        (an, d), (bn, _) = _A3_parts(n, lam), _B3_parts(n, lam)
        return an, bn, d
    k = _case_k(spec, k)
    (an, d), (bn, _) = _A_parts(n, lam, k), _B_parts(n, lam, k)
    return an, bn, d


def _case_k(spec: CaseSpec, k):
    if spec.k is not None:
        if k is not None and not _is_symbolic(k) and k != spec.k:
            raise ValueError(f"case {spec.name} fixes k = {spec.k}")
        return spec.k
    if k is None:
        return K
    return k


def characteristic_roots(case) -> tuple:
    """Roots of ``t^2 - A t - B`` with the limiting coefficients."""
    spec = _resolve(case)
    if spec.name == "d3":
        return Fraction(1), Fraction(1, 2)
    return Fraction(1), spec.small_root


# ---------------------------------------------------------------------------
# ratio sequences


@dataclass
class ProjectiveRatios:
    """Ratios ``r_n = a_{n+1} / a_n`` stored as normalised pairs ``(p, q)``.

    ``q == 0`` encodes an infinite ratio. ``log_scale[n]`` is ``log|a_n|``
    when the pairs were produced in floating point (``None`` for exact runs).
    """

    pairs: list
    exact: bool
    log_scale: np.ndarray | None = None

    def __len__(self):
        return len(self.pairs)

    def value(self, n: int):
        p, q = self.pairs[n]
        if q == 0:
            return math.inf
        return p / q if not self.exact else Fraction(p) / Fraction(q)

    def values(self) -> list:
        return [self.value(i) for i in range(len(self.pairs))]

    def is_infinite(self, n: int) -> bool:
        return self.pairs[n][1] == 0


def ratio_seq(case, lam, N: int, k=None) -> ProjectiveRatios:
    """Ratios ``r_0..r_N`` tracked projectively.

    Exact (``Fraction``) arithmetic is used when ``lam`` and ``k`` are
    rational, complex floating point otherwise; the float path renormalises
    each pair by its larger modulus and accumulates ``log|a_n|``.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    spec = _resolve(case)
    exact = isinstance(lam, (int, Fraction)) and not isinstance(lam, bool)
    if exact:
        lam = Fraction(lam)
    else:
        lam = complex(lam)
    kk = None if spec.name == "d3" else _case_k(spec, k)
    if kk is K:
        raise ValueError("numeric ratio sequences need a concrete k")

    pairs = []
    logs = [0.0]
    hi, lo = (Fraction(1), Fraction(0)) if exact else (1.0 + 0j, 0j)  # (a_0, a_{-1})
    for n in range(-1, N):
        an, bn, d = coefficient_parts(spec, n, lam, kk)
        if exact:
            hi, lo = (an * hi + bn * lo) / d, hi
        else:
            hi, lo = (complex(an) * hi + complex(bn) * lo) / complex(d), hi
        # pair (a_{n+2}, a_{n+1}) -> r_{n+1}
        if exact:
            if lo != 0:
                pairs.append((hi / lo, Fraction(1)))
            else:
                pairs.append((Fraction(1), Fraction(0)))
        else:
            s = max(abs(hi), abs(lo))
            if s == 0:
                raise ArithmeticError("recurrence collapsed to the zero vector")
            logs.append(logs[-1] + math.log(s))
            hi, lo = hi / s, lo / s
            pairs.append((hi, lo))
    if exact:
        return ProjectiveRatios(pairs=pairs, exact=True)
    # logs[j] = log of the cumulative scale after producing a_{j}; |a_n| = |lo_n| * exp(logs)
    log_scale = np.array(logs[1:]) + np.log(np.abs([q for _, q in pairs]) + 1e-300)
    return ProjectiveRatios(pairs=pairs, exact=False, log_scale=log_scale)


def series_coefficients(case, lam, N: int, k=None) -> list:
    """``a_0..a_N`` straight from the three-term recurrence."""
    spec = _resolve(case)
    kk = None if spec.name == "d3" else _case_k(spec, k)
    a = [Fraction(1) if isinstance(lam, (int, Fraction)) else 1.0 + 0j]
    prev = 0 * a[0]
    for n in range(-1, N - 1):
        an, bn, d = coefficient_parts(spec, n, lam, kk)
        nxt = (an * a[-1] + bn * prev) / d
        prev = a[-1]
        a.append(nxt)
    return a


def ratio_iterate(case, lam: np.ndarray, k, n_max: int, keep_from: int):
    """Vectorised float ratio iteration for scanning.

    Returns ``(history, n_index, log_abs_a)`` where ``history[j]`` holds
    ``r_n`` for ``n = n_index[j]`` (all ``n >= keep_from``) and ``log_abs_a``
    is ``log|a_{n_max}|`` per point.
    """
    spec = _resolve(case)
    kk = None if spec.name == "d3" else _case_k(spec, k)
    lam = np.asarray(lam, dtype=complex)
    hi = np.ones_like(lam)
    lo = np.zeros_like(lam)
    logacc = np.zeros(lam.shape)
    keep = []
    idx = []
    for n in range(-1, n_max):
        an, bn, d = coefficient_parts(spec, n, lam, kk)
        hi, lo = (an * hi + bn * lo) / d, hi
        s = np.maximum(np.abs(hi), np.abs(lo))
        logacc += np.log(s)
        hi = hi / s
        lo = lo / s
        if n + 1 >= keep_from:
            with np.errstate(divide="ignore", invalid="ignore"):
                keep.append(hi / lo)
            idx.append(n + 1)
    log_abs_a = logacc + np.log(np.abs(lo) + 1e-300)
    return np.array(keep), np.array(idx), log_abs_a


# ---------------------------------------------------------------------------
# quasi-solutions


@dataclass
class QuasiSolution:
    """Quadratic-in-lambda approximation ``c2 lam^2 + c1 lam + c0`` to ``r_n``.

    Each coefficient is a RationalFunction in ``n`` (and ``k``).
    """

    c2: RationalFunction
    c1: RationalFunction
    c0: RationalFunction
    label: str = ""

    def as_rational_function(self) -> RationalFunction:
        return self.c2 * RationalFunction(LAM**2) + self.c1 * RationalFunction(LAM) + self.c0

    def evaluate(self, n, lam, k=None):
        point = {"n": n}
        if k is not None:
            point["k"] = k
        vals = [_eval_rf(c, point) for c in (self.c2, self.c1, self.c0)]
        return (vals[0] * lam + vals[1]) * lam + vals[2]

    def coefficient_values(self, n, k=None):
        point = {"n": n}
        if k is not None:
            point["k"] = k
        return tuple(_eval_rf(c, point) for c in (self.c2, self.c1, self.c0))

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "c2": {"num": str(self.c2.num), "den": str(self.c2.den)},
            "c1": {"num": str(self.c1.num), "den": str(self.c1.den)},
            "c0": {"num": str(self.c0.num), "den": str(self.c0.den)},
        }


def _eval_rf(rf: RationalFunction, point: dict):
    if any(isinstance(v, np.ndarray) or isinstance(v, (float, complex)) for v in point.values()):
        return evaluate_numeric(rf.num, point) / evaluate_numeric(rf.den, point)
    return rf.evaluate(point)


def evaluate_numeric(p: MultiPoly, point: dict):
    """Float evaluation of an exact polynomial at numeric (possibly array) values."""
    from .ratpoly import VARS

    vals = [point.get(v) for v in VARS]
    total = 0.0
    for exp, c in p.items():
        term = float(c)
        for i, e in enumerate(exp):
            if e:
                term = term * vals[i] ** e
        total = total + term
    return total


def _rf(num, den) -> RationalFunction:
    return RationalFunction(num, den)


QUASI_GENERAL = QuasiSolution(
    c2=_rf(MultiPoly.const(1), 2 * (2 * N**2 + (K + 8) * N + K + 5)),
    c1=_rf(MultiPoly.const(2), 2 * N + K + 6),
    c0=_rf(2 * N + 3, 2 * N + K + 6),
    label="general",
)

QUASI_D3 = QuasiSolution(
    c2=_rf(MultiPoly.const(1), 8 * N**2 + 33 * N + 28),
    c1=_rf(MultiPoly.const(5), 5 * N + 16),
    c0=_rf(5 * N + 6, 5 * N + 13),
    label="d3",
)


def default_quasi(case) -> QuasiSolution:
    spec = _resolve(case)
    if spec.name == "d3":
        return QUASI_D3
    if spec.name == "k2":
        q = QUASI_GENERAL
        return QuasiSolution(
            c2=q.c2.partial({"k": 2}), c1=q.c1.partial({"k": 2}), c0=q.c0.partial({"k": 2}), label="k2"
        )
    return QUASI_GENERAL


def quasi(case, n=N, lam=LAM, k=None, solution: QuasiSolution | None = None):
    """Evaluate the case's quasi-solution; symbolic inputs give a RationalFunction."""
    spec = _resolve(case)
    sol = solution or default_quasi(spec)
    if _is_symbolic(n, lam, k) or (spec.name == "general" and k is None):
        rf = sol.as_rational_function()
        point = {}
        if not _is_symbolic(n):
            point["n"] = n
        if k is not None and not _is_symbolic(k):
            point["k"] = k
        if not _is_symbolic(lam):
            point["lambda"] = lam
        return rf.partial(point) if point else rf
    kk = None if spec.name == "d3" else _case_k(spec, k)
    return sol.evaluate(n, lam, kk if spec.name == "general" else None)


# ---------------------------------------------------------------------------
# symbolic ratios and the derived quantities


def ratio_symbolic(case, n_target: int, k=None) -> RationalFunction:
    """Exact ``r_{n_target}`` as a rational function of ``lambda`` (and ``k``).

    Built by composing ``r_0 = A_{-1}`` with ``n_target`` steps of the ratio
    recursion over a common denominator.
    """
    spec = _resolve(case)
    kk = None if spec.name == "d3" else _case_k(spec, k)
    an, bn, d = coefficient_parts(spec, -1, LAM, kk)
    p, q = _poly(an), _poly(d)  # r = p / q
    for j in range(n_target):
        an, bn, d = coefficient_parts(spec, j, LAM, kk)
        # r_{j+1} = (an * p + bn * q) / (d * p)
        p, q = _poly(an) * p + _poly(bn) * q, _poly(d) * p
        c = _joint_content(p, q)
        p, q = p * (1 / c), q * (1 / c)
    return RationalFunction(p, q)


def _poly(x) -> MultiPoly:
    return x if isinstance(x, MultiPoly) else MultiPoly.const(Fraction(x))


def _joint_content(p: MultiPoly, q: MultiPoly) -> Fraction:
    a, b = p.content(), q.content()
    return Fraction(math.gcd(a.numerator, b.numerator), math.lcm(a.denominator, b.denominator))


@dataclass
class DerivedQuantities:
    delta_start: RationalFunction
    eps: RationalFunction
    C: RationalFunction
    n0: int


def _quasi_parts(spec: CaseSpec, solution: QuasiSolution | None, kk):
    rf = (solution or default_quasi(spec)).as_rational_function()
    if kk is not None and not _is_symbolic(kk):
        rf = rf.partial({"k": kk})
    return rf.num, rf.den


def derived_quantities(case, solution: QuasiSolution | None = None, k=None) -> DerivedQuantities:
    """Symbolic ``delta_{n0}``, ``eps_n`` and ``C_n`` for the case.

    With ``r~_n = Nq/Dq`` and ``A_n = An/Ad``, ``B_n = Bn/Ad``:

        eps_n = ((An Nq_n + Bn Dq_n) Dq_{n+1} - Ad Nq_n Nq_{n+1}) / (Ad Nq_n Nq_{n+1})
        C_n   = Bn Dq_n Dq_{n+1} / (Ad Nq_n Nq_{n+1})
    """
    spec = _resolve(case)
    kk = None if spec.name == "d3" else _case_k(spec, k)
    an, bn, ad = (_poly(x) for x in coefficient_parts(spec, N, LAM, kk))
    nq, dq = _quasi_parts(spec, solution, kk)
    nq1, dq1 = shift_vars(nq, {"n": 1}), shift_vars(dq, {"n": 1})
    eps = RationalFunction((an * nq + bn * dq) * dq1 - ad * nq * nq1, ad * nq * nq1)
    C = RationalFunction(bn * dq * dq1, ad * nq * nq1)

    r0 = ratio_symbolic(spec, spec.n0, kk if kk is not K else None)
    nq0, dq0 = nq.partial({"n": spec.n0}), dq.partial({"n": spec.n0})
    # delta = r / r~ - 1 = (r.num * dq0 - r.den * nq0) / (r.den * nq0)
    delta = RationalFunction(r0.num * dq0 - r0.den * nq0, r0.den * nq0)
    return DerivedQuantities(delta_start=delta, eps=eps, C=C, n0=spec.n0)


def derived_numeric(case, n, lam, k=None, solution: QuasiSolution | None = None):
    """Float ``(eps_n, C_n)`` at numeric (array) arguments, straight from the definitions."""
    spec = _resolve(case)
    sol = solution or default_quasi(spec)
    kk = None if spec.name == "d3" else _case_k(spec, k)
    an, bn, d = coefficient_parts(spec, n, lam, kk)
    A, B = an / d, bn / d
    kq = kk if spec.name == "general" else None
    rt = sol.evaluate(n, lam, kq)
    rt1 = sol.evaluate(n + 1, lam, kq)
    eps = (A * rt + B) / (rt * rt1) - 1
    C = B / (rt * rt1)
    return eps, C


def delta_numeric(case, lam, k=None, n=None, solution: QuasiSolution | None = None):
    """Float ``delta_n = r_n / r~_n - 1`` from the ratio recursion (default ``n = n0``)."""
    spec = _resolve(case)
    sol = solution or default_quasi(spec)
    n = spec.n0 if n is None else n
    kk = None if spec.name == "d3" else _case_k(spec, k)
    lam = np.asarray(lam, dtype=complex)
    an, bn, d = coefficient_parts(spec, -1, lam, kk)
    r = an / d
    for j in range(n):
        an, bn, d = coefficient_parts(spec, j, lam, kk)
        r = (an + bn / r) / d
    return r / sol.evaluate(n, lam, kk if spec.name == "general" else None) - 1


# ---------------------------------------------------------------------------
# Heun reduction (symbolic, sympy)


@dataclass
class HeunRecord:
    """Canonical-form data of the reduced equation ``y'' + P y' + Q y = 0``."""

    d: int | None
    variable: object
    P: object
    Q: object
    singular_points: tuple
    exponents_at_0: tuple
    A: object
    B: object
    transformed: bool = False
    notes: list = field(default_factory=list)


def _sympy_symbols():
    import sympy as sp

    return sp.symbols("lambda n k", real=False)


def heun_reduce(d: int | None = None) -> HeunRecord:
    """Reduce the supersymmetric problem to Heun's canonical form.

    ``x = rho^2`` and ``u~ = x y(x)``. For ``d = 3`` the Moebius map
    ``z = 2x/(x+1)`` with ``y = (2-z)^(lam/2+1) w(z)`` is applied as well.
    ``d=None`` keeps ``k = d - 2`` symbolic. The returned record carries the
    recurrence coefficients re-derived by inserting a power series.
    """
    import sympy as sp

    if d is not None and d < 3:
        raise ValueError("dimension must be >= 3")
    lam, n, ks = _sympy_symbols()
    k = ks if d is None else sp.Integer(d - 2)
    rho = sp.Symbol("rho", positive=True)
    x = sp.Symbol("x")
    y = sp.Function("y")

    # supersymmetric equation with V~ = -2k(rho^2-k-2)/(rho^2(rho^2+k))
    Vt = -2 * k * (rho**2 - k - 2) / (rho**2 * (rho**2 + k))
    U = x * y(x)
    dU_dx = sp.diff(U, x)
    dU = 2 * rho * dU_dx.subs(x, rho**2)
    d2U = sp.diff(dU, rho)
    # d2U still contains derivatives evaluated at rho^2; rewrite via xreplace
    expr = (1 - rho**2) * d2U + ((k + 1) / rho - 2 * (lam + 1) * rho) * dU - lam * (lam + 1) * U.subs(x, rho**2) - Vt * U.subs(x, rho**2)
    expr = expr.subs(rho, sp.sqrt(x))
    expr = sp.expand(expr.doit())
    yy, y1, y2 = sp.symbols("Y Y1 Y2")
    expr = expr.subs(sp.Derivative(y(x), (x, 2)), y2).subs(sp.Derivative(y(x), x), y1).subs(y(x), yy)
    expr = sp.together(expr)
    c2 = sp.cancel(sp.diff(expr, y2))
    c1 = sp.cancel(sp.diff(expr, y1))
    c0 = sp.cancel(sp.diff(expr, yy))
    Pc = sp.cancel(c1 / c2)
    Qc = sp.cancel(c0 / c2)
    notes = ["x = rho^2, u~ = x y(x)"]
    var = x
    transformed = False
    if d == 3:
        z = sp.Symbol("z")
        w = sp.Function("w")
        xz = z / (2 - z)
        dzdx = sp.cancel(sp.diff(2 * x / (x + 1), x).subs(x, xz))
        Y = (2 - z) ** (lam / 2 + 1) * w(z)
        Yx = sp.diff(Y, z) * dzdx
        Yxx = sp.diff(Yx, z) * dzdx
        e2 = Yxx + Pc.subs(x, xz) * Yx + Qc.subs(x, xz) * Y
        w0, w1, w2 = sp.symbols("W W1 W2")
        e2 = e2.subs(sp.Derivative(w(z), (z, 2)), w2).subs(sp.Derivative(w(z), z), w1).subs(w(z), w0)
        e2 = sp.expand(e2 / (2 - z) ** (lam / 2 + 1))
        e2 = sp.powsimp(sp.expand(e2), force=True)
        c2 = sp.cancel(sp.diff(e2, w2))
        c1 = sp.cancel(sp.diff(e2, w1))
        c0 = sp.cancel(sp.diff(e2, w0))
        Pc = sp.cancel(sp.simplify(c1 / c2))
        Qc = sp.cancel(sp.simplify(c0 / c2))
        var = z
        transformed = True
        notes.append("z = 2x/(x+1), y = (2-z)^(lambda/2+1) w(z)")

    den = sp.lcm(sp.denom(sp.together(Pc)), sp.denom(sp.together(Qc)))
    sing = tuple(sorted(set(sp.solve(den, var)), key=lambda s: sp.default_sort_key(s)))
    from .odes import indicial_roots

    exps = indicial_roots(sp.Integer(1), Pc, Qc, var, 0)
    A, B = _series_recurrence(Pc, Qc, var, n)
    return HeunRecord(
        d=d, variable=var, P=Pc, Q=Qc, singular_points=sing, exponents_at_0=exps,
        A=A, B=B, transformed=transformed, notes=notes,
    )


def _series_recurrence(Pc, Qc, x, n):
    """Insert ``sum a_j x^j`` and solve the three-term relation for ``A_n, B_n``.

    After clearing denominators, the coefficient of ``x^M`` is
    ``sum_s c_s(M) a_{M-s}`` with
    ``c_s(M) = p2[s+2](M-s)(M-s-1) + p1[s+1](M-s) + p0[s]``.
    """
    import sympy as sp

    den = sp.lcm(sp.denom(sp.together(Pc)), sp.denom(sp.together(Qc)))
    p2 = sp.Poly(sp.expand(den), x).all_coeffs()[::-1]
    p1 = sp.Poly(sp.cancel(Pc * den), x).all_coeffs()[::-1]
    p0 = sp.Poly(sp.cancel(Qc * den), x).all_coeffs()[::-1]

    def at(seq, i):
        return seq[i] if 0 <= i < len(seq) else 0

    M = sp.Symbol("M")
    coeffs = {}
    for s in range(-2, max(len(p2), len(p1), len(p0)) + 1):
        c = sp.expand(at(p2, s + 2) * (M - s) * (M - s - 1) + at(p1, s + 1) * (M - s) + at(p0, s))
        if c != 0:
            coeffs[s] = c
    offsets = sorted(coeffs)
    if len(offsets) != 3 or offsets != list(range(offsets[0], offsets[0] + 3)):
        raise ArithmeticError(f"not a three-term recurrence (offsets {offsets})")
    s0 = offsets[0]
    sub = {M: n + 2 + s0}
    c2, c1, c0 = (coeffs[s0 + j].subs(sub) for j in range(3))
    return sp.factor(sp.cancel(-c1 / c2)), sp.factor(sp.cancel(-c0 / c2))
