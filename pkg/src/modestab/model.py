"""The co-rotational wave-map spectral problem and its supersymmetric partner.

Dimension ``d`` is carried as ``d = 2m + 1 = k + 2``. The self-similar
profile is ``f(rho) = 2 arctan(rho / sqrt(d - 2))`` with nonlinearity
``g(psi) = (d - 1) sin(psi) cos(psi)``; the linearised mode equation is

    (1 - rho^2) u'' + [(d-1)/rho - 2(lam+1) rho] u' - lam(lam+1) u - V u = 0.

The partner problem has the same form with ``V`` replaced by ``V~``; the
chain of substitutions relating the two is built symbolically in
:func:`susy_chain` and applied to sampled data in :func:`transform_solution`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .report import Certificate


@dataclass(frozen=True)
class ModeProblem:
    """Dimension bookkeeping: ``d = 2m + 1 = k + 2``."""

    d: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 3:
            raise ValueError(f"dimension must be an integer >= 3, got {self.d}")

    @property
    def m(self) -> Fraction:
        return Fraction(self.d - 1, 2)

    @property
    def k(self) -> int:
        return self.d - 2

    @classmethod
    def from_m(cls, m) -> "ModeProblem":
        return cls(int(2 * Fraction(m) + 1))

    @classmethod
    def from_k(cls, k: int) -> "ModeProblem":
        return cls(k + 2)


def _check_d(d) -> int:
    return ModeProblem(d).d


def _rho(rho, lo=0.0, hi=1.0, strict=False):
    r = np.asarray(rho, dtype=float)
    bad = (r <= lo) | (r >= hi) if strict else (r < lo) | (r > hi)
    if np.any(bad):
        warnings.warn(f"rho outside [{lo}, {hi}]; evaluating anyway", RuntimeWarning, stacklevel=3)
    return r


# ---------------------------------------------------------------------------
# profile, potential, symmetry mode


def nonlinearity(psi, d):
    """``g(psi) = (d - 1) sin psi cos psi``."""
    return (d - 1) * np.sin(psi) * np.cos(psi)


def nonlinearity_prime(psi, d):
    """``g'(psi) = (d - 1) cos 2 psi``."""
    return (d - 1) * np.cos(2 * psi)


def profile_f(rho, d, derivative: int = 0):
    """Self-similar profile ``f`` (or its first/second derivative)."""
    d = _check_d(d)
    r = _rho(rho)
    s = math.sqrt(d - 2)
    if derivative == 0:
        return 2 * np.arctan(r / s)
    if derivative == 1:
        return 2 * s / (s * s + r * r)
    if derivative == 2:
        return -4 * s * r / (s * s + r * r) ** 2
    raise ValueError("derivative must be 0, 1 or 2")


def profile_residual(rho, d):
    """Residual of ``(1-r^2) f'' + ((d-1)/r - 2r) f' - g(f)/r^2`` at ``rho > 0``."""
    r = np.asarray(rho, dtype=float)
    f, f1, f2 = (profile_f(r, d, j) for j in range(3))
    return (1 - r * r) * f2 + ((d - 1) / r - 2 * r) * f1 - nonlinearity(f, d) / (r * r)


def mode_potential(rho, d):
    """Return ``(chain, closed)`` evaluations of the mode potential ``V``.

    ``chain`` is ``g'(f(rho)) / rho^2``; ``closed`` is the rational form
    ``(d-1)/rho^2 * (rho^4 + (12-6d) rho^2 + (d-2)^2) / (rho^2 + d - 2)^2``.
    At ``rho = 0`` both are ``+inf`` (the potential behaves like
    ``(d-1)/rho^2``) and a warning is issued.
    """
    d = _check_d(d)
    r = _rho(rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        r2 = r * r
        chain = nonlinearity_prime(profile_f(r, d), d) / r2
        closed = (d - 1) / r2 * (r2 * r2 + (12 - 6 * d) * r2 + (d - 2) ** 2) / (r2 + d - 2) ** 2
    if np.any(r == 0):
        warnings.warn("V is singular at rho = 0 (leading term (d-1)/rho^2)", RuntimeWarning, stacklevel=2)
        chain = np.where(r == 0, np.inf, chain)
        closed = np.where(r == 0, np.inf, closed)
    if np.ndim(chain) == 0:
        return float(chain), float(closed)
    return chain, closed


def symmetry_mode(rho, d, form: str = "closed"):
    """``u_1 = rho f'(rho) = 2 rho sqrt(d-2) / (d - 2 + rho^2)``.

    ``form="chain"`` evaluates ``rho * f'(rho)`` instead of the closed form.
    """
    d = _check_d(d)
    r = _rho(rho)
    if form == "chain":
        return r * profile_f(r, d, 1)
    if form != "closed":
        raise ValueError("form must be 'closed' or 'chain'")
    s = math.sqrt(d - 2)
    return 2 * r * s / (d - 2 + r * r)


def symmetry_mode_derivative(rho, d, order: int = 1):
    """First or second derivative of the closed-form symmetry mode."""
    d = _check_d(d)
    r = np.asarray(rho, dtype=float)
    c = d - 2
    s = math.sqrt(c)
    if order == 1:
        return 2 * s * (c - r * r) / (c + r * r) ** 2
    if order == 2:
        return 4 * s * r * (r * r - 3 * c) / (c + r * r) ** 3
    raise ValueError("order must be 1 or 2")


def certify_symmetry_mode_positive(d) -> Certificate:
    """Exact check that ``u_1 > 0`` on ``(0, 1]``.

    ``u_1 = 2 rho sqrt(d-2) / (d-2+rho^2)``: the numerator is a positive
    multiple of ``rho`` and the denominator is at least ``d - 2 >= 1``.
    """
    d = _check_d(d)
    c = Fraction(d - 2)
    violations = []
    if not c > 0:
        violations.append({"reason": "d - 2 must be positive", "d": d})
    return Certificate(
        lemma_id="symmetry_mode_positive",
        method="exact_arith",
        case=f"d={d}",
        violations=violations,
        info={"numerator": "2*sqrt(d-2)*rho", "denominator_lower_bound": c},
    )


# ---------------------------------------------------------------------------
# ODE coefficients


def mode_ode(rho, lam, d, potential: str = "mode"):
    """Coefficients ``(a2, a1, a0)`` of the mode (or partner) equation at ``rho``."""
    r = np.asarray(rho, dtype=float)
    V = mode_potential(r, d)[1] if potential == "mode" else susy_potential_closed(r, d)
    return 1 - r * r, (d - 1) / r - 2 * (lam + 1) * r, -lam * (lam + 1) - V


def mode_residual(rho, u, du, ddu, lam, d, potential: str = "mode"):
    a2, a1, a0 = mode_ode(rho, lam, d, potential)
    return a2 * ddu + a1 * du + a0 * u


def mode_polynomial_coefficients(lam, d) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Mode equation multiplied by ``rho^2 (rho^2 + d - 2)^2``: ``p2, p1, p0`` low-to-high.

    With ``P = rho^2 + d - 2``:
    ``p2 = rho^2 (1-rho^2) P^2``, ``p1 = rho ((d-1) - 2(lam+1) rho^2) P^2``,
    ``p0 = -lam(lam+1) rho^2 P^2 - (d-1)(rho^4 + (12-6d) rho^2 + (d-2)^2)``.
    """
    from numpy.polynomial import polynomial as npp

    Pp = np.array([d - 2, 0, 1], dtype=complex)
    P2 = npp.polymul(Pp, Pp)
    p2 = npp.polymul([0, 0, 1, 0, -1], P2)
    p1 = npp.polymul([0, d - 1, 0, -2 * (lam + 1)], P2)
    p0 = npp.polysub(
        npp.polymul([0, 0, -lam * (lam + 1)], P2),
        (d - 1) * np.array([(d - 2) ** 2, 0, 12 - 6 * d, 0, 1], dtype=complex),
    )
    return p2, p1, p0


# ---------------------------------------------------------------------------
# supersymmetric chain


def susy_potential_closed(rho, d):
    """``V~ = -2(d-2)(rho^2 - d) / (rho^2 (rho^2 + d - 2))``."""
    r2 = np.asarray(rho, dtype=float) ** 2
    return -2 * (d - 2) * (r2 - d) / (r2 * (r2 + d - 2))


def w_closed(rho, d):
    """``v_1'/v_1 = (m+1)/rho - (2-m) rho/(1-rho^2) - 2 rho/(d-2+rho^2)``."""
    r = np.asarray(rho, dtype=float)
    m = (d - 1) / 2
    return (m + 1) / r - (2 - m) * r / (1 - r * r) - 2 * r / (d - 2 + r * r)


@dataclass
class PotentialSet:
    """Potentials of the chain for one dimension, as numpy callables.

    ``V``, ``V1``, ``W``, ``w``, ``v1`` and ``V_susy`` come from the symbolic
    chain; ``V_closed`` and ``V_susy_closed`` are the rational closed forms.
    ``expressions`` holds the sympy expressions they were lambdified from.
    """

    d: int
    V: object
    V_closed: object
    V1: object
    W: object
    w: object
    v1: object
    V_susy: object
    V_susy_closed: object
    normal_form_residual: object
    expressions: dict = field(repr=False, default_factory=dict)
    symbolic_identity: bool = False

    def check(self, rho) -> dict:
        """Max deviations of the chain from the closed forms at ``rho``."""
        r = np.asarray(rho, dtype=float)
        return {
            "V": float(np.max(np.abs(self.V(r) - self.V_closed(r)))),
            "V_susy": float(np.max(np.abs(self.V_susy(r) - self.V_susy_closed(r)))),
            "normal_form": float(np.max(np.abs(self.normal_form_residual(r)))),
            "w": float(np.max(np.abs(self.w(r) - w_closed(r, self.d)))),
        }


def susy_chain(d) -> PotentialSet:
    """Build ``v_1, w, V_1, W, V~`` symbolically for dimension ``d``.

    ``V~`` is obtained from the chain, not typed in; the closed form is
    compared against it symbolically (``symbolic_identity``) and callers can
    compare numerically with :meth:`PotentialSet.check`.
    """
    import sympy as sp

    d = _check_d(d)
    rho = sp.Symbol("rho", positive=True)
    m = sp.Rational(d - 1, 2)
    s = sp.sqrt(d - 2)
    f = 2 * sp.atan(rho / s)
    fp = sp.diff(f, rho)
    V = sp.cos(2 * f) * (d - 1) / rho**2
    V_closed = (d - 1) / rho**2 * (rho**4 + (12 - 6 * d) * rho**2 + (d - 2) ** 2) / (rho**2 + d - 2) ** 2
    v1 = rho ** (m + 1) * (1 - rho**2) ** (1 - m / 2) * fp
    w = sp.simplify(sp.diff(v1, rho) / v1)
    V1 = V / (1 - rho**2) + (m - 1) * (rho**2 + m) / (rho**2 * (1 - rho**2) ** 2) - (2 * m - 1) / (1 - rho**2) ** 2
    W = (1 - rho**2) * (w**2 - sp.diff(w, rho)) + 4 * rho * w
    Vt = W + m * (rho**2 - m + 1) / (rho**2 * (1 - rho**2)) - 2
    Vt_closed = -2 * (d - 2) * (rho**2 - d) / (rho**2 * (rho**2 + d - 2))
    nf = -sp.diff(v1, rho, 2) + V1 * v1
    identity = sp.simplify(sp.cancel(sp.together(Vt - Vt_closed))) == 0

    def lamb(e):
        return sp.lambdify(rho, e, modules="numpy")

    return PotentialSet(
        d=d,
        V=lamb(V),
        V_closed=lamb(V_closed),
        V1=lamb(V1),
        W=lamb(W),
        w=lamb(w),
        v1=lamb(v1),
        V_susy=lamb(Vt),
        V_susy_closed=lamb(Vt_closed),
        normal_form_residual=lamb(nf),
        expressions={"V": V, "v1": v1, "w": w, "V1": V1, "W": W, "V_susy": Vt, "V_susy_closed": Vt_closed},
        symbolic_identity=bool(identity),
    )


# ---------------------------------------------------------------------------
# Frobenius indices

PROBLEMS = ("mode", "susy", "heun")


def frobenius_indices(problem: str, point, lam, d) -> tuple:
    """Frobenius indices at a singular endpoint (``rho`` for mode/susy, ``x = rho^2`` for heun)."""
    d = _check_d(d)
    m = Fraction(d - 1, 2)
    k = d - 2
    table = {
        ("mode", 0): (1, -2 * m),
        ("mode", 1): (0, m - lam),
        ("susy", 0): (2, -2 * m - 1),
        ("susy", 1): (0, m - lam),
        ("heun", 0): (0, -2 - Fraction(k, 2)),
        ("heun", 1): (0, Fraction(k + 1, 2) - lam),
    }
    try:
        return table[(problem, point)]
    except KeyError:
        raise ValueError(f"no indices for problem={problem!r} at point={point!r}") from None


def frobenius_indices_from_ode(problem: str, point, lam, d) -> tuple:
    """Indices recomputed from the indicial equation of the ODE (sympy)."""
    import sympy as sp

    from .odes import indicial_roots

    d = _check_d(d)
    lam_s = sp.nsimplify(lam) if not isinstance(lam, sp.Basic) else lam
    if problem in ("mode", "susy"):
        r = sp.Symbol("rho", positive=True)
        if problem == "mode":
            V = (d - 1) / r**2 * (r**4 + (12 - 6 * d) * r**2 + (d - 2) ** 2) / (r**2 + d - 2) ** 2
        else:
            V = -2 * (d - 2) * (r**2 - d) / (r**2 * (r**2 + d - 2))
        p2, p1, p0 = 1 - r**2, (d - 1) / r - 2 * (lam_s + 1) * r, -lam_s * (lam_s + 1) - V
        roots = indicial_roots(p2, p1, p0, r, point)
    elif problem == "heun":
        from .recurrence import heun_reduce

        rec = heun_reduce(None)
        values = {"k": d - 2, "lambda": lam_s}
        subs = {sym: values[sym.name] for sym in rec.P.free_symbols | rec.Q.free_symbols if sym.name in values}
        P = rec.P.subs(subs)
        Q = rec.Q.subs(subs)
        roots = indicial_roots(sp.Integer(1), P, Q, rec.variable, point)
    else:
        raise ValueError(f"unknown problem {problem!r}")
    return tuple(roots)


# ---------------------------------------------------------------------------
# transform chain on sampled data


def central_derivative(y, h):
    """Fourth-order central difference; the two points at each end are dropped."""
    y = np.asarray(y)
    return (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)


def transform_solution(rho, u, du=None, lam=1.0, d=3):
    """Map a mode-equation solution ``u`` to the partner solution ``u~``.

    Applies ``v = rho^m (1-rho^2)^((lam+1-m)/2) u``, ``v~ = v' - w v`` and
    ``u~ = v~ / (rho^m (1-rho^2)^((lam-1-m)/2))``, which collapses to

        u~ = (1 - rho^2) (u' + (m/rho - w) u) - (lam + 1 - m) rho u.

    Without ``du`` the derivative is taken by fourth-order central
    differences on the (uniform) grid and the returned arrays drop two
    points at each end. Returns ``(rho, u~)``.
    """
    d = _check_d(d)
    r = np.asarray(rho, dtype=float)
    if np.any(r <= 0) or np.any(r >= 1):
        raise ValueError("grid must lie strictly inside (0, 1); the chain is singular at the endpoints")
    u = np.asarray(u)
    if du is None:
        h = np.diff(r)
        if len(r) < 5 or not np.allclose(h, h[0], rtol=1e-9, atol=0):
            raise ValueError("finite differences need a uniform grid with at least 5 points")
        du = central_derivative(u, h[0])
        r, u = r[2:-2], u[2:-2]
    m = (d - 1) / 2
    ut = (1 - r * r) * (du + (m / r - w_closed(r, d)) * u) - (lam + 1 - m) * r * u
    return r, ut
