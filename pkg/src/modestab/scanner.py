"""Floating-point cross-checks of the exact proof.

Two independent numerical experiments:

* a Poincare-limit scan: iterate the ratio recursion of the reduced
  equation over a lambda-grid and classify the limit of ``r_n`` as the
  characteristic root 1 or the small root;
* a shooting search on the original mode equation: a connection function
  built from the two analytic Frobenius solutions is scanned for zeros with
  the argument principle; its zeros are the eigenvalues.

``r_n = 1 + alpha / n + O(n^-2)`` converges only algebraically, so limits
are classified from a three-point Richardson extrapolation in ``1/n``
rather than from ``|r_n - 1|`` itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from .model import ModeProblem, mode_polynomial_coefficients, mode_ode, symmetry_mode
from .odes import frobenius_coefficients
from .recurrence import coefficient_parts, ratio_iterate

ONE, SMALL, UNDECIDED = "One", "SmallRoot", "Undecided"


@dataclass(frozen=True)
class ScanRegion:
    """Rectangular lambda-grid in the closed right half-plane."""

    re_min: float = 0.0
    re_max: float = 5.0
    im_min: float = -5.0
    im_max: float = 5.0
    step: float = 0.1
    n_max: int = 5000
    tol: float = 1e-6

    def __post_init__(self):
        if self.re_min < 0:
            raise ValueError("re_min must be >= 0 (closed right half-plane only)")
        if self.step <= 0 or self.tol <= 0:
            raise ValueError("step and tol must be positive")
        if self.n_max < 100:
            raise ValueError("n_max must be >= 100")
        if self.re_max < self.re_min or self.im_max < self.im_min:
            raise ValueError("empty region")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        nr = int(round((self.re_max - self.re_min) / self.step)) + 1
        ni = int(round((self.im_max - self.im_min) / self.step)) + 1
        return np.linspace(self.re_min, self.re_max, nr), np.linspace(self.im_min, self.im_max, ni)

    def grid(self) -> np.ndarray:
        re, im = self.axes()
        return re[:, None] + 1j * im[None, :]


@dataclass
class LimitClass:
    label: str
    value: complex
    n: int
    margin: float

    def to_dict(self) -> dict:
        return {"label": self.label, "value": [self.value.real, self.value.imag], "n": self.n, "margin": self.margin}


def _small_root(case: str, k) -> float:
    return 0.5 if case == "d3" else -1.0 / k


def _case_for_k(case: str, k):
    if case == "d3":
        return "d3", None
    if k is None:
        raise ValueError("k is required outside the d3 case")
    return ("k2" if k == 2 else "general"), k


# ---------------------------------------------------------------------------
# Poincare-limit classification


WINDOW = 100


def _richardson(r_a, r_b, r_c, n_a, n_b, n_c):
    """Value at ``1/n = 0`` of the quadratic in ``1/n`` through three samples."""
    xa, xb, xc = 1.0 / n_a, 1.0 / n_b, 1.0 / n_c
    la = xb * xc / ((xa - xb) * (xa - xc))
    lb = xa * xc / ((xb - xa) * (xb - xc))
    lc = xa * xb / ((xc - xa) * (xc - xb))
    return la * r_a + lb * r_b + lc * r_c


def _iterate_limits(case: str, lam: np.ndarray, k, n_max: int):
    """Extrapolated limits over the last ``WINDOW`` indices, plus ``log|a_{n_max}|``."""
    h = max(n_max // 10, 1)
    keep_from = n_max - WINDOW + 1 - 2 * h
    cname, kk = _case_for_k(case, k)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        hist, idx, log_a = ratio_iterate(cname, lam, kk, n_max, keep_from)
        pos = {n: i for i, n in enumerate(idx)}
        ns = np.arange(n_max - WINDOW + 1, n_max + 1)
        lims = np.array([
            _richardson(hist[pos[n]], hist[pos[n - h]], hist[pos[n - 2 * h]], n, n - h, n - 2 * h) for n in ns
        ])
    return lims, hist[-1], log_a


def _label(lims: np.ndarray, small: float, tol: float):
    d1 = np.abs(lims - 1.0).max(axis=0)
    ds = np.abs(lims - small).max(axis=0)
    d1 = np.where(np.isfinite(d1), d1, np.inf)
    ds = np.where(np.isfinite(ds), ds, np.inf)
    lab = np.full(d1.shape, UNDECIDED, dtype=object)
    lab[d1 < tol] = ONE
    lab[ds < tol] = SMALL
    return lab, d1, ds


def classify_limit(case: str, lam: complex, k=None, n_max: int = 5000, tol: float = 1e-6) -> LimitClass:
    """Classify ``lim r_n`` at one ``lambda`` (``Re lambda >= 0``).

    ``One`` / ``SmallRoot`` require the extrapolated limit to stay within
    ``tol`` of the root over the last ``WINDOW`` indices; otherwise the
    point is re-run once at ``4 n_max`` and left ``Undecided`` if it still
    does not settle.
    """
    if complex(lam).real < 0:
        raise ValueError("classify_limit is for the closed right half-plane")
    small = _small_root(case, k)
    for n in (n_max, 4 * n_max):
        lims, _, _ = _iterate_limits(case, np.array([lam], dtype=complex), k, n)
        lab, d1, ds = _label(lims, small, tol)
        if lab[0] != UNDECIDED:
            break
    value = complex(lims[-1, 0])
    margin = float(d1[0] if lab[0] == ONE else ds[0] if lab[0] == SMALL else min(d1[0], ds[0]))
    return LimitClass(label=str(lab[0]), value=value, n=n, margin=margin)


@dataclass
class ScanSummary:
    case: str
    k: int | None
    region: ScanRegion
    counts: dict
    worst_margin: float
    min_small_root_distance: float
    mirror_symmetric: bool
    undecided_fraction: float
    rerun: int
    labels: np.ndarray = field(repr=False)
    limits: np.ndarray = field(repr=False)
    grid: np.ndarray = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.counts[SMALL] == 0 and self.undecided_fraction <= 1e-3

    def to_dict(self) -> dict:
        r = self.region
        return {
            "case": self.case,
            "k": self.k,
            "region": {
                "re": [r.re_min, r.re_max], "im": [r.im_min, r.im_max],
                "step": r.step, "n_max": r.n_max, "tol": r.tol,
            },
            "points": int(self.labels.size),
            "counts": dict(self.counts),
            "worst_margin": self.worst_margin,
            "min_small_root_distance": self.min_small_root_distance,
            "mirror_symmetric": self.mirror_symmetric,
            "undecided_fraction": self.undecided_fraction,
            "rerun": self.rerun,
            "passed": self.passed,
        }

    def rows(self):
        """Per-point ``(re, im, label, |L - 1|)`` rows in grid order."""
        for lam, lab, lim in zip(self.grid.ravel(), self.labels.ravel(), self.limits.ravel()):
            yield lam.real, lam.imag, lab, abs(lim - 1)


def scan_grid(case: str, region: ScanRegion, k=None) -> ScanSummary:
    """Classify every point of ``region`` for the case (and ``k``)."""
    grid = region.grid()
    flat = grid.ravel()
    small = _small_root(case, k)
    lims, _, _ = _iterate_limits(case, flat, k, region.n_max)
    lab, d1, ds = _label(lims, small, region.tol)
    final = lims[-1].copy()
    und = np.nonzero(lab == UNDECIDED)[0]
    if len(und):
        l2, _, _ = _iterate_limits(case, flat[und], k, 4 * region.n_max)
        lab2, d12, ds2 = _label(l2, small, region.tol)
        lab[und], d1[und], ds[und], final[und] = lab2, d12, ds2, l2[-1]
    labels = lab.reshape(grid.shape)
    counts = {c: int(np.sum(lab == c)) for c in (ONE, SMALL, UNDECIDED)}
    ones = lab == ONE
    # conjugate mirror: the imaginary axis of the grid is symmetric iff im_min == -im_max
    mirror = bool(np.all(labels == labels[:, ::-1])) if np.isclose(region.im_min, -region.im_max) else True
    return ScanSummary(
        case=case,
        k=k,
        region=region,
        counts=counts,
        worst_margin=float(d1[ones].max()) if ones.any() else math.inf,
        min_small_root_distance=float(np.abs(final - small).min()),
        mirror_symmetric=mirror,
        undecided_fraction=counts[UNDECIDED] / lab.size,
        rerun=len(und),
        labels=labels,
        limits=final.reshape(grid.shape),
        grid=grid,
    )


def root_test(case: str, lam, k=None, n: int = 5000) -> np.ndarray:
    """``|a_n|^(1/n)`` at ``n``; close to 1 means radius of convergence 1."""
    cname, kk = _case_for_k(case, k)
    _, _, log_a = ratio_iterate(cname, np.atleast_1d(np.asarray(lam, dtype=complex)), kk, n, n)
    return np.exp(log_a / n)


def continued_fraction_residual(case: str, lam, k=None, depth: int = 4000) -> np.ndarray:
    """Minimal-solution test ``r_0^min(lambda) - A_{-1}(lambda)``.

    ``r_0^min`` comes from the backward recursion ``r_n = B_n / (r_{n+1} - A_n)``
    started at the small root; the residual vanishes exactly when the power
    series is the minimal solution, i.e. at an eigenvalue of the reduced
    problem. Returned relative to ``1 + |A_{-1}|``.
    """
    cname, kk = _case_for_k(case, k)
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    r = np.full(lam.shape, _small_root(case, k), dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for n in range(depth, -1, -1):
            an, bn, d = coefficient_parts(cname, n, lam, kk)
            r = (bn / d) / (r - an / d)
        an, _, d = coefficient_parts(cname, -1, lam, kk)
        a_m1 = an / d
    return (r - a_m1) / (1 + np.abs(a_m1))


# ---------------------------------------------------------------------------
# shooting on the mode equation


SEED = 1e-3
MATCH = 0.5
EXCEPTIONAL_NUDGE = 1e-8


class RefinementError(RuntimeError):
    """Local zero refinement failed to converge."""


def exceptional_points(d: int, re_min: float = -0.05, re_max: float = 5.0) -> list[float]:
    """``lambda = m - N`` (``N >= 1``) where the index-0 series at ``rho = 1`` resonates."""
    m = (d - 1) / 2
    out = []
    N = 1
    while m - N >= re_min:
        if m - N <= re_max:
            out.append(m - N)
        N += 1
    return out


def _series_pair(lam: np.ndarray, d: int, order: int):
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    p2, p1, p0 = _batched_coefficients(lam, d)
    left = frobenius_coefficients(p2, p1, p0, 0.0, 1.0, order)
    right = frobenius_coefficients(p2, p1, p0, 1.0, 0.0, order)
    return left, right


def _batched_coefficients(lam: np.ndarray, d: int):
    cols = [mode_polynomial_coefficients(x, d) for x in lam]
    L = max(len(c[j]) for c in cols for j in range(3))
    out = []
    for j in range(3):
        arr = np.zeros((L, len(lam)), dtype=complex)
        for i, c in enumerate(cols):
            arr[: len(c[j]), i] = c[j]
        out.append(arr)
    return out


def connection_function(lam, d: int, method: str = "series", order: int = 160) -> np.ndarray:
    """Wronskian at ``rho = 1/2`` of the solutions analytic at 0 and at 1.

    ``method="series"`` sums both Frobenius series at ``rho = 1/2`` (both
    converge there with ratio 1/2); ``method="ivp"`` seeds the series at
    ``rho = 1e-3`` and ``1 - 1e-3`` and integrates to ``1/2`` with
    ``solve_ivp``. Normalisation: the left solution is ``rho + ...``, the
    right one ``1 + ...``. Poles occur at exceptional ``lambda = m - N``
    whose expansion at ``rho = 1`` needs a log term.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    # exactly at an exceptional point the index-0 recurrence divides 0 by 0; nudge off it
    m = (d - 1) / 2
    on = (np.abs(lam.imag) < 1e-12) & (np.abs(lam.real - np.round(lam.real - m) - m) < 1e-12) & (lam.real < m - 0.5)
    lam = np.where(on, lam + EXCEPTIONAL_NUDGE, lam)
    if method == "series":
        left, right = _series_pair(lam, d, order)
        yl, dyl = left.value(MATCH)
        yr, dyr = right.value(MATCH - 1.0)
        return yl * dyr - dyl * yr
    if method == "ivp":
        return np.array([_wronskian_ivp(x, d, order=24) for x in lam])
    raise ValueError("method must be 'series' or 'ivp'")


def _rhs(lam, d):
    def f(r, y):
        a2, a1, a0 = mode_ode(r, lam, d)
        return [y[1], -(a1 * y[1] + a0 * y[0]) / a2]

    return f


def _integrate(lam, d, r0, r1, y0, rtol=1e-10):
    sol = solve_ivp(_rhs(lam, d), (r0, r1), np.asarray(y0, dtype=complex), method="DOP853", rtol=rtol, atol=1e-14)
    if not sol.success:
        raise RuntimeError(f"integration failed at lambda={lam}: {sol.message}")
    return sol.y[:, -1]


def _wronskian_ivp(lam, d, order=24):
    left, right = _series_pair(np.array([lam]), d, order)
    yl0, dyl0 = (v[0] for v in left.value(SEED))
    yr0, dyr0 = (v[0] for v in right.value(-SEED))
    yl = _integrate(lam, d, SEED, MATCH, [yl0, dyl0])
    yr = _integrate(lam, d, 1 - SEED, MATCH, [yr0, dyr0])
    return yl[0] * yr[1] - yl[1] * yr[0]


# -- argument principle ------------------------------------------------------


def _winding(func, vertices, n_init: int = 64, max_jump: float = 0.4, budget: int = 200_000) -> float:
    """Winding number of ``func`` along the closed polygon ``vertices`` (adaptive sampling)."""
    total = 0.0
    evals = 0
    for a, b in zip(vertices, vertices[1:] + vertices[:1]):
        t = np.linspace(0.0, 1.0, n_init + 1)
        vals = func(a + (b - a) * t)
        evals += len(t)
        while True:
            dphi = np.angle(vals[1:] / vals[:-1])
            bad = np.nonzero(np.abs(dphi) > max_jump)[0]
            if len(bad) == 0:
                break
            if evals > budget:
                raise RefinementError("argument principle sampling budget exhausted")
            mids = 0.5 * (t[bad] + t[bad + 1])
            new = func(a + (b - a) * mids)
            evals += len(mids)
            t = np.insert(t, bad + 1, mids)
            vals = np.insert(vals, bad + 1, new)
        total += dphi.sum()
    return total / (2 * math.pi)


def _rect(re0, re1, im0, im1):
    return [complex(re0, im0), complex(re1, im0), complex(re1, im1), complex(re0, im1)]


def _circle(c, r, n=32):
    th = 2 * math.pi * np.arange(n) / n
    return list(c + r * np.exp(1j * th))


def taylor_root(func, center: complex, radius: float, n: int = 32) -> complex | None:
    """Root of ``func`` inside the disk from its sampled Taylor polynomial.

    The values on the circle give the Taylor coefficients by FFT; the root
    of the (truncated) polynomial nearest the centre is returned, or
    ``None`` if it lies outside the disk.
    """
    z = center + radius * np.exp(2j * math.pi * np.arange(n) / n)
    vals = func(z)
    coef = np.fft.fft(vals) / n  # a_j r^j
    keep = np.abs(coef) > 1e-13 * np.abs(coef).max()
    deg = int(np.nonzero(keep[: n // 2])[0].max()) if keep[: n // 2].any() else 0
    if deg == 0:
        return None
    roots = np.roots(coef[: deg + 1][::-1])  # in units of radius
    roots = roots[np.abs(roots) < 1.0]
    if len(roots) == 0:
        return None
    w = roots[np.argmin(np.abs(roots))]
    return center + radius * w


def refine_zero(func, guess: complex, radii=(0.05, 5e-3, 5e-4)) -> complex:
    """Iterated :func:`taylor_root` with shrinking disks."""
    z = complex(guess)
    for r in radii:
        nz = taylor_root(func, z, r)
        if nz is None:
            raise RefinementError(f"no zero within {r} of {z}")
        z = nz
    return z


@dataclass
class ExceptionalPoint:
    """``lambda = m - N`` with its exact log-term status and eigenvalue verdict."""

    lam: float
    N: int
    log_term: bool
    local_winding: int
    eigenvalue: bool
    wronskian: float | None = None

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam, "N": self.N, "log_term": self.log_term,
            "local_winding": self.local_winding, "eigenvalue": self.eigenvalue, "wronskian": self.wronskian,
        }


@dataclass
class ShootingResult:
    d: int
    eigenvalues: list
    zeros: list
    winding: float
    exceptional: list
    region: tuple
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "connection_zeros": [[z.real, z.imag] for z in self.zeros],
            "winding": self.winding,
            "exceptional": [e.to_dict() for e in self.exceptional],
            "region": list(self.region),
            "notes": self.notes,
        }


def _exact_mode_coefficients(lam: Fraction, d: int):
    """Exact ``p2, p1, p0`` (low-to-high in ``rho``) for rational ``lam``."""
    P = [Fraction(d - 2), Fraction(0), Fraction(1)]
    P2 = _pmul(P, P)
    p2 = _pmul([0, 0, 1, 0, -1], P2)
    p1 = _pmul([0, d - 1, 0, -2 * (lam + 1)], P2)
    q = [-(d - 1) * c for c in (Fraction((d - 2) ** 2), 0, Fraction(12 - 6 * d), 0, 1)]
    p0 = _padd(_pmul([0, 0, -lam * (lam + 1)], P2), q)
    return p2, p1, p0


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += Fraction(x) * Fraction(y)
    return out


def _padd(a, b):
    n = max(len(a), len(b))
    return [(Fraction(a[i]) if i < len(a) else 0) + (Fraction(b[i]) if i < len(b) else 0) for i in range(n)]


def _shift_exact(p, x0):
    out = [Fraction(0)] * len(p)
    for a in reversed(p):
        nxt = [x0 * c for c in out]
        for i in range(1, len(out)):
            nxt[i] += out[i - 1]
        nxt[0] += a
        out = nxt
    return out


def has_log_term(d: int, lam_star) -> bool:
    """Exact test whether the index-0 expansion at ``rho = 1`` needs a log term.

    At ``lam = m - N`` the indicial polynomial vanishes at ``N``; the
    expansion is log-free iff the recurrence's right-hand side also
    vanishes at step ``N``. Computed in rational arithmetic.
    """
    lam = Fraction(lam_star).limit_denominator(1000)
    m = Fraction(d - 1, 2)
    N = m - lam
    if N.denominator != 1 or N < 1:
        raise ValueError(f"lambda={lam_star} is not exceptional for d={d}")
    N = int(N)
    a2, a1, a0 = (_shift_exact(p, Fraction(1)) for p in _exact_mode_coefficients(lam, d))
    q = next(i for i, c in enumerate(a2) if c != 0)

    def co(a, i):
        return a[i] if 0 <= i < len(a) else Fraction(0)

    def ind(s):
        return co(a2, q) * s * (s - 1) + co(a1, q - 1) * s + co(a0, q - 2)

    c = [Fraction(1)]
    for n_ in range(1, N + 1):
        rhs = sum(
            (c[j] * (co(a2, n_ + q - j) * j * (j - 1) + co(a1, n_ + q - 1 - j) * j + co(a0, n_ + q - 2 - j))
             for j in range(n_)),
            Fraction(0),
        )
        if n_ == N:
            return rhs != 0
        c.append(-rhs / ind(Fraction(n_)))
    raise AssertionError("unreachable")


def _right_basis(lam: complex, d: int, order: int):
    """Solutions analytic at ``rho = 1`` (one generically, two at log-free exceptional points)."""
    lam_arr = np.array([lam], dtype=complex)
    p2, p1, p0 = _batched_coefficients(lam_arr, d)
    m = (d - 1) / 2
    N = m - lam
    exceptional = abs(N.imag) < 1e-12 and abs(N.real - round(N.real)) < 1e-12 and round(N.real) >= 1
    if not exceptional:
        return [frobenius_coefficients(p2, p1, p0, 1.0, 0.0, order)]
    Ni = int(round(N.real))
    basis = [frobenius_coefficients(p2, p1, p0, 1.0, float(Ni), order)]
    if not has_log_term(d, lam.real):
        basis.insert(0, frobenius_coefficients(p2, p1, p0, 1.0, 0.0, order, resonance_tol=1e-9, skip_resonance=True))
    return basis


def exceptional_wronskian(d: int, lam_star: float, order: int = 160) -> float:
    """Relative Wronskian of the left solution and the index-``N`` solution at ``rho = 1/2``."""
    lam = complex(lam_star)
    p2, p1, p0 = _batched_coefficients(np.array([lam]), d)
    N = int(round((d - 1) / 2 - lam_star))
    left = frobenius_coefficients(p2, p1, p0, 0.0, 1.0, order)
    right = frobenius_coefficients(p2, p1, p0, 1.0, float(N), order)
    yl, dyl = (v[0] for v in left.value(MATCH))
    yr, dyr = (v[0] for v in right.value(MATCH - 1.0))
    return float(abs(yl * dyr - dyl * yr) / (abs(yl * dyr) + abs(dyl * yr)))


def shoot_eigenvalues(
    d: int,
    re_min: float = -0.05,
    re_max: float = 5.0,
    im_max: float = 5.0,
    method: str = "series",
    min_size: float = 0.25,
    disk: float = 0.02,
) -> ShootingResult:
    """Eigenvalues of the mode equation in ``[re_min, re_max] x [-im_max, im_max]``.

    Away from the exceptional points ``lambda = m - N`` the eigenvalues are
    the zeros of the connection function. They are counted by the argument
    principle with small disks around each exceptional point removed
    (their local winding numbers are subtracted), isolated by quadtree
    bisection and refined from Taylor polynomials sampled on circles.

    An exceptional point is decided separately: if the expansion at
    ``rho = 1`` is log-free every solution is analytic there, so it is an
    eigenvalue; otherwise it is one iff the left solution is proportional to
    the index-``N`` solution (vanishing Wronskian).

    The default left edge sits just left of the imaginary axis so the
    contour avoids ``lambda = 0``.
    """
    ModeProblem(d)

    def W(z):
        return connection_function(z, d, method=method)

    exc_points = exceptional_points(d, re_min, re_max)
    m = (d - 1) / 2
    exc = []
    for p in exc_points:
        log = has_log_term(d, p)
        lw = int(round(_winding(W, _circle(p, disk, 8))))
        wr = exceptional_wronskian(d, p) if log else None
        exc.append(ExceptionalPoint(p, int(round(m - p)), log, lw, (not log) or wr < 1e-10, wr))
    notes = []
    total = _winding(W, _rect(re_min, re_max, -im_max, im_max))
    if abs(total - round(total)) > 1e-3:
        notes.append(f"winding number {total} not close to an integer")

    def local_sum(re0, re1, im0, im1):
        return sum(e.local_winding for e in exc if re0 < e.lam < re1 and im0 < 0 < im1)

    n_total = int(round(total)) - local_sum(re_min, re_max, -im_max, im_max)

    def count(re0, re1, im0, im1):
        return int(round(_winding(W, _rect(re0, re1, im0, im1), n_init=32))) - local_sum(re0, re1, im0, im1)

    def g_factory(re0, re1, im0, im1):
        near = [e.lam for e in exc if re0 - 0.2 < e.lam < re1 + 0.2 and im0 - 0.2 < 0 < im1 + 0.2]

        def g(z):
            out = W(z)
            for p in near:
                out = out * (z - p)
            return out

        return g

    def split_point(a, b, avoid):
        mid = 0.5 * (a + b) + 0.0123 * (b - a)
        for _ in range(40):
            if all(abs(mid - p) > 2 * disk + 0.02 * (b - a) for p in avoid):
                return mid
            mid += 0.037 * (b - a)
        raise RefinementError("no admissible split line")

    zeros: list[complex] = []
    stack = [(re_min, re_max, -im_max, im_max, n_total)]
    while stack:
        re0, re1, im0, im1, n = stack.pop()
        if n <= 0:
            continue
        size = max(re1 - re0, im1 - im0)
        if n == 1 and size <= min_size:
            g = g_factory(re0, re1, im0, im1)
            z = refine_zero(g, complex(0.5 * (re0 + re1), 0.5 * (im0 + im1)), radii=(size, 0.02, 2e-3, 2e-4))
            if not (re0 - 1e-6 <= z.real <= re1 + 1e-6 and im0 - 1e-6 <= z.imag <= im1 + 1e-6):
                raise RefinementError(f"refined zero {z} left its box")
            zeros.append(z)
            continue
        if size < 1e-3:
            raise RefinementError(f"could not isolate {n} zeros near {complex(re0, im0)}")
        if re1 - re0 >= im1 - im0:
            s = split_point(re0, re1, exc_points)
            parts = [(re0, s, im0, im1), (s, re1, im0, im1)]
        else:
            s = split_point(im0, im1, [0.0])
            parts = [(re0, re1, im0, s), (re0, re1, s, im1)]
        for p in parts:
            stack.append((*p, count(*p)))
    zeros.sort(key=lambda z: (round(z.real, 8), round(z.imag, 8)))
    if len(zeros) != n_total:
        notes.append(f"located {len(zeros)} zeros but counted {n_total}")
    eig = zeros + [complex(e.lam) for e in exc if e.eigenvalue]
    eig.sort(key=lambda z: (round(z.real, 8), round(z.imag, 8)))
    for e in exc:
        if e.eigenvalue:
            notes.append(f"lambda={e.lam} is exceptional and an eigenvalue ({'log-free' if not e.log_term else 'vanishing Wronskian'})")
    return ShootingResult(
        d=d, eigenvalues=eig, zeros=zeros, winding=total, exceptional=exc,
        region=(re_min, re_max, -im_max, im_max), notes=notes,
    )


def _match(basis_vals, target):
    """Coefficients of the right basis matching ``target = (y, dy)``."""
    if len(basis_vals) == 1:
        return [target[0] / basis_vals[0][0]]
    A = np.array([[b[0] for b in basis_vals], [b[1] for b in basis_vals]], dtype=complex)
    return list(np.linalg.solve(A, np.asarray(target, dtype=complex)))


def eigenfunction(lam: complex, d: int, rho: np.ndarray, method: str = "series", order: int = 200) -> np.ndarray:
    """Solution analytic at 0 on ``rho`` in ``[0, 1]``, normalised as ``rho + ...``.

    ``method="series"`` uses the series at 0 up to ``1/2`` and the analytic
    solution(s) at 1 beyond, matched at ``1/2``; ``method="ivp"`` integrates
    from ``1e-3`` to ``1 - 1e-3`` and uses the series only inside the seeds.
    """
    rho = np.asarray(rho, dtype=float)
    lam = complex(lam)
    p2, p1, p0 = _batched_coefficients(np.array([lam]), d)
    left = frobenius_coefficients(p2, p1, p0, 0.0, 1.0, order)
    basis = _right_basis(lam, d, order)
    out = np.empty(rho.shape, dtype=complex)

    def right_at(coef, r):
        return sum(c * b.value(r - 1.0)[0][0] for c, b in zip(coef, basis))

    if method == "series":
        target = [v[0] for v in left.value(MATCH)]
        coef = _match([[v[0] for v in b.value(MATCH - 1.0)] for b in basis], target)
        for i, r in enumerate(rho):
            out[i] = left.value(r)[0][0] if r <= MATCH else right_at(coef, r)
        return out
    if method == "ivp":
        inner = (rho >= SEED) & (rho <= 1 - SEED)
        y0, dy0 = (v[0] for v in left.value(SEED))
        sol = solve_ivp(
            _rhs(lam, d), (SEED, 1 - SEED), np.array([y0, dy0], dtype=complex), method="DOP853",
            rtol=1e-11, atol=1e-14, dense_output=True,
        )
        out[inner] = sol.sol(rho[inner])[0]
        out[rho < SEED] = [left.value(r)[0][0] for r in rho[rho < SEED]]
        if np.any(rho > 1 - SEED):
            coef = _match([[v[0] for v in b.value(-SEED)] for b in basis], sol.y[:, -1])
            out[rho > 1 - SEED] = [right_at(coef, r) for r in rho[rho > 1 - SEED]]
        return out
    raise ValueError("method must be 'series' or 'ivp'")


def eigenfunction_error(lam: complex, d: int, n: int = 401, method: str = "series") -> float:
    """Sup-norm distance to the symmetry mode after matching at ``rho = 1/2``."""
    rho = np.linspace(0.0, 1.0, n)
    u = eigenfunction(lam, d, rho, method=method)
    u1 = symmetry_mode(rho, d)
    scale = symmetry_mode(MATCH, d) / eigenfunction(lam, d, np.array([MATCH]), method=method)[0]
    return float(np.max(np.abs(scale * u - u1)))


def cauchy_riemann_residual(d: int, points, h: float = 1e-4, method: str = "series") -> float:
    """Max ``|W_x + i W_y| / (|W_x| + |W_y|)`` over ``points`` (central differences)."""
    pts = np.asarray(points, dtype=complex).ravel()
    W = lambda z: connection_function(z, d, method=method)  # noqa: E731
    wx = (W(pts + h) - W(pts - h)) / (2 * h)
    wy = (W(pts + 1j * h) - W(pts - 1j * h)) / (2 * h)
    return float(np.max(np.abs(wx + 1j * wy) / (np.abs(wx) + np.abs(wy))))


def near_exceptional(lam, d: int, tol: float = 1e-9) -> bool:
    return any(abs(complex(lam) - p) < tol for p in exceptional_points(d, -1.0, 1e9))
