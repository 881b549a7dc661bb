"""Frobenius machinery for second-order ODEs with polynomial coefficients.

An equation ``p2(x) y'' + p1(x) y' + p0(x) y = 0`` is given by three
coefficient arrays (low-to-high powers of ``x``, possibly complex). Around a
regular singular point ``x0`` the solution with index ``sigma`` is

    y = sum_j c_j (x - x0)**(j + sigma),     c_0 = 1,

with the ``c_j`` generated by the usual recurrence on the shifted
coefficients. The symbolic helpers at the bottom compute indicial
polynomials with sympy and are used as an independent check on the numeric
side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P


class ResonanceError(ArithmeticError):
    """The indicial polynomial vanishes at ``sigma + j`` for some ``j >= 1``."""


def taylor_shift(coeffs, x0) -> np.ndarray:
    """Coefficients of ``p(x0 + s)`` in powers of ``s``."""
    c = np.asarray(coeffs, dtype=complex)
    out = np.zeros_like(c)
    for a in c[::-1]:
        # out <- out * (x0 + s) + a
        nxt = x0 * out
        nxt[1:] += out[:-1]
        nxt[0] += a
        out = nxt
    return out


@dataclass
class FrobeniusSeries:
    """Truncated Frobenius series about ``x0`` with index ``sigma``.

    ``coeffs`` has shape ``(order + 1,)`` or ``(order + 1, M)``; in the second
    form the series is a batch of ``M`` solutions (one per parameter value)
    and ``sigma`` may be an array of shape ``(M,)``.
    """

    x0: float
    sigma: complex
    coeffs: np.ndarray

    def __call__(self, x):
        s = np.asarray(x, dtype=complex) - self.x0
        return self.value(s)[0]

    def value(self, s):
        """Return ``(y, dy/dx)`` at offsets ``s = x - x0`` (``s`` may be negative).

        For a batch, ``s`` must be a scalar and the results have shape ``(M,)``.
        """
        s = np.asarray(s, dtype=complex)
        c = self.coeffs
        j = np.arange(len(c)).reshape((-1,) + (1,) * (c.ndim - 1))
        base = P.polyval(s, c)
        dbase = P.polyval(s, c[1:] * j[1:]) if len(c) > 1 else 0 * base
        sigma = np.asarray(self.sigma)
        if np.all(sigma == 0):
            return base, dbase
        # (x - x0)^sigma with the branch that is real for s > 0; for s < 0 use |s|
        mag = np.abs(s)
        pw = mag**sigma
        sgn = np.where(s.real < 0, -1.0, 1.0)
        y = pw * base
        with np.errstate(divide="ignore", invalid="ignore"):
            pw1 = np.where(mag == 0, np.where(sigma == 1, 1.0, 0.0), mag ** (sigma - 1))
        dy = pw * dbase + sigma * pw1 * sgn * base
        return y, dy


def _as_2d(p) -> np.ndarray:
    a = np.asarray(p, dtype=complex)
    return a.reshape(a.shape[0], -1) if a.ndim > 1 else a[:, None]


def frobenius_coefficients(
    p2, p1, p0, x0, sigma, order: int, resonance_tol: float = 0.0, skip_resonance: bool = False
) -> FrobeniusSeries:
    """Series coefficients ``c_0..c_order`` of the index-``sigma`` solution.

    ``p2, p1, p0`` are coefficient arrays (low-to-high powers of ``x``); a
    trailing axis of length ``M`` gives a batch of equations solved at once.
    Raises :class:`ResonanceError` if the indicial polynomial vanishes (up to
    ``resonance_tol``) at ``sigma + j`` for some ``1 <= j <= order``. With
    ``skip_resonance`` the free coefficient ``c_j`` is set to 0 instead,
    which is correct only when the expansion is log-free (the caller checks).
    """
    batched = any(np.ndim(p) > 1 for p in (p2, p1, p0)) or np.ndim(sigma) > 0
    a2, a1, a0 = (taylor_shift(_as_2d(p), x0) for p in (p2, p1, p0))
    q = _valuation(a2)
    if _valuation(a1) < q - 1 or _valuation(a0) < q - 2:
        raise ValueError(f"x0={x0} is not a regular singular point")
    width = max(a2.shape[1], a1.shape[1], a0.shape[1], np.size(sigma))
    zero = np.zeros(width, dtype=complex)

    def coef(a, i):
        return a[i] if 0 <= i < len(a) else zero

    sig = np.broadcast_to(np.asarray(sigma, dtype=complex), (width,))

    def indicial(s):
        return coef(a2, q) * s * (s - 1) + coef(a1, q - 1) * s + coef(a0, q - 2)

    lead = indicial(sig)
    scale = np.maximum(np.abs(coef(a2, q)), 1.0)
    if np.any(np.abs(lead) > 1e-8 * scale * (1 + np.abs(sig) ** 2)):
        raise ValueError(f"sigma={sigma} is not a root of the indicial polynomial (I={lead})")
    c = np.zeros((order + 1, width), dtype=complex)
    c[0] = 1.0
    span = max(len(a2), len(a1) + 1, len(a0) + 2)
    for N in range(1, order + 1):
        rhs = np.zeros(width, dtype=complex)
        for nn in range(max(0, N - span), N):
            e = nn + sig
            rhs += c[nn] * (coef(a2, N + q - nn) * e * (e - 1) + coef(a1, N + q - 1 - nn) * e + coef(a0, N + q - 2 - nn))
        den = indicial(sig + N)
        hit = np.abs(den) <= resonance_tol
        if np.any(hit):
            if not skip_resonance:
                raise ResonanceError(f"indicial polynomial vanishes at sigma+{N}")
            den = np.where(hit, 1.0, den)
            rhs = np.where(hit, 0.0, rhs)
        c[N] = -rhs / den
    if not batched:
        return FrobeniusSeries(x0=x0, sigma=complex(sig[0]), coeffs=c[:, 0])
    return FrobeniusSeries(x0=x0, sigma=sig.copy(), coeffs=c)


def _valuation(a) -> int:
    a = np.asarray(a)
    mag = np.abs(a) if a.ndim == 1 else np.abs(a).max(axis=tuple(range(1, a.ndim)))
    nz = np.nonzero(mag > 0)[0]
    return int(nz[0]) if len(nz) else 10**9


def indicial_roots_numeric(p2, p1, p0, x0) -> np.ndarray:
    a2, a1, a0 = (taylor_shift(p, x0) for p in (p2, p1, p0))
    q = _valuation(a2)
    A2 = a2[q]
    A1 = a1[q - 1] if q - 1 < len(a1) and q >= 1 else 0.0
    A0 = a0[q - 2] if q - 2 < len(a0) and q >= 2 else 0.0
    if np.ndim(A2):
        raise ValueError("indicial_roots_numeric expects a single equation")
    return np.roots([A2, A1 - A2, A0])


# ---------------------------------------------------------------------------
# symbolic indicial equation


def indicial_roots(p2, p1, p0, x, x0):
    """Roots of the indicial equation of ``p2 y'' + p1 y' + p0 y = 0`` at ``x0``.

    ``p2, p1, p0`` are sympy expressions rational in ``x``.
    """
    import sympy as sp

    s = sp.Symbol("sigma")
    a1 = sp.limit(sp.cancel((x - x0) * p1 / p2), x, x0)
    a0 = sp.limit(sp.cancel((x - x0) ** 2 * p0 / p2), x, x0)
    poly = sp.expand(s * (s - 1) + a1 * s + a0)
    roots = sp.solve(poly, s)
    if len(roots) == 1:
        roots = roots * 2
    return tuple(sp.simplify(r) for r in roots)
