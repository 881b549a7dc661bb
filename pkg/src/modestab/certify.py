"""Exact certificates for the ratio-sequence stability argument.

For each case the chain is

    analyticity   ->  bound.delta_start, bound.eps, bound.C  ->  induction
    dichotomy     (independent)

Analyticity is certified with symbolic Routh-Hurwitz tables. Each bound
``|q(lambda, n, k)| <= b(k)`` on the closed right half-plane is reduced to
the imaginary axis ``lambda = i t`` (the quantities are rational, hence
polynomially bounded, and analytic by the first certificate), where it
becomes the polynomial inequality

    M = b_num**2 |den(i t)|**2 - b_den**2 |num(i t)|**2 >= 0,

written in ``u = t**2``. After shifting ``n`` and ``k`` onto the
nonnegative integers, ``M`` having no negative coefficient is the
certificate. Nothing here uses floating point.
"""

from __future__ import annotations

import hashlib
import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .ratpoly import (
    VARS,
    MultiPoly,
    RationalFunction,
    coeffs_nonneg,
    hurwitz_stable,
    is_positive_on_orthant,
    lambda_content,
    mod_square_imaginary,
    shift_vars,
    sturm_nonneg_halfline,
)
from .recurrence import (
    CASES,
    LAM,
    N,
    K,
    CaseSpec,
    QuasiSolution,
    case_spec,
    coefficient_parts,
    default_quasi,
    derived_quantities,
    ratio_symbolic,
)
from .report import Certificate, ProofReport

QUANTITIES = ("delta_start", "eps", "C")

#: Lemma identifiers every case must certify, in dependency order.
MANIFEST = (
    "analyticity",
    "bound.delta_start",
    "bound.eps",
    "bound.C",
    "induction",
    "dichotomy",
)

DEPENDENCIES = {
    "analyticity": [],
    "bound.delta_start": ["analyticity"],
    "bound.eps": ["analyticity"],
    "bound.C": ["analyticity"],
    "induction": ["bound.delta_start", "bound.eps", "bound.C"],
    "dichotomy": [],
}

# Published quartic factor of the denominator of r_2 in the general case,
# k^2 l^4 + 14 k^2 l^3 + k(63k - 8) l^2 + 14k(7k - 4) l + 8(5k^2 - 2k + 8).
R2_QUARTIC = (
    K**2 * LAM**4
    + 14 * K**2 * LAM**3
    + K * (63 * K - 8) * LAM**2
    + 14 * K * (7 * K - 4) * LAM
    + 8 * (5 * K**2 - 2 * K + 8)
)


def _spec(case) -> CaseSpec:
    return case if isinstance(case, CaseSpec) else case_spec(case)


def _k_shift(spec: CaseSpec) -> dict:
    return {"k": spec.shifts["k"]} if "k" in spec.shifts else {}


def _finish(cert: Certificate, start: float) -> Certificate:
    cert.wall_time = time.perf_counter() - start
    return cert


def _digest(p: MultiPoly) -> str:
    return hashlib.sha256(p.dump().encode()).hexdigest()[:16]


@lru_cache(maxsize=None)
def _default_derived(name: str):
    return derived_quantities(name)


def _derived(spec: CaseSpec, solution: QuasiSolution | None):
    if solution is None:
        return _default_derived(spec.name)
    return derived_quantities(spec, solution)


# ---------------------------------------------------------------------------
# analyticity


def certify_analyticity(case, solution: QuasiSolution | None = None) -> Certificate:
    """Hurwitz stability of the ``r_{n0}`` denominator and the quasi-solution numerator.

    Together these make ``r_{n0}`` and ``1 / r~_n`` (``n >= n0``) analytic on
    the closed right half-plane, which is what the boundary reduction of the
    bound certificates needs.
    """
    start = time.perf_counter()
    spec = _spec(case)
    violations: list = []
    info: dict = {"n0": spec.n0, "shifts": dict(spec.shifts)}

    # (a) denominator of r_{n0}
    r0 = ratio_symbolic(spec, spec.n0)
    den = r0.den
    if spec.name == "general":
        content, factor = lambda_content(den)
        factor = factor.primitive()
        info["r_n0_content"] = str(content)
        info["r_n0_lambda_factor"] = str(factor)
        info["matches_published_quartic"] = factor == R2_QUARTIC
        if not is_positive_on_orthant(shift_vars(content, _k_shift(spec))):
            violations.append({"part": "r_n0", "reason": "lambda-free factor not positive", "factor": str(content)})
    else:
        factor = den
        info["r_n0_denominator"] = str(den)
    hz = hurwitz_stable(factor, shifts=_k_shift(spec), lemma_id="r_n0_denominator", case=spec.name)
    info["r_n0_routh_table"] = hz.info["routh_table"]
    violations += [{"part": "r_n0", **v} for v in hz.violations]

    # (b) quasi-solution numerator for all n >= n0
    rf = (solution or default_quasi(spec)).as_rational_function()
    info["quasi_numerator"] = str(rf.num)
    qden = shift_vars(rf.den, spec.shifts)
    if set(rf.den.variables) & {"lambda"}:
        violations.append({"part": "quasi", "reason": "common denominator depends on lambda"})
    elif not (is_positive_on_orthant(qden) or is_positive_on_orthant(-qden)):
        violations.append({"part": "quasi", "reason": "common denominator may vanish", "den": str(rf.den)})
    hq = hurwitz_stable(rf.num, shifts=spec.shifts, lemma_id="quasi_numerator", case=spec.name)
    info["quasi_routh_table"] = hq.info["routh_table"]
    violations += [{"part": "quasi", **v} for v in hq.violations]

    # recurrence denominators must not vanish for n >= n0 either
    _, _, ad = coefficient_parts(spec, N, LAM, None if spec.name == "d3" else (K if spec.k is None else spec.k))
    ad_s = shift_vars(ad if isinstance(ad, MultiPoly) else MultiPoly.const(ad), spec.shifts)
    if not is_positive_on_orthant(ad_s):
        violations.append({"part": "recurrence", "reason": "A_n/B_n denominator may vanish", "den": str(ad)})

    cert = Certificate("analyticity", "hurwitz", spec.name, violations, info)
    return _finish(cert, start)


# ---------------------------------------------------------------------------
# bounds


@dataclass
class MasterPolynomial:
    """``M = b_num^2 Q2 - b_den^2 Q1`` after shifts, with its ingredients."""

    M: MultiPoly
    Q1: MultiPoly
    Q2: MultiPoly
    bound: RationalFunction
    shifts: dict


def master_polynomial(
    case,
    quantity: str,
    solution: QuasiSolution | None = None,
    bound: Fraction | RationalFunction | None = None,
) -> MasterPolynomial:
    """Imaginary-axis master polynomial for ``|quantity| <= bound``.

    ``Q1 = |num(i t)|^2`` and ``Q2 = |den(i t)|^2`` are in ``u = t^2`` and
    already shifted; ``bound`` overrides the case's constant (used for
    negative controls).
    """
    if quantity not in QUANTITIES:
        raise ValueError(f"quantity must be one of {QUANTITIES}")
    spec = _spec(case)
    dq = _derived(spec, solution)
    rf = {"delta_start": dq.delta_start, "eps": dq.eps, "C": dq.C}[quantity]
    shifts = _k_shift(spec) if quantity == "delta_start" else dict(spec.shifts)
    b = spec.bound({"delta_start": "delta"}.get(quantity, quantity)) if bound is None else bound
    b = b if isinstance(b, RationalFunction) else RationalFunction(MultiPoly.const(Fraction(b)))
    b_num = shift_vars(b.num, _k_shift(spec))
    b_den = shift_vars(b.den, _k_shift(spec))
    Q1 = mod_square_imaginary(shift_vars(rf.num, shifts))
    Q2 = mod_square_imaginary(shift_vars(rf.den, shifts))
    M = b_num**2 * Q2 - b_den**2 * Q1
    return MasterPolynomial(M=M, Q1=Q1, Q2=Q2, bound=b, shifts=shifts)


def certify_bound(
    case,
    quantity: str,
    solution: QuasiSolution | None = None,
    bound: Fraction | RationalFunction | None = None,
    fallback: str | None = None,
) -> Certificate:
    """Certify ``|quantity| <= b`` on the closed right half-plane.

    With ``fallback="sturm"`` a failing coefficient check is followed by an
    exact Sturm check in ``u`` on a finite ``(n, k)`` lattice. That result is
    weaker (it says nothing off the lattice) and is returned under the
    method ``sturm_lattice`` with the original violations kept in ``info``.
    """
    start = time.perf_counter()
    spec = _spec(case)
    mp = master_polynomial(spec, quantity, solution, bound)
    b_sign_ok = is_positive_on_orthant(shift_vars(mp.bound.num, _k_shift(spec))) and is_positive_on_orthant(
        shift_vars(mp.bound.den, _k_shift(spec))
    )
    cert = coeffs_nonneg(mp.M, lemma_id=f"bound.{quantity}", case=spec.name)
    cert.info.update(
        {
            "quantity": quantity,
            "bound": str(mp.bound),
            "shifts": mp.shifts,
            "degrees": {v: mp.M.degree(v) for v in mp.M.variables},
            "q1_terms": len(mp.Q1),
            "q2_terms": len(mp.Q2),
            "even_t_powers": True,
            "digest": _digest(mp.M),
        }
    )
    if not b_sign_ok:
        cert.violations.append({"reason": "bound is not positive on the k-domain", "bound": str(mp.bound)})
    if mp.M.is_zero():
        cert.violations.append({"reason": "master polynomial vanishes identically"})
    if cert.violations and fallback == "sturm":
        return _finish(sturm_lattice_certificate(mp.M, cert), start)
    if cert.violations and fallback not in (None, "sturm"):
        raise ValueError(f"unknown fallback {fallback!r}")
    return _finish(cert, start)


def sturm_lattice_certificate(M: MultiPoly, failed: Certificate, size: int = 8) -> Certificate:
    """Exact Sturm positivity of ``M(u)`` at every ``(n, k)`` in ``{0..size-1}^2``.

    Only valid on the sampled lattice; the label makes that explicit.
    """
    others = [v for v in M.variables if v != "u"]
    bad = []
    checked = 0
    for pt in itertools.product(range(size), repeat=len(others)):
        point = dict(zip(others, pt))
        if not sturm_nonneg_halfline(M.partial(point)):
            bad.append({"point": point, "reason": "Sturm count or constant term fails"})
        checked += 1
    info = dict(failed.info)
    info.update(
        {
            "weaker": "sampled (n, k) lattice only, not a proof for all n, k",
            "lattice_size": size,
            "points_checked": checked,
            "coefficient_violations": failed.violations,
        }
    )
    return Certificate(failed.lemma_id, "sturm_lattice", failed.case, bad, info)


# ---------------------------------------------------------------------------
# induction and dichotomy


def induction_slack(case) -> RationalFunction:
    """``b_delta - b_eps - b_C * b_delta / (1 - b_delta)`` (a function of ``k`` in the general case)."""
    spec = _spec(case)
    bd, be, bc = (spec.bound(q) for q in ("delta", "eps", "C"))
    return bd - be - bc * bd / (1 - bd)


def certify_induction(case) -> Certificate:
    """Exact closure ``b_eps + b_C b_delta / (1 - b_delta) <= b_delta``.

    From ``delta_{n+1} = eps_n - C_n delta_n / (1 + delta_n)`` this keeps
    ``|delta_n| <= b_delta`` for every ``n >= n0``.
    """
    start = time.perf_counter()
    spec = _spec(case)
    violations = []
    slack = induction_slack(spec)
    bd = spec.bound("delta")
    if not (bd.num.is_constant() and bd.den.is_constant()) or not (
        0 < bd.num.constant_term() / bd.den.constant_term() < 1
    ):
        violations.append({"reason": "b_delta must be a constant in (0, 1)", "b_delta": str(bd)})
    sh = _k_shift(spec)
    num = shift_vars(slack.num, sh)
    den = shift_vars(slack.den, sh)
    neg = [
        {"monomial": dict(zip(VARS, e)), "coeff": str(c)}
        for e, c in (num * den).sorted_terms()
        if c < 0
    ]
    if neg:
        violations.append({"reason": "slack not certified nonnegative", "negative_terms": neg})
    info = {"slack": str(slack), "slack_is_zero": slack.num.is_zero()}
    if slack.num.is_constant() and slack.den.is_constant():
        info["slack_value"] = slack.num.constant_term() / slack.den.constant_term()
    cert = Certificate("induction", "induction", spec.name, violations, info)
    return _finish(cert, start)


# B_n numerator factors, each of the form lambda + (positive in n)
_B_FACTORS = {
    "general": (LAM + 2 * N + 3, LAM + 2 * N + 2),
    "k2": (LAM + 2 * N + 3, LAM + 2 * N + 2),
    "d3": (LAM + 2 * N + 2, LAM + 2 * N + 4),
}


def certify_dichotomy_premises(case) -> Certificate:
    """Distinct characteristic moduli and nonvanishing ``B_n`` for ``Re lambda >= 0``."""
    start = time.perf_counter()
    spec = _spec(case)
    violations: list = []
    info: dict = {}
    kk = None if spec.name == "d3" else (K if spec.k is None else spec.k)
    an, bn, ad = (x if isinstance(x, MultiPoly) else MultiPoly.const(x) for x in coefficient_parts(spec, N, LAM, kk))

    # limits of A_n and B_n as n -> infinity: ratio of n-leading coefficients
    deg = ad.degree("n")
    lead_d = ad.coefficients_in("n")[deg]
    lim_A = RationalFunction(an.coefficients_in("n").get(deg, MultiPoly.const(0)), lead_d)
    lim_B = RationalFunction(bn.coefficients_in("n").get(deg, MultiPoly.const(0)), lead_d)
    if an.degree("n") > deg or bn.degree("n") > deg:
        violations.append({"reason": "A_n or B_n grows with n"})
    small = spec.small_root
    small = small if isinstance(small, RationalFunction) else RationalFunction(MultiPoly.const(small))
    # t^2 - A t - B == (t - 1)(t - s)  <=>  A == 1 + s  and  B == -s
    if not (lim_A == 1 + small and lim_B == -small):
        violations.append({"reason": "characteristic roots differ", "A_inf": str(lim_A), "B_inf": str(lim_B)})
    info["A_limit"], info["B_limit"] = str(lim_A), str(lim_B)
    info["roots"] = ["1", str(small)]
    # |s| < 1 on the domain: 1 - s^2 > 0 after the k-shift (k >= 2 for the premise)
    gap = 1 - small * small
    sh = {"k": 2} if spec.name == "general" else {}
    g = shift_vars(gap.num, sh) * shift_vars(gap.den, sh)
    if not is_positive_on_orthant(g):
        violations.append({"reason": "roots may share a modulus", "1 - s^2": str(gap)})
    info["modulus_gap"] = str(gap)

    # B_n numerator = const * product of (lambda + c(n)) with c(n) > 0 for n >= 0
    f1, f2 = _B_FACTORS[spec.name]
    lead = bn.coefficients_in("lambda").get(2, MultiPoly.const(0))
    if not lead.is_constant() or lead.is_zero() or bn != lead.constant_term() * f1 * f2:
        violations.append({"reason": "B_n numerator does not factor as expected", "B_num": str(bn)})
    for f in (f1, f2):
        rest = f - LAM
        if "lambda" in rest.variables or not is_positive_on_orthant(rest):
            violations.append({"reason": "B_n factor may vanish on Re lambda >= 0", "factor": str(f)})
    if not is_positive_on_orthant(shift_vars(ad, {"k": 2} if spec.name == "general" else {})):
        violations.append({"reason": "B_n denominator may vanish for n >= 0", "den": str(ad)})
    info["B_factors"] = [str(f1), str(f2)]
    cert = Certificate("dichotomy", "exact_arith", spec.name, violations, info)
    return _finish(cert, start)


# ---------------------------------------------------------------------------
# runner


def run_full_proof(
    case,
    solution: QuasiSolution | None = None,
    fallback: str | None = None,
    bounds: dict | None = None,
) -> ProofReport:
    """Run every certificate of ``case`` in dependency order.

    All certificates are attempted even after a failure so the report is
    complete; the verdict is pass only if every manifest entry passed.
    ``bounds`` overrides individual bound constants (negative controls).
    """
    spec = _spec(case)
    bounds = bounds or {}
    report = ProofReport(case=spec.name, manifest=MANIFEST, case_spec=spec.describe())
    report.add(certify_analyticity(spec, solution), DEPENDENCIES["analyticity"])
    for q in QUANTITIES:
        lemma = f"bound.{q}"
        report.add(certify_bound(spec, q, solution, bounds.get(q), fallback), DEPENDENCIES[lemma])
    report.add(certify_induction(spec), DEPENDENCIES["induction"])
    report.add(certify_dichotomy_premises(spec), DEPENDENCIES["dichotomy"])
    return report


def prove_all(**kwargs) -> dict[str, ProofReport]:
    return {c: run_full_proof(c, **kwargs) for c in CASES}
