"""Exact multivariate polynomials over the rationals.

Everything here is exact: scalars are :class:`fractions.Fraction` and floats
are refused at construction time. Besides ring arithmetic the module provides
the handful of primitives the positivity certificates are built from:

* :func:`mod_square_imaginary` -- ``|p(it)|^2`` written as a polynomial in
  ``u = t^2``;
* :func:`shift_vars` -- affine shifts ``v -> v + c`` moving a domain
  ``{c, c+1, ...}`` onto ``{0, 1, ...}``;
* :func:`coeffs_nonneg` -- the sign inspection certificate;
* :func:`hurwitz_stable` -- a symbolic Routh table with polynomial entries.
"""

from __future__ import annotations

import time
from fractions import Fraction
from math import comb, gcd, lcm
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping

from .report import Certificate

Rational = Fraction

VARS: tuple[str, ...] = ("lambda", "n", "k", "t", "u")
_INDEX = {name: i for i, name in enumerate(VARS)}
_ZERO_EXP = (0,) * len(VARS)


def as_rational(x) -> Fraction:
    """Coerce ints and rationals to ``Fraction``; refuse anything inexact."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, bool):
        return Fraction(int(x))
    raise TypeError(f"exact rational required, got {type(x).__name__}: {x!r}")


def _var_index(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise ValueError(f"unknown variable {name!r}; expected one of {VARS}") from None


class MultiPoly:
    """Sparse polynomial in the variables ``lambda, n, k, t, u``.

    Terms are stored as ``{exponent-tuple: Fraction}`` with no zero
    coefficients. Instances are immutable and hashable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None):
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != len(VARS) or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent vector {exp!r}")
                c = as_rational(c)
                if c:
                    clean[tuple(exp)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors ------------------------------------------------------
    @classmethod
    def const(cls, c) -> "MultiPoly":
        c = as_rational(c)
        return cls._raw({_ZERO_EXP: c} if c else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "MultiPoly":
        exp = [0] * len(VARS)
        exp[_var_index(name)] = power
        return cls._raw({tuple(exp): Fraction(1)})

    @classmethod
    def vars(cls, names: str) -> tuple["MultiPoly", ...]:
        return tuple(cls.var(nm) for nm in names.replace(",", " ").split())

    @classmethod
    def monomial(cls, coeff, **powers: int) -> "MultiPoly":
        exp = [0] * len(VARS)
        for name, p in powers.items():
            exp[_var_index(name)] = p
        return cls({tuple(exp): coeff})

    @classmethod
    def from_univariate(cls, coeffs: Iterable, var: str) -> "MultiPoly":
        """Build ``sum c_j var^j`` from a low-to-high coefficient list.

        Each ``c_j`` may be a rational or a MultiPoly free of ``var``.
        """
        x = cls.var(var)
        out = cls.const(0)
        power = cls.const(1)
        for c in coeffs:
            out = out + power * c
            power = power * x
        return out

    # -- inspection --------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    @property
    def variables(self) -> tuple[str, ...]:
        used = [False] * len(VARS)
        for exp in self._terms:
            for i, e in enumerate(exp):
                if e:
                    used[i] = True
        return tuple(v for v, flag in zip(VARS, used) if flag)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(exp == _ZERO_EXP for exp in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(_ZERO_EXP, Fraction(0))

    def degree(self, var: str | None = None) -> int:
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e) for e in self._terms)
        i = _var_index(var)
        return max(e[i] for e in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficients_in(self, var: str) -> dict[int, "MultiPoly"]:
        """Split into ``{power: coefficient polynomial free of var}``."""
        i = _var_index(var)
        out: dict[int, dict] = {}
        for exp, c in self._terms.items():
            p = exp[i]
            rest = exp[:i] + (0,) + exp[i + 1:]
            out.setdefault(p, {})[rest] = c
        return {p: MultiPoly._raw(t) for p, t in sorted(out.items())}

    def coefficient_list(self, var: str) -> list["MultiPoly"]:
        """Dense low-to-high list of coefficients in ``var``."""
        parts = self.coefficients_in(var)
        deg = max(parts) if parts else -1
        return [parts.get(j, MultiPoly.const(0)) for j in range(deg + 1)]

    def content(self) -> Fraction:
        """Positive rational ``c`` such that ``self / c`` has coprime integer coefficients."""
        if not self._terms:
            return Fraction(0)
        g = 0
        den = 1
        for c in self._terms.values():
            g = gcd(g, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(g, den)

    def primitive(self) -> "MultiPoly":
        c = self.content()
        return self if c in (0, 1) else self * (1 / c)

    def leading_sign(self) -> int:
        """Sign of the coefficient of the largest exponent vector."""
        if not self._terms:
            return 0
        return 1 if self._terms[max(self._terms)] > 0 else -1

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.const(other)

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = self._coerce(other)
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        if not isinstance(other, MultiPoly):
            c = as_rational(other)
            if not c:
                return MultiPoly._raw({})
            return MultiPoly._raw({e: v * c for e, v in self._terms.items()})
        out: dict[tuple[int, ...], Fraction] = {}
        get = out.get
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return MultiPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (MultiPoly, RationalFunction)):
            return RationalFunction(self, 1) / other
        c = as_rational(other)
        if not c:
            raise ZeroDivisionError("division of polynomial by zero")
        return self * (1 / c)

    def __rtruediv__(self, other):
        return RationalFunction(self._coerce(other), 1) / RationalFunction(self, 1)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = MultiPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return other == self
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.const(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- evaluation --------------------------------------------------------
    def evaluate(self, point: Mapping[str, object]):
        """Evaluate at ``point``; every occurring variable must be given.

        Works for any numeric type closed under ``+`` and ``*`` (exact
        rationals, floats, complex, sympy numbers).
        """
        vals = [None] * len(VARS)
        for name, v in point.items():
            vals[_var_index(name)] = v
        total = 0
        for exp, c in self._terms.items():
            term = c
            for i, e in enumerate(exp):
                if e:
                    if vals[i] is None:
                        raise ValueError(f"no value given for variable {VARS[i]!r}")
                    term = term * vals[i] ** e
            total = total + term
        return total

    def __call__(self, **point):
        return self.evaluate(point)

    def partial(self, point: Mapping[str, object]) -> "MultiPoly":
        """Substitute exact rational values for some of the variables."""
        idx = {_var_index(k): as_rational(v) for k, v in point.items()}
        out: dict[tuple[int, ...], Fraction] = {}
        for exp, c in self._terms.items():
            e = list(exp)
            for i, v in idx.items():
                if e[i]:
                    c = c * v ** e[i]
                    e[i] = 0
            key = tuple(e)
            out[key] = out.get(key, 0) + c
        return MultiPoly._raw({e: c for e, c in out.items() if c})

    def rename(self, old: str, new: str) -> "MultiPoly":
        i, j = _var_index(old), _var_index(new)
        out: dict[tuple[int, ...], Fraction] = {}
        for exp, c in self._terms.items():
            e = list(exp)
            e[j] += e[i]
            if i != j:
                e[i] = 0
            key = tuple(e)
            out[key] = out.get(key, 0) + c
        return MultiPoly._raw({e: c for e, c in out.items() if c})

    # -- display -----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def dump(self) -> str:
        """One monomial per line, ``coeff * lambda^a n^b k^c u^d``, sorted by exponent."""
        lines = []
        for exp, c in self.sorted_terms():
            mono = " ".join(f"{VARS[i]}^{e}" for i, e in enumerate(exp) if e)
            lines.append(f"{c} * {mono}" if mono else f"{c}")
        return "\n".join(lines)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp, c in sorted(self._terms.items(), key=lambda kv: kv[0], reverse=True):
            mono = "*".join(
                (VARS[i] if e == 1 else f"{VARS[i]}^{e}") for i, e in enumerate(exp) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"MultiPoly({self})"


class RationalFunction:
    """Quotient of two MultiPoly with a note on where ``den`` is nonvanishing.

    Integer content is always divided out and the denominator is scaled to
    a positive leading coefficient. Full gcd cancellation is opt-in through
    :meth:`cancel` because it is rarely worth its cost here.
    """

    __slots__ = ("num", "den", "domain_note")

    def __init__(self, num, den=1, domain_note: str = ""):
        num = num if isinstance(num, MultiPoly) else MultiPoly.const(num)
        den = den if isinstance(den, MultiPoly) else MultiPoly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = MultiPoly.const(1)
        else:
            scale = den.leading_sign() / den.content()
            if scale != 1:
                num, den = num * scale, den * scale
        self.num = num
        self.den = den
        self.domain_note = domain_note

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _coerce(x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return RationalFunction(x, 1)

    def __add__(self, other):
        other = self._coerce(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, self.domain_note)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return RationalFunction(self.den ** (-e), self.num ** (-e))
        return RationalFunction(self.num ** e, self.den ** e)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RationalFunction is not hashable (equality is by cross-multiplication)")

    # -- evaluation and transformation ---------------------------------------
    def evaluate(self, point: Mapping[str, object]):
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at {dict(point)}")
        return self.num.evaluate(point) / d

    def __call__(self, **point):
        return self.evaluate(point)

    def partial(self, point: Mapping[str, object]) -> "RationalFunction":
        return RationalFunction(self.num.partial(point), self.den.partial(point), self.domain_note)

    def shift(self, shifts: Mapping[str, int]) -> "RationalFunction":
        return RationalFunction(shift_vars(self.num, shifts), shift_vars(self.den, shifts), self.domain_note)

    def substitute(self, var: str, expr) -> "RationalFunction":
        return substitute(self.num, var, expr) / substitute(self.den, var, expr)

    def cancel(self) -> "RationalFunction":
        """Full multivariate gcd cancellation (delegated to sympy)."""
        import sympy

        syms = sympy.symbols(" ".join(VARS))
        p = sympy.Poly(to_sympy(self.num), *syms, domain="QQ")
        q = sympy.Poly(to_sympy(self.den), *syms, domain="QQ")
        g = sympy.gcd(p, q)
        p, q = sympy.div(p, g)[0], sympy.div(q, g)[0]
        return RationalFunction(from_sympy(p), from_sympy(q), self.domain_note)

    @property
    def variables(self) -> tuple[str, ...]:
        used = set(self.num.variables) | set(self.den.variables)
        return tuple(v for v in VARS if v in used)

    def __str__(self):
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


# ---------------------------------------------------------------------------
# sympy bridges (used only for optional gcd and by tests as an oracle)

def to_sympy(p: MultiPoly):
    import sympy

    syms = sympy.symbols(" ".join(VARS))
    expr = sympy.Integer(0)
    for exp, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, exp):
            if e:
                term *= s ** e
        expr += term
    return expr


def from_sympy(expr) -> MultiPoly:
    import sympy

    syms = sympy.symbols(" ".join(VARS))
    poly = expr if isinstance(expr, sympy.Poly) else sympy.Poly(sympy.expand(expr), *syms)
    if tuple(poly.gens) != tuple(syms):
        poly = sympy.Poly(poly.as_expr(), *syms)
    terms = {}
    for exp, c in poly.terms():
        c = sympy.Rational(c)
        terms[tuple(int(e) for e in exp)] = Fraction(int(c.p), int(c.q))
    return MultiPoly(terms)


# ---------------------------------------------------------------------------
# operations


def poly_arith(a: MultiPoly, b, op: str) -> MultiPoly:
    """Dispatch ``add | sub | mul | pow``; for ``pow`` ``b`` is the exponent."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown operation {op!r}")


def substitute(p: MultiPoly, var: str, expr) -> RationalFunction:
    """Compose ``p`` with ``var -> expr``.

    ``expr`` may be a rational number, a MultiPoly or a RationalFunction.
    The result's denominator is ``den(expr) ** deg_var(p)``.
    """
    if isinstance(p, RationalFunction):
        return p.substitute(var, expr)
    if var not in p.variables:
        return RationalFunction(p, 1)
    if isinstance(expr, RationalFunction):
        enum, eden = expr.num, expr.den
    elif isinstance(expr, MultiPoly):
        enum, eden = expr, MultiPoly.const(1)
    else:
        enum, eden = MultiPoly.const(as_rational(expr)), MultiPoly.const(1)
    if eden.is_zero():
        raise ZeroDivisionError("substitution with a zero denominator")
    parts = p.coefficients_in(var)
    deg = max(parts)
    num = MultiPoly.const(0)
    num_pows = [MultiPoly.const(1)]
    den_pows = [MultiPoly.const(1)]
    for _ in range(deg):
        num_pows.append(num_pows[-1] * enum)
        den_pows.append(den_pows[-1] * eden)
    for j, c in parts.items():
        num = num + c * num_pows[j] * den_pows[deg - j]
    return RationalFunction(num, den_pows[deg])


def mod_square_imaginary(p: MultiPoly, var: str = "lambda", out: str = "u") -> MultiPoly:
    """Return ``Q`` with ``Q(t^2, ...) == |p(i t, ...)|^2`` for real ``t``.

    The real and imaginary parts of ``p(it)`` are read off from the parity of
    the exponent of ``var``; the result only ever contains ``u = t^2``.
    """
    if out in p.variables:
        raise ValueError(f"output variable {out!r} already occurs in the polynomial")
    re = MultiPoly.const(0)
    im = MultiPoly.const(0)  # im part divided by t
    u = MultiPoly.var(out)
    for j, c in p.coefficients_in(var).items():
        sign = -1 if (j // 2) % 2 else 1
        if j % 2 == 0:
            re = re + sign * c * u ** (j // 2)
        else:
            im = im + sign * c * u ** ((j - 1) // 2)
    return re * re + u * im * im


def shift_vars(p: MultiPoly, shifts: Mapping[str, int]) -> MultiPoly:
    """Replace each ``v`` by ``v + shifts[v]``; offsets are nonnegative integers."""
    if isinstance(p, RationalFunction):
        return p.shift(shifts)
    idx = []
    for name, off in shifts.items():
        if not isinstance(off, int) or off < 0:
            raise ValueError(f"shift offsets must be nonnegative integers, got {name}->{off!r}")
        if off:
            idx.append((_var_index(name), off))
    if not idx:
        return p
    out: dict[tuple[int, ...], Fraction] = {}
    for exp, c in p.items():
        partial = {exp: c}
        for i, off in idx:
            e = exp[i]
            if not e:
                continue
            nxt: dict[tuple[int, ...], Fraction] = {}
            for pe, pc in partial.items():
                for j in range(e + 1):
                    ne = pe[:i] + (j,) + pe[i + 1:]
                    nxt[ne] = nxt.get(ne, 0) + pc * comb(e, j) * off ** (e - j)
            partial = nxt
        for ne, nc in partial.items():
            out[ne] = out.get(ne, 0) + nc
    return MultiPoly._raw({e: c for e, c in out.items() if c})


def coeffs_nonneg(p: MultiPoly, lemma_id: str = "coeffs_nonneg", case: str | None = None) -> Certificate:
    """Certify ``p >= 0`` on the nonnegative orthant by coefficient signs.

    On failure every negative monomial is listed. ``info['strict']`` records
    whether the constant term is positive, which together with passing
    makes ``p > 0`` on the orthant; the caller decides if it needs that.
    """
    start = time.perf_counter()
    bad = [
        {"monomial": _mono_dict(exp), "coeff": str(c)}
        for exp, c in p.sorted_terms()
        if c < 0
    ]
    cert = Certificate(
        lemma_id=lemma_id,
        method="positivity_after_shift",
        case=case,
        violations=bad,
        info={
            "n_terms": len(p),
            "variables": list(p.variables),
            "constant_term": str(p.constant_term()),
            "strict": p.constant_term() > 0,
            "zero_polynomial": p.is_zero(),
        },
    )
    cert.wall_time = time.perf_counter() - start
    return cert


def _mono_dict(exp: tuple[int, ...]) -> dict[str, int]:
    return {VARS[i]: e for i, e in enumerate(exp) if e}


def is_positive_on_orthant(p: MultiPoly) -> bool:
    """Nonnegative coefficients and a positive constant term."""
    return p.constant_term() > 0 and all(c >= 0 for _, c in p.items())


def hurwitz_stable(
    p: MultiPoly,
    k_shift: int | None = None,
    var: str = "lambda",
    shifts: Mapping[str, int] | None = None,
    lemma_id: str = "hurwitz",
    case: str | None = None,
) -> Certificate:
    """Symbolic Routh-Hurwitz test in ``var`` with polynomial coefficients.

    The other variables (typically ``k``, possibly ``n``) are first shifted so
    that their domain becomes the nonnegative integers; then a fraction-free
    Routh table is built and every first-column entry must be a polynomial
    with nonnegative coefficients and a positive constant term. Rows are only
    ever scaled by pivots already certified positive, so signs are preserved.
    A first-column entry that vanishes identically is reported as a
    degenerate table, never perturbed away.
    """
    start = time.perf_counter()
    all_shifts = dict(shifts or {})
    if k_shift:
        all_shifts["k"] = all_shifts.get("k", 0) + k_shift
    q = shift_vars(p, all_shifts)
    coeffs = q.coefficient_list(var)
    violations: list = []
    table: list[list[str]] = []
    info: dict = {"shifts": all_shifts, "degree": len(coeffs) - 1}

    if len(coeffs) < 2:
        violations.append({"reason": "polynomial has no roots to locate (degree < 1)"})
    else:
        lead = coeffs[-1]
        if lead.is_zero():
            violations.append({"reason": "leading coefficient vanishes identically"})
        else:
            if not is_positive_on_orthant(lead) and is_positive_on_orthant(-lead):
                coeffs = [-c for c in coeffs]
                info["negated"] = True
            top = coeffs[::-1]
            row0 = top[0::2]
            row1 = top[1::2]
            width = len(row0)
            row1 = row1 + [MultiPoly.const(0)] * (width - len(row1))
            rows = [row0, row1]
            deg = len(coeffs) - 1
            while len(rows) < deg + 1:
                a, b = rows[-2], rows[-1]
                if b[0].is_zero():
                    break
                new = [b[0] * a[j + 1] - a[0] * b[j + 1] for j in range(width - 1)]
                new.append(MultiPoly.const(0))
                # scale the whole row by one positive rational; per-entry scaling would be wrong
                c = _row_content(new)
                rows.append([e * (1 / c) for e in new] if c else new)
            table = [[str(e) for e in r if not e.is_zero()] or ["0"] for r in rows]
            for i, r in enumerate(rows):
                pivot = r[0]
                if pivot.is_zero():
                    violations.append({"row": i, "reason": "degenerate Routh table: zero first-column entry"})
                    break
                if not is_positive_on_orthant(pivot):
                    violations.append(
                        {
                            "row": i,
                            "entry": str(pivot),
                            "negative_terms": [
                                {"monomial": _mono_dict(e), "coeff": str(c)}
                                for e, c in pivot.sorted_terms()
                                if c < 0
                            ],
                            "constant_term": str(pivot.constant_term()),
                        }
                    )
            if len(rows) < deg + 1 and not violations:
                violations.append({"reason": "Routh table terminated early"})
    info["routh_table"] = table
    cert = Certificate(lemma_id=lemma_id, method="hurwitz", case=case, violations=violations, info=info)
    cert.wall_time = time.perf_counter() - start
    return cert


def _row_content(row: list[MultiPoly]) -> Fraction:
    g = Fraction(0)
    for e in row:
        if e.is_zero():
            continue
        c = e.content()
        g = Fraction(gcd(g.numerator, c.numerator), lcm(g.denominator, c.denominator)) if g else abs(c)
    return g


def lambda_content(p: MultiPoly, var: str = "lambda") -> tuple[MultiPoly, MultiPoly]:
    """Split ``p = c * q`` where ``c`` is the gcd of the ``var``-coefficients.

    Only handles coefficients that are univariate (in one other variable) or
    constant; that is all the analyticity certificates need.
    """
    parts = list(p.coefficients_in(var).values())
    others = set()
    for c in parts:
        others |= set(c.variables)
    if len(others) > 1:
        raise ValueError("lambda_content supports univariate coefficients only")
    if not others:
        c = Fraction(0)
        for part in parts:
            pc = part.content()
            c = Fraction(gcd(c.numerator, pc.numerator), lcm(c.denominator, pc.denominator))
        return MultiPoly.const(c), p * (1 / c)
    x = others.pop()
    g = None
    for part in parts:
        lst = [as_rational(cc.constant_term()) for cc in part.coefficient_list(x)]
        g = lst if g is None else _upoly_gcd(g, lst)
    gpoly = MultiPoly.from_univariate(g, x)
    quotient = MultiPoly.const(0)
    for j, part in p.coefficients_in(var).items():
        lst = [cc.constant_term() for cc in part.coefficient_list(x)]
        qt, rem = _upoly_divmod(lst, g)
        assert not any(rem)
        quotient = quotient + MultiPoly.from_univariate(qt, x) * MultiPoly.var(var, j)
    return gpoly, quotient


def _trim(a: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _upoly_divmod(a, b):
    a, b = _trim([Fraction(x) for x in a]), _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / b[-1]
        q[shift] = f
        for i, bc in enumerate(b):
            r[i + shift] -= f * bc
        r = _trim(r)
    return q, r


def _upoly_gcd(a, b):
    a, b = _trim([Fraction(x) for x in a]), _trim([Fraction(x) for x in b])
    while b:
        _, r = _upoly_divmod(a, b)
        a, b = b, r
    if not a:
        return [Fraction(0)]
    # normalise to coprime integer coefficients with positive leading term
    lead = a[-1]
    a = [x / lead for x in a]
    den = 1
    for x in a:
        den = lcm(den, x.denominator)
    a = [x * den for x in a]
    g = 0
    for x in a:
        g = gcd(g, x.numerator)
    return [x / g for x in a]


def sturm_sequence(coeffs: list[Fraction]) -> list[list[Fraction]]:
    """Exact Sturm sequence of a univariate polynomial (low-to-high coefficients)."""
    p = _trim([Fraction(c) for c in coeffs])
    dp = [i * c for i, c in enumerate(p)][1:]
    seq = [p, _trim(dp)]
    while seq[-1]:
        _, r = _upoly_divmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(values: Iterable[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_halfline(coeffs: list[Fraction]) -> int:
    """Number of distinct real roots in ``(0, inf)`` via Sturm's theorem."""
    seq = sturm_sequence(coeffs)
    at0 = []
    for s in seq:
        v = s[0] if s else Fraction(0)
        if v == 0:
            # sign just to the right of 0 is given by the lowest nonzero coefficient
            v = next((c for c in s if c != 0), Fraction(0))
        at0.append(v)
    at_inf = [s[-1] for s in seq]
    return _sign_changes(at0) - _sign_changes(at_inf)


def sturm_nonneg_halfline(p: MultiPoly, var: str = "u") -> bool:
    """Exact check that a univariate ``p`` is positive on ``[0, inf)``."""
    extra = set(p.variables) - {var}
    if extra:
        raise ValueError(f"expected a polynomial in {var!r} only, found {sorted(extra)}")
    coeffs = [c.constant_term() for c in p.coefficient_list(var)]
    if not coeffs:
        return False
    if coeffs[0] <= 0:
        return False
    return count_roots_halfline(coeffs) == 0
