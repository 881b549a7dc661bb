"""Command-line entry point.

Subcommands: ``model``, ``recurrence``, ``certify``, ``scan``, ``quasifit``
and ``prove-all``. Every JSON report carries ``schema_version`` and a
``config`` echo of the parsed flags; wall times live in a ``volatile`` block
(dropped by ``--no-volatile``) so identical invocations give identical bytes.

Exit codes: 0 all verdicts pass, 1 a certificate, scan or validation failed,
2 argument error, 3 resource exhaustion.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import certify, model, quasifit, recurrence, scanner
from .report import SCHEMA_VERSION, _jsonable

log = logging.getLogger("modestab")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# argument helpers


def _interval(text: str) -> tuple[float, float]:
    try:
        a, b = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}") from None
    if a > b:
        raise argparse.ArgumentTypeError(f"empty interval {text!r}")
    return a, b


def _int_range(text: str) -> tuple[int, int]:
    a, b = _interval(text)
    if a != int(a) or b != int(b):
        raise argparse.ArgumentTypeError(f"expected integers a:b, got {text!r}")
    return int(a), int(b)


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _bound_override(text: str) -> tuple[str, Fraction]:
    try:
        q, v = text.split("=")
        value = Fraction(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected QUANTITY=RATIONAL, got {text!r}") from None
    if q not in certify.QUANTITIES:
        raise argparse.ArgumentTypeError(f"quantity must be one of {certify.QUANTITIES}")
    return q, value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="modestab", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="count", default=0, help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(sp):
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--no-volatile", action="store_true", help="omit wall times from JSON")

    sp = sub.add_parser("model", help="potentials and residual tables for one dimension")
    sp.add_argument("--d", type=int, default=3, help="dimension d >= 3")
    sp.add_argument("--points", type=int, default=11, help="interior sample points in (0, 1)")
    common(sp)
    sp.set_defaults(func=cmd_model)

    sp = sub.add_parser("recurrence", help="A_n, B_n, r_n, quasi-solution and delta_n tables")
    sp.add_argument("--case", choices=recurrence.CASES, default="general")
    sp.add_argument("--lam", type=_complex, default=complex(1.0), help="spectral parameter, e.g. 1+2j")
    sp.add_argument("--k", type=int, help="k = d - 2 (general case, k >= 3)")
    sp.add_argument("--N", type=int, default=10, help="last index in the table")
    sp.add_argument("--emit", choices=("json", "text"), default="json")
    common(sp)
    sp.set_defaults(func=cmd_recurrence)

    sp = sub.add_parser("certify", help="exact certificates for one case")
    sp.add_argument("--case", choices=recurrence.CASES, default="general")
    sp.add_argument("--emit", choices=("json", "markdown"), default="json")
    sp.add_argument("--fallback", choices=("sturm",), help="opt-in weaker fallback for failed bounds")
    sp.add_argument(
        "--bound", type=_bound_override, action="append", default=[], metavar="Q=VALUE",
        help="override a bound constant (negative controls), e.g. C=1/12",
    )
    common(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("scan", help="grid classification of lim r_n")
    sp.add_argument("--case", choices=recurrence.CASES, default="general")
    sel = sp.add_mutually_exclusive_group()
    sel.add_argument("--k", type=int, help="k = d - 2")
    sel.add_argument("--d", type=int, help="dimension (alternative to --k)")
    sp.add_argument("--re", type=_interval, default=(0.0, 5.0), metavar="A:B")
    sp.add_argument("--im", type=_interval, default=(-5.0, 5.0), metavar="A:B")
    sp.add_argument("--step", type=float, default=0.1)
    sp.add_argument("--nmax", type=int, default=5000)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--csv", help="write per-point classifications to this CSV file")
    common(sp)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("quasifit", help="construct and validate a quasi-solution")
    sp.add_argument("--case", choices=("general", "d3"), default="general")
    sp.add_argument("--n-range", type=_int_range, default=(2, 120), metavar="A:B")
    sp.add_argument("--k-range", type=_int_range, default=(3, 60), metavar="A:B")
    sp.add_argument("--fit-n-min", type=int, default=20)
    sp.add_argument("--probe", type=Fraction, default=Fraction(1), help="central-difference step in lambda")
    sp.add_argument("--artifacts", help="write per-stage artifacts (JSON) to this file")
    common(sp)
    sp.set_defaults(func=cmd_quasifit)

    sp = sub.add_parser("prove-all", help="certify all cases plus a default scan")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes for the case proofs")
    sp.add_argument("--nmax", type=int, default=5000, help="n_max of the default scans")
    sp.add_argument("--emit", choices=("json", "markdown"), default="json")
    common(sp)
    sp.set_defaults(func=cmd_prove_all)
    return p


def _config(args) -> dict:
    return _jsonable({k: v for k, v in sorted(vars(args).items()) if k not in ("func", "verbose", "out")})


def _envelope(args, body: dict, wall: float, passed: bool) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "config": _config(args),
        "verdict": "pass" if passed else "fail",
        **body,
    }
    if not args.no_volatile:
        out.setdefault("volatile", {})["wall_time"] = round(wall, 6)
    return out


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=True) + "\n"


def _write(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pairs(rho, vals) -> list:
    return [[float(r), float(v)] for r, v in zip(rho, vals)]


# ---------------------------------------------------------------------------
# subcommands


def cmd_model(args) -> int:
    t0 = time.perf_counter()
    if args.d < 3:
        raise _Usage("--d must be >= 3")
    if args.points < 1:
        raise _Usage("--points must be positive")
    rho = np.linspace(0, 1, args.points + 2)[1:-1]
    chain, closed = model.mode_potential(rho, args.d)
    pot = model.susy_chain(args.d)
    u = model.symmetry_mode(rho, args.d)
    du, ddu = (model.symmetry_mode_derivative(rho, args.d, j) for j in (1, 2))
    body = {
        "d": args.d,
        "m": str(model.ModeProblem(args.d).m),
        "k": model.ModeProblem(args.d).k,
        "potential_chain": _pairs(rho, chain),
        "potential_closed": _pairs(rho, closed),
        "susy_potential": _pairs(rho, pot.V_susy(rho)),
        "susy_potential_closed": _pairs(rho, model.susy_potential_closed(rho, args.d)),
        "symmetry_mode": _pairs(rho, u),
        "profile_residual": _pairs(rho, model.profile_residual(rho, args.d)),
        "symmetry_mode_residual": _pairs(rho, model.mode_residual(rho, u, du, ddu, 1.0, args.d)),
        "susy_identity": bool(pot.symbolic_identity),
        "max_deviations": {k: float(v) for k, v in pot.check(rho).items()},
    }
    passed = bool(pot.symbolic_identity)
    _write(args, _dump(_envelope(args, body, time.perf_counter() - t0, passed)))
    return EXIT_OK if passed else EXIT_FAIL


def _recurrence_rows(case: str, lam: complex, k, N: int) -> list[dict]:
    spec = recurrence.case_spec(case)
    kk = None if case == "d3" else (spec.k if spec.k is not None else k)
    kq = kk if case == "general" else None
    sol = recurrence.default_quasi(case)
    ratios = recurrence.ratio_seq(case, lam, N, kk)
    rows = []
    for n in range(N + 1):
        an, bn, d = recurrence.coefficient_parts(case, n, lam, kk)
        r = ratios.value(n)
        row = {"n": n, "A": complex(an / d), "B": complex(bn / d), "r": complex(r)}
        if n >= spec.n0:
            rq = complex(sol.evaluate(float(n), lam, kq))
            row["r_quasi"] = rq
            row["delta"] = complex(r / rq - 1) if np.isfinite(abs(r)) else None
        rows.append(row)
    return rows


def cmd_recurrence(args) -> int:
    t0 = time.perf_counter()
    if args.case == "general" and (args.k is None or args.k < 3):
        raise _Usage("--case general needs --k >= 3")
    if args.case != "general" and args.k is not None:
        raise _Usage(f"--k is fixed by --case {args.case}")
    if args.N < 1:
        raise _Usage("--N must be >= 1")
    rows = _recurrence_rows(args.case, args.lam, args.k, args.N)
    if args.emit == "text":
        buf = io.StringIO()
        cols = ("n", "A", "B", "r", "r_quasi", "delta")
        buf.write("  ".join(f"{c:>28}" if c != "n" else f"{c:>4}" for c in cols) + "\n")
        for row in rows:
            cells = [f"{row['n']:>4}"]
            for c in cols[1:]:
                v = row.get(c)
                cells.append(f"{'-':>28}" if v is None else f"{v.real:>+13.6e}{v.imag:>+13.6e}j ")
            buf.write("  ".join(cells) + "\n")
        _write(args, buf.getvalue())
        return EXIT_OK
    body = {"case_spec": recurrence.case_spec(args.case).describe(), "rows": rows}
    _write(args, _dump(_envelope(args, body, time.perf_counter() - t0, True)))
    return EXIT_OK


def cmd_certify(args) -> int:
    bounds = dict(args.bound)
    report = certify.run_full_proof(args.case, fallback=args.fallback, bounds=bounds)
    if args.emit == "markdown":
        _write(args, report.to_markdown())
    else:
        body = report.to_dict(volatile=not args.no_volatile)
        body["config"] = _config(args)
        body["command"] = args.command
        _write(args, _dump(body))
    return EXIT_OK if report.passed else EXIT_FAIL


def _scan_k(args):
    if args.case == "d3":
        if args.k is not None or (args.d is not None and args.d != 3):
            raise _Usage("--case d3 fixes d = 3")
        return None
    k = args.k if args.k is not None else (args.d - 2 if args.d is not None else None)
    if args.case == "k2":
        if k not in (None, 2):
            raise _Usage("--case k2 fixes k = 2")
        return 2
    if k is None:
        raise _Usage("--case general needs --k or --d")
    if k < 2:
        raise _Usage("k must be >= 2")
    return k


def cmd_scan(args) -> int:
    t0 = time.perf_counter()
    k = _scan_k(args)
    try:
        region = scanner.ScanRegion(
            re_min=args.re[0], re_max=args.re[1], im_min=args.im[0], im_max=args.im[1],
            step=args.step, n_max=args.nmax, tol=args.tol,
        )
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    summary = scanner.scan_grid(args.case, region, k=k)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["re", "im", "label", "abs_limit_minus_one"])
            for re_, im_, lab, dist in summary.rows():
                w.writerow([f"{re_:.10g}", f"{im_:.10g}", lab, f"{dist:.6e}"])
    body = {"scan": summary.to_dict()}
    _write(args, _dump(_envelope(args, body, time.perf_counter() - t0, summary.passed)))
    return EXIT_OK if summary.passed else EXIT_FAIL


def cmd_quasifit(args) -> int:
    t0 = time.perf_counter()
    if args.n_range[0] < 1 or args.n_range[1] < args.fit_n_min + 5:
        raise _Usage("--n-range must start at >= 1 and reach fit-n-min + 5")
    if args.case == "general" and (args.k_range[0] < 3 or args.k_range[1] - args.k_range[0] < 2):
        raise _Usage("--k-range needs k >= 3 and at least 3 values")
    fitter = quasifit.QuasiSolutionFitter(
        case=args.case, n_range=args.n_range, k_range=args.k_range,
        fit_n_min=args.fit_n_min, probe=args.probe,
    ).fit()
    report = quasifit.validate_quasi(fitter.quasi_solution_, args.case)
    if args.artifacts:
        with open(args.artifacts, "w", encoding="utf-8") as fh:
            fh.write(_dump(fitter.artifacts()))
    body = {
        "quasi_solution": fitter.quasi_solution_.to_dict(),
        "rational_fits": {k: v.to_dict() for k, v in fitter.rational_.items()},
        "selection": fitter.selection_,
        "validation": report.to_dict(),
    }
    _write(args, _dump(_envelope(args, body, time.perf_counter() - t0, report.passed)))
    return EXIT_OK if report.passed else EXIT_FAIL


DEFAULT_SCANS = (("general", 3), ("k2", 2), ("d3", None))


def cmd_prove_all(args) -> int:
    t0 = time.perf_counter()
    if args.jobs < 1:
        raise _Usage("--jobs must be >= 1")
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = dict(zip(recurrence.CASES, pool.map(certify.run_full_proof, recurrence.CASES)))
    else:
        reports = {c: certify.run_full_proof(c) for c in recurrence.CASES}
    region = scanner.ScanRegion(n_max=args.nmax)
    scans = {}
    for case, k in DEFAULT_SCANS:
        log.info("scan %s k=%s", case, k)
        scans[case] = scanner.scan_grid(case, region, k=k)
    passed = all(r.passed for r in reports.values()) and all(s.passed for s in scans.values())
    if args.emit == "markdown":
        text = "".join(r.to_markdown() for r in reports.values())
        text += "# Default scans\n\n"
        for case, s in scans.items():
            text += f"- {case} (k={s.k}): counts {dict(s.counts)}, passed {s.passed}\n"
        _write(args, text)
    else:
        body = {
            "proofs": {c: r.to_dict(volatile=not args.no_volatile) for c, r in reports.items()},
            "scans": {c: s.to_dict() for c, s in scans.items()},
        }
        _write(args, _dump(_envelope(args, body, time.perf_counter() - t0, passed)))
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# dispatch


class _Usage(Exception):
    """Argument combination rejected after parsing."""


def _glue_negative(argv: list[str]) -> list[str]:
    """Turn ``--im -5:5`` into ``--im=-5:5`` so argparse does not read an option."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--re", "--im", "--lam"):
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        return args.func(args)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"modestab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MemoryError, RecursionError) as exc:
        print(f"modestab {args.command}: resource exhausted: {type(exc).__name__}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
