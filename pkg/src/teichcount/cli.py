"""Command-line front end: ``teichcount <subcommand> [options]``.

Every subcommand writes CSV (default) or JSON (``--json``) to stdout or to
``--out``.  Exact rationals are written as ``num/den`` and reals with 12
significant digits.  JSON output is a list of objects whose keys and string
values are exactly the CSV columns and cells; empty cells become ``null``.

Exit codes: 0 success, 1 usage error, 2 geometric degeneracy raised by the
flat-surface tracer, 3 violated internal invariant (an undocumented delta,
a failed acceptance criterion or a normalization failure).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .acceptance import CRITERIA, criterion_12, format_line
from .counting import KINDS, Stratum, constants_report, sv_constant, volume_estimate
from .cover_enum import consistency_report, enumerate_fiber, is_primitive
from .flatsurf import (
    DegenerateStart,
    OutOfRange,
    RationalAlpha,
    SeparatrixOverrun,
    build_surface,
    census,
)
from .moves import NonTermination, NotPrimitive, normalize_to_canonical

__all__ = ["main", "render_report", "run"]

COUNTS_HEADER = ["d", "stratum", "n_formula", "n_enum", "n_oracle",
                 "np_formula", "np_enum", "np_oracle", "delta_flags"]
CONSTANTS_HEADER = ["q", "c", "s1", "s2", "thm_c", "thm_s1", "thm_s2", "ok_c", "ok_s1", "ok_s2"]
VOLUMES_HEADER = ["stratum", "D", "estimate", "target", "rel_err"]
CENSUS_HEADER = ["T", "ns1", "ns2", "nc", "ratio_s1", "ratio_s2", "ratio_c"]
CONNECTIVITY_HEADER = ["d", "sigma", "w1", "w2", "s1", "s2", "k3", "t1", "t2", "t3", "trace_length"]
REPORT_HEADER = ["criterion", "status", "title", "detail"]

GEOMETRIC_ERRORS = (RationalAlpha, OutOfRange, DegenerateStart, SeparatrixOverrun)


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# formatting


def fmt_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def fmt_real(x) -> str:
    x = float(x)
    return "" if math.isnan(x) else f"{x:.12g}"


def fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def _cell(x) -> str:
    return "" if x is None else str(x)


def render_rows(header: Sequence[str], rows: Iterable[Sequence], as_json: bool) -> str:
    rows = [[_cell(x) for x in r] for r in rows]
    if as_json:
        objs = [{h: (v if v != "" else None) for h, v in zip(header, r)} for r in rows]
        return json.dumps(objs, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def workers() -> int:
    """Worker processes for parallel sweeps, capped by TEICHCOUNT_THREADS."""
    n = os.cpu_count() or 1
    env = os.environ.get("TEICHCOUNT_THREADS")
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise UsageError(f"TEICHCOUNT_THREADS must be an integer, got {env!r}")
        if cap < 1:
            raise UsageError("TEICHCOUNT_THREADS must be positive")
        n = min(n, cap)
    return n


def _pmap(fn: Callable, items: Sequence) -> list:
    # map preserves input order, so output stays deterministic
    n = min(workers(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _fraction_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected comma-separated numbers, got {text!r}")


def _alpha(text: str) -> tuple[int, int, int, int]:
    vals = _int_list(text)
    if len(vals) != 4:
        raise UsageError("--alpha takes four integers A,B,N,C meaning (A+B*sqrt(N))/C")
    return tuple(vals)


def _range(lo: int, hi: int, name: str) -> list[int]:
    if lo > hi:
        raise UsageError(f"empty {name} range {lo}..{hi}")
    return list(range(lo, hi + 1))


# ---------------------------------------------------------------------------
# subcommands


def _counts_rows(d: int, oracle: bool) -> list[list]:
    rep = consistency_report(d, with_oracle=oracle)
    rows = []
    for st in Stratum:
        r = rep[st]
        rows.append([d, st.value, r.n_formula, r.n_enum, r.n_oracle,
                     r.np_formula, r.np_enum, r.np_oracle, ";".join(r.deltas)])
    return rows


def _counts_rows_oracle(d: int) -> list[list]:
    return _counts_rows(d, True)


def _counts_rows_plain(d: int) -> list[list]:
    return _counts_rows(d, False)


def cmd_counts(a):
    if a.d_min < 2:
        raise UsageError("--d-min must be at least 2")
    ds = _range(a.d_min, a.d_max, "degree")
    fn = _counts_rows_plain if a.no_oracle else _counts_rows_oracle
    rows = [row for block in _pmap(fn, ds) for row in block]
    bad = [f"{r[1]} d={r[0]}: {f}" for r in rows for f in r[8].split(";")
           if f and not f.endswith("(documented)")]
    return COUNTS_HEADER, rows, bad


def cmd_constants(a):
    if a.q_min < 2:
        raise UsageError("--q-min must be at least 2")
    rows = []
    bad = []
    for q in _range(a.q_min, a.q_max, "q"):
        r = constants_report(q)
        ok = r.identity_ok
        rows.append([q, fmt_rational(r.c), fmt_rational(r.s1), fmt_rational(r.s2),
                     fmt_rational(r.theorem_c), fmt_rational(r.theorem_s1), fmt_rational(r.theorem_s2),
                     *(fmt_bool(ok[k]) for k in KINDS)])
        bad += [f"{k} q={q}" for k in KINDS if not ok[k]]
    return CONSTANTS_HEADER, rows, bad


def cmd_volumes(a):
    strata = list(Stratum) if a.stratum == "both" else [Stratum(a.stratum)]
    Ds = _int_list(a.d_grid)
    if not Ds or min(Ds) < 1:
        raise UsageError("--d-grid needs positive integers")
    rows = []
    for st in strata:
        for D in Ds:
            v = volume_estimate(st, D)
            rows.append([st.value, D, fmt_real(v.value), fmt_real(v.target), fmt_real(v.relative_error)])
    return VOLUMES_HEADER, rows, []


def cmd_census(a):
    grid = _fraction_list(a.t_grid)
    if not grid or min(grid) <= 0:
        raise UsageError("--t-grid needs positive numbers")
    surf = build_surface(a.p, a.q, _alpha(a.alpha))
    res = census(surf, grid)
    theory = {k: 0.25 * math.pi * float(sv_constant(k, a.q)) for k in KINDS}

    def ratio(n: int, kind: str, T: Fraction) -> str:
        th = theory[kind]
        return fmt_real(n / (th * float(T) ** 2)) if th else ""

    rows = []
    for i, T in enumerate(res.T):
        rows.append([fmt_rational(T), res.ns1[i], res.ns2[i], res.nc[i],
                     ratio(res.ns1[i], "s1", T), ratio(res.ns2[i], "s2", T), ratio(res.nc[i], "c", T)])
    return CENSUS_HEADER, rows, []


def _connectivity_rows(d: int) -> list[list]:
    rows = []
    for s in enumerate_fiber(Stratum.H11, d):
        if not is_primitive(s):
            continue
        tr = normalize_to_canonical(s)
        rows.append([d, s.sigma, s.w1, s.w2, s.s1, s.s2, s.k3, s.t1, s.t2, s.t3, len(tr.moves)])
    return rows


def cmd_connectivity(a):
    if a.d is not None:
        ds = [a.d]
    else:
        ds = _range(a.d_min, a.d_max, "degree")
    if min(ds) < 3:
        raise UsageError("degrees must be at least 3")
    rows = [row for block in _pmap(_connectivity_rows, ds) for row in block]
    return CONNECTIVITY_HEADER, rows, []


def render_report(numbers: Iterable[int]) -> str:
    """Text lines of the selected acceptance criteria, one per criterion."""
    return "".join(format_line(CRITERIA[n]()) + "\n" for n in numbers)


def cmd_report(a):
    numbers = sorted(set(_int_list(a.criteria))) if a.criteria else sorted(CRITERIA)
    if any(n not in CRITERIA for n in numbers):
        raise UsageError(f"criteria are numbered 1..{len(CRITERIA)}")
    base = [n for n in numbers if n != 12]
    results = [CRITERIA[n]() for n in base]
    if 12 in numbers:
        first = "".join(format_line(CRITERIA[n]()) + "\n" for n in range(1, 12)) \
            if base != list(range(1, 12)) else "".join(format_line(r) + "\n" for r in results)
        results.append(criterion_12(reference=first))
    if a.json:
        rows = [[r.number, "PASS" if r.passed else "FAIL", r.title, r.detail] for r in results]
        bad = [f"criterion {r.number}" for r in results if not r.passed]
        return REPORT_HEADER, rows, bad
    text = "".join(format_line(r) + "\n" for r in results)
    bad = [f"criterion {r.number}" for r in results if not r.passed]
    return None, text, bad


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="teichcount", description="Counts, constants and censuses for genus-2 torus covers.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
        sp.add_argument("--out", help="write to this path instead of stdout")

    sp = sub.add_parser("counts", help="cover counts from formula, enumeration and oracle")
    sp.add_argument("--d-min", type=int, default=2)
    sp.add_argument("--d-max", type=int, default=10)
    sp.add_argument("--no-oracle", action="store_true", help="skip the monodromy oracle")
    common(sp)
    sp.set_defaults(func=cmd_counts)

    sp = sub.add_parser("constants", help="Siegel-Veech constants against closed forms")
    sp.add_argument("--q-min", type=int, default=2)
    sp.add_argument("--q-max", type=int, default=50)
    common(sp)
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("volumes", help="volume estimates from partial sums")
    sp.add_argument("--stratum", choices=["H11", "H2", "both"], default="both")
    sp.add_argument("--d-grid", default="100,200,500,1000,2000", help="comma-separated degree bounds D")
    common(sp)
    sp.set_defaults(func=cmd_volumes)

    sp = sub.add_parser("census", help="saddle connection and cylinder census on a slit torus")
    sp.add_argument("--p", type=int, default=1)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--alpha", default="-1,1,2,1", help="A,B,N,C meaning (A+B*sqrt(N))/C")
    sp.add_argument("--t-grid", default="40,80,120", help="comma-separated length bounds")
    common(sp)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("connectivity", help="normalization trace length of every primitive state")
    sp.add_argument("--d", type=int)
    sp.add_argument("--d-min", type=int, default=3)
    sp.add_argument("--d-max", type=int, default=8)
    common(sp)
    sp.set_defaults(func=cmd_connectivity)

    sp = sub.add_parser("report", help="run the acceptance suite")
    sp.add_argument("--criteria", help="comma-separated criterion numbers (default all)")
    common(sp)
    sp.set_defaults(func=cmd_report)
    return p


def _join_alpha(argv: list[str]) -> list[str]:
    # "--alpha -1,1,2,1" would otherwise be read as an option
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--alpha" and i + 1 < len(argv):
            out.append(f"--alpha={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = _join_alpha(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        header, rows, bad = args.func(args)
    except UsageError as e:
        stderr.write(f"teichcount: usage error: {e}\n")
        return 1
    except SystemExit as e:  # --help
        return int(e.code or 0)
    except GEOMETRIC_ERRORS as e:
        stderr.write(f"teichcount: geometric degeneracy: {type(e).__name__}: {e}\n")
        return 2
    except (InvariantViolation, NonTermination, NotPrimitive, AssertionError) as e:
        stderr.write(f"teichcount: invariant violation: {type(e).__name__}: {e}\n")
        return 3
    text = rows if header is None else render_rows(header, rows, args.json)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if bad:
        stderr.write("teichcount: invariant violation: " + ", ".join(bad) + "\n")
        return 3
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
