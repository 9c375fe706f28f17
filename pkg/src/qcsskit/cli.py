"""Command-line front end: generate, verify, reproduce, table, codebook, charsum."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import charsum as cs
from .codebook import Codebook, codebook_report, i_max, induce_codebook, scaling_report
from .constructions import (
    ADDITIVE,
    DEFAULT_FAMILY_CAP,
    MIXED,
    VARIANTS,
    AdditiveIndex,
    MixedIndex,
    admissible_grid,
    build_family,
    build_matrix,
    correlation_via_charsum,
    enumerate_indices,
    family_shape,
    format_matrix,
    make_params,
    scaling_law_value,
)
from .correlation import (
    CONCATENATED,
    DEFAULT_WORK_BUDGET,
    ROWWISE,
    correlation_profile,
    matrix_corr,
    work_estimate,
)
from .errors import BudgetExceeded, FamilyTooLarge, ParseError, QcssError
from .field import build_field
from .notation import parse_element, parse_poly, split_index

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET, EXIT_IO = 0, 1, 2, 3, 4
BUDGET_ENV = "QCSS_BUDGET"
TOL = 1e-6


def default_budget() -> float:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_WORK_BUDGET
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"{BUDGET_ENV}={raw!r} is not a number") from None


@dataclass
class RunConfig:
    """Parsed command line, minus the dispatch function."""

    command: str
    options: dict = field(default_factory=dict)

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> RunConfig:
        opts = {k: v for k, v in vars(ns).items() if k not in ("command", "func")}
        return cls(ns.command, opts)

    def to_dict(self) -> dict:
        return {"command": self.command, "options": dict(self.options)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        return cls(d["command"], dict(d["options"]))


# --- shared argument handling --------------------------------------------------


def _add_family_args(sp):
    sp.add_argument("--construction", required=True, choices=VARIANTS)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-Q", type=int, required=True)
    sp.add_argument("--Delta", type=int, default=None)
    sp.add_argument("--poly", default=None, help="defining polynomial, e.g. x4+x+2")
    sp.add_argument("--g", default=None, help="primitive element, e.g. 1+2a")
    sp.add_argument("--chi-mult", default="1", help="additive character multiplier, e.g. a2")
    sp.add_argument("--max-m", type=int, default=DEFAULT_FAMILY_CAP, help="largest M to materialize")


def _params(args):
    poly = parse_poly(args.poly, args.p) if args.poly else None
    g = None
    if args.g is not None:
        # g must be read in the bare field before it can serve as generator
        bare = build_field(args.p, 2 * args.n, poly=poly)
        g = parse_element(args.g, bare)
    field_ = build_field(args.p, 2 * args.n, poly=poly, g=g)
    a = parse_element(args.chi_mult, field_)
    return make_params(args.construction, args.p, args.n, args.Q, args.Delta, a=a, field=field_)


def _parse_index(params, text):
    parts = split_index(text)
    F = params.field
    if params.variant in ADDITIVE:
        return AdditiveIndex(*(parse_element(t, F) for t in parts))
    try:
        r = int(parts[0])
    except ValueError:
        raise ParseError(f"r must be an integer, got {parts[0]!r}") from None
    return MixedIndex(r, parse_element(parts[1], F), parse_element(parts[2], F))


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _budget(args):
    return args.budget if args.budget is not None else default_budget()


# --- subcommands -----------------------------------------------------------------


def cmd_generate(args) -> int:
    params = _params(args)
    exp = params.expected()
    if args.index:
        indices = [_parse_index(params, t) for t in args.index]
        texts = [format_matrix(params, idx) for idx in indices]
    else:
        fam = build_family(params, cap=args.max_m)
        indices = list(enumerate_indices(params))
        texts = [format_matrix(params, idx, S) for idx, S in zip(indices, fam)]
    meta = {
        "construction": params.variant,
        "p": params.p,
        "n": params.n,
        "Q": params.Q,
        "Delta": params.delta,
        "chi_mult": params.a,
        "field": params.field.to_dict(),
        "expected_parameters": exp._asdict(),
        "indices": [idx.canonical() for idx in indices],
    }
    if args.out is None:
        sys.stdout.write("".join(texts))
        return EXIT_OK
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for idx, text in zip(indices, texts):
        name = "S_" + idx.canonical().replace(",", "_") + ".txt"
        (out / name).write_text(text)
        files.append(name)
    meta["files"] = files
    (out / "metadata.json").write_text(_dump(meta))
    return EXIT_OK


def cmd_verify(args) -> int:
    params = _params(args)
    exp = params.expected()
    budget = _budget(args)
    est = work_estimate(exp.M, exp.K, exp.N)
    if est > budget:
        raise BudgetExceeded(est, budget, "multiply-add")
    fam = build_family(params, cap=args.max_m)
    prof = correlation_profile(fam, budget, workers=args.workers, mode=args.mode)
    ok = prof.check_bound(exp.delta_bound)
    _emit(_dump(prof.to_dict()), args.out)
    return EXIT_OK if ok else EXIT_VIOLATION


# reproduce ---------------------------------------------------------------------


def _ex1():
    return make_params("cubic", 5, 2, 26, poly=(2, 0, 2, 1, 1), g=5)


def _ex2():
    F = build_field(3, 4, poly=(2, 1, 0, 0, 1))
    return make_params("quadratic", 3, 2, 10, a=F.pow(F.x, 2), field=F)


def _ex3():
    return make_params("mixed", 3, 2, 10, delta=10, poly=(1, 0, 1, 1, 1), g=10)


def _ex4():
    return make_params("mixed0", 5, 1, 6, delta=8, poly=(3, 0, 1), g=11)


def _pm1_poly(F):
    return cs.PolynomialOverField.from_roots(F, [1, F.neg(1)])


def _sum_l4():
    F = _ex3().field
    z = cs.PolynomialOverField(F, (0, 1))
    return cs.mixed_charsum(F, 10, 1, _pm1_poly(F), 1, z)


def _sum_l5():
    F = _ex4().field
    return cs.mixed_charsum(F, 8, 1, _pm1_poly(F))


def _sum_l6():
    F = _ex1().field
    return cs.additive_charsum(F, 1, cs.PolynomialOverField.monomial(F, 1, 3))


def _gauss_l6():
    return cs.gauss_sum(_ex1().field, 3, 1)


def _sum_l7():
    F = _ex2().field
    return cs.additive_charsum(F, F.pow(F.x, 2), cs.PolynomialOverField(F, (0, 2, 1)))


def _pair_corr(params, i1, i2):
    c = matrix_corr(build_matrix(params, i1), build_matrix(params, i2), 0)
    return c, correlation_via_charsum(params, i1, i2, 0)


def _reproduce_items(example: str, budget: float):
    """Yield (label, computed, expected)."""
    if example == "1":
        P = _ex1()
        g = P.field.g
        c, via = _pair_corr(P, (P.field.add(g, 1), g, 1), (g, g, 1))
        yield "R(S^{g+1,g,1}, S^{g,g,1}; 0)", c, -51
        yield "same, via character sum", via, -51
    elif example == "2":
        P = _ex2()
        F = P.field
        c, via = _pair_corr(P, (0, F.add(F.g, 1), 1), (0, F.g, F.neg(1)))
        yield "R(S^{0,g+1,1}, S^{0,g,-1}; 0)", c, -10
        yield "same, via character sum", via, -10
        fam = build_family(P, cap=P.M)
        prof = correlation_profile(fam, budget)
        yield "family delta_max", prof.delta_max, 10
    elif example == "3":
        P = _ex3()
        F = P.field
        yield "sum psi((z+1)(z-1)) chi(z) over F_81", _sum_l4(), 18
        c, via = _pair_corr(P, (1, 1, 1), (9, F.neg(1), 0))
        yield "R(S^{1;1,1}, S^{9;-1,0}; 0) vs character-sum path", c, via
    elif example == "4":
        P = _ex4()
        F = P.field
        yield "sum psi((z+1)(z-1)) over F_25", _sum_l5(), 5
        c, via = _pair_corr(P, (1, 1, 0), (7, F.neg(1), 0))
        yield "R(S^{1;1,0}, S^{7;-1,0}; 0) vs character-sum path", c, via
    elif example == "L4":
        yield "sum psi((z+1)(z-1)) chi(z) over F_81", _sum_l4(), 18
    elif example == "L5":
        yield "sum psi((z+1)(z-1)) over F_25", _sum_l5(), 5
    elif example == "L6":
        yield "sum chi(z^3) over F_625", _sum_l6(), -50
        yield "Gauss sum, order-3 psi over F_625", _gauss_l6(), -25
    elif example == "L7":
        yield "sum chi(a^2 (z^2+2z)) over F_81", _sum_l7(), -9


REPRODUCE_IDS = ("1", "2", "3", "4", "L4", "L5", "L6", "L7")


def _fmt(v) -> str:
    v = complex(v)
    if abs(v.imag) < 1e-9:
        return f"{v.real:.6f}"
    return f"{v.real:.6f}{v.imag:+.6f}j"


def cmd_reproduce(args) -> int:
    ok = True
    lines = []
    for label, got, want in _reproduce_items(args.example, _budget(args)):
        passed = abs(complex(got) - complex(want)) < TOL
        ok &= passed
        lines.append(f"{'PASS' if passed else 'FAIL'}  {label}: {_fmt(got)} (expected {_fmt(want)})")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_VIOLATION


# table -------------------------------------------------------------------------

TABLE_VARIANTS = {"optimal": ("quadratic", "mixed0"), "near_optimal": ("cubic", "mixed")}
TABLE_COLUMNS = (
    "construction", "p", "n", "Q", "Delta", "M", "K", "N", "bound", "A", "law", "identity",
)  # fmt: skip


def _table_row(variant, p, n, Q, delta):
    try:
        exp = family_shape(variant, p, n, Q, delta)
    except QcssError:
        return [variant, p, n, Q, delta or "", "", "", "", "", "", "", "INVALID"]
    law = scaling_law_value(variant, exp.K, exp.N, delta)
    verdict = "PASS" if law == exp.M else "FAIL"
    return [variant, p, n, Q, delta or "", exp.M, exp.K, exp.N, exp.delta_bound, exp.A, law, verdict]


def _parse_point(text):
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise ParseError(f"grid point {text!r} must be integers") from None
    if len(vals) not in (3, 4):
        raise ParseError(f"grid point {text!r} must be p,n,Q[,Delta]")
    return tuple(vals) + (None,) * (4 - len(vals))


def cmd_table(args) -> int:
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    ok = True
    for variant in TABLE_VARIANTS[args.which]:
        if args.point:
            points = [_parse_point(t) for t in args.point]
            points = [pt for pt in points if (pt[3] is not None) == (variant in MIXED)]
        else:
            points = admissible_grid(variant, args.max_q)
        for pt in points:
            row = _table_row(variant, *pt)
            ok &= row[-1] != "FAIL"
            w.writerow(row)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK if ok else EXIT_VIOLATION


# codebook ----------------------------------------------------------------------


def cmd_codebook(args) -> int:
    if args.vectors:
        cb = Codebook(np.load(args.vectors), provenance=str(args.vectors))
        report = codebook_report(cb)
    else:
        if args.construction is None:
            raise ParseError("codebook needs --construction or --vectors")
        for name in ("p", "n", "Q"):
            if getattr(args, name) is None:
                raise ParseError(f"codebook needs -{name}")
        params = _params(args)
        fam = build_family(params, cap=args.max_m)
        cb = induce_codebook(fam)
        imax = i_max(cb, budget=_budget(args) * 10)
        report = scaling_report(fam.M, fam.K, fam.N, imax * fam.K * fam.N, fam.A)
        report.i_max = imax
    if args.csv:
        _emit(report.csv_row(header=True), args.out)
    else:
        _emit(_dump(report.to_dict()), args.out)
    return EXIT_OK


# charsum -----------------------------------------------------------------------


def _field_from(args):
    poly = parse_poly(args.poly, args.p) if args.poly else None
    g = None
    if args.g is not None:
        g = parse_element(args.g, build_field(args.p, args.m, poly=poly))
    return build_field(args.p, args.m, poly=poly, g=g)


def _poly_arg(F, text):
    return cs.PolynomialOverField(F, tuple(parse_element(t, F) for t in text.split(",")))


def cmd_charsum(args) -> int:
    F = _field_from(args)
    if args.kind == "audit":
        rep = cs.weil_audit(
            F, args.trials, degree=args.degree, kind=args.audit_kind, delta=args.Delta, seed=args.seed
        )
        _emit(_dump(rep.to_dict()), args.out)
        return EXIT_OK if rep.max_ratio <= 1 + 1e-9 else EXIT_VIOLATION
    a = parse_element(args.a, F)
    if args.kind == "additive":
        if args.h is None:
            raise ParseError("additive sums need --h")
        value = cs.additive_charsum(F, a, _poly_arg(F, args.h))
    elif args.kind == "gauss":
        value = cs.gauss_sum(F, args.Delta or 0, a)
    else:
        if args.Delta is None:
            raise ParseError("mixed sums need --Delta")
        if args.f_roots:
            f = cs.PolynomialOverField.from_roots(
                F, [parse_element(t, F) for t in args.f_roots.split(",")]
            )
        elif args.f:
            f = _poly_arg(F, args.f)
        else:
            raise ParseError("mixed sums need --f or --f-roots")
        h = _poly_arg(F, args.h) if args.h else None
        value = cs.mixed_charsum(F, args.Delta, args.r, f, a, h)
    out = {"field": F.to_dict(), "kind": args.kind, "value": [value.real, value.imag], "abs": abs(value)}
    _emit(_dump(out), args.out)
    return EXIT_OK


# --- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcss", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("generate", help="write exponent matrices and metadata")
    _add_family_args(sp)
    sp.add_argument("--index", action="append", help="index triple, repeatable, e.g. 0,g+1,1")
    sp.add_argument("--out", help="output directory (default: matrices to stdout)")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("verify", help="exhaustive correlation scan against the family bound")
    _add_family_args(sp)
    sp.add_argument("--budget", type=float, default=None, help=f"multiply-add cap (env {BUDGET_ENV})")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument(
        "--mode",
        choices=(ROWWISE, CONCATENATED),
        default=ROWWISE,
        help="shift convention; concatenated is a diagnostic",
    )
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("reproduce", help="recompute a worked example or extremal sum")
    sp.add_argument("example", choices=REPRODUCE_IDS)
    sp.add_argument("--budget", type=float, default=None)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_reproduce)

    sp = sub.add_parser("table", help="CSV of family parameters and scaling-law identities")
    sp.add_argument("which", choices=tuple(TABLE_VARIANTS))
    sp.add_argument("--max-q", type=int, default=2500, help="largest p^{2n} in the default grid")
    sp.add_argument("--point", action="append", help="grid point p,n,Q[,Delta], repeatable")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("codebook", help="induced-codebook bound report")
    sp.add_argument("--construction", choices=VARIANTS)
    sp.add_argument("-p", type=int)
    sp.add_argument("-n", type=int)
    sp.add_argument("-Q", type=int)
    sp.add_argument("--Delta", type=int, default=None)
    sp.add_argument("--poly", default=None)
    sp.add_argument("--g", default=None)
    sp.add_argument("--chi-mult", default="1")
    sp.add_argument("--max-m", type=int, default=DEFAULT_FAMILY_CAP)
    sp.add_argument("--vectors", help=".npy file with a U x V codebook")
    sp.add_argument("--budget", type=float, default=None)
    sp.add_argument("--csv", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_codebook)

    sp = sub.add_parser("charsum", help="character sums and Weil audits over F_{p^m}")
    sp.add_argument("kind", choices=("additive", "mixed", "gauss", "audit"))
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-m", type=int, required=True)
    sp.add_argument("--poly", default=None)
    sp.add_argument("--g", default=None)
    sp.add_argument("--a", default="1", help="additive multiplier")
    sp.add_argument("--h", help="coefficients of h, constant first, comma separated")
    sp.add_argument("--f", help="coefficients of f, constant first")
    sp.add_argument("--f-roots", help="roots of f, comma separated")
    sp.add_argument("--Delta", type=int, default=None)
    sp.add_argument("-r", type=int, default=1)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--degree", type=int, default=3)
    sp.add_argument("--audit-kind", choices=("additive", "mixed"), default="additive")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_charsum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (BudgetExceeded, FamilyTooLarge) as e:
        print(f"qcss: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except QcssError as e:
        print(f"qcss: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"qcss: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
