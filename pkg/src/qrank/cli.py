"""``qrank`` command-line interface.

Exit codes: 0 success, 2 parameter error, 3 verification failure,
4 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from fractions import Fraction
from typing import Iterator, Sequence, TextIO

from ._scan import BudgetExceededError
from .gf2field import DomainError, FieldSpec, from_hex
from .qconstruct import (
    DEFAULT_BUDGET,
    BinarySymplecticCode,
    UndefinedDistanceError,
    VerificationError,
    build_css_code,
    build_proposed_code,
    certify_distance,
    compare_table,
    verify_code,
)
from .stacked_sim import simulate_trials
from .worked_example import run_example

EXIT_OK, EXIT_PARAM, EXIT_VERIFY, EXIT_BUDGET = 0, 2, 3, 4


class ParamError(ValueError):
    pass


def _int_expr(text: str) -> int:
    """Accept ``16777216``, ``2**24`` or ``2^24``."""
    t = text.replace("^", "**").replace(" ", "")
    if "**" in t:
        base, exp = t.split("**", 1)
        return int(base) ** int(exp)
    return int(t, 0)


def _fault_range(text: str) -> int | tuple[int, int]:
    if "-" in text:
        lo, hi = text.split("-", 1)
        return int(lo), int(hi)
    return int(text)


@contextmanager
def _output(path: str | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _emit(obj, args, text: str | None = None) -> None:
    with _output(args.out) as fh:
        if args.format == "json" or text is None:
            fh.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")
        else:
            fh.write(text.rstrip("\n") + "\n")


def _read_bundle(path: str | None) -> dict:
    try:
        raw = sys.stdin.read() if path in (None, "-") else open(path, encoding="utf-8").read()
        return json.loads(raw)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParamError(f"cannot read code bundle: {exc}") from None


# ---------- subcommands


def cmd_construct(args) -> int:
    if args.method == "proposed":
        if args.m is None or args.k is None:
            raise ParamError("--method proposed needs -m and -k")
        if not 1 <= args.k < args.m:
            raise ParamError(f"need 1 <= k < m, got m={args.m}, k={args.k}")
        field = FieldSpec(2 * args.m, from_hex(args.modulus)) if args.modulus else None
        alpha = [from_hex(a) for a in args.alpha.split(",")] if args.alpha else None
        if alpha is not None and field is None:
            raise ParamError("--alpha needs --modulus")
        theta = from_hex(args.theta) if args.theta else None
        code, params = build_proposed_code(args.m, args.k, field, alpha, theta)
    else:
        if None in (args.n, args.r, args.s):
            raise ParamError("--method css needs -n, -r and -s")
        code, params = build_css_code(args.n, args.r, args.s)
    if args.certify:
        params = certify_distance(code, args.budget, threads=args.threads)
    bundle = code.to_json(params)
    _emit(bundle, args, f"{code.provenance['construction']} code {params.label()}\n" + "\n".join(code.generators.to_strings()))
    return EXIT_OK


def cmd_distance(args) -> int:
    code, _ = BinarySymplecticCode.from_json(_read_bundle(args.input))
    try:
        params = certify_distance(
            code, args.budget, sample=args.sample, samples=args.samples, seed=args.seed, threads=args.threads
        )
    except UndefinedDistanceError as exc:
        obj = {"D_R": "undefined", "certified": False, "witness": None, "note": str(exc)}
        _emit(obj, args, f"D_R undefined: {exc}")
        return EXIT_OK
    assert params.certificate is not None
    obj = params.certificate.to_json()
    obj.update(N=params.N, K=params.K)
    kind = "certified" if params.certified else "upper bound"
    _emit(obj, args, f"{params.label()} ({kind}, {params.certificate.enumerated} vectors)\nwitness {obj['witness']}")
    return EXIT_OK


def cmd_example(args) -> int:
    result = run_example(threads=args.threads)
    _emit(result.to_json(), args, result.render())
    return EXIT_OK


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator} (~{float(x):.4f})"


def cmd_compare(args) -> int:
    if not args.n > args.k >= 1:
        raise ParamError(f"need n > k >= 1, got n={args.n}, k={args.k}")
    table = compare_table(args.n, args.k)
    head = ["", *(c.label for c in table.columns)]
    rows = [
        ["layers x cells", *(f"{c.layers} x {c.cells}" for c in table.columns)],
        ["N", *(str(c.N) for c in table.columns)],
        ["K", *(str(c.K) for c in table.columns)],
        ["D", *(str(c.D) for c in table.columns)],
        ["R = K/N", *(_frac(c.R) for c in table.columns)],
        ["delta = D/N", *(_frac(c.delta) for c in table.columns)],
    ]
    widths = [max(len(r[i]) for r in [head, *rows]) for i in range(len(head))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in [head, *rows]]
    lines.append(f"delta ratio vs {table.columns[0].label}: {_frac(table.ratio_vs_minus)}")
    lines.append(f"delta ratio vs {table.columns[1].label}: {_frac(table.ratio_vs_plus)}")
    _emit(table.to_json(), args, "\n".join(lines))
    return EXIT_OK


def cmd_simulate(args) -> int:
    report = simulate_trials(
        args.m,
        args.n,
        args.gates,
        args.faults,
        args.trials,
        args.seed,
        transvections=args.transvections,
        threads=args.threads,
    )
    with _output(args.out) as fh:
        if args.format == "json":
            for line in report.json_lines():
                fh.write(line + "\n")
        else:
            s = report.summary()
            fh.write(" ".join(f"{k}={v}" for k, v in s.items() if k != "summary") + "\n")
    return EXIT_OK if report.violations == 0 and report.rank_changes == 0 else EXIT_VERIFY


def cmd_verify(args) -> int:
    code, params = BinarySymplecticCode.from_json(_read_bundle(args.input))
    checks = verify_code(code, params)
    if params.D_R is not None and params.certified:
        try:
            again = certify_distance(code, args.budget, threads=args.threads)
            checks.append(("distance_recertified", again.D_R == params.D_R, f"D_R={again.D_R}"))
        except BudgetExceededError as exc:
            checks.append(("distance_recertified", False, str(exc)))
    ok = all(c[1] for c in checks)
    obj = {"ok": ok, "checks": [{"name": n, "ok": v, "detail": d} for n, v, d in checks]}
    text = "\n".join(f"{'ok  ' if v else 'FAIL'} {n}: {d}" for n, v, d in checks)
    _emit(obj, args, text)
    return EXIT_OK if ok else EXIT_VERIFY


# ---------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default=None)
    common.add_argument("--threads", type=int, default=None, help="worker threads (QRANK_THREADS overrides)")
    common.add_argument("--out", default=None, help="write output to a file instead of stdout")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="qrank", description="Quantum rank-metric codes on stacked memories.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build a code bundle")
    c.add_argument("--method", choices=("proposed", "css"), default="proposed")
    c.add_argument("-m", type=int)
    c.add_argument("-k", type=int)
    c.add_argument("-n", type=int)
    c.add_argument("-r", type=int)
    c.add_argument("-s", type=int)
    c.add_argument("--modulus", help="field modulus in hex")
    c.add_argument("--alpha", help="comma-separated hex self-dual basis")
    c.add_argument("--theta", help="normal-basis generator in hex")
    c.add_argument("--certify", action="store_true", help="also certify D_R")
    c.add_argument("--budget", type=_int_expr, default=DEFAULT_BUDGET)
    c.set_defaults(func=cmd_construct)

    d = sub.add_parser("distance", parents=[common], help="certify D_R of a bundle (stdin or --in)")
    d.add_argument("--in", dest="input", default=None)
    d.add_argument("--budget", type=_int_expr, default=DEFAULT_BUDGET)
    d.add_argument("--sample", action="store_true", help="sample above the budget (upper bound)")
    d.add_argument("--samples", type=_int_expr, default=1 << 16)
    d.set_defaults(func=cmd_distance)

    e = sub.add_parser("example", parents=[common], help="replay the m=2, k=1 worked example")
    e.set_defaults(func=cmd_example, default_format="table")

    t = sub.add_parser("compare", parents=[common], help="parameter comparison table")
    t.add_argument("-n", type=int, required=True)
    t.add_argument("-k", type=int, required=True)
    t.set_defaults(func=cmd_compare, default_format="table")

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo of faulty stacked circuits")
    s.add_argument("-m", type=int, default=8)
    s.add_argument("-n", type=int, default=8)
    s.add_argument("--gates", type=int, default=20)
    s.add_argument("--faults", type=_fault_range, default=3, help="faults per trial: N or LO-HI")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--transvections", type=int, default=None)
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", parents=[common], help="re-run all invariant checks on a bundle")
    v.add_argument("--in", dest="input", default=None)
    v.add_argument("--budget", type=_int_expr, default=DEFAULT_BUDGET)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = getattr(args, "default_format", "json")
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (VerificationError, AssertionError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ParamError, DomainError, ValueError, KeyError, TypeError) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
