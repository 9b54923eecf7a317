"""Command-line entry point: ``yangian-eval verify`` and ``yangian-eval expand``.

Exit codes: 0 success, 1 a relation failed (or an image is not available),
2 invalid configuration.  The worker thread count for trial fan-out is read
from ``YANGIAN_EVAL_THREADS``.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

from .images import CONVENTIONS, NORMALIZATIONS, SHIFTS, GenId, ImageBuilder, NotInPaper, UnsupportedGenerator, ev_T_template_list
from .scalars import HBAR, LAMBDA, LEVEL, PolyQ, draw_parameters, rat_str
from .seriesop import MatrixEvaluator, render
from .verify import CANONICAL, MODULES, SUITES, make_module, run_suites

YANGIAN_SUITES = {"minimalistic", "current", "iota", "minors", "thm-ref"}
DEFAULTS = {"n": 3, "depth": 3, "order": 6, "trials": 3, "module": "trivial:lambda"}


class UsageError(Exception):
    pass


def _parse_params(items: list[str] | None) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        if name not in (HBAR, LEVEL, LAMBDA):
            raise UsageError(f"unknown parameter {name!r} (use {HBAR}, {LEVEL} or {LAMBDA})")
        try:
            out[name] = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"parameter {name} must be a rational number, got {value!r}") from None
    if HBAR in out and not out[HBAR]:
        raise UsageError("hbar must be nonzero")
    return out


def _suites(values: list[str] | None) -> list[str]:
    picked: list[str] = []
    for v in values or ["all"]:
        for name in v.split(","):
            name = name.strip()
            if name == "all":
                picked.extend(s for s in SUITES if s not in picked)
            elif name in SUITES:
                if name not in picked:
                    picked.append(name)
            else:
                raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return picked


def cmd_verify(args) -> int:
    suites = _suites(args.suite)
    fixed = _parse_params(args.param)
    n, D, R = args.n, args.depth, args.order
    rs_max = args.rsmax if args.rsmax is not None else min(3, R - 2)
    if n < 2:
        raise UsageError("rank n must be at least 2")
    if n < 3 and YANGIAN_SUITES.intersection(suites):
        raise UsageError("the Yangian suites need n >= 3")
    if D < 1:
        raise UsageError("depth must be at least 1")
    if args.trials < 1:
        raise UsageError("trials must be at least 1")
    if args.rmax < 1:
        raise UsageError("rmax must be at least 1")
    if rs_max < 0 or R < rs_max + 2:
        raise UsageError(f"order R={R} must be at least rsmax + 2 = {rs_max + 2}")

    def log(msg):
        print(msg, file=sys.stderr)

    report = run_suites(suites, n=n, D=D, R=R, r_max=args.rmax, rs_max=rs_max, trials=args.trials,
                        seed=args.seed, module=args.module, fixed=fixed, log=log,
                        convention=args.convention, shift=args.shift, normalization=args.normalization)
    report.config["suites"] = suites
    text = report.to_json(timings=args.timings)
    if args.output:
        Path(args.output).write_text(text + "\n")
    summary = report.summary()
    if args.summary:
        Path(args.summary).write_text(summary + "\n")
    print(summary)
    failed = report.failed()
    for row in failed[:20]:
        print(f"FAIL {row.id} {row.indices}: {row.residual}", file=sys.stderr)
    return 1 if failed else 0


_GEN_ALIASES = {
    "T": "T", "A": "A", "H": "H", "Htilde": "Htilde",
    "X+": "Xplus", "X-": "Xminus", "Xplus": "Xplus", "Xminus": "Xminus",
    "x+": "x+", "x-": "x-", "h": "h",
}


def _expand_op(gen: str, args, hbar, c, R: int):
    n = args.n
    fam = _GEN_ALIASES.get(gen)
    if fam is None:
        raise UsageError(f"unknown generator {gen!r}; choose from {', '.join(_GEN_ALIASES)}")
    ib = ImageBuilder(n, hbar, c, R=max(R, 1), convention=args.convention, shift=args.shift,
                      normalization=args.normalization)
    if fam == "T":
        if args.j is None:
            raise UsageError("--gen T needs --j")
        if not (1 <= args.i <= n and 1 <= args.j <= n):
            raise UsageError(f"T indices must lie in 1..{n}")
        return ib.T(args.i, args.j, args.r)
    if fam in ("x+", "x-"):
        if not 1 <= args.i <= n - 1:
            raise UnsupportedGenerator(f"higher images need 1 <= i <= {n - 1}")
        if args.r + 1 > R:
            raise UsageError(f"x_{{i,{args.r}}} needs --order at least {args.r + 1}")
        return ib.higher(fam[1], args.i, args.r)
    if fam == "h":
        if args.r + 1 > R:
            raise UsageError(f"H_{{i,{args.r}}} needs --order at least {args.r + 1}")
        return ib.higher_H(args.i, args.r)
    if fam == "A":
        return ib.iota(GenId("A", n, 0, 1))
    if args.source == "iota":
        return ib.iota(GenId(fam, args.i, 0, args.r))
    return ib.minimalistic(GenId(fam, args.i, 0, args.r))


def _fmt(x) -> str:
    x = Fraction(int(x.p), int(x.q))
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cmd_expand(args) -> int:
    n = args.n
    if n < 2:
        raise UsageError("rank n must be at least 2")
    if args.r < 0:
        raise UsageError("mode r must be non-negative")
    fixed = _parse_params(args.param)
    if args.format == "template":
        hbar, c = PolyQ.gens((HBAR, LEVEL))
        hbar = fixed.get(HBAR, hbar)
        c = fixed.get(LEVEL, c)
        gen = _GEN_ALIASES.get(args.gen)
        if gen == "T" and args.r >= 2:
            if args.j is None:
                raise UsageError("--gen T needs --j")
            for t in ev_T_template_list(n, args.i, args.j, args.r, hbar, c):
                print(t.dump())
            return 0
        if gen in ("x+", "x-", "h") and isinstance(hbar, PolyQ):
            hbar = Fraction(1, 1) if HBAR not in fixed else hbar
            print(f"# {HBAR} = 1 (higher images divide by -{HBAR}; pass --param {HBAR}=... to change)")
        print(render(_expand_op(args.gen, args, hbar, c, args.order)))
        return 0

    if args.depth < 0:
        raise UsageError("depth must be non-negative")
    params = draw_parameters(random.Random(args.seed), [HBAR, LEVEL, LAMBDA])
    params.update(fixed)
    op = _expand_op(args.gen, args, params[HBAR], params[LEVEL], args.order)
    module = make_module(args.module, n, params[LEVEL], params[LAMBDA])
    ev = MatrixEvaluator(module)
    print("# parameters: " + ", ".join(f"{k}={rat_str(v)}" for k, v in sorted(params.items())))
    print(f"# module: {args.module}, degree shift {op.shift}")
    for d in range(args.depth + 1):
        dout = d - op.shift
        if dout < 0:
            continue
        m = ev.block(op, d)
        print(f"## block depth {d} -> depth {dout} ({m.nrows()} x {m.ncols()})")
        for a in range(m.nrows()):
            print(" ".join(_fmt(m[a, b]) for b in range(m.ncols())))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="yangian-eval",
        description="Exact operator checks of the evaluation map of the affine Yangian of type A.",
        epilog="Defaults (n=3, depth=3, order=6, trials=3, module=trivial:lambda) are the acceptance "
               "configuration. Set YANGIAN_EVAL_THREADS to fan trials out over worker threads.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--n", type=int, default=DEFAULTS["n"], help="rank of gl(n) (default 3)")
        sp.add_argument("--depth", type=int, default=DEFAULTS["depth"], help="module depth D (default 3)")
        sp.add_argument("--order", type=int, default=DEFAULTS["order"], help="series order R (default 6)")
        sp.add_argument("--seed", type=int, default=0, help="RNG seed for parameter draws")
        sp.add_argument("--module", choices=MODULES, default=DEFAULTS["module"])
        sp.add_argument("--param", action="append", metavar="NAME=VALUE",
                        help=f"fix a parameter ({HBAR}, {LEVEL}, {LAMBDA}); repeatable")
        sp.add_argument("--convention", choices=CONVENTIONS, default=CANONICAL["convention"])
        sp.add_argument("--shift", choices=SHIFTS, default=CANONICAL["shift"])
        sp.add_argument("--normalization", choices=NORMALIZATIONS, default=CANONICAL["normalization"])

    v = sub.add_parser("verify", help="run relation suites and write a report")
    common(v)
    v.add_argument("--suite", action="append",
                   help=f"suite name or comma list: {', '.join(SUITES)}, all (default all)")
    v.add_argument("--rmax", type=int, default=3, help="largest r for ga1/ga3 (default 3)")
    v.add_argument("--rsmax", type=int, default=None, help="largest r+s for the current relations (default min(3, R-2))")
    v.add_argument("--trials", type=int, default=DEFAULTS["trials"])
    v.add_argument("--output", help="JSON report path")
    v.add_argument("--summary", help="summary table path")
    v.add_argument("--timings", action="store_true", help="record wall-clock millis (reports are then not byte-stable)")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("expand", help="print the image of one generator")
    common(e)
    e.add_argument("--gen", required=True,
                   help="T, X+, X-, H, Htilde (closed-form images), x+, x-, h (Gauss-formula images), A")
    e.add_argument("--i", type=int, default=1)
    e.add_argument("--j", type=int, default=None)
    e.add_argument("--r", type=int, default=0)
    e.add_argument("--source", choices=("minimalistic", "iota"), default="minimalistic",
                   help="for X+, X-, Htilde: closed-form evaluation image or the iota route")
    e.add_argument("--format", choices=("template", "matrix"), default="template")
    e.set_defaults(func=cmd_expand)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except NotInPaper as exc:
        print(f"not-in-paper: {exc}", file=sys.stderr)
        return 1
    except UnsupportedGenerator as exc:
        print(f"unsupported generator: {exc}", file=sys.stderr)
        return 1
    except (ValueError, IndexError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
