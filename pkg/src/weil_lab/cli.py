"""Command-line front end: ``weil-lab <command> ...``.

Exit codes: 0 success, 2 usage error, 3 empty search result, 4 unsupported input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .brauer import division_rank, is_commutative, reciprocity_check, tate_invariants
from .category import MotiveObject, dual, from_explicit, simple_from_weil, tensor, unit
from .cyclotomic import UnsupportedConductor, describe_field, split_prime
from .experiments import AbelianField, MTask, enumerate_M, wieferich_search
from .lsearch import MODES, e15_check, hits, make_task, search
from .weil import (
    DivisibilityError,
    Explicit,
    NotIntegral,
    SlopeVector,
    construct_weil,
    kernel_basis,
    kernel_box,
)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_EMPTY, EXIT_UNSUPPORTED = 0, 2, 3, 4

# flags that must not change the report (parallel width) or are presentation only
_NOT_ECHOED = {"func", "format", "parallel", "timing", "output", "command", "subcommand"}


class Empty(Exception):
    """Search finished without results; carries the report."""

    def __init__(self, report: dict):
        super().__init__("empty result")
        self.report = report


def _field(args, conductor: int | None = None):
    return describe_field(conductor if conductor is not None else args.conductor, table=args.field_table)


def _profile_json(pi, q_exp: int | None) -> dict:
    prof = tate_invariants(pi, q_exp)
    out = prof.to_json()
    out["commutative"] = is_commutative(prof)
    out["reciprocity"] = reciprocity_check(prof)
    out["rank"] = division_rank(prof)
    return out


def cmd_field(args) -> dict:
    K = _field(args)
    out = {"field": K.to_dict()}
    if args.p is not None:
        out["splitting"] = split_prime(K, args.p).to_dict()
    return out


def cmd_weil_enumerate(args) -> dict:
    K = _field(args)
    rows = []
    for s in kernel_box(K, args.p, args.box):
        pi = construct_weil(s, args.n, args.coeff_bound)
        rows.append({"element": pi.to_json(), "invariants": _profile_json(pi, args.n)})
    return {"count": len(rows), "elements": rows}


def _parse_slope(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad slope vector {text!r}") from exc


def cmd_invariants(args) -> dict:
    K = _field(args)
    if args.slope is not None:
        sp = split_prime(K, args.p)
        if len(args.slope) != len(sp.X):
            raise argparse.ArgumentTypeError(f"slope needs {len(sp.X)} entries, labels {list(sp.X)}")
        slopes = [SlopeVector(K, args.p, tuple(args.slope))]
    else:
        slopes = kernel_basis(K, args.p)
    rows = []
    for s in slopes:
        pi = construct_weil(s, args.n, args.coeff_bound)
        rows.append({"element": pi.to_json(), "invariants": _profile_json(pi, args.q_exp)})
    return {"profiles": rows}


def cmd_search_l(args) -> dict:
    task = make_task(_field(args), args.p, args.n, args.bound, args.mode, args.coeff_bound)
    cands = search(task, args.parallel)
    found = hits(cands)
    out = {
        "task": task.echo(),
        "hits": [c.to_json() for c in found],
        "first_hit": found[0].l if found else None,
        "counts": {
            "primes": len(cands),
            "c": sum(c.passes_c for c in cands),
            "d": sum(c.passes_d for c in cands),
            "b_true": sum(c.passes_b == "true" for c in cands),
            "b_undetermined": sum(c.passes_b == "undetermined" for c in cands),
            "hits": len(found),
        },
    }
    if args.e15:
        out["e15"] = [e15_check(task, c.l) for c in found if c.passes_c]
    if not found:
        raise Empty(out)
    return out


def _abelian_field(args) -> AbelianField:
    if args.conductor <= 2:
        return AbelianField.rationals()
    if args.real:
        return AbelianField.real_cyclotomic(args.conductor)
    return AbelianField.cyclotomic(args.conductor)


def cmd_artin(args) -> dict:
    k = None if args.k == 0 else args.k
    task = MTask(args.a, args.n, _abelian_field(args), args.bound, k)
    primes = enumerate_M(task, args.parallel)
    out = {"task": task.echo(), "count": len(primes), "primes": primes}
    if not primes:
        raise Empty(out)
    return out


def cmd_wieferich(args) -> dict:
    ls = wieferich_search(args.p, args.bound, args.parallel)
    out = {"p": args.p, "bound": args.bound, "count": len(ls), "primes": ls}
    if not ls:
        raise Empty(out)
    return out


def cmd_category_demo(args) -> dict:
    K = _field(args)
    p = args.p
    one = unit(K, p)
    zeta = MotiveObject.simple(simple_from_weil(from_explicit(Explicit(K.root_of_unity(1), p, 0), K)))
    objects = {"1": one, "zeta": zeta}
    for i, s in enumerate(kernel_basis(K, p)):
        objects[f"pi{i}"] = MotiveObject.simple(simple_from_weil(construct_weil(s, 1, args.coeff_bound)))
    names = list(objects)
    rows = []
    for i, a in enumerate(names):
        for b in names[i:]:
            prod = tensor(objects[a], objects[b])
            rows.append({"left": a, "right": b, "product": str(prod), **prod.to_json()})
    return {
        "objects": {name: {"text": str(obj), "dual": str(dual(obj)), **obj.to_json()} for name, obj in objects.items()},
        "tensor_table": rows,
    }


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--parallel", type=int, default=1, metavar="W", help="worker processes for scans")
    common.add_argument("--field-table", default=None, metavar="PATH", help="class-number table file")
    common.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
    common.add_argument("--output", "--json", dest="output", default=None, metavar="PATH",
                        help="also write the JSON report to PATH")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="weil-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def field_args(p, p_required=True):
        p.add_argument("--conductor", type=int, required=True)
        p.add_argument("--p", type=int, required=p_required)

    sp = sub.add_parser("field", parents=[common], help="field data and splitting of p")
    field_args(sp, p_required=False)
    sp.set_defaults(func=cmd_field)

    weil = sub.add_parser("weil", help="Weil-number commands")
    weil_sub = weil.add_subparsers(dest="subcommand", required=True)
    sp = weil_sub.add_parser("enumerate", parents=[common], help="Weil numbers for a slope box")
    field_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--box", type=int, default=1)
    sp.add_argument("--coeff-bound", type=int, default=3)
    sp.set_defaults(func=cmd_weil_enumerate)

    sp = sub.add_parser("invariants", parents=[common], help="Tate invariants of endomorphism algebras")
    field_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q-exp", type=int, default=None, help="view pi^n as a Weil p^Q-number (default n)")
    sp.add_argument("--slope", type=_parse_slope, default=None, help="comma-separated slope vector")
    sp.add_argument("--coeff-bound", type=int, default=3)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("search-l", parents=[common], help="search primes l defining a splitting field L")
    field_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--mode", choices=MODES, default="ab")
    sp.add_argument("--coeff-bound", type=int, default=3)
    sp.add_argument("--e15", action="store_true", help="compare cyclic and Tate invariants at each hit")
    sp.set_defaults(func=cmd_search_l)

    sp = sub.add_parser("artin", parents=[common], help="generalized Artin primitive-root set")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--conductor", type=int, default=1, help="F = Q(zeta_C); 1 for Q")
    sp.add_argument("--real", action="store_true", help="use the maximal real subfield of Q(zeta_C)")
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--k", type=int, default=1, help="index divisor; 0 drops the index condition")
    sp.set_defaults(func=cmd_artin)

    sp = sub.add_parser("wieferich", parents=[common], help="primes l with p^(l-1) = 1 mod l^2")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--bound", type=int, required=True)
    sp.set_defaults(func=cmd_wieferich)

    cat = sub.add_parser("category", help="motive category model")
    cat_sub = cat.add_subparsers(dest="subcommand", required=True)
    sp = cat_sub.add_parser("demo", parents=[common], help="decomposition table for a default object set")
    field_args(sp)
    sp.add_argument("--coeff-bound", type=int, default=3)
    sp.set_defaults(func=cmd_category_demo)
    return parser


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_ECHOED}
    cfg["command"] = " ".join(x for x in (args.command, getattr(args, "subcommand", None)) if x)
    return cfg


def _text(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            lines.append(pad + ", ".join(_scalar(v) for v in value))
        else:
            for v in value:
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
    else:
        lines.append(pad + _scalar(value))
    return lines


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "[]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    if args.format == "json":
        print(text)
    else:
        print("\n".join(_text(report["results"])))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.parallel < 1:
        parser.print_usage(sys.stderr)
        print("weil-lab: error: --parallel must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    code = EXIT_OK
    try:
        results = args.func(args)
    except Empty as exc:
        results, code = exc.report, EXIT_EMPTY
    except (UnsupportedConductor, DivisibilityError, NotIntegral) as exc:
        print(f"weil-lab: unsupported input: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (argparse.ArgumentTypeError, ValueError) as exc:
        print(f"weil-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = {"schema_version": SCHEMA_VERSION, "config": _config(args), "results": results}
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
