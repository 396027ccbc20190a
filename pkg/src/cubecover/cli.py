"""``cubecover`` command line: generate, inspect, build covers, verify, report."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass, field

from .asdim import Cover
from .bits import members
from .generators import KINDS, BudgetError, GenSpec, generate, grid, staircase, tree, tree_product
from .kernels import BACKEND
from .median import DEFAULT_VALIDATION_CAP, GraphError, MedianGraph, dimension
from .nets import NetConstructionError, build_cover, constants, cover_to_dict
from .normal import PreconditionError, normal_cube_path

log = logging.getLogger("cubecover")

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
CSV_COLUMNS = ["instance", "kind", "vertices", "eta", "l", "mesh", "m_l", "bound_mesh", "bound_N"]


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: list = field(default_factory=list)
    output: str | None = None
    base: int = 0
    ls: tuple = (1,)
    level: str = "fast"
    seed: int = 0
    format: str = "json"


def parse_int_list(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def parse_l_range(text):
    """``"2"``, ``"1..3"`` or ``"1,3"`` -> tuple of scales, each >= 1."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            ls = tuple(range(int(lo), int(hi) + 1))
        else:
            ls = parse_int_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad l range {text!r}")
    if not ls or min(ls) < 1:
        raise argparse.ArgumentTypeError("l must be >= 1")
    return ls


def load_graph(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read graph {path}: {exc}")
    if not isinstance(data, dict):
        raise InputError(f"{path}: graph JSON must be an object")
    return MedianGraph.from_dict(data)


def load_cover(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
        return Cover({k: frozenset(int(v) for v in vs) for k, vs in data["sets"].items()})
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"cannot read cover {path}: {exc}")


def emit(obj, path, text=None):
    text = text if text is not None else json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _check_vertex(g, v, what):
    if not 0 <= v < g.n:
        raise InputError(f"{what} {v} is not a vertex (graph has {g.n})")


# subcommands ---------------------------------------------------------------

def cmd_gen(args):
    spec = GenSpec(args.kind, dims=args.dims or (), n=args.n, sizes=args.sizes or (),
                   seed=args.seed, budget=args.budget)
    g = generate(spec)
    emit(g.to_dict(), args.output)
    return EXIT_OK


def cmd_inspect(args):
    g = load_graph(args.input)
    walls = g.hyperplanes
    emit({
        "vertices": g.n,
        "edges": len(g.edges),
        "dimension": dimension(g),
        "validation": {"validated": g.validated, "median": True, "walls_convex": True,
                       "backend": BACKEND},
        "hyperplanes": [
            {"id": h.id, "minus": members(h.minus_side), "plus": members(h.plus_side),
             "edges": [list(e) for e in h.edges]}
            for h in walls
        ],
    }, args.output)
    return EXIT_OK


def cmd_normal_path(args):
    g = load_graph(args.input)
    _check_vertex(g, args.source, "--from")
    _check_vertex(g, args.target, "--to")
    emit(normal_cube_path(g, args.source, args.target).to_dict(), args.output)
    return EXIT_OK


def cmd_cover(args):
    g = load_graph(args.input)
    _check_vertex(g, args.base, "--base")
    if len(args.l) != 1:
        raise InputError("cover takes a single scale --l")
    l = args.l[0]
    cover = build_cover(g, args.base, l)
    emit(cover_to_dict(cover, args.base, l), args.output)
    return EXIT_OK


def cmd_verify(args):
    from .verify import run_suite

    g = load_graph(args.input)
    _check_vertex(g, args.base, "--base")
    passed, report = run_suite(g, args.base, args.l, args.level)
    for c in report["checks"]:
        if not c["passed"]:
            tag = "FAIL" if c["gating"] else "note"
            log.warning("%s %s witness=%s", tag, c["name"], c.get("witness"))
    emit(report, args.output)
    return EXIT_OK if passed else EXIT_VIOLATION


def default_family(seed=0):
    return [
        ("tree-20", tree(20, seed)),
        ("grid-5x5", grid(5, 5)),
        ("grid-3x3x3", grid(3, 3, 3)),
        ("tree_product-6x6", tree_product((6, 6), seed)),
        ("staircase-6x6", staircase((6, 6), seed)),
    ]


def cmd_ad_report(args):
    if args.input:
        family = [(os.path.splitext(os.path.basename(p))[0], load_graph(p)) for p in args.input]
    else:
        family = default_family(args.seed)
    rows = []
    for name, g in family:
        _check_vertex(g, args.base, "--base")
        eta = dimension(g)
        const = constants(max(eta, 1))
        for l in args.l:
            cover = build_cover(g, args.base, l)
            rows.append({
                "instance": name,
                "kind": (g.meta or {}).get("kind", "custom"),
                "vertices": g.n,
                "eta": eta,
                "l": l,
                "mesh": cover.metrics["mesh"],
                "m_l": cover.metrics["m_l"],
                "bound_mesh": const.M * l,
                "bound_N": const.N,
            })
    out = sys.stdout if args.output in (None, "-") else open(args.output, "w", newline="")
    try:
        writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


PALETTE = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf", "#999999"]


def cmd_export_dot(args):
    g = load_graph(args.input)
    owners = {}
    if args.cover:
        cover = load_cover(args.cover)
        for i, name in enumerate(sorted(cover.sets)):
            for v in cover.sets[name]:
                if not 0 <= v < g.n:
                    raise InputError(f"cover vertex {v} outside graph")
                owners.setdefault(v, []).append(i)
    lines = ["graph G {"]
    for v in range(g.n):
        attrs = [f'label="{g.label(v)}"']
        if v in owners:
            cols = ":".join(PALETTE[i % len(PALETTE)] for i in owners[v])
            attrs += ['style="wedged"' if len(owners[v]) > 1 else "style=filled",
                      f'fillcolor="{cols}"', f'cover="{",".join(map(str, owners[v]))}"']
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in sorted(g.edges):
        lines.append(f"  {u} -- {v} [wall={g.wall_between(u, v)}];")
    lines.append("}")
    emit(None, args.output, "\n".join(lines) + "\n")
    return EXIT_OK


# parser --------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="cubecover", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def io(sp, multi=False):
        if multi:
            sp.add_argument("-i", "--input", nargs="+", default=[])
        else:
            sp.add_argument("-i", "--input", required=True)
        sp.add_argument("-o", "--output")

    sp = sub.add_parser("gen", help="write a generated median graph as JSON")
    sp.add_argument("--kind", required=True, choices=KINDS)
    sp.add_argument("--dims", type=parse_int_list)
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--sizes", type=parse_int_list)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=DEFAULT_VALIDATION_CAP)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("inspect", help="hyperplanes, dimension and validation report")
    io(sp)
    sp.set_defaults(func=cmd_inspect)

    sp = sub.add_parser("normal-path", help="normal cube path between two vertices")
    io(sp)
    sp.add_argument("--from", dest="source", type=int, required=True)
    sp.add_argument("--to", dest="target", type=int, required=True)
    sp.set_defaults(func=cmd_normal_path)

    sp = sub.add_parser("cover", help="build the cover U_l and write it as JSON")
    io(sp)
    sp.add_argument("--base", type=int, default=0)
    sp.add_argument("--l", type=parse_l_range, required=True)
    sp.set_defaults(func=cmd_cover)

    sp = sub.add_parser("verify", help="run the invariant suite")
    io(sp)
    sp.add_argument("--base", type=int, default=0)
    sp.add_argument("--l", type=parse_l_range, default=(1,))
    sp.add_argument("--level", choices=("fast", "full"), default="fast")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("ad-report", help="CSV of cover statistics over an instance family")
    io(sp, multi=True)
    sp.add_argument("--base", type=int, default=0)
    sp.add_argument("--l", type=parse_l_range, default=(1, 2))
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_ad_report)

    sp = sub.add_parser("export-dot", help="Graphviz export with wall ids on edges")
    io(sp)
    sp.add_argument("--cover", help="cover JSON used to colour vertices")
    sp.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    inputs = args.input if isinstance(getattr(args, "input", None), list) else [getattr(args, "input", None)]
    out = getattr(args, "output", None)
    if out not in (None, "-") and any(i and os.path.abspath(i) == os.path.abspath(out) for i in inputs):
        print("cubecover: input and output paths must differ", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, GraphError, BudgetError, PreconditionError) as exc:
        print(f"cubecover: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NetConstructionError as exc:
        print(f"cubecover: construction failed: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
