"""Command-line front end.

Subcommands:
    bound FILE          parse a manifold description, derive the dimension
                        bound, print verdict, consequences and optionally
                        the rule-by-rule trace
    catalog --dim N     list the geometry table for one dimension
    cover build         emit a shifted-brick cover witness for a free
                        abelian ball
    cover verify FILE   recheck a witness file
    cover search        exhaustive minimal-family search on a tiny ball

Exit codes: 0 success, 1 semantic failure (invalid cover, no cover found),
2 unusable input (parse errors, bad arguments, budget), 3 inconsistent
derived bounds.  Diagnostics go to stderr as "path:line:col: error: text".
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import engine
from .bounds import InconsistentBoundError
from .coarse import (
    BallBudgetError,
    WitnessFormatError,
    brick_cover,
    cayley_ball,
    format_witness,
    min_families_exhaustive,
    parse_group_spec,
    parse_witness,
    verify_cover,
)
from .geometries import UnsupportedDimensionError, fact_record, list_geometries
from .groups import to_canonical
from .manifolds import (
    ManifoldParseError,
    OutsideClassifiedCasesError,
    compile as compile_manifold,
    parse_manifold,
)


def _read_text(path: str) -> tuple[str, bytes] | int:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        print(f"{path}: error: {exc.strerror or exc}", file=sys.stderr)
        return 2
    try:
        return raw.decode("utf-8"), raw
    except UnicodeDecodeError as exc:
        print(f"{path}: error: not valid UTF-8 ({exc.reason})", file=sys.stderr)
        return 2


def cmd_bound(args: argparse.Namespace) -> int:
    loaded = _read_text(args.file)
    if isinstance(loaded, int):
        return loaded
    text, raw = loaded
    try:
        desc = parse_manifold(text)
        expr, verdict = compile_manifold(desc)
    except (ManifoldParseError, OutsideClassifiedCasesError) as exc:
        print(f"{args.file}:{exc.line}:{exc.col}: error: {exc.message}", file=sys.stderr)
        return 2
    aspherical = verdict.status == "Aspherical"
    result = engine.bound(expr, aspherical_dim=desc.dim if aspherical else None)
    cons = engine.consequences(result.bound, aspherical)
    if args.format == "structured":
        payload = {
            "input": {"digest": "sha256:" + hashlib.sha256(raw).hexdigest()},
            "group": to_canonical(expr),
            "bound": {"lower": result.bound.lower, "upper": str(result.bound.upper)},
            "verdict": {"status": verdict.status, "reason": verdict.reason},
            "consequences": [
                {"kind": c.kind, "condition": c.condition, "citation": c.citation}
                for c in cons
            ],
            "trace": engine.serialize_trace(result.trace).splitlines() if args.trace else None,
        }
        print(json.dumps(payload, indent=2))
        return 0
    print(f"group: {to_canonical(expr)}")
    print(f"bound: {result.bound}")
    print(f"verdict: {verdict.status} ({verdict.reason})")
    if cons:
        print("consequences:")
        for c in cons:
            print(f"  {c.kind}: {c.condition}")
            print(f"    {c.citation}")
    else:
        print("consequences: none")
    if args.trace:
        print("trace:")
        for line in engine.serialize_trace(result.trace).splitlines():
            print(f"  {line}")
        used: list[str] = []
        for step in result.trace.steps:
            if step.rule_id not in used:
                used.append(step.rule_id)
        if used:
            print("citations:")
            for rid in used:
                print(f"  {rid}: {engine.RULES[rid].citation}")
    return 0


def cmd_catalog(args: argparse.Namespace) -> int:
    facts = list_geometries(args.dim)
    if args.format == "structured":
        payload = {"dim": args.dim, "geometries": [fact_record(f) for f in facts]}
        print(json.dumps(payload, indent=2))
        return 0
    for f in facts:
        flags = []
        if f.aspherical_model:
            flags.append("aspherical")
        if f.compact_model:
            flags.append("compact")
        suffix = " [" + ",".join(flags) + "]" if flags else ""
        print(
            f"{f.name:<9} {f.klass:<12} model={f.model_asdim}"
            f" lattice={f.lattice_asdim} via {f.lattice_rule}{suffix}"
        )
    return 0


def cmd_cover_build(args: argparse.Namespace) -> int:
    witness = brick_cover(args.rank, args.D, args.radius)
    text = format_witness(witness)
    if args.output:
        Path(args.output).write_text(text)
        subsets = sum(len(fam) for fam in witness.families)
        print(
            f"wrote {args.output}: {len(witness.space)} points,"
            f" {len(witness.families)} families, {subsets} subsets,"
            f" D={witness.D}, B={witness.B}"
        )
    else:
        sys.stdout.write(text)
    return 0


def cmd_cover_verify(args: argparse.Namespace) -> int:
    loaded = _read_text(args.file)
    if isinstance(loaded, int):
        return loaded
    text, _ = loaded
    try:
        witness = parse_witness(text)
    except WitnessFormatError as exc:
        print(f"{args.file}:{exc.line}: error: {exc.message}", file=sys.stderr)
        return 2
    report = verify_cover(witness)
    if report.valid:
        subsets = sum(len(fam) for fam in witness.families)
        print(
            f"OK: {len(witness.space)} points, {len(witness.families)} families,"
            f" {subsets} subsets, D={witness.D}, B={witness.B}"
        )
        return 0
    for v in report.violations:
        print(f"violation: {v}")
    print(f"FAIL: {len(report.violations)} violation(s)")
    return 1


def cmd_cover_search(args: argparse.Namespace) -> int:
    spec = parse_group_spec(args.group)
    space = cayley_ball(spec, args.radius)
    result = min_families_exhaustive(space, args.D, args.B, args.k_max)
    if result.k is None:
        print("k=none")
        return 1
    print(f"k={result.k}")
    if args.output and result.witness is not None:
        Path(args.output).write_text(format_witness(result.witness))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asdimlab",
        description="Certified asymptotic-dimension bounds for manifold"
        " fundamental groups, plus a finite-scale cover laboratory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="derive a dimension bound from a manifold file")
    p.add_argument("file", help="manifold description file")
    p.add_argument("--trace", action="store_true", help="include the derivation trace")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("catalog", help="list the geometry table for one dimension")
    p.add_argument("--dim", type=int, required=True, choices=(2, 3, 4))
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("cover", help="cover witness tools")
    csub = p.add_subparsers(dest="cover_command", required=True)

    b = csub.add_parser("build", help="brick cover of a free abelian ball")
    b.add_argument("--rank", type=int, required=True, help="free abelian rank, 1..3")
    b.add_argument("-D", dest="D", type=int, required=True, metavar="DIST",
                   help="required separation within a family")
    b.add_argument("--radius", type=int, required=True, help="ball radius")
    b.add_argument("-o", "--output", help="write the witness here instead of stdout")
    b.set_defaults(func=cmd_cover_build)

    v = csub.add_parser("verify", help="recheck a witness file")
    v.add_argument("file", help="witness file")
    v.set_defaults(func=cmd_cover_verify)

    s = csub.add_parser("search", help="exhaustive minimal-family search")
    s.add_argument("--group", required=True,
                   help='e.g. "FreeAbelian(1)" or "FreeGroup(2)" or "Heisenberg3"')
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("-D", dest="D", type=int, required=True, metavar="DIST")
    s.add_argument("-B", dest="B", type=int, required=True, metavar="DIAM")
    s.add_argument("--k-max", dest="k_max", type=int, default=4)
    s.add_argument("-o", "--output", help="save the found witness")
    s.set_defaults(func=cmd_cover_search)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except InconsistentBoundError as exc:
        print(f"error: inconsistent bounds: {exc}", file=sys.stderr)
        return 3
    except (BallBudgetError, UnsupportedDimensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
