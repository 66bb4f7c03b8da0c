"""``patproj`` command line.

Exit codes: 0 success, 1 a checked property is false, 2 unreadable input,
3 input that parses but fails validation (lattice axioms, kernel axioms,
join density, simplicity).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .cbo import close_by_one
from .descriptions import ArityMismatch, AttributeSetSpace, ExplicitSpace, NoTop, UniverseMismatch
from .order_core import AxiomViolation, UnknownElement, load_lattice
from .pattern import PatternStructure, UnknownObject, load_csv
from .projections import (
    InvalidKernel,
    KernelOperator,
    MissingBottom,
    NotComparable,
    NotJoinClosed,
    aggregated_length_kernel,
    fold_kernels,
    intent_lattice,
    kernel_from_fixed_point,
    o_project,
    powerset_lattice,
)
from .representation import (
    CxtParseError,
    FormalContext,
    NotJoinDense,
    NotSimpler,
    ObjectSetMismatch,
    context_as_pattern_structure,
    context_from_json,
    interordinal_context,
    minimal_representation_context,
    read_cxt,
    reduce_attributes,
    representation_context,
    simpler_than,
    verify_representation,
    write_cxt,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INVALID = 0, 1, 2, 3

VALIDATION_ERRORS = (
    AxiomViolation,
    InvalidKernel,
    NotJoinClosed,
    MissingBottom,
    NotComparable,
    NotJoinDense,
    NotSimpler,
    ObjectSetMismatch,
    ArityMismatch,
    UniverseMismatch,
    NoTop,
)


class InputError(Exception):
    """Raised for files that cannot be read or parsed."""


@dataclass
class RunConfig:
    command: str
    csv: str | None = None
    cxt: str | None = None
    ps: str | None = None
    space: str = "intervals"
    kernels: list = field(default_factory=list)
    format: str | None = None
    seed: int = 0
    threads: int = 1


# -- loading -------------------------------------------------------------------

def _guard(fn, *args):
    """Run a loader, turning parse failures into :class:`InputError`."""
    try:
        return fn(*args)
    except VALIDATION_ERRORS:
        raise
    except (OSError, ValueError, KeyError, TypeError, IndexError) as exc:
        raise InputError(f"{exc.__class__.__name__}: {exc}") from None


def _read_set_csv(path: str) -> FormalContext:
    text = Path(path).read_text()
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ValueError("empty CSV")
    header = [h.strip() for h in rows[0]]
    named = header[0].lower() in ("", "object", "objects", "id")
    attrs = header[1:] if named else header
    objects, matrix = [], []
    for k, row in enumerate(rows[1:], start=1):
        cells = [c.strip() for c in (row[1:] if named else row)]
        if len(cells) != len(attrs):
            raise ValueError(f"row {k}: expected {len(attrs)} cells")
        objects.append(row[0].strip() if named else f"g{k}")
        matrix.append([c.lower() in ("1", "x", "true") for c in cells])
    return FormalContext.from_matrix(objects, attrs, matrix)


def _read_context(path: str) -> FormalContext:
    if path.endswith(".json"):
        return context_from_json(path)
    return read_cxt(Path(path).read_text())


def _read_explicit_ps(path: str) -> PatternStructure:
    """JSON ``{"lattice": <lattice or path>, "objects": [...], "descriptions": [...]}``."""
    data = json.loads(Path(path).read_text())
    ref = data["lattice"]
    if isinstance(ref, str):
        ref = Path(path).parent / ref
    lat = load_lattice(ref)
    return PatternStructure(data["objects"], ExplicitSpace(lat), data["descriptions"])


def load_input(cfg: RunConfig) -> PatternStructure:
    given = [x for x in (cfg.csv, cfg.cxt, cfg.ps) if x]
    if len(given) != 1:
        raise InputError("give exactly one of --csv, --cxt, --ps")
    if cfg.cxt:
        return context_as_pattern_structure(_guard(_read_context, cfg.cxt))
    if cfg.ps:
        return _guard(_read_explicit_ps, cfg.ps)
    if cfg.space == "sets":
        return context_as_pattern_structure(_guard(_read_set_csv, cfg.csv))
    return _guard(load_csv, cfg.csv)


def _parse_element(ps: PatternStructure, x):
    space = ps.space
    if isinstance(space, AttributeSetSpace) and isinstance(x, list):
        return space.make(x)
    if isinstance(space, ExplicitSpace):
        return x
    return space.parse(x)


def _kernel_spec(text: str) -> dict:
    """A kernel flag is either inline JSON or a path to a JSON file."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    path = Path(text)
    spec = json.loads(path.read_text())
    spec.setdefault("_dir", str(path.parent))
    return spec


def build_kernel(ps: PatternStructure, spec: dict) -> KernelOperator:
    if spec.get("kind") == "aggregated_length":
        if not hasattr(ps.space, "arity"):
            raise InputError("aggregated_length needs an interval space")
        return aggregated_length_kernel(float(spec["threshold"]), ps.space.arity)
    if "fixed_point" not in spec:
        raise InputError("kernel needs 'kind' or 'fixed_point'")
    ref = spec.get("lattice", "intents")
    if ref == "powerset":
        if not isinstance(ps.space, AttributeSetSpace):
            raise InputError("'powerset' lattice needs an attribute-set space")
        lat = powerset_lattice(ps.space)
    elif ref == "intents":
        lat = intent_lattice(ps)
    elif ref == "space":
        if not isinstance(ps.space, ExplicitSpace):
            raise InputError("'space' lattice needs an explicit lattice input")
        lat = ps.space.lattice
    else:
        path = Path(spec.get("_dir", ".")) / ref
        lat = _guard(load_lattice, path)
        if isinstance(ps.space, ExplicitSpace) and set(lat.elements) != set(ps.space.lattice.elements):
            raise InputError(f"kernel lattice {ref} differs from the input lattice")
    fixed = [_guard(_parse_element, ps, x) for x in spec["fixed_point"]]
    missing = [x for x in fixed if x not in lat]
    if missing:
        raise InputError(f"fixed point elements not in the lattice: {missing!r}")
    return kernel_from_fixed_point(lat, fixed, name=spec.get("name", "psi"))


def combined_kernel(ps: PatternStructure, specs: list[dict]) -> KernelOperator:
    """Fold several kernels with the projection meet.

    Aggregated-length kernels fold among themselves by the smallest
    threshold; mixed with table kernels they are tabulated on the intent
    lattice first.
    """
    al = [s for s in specs if s.get("kind") == "aggregated_length"]
    rest = [s for s in specs if s.get("kind") != "aggregated_length"]
    if al:
        t = min(float(s["threshold"]) for s in al)
        al_kernel = build_kernel(ps, {"kind": "aggregated_length", "threshold": t})
        if not rest:
            return al_kernel
    kernels = [build_kernel(ps, s) for s in rest]
    if al:
        kernels.append(al_kernel.tabulate(kernels[0].lattice))
    if len(kernels) == 1:
        return kernels[0]
    return fold_kernels(kernels, kernels[0].lattice)


# -- output ---------------------------------------------------------------------

def _emit_concepts(ps, concepts, fmt: str) -> str:
    if fmt == "dot":
        return concepts.to_dot(ps)
    if fmt == "json":
        return json.dumps(concepts.to_json(ps), indent=2) + "\n"
    raise InputError(f"format {fmt!r} is not available for concept lattices")


def _emit_context(ctx: FormalContext, fmt: str) -> str:
    if fmt == "cxt":
        return write_cxt(ctx)
    if fmt == "json":
        return json.dumps(ctx.to_json(), indent=2) + "\n"
    raise InputError(f"format {fmt!r} is not available for contexts")


# -- commands ---------------------------------------------------------------------

def cmd_lattice(cfg: RunConfig, args) -> int:
    ps = load_input(cfg)
    concepts = close_by_one(ps, threads=cfg.threads)
    sys.stdout.write(_emit_concepts(ps, concepts, cfg.format or "json"))
    return EXIT_OK


def cmd_project(cfg: RunConfig, args) -> int:
    ps = load_input(cfg)
    if not cfg.kernels:
        raise InputError("project needs at least one --kernel or --aggregated-length")
    k = combined_kernel(ps, cfg.kernels)
    pps = o_project(ps, k)
    concepts = close_by_one(pps, threads=cfg.threads)
    sys.stdout.write(_emit_concepts(pps, concepts, cfg.format or "json"))
    return EXIT_OK


def _build_context(ps: PatternStructure, args) -> FormalContext:
    if args.builder == "interordinal":
        if not hasattr(ps.space, "arity"):
            raise InputError("interordinal builder needs interval data")
        return interordinal_context(ps)
    if args.builder == "minimal":
        return minimal_representation_context(ps)
    if not args.descriptions:
        raise InputError("explicit builder needs --descriptions")
    items = _guard(lambda p: json.loads(Path(p).read_text()), args.descriptions)
    descs = [_guard(_parse_element, ps, x) for x in items]
    return representation_context(ps, descs)


def cmd_repctx(cfg: RunConfig, args) -> int:
    ps = load_input(cfg)
    ctx = _build_context(ps, args)
    sys.stdout.write(_emit_context(ctx, cfg.format or "cxt"))
    return EXIT_OK


def cmd_reduce(cfg: RunConfig, args) -> int:
    if not cfg.cxt:
        raise InputError("reduce needs --cxt")
    ctx = _guard(_read_context, cfg.cxt)
    sys.stdout.write(_emit_context(reduce_attributes(ctx), cfg.format or "cxt"))
    return EXIT_OK


def _print_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, default=str) + "\n")


def _verify_simpler(args) -> int:
    if not (args.a and args.b):
        raise InputError("simpler needs --a and --b")
    k1 = _guard(_read_context, args.a)
    k2 = _guard(_read_context, args.b)
    w = simpler_than(k1, k2)
    _print_json({
        "property": "simpler",
        "instance": f"{args.a} <=S {args.b}",
        "pass": w.simpler,
        "witness": {m: sorted(v) for m, v in w.witness.items()} if w.simpler else None,
        "counterexample": None if w.simpler else {"attribute": w.failing},
    })
    return EXIT_OK if w.simpler else EXIT_FAIL


def _verify_representation(cfg: RunConfig, args) -> int:
    ps = load_input(cfg)
    ctx = _build_context(ps, args)
    rep = verify_representation(ps, ctx)
    _print_json({
        "property": "representation",
        "instance": cfg.csv or cfg.cxt or cfg.ps,
        "pass": rep.ok,
        "size": rep.size,
        "counterexample": None if rep.ok else rep.mismatches,
    })
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_verify(cfg: RunConfig, args) -> int:
    from .oracle import PROPERTIES, run_property

    name = args.property
    if name == "simpler":
        return _verify_simpler(args)
    if name == "representation" and (cfg.csv or cfg.cxt or cfg.ps):
        return _verify_representation(cfg, args)
    names = sorted(PROPERTIES) if name == "all" else [name]
    if any(n not in PROPERTIES for n in names):
        raise InputError(f"unknown property {name!r}; known: all, simpler, {', '.join(sorted(PROPERTIES))}")
    status = EXIT_OK
    for n in names:
        count, failed = 0, None
        for report in run_property(n, budget=args.budget, seed=cfg.seed):
            count += 1
            if args.verbose or not report.passed:
                _print_json(report.to_json())
            if not report.passed:
                failed = report
        _print_json({"property": n, "instances": count, "pass": failed is None})
        if failed is not None:
            status = EXIT_FAIL
    return status


COMMANDS = {
    "lattice": cmd_lattice,
    "project": cmd_project,
    "repctx": cmd_repctx,
    "verify": cmd_verify,
    "reduce": cmd_reduce,
}


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--csv", help="numeric CSV (one row per object)")
    p.add_argument("--cxt", help="Burmeister .cxt or JSON context")
    p.add_argument("--ps", help="JSON pattern structure over an explicit lattice")
    p.add_argument("--space", choices=["intervals", "sets"], default="intervals",
                   help="how to read --csv (default: intervals)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patproj", description="Pattern structures, projections and representation contexts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", help="all pattern concepts and their cover relation")
    _add_input(p)
    p.add_argument("--format", choices=["json", "dot"])

    p = sub.add_parser("project", help="concepts of the o-projected structure")
    _add_input(p)
    p.add_argument("--format", choices=["json", "dot"])
    p.add_argument("--kernel", action="append", default=[], help="kernel JSON file or inline JSON (repeatable)")
    p.add_argument("--aggregated-length", type=float, action="append", default=[], metavar="T")

    for name, help_text in (("repctx", "representation context"), ("verify", "check a property")):
        p = sub.add_parser(name, help=help_text)
        if name == "verify":
            p.add_argument("property", help="oracle property, 'representation', 'simpler' or 'all'")
            p.add_argument("--budget", type=int, default=100, help="random instances per property")
            p.add_argument("--a", help="first context for 'simpler'")
            p.add_argument("--b", help="second context for 'simpler'")
            p.add_argument("--verbose", action="store_true", help="print every instance report")
        _add_input(p)
        p.add_argument("--builder", choices=["interordinal", "minimal", "explicit"], default="minimal")
        p.add_argument("--descriptions", help="JSON list of descriptions for the explicit builder")
        p.add_argument("--format", choices=["cxt", "json"])

    p = sub.add_parser("reduce", help="drop reducible attributes of a context")
    p.add_argument("--cxt", required=True)
    p.add_argument("--format", choices=["cxt", "json"])
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        csv=getattr(args, "csv", None),
        cxt=getattr(args, "cxt", None),
        ps=getattr(args, "ps", None),
        space=getattr(args, "space", "intervals"),
        format=args.format,
        seed=getattr(args, "seed", 0),
        threads=getattr(args, "threads", 1),
    )
    try:
        specs = [_guard(_kernel_spec, k) for k in getattr(args, "kernel", [])]
        specs += [{"kind": "aggregated_length", "threshold": t} for t in getattr(args, "aggregated_length", [])]
        cfg.kernels = specs
        return COMMANDS[args.command](cfg, args)
    except InputError as exc:
        print(f"patproj: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CxtParseError, UnknownObject, UnknownElement) as exc:
        print(f"patproj: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except VALIDATION_ERRORS as exc:
        print(f"patproj: validation error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
