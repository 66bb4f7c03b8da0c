"""Formal contexts and representation contexts of pattern structures.

Object and attribute subsets are frozensets of indices, as elsewhere in the
package. A context built from descriptions keeps them in ``descriptions``
(aligned with ``attributes``), which is what turns it into a representation
context.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .cbo import close_by_one
from .descriptions import AttributeSetSpace, IntervalSpace, IntervalVector, TOP, format_number
from .pattern import PatternStructure, ext_to_int, mask_of, set_of
from .projections import KernelOperator, intent_lattice, kernel_from_fixed_point

__all__ = [
    "CxtParseError",
    "NotJoinDense",
    "NotSimpler",
    "ObjectSetMismatch",
    "FormalContext",
    "SimplicityWitness",
    "RepresentationReport",
    "derive",
    "context_concepts",
    "read_cxt",
    "write_cxt",
    "context_from_json",
    "representation_context",
    "interordinal_context",
    "minimal_representation_context",
    "verify_representation",
    "simpler_than",
    "is_closed_relation",
    "projection_from_context",
    "reduce_attributes",
    "context_as_pattern_structure",
    "join_in_intents",
]


class CxtParseError(ValueError):
    pass


class NotJoinDense(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"{witness!r} is not a join of attribute descriptions")


class NotSimpler(ValueError):
    pass


class ObjectSetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class FormalContext:
    """``(G, M, I)``; ``rows[g]`` is the attribute bitmask of object ``g``."""

    objects: tuple
    attributes: tuple
    rows: tuple
    descriptions: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        if len(set(self.attributes)) != len(self.attributes):
            raise ValueError("attribute names must be unique")
        if len(self.rows) != len(self.objects):
            raise ValueError("one row per object required")
        full = (1 << len(self.attributes)) - 1
        if any(r & ~full for r in self.rows):
            raise ValueError("row has bits beyond the attribute count")
        if self.descriptions is not None and len(self.descriptions) != len(self.attributes):
            raise ValueError("one description per attribute required")
        cols = []
        for m in range(len(self.attributes)):
            cols.append(mask_of(g for g, r in enumerate(self.rows) if r >> m & 1))
        object.__setattr__(self, "_cols", tuple(cols))

    @classmethod
    def from_matrix(cls, objects, attributes, matrix, descriptions=None) -> "FormalContext":
        rows = [mask_of(m for m, v in enumerate(row) if v) for row in matrix]
        return cls(tuple(objects), tuple(attributes), tuple(rows), descriptions)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[bool(r >> m & 1) for m in range(len(self.attributes))] for r in self.rows],
            dtype=bool,
        ).reshape(len(self.objects), len(self.attributes))

    @property
    def columns(self) -> tuple:
        """Object bitmask of every attribute."""
        return self._cols

    def incident(self, g: int, m: int) -> bool:
        return bool(self.rows[g] >> m & 1)

    def objset(self, *names) -> frozenset[int]:
        pos = {g: i for i, g in enumerate(self.objects)}
        return frozenset(pos[n] for n in names)

    def attrset(self, *names) -> frozenset[int]:
        pos = {m: i for i, m in enumerate(self.attributes)}
        return frozenset(pos[n] for n in names)

    def attr_names(self, idxs: Iterable[int]) -> list[str]:
        return [self.attributes[i] for i in sorted(idxs)]

    def extent(self, m: int) -> frozenset[int]:
        return set_of(self._cols[m])

    def subcontext(self, keep: Sequence[int]) -> "FormalContext":
        keep = list(keep)
        rows = [mask_of(i for i, m in enumerate(keep) if r >> m & 1) for r in self.rows]
        descs = None if self.descriptions is None else tuple(self.descriptions[m] for m in keep)
        return FormalContext(self.objects, tuple(self.attributes[m] for m in keep), tuple(rows), descs)

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "attributes": list(self.attributes),
            "incidence": self.matrix.astype(int).tolist(),
        }


def _obj_derive_mask(ctx: FormalContext, objs_mask: int) -> int:
    out = (1 << len(ctx.attributes)) - 1
    g = 0
    while objs_mask:
        if objs_mask & 1:
            out &= ctx.rows[g]
        objs_mask >>= 1
        g += 1
    return out


def _attr_derive_mask(ctx: FormalContext, attrs_mask: int) -> int:
    out = (1 << len(ctx.objects)) - 1
    m = 0
    while attrs_mask:
        if attrs_mask & 1:
            out &= ctx._cols[m]
        attrs_mask >>= 1
        m += 1
    return out


def derive(ctx: FormalContext, side: str, subset: Iterable[int]) -> frozenset[int]:
    """The prime operator: ``side`` names where ``subset`` lives."""
    mask = mask_of(subset)
    if side in ("objects", "G"):
        return set_of(_obj_derive_mask(ctx, mask))
    if side in ("attributes", "M"):
        return set_of(_attr_derive_mask(ctx, mask))
    raise ValueError(f"side must be 'objects' or 'attributes', not {side!r}")


def context_as_pattern_structure(ctx: FormalContext) -> PatternStructure:
    space = AttributeSetSpace(ctx.attributes)
    descs = [frozenset(ctx.attributes[m] for m in set_of(r)) for r in ctx.rows]
    return PatternStructure(ctx.objects, space, descs)


def context_concepts(ctx: FormalContext) -> list[tuple[frozenset, frozenset]]:
    """All formal concepts as ``(extent, intent)`` index sets."""
    pos = {m: i for i, m in enumerate(ctx.attributes)}
    ps = context_as_pattern_structure(ctx)
    return [(c.extent, frozenset(pos[m] for m in c.intent)) for c in close_by_one(ps)]


# -- Burmeister .cxt and JSON -------------------------------------------------

def read_cxt(source: str | Path | io.TextIOBase) -> FormalContext:
    if isinstance(source, io.TextIOBase):
        text = source.read()
    else:
        p = Path(source)
        text = p.read_text() if ("\n" not in str(source) and p.exists()) else str(source)
    lines = text.splitlines()
    if not lines or lines[0].strip() != "B":
        raise CxtParseError("missing 'B' header")

    def is_int(s):
        return s.strip().isdigit()

    # a name line (possibly empty) may precede the counts
    if len(lines) > 3 and is_int(lines[2]) and is_int(lines[3]):
        i = 2
    elif len(lines) > 2 and is_int(lines[1]) and is_int(lines[2]):
        i = 1
    else:
        raise CxtParseError("object/attribute counts not found")
    n, m = int(lines[i]), int(lines[i + 1])
    i += 2
    if i < len(lines) and lines[i].strip() == "" and n + m > 0:
        i += 1
    body = lines[i:]
    if len(body) < n + m + n:
        raise CxtParseError(f"expected {n} objects, {m} attributes and {n} rows")
    objects = [s.strip() for s in body[:n]]
    attributes = [s.strip() for s in body[n:n + m]]
    rows = []
    for k, line in enumerate(body[n + m:n + m + n]):
        line = line.strip()
        if len(line) != m or any(ch not in "Xx." for ch in line):
            raise CxtParseError(f"bad incidence row {k + 1}: {line!r}")
        rows.append(mask_of(j for j, ch in enumerate(line) if ch in "Xx"))
    return FormalContext(tuple(objects), tuple(attributes), tuple(rows))


def write_cxt(ctx: FormalContext) -> str:
    out = ["B", "", str(len(ctx.objects)), str(len(ctx.attributes)), ""]
    out += list(ctx.objects)
    out += list(ctx.attributes)
    for r in ctx.rows:
        out.append("".join("X" if r >> m & 1 else "." for m in range(len(ctx.attributes))))
    return "\n".join(out) + "\n"


def context_from_json(source: str | Path | dict) -> FormalContext:
    data = source if isinstance(source, dict) else json.loads(Path(source).read_text())
    return FormalContext.from_matrix(data["objects"], data["attributes"], data["incidence"])


# -- representation contexts ---------------------------------------------------

def join_in_intents(ps: PatternStructure, intents: Sequence, xs: Iterable):
    """Join taken inside the intent family: meet of the intents above ``xs``."""
    xs = list(xs)
    leq = ps.space.leq
    above = [d for d in intents if all(leq(x, d) for x in xs)]
    return ps.space.meet_all(above) if above else None


def _intents(ps: PatternStructure) -> list:
    return [c.intent for c in close_by_one(ps)]


def _density_violation(ps: PatternStructure, descs: Sequence, intents: Sequence):
    leq = ps.space.leq
    for d in intents:
        below = [m for m in descs if leq(m, d)]
        if join_in_intents(ps, intents, below) != d:
            return d
    return None


def representation_context(ps: PatternStructure, descriptions: Sequence, names: Sequence[str] | None = None,
                           check: bool = True) -> FormalContext:
    """``(G, M, {(g, m) : m subsumed by delta(g)})`` for a join-dense ``M``."""
    descriptions = list(descriptions)
    if names is None:
        names = [ps.space.render(m) for m in descriptions]
    if check:
        bad = _density_violation(ps, descriptions, _intents(ps))
        if bad is not None:
            raise NotJoinDense(bad)
    leq = ps.space.leq
    rows = [mask_of(i for i, m in enumerate(descriptions) if leq(m, dg)) for dg in ps.delta]
    return FormalContext(ps.objects, tuple(names), tuple(rows), tuple(descriptions))


def interordinal_context(ps: PatternStructure) -> FormalContext:
    """Interordinal scaling of interval data plus the global pattern.

    Per attribute with endpoint values ``W``: ``m>=v`` for every ``v`` above
    the minimum (descending), then ``m<=v`` for every ``v`` below the
    maximum (ascending); finally the meet of all object descriptions.
    """
    space = ps.space
    if not isinstance(space, IntervalSpace):
        raise TypeError("interordinal scaling needs an interval pattern structure")
    free = [(-float("inf"), float("inf"))] * space.arity
    descs, names = [], []
    for i, attr in enumerate(space.attributes):
        values = sorted({v for d in ps.delta if d is not TOP for v in d[i]})
        if not values:
            continue
        lo, hi = values[0], values[-1]
        for v in sorted((v for v in values if v > lo), reverse=True):
            comps = list(free)
            comps[i] = (v, float("inf"))
            descs.append(IntervalVector(comps))
            names.append(f"{attr}>={format_number(v)}")
        for v in (v for v in values if v < hi):
            comps = list(free)
            comps[i] = (-float("inf"), v)
            descs.append(IntervalVector(comps))
            names.append(f"{attr}<={format_number(v)}")
    glob = ext_to_int(ps, ps.all_objects)
    descs.append(glob)
    names.append(space.render(glob))
    return representation_context(ps, descs, names, check=False)


def minimal_representation_context(ps: PatternStructure) -> FormalContext:
    """Join-irreducible intents, plus the least intent when it carries
    information (i.e. differs from the bottom of the description space)."""
    cs = close_by_one(ps)
    lower_covers = [0] * len(cs)
    for lo, _ in cs.edges:
        # smaller extent = larger intent; its extent-covers are intent-lower covers
        lower_covers[lo] += 1
    keep = [i for i, k in enumerate(lower_covers) if k == 1]
    least = len(cs) - 1  # largest extent sorts last
    if least not in keep and ps.space.bottom is not None and cs[least].intent != ps.space.bottom:
        keep.append(least)
    descs = [cs[i].intent for i in sorted(keep)]
    return representation_context(ps, descs, check=False)


@dataclass
class RepresentationReport:
    ok: bool
    pairs: list[tuple[frozenset, Any, frozenset]] = field(default_factory=list)
    mismatches: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok

    @property
    def size(self) -> int:
        return len(self.pairs)


def verify_representation(ps: PatternStructure, ctx: FormalContext, descriptions: Sequence | None = None) -> RepresentationReport:
    """Check the concept bijection between ``ps`` and a representation context.

    Attribute descriptions come from ``descriptions``, ``ctx.descriptions``,
    or, failing both, from the extents: ``m -> (m')`` mapped to its pattern
    intent.
    """
    if ctx.objects != ps.objects:
        raise ObjectSetMismatch("context and pattern structure have different objects")
    if descriptions is None:
        descriptions = ctx.descriptions
    if descriptions is None:
        descriptions = [ext_to_int(ps, ctx.extent(m)) for m in range(len(ctx.attributes))]
    descriptions = list(descriptions)
    leq = ps.space.leq
    bad: list[str] = []
    for g, dg in enumerate(ps.delta):
        for m, dm in enumerate(descriptions):
            if ctx.incident(g, m) != leq(dm, dg):
                bad.append(f"incidence ({ps.objects[g]}, {ctx.attributes[m]}) disagrees with subsumption")
    cs = close_by_one(ps)
    intents = [c.intent for c in cs]
    dense = _density_violation(ps, descriptions, intents)
    if dense is not None:
        bad.append(f"not join-dense at {ps.space.render(dense)}")

    pairs = []
    for c in cs:
        B = frozenset(m for m, dm in enumerate(descriptions) if leq(dm, c.intent))
        if derive(ctx, "objects", c.extent) != B or derive(ctx, "attributes", B) != c.extent:
            bad.append(f"pattern concept {ps.names(c.extent)} has no formal counterpart")
            continue
        if join_in_intents(ps, intents, (descriptions[m] for m in B)) != c.intent:
            bad.append(f"join of B differs from intent at {ps.names(c.extent)}")
            continue
        pairs.append((c.extent, c.intent, B))
    formal = context_concepts(ctx)
    by_extent = {c.extent: c.intent for c in cs}
    for A, B in formal:
        d = join_in_intents(ps, intents, (descriptions[m] for m in B))
        if by_extent.get(A) != d:
            bad.append(f"formal concept {ps.names(A)} has no pattern counterpart")
        elif B != frozenset(m for m, dm in enumerate(descriptions) if leq(dm, d)):
            bad.append(f"B differs from the ideal of d at {ps.names(A)}")
    if len(formal) != len(cs):
        bad.append(f"{len(cs)} pattern concepts vs {len(formal)} formal concepts")
    return RepresentationReport(not bad, pairs, bad)


@dataclass
class SimplicityWitness:
    simpler: bool
    witness: dict[str, frozenset[str]] = field(default_factory=dict)
    failing: str | None = None

    def __bool__(self):
        return self.simpler


def simpler_than(k1: FormalContext, k2: FormalContext) -> SimplicityWitness:
    """Is every attribute extent of ``k1`` an intersection of ``k2`` extents?

    The candidate set for ``m1`` is the largest one, ``B2 = (m1')^2``.
    """
    if k1.objects != k2.objects:
        raise ObjectSetMismatch("contexts have different object sets")
    witness = {}
    for m1, col in enumerate(k1.columns):
        B2 = _obj_derive_mask(k2, col)
        if _attr_derive_mask(k2, B2) != col:
            return SimplicityWitness(False, witness, k1.attributes[m1])
        witness[k1.attributes[m1]] = frozenset(k2.attributes[m] for m in set_of(B2))
    return SimplicityWitness(True, witness)


def is_closed_relation(sub: FormalContext, ctx: FormalContext) -> bool:
    """Every concept of ``(G, M, J)`` is a concept of ``(G, M, I)``."""
    if sub.objects != ctx.objects or sub.attributes != ctx.attributes:
        raise ObjectSetMismatch("closed relations live on the same G and M")
    if any(j & ~i for j, i in zip(sub.rows, ctx.rows)):
        raise ValueError("J is not contained in I")
    for A, B in context_concepts(sub):
        a = mask_of(A)
        if _obj_derive_mask(ctx, a) != mask_of(B) or _attr_derive_mask(ctx, mask_of(B)) != a:
            return False
    return True


def _join_closure(lattice, seeds) -> set:
    closed = {lattice.bottom} | set(seeds)
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                j = lattice.join(a, b)
                if j not in closed:
                    closed.add(j)
                    new.append(j)
        frontier = new
    return closed


def projection_from_context(ps: PatternStructure, ctx: FormalContext) -> KernelOperator:
    """A kernel on the materialised intents (plus bottom) of ``ps`` under
    which ``ctx`` becomes a representation context of the o-projection."""
    check = simpler_than(ctx, minimal_representation_context(ps))
    if not check:
        raise NotSimpler(f"attribute {check.failing!r} is not an intersection of representation columns")
    lattice = intent_lattice(ps)
    seeds = {ext_to_int(ps, ctx.extent(m)) for m in range(len(ctx.attributes))}
    return kernel_from_fixed_point(lattice, _join_closure(lattice, seeds), name="psi_K")


def reduce_attributes(ctx: FormalContext) -> FormalContext:
    """Drop repeated columns (first kept) and columns that are intersections
    of other columns; the concept lattice is unchanged."""
    full = (1 << len(ctx.objects)) - 1
    seen, clarified = set(), []
    for m, col in enumerate(ctx.columns):
        if col not in seen:
            seen.add(col)
            clarified.append(m)
    keep = []
    for m in clarified:
        col = ctx.columns[m]
        inter = full
        for n in clarified:
            other = ctx.columns[n]
            if n != m and col & ~other == 0 and other != col:
                inter &= other
        if inter != col:
            keep.append(m)
    return ctx.subcontext(keep)
