"""Close-by-One enumeration of pattern concepts and Hasse diagrams.

Interval and attribute-set structures run on a specialised kernel; the
compiled one (``_kernels``) is used when importable, otherwise the
pure-Python ``_fallback`` with identical output. Every other description
space goes through :func:`cbo_generic`, which only needs ``meet``/``leq``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ..descriptions import TOP, AttributeSetSpace, IntervalSpace, IntervalVector, NoTop
from ..pattern import PatternConcept, PatternStructure, mask_of, set_of
from . import _fallback

try:
    from . import _kernels as _native
except ImportError:  # pragma: no cover - depends on the build
    _native = None

BACKEND = "native" if _native is not None else "python"

__all__ = [
    "BACKEND",
    "ConceptSet",
    "close_by_one",
    "cbo_generic",
    "is_canonic_extension",
    "hasse",
    "sort_concepts",
]


def _kernels(backend: str | None):
    if backend in (None, "auto"):
        return _native or _fallback
    if backend == "native":
        if _native is None:
            raise RuntimeError("compiled kernels are not available")
        return _native
    if backend == "python":
        return _fallback
    raise ValueError(f"unknown backend {backend!r}")


def is_canonic_extension(ext: Iterable[int], new_ext: Iterable[int], g: int) -> bool:
    """True iff ``new_ext`` adds no object with an index below generator ``g``."""
    added = frozenset(new_ext) - frozenset(ext)
    return all(h >= g for h in added)


def cbo_generic(space, delta, first: int, last: int, emit_root: bool) -> list:
    """CbO over any description space; yields ``(extent_mask, intent)``."""
    if space.top is None:
        raise NoTop("Close-by-One is seeded with the top description")
    n = len(delta)
    leq, meet = space.leq, space.meet
    top = space.top
    root = mask_of(g for g in range(n) if leq(top, delta[g]))
    out = [(root, top)] if emit_root else []
    stack = [[root, top, first, last]]
    while stack:
        frame = stack[-1]
        ext, intent, j, lim = frame
        if j >= lim:
            stack.pop()
            continue
        frame[2] = j + 1
        if ext >> j & 1:
            continue
        new_int = meet(intent, delta[j])
        new = ext | (1 << j)
        ok = True
        for g in range(n):
            if g == j or ext >> g & 1:
                continue
            if leq(new_int, delta[g]):
                if g < j:
                    ok = False
                    break
                new |= 1 << g
        if ok:
            out.append((new, new_int))
            stack.append([new, new_int, j + 1, n])
    return out


def _interval_job(ps: PatternStructure, kern):
    n, k = len(ps.delta), ps.space.arity
    lo = np.empty((n, k))
    hi = np.empty((n, k))
    for g, d in enumerate(ps.delta):
        if d is TOP:
            lo[g], hi[g] = math.inf, -math.inf
        else:
            lo[g] = [a for a, _ in d]
            hi[g] = [b for _, b in d]

    def run(first, last, emit_root):
        return kern.cbo_intervals(lo, hi, first, last, emit_root)

    def decode(item):
        mask, ilo, ihi = item
        if ilo[0] > ihi[0]:
            return mask, TOP
        return mask, IntervalVector(zip(ilo, ihi))

    return run, decode


def _binary_job(ps: PatternStructure, kern):
    space: AttributeSetSpace = ps.space
    pos = {m: i for i, m in enumerate(space.attributes)}
    nattrs = len(space.attributes)
    mw = max(1, (nattrs + 63) // 64)
    rows = np.zeros((len(ps.delta), mw), dtype=np.uint64)
    for g, d in enumerate(ps.delta):
        for m in d:
            i = pos[m]
            rows[g, i >> 6] |= np.uint64(1 << (i & 63))

    def run(first, last, emit_root):
        return kern.cbo_binary(rows, nattrs, first, last, emit_root)

    def decode(item):
        mask, imask = item
        return mask, frozenset(space.attributes[i] for i in set_of(imask))

    return run, decode


def sort_concepts(concepts: Iterable[PatternConcept]) -> list[PatternConcept]:
    return sorted(concepts, key=PatternConcept.sort_key)


def close_by_one(ps: PatternStructure, threads: int = 1, backend: str | None = None) -> "ConceptSet":
    """All pattern concepts of ``ps``, each found exactly once.

    With ``threads > 1`` the subtrees below the root are explored in
    parallel; output order is fixed by the final sort either way.
    """
    n = len(ps.delta)
    space = ps.space
    if n == 0:
        return ConceptSet([PatternConcept(frozenset(), space.meet_all([]))])
    if type(space) is IntervalSpace and space.arity > 0:
        run, decode = _interval_job(ps, _kernels(backend))
    elif type(space) is AttributeSetSpace:
        run, decode = _binary_job(ps, _kernels(backend))
    else:
        def run(first, last, emit_root):
            return cbo_generic(space, ps.delta, first, last, emit_root)

        def decode(item):
            return item

    if threads <= 1:
        raw = run(0, n, True)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda j: run(j, j + 1, False), range(n)))
        raw = run(0, 0, True) + [item for part in parts for item in part]
    concepts = []
    for item in raw:
        mask, intent = decode(item)
        concepts.append(PatternConcept(set_of(mask), intent))
    return ConceptSet(sort_concepts(concepts))


def hasse(concepts: list[PatternConcept]) -> list[tuple[int, int]]:
    """Cover pairs ``(lower, upper)`` of the extent-inclusion order."""
    masks = [mask_of(c.extent) for c in concepts]
    order = sorted(range(len(masks)), key=lambda i: bin(masks[i]).count("1"))
    edges = []
    for pos, i in enumerate(order):
        mi = masks[i]
        found: list[int] = []
        for j in order[pos + 1:]:
            mj = masks[j]
            if mj == mi or mi & ~mj:
                continue
            # j is above i; it covers i unless it is above a cover already found
            if any(masks[c] & ~mj == 0 for c in found):
                continue
            found.append(j)
        edges.extend((i, j) for j in found)
    return sorted(edges)


@dataclass
class ConceptSet:
    """Pattern concepts sorted by ``(|extent|, extent)`` with their cover edges."""

    concepts: list[PatternConcept]
    _edges: list[tuple[int, int]] | None = field(default=None, repr=False)

    def __post_init__(self):
        extents = [c.extent for c in self.concepts]
        if len(set(extents)) != len(extents):
            raise ValueError("duplicate extents in concept set")

    def __len__(self):
        return len(self.concepts)

    def __iter__(self):
        return iter(self.concepts)

    def __getitem__(self, i):
        return self.concepts[i]

    @property
    def edges(self) -> list[tuple[int, int]]:
        if self._edges is None:
            self._edges = hasse(self.concepts)
        return self._edges

    def extents(self) -> set[frozenset]:
        return {c.extent for c in self.concepts}

    def intent_of(self, extent: Iterable[int]):
        extent = frozenset(extent)
        for c in self.concepts:
            if c.extent == extent:
                return c.intent
        raise KeyError(extent)

    def to_json(self, ps: PatternStructure, covers: bool = True) -> dict:
        out = {"concepts": [ps.concept_json(c) for c in self.concepts]}
        if covers:
            out["covers"] = [list(e) for e in self.edges]
        return out

    def to_dot(self, ps: PatternStructure) -> str:
        lines = ["digraph lattice {", "  rankdir=BT;", "  node [shape=box];"]
        for i, c in enumerate(self.concepts):
            ext = "{" + ",".join(ps.names(c.extent)) + "}"
            label = f"{ext}\\n{ps.space.render(c.intent)}".replace('"', '\\"')
            lines.append(f'  c{i} [label="{label}"];')
        for lo, up in self.edges:
            lines.append(f"  c{lo} -> c{up};")
        lines.append("}")
        return "\n".join(lines) + "\n"
