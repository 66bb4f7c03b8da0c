"""Pattern structures, their Galois connection and pattern concepts."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .descriptions import DescriptionSpace, read_interval_csv

__all__ = [
    "UnknownObject",
    "PatternStructure",
    "PatternConcept",
    "ext_to_int",
    "int_to_ext",
    "closure",
    "is_concept",
    "implication_holds",
    "mask_of",
    "set_of",
    "load_csv",
]


class UnknownObject(KeyError):
    pass


def mask_of(objs: Iterable[int]) -> int:
    m = 0
    for g in objs:
        m |= 1 << g
    return m


def set_of(mask: int) -> frozenset[int]:
    out = []
    g = 0
    while mask:
        if mask & 1:
            out.append(g)
        mask >>= 1
        g += 1
    return frozenset(out)


@dataclass(frozen=True)
class PatternConcept:
    """A closed pair. ``extent`` holds object indices."""

    extent: frozenset
    intent: Any

    def sort_key(self):
        return (len(self.extent), sorted(self.extent))


class PatternStructure:
    """Objects, a description space and the description of every object.

    Object sets throughout the package are frozensets of object *indices*
    (positions in ``objects``); use :meth:`objset` and :meth:`names` to
    translate from and to object names.
    """

    def __init__(self, objects: Sequence[str], space: DescriptionSpace, descriptions: Sequence):
        objects = tuple(str(g) for g in objects)
        if len(set(objects)) != len(objects):
            raise ValueError("object names must be unique")
        if len(descriptions) != len(objects):
            raise ValueError("one description per object required")
        self.objects = objects
        self.space = space
        self.delta = tuple(descriptions)
        self._pos = {g: i for i, g in enumerate(objects)}

    def __len__(self) -> int:
        return len(self.objects)

    def __repr__(self):
        return f"PatternStructure({len(self.objects)} objects, {self.space!r})"

    def objset(self, *names: str) -> frozenset[int]:
        try:
            return frozenset(self._pos[g] for g in names)
        except KeyError as exc:
            raise UnknownObject(exc.args[0]) from None

    def names(self, ext: Iterable[int]) -> list[str]:
        return [self.objects[g] for g in sorted(ext)]

    def description(self, g: str | int):
        if isinstance(g, str):
            if g not in self._pos:
                raise UnknownObject(g)
            g = self._pos[g]
        return self.delta[g]

    @property
    def all_objects(self) -> frozenset[int]:
        return frozenset(range(len(self.objects)))

    def _check(self, objs: Iterable[int]) -> frozenset[int]:
        objs = frozenset(objs)
        bad = [g for g in objs if not (isinstance(g, int) and 0 <= g < len(self.objects))]
        if bad:
            raise UnknownObject(bad[0])
        return objs

    def concept_json(self, c: PatternConcept) -> dict:
        return {"extent": self.names(c.extent), "intent": self.space.render(c.intent)}


def ext_to_int(ps: PatternStructure, objs: Iterable[int]):
    """Common description of a set of objects (empty set -> space top)."""
    objs = ps._check(objs)
    return ps.space.meet_all(ps.delta[g] for g in sorted(objs))


def int_to_ext(ps: PatternStructure, d) -> frozenset[int]:
    """Objects whose description subsumes ``d``."""
    leq = ps.space.leq
    return frozenset(g for g, dg in enumerate(ps.delta) if leq(d, dg))


def closure(ps: PatternStructure, objs: Iterable[int]) -> PatternConcept:
    d = ext_to_int(ps, objs)
    return PatternConcept(int_to_ext(ps, d), d)


def is_concept(ps: PatternStructure, c: PatternConcept) -> bool:
    ext = ps._check(c.extent)
    return ps.space.equal(ext_to_int(ps, ext), c.intent) and int_to_ext(ps, c.intent) == ext


def implication_holds(ps: PatternStructure, a, b) -> bool:
    """``a -> b``: every object described by ``a`` is also described by ``b``."""
    return int_to_ext(ps, a) <= int_to_ext(ps, b)


def load_csv(path: str | Path) -> PatternStructure:
    objects, space, descs = read_interval_csv(path)
    return PatternStructure(objects, space, descs)
