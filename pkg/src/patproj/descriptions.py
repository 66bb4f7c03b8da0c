"""Description spaces: meet-semilattices that pattern structures draw from.

Three concrete spaces are provided:

* :class:`IntervalSpace` -- tuples of closed intervals with the convex hull
  as similarity, plus an adjoined :data:`TOP` that no real vector reaches;
* :class:`AttributeSetSpace` -- ``(powerset(M), intersection)``, i.e. plain
  FCA written as a pattern structure;
* :class:`ExplicitSpace` -- the elements of a :class:`FiniteLattice`.
"""

from __future__ import annotations

import csv
import io
import math
from abc import ABC, abstractmethod
from functools import reduce
from pathlib import Path
from typing import Any, Iterable, Sequence

from .order_core import FiniteLattice, UnknownElement

__all__ = [
    "TOP",
    "NoTop",
    "ArityMismatch",
    "UniverseMismatch",
    "DescriptionSpace",
    "IntervalVector",
    "IntervalSpace",
    "AttributeSetSpace",
    "ExplicitSpace",
    "interval_meet",
    "interval_leq",
    "set_meet",
    "aggregated_size",
    "parse_interval_cell",
    "read_interval_csv",
    "format_number",
]


class NoTop(ValueError):
    """The space has no top element, so the empty meet is undefined."""


class ArityMismatch(ValueError):
    pass


class UniverseMismatch(ValueError):
    pass


class _Top:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TOP"

    def __reduce__(self):
        return (_Top, ())


TOP = _Top()


class DescriptionSpace(ABC):
    """A meet-semilattice of descriptions.

    Subclasses implement :meth:`meet`; the natural order defaults to
    ``leq(a, b) <=> meet(a, b) == a`` but is usually overridden by a
    cheaper direct test.
    """

    top: Any = None
    bottom: Any = None

    @abstractmethod
    def meet(self, a, b): ...

    def leq(self, a, b) -> bool:
        return self.equal(self.meet(a, b), a)

    def equal(self, a, b) -> bool:
        return a == b

    def meet_all(self, ds: Iterable):
        ds = list(ds)
        if not ds:
            if self.top is None:
                raise NoTop(f"{type(self).__name__} has no top element")
            return self.top
        return reduce(self.meet, ds)

    def render(self, d) -> str:
        return str(d)

    def parse(self, text: str):
        raise NotImplementedError


def format_number(x: float) -> str:
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


class IntervalVector(tuple):
    """Fixed-length tuple of ``(lo, hi)`` pairs with ``lo <= hi``."""

    def __new__(cls, components: Iterable[Sequence[float]]):
        pairs = []
        for comp in components:
            lo, hi = (float(v) for v in comp)
            if math.isnan(lo) or math.isnan(hi):
                raise ValueError("NaN is not a valid interval endpoint")
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
            pairs.append((lo, hi))
        return super().__new__(cls, pairs)

    @classmethod
    def points(cls, values: Iterable[float]) -> "IntervalVector":
        return cls((v, v) for v in values)

    def __repr__(self):
        return render_interval(self)


def render_interval(d) -> str:
    if d is TOP:
        return "TOP"
    return "<" + ";".join(f"[{format_number(lo)},{format_number(hi)}]" for lo, hi in d) + ">"


def interval_meet(a, b):
    """Component-wise convex hull; :data:`TOP` is neutral."""
    if a is TOP:
        return b
    if b is TOP:
        return a
    if len(a) != len(b):
        raise ArityMismatch(f"{len(a)} != {len(b)}")
    return IntervalVector(
        (min(alo, blo), max(ahi, bhi)) for (alo, ahi), (blo, bhi) in zip(a, b)
    )


def interval_leq(a, b) -> bool:
    """``a`` is subsumed by ``b``: every interval of ``a`` contains ``b``'s."""
    if b is TOP:
        return True
    if a is TOP:
        return False
    if len(a) != len(b):
        raise ArityMismatch(f"{len(a)} != {len(b)}")
    return all(alo <= blo and bhi <= ahi for (alo, ahi), (blo, bhi) in zip(a, b))


def aggregated_size(d) -> float:
    """Sum of interval lengths; infinite as soon as one endpoint is."""
    if d is TOP:
        return 0.0
    total = 0.0
    for lo, hi in d:
        if math.isinf(lo) or math.isinf(hi):
            return math.inf
        total += hi - lo
    return total


def _parse_float(text: str) -> float:
    t = text.strip().lower()
    if t in ("+inf", "inf", "+infinity", "infinity"):
        return math.inf
    if t in ("-inf", "-infinity"):
        return -math.inf
    v = float(t)
    if math.isnan(v):
        raise ValueError("NaN is not a valid interval endpoint")
    return v


def parse_interval_cell(text: str) -> tuple[float, float]:
    """``"v"`` reads as ``[v, v]``, ``"lo:hi"`` as ``[lo, hi]``."""
    text = text.strip()
    if ":" in text:
        lo, hi = text.split(":", 1)
        lo, hi = _parse_float(lo), _parse_float(hi)
    else:
        lo = hi = _parse_float(text)
    if lo > hi:
        raise ValueError(f"empty interval {text!r}")
    return lo, hi


class IntervalSpace(DescriptionSpace):
    def __init__(self, attributes: int | Sequence[str]):
        if isinstance(attributes, int):
            attributes = [f"m{i + 1}" for i in range(attributes)]
        self.attributes = tuple(attributes)
        self.arity = len(self.attributes)
        self.top = TOP
        self.bottom = IntervalVector([(-math.inf, math.inf)] * self.arity)

    def __eq__(self, other):
        return type(other) is IntervalSpace and other.attributes == self.attributes

    def __hash__(self):
        return hash(("intervals", self.attributes))

    def __repr__(self):
        return f"IntervalSpace({list(self.attributes)!r})"

    def _check(self, d):
        if d is not TOP and len(d) != self.arity:
            raise ArityMismatch(f"expected arity {self.arity}, got {len(d)}")

    def meet(self, a, b):
        self._check(a)
        self._check(b)
        return interval_meet(a, b)

    def leq(self, a, b) -> bool:
        self._check(a)
        self._check(b)
        return interval_leq(a, b)

    def render(self, d) -> str:
        return render_interval(d)

    def parse(self, text: str):
        text = text.strip()
        if text == "TOP":
            return TOP
        if not (text.startswith("<") and text.endswith(">")):
            raise ValueError(f"not an interval vector: {text!r}")
        comps = []
        for part in text[1:-1].split(";"):
            lo, hi = part.strip().strip("[]").split(",")
            comps.append((_parse_float(lo), _parse_float(hi)))
        d = IntervalVector(comps)
        self._check(d)
        return d

    def vector(self, *components) -> IntervalVector:
        """Convenience: ``space.vector((1, 2), 3)`` -> ``<[1,2];[3,3]>``."""
        comps = [(c, c) if not isinstance(c, (tuple, list)) else c for c in components]
        d = IntervalVector(comps)
        self._check(d)
        return d


class AttributeSetSpace(DescriptionSpace):
    """``(powerset(M), intersection)`` over a fixed, ordered universe."""

    def __init__(self, attributes: Sequence[str]):
        self.attributes = tuple(attributes)
        self._universe = frozenset(self.attributes)
        if len(self._universe) != len(self.attributes):
            raise ValueError("duplicate attribute names")
        self._order = {m: i for i, m in enumerate(self.attributes)}
        self.top = self._universe
        self.bottom = frozenset()

    def __eq__(self, other):
        return type(other) is AttributeSetSpace and other.attributes == self.attributes

    def __hash__(self):
        return hash(("sets", self.attributes))

    def __repr__(self):
        return f"AttributeSetSpace({list(self.attributes)!r})"

    def _check(self, d):
        if not d <= self._universe:
            raise UniverseMismatch(f"{set(d - self._universe)} not in universe")

    def make(self, attrs: Iterable[str]) -> frozenset:
        d = frozenset(attrs)
        self._check(d)
        return d

    def meet(self, a, b):
        self._check(a)
        self._check(b)
        return a & b

    def leq(self, a, b) -> bool:
        return a <= b

    def sorted(self, d) -> list[str]:
        return sorted(d, key=self._order.__getitem__)

    def render(self, d) -> str:
        return "{" + ",".join(self.sorted(d)) + "}"

    def parse(self, text: str):
        text = text.strip().strip("{}")
        return self.make(p.strip() for p in text.split(",") if p.strip())


def set_meet(a: frozenset, b: frozenset, universe: Iterable[str] | None = None) -> frozenset:
    if universe is not None:
        u = frozenset(universe)
        if not (a <= u and b <= u):
            raise UniverseMismatch("operands leave the universe")
    return frozenset(a) & frozenset(b)


class ExplicitSpace(DescriptionSpace):
    """Elements of a finite lattice used directly as descriptions."""

    def __init__(self, lattice: FiniteLattice):
        self.lattice = lattice
        self.top = lattice.top
        self.bottom = lattice.bottom

    def __repr__(self):
        return f"ExplicitSpace(<{len(self.lattice)} elements>)"

    def meet(self, a, b):
        return self.lattice.meet(a, b)

    def leq(self, a, b) -> bool:
        return self.lattice.leq(a, b)

    def parse(self, text: str):
        for e in self.lattice.elements:
            if str(e) == text:
                return e
        raise UnknownElement(text)


def read_interval_csv(source: str | Path | io.TextIOBase):
    """Read a numeric CSV into ``(object names, IntervalSpace, descriptions)``.

    The header row names the attributes. When its first cell is empty or
    ``object``, the first column holds object names; otherwise objects are
    named ``g1 .. gn``.
    """
    if isinstance(source, io.TextIOBase):
        text = source.read()
    else:
        text = Path(source).read_text()
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ValueError("empty CSV")
    header = [h.strip() for h in rows[0]]
    named = header[0].lower() in ("", "object", "objects", "id")
    attrs = header[1:] if named else header
    space = IntervalSpace(attrs)
    objects, descs = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        cells = row[1:] if named else row
        if len(cells) != len(attrs):
            raise ValueError(f"line {lineno}: expected {len(attrs)} cells, got {len(cells)}")
        try:
            descs.append(IntervalVector(parse_interval_cell(c) for c in cells))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        objects.append(row[0].strip() if named else f"g{lineno - 1}")
    return objects, space, descs
