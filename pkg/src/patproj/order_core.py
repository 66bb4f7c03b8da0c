"""Finite explicit lattices given by a meet table.

Elements are arbitrary hashable values (strings when loaded from a file,
description objects when a lattice is materialised from a description space).
Internally every element gets a dense integer index following input order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "AxiomViolation",
    "UnknownElement",
    "FiniteLattice",
    "validate_lattice",
    "lattice_from_covers",
    "lattice_from_order",
    "load_lattice",
    "meet_all",
    "join_all",
    "leq",
]


class UnknownElement(KeyError):
    pass


class AxiomViolation(ValueError):
    """Raised when a meet table does not describe a lattice.

    ``violations`` is a list of ``(kind, witness)`` pairs, ``kind`` one of
    ``missing``, ``unknown``, ``idempotency``, ``commutativity``,
    ``associativity``, ``missing-top``, ``missing-bottom``, ``conflict``.
    """

    def __init__(self, violations: list[tuple[str, tuple]]):
        self.violations = violations
        kind, witness = violations[0]
        more = f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""
        super().__init__(f"{kind} violated at {witness!r}{more}")

    @property
    def kind(self) -> str:
        return self.violations[0][0]

    @property
    def witness(self) -> tuple:
        return self.violations[0][1]


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    """A validated finite lattice. Build it with :func:`validate_lattice`."""

    elements: tuple
    table: np.ndarray
    index: Mapping[Hashable, int] = field(repr=False)
    bottom: Any = None
    top: Any = None

    def __post_init__(self):
        self.table.setflags(write=False)
        n = len(self.elements)
        order = self.table == np.arange(n)[:, None]
        order.setflags(write=False)
        object.__setattr__(self, "_leq", order)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        try:
            return x in self.index
        except TypeError:
            return False

    def idx(self, x) -> int:
        try:
            return self.index[x]
        except (KeyError, TypeError):
            raise UnknownElement(x) from None

    @property
    def leq_matrix(self) -> np.ndarray:
        """Boolean matrix ``M[i, j] = elements[i] <= elements[j]``."""
        return self._leq

    def meet(self, a, b):
        return self.elements[self.table[self.idx(a), self.idx(b)]]

    def leq(self, a, b) -> bool:
        return bool(self._leq[self.idx(a), self.idx(b)])

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def meet_all(self, xs: Iterable) -> Any:
        idxs = [self.idx(x) for x in xs]
        if not idxs:
            return self.top
        return self.elements[reduce(lambda i, j: self.table[i, j], idxs)]

    def join_all(self, xs: Iterable) -> Any:
        idxs = [self.idx(x) for x in xs]
        if not idxs:
            return self.bottom
        upper = np.all(self._leq[idxs, :], axis=0)
        return self.meet_all(self.elements[i] for i in np.flatnonzero(upper))

    def join(self, a, b):
        return self.join_all((a, b))

    def down(self, x) -> list:
        """Elements below or equal to ``x``, in element order."""
        return [self.elements[i] for i in np.flatnonzero(self._leq[:, self.idx(x)])]

    def up(self, x) -> list:
        return [self.elements[i] for i in np.flatnonzero(self._leq[self.idx(x), :])]

    def covers(self) -> list[tuple]:
        """Cover pairs ``(lower, upper)`` of the Hasse diagram."""
        strict = self._leq & ~np.eye(len(self), dtype=bool)
        # i < j is a cover iff no k with i < k < j
        through = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
        cov = strict & ~through
        return [(self.elements[i], self.elements[j]) for i, j in zip(*np.nonzero(cov))]

    def to_json(self) -> dict:
        els = [str(e) for e in self.elements]
        n = len(els)
        triples = [
            [els[i], els[j], els[int(self.table[i, j])]]
            for i in range(n)
            for j in range(i, n)
        ]
        return {"elements": els, "meet": triples}


def _check_table(t: np.ndarray, elements: Sequence) -> list[tuple[str, tuple]]:
    n = len(elements)
    e = elements
    viol: list[tuple[str, tuple]] = []
    diag = np.flatnonzero(t[np.arange(n), np.arange(n)] != np.arange(n))
    viol += [("idempotency", (e[i],)) for i in diag]
    for i, j in zip(*np.nonzero(t != t.T)):
        if i < j:
            viol.append(("commutativity", (e[i], e[j])))
    if viol:
        return viol
    for a in range(n):
        # (a ^ b) ^ c  vs  a ^ (b ^ c) for all b, c
        left = t[t[a, :], :]
        right = t[a, t]
        bad = np.argwhere(left != right)
        if len(bad):
            b, c = bad[0]
            viol.append(("associativity", (e[a], e[b], e[c])))
            return viol
    bottoms = [i for i in range(n) if np.all(t[i, :] == i)]
    tops = [i for i in range(n) if np.all(t[i, :] == np.arange(n))]
    if not bottoms:
        viol.append(("missing-bottom", ()))
    if not tops:
        viol.append(("missing-top", ()))
    return viol


def _build(elements: Sequence, table: np.ndarray) -> FiniteLattice:
    elements = tuple(elements)
    viol = _check_table(table, elements)
    if viol:
        raise AxiomViolation(viol)
    n = len(elements)
    bottom = next(i for i in range(n) if np.all(table[i, :] == i))
    top = next(i for i in range(n) if np.all(table[i, :] == np.arange(n)))
    return FiniteLattice(
        elements=elements,
        table=table,
        index={x: i for i, x in enumerate(elements)},
        bottom=elements[bottom],
        top=elements[top],
    )


def validate_lattice(
    elements: Sequence,
    meet: Callable[[Any, Any], Any] | Iterable[Sequence] | Mapping,
) -> FiniteLattice:
    """Validate a meet operation on ``elements`` and return the lattice.

    ``meet`` is a binary function, a mapping ``(a, b) -> c`` or an iterable
    of ``(a, b, c)`` triples. With triples or a mapping, a pair given in one
    direction only is completed by symmetry and a missing ``(a, a)`` defaults
    to ``a``; any other gap is a ``missing`` violation.
    """
    if len(elements) == 0:
        raise ValueError("a lattice needs at least one element")
    elements = tuple(elements)
    index = {x: i for i, x in enumerate(elements)}
    if len(index) != len(elements):
        raise ValueError("duplicate element ids")
    n = len(elements)

    def resolve(x):
        if x in index:
            return index[x]
        if isinstance(x, int) and not isinstance(x, bool) and 0 <= x < n:
            return x
        raise AxiomViolation([("unknown", (x,))])

    table = np.full((n, n), -1, dtype=np.int64)
    if callable(meet):
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                c = meet(a, b)
                if c not in index:
                    raise AxiomViolation([("unknown", (a, b, c))])
                table[i, j] = index[c]
        return _build(elements, table)

    triples = meet.items() if isinstance(meet, Mapping) else meet
    given = np.zeros((n, n), dtype=bool)
    viol = []
    for entry in triples:
        if isinstance(meet, Mapping):
            (a, b), c = entry
        else:
            a, b, c = entry
        i, j, k = resolve(a), resolve(b), resolve(c)
        if given[i, j] and table[i, j] != k:
            viol.append(("conflict", (elements[i], elements[j])))
        table[i, j] = k
        given[i, j] = True
    if viol:
        raise AxiomViolation(viol)
    for i in range(n):
        for j in range(n):
            if given[i, j]:
                if i < j and given[j, i] and table[i, j] != table[j, i]:
                    viol.append(("commutativity", (elements[i], elements[j])))
                continue
            if given[j, i]:
                table[i, j] = table[j, i]
            elif i == j:
                table[i, i] = i
            else:
                viol.append(("missing", (elements[i], elements[j])))
    if viol:
        raise AxiomViolation(viol)
    return _build(elements, table)


def lattice_from_order(elements: Sequence, leq_fn: Callable[[Any, Any], bool]) -> FiniteLattice:
    """Lattice from a partial order: meets are greatest lower bounds."""
    elements = tuple(elements)
    n = len(elements)
    le = np.array([[bool(leq_fn(a, b)) for b in elements] for a in elements])
    table = np.full((n, n), -1, dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            lower = np.flatnonzero(le[:, i] & le[:, j])
            greatest = [k for k in lower if np.all(le[lower, k])]
            if len(greatest) != 1:
                raise AxiomViolation([("missing", (elements[i], elements[j]))])
            table[i, j] = table[j, i] = greatest[0]
    return _build(elements, table)


def lattice_from_covers(elements: Sequence, covers: Iterable[Sequence]) -> FiniteLattice:
    """Compile a cover relation ``(lower, upper)`` into a meet table."""
    elements = tuple(elements)
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    reach = np.eye(n, dtype=bool)
    for lo, hi in covers:
        if lo not in index or hi not in index:
            raise AxiomViolation([("unknown", (lo, hi))])
        reach[index[lo], index[hi]] = True
    for k in range(n):  # Warshall
        reach |= reach[:, [k]] & reach[[k], :]
    if np.any(reach & reach.T & ~np.eye(n, dtype=bool)):
        i, j = np.argwhere(reach & reach.T & ~np.eye(n, dtype=bool))[0]
        raise AxiomViolation([("antisymmetry", (elements[i], elements[j]))])
    return lattice_from_order(elements, lambda a, b: reach[index[a], index[b]])


def load_lattice(source: str | Path | Mapping) -> FiniteLattice:
    """Load the JSON lattice format (``meet`` triples or ``covers`` pairs)."""
    if isinstance(source, Mapping):
        data = source
    else:
        data = json.loads(Path(source).read_text())
    if "meet" in data and "covers" in data:
        raise ValueError("lattice file gives both 'meet' and 'covers'")
    elements = data["elements"]
    if "covers" in data:
        return lattice_from_covers(elements, data["covers"])
    if "meet" in data:
        return validate_lattice(elements, data["meet"])
    raise ValueError("lattice file needs 'meet' or 'covers'")


def meet_all(lat: FiniteLattice, xs: Iterable):
    return lat.meet_all(xs)


def join_all(lat: FiniteLattice, xs: Iterable):
    return lat.join_all(xs)


def leq(lat: FiniteLattice, a, b) -> bool:
    return lat.leq(a, b)
