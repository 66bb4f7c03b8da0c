"""Kernel operators (projections), o-projected pattern structures and the
semilattice of projections.

A kernel is *intensional* when it is just a function on descriptions and
*extensional* when it is tabulated over a :class:`FiniteLattice`. Only the
extensional form can be validated exhaustively; intensional kernels on
infinite spaces are sample-verified.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Callable, Iterable, Mapping, Sequence

from .descriptions import (
    TOP,
    AttributeSetSpace,
    DescriptionSpace,
    IntervalSpace,
    IntervalVector,
    aggregated_size,
)
from .order_core import FiniteLattice, validate_lattice
from .pattern import PatternStructure

__all__ = [
    "InvalidKernel",
    "NotJoinClosed",
    "MissingBottom",
    "NotComparable",
    "KernelOperator",
    "KernelReport",
    "ProjectedSpace",
    "validate_kernel",
    "o_project",
    "projected_meet",
    "kernel_from_fixed_point",
    "fixed_point",
    "proj_leq",
    "factor_projection",
    "proj_meet",
    "fold_kernels",
    "aggregated_length_kernel",
    "powerset_kernel",
    "check_old_projection_condition",
    "join_closure_violation",
    "intent_lattice",
    "interval_grid_lattice",
    "powerset_lattice",
]


class InvalidKernel(ValueError):
    def __init__(self, report: "KernelReport"):
        self.report = report
        super().__init__(f"not a kernel operator: {report.violations[0]}")


class NotJoinClosed(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"join of {witness!r} leaves the set")


class MissingBottom(ValueError):
    pass


class NotComparable(ValueError):
    pass


class KernelOperator:
    """A projection ``psi``; call it on a description.

    ``table`` is set for extensional kernels (every element of ``lattice``
    mapped). ``name`` is only used for display.
    """

    def __init__(
        self,
        fn: Callable[[Any], Any] | None = None,
        *,
        lattice: FiniteLattice | None = None,
        table: Mapping | None = None,
        name: str = "psi",
    ):
        if fn is None and table is None:
            raise ValueError("need a function or a table")
        self.lattice = lattice
        self.table = dict(table) if table is not None else None
        self._fn = fn
        self.name = name

    @classmethod
    def from_mapping(cls, lattice: FiniteLattice, mapping: Mapping, name: str = "psi"):
        missing = [e for e in lattice.elements if e not in mapping]
        if missing:
            raise ValueError(f"mapping undefined on {missing[:3]!r}")
        return cls(lattice=lattice, table={e: mapping[e] for e in lattice.elements}, name=name)

    @classmethod
    def identity(cls, lattice: FiniteLattice | None = None):
        if lattice is None:
            return cls(lambda d: d, name="id")
        return cls.from_mapping(lattice, {e: e for e in lattice}, name="id")

    def __call__(self, d):
        if self.table is not None:
            try:
                return self.table[d]
            except KeyError:
                if self._fn is None:
                    raise
        return self._fn(d)

    def tabulate(self, lattice: FiniteLattice) -> "KernelOperator":
        """Restrict to the elements of ``lattice`` (images must stay inside)."""
        table = {e: self(e) for e in lattice.elements}
        outside = [v for v in table.values() if v not in lattice]
        if outside:
            raise ValueError(f"kernel leaves the lattice: {outside[0]!r}")
        return KernelOperator(lattice=lattice, table=table, name=self.name)

    def __repr__(self):
        kind = "extensional" if self.table is not None else "intensional"
        return f"KernelOperator({self.name!r}, {kind})"


@dataclass
class KernelReport:
    valid: bool
    exhaustive: bool
    checked: int
    violations: list[tuple[str, tuple]] = field(default_factory=list)

    def __bool__(self):
        return self.valid


def _kernel_violations(k, elements, leq, limit=None):
    viol = []
    images = {}
    for x in elements:
        px = k(x)
        images[x] = px
        if not leq(px, x):
            viol.append(("contractive", (x, px)))
        elif k(px) != px:
            viol.append(("idempotent", (x, px, k(px))))
    for x, y in itertools.permutations(elements, 2) if limit is None else limit:
        if leq(x, y) and not leq(images[x], images[y]):
            viol.append(("monotone", (x, y)))
    return viol


def _sample_intervals(space: IntervalSpace, rng: random.Random):
    vals = [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0, 5.0, -math.inf, math.inf]
    comps = []
    for _ in range(space.arity):
        a, b = rng.choice(vals), rng.choice(vals)
        if a > b:
            a, b = b, a
        comps.append((a, b))
    return IntervalVector(comps)


def validate_kernel(
    k: KernelOperator,
    lattice: FiniteLattice | None = None,
    space: DescriptionSpace | None = None,
    samples: int = 10_000,
    seed: int = 0,
    sampler: Callable[[random.Random], Any] | None = None,
) -> KernelReport:
    """Check monotone / contractive / idempotent.

    Exhaustive over ``lattice`` (defaults to ``k.lattice``); otherwise
    ``samples`` comparable pairs ``(x meet y, x)`` drawn from ``space``.
    """
    lattice = lattice or k.lattice
    if lattice is not None:
        elements = list(lattice.elements)
        for e in elements:
            if k(e) not in lattice:
                return KernelReport(False, True, len(elements), [("closed", (e, k(e)))])
        viol = _kernel_violations(k, elements, lattice.leq)
        return KernelReport(not viol, True, len(elements), viol)
    if space is None:
        raise ValueError("an intensional kernel needs a space to sample from")
    if sampler is None:
        if not isinstance(space, IntervalSpace):
            raise ValueError(f"no default sampler for {space!r}")
        sampler = lambda r: _sample_intervals(space, r)  # noqa: E731
    rng = random.Random(seed)
    pool = [sampler(rng) for _ in range(200)]
    if space.top is not None:
        pool.append(space.top)
    if space.bottom is not None:
        pool.append(space.bottom)
    pairs = []
    for _ in range(samples):
        x, y = rng.choice(pool), rng.choice(pool)
        pairs.append((space.meet(x, y), x))
    elements = list(dict.fromkeys(pool + [p for p, _ in pairs]))
    viol = _kernel_violations(k, elements, space.leq, limit=pairs)
    return KernelReport(not viol, False, len(pairs), viol)


class ProjectedSpace(DescriptionSpace):
    """Fixed point of ``kernel`` with meet ``psi(x meet y)``."""

    def __init__(self, base: DescriptionSpace, kernel: KernelOperator):
        self.base = base
        self.kernel = kernel
        self.top = kernel(base.top) if base.top is not None else None
        self.bottom = base.bottom

    def __repr__(self):
        return f"ProjectedSpace({self.base!r}, {self.kernel.name!r})"

    def meet(self, a, b):
        return self.kernel(self.base.meet(a, b))

    def leq(self, a, b) -> bool:
        return self.base.leq(a, b)

    def contains(self, d) -> bool:
        return self.kernel(d) == d

    def render(self, d) -> str:
        return self.base.render(d)

    def parse(self, text: str):
        return self.base.parse(text)


def projected_meet(space: ProjectedSpace, x, y):
    return space.meet(x, y)


def o_project(ps: PatternStructure, k: KernelOperator, validate: bool = True) -> PatternStructure:
    """``(G, (psi(D), meet_psi), psi . delta)``.

    Extensional kernels are validated exhaustively; intensional ones are
    trusted here (run :func:`validate_kernel` to sample-check them).
    """
    if validate and k.lattice is not None:
        report = validate_kernel(k)
        if not report:
            raise InvalidKernel(report)
    space = ProjectedSpace(ps.space, k)
    return PatternStructure(ps.objects, space, [k(d) for d in ps.delta])


def join_closure_violation(lattice: FiniteLattice, subset: Iterable) -> tuple | None:
    """First pair whose join leaves ``subset`` (pairs plus the empty join)."""
    s = set(subset)
    if lattice.bottom not in s:
        return ()
    items = [e for e in lattice.elements if e in s]
    for a, b in itertools.combinations(items, 2):
        if lattice.join(a, b) not in s:
            return (a, b)
    return None


def kernel_from_fixed_point(lattice: FiniteLattice, subset: Iterable, name: str = "psi") -> KernelOperator:
    """The projection whose fixed point is ``subset``.

    Elements outside map to the join of the fixed elements strictly below.
    """
    s = set(subset)
    unknown = [e for e in s if e not in lattice]
    if unknown:
        raise ValueError(f"not lattice elements: {unknown!r}")
    if lattice.bottom not in s:
        raise MissingBottom(f"bottom {lattice.bottom!r} not in the fixed-point set")
    bad = join_closure_violation(lattice, s)
    if bad is not None:
        raise NotJoinClosed(bad)
    table = {}
    for d in lattice.elements:
        if d in s:
            table[d] = d
        else:
            table[d] = lattice.join_all(x for x in s if lattice.lt(x, d))
    return KernelOperator(lattice=lattice, table=table, name=name)


def fixed_point(k: KernelOperator, lattice: FiniteLattice | None = None) -> frozenset:
    lattice = lattice or k.lattice
    return frozenset(e for e in lattice.elements if k(e) == e)


def proj_leq(k1: KernelOperator, k2: KernelOperator, lattice: FiniteLattice | None = None) -> bool:
    lattice = lattice or k1.lattice or k2.lattice
    return fixed_point(k1, lattice) <= fixed_point(k2, lattice)


def _sublattice(lattice: FiniteLattice, elements: Iterable, meet) -> FiniteLattice:
    elements = [e for e in lattice.elements if e in set(elements)]
    return validate_lattice(elements, meet)


def factor_projection(k1: KernelOperator, k2: KernelOperator, lattice: FiniteLattice | None = None) -> KernelOperator:
    """``psi`` on ``psi2(D)`` with ``psi1 = psi . psi2``."""
    lattice = lattice or k1.lattice or k2.lattice
    if not proj_leq(k1, k2, lattice):
        raise NotComparable(f"{k1.name} is not below {k2.name}")
    fp2 = fixed_point(k2, lattice)
    sub = _sublattice(lattice, fp2, lambda a, b: k2(lattice.meet(a, b)))
    psi = KernelOperator.from_mapping(sub, {d: k1(d) for d in sub.elements}, name=f"{k1.name}/{k2.name}")
    for d in lattice.elements:
        if psi(k2(d)) != k1(d):
            raise AssertionError(f"composition fails at {d!r}")
    report = validate_kernel(psi)
    if not report:
        raise InvalidKernel(report)
    return psi


def proj_meet(k1: KernelOperator, k2: KernelOperator, lattice: FiniteLattice | None = None) -> KernelOperator:
    lattice = lattice or k1.lattice or k2.lattice
    common = fixed_point(k1, lattice) & fixed_point(k2, lattice)
    return kernel_from_fixed_point(lattice, common, name=f"({k1.name} ^ {k2.name})")


def fold_kernels(kernels: Sequence[KernelOperator], lattice: FiniteLattice | None = None) -> KernelOperator:
    if not kernels:
        raise ValueError("no kernels to fold")
    if len(kernels) == 1:
        return kernels[0]
    return reduce(lambda a, b: proj_meet(a, b, lattice), kernels)


def aggregated_length_kernel(threshold: float, arity: int) -> KernelOperator:
    """Keep interval patterns whose total length is below ``threshold``;
    send every other pattern to the bottom ``<[-inf,+inf];...>``."""
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    bottom = IntervalVector([(-math.inf, math.inf)] * arity)

    def psi(d):
        if d is TOP:
            return TOP
        return d if aggregated_size(d) < threshold else bottom

    k = KernelOperator(psi, name=f"al={threshold:g}")
    k.threshold = threshold
    return k


def powerset_kernel(space: AttributeSetSpace, fixed: Iterable[Iterable[str]], name: str = "psi") -> KernelOperator:
    """Kernel on ``(powerset(M), intersection)`` with the given fixed sets.

    The fixed family must contain the empty set and be closed under union;
    then ``psi(d)`` is the union of the fixed sets inside ``d``.
    """
    family = {space.make(s) for s in fixed}
    if frozenset() not in family:
        raise MissingBottom("the empty set must be fixed")
    for a, b in itertools.combinations(family, 2):
        if a | b not in family:
            raise NotJoinClosed((a, b))
    members = sorted(family, key=len)

    def psi(d):
        out = frozenset()
        for s in members:
            if s <= d:
                out |= s
        return out

    return KernelOperator(psi, name=name)


def check_old_projection_condition(k: KernelOperator, lattice: FiniteLattice | None = None) -> bool:
    """``x < y`` and ``psi(y) = y`` imply ``psi(x) = x``."""
    lattice = lattice or k.lattice
    fixed = fixed_point(k, lattice)
    return all(
        x in fixed for y in fixed for x in lattice.elements if lattice.lt(x, y)
    )


def intent_lattice(ps: PatternStructure, with_bottom: bool = True) -> FiniteLattice:
    """All pattern intents (plus the space bottom) as an explicit lattice."""
    from .cbo import close_by_one

    intents = [c.intent for c in close_by_one(ps)]
    if with_bottom and ps.space.bottom is not None and ps.space.bottom not in intents:
        intents.insert(0, ps.space.bottom)
    return validate_lattice(intents, ps.space.meet)


def interval_grid_lattice(space: IntervalSpace, grids: Sequence[Sequence[float]]) -> FiniteLattice:
    """Interval vectors with endpoints on per-attribute grids, plus the
    space bottom and TOP. Closed under the convex hull."""
    if len(grids) != space.arity:
        raise ValueError("one grid per attribute")
    per_attr = []
    for grid in grids:
        vals = sorted(set(float(v) for v in grid))
        per_attr.append([(a, b) for i, a in enumerate(vals) for b in vals[i:]])
    elements = [space.bottom]
    elements += [IntervalVector(c) for c in itertools.product(*per_attr)]
    elements.append(TOP)
    return validate_lattice(elements, space.meet)


def powerset_lattice(space: AttributeSetSpace) -> FiniteLattice:
    attrs = space.attributes
    elements = [
        frozenset(c) for r in range(len(attrs) + 1) for c in itertools.combinations(attrs, r)
    ]
    return validate_lattice(elements, space.meet)
