"""Brute-force ground truth and property runner.

Nothing here calls the Close-by-One engine to obtain the answer it is meant
to check: concepts come from closing every object subset, kernels from a
search over the three kernel axioms, lattices from enumerating orders.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

from .cbo import BACKEND, ConceptSet, close_by_one, sort_concepts
from .descriptions import ExplicitSpace, IntervalSpace, IntervalVector
from .order_core import FiniteLattice, lattice_from_order, validate_lattice
from .pattern import PatternStructure, closure, implication_holds, int_to_ext, ext_to_int
from .projections import (
    KernelOperator,
    fixed_point,
    intent_lattice,
    kernel_from_fixed_point,
    o_project,
    proj_leq,
    proj_meet,
    projected_meet,
    validate_kernel,
)
from .representation import (
    FormalContext,
    context_concepts,
    minimal_representation_context,
    projection_from_context,
    simpler_than,
    verify_representation,
)

__all__ = [
    "OracleGuardError",
    "OracleReport",
    "brute_force_concepts",
    "enumerate_kernel_operators",
    "join_closed_subsets",
    "enumerate_lattices",
    "random_instance",
    "random_kernel",
    "PROPERTIES",
    "run_property",
]

MAX_OBJECTS = 20
MAX_KERNEL_LATTICE = 7


class OracleGuardError(ValueError):
    """Instance too large for exhaustive enumeration."""


@dataclass
class OracleReport:
    property: str
    instance: str
    passed: bool
    counterexample: Any = None

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "instance": self.instance,
            "pass": self.passed,
            "counterexample": self.counterexample,
        }


def brute_force_concepts(ps: PatternStructure) -> ConceptSet:
    """Close every subset of objects and keep the distinct results."""
    n = len(ps.objects)
    if n > MAX_OBJECTS:
        raise OracleGuardError(f"{n} objects > {MAX_OBJECTS}")
    found = {}
    for r in range(n + 1):
        for subset in itertools.combinations(range(n), r):
            c = closure(ps, subset)
            found.setdefault(c.extent, c)
    return ConceptSet(sort_concepts(found.values()))


def enumerate_kernel_operators(lat: FiniteLattice) -> list[KernelOperator]:
    """Every monotone, contractive, idempotent self-map of ``lat``."""
    n = len(lat)
    if n > MAX_KERNEL_LATTICE:
        raise OracleGuardError(f"{n} elements > {MAX_KERNEL_LATTICE}")
    le = lat.leq_matrix
    # linear extension: everything below an element comes before it
    order = sorted(range(n), key=lambda i: int(le[:, i].sum()))
    below = [[j for j in range(n) if le[j, i]] for i in range(n)]
    psi = [-1] * n
    out = []

    def assign(pos):
        if pos == n:
            table = {lat.elements[i]: lat.elements[psi[i]] for i in range(n)}
            out.append(KernelOperator.from_mapping(lat, table))
            return
        e = order[pos]
        for cand in below[e]:
            if cand != e and psi[cand] != cand:
                continue  # idempotent
            if any(not le[psi[x], cand] for x in below[e] if x != e):
                continue  # monotone
            psi[e] = cand
            assign(pos + 1)
        psi[e] = -1

    assign(0)
    return out


def join_closed_subsets(lat: FiniteLattice, pairwise: bool = True) -> list[frozenset]:
    """Subsets containing bottom and closed under joins.

    ``pairwise=False`` checks the join of every sub-subset instead of pairs.
    """
    n = len(lat)
    if n > 16:
        raise OracleGuardError(f"{n} elements > 16")
    els = lat.elements
    others = [e for e in els if e != lat.bottom]
    out = []
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            s = frozenset(combo) | {lat.bottom}
            if pairwise:
                ok = all(lat.join(a, b) in s for a, b in itertools.combinations(combo, 2))
            else:
                ok = all(
                    lat.join_all(x) in s
                    for k in range(len(combo) + 1)
                    for x in itertools.combinations(combo, k)
                )
            if ok:
                out.append(s)
    return out


def enumerate_lattices(size: int) -> list[FiniteLattice]:
    """All lattices with ``size`` elements up to isomorphism.

    Elements are ``bot``, ``a``, ``b``, ... , ``top``.
    """
    if size < 1:
        return []
    if size == 1:
        return [validate_lattice(["bot"], [("bot", "bot", "bot")])]
    k = size - 2
    mids = [chr(ord("a") + i) for i in range(k)]
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    seen = set()
    out = []
    for r in range(len(pairs) + 1):
        for rel in itertools.combinations(pairs, r):
            rel = set(rel)
            if any((i, j) in rel and (j, l) in rel and (i, l) not in rel
                   for i, j in rel for l in range(k)):
                continue
            canon = min(
                tuple(sorted((p[i], p[j]) for i, j in rel))
                for p in itertools.permutations(range(k))
            )
            if canon in seen:
                continue
            names = ["bot"] + mids + ["top"]

            def leq(x, y, rel=rel):
                if x == y or x == "bot" or y == "top":
                    return True
                if x == "top" or y == "bot":
                    return False
                return (mids.index(x), mids.index(y)) in rel

            try:
                lat = lattice_from_order(names, leq)
            except ValueError:
                continue
            seen.add(canon)
            out.append(lat)
    return out


# -- random instances ------------------------------------------------------------

def _closure_system_lattice(rng: random.Random, ground: int, n_sets: int) -> FiniteLattice:
    letters = [chr(ord("a") + i) for i in range(ground)]
    family = {frozenset(letters)}
    for _ in range(n_sets):
        family.add(frozenset(x for x in letters if rng.random() < 0.5))
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(family), 2):
            if a & b not in family:
                family.add(a & b)
                changed = True
    label = {s: "{" + ",".join(sorted(s)) + "}" for s in family}
    back = {v: k for k, v in label.items()}
    elements = sorted(label.values(), key=lambda t: (len(back[t]), t))
    return validate_lattice(elements, lambda x, y: label[back[x] & back[y]])


def random_instance(seed: int, kind: str, **params):
    """Deterministic random instance.

    ``kind`` is ``context`` (``objects``, ``attributes``, ``density``),
    ``intervals`` (``objects``, ``arity``, ``values``), ``sets`` (a context
    wrapped as a pattern structure), ``lattice`` (``ground``, ``sets``) or
    ``lattice_ps`` (a random lattice plus random object descriptions).
    """
    rng = random.Random(f"{kind}:{seed}")
    n = params.get("objects", 4)
    if kind == "context":
        m = params.get("attributes", 4)
        density = params.get("density", 0.5)
        matrix = [[rng.random() < density for _ in range(m)] for _ in range(n)]
        return FormalContext.from_matrix(
            [f"g{i + 1}" for i in range(n)], [f"m{j + 1}" for j in range(m)], matrix
        )
    if kind == "sets":
        from .representation import context_as_pattern_structure

        ctx = random_instance(seed, "context", **params)
        return context_as_pattern_structure(ctx)
    if kind == "intervals":
        arity = params.get("arity", 2)
        values = params.get("values", 4)
        space = IntervalSpace(arity)
        descs = []
        for _ in range(n):
            comps = []
            for _ in range(arity):
                a, b = rng.randrange(values), rng.randrange(values)
                if rng.random() < 0.6:
                    b = a
                comps.append((min(a, b), max(a, b)))
            descs.append(IntervalVector(comps))
        return PatternStructure([f"g{i + 1}" for i in range(n)], space, descs)
    if kind == "lattice":
        return _closure_system_lattice(rng, params.get("ground", 3), params.get("sets", 3))
    if kind == "lattice_ps":
        lat = params.get("lattice") or _closure_system_lattice(
            rng, params.get("ground", 3), params.get("sets", 3)
        )
        space = ExplicitSpace(lat)
        descs = [rng.choice(lat.elements) for _ in range(n)]
        return PatternStructure([f"g{i + 1}" for i in range(n)], space, descs)
    raise ValueError(f"unknown instance kind {kind!r}")


def _join_close(lat: FiniteLattice, seeds) -> frozenset:
    closed = {lat.bottom} | set(seeds)
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(closed), 2):
            j = lat.join(a, b)
            if j not in closed:
                closed.add(j)
                changed = True
    return frozenset(closed)


def random_kernel(lat: FiniteLattice, rng: random.Random) -> KernelOperator:
    """Kernel whose fixed point is the join closure of a random subset."""
    seeds = [e for e in lat.elements if rng.random() < 0.35]
    return kernel_from_fixed_point(lat, _join_close(lat, seeds))


# -- properties --------------------------------------------------------------------

@dataclass
class _Ctx:
    """Shared state handed to property checks."""

    ps: PatternStructure | None = None
    lattice: FiniteLattice | None = None
    kernels: list = field(default_factory=list)
    rng: random.Random = field(default_factory=random.Random)


def _show(x) -> str:
    return repr(x)


def _exhaustive_lattice_cases(max_size: int = 5):
    for size in range(1, max_size + 1):
        for li, lat in enumerate(enumerate_lattices(size)):
            kernels = enumerate_kernel_operators(lat)
            yield f"lattice{size}.{li}", lat, kernels


def _ps_over(lat: FiniteLattice, drop_top: bool = False) -> PatternStructure:
    els = [e for e in lat.elements if not (drop_top and e == lat.top)] or [lat.top]
    return PatternStructure([f"g{i + 1}" for i in range(len(els))], ExplicitSpace(lat), els)


def _random_ps_case(seed: int):
    kind = ("intervals", "sets", "lattice_ps")[seed % 3]
    rng = random.Random(f"case:{seed}")
    n = rng.randint(1, 8)
    if kind == "intervals":
        ps = random_instance(seed, "intervals", objects=n, arity=rng.randint(1, 2), values=4)
        lat = intent_lattice(ps)
    elif kind == "sets":
        ps = random_instance(seed, "sets", objects=n, attributes=rng.randint(2, 4), density=0.5)
        from .projections import powerset_lattice

        lat = powerset_lattice(ps.space)
    else:
        ps = random_instance(seed, "lattice_ps", objects=n, ground=3, sets=rng.randint(1, 4))
        lat = ps.space.lattice
    kernels = [random_kernel(lat, rng) for _ in range(2)]
    return f"random{seed}:{kind}:n={n}", ps, lat, kernels, rng


def _ps_cases(budget: int, seed: int):
    """Exhaustive lattice cases (every kernel) then ``budget`` random ones."""
    for name, lat, kernels in _exhaustive_lattice_cases():
        for drop in (False, True):
            ps = _ps_over(lat, drop_top=drop)
            yield f"{name}{'-top' if drop else ''}", ps, lat, kernels
    for s in range(seed, seed + budget):
        name, ps, lat, kernels, _ = _random_ps_case(s)
        yield name, ps, lat, kernels


def _lattice_cases(budget: int, seed: int):
    yield from _exhaustive_lattice_cases()
    for s in range(seed, seed + budget):
        rng = random.Random(f"lat:{s}")
        lat = random_instance(s, "lattice", ground=rng.randint(2, 3), sets=rng.randint(1, 4))
        if len(lat) <= MAX_KERNEL_LATTICE:
            kernels = enumerate_kernel_operators(lat)
        else:
            kernels = [random_kernel(lat, rng) for _ in range(3)]
        yield f"randlat{s}", lat, kernels


def _prop_meet_image(budget, seed):
    for name, lat, kernels in _lattice_cases(budget, seed):
        els = lat.elements
        subsets = [()] + [tuple(c) for r in range(1, len(els) + 1) for c in itertools.combinations(els, r)]
        if len(subsets) > 300:
            rng = random.Random(name)
            subsets = rng.sample(subsets, 300)
        for ki, k in enumerate(kernels):
            fp = fixed_point(k, lat)
            from .projections import ProjectedSpace

            space = ProjectedSpace(ExplicitSpace(lat), k)
            bad = None
            for X in subsets:
                rhs = k(lat.meet_all(X))
                images = [k(x) for x in X]
                lower = [p for p in fp if all(lat.leq(p, q) for q in images)]
                inf = [p for p in lower if all(lat.leq(q, p) for q in lower)]
                folded = space.top
                for q in images:
                    folded = projected_meet(space, folded, q)
                if inf != [rhs] or folded != rhs:
                    bad = {"X": _show(X), "psi(meet X)": _show(rhs), "inf in fixed point": _show(inf),
                           "folded": _show(folded)}
                    break
            yield OracleReport("meet-image", f"{name}/psi{ki}", bad is None, bad)


def _prop_image_subsemilattice(budget, seed):
    for name, lat, kernels in _lattice_cases(budget, seed):
        els = lat.elements
        subs = []
        for r in range(1, min(len(els), 5) + 1):
            for c in itertools.combinations(els, r):
                s = set(c) | {lat.top}
                if all(lat.meet(a, b) in s for a in s for b in s):
                    subs.append(frozenset(s))
        for ki, k in enumerate(kernels):
            bad = None
            for s in subs:
                img = {k(x) for x in s}
                if any(k(lat.meet(a, b)) not in img for a in img for b in img):
                    bad = {"subsemilattice": _show(sorted(map(str, s)))}
                    break
            yield OracleReport("image-subsemilattice", f"{name}/psi{ki}", bad is None, bad)


def _prop_fixed_point_closed(budget, seed):
    for name, lat, kernels in _lattice_cases(budget, seed):
        for ki, k in enumerate(kernels):
            fp = fixed_point(k, lat)
            bad = None
            if lat.bottom not in fp:
                bad = {"missing bottom": _show(lat.bottom)}
            else:
                items = sorted(fp, key=lat.idx)
                for r in range(2, len(items) + 1):
                    for X in itertools.combinations(items, r):
                        if lat.join_all(X) not in fp:
                            bad = {"X": _show(X)}
                            break
                    if bad:
                        break
            yield OracleReport("fixed-point-closed", f"{name}/psi{ki}", bad is None, bad)


def _prop_closed_set_kernel(budget, seed):
    for name, lat, kernels in _lattice_cases(budget, seed):
        if len(lat) > 10:
            continue
        tables = {tuple(sorted((lat.idx(a), lat.idx(b)) for a, b in k.table.items())) for k in kernels}
        bad = None
        for s in join_closed_subsets(lat, pairwise=False):
            k = kernel_from_fixed_point(lat, s)
            report = validate_kernel(k)
            if not report or fixed_point(k, lat) != s:
                bad = {"fixed point": _show(sorted(map(str, s))), "violations": _show(report.violations)}
                break
            if len(lat) <= MAX_KERNEL_LATTICE:
                key = tuple(sorted((lat.idx(a), lat.idx(b)) for a, b in k.table.items()))
                if key not in tables:
                    bad = {"not enumerated": _show(sorted(map(str, s)))}
                    break
        yield OracleReport("closed-set-kernel", name, bad is None, bad)


def _prop_kernel_count(budget, seed):
    for name, lat, kernels in _lattice_cases(budget, seed):
        if len(lat) > MAX_KERNEL_LATTICE:
            continue
        count = len(join_closed_subsets(lat))
        ok = count == len(kernels)
        yield OracleReport("kernel-count", name, ok, None if ok else {"kernels": len(kernels), "subsets": count})


def _prop_proj_meet(budget, seed):
    for name, lat, kernels in _lattice_cases(budget, seed):
        exhaustive = len(lat) <= MAX_KERNEL_LATTICE
        bad = None
        for k1, k2 in itertools.combinations_with_replacement(kernels, 2):
            k3 = proj_meet(k1, k2, lat)
            fp3 = fixed_point(k3, lat)
            if fp3 != fixed_point(k1, lat) & fixed_point(k2, lat) or not validate_kernel(k3):
                bad = {"fp3": _show(sorted(map(str, fp3)))}
                break
            if exhaustive:
                lower = [k for k in kernels if proj_leq(k, k1, lat) and proj_leq(k, k2, lat)]
                if not all(proj_leq(k, k3, lat) for k in lower):
                    bad = {"not greatest": True}
                    break
        yield OracleReport("proj-meet", name, bad is None, bad)


def _extents(ps) -> set:
    return close_by_one(ps).extents()


def _prop_extent_containment(budget, seed):
    for name, ps, lat, kernels in _ps_cases(budget, seed):
        base = close_by_one(ps)
        base_ext = base.extents()
        for ki, k in enumerate(kernels):
            pps = o_project(ps, k, validate=False)
            proj = close_by_one(pps)
            bad = None
            extra = proj.extents() - base_ext
            if extra:
                bad = {"extent not in ps": ps.names(next(iter(extra)))}
            else:
                intents = {c.intent for c in proj}
                for c in base:
                    if k(c.intent) not in intents:
                        bad = {"intent": ps.space.render(c.intent)}
                        break
            yield OracleReport("extent-containment", f"{name}/psi{ki}", bad is None, bad)


def _prop_implication_transfer(budget, seed):
    for name, ps, lat, kernels in _ps_cases(budget, seed):
        els = list(lat.elements)
        if len(els) > 12:
            els = random.Random(name).sample(els, 12)
        for ki, k in enumerate(kernels):
            pps = o_project(ps, k, validate=False)
            bad = None
            for a in els:
                for b in els:
                    if k(b) == b and implication_holds(pps, k(a), k(b)) and not implication_holds(ps, a, b):
                        bad = {"a": _show(a), "b": _show(b)}
                        break
                if bad:
                    break
            yield OracleReport("implication-transfer", f"{name}/psi{ki}", bad is None, bad)


def _prop_monotone_extents(budget, seed):
    for name, ps, lat, kernels in _ps_cases(budget, seed):
        bad = None
        pairs = list(itertools.permutations(kernels, 2))
        if len(pairs) > 20:
            pairs = random.Random(name).sample(pairs, 20)
        for k1, k2 in pairs:
            if proj_leq(k1, k2, lat):
                e1 = _extents(o_project(ps, k1, validate=False))
                e2 = _extents(o_project(ps, k2, validate=False))
                if not e1 <= e2:
                    bad = {"extent": ps.names(next(iter(e1 - e2)))}
                    break
        yield OracleReport("monotone-extents", name, bad is None, bad)


def _prop_context_simplifies(budget, seed):
    for name, ps, lat, kernels in _ps_cases(budget, seed):
        r = minimal_representation_context(ps)
        for ki, k in enumerate(kernels):
            rp = minimal_representation_context(o_project(ps, k, validate=False))
            w = simpler_than(rp, r)
            yield OracleReport("context-simplifies", f"{name}/psi{ki}", bool(w),
                               None if w else {"failing attribute": w.failing})


def _derived_contexts(r: FormalContext, rng: random.Random, count: int = 3):
    """Contexts below ``r`` in the simplicity order: drop columns and add
    intersections of column pairs."""
    m = len(r.attributes)
    for _ in range(count):
        cols = [c for c in r.columns if rng.random() < 0.6]
        if m >= 2:
            for _ in range(rng.randint(0, 2)):
                i, j = rng.sample(range(m), 2)
                cols.append(r.columns[i] & r.columns[j])
        cols = list(dict.fromkeys(cols))
        n = len(r.objects)
        matrix = [[bool(c >> g & 1) for c in cols] for g in range(n)]
        yield FormalContext.from_matrix(r.objects, [f"k{i}" for i in range(len(cols))], matrix)


def _prop_context_projection(budget, seed):
    for name, ps, lat, kernels in _ps_cases(budget, seed):
        r = minimal_representation_context(ps)
        rng = random.Random(name)
        for ci, K in enumerate(_derived_contexts(r, rng)):
            bad = None
            psi = projection_from_context(ps, K)
            pps = o_project(ps, psi)
            ext_k = {A for A, _ in context_concepts(K)}
            if ext_k != _extents(pps):
                bad = {"extents differ": True}
            else:
                rep = verify_representation(pps, K)
                if not rep:
                    bad = {"representation": rep.mismatches[:3]}
            yield OracleReport("context-projection", f"{name}/K{ci}", bad is None, bad)


def _prop_cbo(budget, seed):
    backends = ["python"] + (["native"] if BACKEND == "native" else [])
    for name, ps, lat, kernels in _ps_cases(budget, seed):
        truth = brute_force_concepts(ps)
        want = [(c.extent, c.intent) for c in truth]
        bad = None
        for b in backends:
            for threads in (1, 2):
                got = [(c.extent, c.intent) for c in close_by_one(ps, threads=threads, backend=b)]
                if got != want:
                    bad = {"backend": b, "threads": threads, "got": len(got), "want": len(want)}
                    break
        yield OracleReport("cbo-oracle", name, bad is None, bad)


def _prop_representation(budget, seed):
    for name, ps, lat, kernels in _ps_cases(budget, seed):
        bad = None
        mini = minimal_representation_context(ps)
        rep = verify_representation(ps, mini)
        if not rep:
            bad = {"minimal": rep.mismatches[:3]}
        else:
            from .representation import representation_context

            intents = [c.intent for c in close_by_one(ps)]
            rep = verify_representation(ps, representation_context(ps, intents))
            if not rep:
                bad = {"all intents": rep.mismatches[:3]}
        yield OracleReport("representation", name, bad is None, bad)


def _prop_galois(budget, seed):
    for name, ps, lat, kernels in _ps_cases(budget, seed):
        rng = random.Random(name)
        n = len(ps.objects)
        leq = ps.space.leq
        bad = None
        for _ in range(20):
            A = frozenset(g for g in range(n) if rng.random() < 0.5)
            d = rng.choice(lat.elements)
            if (A <= int_to_ext(ps, d)) != leq(d, ext_to_int(ps, A)):
                bad = {"A": ps.names(A), "d": _show(d)}
                break
            if not A <= closure(ps, A).extent:
                bad = {"extensive": ps.names(A)}
                break
        yield OracleReport("galois", name, bad is None, bad)


def _prop_meet_pathology(budget, seed):
    for name, lat, kernels in _exhaustive_lattice_cases():
        for ki, k in enumerate(kernels):
            for x, y in itertools.combinations(lat.elements, 2):
                if k(lat.meet(x, y)) != lat.meet(k(x), k(y)):
                    yield OracleReport("meet-pathology", f"{name}/psi{ki}", True, {
                        "x": x, "y": y, "psi(x^y)": k(lat.meet(x, y)), "psi(x)^psi(y)": lat.meet(k(x), k(y)),
                    })
                    return
    yield OracleReport("meet-pathology", "lattices<=5", False, {"no witness": True})


PROPERTIES: dict[str, Callable[[int, int], Iterator[OracleReport]]] = {
    "meet-image": _prop_meet_image,
    "image-subsemilattice": _prop_image_subsemilattice,
    "fixed-point-closed": _prop_fixed_point_closed,
    "closed-set-kernel": _prop_closed_set_kernel,
    "kernel-count": _prop_kernel_count,
    "proj-meet": _prop_proj_meet,
    "extent-containment": _prop_extent_containment,
    "implication-transfer": _prop_implication_transfer,
    "monotone-extents": _prop_monotone_extents,
    "context-simplifies": _prop_context_simplifies,
    "context-projection": _prop_context_projection,
    "cbo-oracle": _prop_cbo,
    "representation": _prop_representation,
    "galois": _prop_galois,
    "meet-pathology": _prop_meet_pathology,
}


def run_property(name: str, budget: int = 100, seed: int = 0, stop_on_fail: bool = True) -> Iterator[OracleReport]:
    """Run a registered property over exhaustive plus ``budget`` seeded instances."""
    if name not in PROPERTIES:
        raise KeyError(f"unknown property {name!r}; known: {sorted(PROPERTIES)}")
    for report in PROPERTIES[name](budget, seed):
        yield report
        if stop_on_fail and not report.passed:
            return
