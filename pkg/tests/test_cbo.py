import pytest
from hypothesis import given, settings, strategies as st

from patproj.cbo import BACKEND, close_by_one, hasse, is_canonic_extension
from patproj.descriptions import TOP, AttributeSetSpace, IntervalSpace
from patproj.oracle import brute_force_concepts, random_instance
from patproj.pattern import PatternConcept, PatternStructure
from patproj.representation import context_as_pattern_structure, read_cxt

from conftest import DATA, GOLDEN, iv

BACKENDS = ["python"] + (["native"] if BACKEND == "native" else [])


def pairs(cs):
    return [(c.extent, c.intent) for c in cs]


@pytest.mark.parametrize("backend", BACKENDS)
def test_interval_concepts(interval_ps, backend):
    cs = close_by_one(interval_ps, backend=backend)
    o = interval_ps.objset
    assert [c.extent for c in cs] == [
        frozenset(), o("g1"), o("g2"), o("g3"), o("g1", "g2"), o("g2", "g3"), o("g1", "g2", "g3"),
    ]
    assert cs.intent_of(o("g1", "g2")) == iv((1, 2), (1, 2))
    assert cs.intent_of(o("g2", "g3")) == iv((2, 3), (2, 2))
    assert cs[0].intent is TOP


def test_interval_matches_oracle(interval_ps):
    assert pairs(close_by_one(interval_ps)) == pairs(brute_force_concepts(interval_ps))


def test_interval_hasse(interval_ps):
    cs = close_by_one(interval_ps)
    top = len(cs) - 1
    covered = sorted(lo for lo, up in cs.edges if up == top)
    assert [interval_ps.names(cs[i].extent) for i in covered] == [["g1", "g2"], ["g2", "g3"]]
    assert len(cs.edges) == 9


def test_dot_golden(interval_ps):
    assert close_by_one(interval_ps).to_dot(interval_ps) == (GOLDEN / "intervals_lattice.dot").read_text()


def test_hasse_small_cases():
    assert hasse([PatternConcept(frozenset(), TOP)]) == []
    chain = [PatternConcept(frozenset(), 0), PatternConcept(frozenset({0}), 1), PatternConcept(frozenset({0, 1}), 2)]
    assert hasse(chain) == [(0, 1), (1, 2)]


def test_single_object():
    space = IntervalSpace(1)
    ps = PatternStructure(["g"], space, [iv((1, 1))])
    cs = close_by_one(ps)
    assert pairs(cs) == [(frozenset(), TOP), (frozenset({0}), iv((1, 1)))]
    ps_top = PatternStructure(["g"], space, [TOP])
    assert pairs(close_by_one(ps_top)) == [(frozenset({0}), TOP)]


def test_empty_structure():
    ps = PatternStructure([], IntervalSpace(2), [])
    cs = close_by_one(ps)
    assert pairs(cs) == [(frozenset(), TOP)]


def test_minimal_context_is_isomorphic(interval_ps):
    ctx_ps = context_as_pattern_structure(read_cxt((DATA / "intervals_minimal.cxt").read_text()))
    assert close_by_one(ctx_ps).extents() == close_by_one(interval_ps).extents()


def test_canonicity_rule():
    assert is_canonic_extension(set(), {0}, 0)
    assert not is_canonic_extension({1}, {0, 1, 2}, 2)
    assert is_canonic_extension({0}, {0, 1}, 1)


def test_multiword_bitsets():
    # more than 64 attributes and objects exercise the multi-word kernels
    attrs = [f"m{i}" for i in range(70)]
    space = AttributeSetSpace(attrs)
    descs = [frozenset(attrs[j] for j in range(70) if (i * 7 + j) % 5 != 0) for i in range(66)]
    ps = PatternStructure([f"g{i}" for i in range(66)], space, descs)
    results = [pairs(close_by_one(ps, backend=b)) for b in BACKENDS]
    assert all(r == results[0] for r in results)
    assert len(results[0]) == 32  # 5 residue classes, all subsets of them


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000), st.sampled_from(["intervals", "sets", "lattice_ps"]), st.integers(1, 8))
def test_cbo_equals_oracle(seed, kind, n):
    ps = random_instance(seed, kind, objects=n)
    want = pairs(brute_force_concepts(ps))
    for b in BACKENDS:
        assert pairs(close_by_one(ps, backend=b)) == want


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000), st.sampled_from(["intervals", "sets"]), st.integers(1, 4))
def test_threads_give_identical_output(seed, kind, threads):
    ps = random_instance(seed, kind, objects=12, arity=3, attributes=6)
    base = close_by_one(ps)
    got = close_by_one(ps, threads=threads)
    assert pairs(got) == pairs(base)
    assert got.to_json(ps) == base.to_json(ps)


def test_unknown_backend(interval_ps):
    with pytest.raises(ValueError):
        close_by_one(interval_ps, backend="gpu")
