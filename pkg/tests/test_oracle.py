import pytest

from patproj.oracle import (
    PROPERTIES,
    OracleGuardError,
    brute_force_concepts,
    enumerate_kernel_operators,
    enumerate_lattices,
    join_closed_subsets,
    random_instance,
    run_property,
)
from patproj.pattern import PatternStructure
from patproj.projections import fixed_point, validate_kernel
from patproj.representation import write_cxt
from patproj.descriptions import IntervalSpace

from conftest import GOLDEN, iv


def test_lattice_counts():
    # unlabelled lattices with 1..7 elements
    assert [len(enumerate_lattices(n)) for n in range(1, 8)] == [1, 1, 1, 2, 5, 15, 53]


def test_kernel_counts(chain3, diamond, split_lattice):
    two = enumerate_lattices(2)[0]
    assert len(enumerate_kernel_operators(two)) == 2
    for lat in (chain3, diamond, split_lattice):
        ks = enumerate_kernel_operators(lat)
        assert len(ks) == len(join_closed_subsets(lat))
        assert len({fixed_point(k) for k in ks}) == len(ks)
        assert all(validate_kernel(k) for k in ks)


def test_pairwise_and_full_join_closure_agree(split_lattice, diamond):
    for lat in (split_lattice, diamond):
        assert set(join_closed_subsets(lat)) == set(join_closed_subsets(lat, pairwise=False))


def test_brute_force_intervals(interval_ps):
    assert len(brute_force_concepts(interval_ps)) == 7


def test_brute_force_pairs(pairs_ps):
    cs = brute_force_concepts(pairs_ps)
    assert cs.intent_of(pairs_ps.objset("g1")) == frozenset("ab")
    assert len(cs) == 8


def test_brute_force_one_object():
    ps = PatternStructure(["g"], IntervalSpace(1), [iv((0, 1))])
    assert len(brute_force_concepts(ps)) <= 2


def test_guards():
    ps = PatternStructure([f"g{i}" for i in range(21)], IntervalSpace(1), [iv((i, i)) for i in range(21)])
    with pytest.raises(OracleGuardError):
        brute_force_concepts(ps)
    with pytest.raises(OracleGuardError):
        enumerate_kernel_operators(enumerate_lattices(8)[0])


def test_random_instances_are_deterministic():
    a = write_cxt(random_instance(0, "context", objects=4, attributes=4, density=0.5))
    assert a == (GOLDEN / "random_context_seed0.cxt").read_text()
    b = write_cxt(random_instance(1, "context", objects=4, attributes=4, density=0.5))
    assert a != b
    with pytest.raises(ValueError):
        random_instance(0, "graph")


def test_random_ps_kinds():
    for kind in ("intervals", "sets", "lattice_ps"):
        ps = random_instance(5, kind, objects=5)
        assert len(ps.objects) == 5


def test_meet_pathology_found():
    (report,) = run_property("meet-pathology")
    assert report.passed
    c = report.counterexample
    assert c["psi(x^y)"] != c["psi(x)^psi(y)"]


@pytest.mark.parametrize("name", sorted(PROPERTIES))
def test_properties_small_budget(name):
    reports = list(run_property(name, budget=15, seed=11))
    assert reports
    failed = [r for r in reports if not r.passed]
    assert not failed, failed[0].to_json()
    assert all(r.counterexample is None for r in reports if name != "meet-pathology")


def test_unknown_property():
    with pytest.raises(KeyError):
        list(run_property("nope"))


def test_simplifies_on_intervals(interval_ps):
    from patproj.projections import intent_lattice, kernel_from_fixed_point, o_project
    from patproj.representation import minimal_representation_context, simpler_than

    lat = intent_lattice(interval_ps)
    r = minimal_representation_context(interval_ps)
    seen = set()
    # every join-closed subset of the 8-element intent lattice
    for s in join_closed_subsets(lat):
        k = kernel_from_fixed_point(lat, s)
        seen.add(s)
        assert simpler_than(minimal_representation_context(o_project(interval_ps, k)), r)
    assert len(seen) > 10
