"""The eight acceptance criteria, exact arithmetic throughout.

Each test logs one PASS/FAIL line with its runtime; the lines are collected in
the "acceptance criteria" section of the pytest terminal summary.
"""
import itertools
import time
from contextlib import contextmanager
from functools import lru_cache

import pytest

from coxperv import linalg
from coxperv.bisheaf import (check_natural_isomorphism, extend_to_full_bisheaf, module_to_chamber_bisheaf,
                             module_to_full_bisheaf, natural_isomorphism, restrict_full_bisheaf, validate_module)
from coxperv.coxeter import build_system
from coxperv.facets import enumerate_facets, enumerate_oppositions, facet_complex, geometric_oppositions
from coxperv.perversity import (DEFAULT_RELATION_CAP, Relation5Datum, check_invertible, check_perverse,
                                check_transitive, counterexample_search, enumerate_relation5_data,
                                example_battery, invertibility_oracle_geometric, make_local_system_module,
                                make_rank_one_Z2, monodromy, opposition_label, reflection_representation,
                                relation5_sides, transitivity_oracle_geometric)
from support import signs_by_matrices

N_RANDOM = 20
BATTERY_TYPES = ("A2", "B2")
RANK_AT_MOST_3 = ("A1", "A2", "B2", "G2", "I2(5)", "A3", "B3", "H3")


@contextmanager
def criterion(log, number, title, budget=None):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget is not None:
            assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
    except BaseException:
        log(f"criterion {number} FAIL: {title} ({time.perf_counter() - start:.2f}s)")
        raise
    log(f"criterion {number} PASS: {title} ({elapsed:.2f}s)")


def alternating(mats, a, b, k):
    out = linalg.identity(mats[a].shape[0])
    for j in range(k):
        out = out @ mats[a if j % 2 == 0 else b]
    return out


def test_criterion_1_rank_one(acceptance_log):
    with criterion(acceptance_log, 1, "rank-one module reproduces e, rho, mu and the invertibility boundary", budget=1.0):
        a1 = build_system("A1")
        m = make_rank_one_Z2(2)
        assert linalg.equal(m.e[0], linalg.matrix([[1, 0], [0, 0]]))
        assert linalg.equal(m.rho[0], linalg.matrix([[2, 3], [-1, -2]]))
        assert linalg.is_identity(m.rho[0] @ m.rho[0])
        assert validate_module(a1, m).passed
        assert check_perverse(a1, m).passed
        assert linalg.equal(monodromy(a1, m).mu[0], linalg.matrix([[2]]))
        zero = check_perverse(a1, make_rank_one_Z2(0))
        assert not zero.passed
        assert zero.witness["family"] == "invertible" and zero.witness["label"] == "∅|_0∅"
        for mu in (1, -1):
            one = make_rank_one_Z2(mu)
            assert one.dim == 1 and linalg.equal(one.rho[0], linalg.matrix([[mu]]))
            assert linalg.is_identity(one.e[0])
            assert check_perverse(a1, one).passed


def test_criterion_2_a2_structure(acceptance_log):
    with criterion(acceptance_log, 2, "A2 facets, posets, oppositions and their W-expansion", budget=5.0):
        a2 = build_system("A2")
        fc = facet_complex(a2)
        geo = fc.geometry
        facets = enumerate_facets(a2)
        assert len(facets) == 13
        oracle = signs_by_matrices(a2)
        for f in facets:
            assert geo.signs[f] == oracle[(f.rep, f.type)]
            assert geo.dim(f) == fc.dim(f)
            assert [g for g in facets if geo.leq(f, g)] == fc.star(f)
        for f, g in itertools.product(facets, repeat=2):
            assert geo.leq(f, g) == fc.leq(f, g)
        # s = generator 0, t = generator 1; words read left to right
        labels = {opposition_label(a2, d) for d in enumerate_oppositions(a2)}
        assert labels == {"∅|_0∅", "∅|_1∅", "{1}|_0.1{0}", "{0}|_1.0{1}"}
        expanded = set().union(*(fc.expand_opposition(d) for d in enumerate_oppositions(a2)))
        assert expanded == geometric_oppositions(a2)


@lru_cache(maxsize=None)
def battery_verdicts(name):
    """(label, module, transitive, invertible) over the seeded battery, with the oracle cross-check."""
    sys = build_system(name)
    out = []
    for label, m in example_battery(sys, N_RANDOM, seed=0):
        assert validate_module(sys, m).passed, label
        algebraic = check_transitive(sys, m).passed
        geometric = transitivity_oracle_geometric(sys, module_to_full_bisheaf(sys, m)).passed
        assert algebraic == geometric, (name, label)
        out.append((label, m, algebraic, check_invertible(sys, m).passed))
    return out


def test_criterion_3_transitivity_oracle(acceptance_log):
    with criterion(acceptance_log, 3, "A2 and B2 batteries: check_transitive agrees with the geometric oracle"):
        for name in BATTERY_TYPES:
            start = time.perf_counter()
            verdicts = battery_verdicts(name)
            assert time.perf_counter() - start < 60.0, name
            assert sum(label.startswith("random") for label, *_ in verdicts) >= 20
            # the battery must exercise both verdicts
            transitive = [t for _, _, t, _ in verdicts]
            assert any(transitive) and not all(transitive), name


def test_criterion_4_round_trip(acceptance_log):
    with criterion(acceptance_log, 4, "A2 restrict/extend round trip with natural isomorphisms at all 13 facets", budget=5.0):
        a2 = build_system("A2")
        for label, m in example_battery(a2, 6, seed=0):
            chamber = module_to_chamber_bisheaf(a2, m)
            full = extend_to_full_bisheaf(a2, chamber)
            assert restrict_full_bisheaf(a2, full).equals(chamber), label
            again = extend_to_full_bisheaf(a2, restrict_full_bisheaf(a2, full))
            iso = natural_isomorphism(a2, full)
            assert len(iso) == 13
            assert check_natural_isomorphism(a2, full, again, iso).passed, label


def test_criterion_5_braid_property(acceptance_log):
    with criterion(acceptance_log, 5, "braid identities and invertible mu for every perverse battery module"):
        for name in BATTERY_TYPES:
            sys = build_system(name)
            perverse = [(label, m) for label, m, t, i in battery_verdicts(name) if t and i]
            assert perverse, name
            for label, m in perverse:
                mu = monodromy(sys, m).mu
                for s in mu:
                    assert linalg.rank(mu[s]) == mu[s].shape[0], label
                for a, b in itertools.combinations(range(sys.rank), 2):
                    k = int(sys.matrix.m[a][b])
                    assert linalg.equal(alternating(mu, a, b, k), alternating(mu, b, a, k)), label
        a2 = build_system("A2")
        mu = monodromy(a2, make_local_system_module(a2, reflection_representation(a2))).mu
        assert mu[0].shape == (2, 2)
        assert not linalg.equal(mu[0] @ mu[1], mu[1] @ mu[0])
        assert linalg.equal(alternating(mu, 0, 1, 3), alternating(mu, 1, 0, 3))


def relation5_consequences(sys):
    """Instances with disjoint A, B and w = e, and the A = B = ∅ instances for length-additive w = w2 w1."""
    S = sys.all_mask
    out = []
    for I in range(1 << sys.rank):
        subsets = [a for a in range(1 << sys.rank) if a & ~I == 0]
        for A, B in itertools.product(subsets, repeat=2):
            if A & B == 0:
                out.append(Relation5Datum(I, S & ~I, A, B, 0, 0, 0))
        WI = sys.parabolic_subgroup(I)
        for w1, w2 in itertools.product(WI, repeat=2):
            w = sys.multiply(w2, w1)
            if sys.length(w) == sys.length(w1) + sys.length(w2):
                out.append(Relation5Datum(I, S & ~I, 0, 0, w1, w2, w))
    return out


def test_criterion_6_relation5_consequences(acceptance_log):
    title = "gallery relation data on all rank <= 3 presets contain and satisfy the consequence instances"
    with criterion(acceptance_log, 6, title):
        assert len(enumerate_relation5_data(build_system("A1"))) == 6
        for name in RANK_AT_MOST_3:
            sys = build_system(name)
            present = set(enumerate_relation5_data(sys))
            consequences = relation5_consequences(sys)
            assert all(d in present for d in consequences), name
            for label, m in example_battery(sys, 2, seed=2, max_dim=4):
                assert validate_module(sys, m).passed, label
                for d in consequences:
                    left, right = relation5_sides(sys, m, d)
                    assert linalg.equal(left, right), (name, label, d)


def test_criterion_7_scale(acceptance_log):
    with criterion(acceptance_log, 7, "A3 check_perverse plus geometric oracle; B3 enumeration under the cap", budget=60.0):
        a3 = build_system("A3")
        assert a3.order == 24 and len(enumerate_facets(a3)) == 75
        m = make_local_system_module(a3, reflection_representation(a3))
        assert check_perverse(a3, m).passed
        fb = module_to_full_bisheaf(a3, m)
        assert transitivity_oracle_geometric(a3, fb).passed
        assert invertibility_oracle_geometric(a3, fb).passed
        b3 = build_system("B3")
        assert 0 < len(enumerate_relation5_data(b3, cap=DEFAULT_RELATION_CAP)) <= DEFAULT_RELATION_CAP


def test_criterion_8_counterexample_search(acceptance_log):
    with criterion(acceptance_log, 8, "seeded A2 search finds a valid module failing invertibility with a named witness"):
        a2 = build_system("A2")
        found = counterexample_search(a2, seed=0)
        assert found is not None
        _, m, report = found
        assert validate_module(a2, m).passed
        assert not check_invertible(a2, m).passed
        assert report.witness["kind"] == "opposition"
        labels = {opposition_label(a2, d) for d in enumerate_oppositions(a2)}
        assert report.witness["label"] in labels


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
