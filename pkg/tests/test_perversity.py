import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxperv import linalg
from coxperv.bisheaf import ValidationRequired, module_to_full_bisheaf, validate_module
from coxperv.coxeter import build_system, popcount
from coxperv.facets import enumerate_oppositions
from coxperv.perversity import (GEOMETRIC, LITERAL, PRINTED, EnumerationCapExceeded, Relation5Datum,
                                character, characters, check_invertible, check_perverse, check_transitive,
                                counterexample_search, cross_map, enumerate_relation5_data, example_battery,
                                invertibility_oracle_geometric, localized_element, make_local_system_module,
                                make_rank_one_Z2, make_skyscraper, monodromy, permutation_module, random_module,
                                reflection_representation, relation5_sides, sign_character,
                                transitivity_oracle_geometric, trivial_module)
from support import lines_module_a2


def matrix_group(sys):
    """Elements as reflection matrices with word lengths, without the element table."""
    gens = [sys.generator_matrix(i) for i in range(sys.rank)]
    key = lambda m: tuple(m.flat)
    ident = linalg.identity(sys.rank, sys.field)
    seen = {key(ident): (ident, 0, ())}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            _, d, word = seen[key(m)]
            for i, g in enumerate(gens):
                p = m @ g
                if key(p) not in seen:
                    seen[key(p)] = (p, d + 1, word + (i,))
                    nxt.append(p)
        frontier = nxt
    return seen, key


def brute_force_relation5(sys):
    """Gallery length condition evaluated on matrices; tuples named by reduced words."""
    group, key = matrix_group(sys)
    length = lambda m: group[key(m)][1]
    word = lambda m: group[key(m)][2]
    out = set()
    S = (1 << sys.rank) - 1
    for I in range(1 << sys.rank):
        J = S & ~I
        WI = [m for m, _, w in group.values() if all(I >> i & 1 for i in w)]

        def longest(A):
            return max((m for m, _, w in group.values() if all(A >> i & 1 for i in w)), key=length)

        for A, B in itertools.product([a for a in range(1 << sys.rank) if a & ~I == 0], repeat=2):
            wA, wB = longest(A), longest(B)
            for w1, w2 in itertools.product(WI, repeat=2):
                w = w2 @ w1
                if length(wB @ w @ wA) == length(wB) + length(w2) + length(w1) + length(wA):
                    out.add((I, J, A, B, word(w1), word(w2)))
    return out


def test_a1_has_six_tuples():
    sys = build_system("A1")
    data = enumerate_relation5_data(sys)
    s = sys.generator(0)
    assert data == [
        Relation5Datum(0, 1, 0, 0, 0, 0, 0),
        Relation5Datum(1, 0, 0, 0, 0, 0, 0),
        Relation5Datum(1, 0, 0, 0, 0, s, s),
        Relation5Datum(1, 0, 0, 0, s, 0, s),
        Relation5Datum(1, 0, 0, 1, 0, 0, 0),
        Relation5Datum(1, 0, 1, 0, 0, 0, 0),
    ]
    assert len(enumerate_relation5_data(sys, PRINTED)) == 6


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "A3"])
def test_enumeration_matches_brute_force(name):
    sys = build_system(name)
    ours = {(d.I, d.J, d.A, d.B, sys.reduced_word(d.w1), sys.reduced_word(d.w2))
            for d in enumerate_relation5_data(sys)}
    assert ours == brute_force_relation5(sys)


def test_a1_instances_follow_from_presentation():
    # on A1 every instance follows from the idempotent and commutation relations
    sys = build_system("A1")
    for _, m in example_battery(sys, 10, seed=4):
        for d in enumerate_relation5_data(sys):
            left, right = relation5_sides(sys, m, d)
            assert linalg.equal(left, right)


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2", "A3", "B3", "H3"])
def test_trivial_tuple_and_consequences_present(name):
    sys = build_system(name)
    data = set(enumerate_relation5_data(sys))
    S = sys.all_mask
    assert Relation5Datum(0, S, 0, 0, 0, 0, 0) in data
    for I in range(1 << sys.rank):
        J = S & ~I
        subs = [a for a in range(1 << sys.rank) if a & ~I == 0]
        for A, B in itertools.product(subs, repeat=2):
            if A & B == 0:
                assert Relation5Datum(I, J, A, B, 0, 0, 0) in data
        for w1, w2 in itertools.product(sys.parabolic_subgroup(I), repeat=2):
            w = sys.multiply(w2, w1)
            if sys.length(w) == sys.length(w1) + sys.length(w2):
                assert Relation5Datum(I, J, 0, 0, w1, w2, w) in data


def test_a2_braid_instance_present():
    sys = build_system("A2")
    s, t = sys.generator(0), sys.generator(1)
    d = Relation5Datum(3, 0, 0, 0, s, t, sys.element([1, 0]))
    assert d in enumerate_relation5_data(sys)


def test_full_idempotent_triple_excluded():
    # A = I = B with W_I nontrivial never passes the length condition
    for name in ["A2", "B2", "A3"]:
        sys = build_system(name)
        for d in enumerate_relation5_data(sys):
            if d.A == d.I == d.B:
                assert d.I == 0


def test_enumeration_cap():
    with pytest.raises(EnumerationCapExceeded):
        enumerate_relation5_data(build_system("B3"), cap=1000)


def test_report_order():
    sys = build_system("B2")
    data = enumerate_relation5_data(sys)
    keys = [(popcount(d.I), d.I, d.A, d.B, d.w1, d.w2) for d in data]
    assert keys == sorted(keys)


@pytest.mark.parametrize("name", ["A2", "B2", "A3"])
def test_transitive_examples(name):
    sys = build_system(name)
    assert check_transitive(sys, trivial_module(sys)).passed
    assert check_transitive(sys, make_local_system_module(sys, reflection_representation(sys))).passed
    assert check_transitive(sys, make_skyscraper(sys, sign_character(sys))).passed


def test_transitive_requires_valid_module():
    sys = build_system("A2")
    m = trivial_module(sys)
    m.e[0] = linalg.matrix([[3]])
    with pytest.raises(ValidationRequired):
        check_transitive(sys, m)


def test_parallel_check_matches_serial():
    sys = build_system("B2")
    for _, m in example_battery(sys, 4, seed=8):
        a = check_transitive(sys, m, jobs=1).to_json()
        b = check_transitive(sys, m, jobs=2).to_json()
        assert a == b


def test_rank_one_invertibility():
    sys = build_system("A1")
    good = check_invertible(sys, make_rank_one_Z2(2))
    assert good.passed
    bad = check_invertible(sys, make_rank_one_Z2(0))
    assert not bad.passed and bad.witness["label"] == "∅|_0∅"
    (d,) = enumerate_oppositions(sys)
    x, u = cross_map(sys, make_rank_one_Z2(2), d)
    assert linalg.equal(x, linalg.matrix([[2]]))
    # e ρ(u)^-1 e ρ(u) e + (1 - e) squares the cross map on e V
    assert linalg.equal(localized_element(sys, make_rank_one_Z2(2), d, u), linalg.matrix([[4, 0], [0, 1]]))


def test_skyscraper_invertible():
    sys = build_system("A2")
    assert check_invertible(sys, make_skyscraper(sys, reflection_representation(sys))).passed


def test_lines_module_separates_cross_map_direction():
    sys = build_system("A2")
    m = lines_module_a2(sys)
    assert validate_module(sys, m).passed
    fb = module_to_full_bisheaf(sys, m)
    assert invertibility_oracle_geometric(sys, fb).passed
    assert check_invertible(sys, m, GEOMETRIC).passed
    literal = check_invertible(sys, m, LITERAL)
    assert not literal.passed and literal.witness["label"] == "{0}|_1.0{1}"


def test_perverse_examples():
    a1, a2 = build_system("A1"), build_system("A2")
    assert check_perverse(a2, trivial_module(a2)).passed
    for signs in characters(a2):
        assert check_perverse(a2, make_local_system_module(a2, character(a2, signs))).passed
    rep = check_perverse(a1, make_rank_one_Z2(0))
    assert not rep.passed and rep.witness["family"] == "invertible"
    assert rep.witness["label"] == "∅|_0∅"


def test_rank_one_constructor():
    m = make_rank_one_Z2(2)
    assert linalg.equal(m.e[0], linalg.matrix([[1, 0], [0, 0]]))
    assert linalg.equal(m.rho[0], linalg.matrix([[2, 3], [-1, -2]]))
    one = make_rank_one_Z2(1)
    assert one.dim == 1 and linalg.equal(one.e[0], linalg.matrix([[1]]))
    assert linalg.equal(one.rho[0], linalg.matrix([[1]]))
    assert make_rank_one_Z2(0).dim == 2


def test_monodromy_examples():
    a1, a2 = build_system("A1"), build_system("A2")
    r = monodromy(a1, make_rank_one_Z2(2))
    assert r.base_dim == 1 and linalg.equal(r.mu[0], linalg.matrix([[2]]))
    assert linalg.equal(r.mu[0] @ r.mu[0], linalg.matrix([[4]]))
    refl = monodromy(a2, make_local_system_module(a2, reflection_representation(a2)))
    assert refl.braid == "pass" and refl.invertible == "pass"
    assert not linalg.equal(refl.mu[0] @ refl.mu[1], refl.mu[1] @ refl.mu[0])
    assert linalg.equal(refl.mu[0], a2.generator_matrix(0))
    sky = monodromy(a2, make_skyscraper(a2, sign_character(a2)))
    assert sky.base_dim == 0 and sky.braid == "pass"


def test_half_monodromy_is_cross_map_of_simple_opposition():
    sys = build_system("B2")
    for _, m in example_battery(sys, 5, seed=6):
        r = monodromy(sys, m, check=False)
        for d in enumerate_oppositions(sys):
            if d.I == d.J == 0:
                (s,) = [i for i in range(sys.rank) if d.K >> i & 1]
                assert linalg.equal(cross_map(sys, m, d)[0], r.mu[s])


def test_skyscraper_needs_representation():
    from coxperv.bisheaf import NotARepresentation

    sys = build_system("A2")
    with pytest.raises(NotARepresentation):
        make_skyscraper(sys, character(sys, [1, -1]))


@pytest.mark.parametrize("name", ["A2", "B2"])
def test_random_modules_satisfy_presentation(name):
    sys = build_system(name)
    rng = random.Random(0)
    for _ in range(15):
        assert validate_module(sys, random_module(sys, rng)).passed


def test_reduced_oracle_matches_exhaustive():
    sys = build_system("A2")
    for _, m in example_battery(sys, 6, seed=1) + [("lines", lines_module_a2(sys))]:
        fb = module_to_full_bisheaf(sys, m)
        assert (transitivity_oracle_geometric(sys, fb).passed
                == transitivity_oracle_geometric(sys, fb, exhaustive=True).passed)


def test_counterexample_search_is_reproducible():
    sys = build_system("A2")
    a = counterexample_search(sys, seed=3)
    b = counterexample_search(sys, seed=3)
    assert a is not None and a[0] == b[0] and a[2].to_json() == b[2].to_json()
    assert a[2].witness["kind"] == "opposition"


def test_regular_permutation_module():
    # idempotents onto Q[W_I] inside Q[W]: transitive but not invertible
    sys = build_system("A2")
    m = permutation_module(sys, [(0, 0)])
    assert check_transitive(sys, m).passed
    assert not check_invertible(sys, m).passed


@pytest.mark.parametrize("name, n_random", [("A1", 6), ("A3", 4)])
def test_oracle_agreement_other_ranks(name, n_random):
    sys = build_system(name)
    for label, m in example_battery(sys, n_random, seed=0, max_dim=5):
        fb = module_to_full_bisheaf(sys, m)
        assert check_transitive(sys, m).passed == transitivity_oracle_geometric(sys, fb).passed, label
        assert check_invertible(sys, m).passed == invertibility_oracle_geometric(sys, fb).passed, label


@settings(max_examples=12, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_property_oracle_agreement_and_braid_on_random_a2_modules(seed):
    sys = build_system("A2")
    m = random_module(sys, random.Random(seed), max_dim=6)
    assert validate_module(sys, m).passed
    transitive = check_transitive(sys, m).passed
    assert transitive == transitivity_oracle_geometric(sys, module_to_full_bisheaf(sys, m)).passed
    if transitive and check_invertible(sys, m).passed:
        mu = monodromy(sys, m).mu
        aba = mu[0] @ mu[1] @ mu[0]
        assert linalg.equal(aba, mu[1] @ mu[0] @ mu[1])
        assert all(linalg.rank(x) == x.shape[0] for x in mu.values())


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=-6, max_value=6), st.integers(min_value=1, max_value=6))
def test_property_rank_one_invertible_iff_mu_nonzero(p, q):
    a1 = build_system("A1")
    mu = Fraction(p, q)
    m = make_rank_one_Z2(mu)
    assert validate_module(a1, m).passed
    assert check_perverse(a1, m).passed == (mu != 0)
    assert linalg.equal(monodromy(a1, m, check=False).mu[0], linalg.matrix([[mu]]))
