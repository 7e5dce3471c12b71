import itertools

import numpy as np
import pytest

from oracles import RawGroupoid
from recon.corpus import KLEIN, base_groupoids, corpus_groupoids, cyclic
from recon.groupoid import (
    GroupoidError,
    build_standard_groupoid,
    disjoint_union,
    find_isomorphism,
    group,
    group_bundle,
    is_grading,
    is_isomorphism,
    pair,
    point_permutation_iso,
    transformation,
    unit_groupoid,
    validate_grading,
    validate_groupoid,
)

# smallest loop with two-sided inverses that is not associative
LOOP5 = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]


def loop_doc(table=LOOP5):
    n = len(table)
    names = [f"e{i}" for i in range(n)]
    compose = [[names[i], names[j], names[table[i][j]]] for i in range(n) for j in range(n)]
    inverse = [[names[i], names[next(j for j in range(n) if table[i][j] == 0)]] for i in range(n)]
    return {"arrows": names, "compose": compose, "inverse": inverse}


def test_single_unit_is_valid():
    G = validate_groupoid(arrows=["e"], compose=[["e", "e", "e"]], inverse=[["e", "e"]])
    assert G.units == frozenset({0})


def test_z2_as_one_unit_groupoid():
    G = validate_groupoid(arrows=["e", "g"], compose=[["e", "e", "e"], ["e", "g", "g"], ["g", "e", "g"],
                                                       ["g", "g", "e"]], inverse=[["e", "e"], ["g", "g"]])
    assert G.units == frozenset({0}) and not G.is_effective()


def test_idempotent_non_unit_rejected():
    raw = {"arrows": ["e", "g"], "compose": [["e", "e", "e"], ["e", "g", "g"], ["g", "e", "g"], ["g", "g", "g"]],
           "inverse": [["e", "e"], ["g", "g"]]}
    with pytest.raises(GroupoidError) as e:
        validate_groupoid(raw)
    assert e.value.axiom == "unit-law"
    assert RawGroupoid(raw).axiom_violations()


def test_non_associative_loop_rejected_with_triple():
    raw = loop_doc()
    with pytest.raises(GroupoidError) as e:
        validate_groupoid(raw)
    assert e.value.axiom == "associativity" and len(e.value.witness) == 3
    g, h, k = e.value.witness
    assert ("associativity", g, h, k) in RawGroupoid(raw).axiom_violations()


@pytest.mark.parametrize("field", ["compose", "inverse"])
def test_undeclared_arrow_rejected(field):
    raw = pair(2).to_raw()
    raw[field][0] = [*raw[field][0][:-1], "nope"]
    with pytest.raises(GroupoidError):
        validate_groupoid(raw)


def test_corpus_round_trips_and_satisfies_oracle():
    for G in corpus_groupoids(seed=3, extra=6):
        raw = G.to_raw()
        assert RawGroupoid(raw).axiom_violations() == []
        H = validate_groupoid(raw)
        assert H.canonical_key() == G.canonical_key()


def test_set_products():
    Z2 = group(order=2)
    assert Z2.set_product({1}, {1}) == {0}
    P = pair(2)
    i = P.index
    assert P.set_product({i("(1,2)")}, {i("(2,1)")}) == {i("(1,1)")}
    for W in P.bisections():
        assert P.set_product(P.units, W) == W == P.set_product(W, P.units)
    assert P.set_inverse({i("(1,2)")}) == {i("(2,1)")}


def test_bisections_match_oracle():
    for G in base_groupoids():
        O = RawGroupoid(G.to_raw())
        ours = {frozenset(G.arrows[g] for g in B) for B in G.bisections()}
        assert ours == set(O.bisections())
    Z2 = group(order=2)
    assert Z2.is_bisection(set()) and Z2.is_bisection({1}) and not Z2.is_bisection({0, 1})


def test_isotropy_and_effectiveness():
    P = pair(2)
    assert P.isotropy() == {P.index("(1,1)"), P.index("(2,2)")}
    Z3 = group(order=3)
    assert Z3.isotropy() == frozenset(range(3))
    swap = transformation(cyclic(2), ["1", "2"], cyclic(2))
    assert P.is_effective() and swap.is_effective() and not Z3.is_effective()
    for G in base_groupoids():
        assert set(G.isotropy()) == {G.index(a) for a in RawGroupoid(G.to_raw()).isotropy()}
        for B in G.bisections():
            assert G.is_isosection(B) or not G.set_product(B, G.set_inverse(B)) <= G.isotropy()


def test_splitting():
    P = pair(2)
    i = P.index
    O2 = {i("(1,2)"), i("(2,1)")}
    assert P.splitting(set(), O2) == O2
    assert P.splitting(O2, O2) == frozenset()
    # s(1,2) = (2,2), s(2,1) = (1,1): removing sources of {(1,1)} leaves (1,2)
    assert P.splitting({i("(1,1)")}, O2) == {i("(1,2)")}
    with pytest.raises(ValueError):
        P.splitting({i("(1,1)")}, {i("(1,2)"), i("(2,2)")})


def test_interior_isotropy():
    P = pair(2)
    assert P.interior_isotropy_group(P.index("(1,1)")) == {P.index("(1,1)")}
    Z2 = group(order=2)
    assert Z2.interior_isotropy_group(0) == {0, 1}
    B = group_bundle([cyclic(2), cyclic(1)])
    sizes = sorted(len(B.interior_isotropy_group(x)) for x in B.units)
    assert sizes == [1, 2]
    with pytest.raises(ValueError):
        P.interior_isotropy_group(P.index("(1,2)"))


def test_standard_constructions():
    P = build_standard_groupoid("pair", n=2)
    assert P.n == 4 and len(P.units) == 2
    swap = transformation(cyclic(2), ["1", "2"], cyclic(2))
    f = find_isomorphism(swap, P)
    assert f is not None and is_isomorphism(swap, P, f)
    U = disjoint_union(pair(2), group(order=2))
    assert U.n == 6 and len(U.units) == 3 and not U.is_effective()
    assert find_isomorphism(pair(2), unit_groupoid(4)) is None
    assert group(KLEIN).n == 4
    assert build_standard_groupoid("units", points=3).n == 3


def test_point_permutations_are_automorphisms():
    for n in (2, 3):
        P = pair(n)
        for perm in itertools.permutations(range(n)):
            assert is_isomorphism(P, P, point_permutation_iso(n, perm))


def test_gradings():
    P = pair(2)
    one = group(order=1)
    assert validate_grading(P, [0] * 4, one)
    parity = [(int(a[1]) - int(a[3])) % 2 for a in P.arrows]
    assert validate_grading(P, parity, group(order=2))
    # the parity values read in Z/3: c(1,2)c(2,1) = 1 + 1 != 0 = c(1,1)
    with pytest.raises(GroupoidError) as e:
        validate_grading(P, parity, group(order=3))
    assert e.value.axiom == "grading-functor"
    assert not is_grading(P, parity, group(order=3))
    # i - j is additive, so it grades by Z/3 as well
    assert is_grading(P, [(int(a[1]) - int(a[3])) % 3 for a in P.arrows], group(order=3))
    G = P.with_grading(group(order=2), parity)
    again = validate_groupoid(G.to_raw())
    assert np.array_equal(again.grading[1], G.grading[1])
