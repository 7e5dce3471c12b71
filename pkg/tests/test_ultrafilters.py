import numpy as np
import pytest

from oracles import brute_ultrafilters, key
from oracles import prec as oracle_prec
from recon.coefficients import from_ring, gf, trivial, zmod
from recon.corpus import cyclic
from recon.domination import domination
from recon.functions import BudgetExceeded, canonical_bumpy
from recon.groupoid import find_isomorphism, group, group_bundle, pair, transformation, unit_groupoid
from recon.pipeline import phi_from_arrow_map
from recon.ultrafilters import (
    enumerate_ultrafilters,
    filter_product,
    induced_iso,
    is_filter,
    is_proper,
    is_ultrafilter,
    reconstruct,
    star,
    unit_map,
    up_closure,
    verify_diagonal_iso,
    verify_recovery,
)


def parity_graded_pair2():
    P = pair(2)
    return P.with_grading(group(order=2), [(int(a[1]) - int(a[3])) % 2 for a in P.arrows])


def by_domain(F):
    return {tuple(sorted(F.G.arrows[g] for g in F.fn(i).dom)): i for i in range(F.k)}


def test_z2_ultrafilters_by_subset_oracle(helpers):
    F = canonical_bumpy(group(order=2), trivial())
    assert F.k == 3
    ufs = enumerate_ultrafilters(F)
    dom = by_domain(F)
    assert ufs == [frozenset({dom[("0",)]}), frozenset({dom[("1",)]})]
    O, C = helpers.oracle_pair(F)
    S = helpers.as_dicts(F, F.S)
    expected = brute_ultrafilters(S, oracle_prec(O, C, S))
    assert {frozenset(key(S[i]) for i in U) for U in ufs} == expected


@pytest.mark.parametrize("G,Y", [(pair(2), trivial()), (unit_groupoid(1), trivial()),
                                 (group(order=3), trivial()), (group(order=2), from_ring(gf(3))),
                                 (unit_groupoid(2), from_ring(gf(3)))])
def test_gen_equals_oracles(helpers, G, Y):
    F = canonical_bumpy(G, Y)
    gen = enumerate_ultrafilters(F)
    assert gen == enumerate_ultrafilters(F, "brute")
    assert len(gen) == G.n
    O, C = helpers.oracle_pair(F)
    S = helpers.as_dicts(F, F.S)
    assert {frozenset(key(S[F.S.tolist().index(i)]) for i in U) for U in gen} == \
        brute_ultrafilters(S, oracle_prec(O, C, S))


def test_brute_force_has_a_size_limit():
    with pytest.raises(BudgetExceeded):
        enumerate_ultrafilters(canonical_bumpy(pair(3), trivial()), "brute")


def test_up_closure_examples():
    F = canonical_bumpy(pair(2), trivial())
    dom = by_domain(F)
    assert up_closure(F, []) == frozenset()
    assert up_closure(F, [F.zero]) == frozenset(F.S.tolist())
    up = up_closure(F, [dom[("(1,2)",)]])
    assert up == {i for i in range(F.k) if F.G.index("(1,2)") in F.fn(i).dom}


def test_filter_predicates():
    F = canonical_bumpy(pair(2), trivial())
    dom = by_domain(F)
    U = up_closure(F, [dom[("(1,1)",)]])
    assert is_filter(F, U) and is_ultrafilter(F, U)
    everything = F.S.tolist()
    assert is_filter(F, everything) and not is_proper(F, everything) and not is_ultrafilter(F, everything)
    assert is_filter(F, []) and not is_ultrafilter(F, [])
    assert not is_filter(F, [dom[("(1,1)",)], dom[("(2,2)",)]])


def test_star_and_products():
    F = canonical_bumpy(pair(2), trivial())
    G = F.G
    S = {a: unit_map(F, G.index(a)) for a in G.arrows}
    for a in G.arrows:
        assert star(F, S[a]) == S[G.arrows[G.inv[G.index(a)]]]
    assert star(F, []) == frozenset()
    assert filter_product(F, S["(1,2)"], S["(2,1)"]) == S["(1,1)"]
    assert filter_product(F, S["(1,2)"], S["(1,2)"]) is None
    Z2 = canonical_bumpy(group(order=2), trivial())
    g = unit_map(Z2, 1)
    assert star(Z2, g) == g


def test_unit_map_examples():
    F = canonical_bumpy(group(order=2), trivial())
    dom = by_domain(F)
    assert unit_map(F, 1) == {dom[("1",)]}
    assert unit_map(F, 1) in enumerate_ultrafilters(F)
    H = canonical_bumpy(unit_groupoid(1), from_ring(gf(3)))
    assert len(unit_map(H, 0)) == 2
    K = canonical_bumpy(pair(3), from_ring(zmod(4)))
    for g in range(K.G.n):
        assert all(g in K.fn(a).dom for a in unit_map(K, g))


def test_reconstruct_pair2():
    F = canonical_bumpy(pair(2), trivial())
    rec = reconstruct(F)
    assert rec.groupoid is not None and find_isomorphism(rec.groupoid, F.G) is not None
    assert verify_recovery(F).ok


def test_recovery_reports():
    assert verify_recovery(canonical_bumpy(unit_groupoid(1), trivial())).ok
    F = canonical_bumpy(pair(3), from_ring(zmod(4)))
    rep = verify_recovery(F)
    assert rep.ok and rep.data["ultrafilters"] == 9


def test_graded_recovery():
    F = canonical_bumpy(parity_graded_pair2(), trivial(), graded=True)
    rep = verify_recovery(F, graded=True)
    assert rep.ok and rep.passed("c[S_g] = {c(g)}")
    c3 = transformation(cyclic(3), ["0", "1", "2"], cyclic(3))
    c3 = c3.with_grading(group(order=3), [int(a[1]) for a in c3.arrows])
    rep = verify_recovery(canonical_bumpy(c3, from_ring(gf(3)), graded=True), graded=True)
    assert rep.ok


def test_graded_recovery_needs_homogeneous_domains():
    P = pair(3)
    P = P.with_grading(group(order=2), [(int(a[1]) - int(a[3])) % 2 for a in P.arrows])
    F = canonical_bumpy(P, trivial())  # {(1,1), (2,3)} mixes grades
    rep = verify_recovery(F, graded=True)
    assert rep.status("hypothesis: homogeneous domains").value == "hypothesis-unmet"


def test_non_bumpy_family_is_hypothesis_unmet():
    F = canonical_bumpy(pair(2), trivial())
    sub = F.subfamily([i for i in range(F.k) if F.G.index("(1,2)") not in F.fn(i).dom])
    rep = verify_recovery(sub)
    assert rep.status("hypothesis: bumpy").value == "hypothesis-unmet" and len(rep.clauses) == 1


def test_diagonal_isos():
    F = canonical_bumpy(pair(2), trivial())
    ident = np.arange(F.k)
    rep = verify_diagonal_iso(F, F, ident)
    assert rep.ok and rep.data["induced"] == {a: a for a in F.G.arrows}
    swap = [F.G.index(f"({3 - int(a[1])},{3 - int(a[3])})") for a in F.G.arrows]
    phi = phi_from_arrow_map(F, F, swap)
    rep = verify_diagonal_iso(F, F, phi)
    assert rep.ok and induced_iso(F, F, phi) == swap


def test_scaling_by_a_central_unit():
    # d -> 2d on the diagonal only is not multiplicative; scaling every value by the
    # character c(g) = 2^(deg) of a grading is
    F = canonical_bumpy(group(order=2), from_ring(gf(3)))
    two = F.Y.index("2")
    mul = F.Y.mul
    scaled_rows = F.rows.copy()
    scaled_rows[F.rows >= 0] = mul[two][F.rows[F.rows >= 0]]
    phi = F.lookup(scaled_rows)
    assert not verify_diagonal_iso(F, F, phi).ok
    char = F.rows.copy()
    g = 1
    char[:, g] = np.where(F.rows[:, g] >= 0, mul[two][np.maximum(F.rows[:, g], 0)], -1)
    rep = verify_diagonal_iso(F, F, F.lookup(char))
    assert rep.ok and rep.data["induced"] == {"0": "0", "1": "1"}


def test_star_from_witnessing_matches_via():
    F = canonical_bumpy(group_bundle([cyclic(2), cyclic(1)]), from_ring(gf(3)))
    d = domination(F)
    assert np.array_equal(d.witnessing, d.via.any(axis=2))
    for U in enumerate_ultrafilters(F):
        lit = {int(s) for s in d.idx for t in U for r in d.idx
               if d.via[d.local(t), d.local(int(s)), d.local(int(r))]}
        assert star(F, U) == lit
