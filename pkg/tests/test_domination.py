import numpy as np
import pytest

from oracles import dominates_via as oracle_via
from oracles import prec as oracle_prec
from recon.coefficients import from_ring, gf, trivial, zmod
from recon.corpus import cyclic
from recon.domination import (
    check_domination_laws,
    check_domination_lemma,
    check_prec_compact_containment,
    domination,
    dominates,
    dominates_via,
    witnesses,
)
from recon.functions import BudgetExceeded, canonical_bumpy, steinberg_family
from recon.groupoid import disjoint_union, group, group_bundle, pair, unit_groupoid

SMALL = [
    (pair(2), trivial()),
    (pair(2), from_ring(zmod(4))),
    (group(order=2), from_ring(gf(3))),
    (group(order=3), trivial()),
    (disjoint_union(pair(2), unit_groupoid(1)), trivial()),
    (group_bundle([cyclic(2), cyclic(1)]), from_ring(zmod(4))),
]


@pytest.mark.parametrize("G,Y", SMALL, ids=lambda x: getattr(x, "name", ""))
def test_prec_matches_oracle(helpers, G, Y):
    F = canonical_bumpy(G, Y)
    O, C = helpers.oracle_pair(F)
    S = helpers.as_dicts(F, F.S)
    assert np.array_equal(domination(F).prec, np.array(oracle_prec(O, C, S)))


def test_literal_examples():
    F = canonical_bumpy(pair(2), trivial())
    i = F.G.index
    idx = {tuple(sorted(F.fn(a).dom)): a for a in range(F.k)}
    a12, a21 = idx[(i("(1,2)"),)], idx[(i("(2,1)"),)]
    assert dominates_via(F, a12, a21, a12)
    assert a21 in witnesses(F, a12, a12)
    for a in range(F.k):
        for b in range(F.k):
            assert dominates_via(F, F.zero, a, b)


def test_witnesses_agree_with_oracle(helpers):
    F = canonical_bumpy(group(order=2), from_ring(gf(3)))
    O, C = helpers.oracle_pair(F)
    S = helpers.as_dicts(F)
    for a in range(F.k):
        for b in range(F.k):
            expected = [s for s in range(F.k) if oracle_via(O, C, S[a], S[s], S[b])]
            assert witnesses(F, a, b) == expected


def test_non_invertible_values_block_domination():
    F = canonical_bumpy(pair(2), from_ring(zmod(4)))
    H = steinberg_family(pair(2), zmod(4))
    two = H.Y.index("2")
    # a supported on (1,1) with value 2: [Y^x]a is empty, so only the empty function lies below it
    a = next(i for i in H.S if dict(H.fn(i).items) == {0: two})
    d = domination(H)
    below = d.idx[d.prec[:, d.local(a)]]
    assert below.tolist() == [H.zero]
    assert dominates(F, F.zero, F.zero)


@pytest.mark.parametrize("G,Y", SMALL, ids=lambda x: getattr(x, "name", ""))
def test_lemma_and_containment(G, Y):
    F = canonical_bumpy(G, Y)
    lem = check_domination_lemma(F)
    assert lem.ok
    if F.k == 7:
        assert lem["lemma"].detail == "343 triples"
    assert check_prec_compact_containment(F).ok


def test_containment_on_trivial_values_is_domain_inclusion():
    F = canonical_bumpy(pair(3), trivial())
    d = domination(F)
    bits = F.dom_bits[d.idx]
    assert np.array_equal(d.prec, (bits[:, None] & ~bits[None, :]) == 0)


def test_steinberg_z4_lemma_hypothesis():
    rep = check_domination_lemma(steinberg_family(group(order=2), zmod(4)))
    assert rep.status("hypothesis: 1-cancellative values").value == "hypothesis-unmet"
    assert rep.status("lemma").value == "hypothesis-unmet"


def test_laws():
    for G, Y in SMALL:
        assert check_domination_laws(canonical_bumpy(G, Y)).ok


def test_budget():
    F = canonical_bumpy(pair(3), from_ring(gf(3)))
    assert check_domination_lemma(F, budget=10).status("lemma").value == "not-verified"
    with pytest.raises(BudgetExceeded):
        domination(F, budget=10).require_cubic()
