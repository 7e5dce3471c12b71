import itertools

import numpy as np
import pytest

from oracles import Coeff, RawGroupoid, canonical_functions, convolve, key, multiply
from recon.coefficients import from_ring, gf, trivial, zmod
from recon.corpus import base_groupoids, canonical_size, coefficient_systems
from recon.functions import (
    EMPTY,
    BudgetExceeded,
    ClosureError,
    FnFamily,
    FnSpace,
    IllDefinedProduct,
    PartialFn,
    canonical_bumpy,
    classify,
    closure,
    steinberg_family,
)
from recon.groupoid import group, pair, unit_groupoid


def test_canonical_sizes():
    assert len(canonical_bumpy(pair(2), trivial()).S) == 7
    F = canonical_bumpy(unit_groupoid(1), trivial())
    assert F.k == 2 and F.zero == 0
    assert len(canonical_bumpy(group(order=2), from_ring(gf(3))).S) == 5


@pytest.mark.parametrize("yname", ["{1}", "F3", "Z/4"])
def test_canonical_matches_oracle(helpers, yname):
    Y = coefficient_systems()[yname]
    for G in base_groupoids():
        if canonical_size(G, Y) > 600:
            continue
        F = canonical_bumpy(G, Y)
        O, C = RawGroupoid(G.to_raw()), Coeff(Y.mul, Y.unit)
        expected = {key(a) for a in canonical_functions(O, C)}
        assert {key(a) for a in helpers.as_dicts(F)} == expected
        assert F.k == canonical_size(G, Y)
        assert np.array_equal(F.S, np.arange(F.k))


def test_empty_function_absorbs():
    F = canonical_bumpy(pair(2), trivial())
    for a in F.fns():
        assert F.multiply(a, EMPTY) == EMPTY == F.multiply(EMPTY, a)


def test_products_match_oracle(helpers):
    for G in (pair(2), group(order=3), base_groupoids()[-3]):
        for Y in (trivial(), from_ring(gf(3)), from_ring(zmod(4))):
            F = canonical_bumpy(G, Y)
            if F.k > 200:
                continue
            O, C = helpers.oracle_pair(F)
            elems = helpers.as_dicts(F)
            T = F.table()
            for i, j in itertools.product(range(F.k), repeat=2):
                assert key(elems[T[i, j]]) == key(multiply(O, C, elems[i], elems[j]))


def test_characteristic_products_follow_set_products():
    P = pair(3)
    F = canonical_bumpy(P, trivial())
    for a, b in itertools.product(F.fns(), repeat=2):
        assert F.multiply(a, b).dom == P.set_product(a.dom, b.dom)


def test_zero_divisors_shrink_domains():
    G = group(order=2)
    sp = FnSpace(G, from_ring(zmod(4)))
    two = sp.Y.index("2")
    a = PartialFn.from_mapping({1: two})
    assert sp.multiply(a, a) == EMPTY
    # dom(a)dom(a) = {e} but the product is empty
    assert G.set_product(a.dom, a.dom) == {0}


def test_convolution_matches_oracle(helpers):
    R = zmod(4)
    for G in (group(order=2), pair(2)):
        F = steinberg_family(G, R)
        O = RawGroupoid(G.to_raw())
        ring_of = F.space.ring_of_y
        elems = [{g: int(ring_of[y]) for g, y in d.items()} for d in helpers.as_dicts(F)]
        T = F.table()
        for i, j in itertools.product(range(F.k), repeat=2):
            got = {g: int(ring_of[y]) for g, y in helpers.as_dicts(F, [T[i, j]])[0].items()}
            assert got == convolve(O, R.add.tolist(), R.mul.tolist(), R.zero, elems[i], elems[j])


def test_convolution_examples():
    R = zmod(4)
    sp = FnSpace(group(order=2), ring=R)
    two_g = [0, 2]
    assert np.array_equal(sp.convolve(two_g, two_g), [0, 0])
    P = FnSpace(pair(2), ring=gf(2))
    units = [1 if a in ("(1,1)", "(2,2)") else 0 for a in pair(2).arrows]
    assert np.array_equal(P.convolve(units, units), units)


def test_classify_subsets():
    F = canonical_bumpy(pair(2), trivial())
    assert np.array_equal(F.S, np.arange(F.k))
    assert [sorted(F.fn(i).dom) for i in F.D] == [[], [0], [3], [0, 3]]
    H = steinberg_family(group(order=2), gf(2))
    assert H.k == 4 and np.array_equal(H.C, np.arange(4))
    assert sorted(tuple(sorted(H.fn(i).dom)) for i in H.S) == [(), (0,), (1,)]
    E = classify(FnSpace(pair(2), trivial()), [EMPTY])
    for sub in (E.Z, E.D, E.S, E.C, E.N, E.R):
        assert list(sub) == [0]


def test_designated_subsets_match_definitions():
    for G in (pair(2), group(order=2), base_groupoids()[-4]):
        for Y in (trivial(), from_ring(zmod(4))):
            F = canonical_bumpy(G, Y)
            O = RawGroupoid(G.to_raw())
            iso = O.isotropy()
            for i, a in enumerate(F.fns()):
                dom = {G.arrows[g] for g in a.dom}
                assert (i in F.D) == (dom <= O.units)
                assert (i in F.C) == (dom <= iso)
                assert (i in F.S) == O.is_bisection(dom)


def test_closure_and_errors():
    sp = FnSpace(pair(2), trivial())
    i = pair(2).index
    gen = [PartialFn.from_mapping({i("(1,2)"): 0})]
    F = closure(sp, gen)
    assert F.k == 2  # (1,2) and its square, the empty function
    with pytest.raises(ClosureError):
        classify(sp, gen + [PartialFn.from_mapping({i("(2,1)"): 0})])
    big = canonical_bumpy(pair(3), from_ring(gf(3)))
    gens = [a for a in big.fns() if len(a) == 2][:30]
    assert len(closure(big.space, gens)) > 50
    with pytest.raises(BudgetExceeded):
        closure(big.space, gens, cap=50)


def test_ill_defined_products_rejected():
    sp = FnSpace(group(order=2), trivial())
    full = sp.row(PartialFn.from_mapping({0: 0, 1: 0}))
    with pytest.raises(IllDefinedProduct):
        sp.product_rows(full[None], full[None])
    F = FnFamily(sp, np.array([full, np.full(2, -1)]), check_closure=False)
    assert F.table()[1, 1] == -2


def test_steinberg_sizes():
    assert steinberg_family(pair(2), gf(2)).k == 16
    assert steinberg_family(group(order=2), gf(3)).k == 9
