import numpy as np

from recon.axioms import (
    check_bumpy,
    check_compact_bumpy,
    check_z_bumpy,
    exhaustive_witness,
    is_exhaustive,
    is_T0,
    t0_witness,
)
from recon.coefficients import from_ring, gf, trivial, zmod
from recon.corpus import base_groupoids, canonical_size, coefficient_systems
from recon.functions import EMPTY, FnSpace, canonical_bumpy, classify, steinberg_family
from recon.groupoid import group, pair, unit_groupoid


def test_canonical_families_are_bumpy():
    for G in base_groupoids():
        for Y in coefficient_systems().values():
            if canonical_size(G, Y) > 400:
                continue
            F = canonical_bumpy(G, Y)
            assert check_z_bumpy(F).ok, (G.name, Y.name)


def test_group_valued_family_passes_z_variants():
    rep = check_z_bumpy(canonical_bumpy(group(order=3), from_ring(gf(4))))
    assert rep.passed("compact-z-involutive") and rep.passed("z-involutive")


def test_z4_compact_urysohn_via_unit_values():
    rep = check_compact_bumpy(canonical_bumpy(pair(2), from_ring(zmod(4))))
    assert rep.passed("compact-urysohn")


def test_missing_singletons_break_urysohn():
    F = canonical_bumpy(pair(2), trivial())
    g = F.G.index("(1,2)")
    keep = [i for i in range(F.k) if F.fn(i).dom != {g} and g not in F.fn(i).dom]
    sub = F.subfamily(keep)
    rep = check_bumpy(sub)
    assert not rep.passed("urysohn")
    assert rep["urysohn"].witness == "(1,2)"


def test_only_empty_function():
    F = classify(FnSpace(pair(2), trivial()), [EMPTY])
    assert not check_bumpy(F).passed("urysohn")


def test_involutive_needs_inverses():
    # functions supported on (1,1) and (1,2) only: (1,2) has no partner on (2,1)
    G = pair(2)
    F = canonical_bumpy(G, trivial())
    bad = {G.index("(2,1)")}
    sub = F.subfamily([i for i in range(F.k) if not (F.fn(i).dom & bad)])
    rep = check_compact_bumpy(sub)
    assert not rep.passed("involutive") and not rep.passed("compact-involutive")
    assert rep.status("compact-involutive => involutive").value == "hypothesis-unmet"


def test_compact_variants_imply_plain_ones():
    for G in base_groupoids()[:12]:
        for Y in (trivial(), from_ring(zmod(4))):
            rep = check_z_bumpy(canonical_bumpy(G, Y))
            for name in ("compact-involutive => involutive", "compact-urysohn => urysohn",
                         "compact-z-involutive => z-involutive"):
                assert rep.status(name).value != "fail"


def test_steinberg_family_is_bumpy():
    F = steinberg_family(pair(2), gf(3))
    assert check_compact_bumpy(F).ok


def test_exhaustive_and_t0():
    assert is_exhaustive(canonical_bumpy(pair(2), from_ring(gf(3))))
    assert exhaustive_witness(canonical_bumpy(pair(2), from_ring(zmod(4)))) == ("(1,1)", "2")
    assert is_exhaustive(steinberg_family(pair(2), zmod(4)))
    units = {0, 1}
    assert not is_T0([set(), {0, 1}], units)
    assert t0_witness([set(), {0, 1}], units) == (0, 1)
    assert is_T0([set(), {0}, {1}, {0, 1}], units)
    F = canonical_bumpy(unit_groupoid(2), trivial())
    assert is_T0([set(np.flatnonzero(F.rows[i] >= 0)) for i in F.Z], F.G.units)
