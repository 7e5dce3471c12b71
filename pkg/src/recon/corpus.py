"""Deterministic desk-scale corpus of groupoids, coefficients and families.

The base list covers every standard construction at small size; a seed adds
further random bundles and disjoint unions drawn from the same envelope
(at most ``MAX_UNITS`` units and ``MAX_ARROWS`` arrows).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coefficients import FiniteRing, Semigroupoid, from_ring, gf, invertibles, trivial, zmod
from .functions import FnFamily, canonical_bumpy, steinberg_family
from .groupoid import (
    FiniteGroupoid,
    cyclic_action_groupoid,
    disjoint_union,
    group,
    group_bundle,
    pair,
    transformation,
    unit_groupoid,
)

MAX_UNITS = 4
MAX_ARROWS = 12
MAX_S = 1500  # families above this are skipped by the suites

KLEIN = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
S3 = [  # permutations of 3 points, element 0 the identity
    [0, 1, 2, 3, 4, 5], [1, 0, 4, 5, 2, 3], [2, 5, 0, 4, 3, 1],
    [3, 4, 5, 0, 1, 2], [4, 3, 1, 2, 5, 0], [5, 2, 3, 1, 0, 4],
]


def cyclic(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def _swap_action(points: int, swaps: list[tuple[int, int]]) -> list[list[int]]:
    act = list(range(points))
    for a, b in swaps:
        act[a], act[b] = b, a
    return [list(range(points)), act]


def coefficient_systems() -> dict[str, Semigroupoid]:
    """``{1}``, ``F2\\0``, ``F3\\0``, ``F4\\0`` and ``(Z/4)\\0``."""
    return {
        "{1}": trivial(),
        "F2": from_ring(gf(2)),
        "F3": from_ring(gf(3)),
        "F4": from_ring(gf(4)),
        "Z/4": from_ring(zmod(4)),
    }


def rings() -> dict[str, FiniteRing]:
    return {"F2": gf(2), "F3": gf(3), "F4": gf(4), "Z/4": zmod(4)}


def base_groupoids() -> list[FiniteGroupoid]:
    out = [unit_groupoid(p) for p in range(1, 5)]
    out += [group(order=n) for n in (2, 3, 4, 5, 6)]
    out.append(group(KLEIN, name="Z/2xZ/2"))
    out.append(group(S3, name="S3"))
    out += [pair(2), pair(3)]
    out.append(transformation(cyclic(2), ["1", "2"], cyclic(2), name="Z/2 swapping 2 points"))
    out.append(cyclic_action_groupoid(3))
    out.append(cyclic_action_groupoid(4))
    out.append(transformation(cyclic(2), ["1", "2", "3"], _swap_action(3, [(0, 1)]), name="Z/2 on 3 points"))
    out.append(transformation(cyclic(2), ["1", "2", "3", "4"], _swap_action(4, [(0, 1), (2, 3)]),
                              name="Z/2 on 4 points"))
    out.append(transformation(cyclic(2), ["1", "2"], _swap_action(2, []), name="Z/2 fixing 2 points"))
    out.append(group_bundle([cyclic(2), cyclic(1)], name="Z/2 | 1"))
    out.append(group_bundle([cyclic(2), cyclic(2)], name="Z/2 | Z/2"))
    out.append(group_bundle([cyclic(3), cyclic(2)], name="Z/3 | Z/2"))
    out.append(group_bundle([cyclic(2), cyclic(1), cyclic(1), cyclic(1)], name="Z/2 | 1 | 1 | 1"))
    out.append(disjoint_union(pair(2), group(order=2)))
    out.append(disjoint_union(pair(2), unit_groupoid(1)))
    out.append(disjoint_union(pair(2), pair(2)))
    out.append(disjoint_union(pair(3), unit_groupoid(1)))
    return out


def _random_groupoid(rng: np.random.Generator) -> FiniteGroupoid:
    """A random bundle or disjoint union inside the size envelope."""
    while True:
        kind = rng.integers(3)
        if kind == 0:
            units = int(rng.integers(1, MAX_UNITS + 1))
            orders = [int(rng.integers(1, 4)) for _ in range(units)]
            G = group_bundle([cyclic(n) for n in orders], name="bundle(" + ",".join(map(str, orders)) + ")")
        elif kind == 1:
            sizes = []
            while sum(sizes) < 2 or rng.random() < 0.5:
                sizes.append(int(rng.integers(1, 3)))
            G = disjoint_union(*[pair(s) if s > 1 else unit_groupoid(1) for s in sizes])
        else:
            m = int(rng.integers(1, 4))
            G = disjoint_union(pair(2), group(order=m) if m > 1 else unit_groupoid(1))
        if len(G.units) <= MAX_UNITS and G.n <= MAX_ARROWS:
            return G


def corpus_groupoids(seed: int = 0, extra: int = 4) -> list[FiniteGroupoid]:
    """Base list plus ``extra`` seeded instances (deduplicated up to arrow naming)."""
    out = base_groupoids()
    seen = {G.canonical_key() for G in out}
    rng = np.random.default_rng(seed)
    attempts = 0
    while extra > 0 and attempts < 100:
        attempts += 1
        G = _random_groupoid(rng)
        if G.canonical_key() not in seen:
            seen.add(G.canonical_key())
            out.append(G)
            extra -= 1
    return out


def canonical_size(G: FiniteGroupoid, Y: Semigroupoid) -> int:
    """``|S|`` of the canonical bumpy family, without building it."""
    u = len(invertibles(Y))
    return sum(u ** len(B) for B in G.bisections())


@dataclass
class Instance:
    name: str
    family: FnFamily
    coefficients: str


def canonical_instances(seed: int = 0, extra: int = 4, max_s: int = MAX_S,
                        coefficients: list[str] | None = None) -> list[Instance]:
    """Canonical bumpy families over the corpus, smallest first; families above ``max_s`` are dropped."""
    ys = coefficient_systems()
    names = coefficients or list(ys)
    out = []
    for G in corpus_groupoids(seed, extra):
        for yn in names:
            if canonical_size(G, ys[yn]) <= max_s:
                out.append(Instance(f"{G.name} / {yn}", canonical_bumpy(G, ys[yn]), yn))
    out.sort(key=lambda inst: (inst.family.k, inst.name))
    return out


def skipped_instances(seed: int = 0, extra: int = 4, max_s: int = MAX_S) -> list[tuple[str, int]]:
    """``(name, |S|)`` of corpus families that exceed ``max_s``."""
    ys = coefficient_systems()
    out = []
    for G in corpus_groupoids(seed, extra):
        for yn, Y in ys.items():
            k = canonical_size(G, Y)
            if k > max_s:
                out.append((f"{G.name} / {yn}", k))
    return out


def steinberg_instances(max_k: int = 4000) -> list[Instance]:
    """Steinberg families over small rings, including non-effective ones."""
    cases = [
        (pair(2), "F2"), (pair(2), "F3"), (pair(3), "F2"),
        (group(order=2), "F2"), (group(order=2), "F3"), (group(order=3), "F2"),
        (group(order=4), "F5"), (cyclic_action_groupoid(3), "F2"),
        (disjoint_union(pair(2), group(order=2)), "F2"),
        (group_bundle([cyclic(2), cyclic(1)], name="Z/2 | 1"), "F3"),
        (unit_groupoid(2), "F2"), (group(order=2), "Z/4"),
    ]
    rs = {**rings(), "F5": gf(5)}
    out = []
    for G, rn in cases:
        F = steinberg_family(G, rs[rn])
        if F.k <= max_k:
            out.append(Instance(f"{G.name} / {rn}[G]", F, rn))
    return out
