"""Finite groupoids given by explicit composition tables.

Arrows are opaque string identifiers.  Internally every arrow is an index
``0..n-1`` and composition is an ``(n, n)`` integer table with ``-1`` marking
non-composable pairs.  All subset operations take and return ``frozenset``
of arrow indices.

The topology is always discrete, so every subset is open and compact.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

import numpy as np

ArrowSet = frozenset


class GroupoidError(ValueError):
    """Raised when a composition table violates a groupoid axiom."""

    def __init__(self, axiom: str, witness: tuple, message: str = "") -> None:
        self.axiom = axiom
        self.witness = witness
        super().__init__(message or f"{axiom} violated at {witness}")


class FiniteGroupoid:
    """A validated finite groupoid.

    Use :func:`validate_groupoid` or one of the constructors in this module
    rather than calling ``__init__`` directly; ``__init__`` validates too, but
    expects index-based tables.
    """

    def __init__(
        self,
        arrows: Sequence[str],
        mul: np.ndarray,
        inv: np.ndarray,
        grading: tuple["FiniteGroupoid", np.ndarray] | None = None,
        name: str = "",
    ) -> None:
        self.arrows = tuple(str(a) for a in arrows)
        self.n = len(self.arrows)
        self.mul = np.asarray(mul, dtype=np.int64)
        self.inv = np.asarray(inv, dtype=np.int64)
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)
        self.name = name
        self._index = {a: i for i, a in enumerate(self.arrows)}
        if len(self._index) != self.n:
            raise GroupoidError("distinct-arrows", (), "duplicate arrow identifiers")
        _check_axioms(self)
        self.src = np.array([self.mul[self.inv[g], g] for g in range(self.n)], dtype=np.int64)
        self.rng = np.array([self.mul[g, self.inv[g]] for g in range(self.n)], dtype=np.int64)
        self.units = frozenset(int(u) for u in self.src)
        self.pairs = np.array(
            [(g, h, self.mul[g, h]) for g in range(self.n) for h in range(self.n) if self.mul[g, h] >= 0],
            dtype=np.int64,
        ).reshape(-1, 3)
        self.grading = None
        if grading is not None:
            gamma, cmap = grading
            cmap = np.asarray(cmap, dtype=np.int64)
            validate_grading(self, cmap, gamma)
            self.grading = (gamma, cmap)

    def __repr__(self) -> str:
        label = self.name or "FiniteGroupoid"
        return f"<{label}: {self.n} arrows, {len(self.units)} units>"

    def __len__(self) -> int:
        return self.n

    def index(self, arrow: str) -> int:
        return self._index[str(arrow)]

    def arrow_set(self, names: Iterable[str]) -> ArrowSet:
        return frozenset(self._index[str(a)] for a in names)

    def names(self, U: Iterable[int]) -> list[str]:
        return sorted(self.arrows[g] for g in U)

    def compose(self, g: int, h: int) -> int | None:
        k = int(self.mul[g, h])
        return None if k < 0 else k

    # -- subset calculus -------------------------------------------------

    def set_product(self, U: Iterable[int], V: Iterable[int]) -> ArrowSet:
        V = list(V)
        out = set()
        for g in U:
            for h in V:
                k = self.mul[g, h]
                if k >= 0:
                    out.add(int(k))
        return frozenset(out)

    def set_inverse(self, U: Iterable[int]) -> ArrowSet:
        return frozenset(int(self.inv[g]) for g in U)

    def sources(self, U: Iterable[int]) -> ArrowSet:
        return frozenset(int(self.src[g]) for g in U)

    def ranges(self, U: Iterable[int]) -> ArrowSet:
        return frozenset(int(self.rng[g]) for g in U)

    def is_bisection(self, U: Iterable[int]) -> bool:
        U = list(U)
        return len({int(self.src[g]) for g in U}) == len(U) == len({int(self.rng[g]) for g in U})

    def isotropy(self) -> ArrowSet:
        return frozenset(g for g in range(self.n) if self.src[g] == self.rng[g])

    def is_isosection(self, U: Iterable[int]) -> bool:
        U = list(U)
        for g in U:
            for h in U:
                if (self.src[g] == self.src[h]) != (self.rng[g] == self.rng[h]):
                    return False
        return True

    def is_effective(self) -> bool:
        # int(G^iso) = G^iso in the discrete topology
        return self.isotropy() == self.units

    def splitting(self, O: Iterable[int], O2: Iterable[int]) -> ArrowSet:
        """Part of ``O2`` whose sources avoid the sources of ``O``."""
        O, O2 = frozenset(O), frozenset(O2)
        if not self.is_bisection(O) or not self.is_bisection(O2):
            raise ValueError("splitting needs two bisections")
        taken = self.sources(O)
        return frozenset(g for g in O2 if int(self.src[g]) not in taken)

    def interior_isotropy_group(self, x: int) -> ArrowSet:
        if x not in self.units:
            raise ValueError(f"{self.arrows[x]!r} is not a unit")
        return frozenset(g for g in range(self.n) if self.src[g] == x == self.rng[g])

    def bisections(self) -> list[ArrowSet]:
        """All bisections, in order of size then index."""
        out: list[ArrowSet] = []

        def extend(start: int, chosen: list[int], used_s: set, used_r: set) -> None:
            out.append(frozenset(chosen))
            for g in range(start, self.n):
                s, r = int(self.src[g]), int(self.rng[g])
                if s in used_s or r in used_r:
                    continue
                chosen.append(g)
                used_s.add(s)
                used_r.add(r)
                extend(g + 1, chosen, used_s, used_r)
                chosen.pop()
                used_s.discard(s)
                used_r.discard(r)

        extend(0, [], set(), set())
        out.sort(key=lambda B: (len(B), sorted(B)))
        return out

    # -- grading ---------------------------------------------------------

    def grade(self, g: int) -> int:
        if self.grading is None:
            raise ValueError("groupoid carries no grading")
        return int(self.grading[1][g])

    def is_homogeneous(self, U: Iterable[int]) -> bool:
        if self.grading is None:
            return True
        return len({int(self.grading[1][g]) for g in U}) <= 1

    def with_grading(self, gamma: "FiniteGroupoid", cmap: Mapping[str, str] | Sequence[int]) -> "FiniteGroupoid":
        if isinstance(cmap, Mapping):
            cmap = [gamma.index(cmap[a]) for a in self.arrows]
        return FiniteGroupoid(self.arrows, self.mul, self.inv, grading=(gamma, np.asarray(cmap)), name=self.name)

    # -- identity --------------------------------------------------------

    def canonical_key(self) -> tuple:
        """Label-independent-of-order key: tables re-expressed over sorted arrow names."""
        order = sorted(range(self.n), key=lambda g: self.arrows[g])
        pos = {g: i for i, g in enumerate(order)}
        comp = tuple(
            (pos[g], pos[h], pos[int(self.mul[g, h])])
            for g in order
            for h in order
            if self.mul[g, h] >= 0
        )
        return (tuple(self.arrows[g] for g in order), comp, tuple(pos[int(self.inv[g])] for g in order))

    def to_raw(self) -> dict:
        doc = {
            "schema": "groupoid/v1",
            "arrows": list(self.arrows),
            "compose": [
                [self.arrows[g], self.arrows[h], self.arrows[k]] for g, h, k in self.pairs.tolist()
            ],
            "inverse": [[a, self.arrows[self.inv[g]]] for g, a in enumerate(self.arrows)],
        }
        if self.grading is not None:
            gamma, cmap = self.grading
            doc["grading"] = {
                "gamma": gamma.to_raw(),
                "map": [[a, gamma.arrows[cmap[g]]] for g, a in enumerate(self.arrows)],
            }
        return doc


def _check_axioms(G: FiniteGroupoid) -> None:
    n, mul, inv = G.n, G.mul, G.inv
    if mul.shape != (n, n) or inv.shape != (n,):
        raise GroupoidError("table-shape", (), "tables do not match the arrow count")
    if np.any(mul < -1) or np.any(mul >= n) or np.any(inv < 0) or np.any(inv >= n):
        raise GroupoidError("declared-arrows", (), "tables reference undeclared arrows")
    a = G.arrows
    for g in range(n):
        if inv[inv[g]] != g:
            raise GroupoidError("inverse-involution", (a[g],))
        if mul[inv[g], g] < 0 or mul[g, inv[g]] < 0:
            raise GroupoidError("inverse-products", (a[g],), f"{a[g]}^-1 {a[g]} or {a[g]} {a[g]}^-1 undefined")
    src = [int(mul[inv[g], g]) for g in range(n)]
    rng = [int(mul[g, inv[g]]) for g in range(n)]
    units = set(src)
    for u in sorted(units):
        for h in range(n):
            if mul[u, h] >= 0 and (mul[u, h] != h or rng[h] != u):
                raise GroupoidError("unit-law", (a[u], a[h]), f"unit {a[u]} does not act as identity on {a[h]}")
            if mul[h, u] >= 0 and (mul[h, u] != h or src[h] != u):
                raise GroupoidError("unit-law", (a[h], a[u]), f"unit {a[u]} does not act as identity on {a[h]}")
    for g in range(n):
        if mul[rng[g], g] != g or mul[g, src[g]] != g:
            raise GroupoidError("unit-law", (a[g],))
    for g in range(n):
        for h in range(n):
            if (mul[g, h] >= 0) != (src[g] == rng[h]):
                raise GroupoidError("composability", (a[g], a[h]), f"{a[g]}{a[h]} defined iff s({a[g]})=r({a[h]}) fails")
    for g in range(n):
        for h in range(n):
            gh = mul[g, h]
            for k in range(n):
                hk = mul[h, k]
                left = mul[gh, k] if gh >= 0 else -1
                right = mul[g, hk] if hk >= 0 else -1
                if left != right:
                    raise GroupoidError("associativity", (a[g], a[h], a[k]))


def _tables_from_raw(arrows, compose, inverse):
    arrows = [str(x) for x in arrows]
    index = {x: i for i, x in enumerate(arrows)}
    if len(index) != len(arrows):
        raise GroupoidError("distinct-arrows", (), "duplicate arrow identifiers")
    n = len(arrows)
    mul = np.full((n, n), -1, dtype=np.int64)
    for row in compose:
        g, h, k = (str(x) for x in row)
        for x in (g, h, k):
            if x not in index:
                raise GroupoidError("declared-arrows", (x,), f"undeclared arrow {x!r}")
        if mul[index[g], index[h]] not in (-1, index[k]):
            raise GroupoidError("single-valued", (g, h), f"{g}{h} given two values")
        mul[index[g], index[h]] = index[k]
    inv = np.full(n, -1, dtype=np.int64)
    for g, gi in inverse:
        g, gi = str(g), str(gi)
        for x in (g, gi):
            if x not in index:
                raise GroupoidError("declared-arrows", (x,), f"undeclared arrow {x!r}")
        inv[index[g]] = index[gi]
    missing = [arrows[i] for i in range(n) if inv[i] < 0]
    if missing:
        raise GroupoidError("missing-inverse", (missing[0],), f"no inverse given for {missing[0]!r}")
    return arrows, mul, inv


def validate_groupoid(raw: Mapping | None = None, *, arrows=None, compose=None, inverse=None, grading=None,
                      name: str = "") -> FiniteGroupoid:
    """Validate raw tables and return a :class:`FiniteGroupoid`.

    ``raw`` follows the ``groupoid/v1`` layout::

        {"arrows": [...], "compose": [[g, h, gh], ...], "inverse": [[g, g_inv], ...],
         "grading": {"gamma": <groupoid doc>, "map": [[g, gamma_arrow], ...]}}

    The same fields may be passed as keyword arguments instead.
    Raises :class:`GroupoidError` naming the first violated axiom.
    """
    if raw is not None:
        arrows, compose, inverse = raw["arrows"], raw["compose"], raw["inverse"]
        grading = raw.get("grading", grading)
        name = raw.get("name", name)
    names, mul, inv = _tables_from_raw(arrows, compose, inverse)
    G = FiniteGroupoid(names, mul, inv, name=name)
    if grading:
        gamma = grading["gamma"]
        if not isinstance(gamma, FiniteGroupoid):
            gamma = validate_groupoid(gamma)
        cmap = dict((str(g), str(c)) for g, c in grading["map"])
        missing = [a for a in G.arrows if a not in cmap]
        if missing:
            raise GroupoidError("grading-total", (missing[0],), f"grading undefined on {missing[0]!r}")
        G = G.with_grading(gamma, cmap)
    return G


def validate_grading(G: FiniteGroupoid, cmap: Sequence[int], gamma: FiniteGroupoid) -> bool:
    """Check that ``cmap`` (arrow index -> gamma arrow index) is a functor.

    Returns True, or raises :class:`GroupoidError` with the violating
    composable pair.
    """
    cmap = np.asarray(cmap, dtype=np.int64)
    if cmap.shape != (G.n,) or np.any(cmap < 0) or np.any(cmap >= gamma.n):
        raise GroupoidError("grading-total", (), "grading must map every arrow into gamma")
    for g, h, k in G.pairs.tolist():
        prod = gamma.mul[cmap[g], cmap[h]]
        if prod < 0 or prod != cmap[k]:
            raise GroupoidError("grading-functor", (G.arrows[g], G.arrows[h]),
                                f"c({G.arrows[g]}{G.arrows[h]}) != c({G.arrows[g]})c({G.arrows[h]})")
    return True


def is_grading(G: FiniteGroupoid, cmap: Sequence[int], gamma: FiniteGroupoid) -> bool:
    try:
        return validate_grading(G, cmap, gamma)
    except GroupoidError:
        return False


# -- standard constructions ----------------------------------------------


def group(table: Sequence[Sequence[int]] | None = None, *, order: int | None = None,
          labels: Sequence[str] | None = None, name: str = "") -> FiniteGroupoid:
    """A group as a one-unit groupoid; ``order=n`` gives the cyclic group Z/n.

    ``table[i][j]`` is the index of the product of elements ``i`` and ``j``;
    element 0 must be the identity.
    """
    if table is None:
        if order is None:
            raise ValueError("need a multiplication table or an order")
        table = [[(i + j) % order for j in range(order)] for i in range(order)]
        name = name or f"Z/{order}"
    mul = np.asarray(table, dtype=np.int64)
    n = len(mul)
    if any(mul[0, j] != j or mul[j, 0] != j for j in range(n)):
        raise GroupoidError("group-identity", (0,), "element 0 must be the identity")
    inv = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        js = [j for j in range(n) if mul[i, j] == 0]
        if len(js) != 1 or mul[js[0], i] != 0:
            raise GroupoidError("group-inverse", (i,), f"element {i} has no two-sided inverse")
        inv[i] = js[0]
    labels = list(labels) if labels else [str(i) for i in range(n)]
    return FiniteGroupoid(labels, mul, inv, name=name or "group")


def pair(n: int) -> FiniteGroupoid:
    """Pair groupoid on points ``1..n``: arrow ``(i,j)`` has range ``(i,i)`` and source ``(j,j)``."""
    pts = range(1, n + 1)
    arrows = [f"({i},{j})" for i in pts for j in pts]
    idx = {(i, j): k for k, (i, j) in enumerate((i, j) for i in pts for j in pts)}
    mul = np.full((n * n, n * n), -1, dtype=np.int64)
    inv = np.zeros(n * n, dtype=np.int64)
    for (i, j), k in idx.items():
        inv[k] = idx[(j, i)]
        for l in pts:
            mul[k, idx[(j, l)]] = idx[(i, l)]
    return FiniteGroupoid(arrows, mul, inv, name=f"pair({n})")


def unit_groupoid(points: int = 1) -> FiniteGroupoid:
    """The trivial groupoid whose arrows are all units."""
    arrows = [f"x{i}" for i in range(1, points + 1)]
    mul = np.full((points, points), -1, dtype=np.int64)
    np.fill_diagonal(mul, np.arange(points))
    return FiniteGroupoid(arrows, mul, np.arange(points), name=f"units({points})")


def transformation(group_table: Sequence[Sequence[int]], points: Sequence[str],
                   action: Sequence[Sequence[int]], name: str = "") -> FiniteGroupoid:
    """Transformation groupoid of a group acting on a finite set.

    ``action[h][x]`` is the index of ``h . x``.  Arrow ``(h,x)`` has source
    ``(e,x)`` and range ``(e,h.x)``; ``(h,k.x)(k,x) = (hk,x)``.
    """
    H = np.asarray(group_table, dtype=np.int64)
    act = np.asarray(action, dtype=np.int64)
    m, npts = len(H), len(points)
    if act.shape != (m, npts) or np.any(act < 0) or np.any(act >= npts):
        raise GroupoidError("action-table", (), "action table has the wrong shape")
    for x in range(npts):
        if act[0, x] != x:
            raise GroupoidError("action-identity", (0, x), "identity must act trivially")
        for h in range(m):
            for k in range(m):
                if act[H[h, k], x] != act[h, act[k, x]]:
                    raise GroupoidError("action-compatibility", (h, k, x), "(hk).x != h.(k.x)")
    hinv = [next(j for j in range(m) if H[i, j] == 0) for i in range(m)]
    idx = {(h, x): h * npts + x for h in range(m) for x in range(npts)}
    arrows = [f"({h},{points[x]})" for h in range(m) for x in range(npts)]
    mul = np.full((m * npts, m * npts), -1, dtype=np.int64)
    inv = np.zeros(m * npts, dtype=np.int64)
    for (h, x), i in idx.items():
        inv[i] = idx[(hinv[h], act[h, x])]
        for k in range(m):
            for y in range(npts):
                if act[k, y] == x:
                    mul[i, idx[(k, y)]] = idx[(H[h, k], y)]
    return FiniteGroupoid(arrows, mul, inv, name=name or "transformation")


def group_bundle(tables: Sequence[Sequence[Sequence[int]]], name: str = "") -> FiniteGroupoid:
    """Disjoint union of groups, one per point; arrow ``x:i`` is element ``i`` over point ``x``."""
    parts = [group(t) for t in tables]
    G = disjoint_union(*parts, prefixes=[f"x{p}:" for p in range(1, len(parts) + 1)])
    G.name = name or "group_bundle"
    return G


def disjoint_union(*parts: FiniteGroupoid, prefixes: Sequence[str] | None = None) -> FiniteGroupoid:
    if prefixes is None:
        prefixes = [f"{i}." for i in range(len(parts))]
    n = sum(P.n for P in parts)
    mul = np.full((n, n), -1, dtype=np.int64)
    inv = np.zeros(n, dtype=np.int64)
    arrows: list[str] = []
    off = 0
    for P, pre in zip(parts, prefixes):
        block = np.where(P.mul >= 0, P.mul + off, -1)
        mul[off:off + P.n, off:off + P.n] = block
        inv[off:off + P.n] = P.inv + off
        arrows += [pre + a for a in P.arrows]
        off += P.n
    return FiniteGroupoid(arrows, mul, inv, name=" + ".join(P.name or "?" for P in parts))


def build_standard_groupoid(kind: str, **params) -> FiniteGroupoid:
    """Dispatch to the named construction.

    kinds: ``group`` (``order`` or ``table``), ``pair`` (``n``), ``units``
    (``points``), ``transformation`` (``group_table``, ``points``, ``action``),
    ``group_bundle`` (``tables``), ``disjoint_union`` (``parts``).
    """
    if kind == "group":
        return group(params.get("table"), order=params.get("order"), labels=params.get("labels"))
    if kind == "pair":
        return pair(params["n"])
    if kind == "units":
        return unit_groupoid(params.get("points", 1))
    if kind == "transformation":
        return transformation(params["group_table"], params["points"], params["action"])
    if kind == "group_bundle":
        return group_bundle(params["tables"])
    if kind == "disjoint_union":
        return disjoint_union(*params["parts"])
    raise ValueError(f"unknown groupoid kind {kind!r}")


def cyclic_action_groupoid(n: int) -> FiniteGroupoid:
    """Z/n acting on ``n`` points by rotation (a free, transitive action)."""
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return transformation(table, [str(x) for x in range(n)], table, name=f"Z/{n} rotating {n} points")


# -- isomorphisms --------------------------------------------------------


def is_isomorphism(G: FiniteGroupoid, H: FiniteGroupoid, f: Sequence[int], graded: bool = False) -> bool:
    """Check that ``f`` (arrow index map) is a groupoid isomorphism G -> H."""
    f = np.asarray(f, dtype=np.int64)
    if G.n != H.n or sorted(f.tolist()) != list(range(H.n)):
        return False
    if np.any(H.inv[f] != f[G.inv]):
        return False
    for g in range(G.n):
        for h in range(G.n):
            k = G.mul[g, h]
            image = H.mul[f[g], f[h]]
            if (k < 0) != (image < 0) or (k >= 0 and f[k] != image):
                return False
    if graded:
        if G.grading is None or H.grading is None:
            return False
        if np.any(G.grading[1] != H.grading[1][f]):
            return False
    return True


def find_isomorphism(G: FiniteGroupoid, H: FiniteGroupoid, graded: bool = False) -> list[int] | None:
    """Backtracking search for an isomorphism G -> H (desk-scale groupoids only)."""
    if G.n != H.n or len(G.units) != len(H.units) or len(G.pairs) != len(H.pairs):
        return None

    def signature(K: FiniteGroupoid, g: int) -> tuple:
        s, r = int(K.src[g]), int(K.rng[g])
        return (g in K.units, s == r, int(np.sum(K.src == s)), int(np.sum(K.rng == r)))

    sig_g = [signature(G, g) for g in range(G.n)]
    sig_h = [signature(H, h) for h in range(H.n)]
    if sorted(sig_g) != sorted(sig_h):
        return None
    order = sorted(range(G.n), key=lambda g: (g not in G.units, sig_g[g]))
    f = [-1] * G.n
    used = [False] * H.n

    def consistent(g: int) -> bool:
        fg = f[g]
        if f[G.inv[g]] >= 0 and f[G.inv[g]] != H.inv[fg]:
            return False
        if graded and G.grading[1][g] != H.grading[1][fg]:
            return False
        for h in range(G.n):
            if f[h] < 0:
                continue
            for a, b in ((g, h), (h, g)):
                k = G.mul[a, b]
                image = H.mul[f[a], f[b]]
                if (k < 0) != (image < 0):
                    return False
                if k >= 0 and f[k] >= 0 and f[k] != image:
                    return False
        return True

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        g = order[i]
        for h in range(H.n):
            if used[h] or sig_h[h] != sig_g[g]:
                continue
            f[g], used[h] = h, True
            if consistent(g) and extend(i + 1):
                return True
            f[g], used[h] = -1, False
        return False

    if graded and (G.grading is None or H.grading is None):
        return None
    if extend(0) and is_isomorphism(G, H, f, graded=graded):
        return f
    return None


def point_permutation_iso(n: int, perm: Sequence[int]) -> list[int]:
    """Automorphism of ``pair(n)`` induced by a permutation of the points (0-based)."""
    return [perm[i] * n + perm[j] for i in range(n) for j in range(n)]


def all_permutations(n: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(n)))
