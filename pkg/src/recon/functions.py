"""Y-valued partial functions on a finite groupoid and families of them.

A partial function is stored as a row of length ``n`` (one slot per arrow)
holding a coefficient index, or ``-1`` where the function is undefined.
Families keep all rows in one array so products, lookups and subset tests
vectorise.  The empty function is the all ``-1`` row.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .coefficients import FiniteRing, Semigroupoid, centre, from_ring, invertibles
from .groupoid import FiniteGroupoid


class IllDefinedProduct(ValueError):
    """Neither factor has a bisection domain, so the product is not defined."""


class ClosureError(ValueError):
    def __init__(self, witness: tuple, message: str = "") -> None:
        self.witness = witness
        super().__init__(message or f"product of {witness} escapes the family")


class BudgetExceeded(RuntimeError):
    """A sweep would exceed its size budget; nothing was verified."""


@dataclass(frozen=True, order=True)
class PartialFn:
    """Finite partial function: sorted ``(arrow, value)`` index pairs."""

    items: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_mapping(cls, values: Mapping[int, int]) -> "PartialFn":
        return cls(tuple(sorted((int(g), int(y)) for g, y in values.items())))

    @property
    def dom(self) -> frozenset[int]:
        return frozenset(g for g, _ in self.items)

    def get(self, g: int) -> int | None:
        for h, y in self.items:
            if h == g:
                return y
        return None

    __call__ = get

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def preimage(self, values: Iterable[int]) -> frozenset[int]:
        values = set(values)
        return frozenset(g for g, y in self.items if y in values)


EMPTY = PartialFn()


class FnSpace:
    """All Y-valued partial functions on ``G``; knows how to multiply them.

    If ``ring`` is given, ``Y`` defaults to ``from_ring(ring)`` and
    convolution becomes available.
    """

    def __init__(self, G: FiniteGroupoid, Y: Semigroupoid | None = None, ring: FiniteRing | None = None) -> None:
        if Y is None:
            if ring is None:
                raise ValueError("need a coefficient semigroupoid or a ring")
            Y = from_ring(ring)
        if ring is None:
            ring = Y.ring
        self.G, self.Y, self.ring = G, Y, ring
        self.n = G.n
        self.base = Y.m + 1
        if self.base ** self.n >= 2 ** 62:
            raise ValueError("function keys would overflow int64; groupoid or coefficients too large")
        self.weights = self.base ** np.arange(self.n, dtype=np.int64)
        self.units_mask = np.zeros(self.n, dtype=bool)
        self.units_mask[list(G.units)] = True
        self.iso_mask = G.src == G.rng
        self._src_onehot = np.eye(self.n, dtype=np.int64)[G.src]
        self._rng_onehot = np.eye(self.n, dtype=np.int64)[G.rng]
        self.pairs = G.pairs
        inv = Y.inverse[: Y.m]
        self.invertible_value = np.append(inv >= 0, False)  # index -1 -> False
        self.central_value = np.zeros(Y.m + 1, dtype=bool)
        self.central_value[list(centre(Y))] = True
        self.y_inverse = Y.inverse
        if ring is not None:
            if Y.ring_index is None:
                raise ValueError("Y is not ring-derived")
            self.ring_of_y = np.append(Y.ring_index, ring.zero)
            self.y_of_ring = np.full(ring.q, -1, dtype=np.int64)
            self.y_of_ring[Y.ring_index] = np.arange(Y.m)
        if G.grading is not None:
            self.grade = G.grading[1]

    def __repr__(self) -> str:
        return f"<FnSpace {self.G.name or '?'} -> {self.Y.name or '?'}>"

    # -- conversions -----------------------------------------------------

    def row(self, a: PartialFn | Mapping[int, int]) -> np.ndarray:
        r = np.full(self.n, -1, dtype=np.int64)
        items = a.items if isinstance(a, PartialFn) else a.items()
        for g, y in items:
            r[g] = y
        return r

    def rows(self, fns: Iterable[PartialFn]) -> np.ndarray:
        out = [self.row(a) for a in fns]
        return np.array(out, dtype=np.int64).reshape(len(out), self.n)

    def fn(self, row: np.ndarray) -> PartialFn:
        return PartialFn(tuple((int(g), int(row[g])) for g in np.flatnonzero(row >= 0)))

    def keys(self, rows: np.ndarray) -> np.ndarray:
        return (np.asarray(rows) + 1) @ self.weights

    def unkey(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        return (keys[..., None] // self.weights) % self.base - 1

    def describe(self, a: PartialFn | np.ndarray) -> dict[str, str]:
        if not isinstance(a, PartialFn):
            a = self.fn(a)
        return {self.G.arrows[g]: self.Y.names[y] for g, y in a.items}

    def parse(self, values: Mapping[str, str]) -> PartialFn:
        return PartialFn.from_mapping({self.G.index(g): self.Y.index(y) for g, y in values.items()})

    # -- predicates on rows ----------------------------------------------

    def bisection_mask(self, rows: np.ndarray) -> np.ndarray:
        dom = (np.asarray(rows) >= 0).astype(np.int64)
        return np.all(dom @ self._src_onehot <= 1, axis=-1) & np.all(dom @ self._rng_onehot <= 1, axis=-1)

    def isosection_mask(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows)
        dom = rows >= 0
        s, r = self.G.src, self.G.rng
        same_s = s[:, None] == s[None, :]
        same_r = r[:, None] == r[None, :]
        bad = same_s != same_r
        return ~np.any(dom[..., :, None] & dom[..., None, :] & bad, axis=(-2, -1))

    def dom_subset_mask(self, rows: np.ndarray, allowed: np.ndarray) -> np.ndarray:
        return ~np.any((np.asarray(rows) >= 0) & ~allowed, axis=-1)

    def range_mask(self, rows: np.ndarray, value_ok: np.ndarray) -> np.ndarray:
        """Rows whose values all satisfy ``value_ok`` (indexed by coefficient, -1 ignored)."""
        rows = np.asarray(rows)
        return np.all((rows < 0) | value_ok[rows], axis=-1)

    def dom_bits(self, rows: np.ndarray) -> np.ndarray:
        return (np.asarray(rows) >= 0).astype(np.int64) @ (np.int64(1) << np.arange(self.n, dtype=np.int64))

    # -- products ---------------------------------------------------------

    def product_rows(self, A: np.ndarray, B: np.ndarray, check: bool = True) -> np.ndarray:
        """Bisection product of broadcastable row arrays.

        ``ab(gh) = a(g)b(h)`` wherever ``gh`` and ``a(g)b(h)`` are defined.
        """
        A, B = np.asarray(A), np.asarray(B)
        if check:
            ok = self.bisection_mask(A) | self.bisection_mask(B)
            if not np.all(ok):
                raise IllDefinedProduct("neither factor has a bisection domain")
        shape = np.broadcast_shapes(A.shape, B.shape)
        out = np.full(shape, -1, dtype=np.int64)
        mul = self.Y.mul_pad
        for g, h, f in self.pairs.tolist():
            v = mul[A[..., g], B[..., h]]
            out[..., f] = np.where(v >= 0, v, out[..., f])
        return out

    def multiply(self, a: PartialFn, b: PartialFn) -> PartialFn:
        return self.fn(self.product_rows(self.row(a)[None], self.row(b)[None])[0])

    def to_ring_rows(self, rows: np.ndarray) -> np.ndarray:
        return self.ring_of_y[np.asarray(rows)]

    def from_ring_rows(self, rrows: np.ndarray) -> np.ndarray:
        return self.y_of_ring[np.asarray(rrows)]

    def convolve_ring_rows(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Convolution of total ring-valued functions (rows of ring indices)."""
        R = self.ring
        if R is None:
            raise ValueError("convolution needs a coefficient ring")
        A, B = np.asarray(A), np.asarray(B)
        shape = np.broadcast_shapes(A.shape, B.shape)
        out = np.full(shape, R.zero, dtype=np.int64)
        for g, h, f in self.pairs.tolist():
            out[..., f] = R.add[out[..., f], R.mul[A[..., g], B[..., h]]]
        return out

    def convolve_rows(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Convolution of support-restricted rows, returned support-restricted."""
        return self.from_ring_rows(self.convolve_ring_rows(self.to_ring_rows(A), self.to_ring_rows(B)))

    def convolve(self, a: Sequence[int], b: Sequence[int]) -> np.ndarray:
        """Convolution of two total functions given as ring-index vectors."""
        return self.convolve_ring_rows(np.asarray(a)[None], np.asarray(b)[None])[0]

    def support_restrict(self, a: Sequence[int]) -> PartialFn:
        return self.fn(self.from_ring_rows(np.asarray(a)))

    def total(self, a: PartialFn) -> np.ndarray:
        return self.to_ring_rows(self.row(a))

    def product(self, A: np.ndarray, B: np.ndarray, mode: str, check: bool = True) -> np.ndarray:
        if mode == "convolution":
            return self.convolve_rows(A, B)
        return self.product_rows(A, B, check=check)


MODES = ("bisection", "convolution")


class FnFamily:
    """A multiplicatively closed set ``A`` of partial functions with its designated subsets.

    Elements are indexed ``0..k-1`` in canonical order (support size, then
    key), so the empty function, if present, is element 0.

    Designated subsets (index arrays): ``Z`` central-valued with unit-space
    domain, ``D`` unit-space domain, ``S`` bisection domain, ``C`` domain in
    the isotropy, ``N`` isosection domain, ``R`` bisection domain with
    invertible values.
    """

    TABLE_CAP = 4000

    def __init__(self, space: FnSpace, rows: np.ndarray, mode: str = "bisection", *, check_closure: bool = True,
                 name: str = "", closure_budget: int = 16_000_000, graded: bool = False) -> None:
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if mode == "convolution" and space.ring is None:
            raise ValueError("convolution mode needs a ring-derived coefficient system")
        self.space, self.mode, self.name = space, mode, name
        self.G, self.Y = space.G, space.Y
        # graded families only ever need homogeneous domains
        self.graded = bool(graded)
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, space.n)
        keys = space.keys(rows)
        keys, first = np.unique(keys, return_index=True)
        rows = rows[first]
        size = np.sum(rows >= 0, axis=1)
        order = np.lexsort((keys, size))
        self.rows = rows[order]
        self.rows.setflags(write=False)
        self.keys = keys[order]
        self.k = len(self.rows)
        self._sorted = np.argsort(self.keys)
        self._sorted_keys = self.keys[self._sorted]
        sp = space
        self.is_bisection = sp.bisection_mask(self.rows)
        self.in_units = sp.dom_subset_mask(self.rows, sp.units_mask)
        self.in_iso = sp.dom_subset_mask(self.rows, sp.iso_mask)
        self.is_isosection = sp.isosection_mask(self.rows)
        self.central_valued = sp.range_mask(self.rows, sp.central_value)
        self.invertible_valued = sp.range_mask(self.rows, sp.invertible_value)
        self.dom_bits = sp.dom_bits(self.rows)
        self.Z = np.flatnonzero(self.in_units & self.central_valued)
        self.D = np.flatnonzero(self.in_units)
        self.S = np.flatnonzero(self.is_bisection)
        self.C = np.flatnonzero(self.in_iso)
        self.N = np.flatnonzero(self.is_isosection)
        self.R = np.flatnonzero(self.is_bisection & self.invertible_valued)
        empty = self.lookup(np.full((1, sp.n), -1))[0]
        self.zero = int(empty) if empty >= 0 else None
        self._table = None
        if check_closure:
            self.check_closure(closure_budget)

    def __repr__(self) -> str:
        return f"<FnFamily {self.name or '?'}: |A|={self.k}, |S|={len(self.S)}, mode={self.mode}>"

    def __len__(self) -> int:
        return self.k

    def __contains__(self, a: PartialFn) -> bool:
        return self.index_of(a) is not None

    # -- element access --------------------------------------------------

    def fn(self, i: int) -> PartialFn:
        return self.space.fn(self.rows[i])

    def fns(self, idx: Iterable[int] | None = None) -> list[PartialFn]:
        idx = range(self.k) if idx is None else idx
        return [self.fn(i) for i in idx]

    def index_of(self, a: PartialFn) -> int | None:
        i = int(self.lookup(self.space.row(a)[None])[0])
        return None if i < 0 else i

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Family indices of rows (``-1`` where absent)."""
        return self.lookup_keys(self.space.keys(rows))

    def lookup_keys(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self.k - 1)
        hit = self._sorted_keys[pos] == keys
        return np.where(hit, self._sorted[pos], -1)

    def mask(self, idx: Iterable[int]) -> np.ndarray:
        m = np.zeros(self.k, dtype=bool)
        m[np.asarray(list(idx) if not isinstance(idx, np.ndarray) else idx, dtype=np.int64)] = True
        return m

    # -- products ---------------------------------------------------------

    def defined_mask(self, I: np.ndarray, J: np.ndarray) -> np.ndarray:
        if self.mode == "convolution":
            return np.ones(np.broadcast_shapes(np.shape(I), np.shape(J)), dtype=bool)
        return self.is_bisection[I] | self.is_bisection[J]

    def product_rows(self, I, J) -> np.ndarray:
        """Rows of products ``a_i a_j`` (broadcast); raises if any product is ill-defined."""
        I, J = np.asarray(I), np.asarray(J)
        if self.mode == "bisection" and not np.all(self.defined_mask(I, J)):
            raise IllDefinedProduct("product of two non-bisection elements in bisection mode")
        return self.space.product(self.rows[I], self.rows[J], self.mode, check=False)

    def product_keys(self, I, J) -> np.ndarray:
        return self.space.keys(self.product_rows(I, J))

    def prod(self, I, J) -> np.ndarray:
        """Family indices of products (``-1`` if the product leaves the family)."""
        I, J = np.asarray(I), np.asarray(J)
        if self._table is not None:
            out = self._table[I, J]
            if self.mode == "bisection" and np.any(out == -2):
                raise IllDefinedProduct("product of two non-bisection elements in bisection mode")
            return out
        return self.lookup(self.product_rows(I, J))

    def multiply(self, a: PartialFn, b: PartialFn) -> PartialFn:
        return self.space.fn(self.space.product(self.space.row(a)[None], self.space.row(b)[None], self.mode)[0])

    def table(self) -> np.ndarray:
        """Full Cayley table; ``-2`` marks ill-defined products (bisection mode)."""
        if self._table is None:
            if self.k > self.TABLE_CAP:
                raise BudgetExceeded(f"Cayley table of {self.k} elements exceeds cap {self.TABLE_CAP}")
            T = np.full((self.k, self.k), -2, dtype=np.int32)
            step = max(1, 200_000 // max(1, self.k * self.space.n))
            allj = np.arange(self.k)
            for start in range(0, self.k, step):
                I = np.arange(start, min(self.k, start + step))
                ii, jj = np.meshgrid(I, allj, indexing="ij")
                ok = self.defined_mask(ii, jj)
                rows = self.space.product(self.rows[ii], self.rows[jj], self.mode, check=False)
                T[start:start + len(I)] = np.where(ok, self.lookup(rows), -2)
            self._table = T
        return self._table

    def check_closure(self, budget: int = 16_000_000) -> None:
        if self.k * self.k > budget or self.k > self.TABLE_CAP:
            raise BudgetExceeded(f"closure check over {self.k}^2 pairs exceeds budget {budget}")
        T = self.table()
        bad = np.argwhere(T == -1)
        if len(bad):
            i, j = bad[0]
            raise ClosureError((self.space.describe(self.rows[i]), self.space.describe(self.rows[j])))

    # -- grading ------------------------------------------------------------

    def grade(self, i: int) -> int | None:
        """Grade of a nonempty element with homogeneous domain, else None."""
        if self.G.grading is None:
            return None
        dom = np.flatnonzero(self.rows[i] >= 0)
        grades = set(self.space.grade[dom].tolist())
        return grades.pop() if len(grades) == 1 else None

    def is_homogeneous(self) -> bool:
        if self.G.grading is None:
            return True
        return all(self.grade(i) is not None for i in range(self.k) if i != self.zero)

    # -- restriction --------------------------------------------------------

    def subfamily(self, idx: Iterable[int], mode: str | None = None, name: str = "",
                  check_closure: bool = True) -> "FnFamily":
        idx = np.asarray(list(idx) if not isinstance(idx, np.ndarray) else idx, dtype=np.int64)
        return FnFamily(self.space, self.rows[idx], mode or self.mode, check_closure=check_closure,
                        name=name or f"{self.name}|sub", graded=self.graded)

    def s_family(self) -> "FnFamily":
        """``S`` as a family in its own right (bisection products only)."""
        return self.subfamily(self.S, mode="bisection", name=f"{self.name}|S")

    def to_records(self, idx: Iterable[int] | None = None) -> list[dict[str, str]]:
        idx = range(self.k) if idx is None else idx
        return [self.space.describe(self.rows[i]) for i in idx]


def classify(space: FnSpace, fns: Iterable[PartialFn] | np.ndarray, mode: str = "bisection", name: str = "",
             **kw) -> FnFamily:
    """Wrap a multiplicatively closed set as an :class:`FnFamily` (checks closure)."""
    rows = fns if isinstance(fns, np.ndarray) else space.rows(list(fns))
    return FnFamily(space, rows, mode, name=name, **kw)


def closure(space: FnSpace, generators: Iterable[PartialFn], mode: str = "bisection", cap: int = 20_000,
            name: str = "") -> FnFamily:
    """Subsemigroup generated by ``generators`` (worklist closure, hard cap)."""
    rows = space.rows(list(generators))
    keys = set(space.keys(rows).tolist())
    known = list(rows)
    frontier = rows
    while len(frontier):
        allrows = np.array(known)
        new = []
        for block in (space.product(frontier[:, None, :], allrows[None, :, :], mode),
                      space.product(allrows[:, None, :], frontier[None, :, :], mode)):
            block = block.reshape(-1, space.n)
            for r, key in zip(block, space.keys(block).tolist()):
                if key not in keys:
                    keys.add(key)
                    new.append(r)
                    if len(keys) > cap:
                        raise BudgetExceeded(f"closure exceeds {cap} elements")
        known += new
        frontier = np.array(new, dtype=np.int64).reshape(-1, space.n)
    return FnFamily(space, np.array(known), mode, name=name or "closure")


def _labelled(space: FnSpace, domains: Iterable[Sequence[int]], values: Sequence[int]) -> np.ndarray:
    out = []
    for B in domains:
        B = sorted(B)
        for labels in itertools.product(values, repeat=len(B)):
            r = np.full(space.n, -1, dtype=np.int64)
            r[B] = labels
            out.append(r)
    return np.array(out, dtype=np.int64).reshape(-1, space.n)


def canonical_bumpy(G: FiniteGroupoid, Y: Semigroupoid, graded: bool = False, name: str = "") -> FnFamily:
    """All ``Y^x``-valued functions on bisections (homogeneous ones if ``graded``)."""
    space = FnSpace(G, Y)
    bis = [B for B in G.bisections() if not graded or G.is_homogeneous(B)]
    rows = _labelled(space, bis, sorted(invertibles(Y)))
    return FnFamily(space, rows, "bisection", name=name or f"bumpy({G.name},{Y.name})", graded=graded)


def steinberg_family(G: FiniteGroupoid, ring: FiniteRing, graded: bool = False, name: str = "") -> FnFamily:
    """All ring-valued functions on ``G`` (support-restricted) under convolution.

    With ``graded`` only functions with homogeneous support are kept, which
    is again closed under convolution.
    """
    space = FnSpace(G, ring=ring)
    if graded:
        if G.grading is None:
            raise ValueError("graded family needs a graded groupoid")
        classes: dict[int, list[int]] = {}
        for g in range(G.n):
            classes.setdefault(G.grade(g), []).append(g)
        doms = {frozenset()}
        for members in classes.values():
            for r in range(1, len(members) + 1):
                doms.update(frozenset(c) for c in itertools.combinations(members, r))
        rows = np.unique(_labelled(space, [sorted(d) for d in doms], range(space.Y.m)), axis=0)
    else:
        grid = np.indices((space.Y.m + 1,) * G.n).reshape(G.n, -1).T - 1
        rows = grid.astype(np.int64)
    check = len(rows) <= 1500
    return FnFamily(space, rows, "convolution", check_closure=check, name=name or f"A_{ring.name}({G.name})",
                    graded=graded)
