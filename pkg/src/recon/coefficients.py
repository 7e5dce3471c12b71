"""Finite coefficient semigroupoids and the rings they come from.

A :class:`Semigroupoid` has elements ``0..m-1`` and a partial product table
(``-1`` = undefined).  Every derived subset is computed by exhaustive scan.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

import numpy as np


class CoefficientError(ValueError):
    def __init__(self, axiom: str, witness: tuple, message: str = "") -> None:
        self.axiom = axiom
        self.witness = witness
        super().__init__(message or f"{axiom} violated at {witness}")


class Semigroupoid:
    """Finite set with a partial associative product and an optional unit."""

    def __init__(self, names: Sequence[str], mul, unit: int | None = None, name: str = "",
                 ring: "FiniteRing | None" = None, ring_index: Sequence[int] | None = None) -> None:
        self.names = tuple(str(x) for x in names)
        self.m = len(self.names)
        self.mul = np.asarray(mul, dtype=np.int64).reshape(self.m, self.m)
        self.mul.setflags(write=False)
        self.unit = unit
        self.name = name
        self.ring = ring
        self.ring_index = None if ring_index is None else np.asarray(ring_index, dtype=np.int64)
        self._index = {x: i for i, x in enumerate(self.names)}
        _check_semigroupoid(self)
        # padded table: row/col -1 (undefined input) maps to undefined
        pad = np.full((self.m + 1, self.m + 1), -1, dtype=np.int64)
        pad[: self.m, : self.m] = self.mul
        self.mul_pad = pad
        self._inverse = None

    def __repr__(self) -> str:
        return f"<Semigroupoid {self.name or '?'}: {self.m} elements>"

    def __len__(self) -> int:
        return self.m

    def index(self, name) -> int:
        return self._index[str(name)]

    def product(self, y: int, z: int) -> int | None:
        k = int(self.mul[y, z])
        return None if k < 0 else k

    @property
    def is_total(self) -> bool:
        return bool(np.all(self.mul >= 0))

    @property
    def inverse(self) -> np.ndarray:
        """``inverse[y]`` is the two-sided inverse of ``y``, or -1."""
        if self._inverse is None:
            inv = np.full(self.m + 1, -1, dtype=np.int64)
            if self.unit is not None:
                for y in range(self.m):
                    for z in range(self.m):
                        if self.mul[y, z] == self.unit and self.mul[z, y] == self.unit:
                            inv[y] = z
                            break
            self._inverse = inv
        return self._inverse

    def to_raw(self) -> dict:
        doc = {
            "schema": "semigroupoid/v1",
            "elements": list(self.names),
            "product": [
                [self.names[y], self.names[z], self.names[self.mul[y, z]]]
                for y in range(self.m) for z in range(self.m) if self.mul[y, z] >= 0
            ],
        }
        if self.unit is not None:
            doc["unit"] = self.names[self.unit]
        return doc


def _check_semigroupoid(Y: Semigroupoid) -> None:
    m, mul = Y.m, Y.mul
    if np.any(mul < -1) or np.any(mul >= m):
        raise CoefficientError("declared-elements", (), "product table references undeclared elements")
    pad = np.full((m + 1, m + 1), -1, dtype=np.int64)
    pad[:m, :m] = mul
    y, z = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    for x in range(m):
        bad = np.argwhere(pad[pad[x, y], z] != pad[x, pad[y, z]])
        if len(bad):
            j, k = bad[0]
            raise CoefficientError("associativity", (Y.names[x], Y.names[j], Y.names[k]))
    if Y.unit is not None:
        u = Y.unit
        for y in range(m):
            if mul[u, y] != y or mul[y, u] != y:
                raise CoefficientError("unit", (Y.names[y],), f"1*{Y.names[y]} or {Y.names[y]}*1 is not {Y.names[y]}")


def validate_semigroupoid(raw: Mapping) -> Semigroupoid:
    """Build a semigroupoid from a ``semigroupoid/v1`` document."""
    names = [str(x) for x in raw["elements"]]
    index = {x: i for i, x in enumerate(names)}
    if len(index) != len(names):
        raise CoefficientError("distinct-elements", (), "duplicate element names")
    mul = np.full((len(names), len(names)), -1, dtype=np.int64)
    for y, z, yz in raw["product"]:
        for x in (y, z, yz):
            if str(x) not in index:
                raise CoefficientError("declared-elements", (x,), f"undeclared element {x!r}")
        mul[index[str(y)], index[str(z)]] = index[str(yz)]
    unit = raw.get("unit")
    return Semigroupoid(names, mul, None if unit is None else index[str(unit)], name=raw.get("name", ""))


def trivial() -> Semigroupoid:
    """The one-element semigroup {1}."""
    return Semigroupoid(["1"], [[0]], unit=0, name="{1}")


def from_group_table(table: Sequence[Sequence[int]], labels: Sequence[str] | None = None, name: str = "") -> Semigroupoid:
    """A finite group (identity at index 0) as a coefficient semigroup."""
    table = np.asarray(table, dtype=np.int64)
    labels = labels or [str(i) for i in range(len(table))]
    return Semigroupoid(labels, table, unit=0, name=name or "group")


# -- derived subsets ----------------------------------------------------------


def one_cancellative_witness(Y: Semigroupoid) -> tuple[int, int] | None:
    """First ``(x, y)`` breaking ``xy=x <=> y=1 <=> yx=x``, or None."""
    if Y.unit is None or not Y.is_total:
        raise ValueError("1-cancellativity is defined for unital total semigroups")
    for x in range(Y.m):
        for y in range(Y.m):
            is_one = y == Y.unit
            if (Y.mul[x, y] == x) != is_one or (Y.mul[y, x] == x) != is_one:
                return (x, y)
    return None


def is_one_cancellative(Y: Semigroupoid) -> bool:
    return one_cancellative_witness(Y) is None


def invertibles(Y: Semigroupoid) -> frozenset[int]:
    return frozenset(int(y) for y in np.flatnonzero(Y.inverse[: Y.m] >= 0))


def _commute(Y: Semigroupoid, y: int, z: int) -> bool:
    # yz = zy: defined iff defined, then equal
    return Y.mul[y, z] == Y.mul[z, y]


def centre(Y: Semigroupoid) -> frozenset[int]:
    return frozenset(z for z in range(Y.m) if all(_commute(Y, y, z) for y in range(Y.m)))


def idempotents(Y: Semigroupoid) -> frozenset[int]:
    return frozenset(y for y in range(Y.m) if Y.mul[y, y] == y)


def central_idempotents(Y: Semigroupoid) -> frozenset[int]:
    return idempotents(Y) & centre(Y)


def is_indecomposable(Y: Semigroupoid) -> bool:
    if Y.unit is None:
        raise ValueError("indecomposability needs a unit")
    return central_idempotents(Y) == {Y.unit}


def _quasi_inverses(Y: Semigroupoid, y: int, allowed: frozenset[int] | None = None) -> Iterable[int]:
    mul = Y.mul_pad
    for w in range(Y.m):
        yw, wy = mul[y, w], mul[w, y]
        if mul[yw, y] != y or mul[wy, w] != w:
            continue
        if allowed is not None and (yw not in allowed or wy not in allowed):
            continue
        yield w


def regular_elements(Y: Semigroupoid) -> frozenset[int]:
    return frozenset(y for y in range(Y.m) if next(iter(_quasi_inverses(Y, y)), None) is not None)


def z_regular_elements(Y: Semigroupoid, Z: Iterable[int]) -> frozenset[int]:
    """Elements with a quasi-inverse ``y'`` such that ``yy'`` and ``y'y`` lie in ``Z``."""
    Z = frozenset(Z)
    if not Z <= centre(Y):
        raise ValueError("Z must be a subset of the centre")
    return frozenset(y for y in range(Y.m) if next(iter(_quasi_inverses(Y, y, Z)), None) is not None)


# -- rings --------------------------------------------------------------------


class FiniteRing:
    """A finite unital ring given by addition and multiplication tables."""

    def __init__(self, names: Sequence[str], add, mul, zero: int = 0, one: int = 1, name: str = "",
                 validate: bool = True) -> None:
        self.names = tuple(str(x) for x in names)
        self.q = len(self.names)
        self.add = np.asarray(add, dtype=np.int64)
        self.mul = np.asarray(mul, dtype=np.int64)
        self.zero, self.one = zero, one
        self.name = name
        self._index = {x: i for i, x in enumerate(self.names)}
        if validate:
            _check_ring(self)
        self.neg = np.array([int(np.flatnonzero(self.add[x] == zero)[0]) for x in range(self.q)])

    def __repr__(self) -> str:
        return f"<FiniteRing {self.name or '?'}: {self.q} elements>"

    def index(self, name) -> int:
        return self._index[str(name)]

    def to_raw(self) -> dict:
        return {
            "schema": "ring/v1",
            "name": self.name,
            "elements": list(self.names),
            "zero": self.names[self.zero],
            "one": self.names[self.one],
            "add": self.add.tolist(),
            "mul": self.mul.tolist(),
        }


def _check_ring(R: FiniteRing) -> None:
    q, add, mul, z, o = R.q, R.add, R.mul, R.zero, R.one
    if add.shape != (q, q) or mul.shape != (q, q):
        raise CoefficientError("table-shape", ())
    if np.any((add < 0) | (add >= q)) or np.any((mul < 0) | (mul >= q)):
        raise CoefficientError("declared-elements", ())
    if z == o and q > 1:
        raise CoefficientError("one-not-zero", ())
    if not np.array_equal(add, add.T):
        raise CoefficientError("additive-commutativity", ())
    if np.any(add[z] != np.arange(q)):
        raise CoefficientError("additive-identity", ())
    if np.any([not np.any(add[x] == z) for x in range(q)]):
        raise CoefficientError("additive-inverse", ())
    if np.any(mul[o] != np.arange(q)) or np.any(mul[:, o] != np.arange(q)):
        raise CoefficientError("multiplicative-identity", ())
    y, w = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    for x in range(q):
        if np.any(add[add[x, y], w] != add[x, add[y, w]]):
            raise CoefficientError("additive-associativity", (R.names[x],))
        if np.any(mul[mul[x, y], w] != mul[x, mul[y, w]]):
            raise CoefficientError("multiplicative-associativity", (R.names[x],))
        if np.any(mul[x, add[y, w]] != add[mul[x, y], mul[x, w]]) or np.any(mul[add[x, y], w] != add[mul[x, w], mul[y, w]]):
            raise CoefficientError("distributivity", (R.names[x],))


def validate_ring(raw: Mapping) -> FiniteRing:
    names = [str(x) for x in raw["elements"]]
    index = {x: i for i, x in enumerate(names)}

    def table(t):
        t = np.asarray(t)
        if t.dtype.kind in "iu":
            return t
        return np.vectorize(lambda x: index[str(x)])(t)

    return FiniteRing(names, table(raw["add"]), table(raw["mul"]), index[str(raw.get("zero", names[0]))],
                      index[str(raw.get("one", names[1]))], name=raw.get("name", ""))


def zmod(n: int) -> FiniteRing:
    r = np.arange(n)
    return FiniteRing([str(i) for i in range(n)], (r[:, None] + r[None, :]) % n, (r[:, None] * r[None, :]) % n,
                      0, 1 % n, name=f"Z/{n}")


# (p, degree, low coefficients of a monic irreducible, lowest first)
_IRREDUCIBLE = {4: (2, 2, (1, 1)), 8: (2, 3, (1, 1, 0)), 9: (3, 2, (1, 0))}


def gf(q: int) -> FiniteRing:
    """The finite field with ``q`` elements, ``q`` prime or one of 4, 8, 9."""
    if q in _IRREDUCIBLE:
        p, k, low = _IRREDUCIBLE[q]
        elems = list(itertools.product(range(p), repeat=k))  # little-endian coefficient tuples
        elems.sort(key=lambda c: sum(ci * p ** i for i, ci in enumerate(c)))
        code = {c: i for i, c in enumerate(elems)}

        def times(a, b):
            prod = [0] * (2 * k - 1)
            for i, ai in enumerate(a):
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
            for d in range(2 * k - 2, k - 1, -1):
                c = prod[d]
                if c:
                    prod[d] = 0
                    for i, li in enumerate(low):
                        prod[d - k + i] = (prod[d - k + i] - c * li) % p
            return tuple(prod[:k])

        add = [[code[tuple((x + y) % p for x, y in zip(a, b))] for b in elems] for a in elems]
        mul = [[code[times(a, b)] for b in elems] for a in elems]

        def label(c):
            terms = []
            for i in reversed(range(k)):
                if not c[i]:
                    continue
                if i == 0:
                    terms.append(str(c[i]))
                else:
                    mono = "x" if i == 1 else f"x^{i}"
                    terms.append(mono if c[i] == 1 else f"{c[i]}{mono}")
            return "+".join(terms) or "0"

        return FiniteRing([label(c) for c in elems], add, mul, 0, 1, name=f"F{q}")
    if q < 2 or any(q % d == 0 for d in range(2, q)):
        raise ValueError(f"no field of order {q} available")
    R = zmod(q)
    R.name = f"F{q}"
    return R


def product_ring(R1: FiniteRing, R2: FiniteRing) -> FiniteRing:
    pairs = list(itertools.product(range(R1.q), range(R2.q)))
    code = {p: i for i, p in enumerate(pairs)}
    add = [[code[(R1.add[a, c], R2.add[b, d])] for (c, d) in pairs] for (a, b) in pairs]
    mul = [[code[(R1.mul[a, c], R2.mul[b, d])] for (c, d) in pairs] for (a, b) in pairs]
    names = [f"({R1.names[a]},{R2.names[b]})" for a, b in pairs]
    return FiniteRing(names, add, mul, code[(R1.zero, R2.zero)], code[(R1.one, R2.one)],
                      name=f"{R1.name}x{R2.name}")


def group_ring(K: FiniteRing, table: Sequence[Sequence[int]], name: str = "") -> FiniteRing:
    """Group ring ``K[H]`` (identity of ``H`` at index 0) built by convolution.

    Elements are coefficient vectors indexed in base ``|K|``, little-endian.
    The ring axioms hold by construction; the cubic table check is only
    re-run for group rings with at most 256 elements.
    """
    H = np.asarray(table, dtype=np.int64)
    h = len(H)
    q = K.q
    vecs = np.array(list(itertools.product(range(q), repeat=h)))[:, ::-1]  # vecs[i, j] = digit j of i
    weights = q ** np.arange(h)

    def encode(v):
        return v @ weights

    size = len(vecs)
    add = np.empty((size, size), dtype=np.int64)
    for i in range(size):
        add[i] = encode(K.add[vecs[i][None, :], vecs])
    mul = np.empty((size, size), dtype=np.int64)
    for i in range(size):
        acc = np.full((size, h), K.zero, dtype=np.int64)
        for g in range(h):
            for k in range(h):
                acc[:, H[g, k]] = K.add[acc[:, H[g, k]], K.mul[vecs[i, g], vecs[:, k]]]
        mul[i] = encode(acc)
    zero = int(encode(np.full(h, K.zero)))
    one_vec = np.full(h, K.zero)
    one_vec[0] = K.one
    names = ["[" + ",".join(K.names[c] for c in v) + "]" for v in vecs]
    return FiniteRing(names, add, mul, zero, int(encode(one_vec)), name=name or f"{K.name}[H{h}]",
                      validate=size <= 256)


def ring_units(R: FiniteRing) -> frozenset[int]:
    return frozenset(
        x for x in range(R.q) if any(R.mul[x, y] == R.one and R.mul[y, x] == R.one for y in range(R.q))
    )


def from_ring(R: FiniteRing) -> Semigroupoid:
    """``R \\ {0}`` with ``yz`` defined iff the ring product is nonzero."""
    keep = [x for x in range(R.q) if x != R.zero]
    pos = {x: i for i, x in enumerate(keep)}
    mul = np.full((len(keep), len(keep)), -1, dtype=np.int64)
    for i, x in enumerate(keep):
        for j, y in enumerate(keep):
            xy = R.mul[x, y]
            if xy != R.zero:
                mul[i, j] = pos[xy]
    return Semigroupoid([R.names[x] for x in keep], mul, unit=pos[R.one], name=f"{R.name}\\0",
                        ring=R, ring_index=keep)
