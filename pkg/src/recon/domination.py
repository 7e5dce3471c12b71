"""The domination relation on ``S`` and its two characterisations.

``a <_s b`` iff ``asb = a = bsa`` and ``as, sa in D``.  All sweeps work on
``S``-local indices (positions within ``F.S``) and a cached Cayley table of
``S``; results are translated back to family indices at the API boundary.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .axioms import check_compact_bumpy
from .config import budget as _budget
from .functions import BudgetExceeded, FnFamily
from .report import Report, Status


class Domination:
    """Domination data for ``F.S``: local product table, ``V[a,s,b]`` and ``prec``."""

    def __init__(self, F: FnFamily, budget: int | None = None) -> None:
        self.F = F
        self.idx = F.S
        self.k = len(self.idx)
        self.budget = _budget(budget)
        if self.k > F.TABLE_CAP:
            raise BudgetExceeded(f"|S| = {self.k} exceeds the product-table cap {F.TABLE_CAP}")
        self.pos = np.full(F.k, -1, dtype=np.int64)
        self.pos[self.idx] = np.arange(self.k)
        ii, jj = np.meshgrid(self.idx, self.idx, indexing="ij")
        if F.k <= F.TABLE_CAP:
            prod = F.table()[ii, jj].astype(np.int64)
        else:
            prod = F.prod(ii, jj)
        if np.any(prod < 0):
            raise ValueError("S is not closed under the product")
        self.table = self.pos[prod]
        if np.any(self.table < 0):
            raise ValueError("a product of bisection-domain elements left S")
        self.in_D = F.in_units[self.idx]
        self.zero = None if F.zero is None else int(self.pos[F.zero])

    def require_cubic(self) -> None:
        """Raise unless ``|S|`` is within the budget for triple sweeps."""
        if self.k > self.budget:
            raise BudgetExceeded(f"|S| = {self.k} exceeds budget {self.budget}")

    def local(self, i: int) -> int:
        p = int(self.pos[i])
        if p < 0:
            raise ValueError(f"element {i} is not in S")
        return p

    def via_row(self, a: int) -> np.ndarray:
        """``V[a]`` as a (s, b) boolean matrix, ``a`` local."""
        T = self.table
        AS = T[a, :]
        SA = T[:, a]
        left = T[AS, :] == a  # (a s) b == a
        right = T[:, SA].T == a  # b (s a) == a
        return left & right & self.in_D[AS][:, None] & self.in_D[SA][:, None]

    def sparse_via_row(self, a: int) -> tuple[np.ndarray, np.ndarray]:
        """``(Q, V[a][Q])`` where ``Q`` lists the ``s`` with ``as, sa in D``."""
        T = self.table
        AS = T[a, :]
        SA = T[:, a]
        Q = np.flatnonzero(self.in_D[AS] & self.in_D[SA])
        left = T[AS[Q], :] == a
        right = T[:, SA[Q]].T == a
        return Q, left & right

    def up_row(self, a: int) -> np.ndarray:
        """``{b : a < b}`` as a mask."""
        return np.any(self.sparse_via_row(a)[1], axis=0)

    @cached_property
    def via(self) -> np.ndarray:
        """Boolean tensor ``V[a, s, b]`` meaning ``a <_s b`` (local indices)."""
        self.require_cubic()
        V = np.empty((self.k, self.k, self.k), dtype=bool)
        for a in range(self.k):
            V[a] = self.via_row(a)
        return V

    def _sweep(self) -> None:
        # a <_s b only depends on the pair (as, sa), so test each distinct pair once
        T = self.table
        TT = np.ascontiguousarray(T.T)
        P = np.zeros((self.k, self.k), dtype=bool)
        W = np.zeros((self.k, self.k), dtype=bool)
        for a in range(self.k):
            AS, SA = T[a, :], TT[a, :]
            Q = np.flatnonzero(self.in_D[AS] & self.in_D[SA])
            pairs, inv = np.unique(np.stack([AS[Q], SA[Q]], axis=1), axis=0, return_inverse=True)
            ul, li = np.unique(pairs[:, 0], return_inverse=True)
            ur, ri = np.unique(pairs[:, 1], return_inverse=True)
            V = (T[ul, :] == a)[li] & (TT[ur, :] == a)[ri]
            P[a] = V.any(axis=0)
            W[a, Q[V.any(axis=1)[inv.reshape(-1)]]] = True
        self.__dict__["prec"], self.__dict__["witnessing"] = P, W

    @cached_property
    def prec(self) -> np.ndarray:
        """``prec[a, b]`` meaning ``a < b``."""
        if "via" in self.__dict__:
            return self.via.any(axis=1)
        self._sweep()
        return self.__dict__["prec"]

    @cached_property
    def witnessing(self) -> np.ndarray:
        """``witnessing[a, s]`` meaning ``a <_s b`` for some ``b``."""
        if "via" in self.__dict__:
            return self.via.any(axis=2)
        self._sweep()
        return self.__dict__["witnessing"]


def domination(F: FnFamily, budget: int | None = None) -> Domination:
    """Cached :class:`Domination` for ``F``."""
    d = F.__dict__.get("_domination")
    if d is None:
        d = Domination(F, budget)
        F.__dict__["_domination"] = d
    elif budget is not None:
        d.budget = _budget(budget)
    return d


def dominates_via(F: FnFamily, a: int, s: int, b: int) -> bool:
    """Literal check of ``a <_s b`` on family indices (any elements with defined products)."""
    i = np.array
    as_ = int(F.prod(i([a]), i([s]))[0])
    sa = int(F.prod(i([s]), i([a]))[0])
    if as_ < 0 or sa < 0:
        raise ValueError("product left the family")
    asb = int(F.prod(i([as_]), i([b]))[0])
    bsa = int(F.prod(i([b]), i([sa]))[0])
    return asb == a == bsa and bool(F.in_units[as_]) and bool(F.in_units[sa])


def dominates(F: FnFamily, a: int, b: int) -> bool:
    """``a < b``: some ``s in S`` with ``a <_s b``."""
    d = domination(F)
    return bool(d.prec[d.local(a), d.local(b)])


def witnesses(F: FnFamily, a: int, b: int) -> list[int]:
    """All ``s`` (family indices) with ``a <_s b``."""
    d = domination(F)
    row = d.via_row(d.local(a))[:, d.local(b)]
    return d.idx[row].tolist()


# -- characterisation oracles -----------------------------------------------


def _pointwise_product(F: FnFamily, x: int, y: int) -> dict[int, int]:
    """Product of two S elements straight from the groupoid and coefficient tables."""
    G, Y = F.G, F.Y
    ra, rb = F.rows[x], F.rows[y]
    out = {}
    for g in np.flatnonzero(ra >= 0).tolist():
        for h in np.flatnonzero(rb >= 0).tolist():
            f = G.compose(g, h)
            if f is None:
                continue
            v = Y.product(int(ra[g]), int(rb[h]))
            if v is not None:
                out[f] = v
    return out


def lemma_rhs(F: FnFamily, bp: int, b: int) -> frozenset[int]:
    """``dom(b')^-1 (G0 & [1]b'b)  &  (G0 & [1]bb') dom(b')^-1`` by set calculus."""
    G, Y = F.G, F.Y
    units = G.units
    dom_bp_inv = G.set_inverse(np.flatnonzero(F.rows[bp] >= 0).tolist())
    one_bpb = {f for f, v in _pointwise_product(F, bp, b).items() if v == Y.unit}
    one_bbp = {f for f, v in _pointwise_product(F, b, bp).items() if v == Y.unit}
    left = G.set_product(dom_bp_inv, one_bpb & units)
    right = G.set_product(one_bbp & units, dom_bp_inv)
    return left & right


def value_cancellation_witness(F: FnFamily) -> tuple[str, str] | None:
    """First ``(x, y)`` among values taken on S with ``xy = x`` or ``yx = x`` but ``y != 1``.

    This is 1-cancellativity restricted to the values that actually occur,
    which is all the domination lemma uses.
    """
    Y = F.Y
    rows = F.rows[F.S]
    vals = sorted(set(rows[rows >= 0].tolist()))
    for x in vals:
        for y in vals:
            if y != Y.unit and (Y.mul[x, y] == x or Y.mul[y, x] == x):
                return (Y.names[x], Y.names[y])
    return None


def _cancellation_clause(rep: Report, F: FnFamily) -> bool:
    w = value_cancellation_witness(F)
    if w is None:
        rep.add("hypothesis: 1-cancellative values", True)
        return True
    rep.add_status("hypothesis: 1-cancellative values", Status.UNMET, f"{w[0]}*{w[1]} fixes {w[0]}", witness=w)
    return False


def check_domination_lemma(F: FnFamily, budget: int | None = None) -> Report:
    """``a <_{b'} b  <=>  dom(a) within the set-calculus right-hand side``, all S triples.

    If the values of S are not 1-cancellative the biconditional is still
    evaluated, but reported as hypothesis-unmet rather than pass/fail.
    """
    rep = Report(f"domination lemma {F.name}")
    hyp = _cancellation_clause(rep, F)
    try:
        d = domination(F, budget)
        d.require_cubic()
    except BudgetExceeded as e:
        rep.add_status("lemma", Status.UNVERIFIED, str(e))
        return rep
    S = d.idx
    bits = F.dom_bits[S]
    bad = None
    checked = 0
    for p, bp in enumerate(S.tolist()):
        for q, b in enumerate(S.tolist()):
            X = lemma_rhs(F, bp, b)
            xbits = sum(1 << g for g in X)
            rhs = (bits & ~np.int64(xbits)) == 0
            lhs = d.via[:, p, q]
            checked += len(S)
            mism = np.flatnonzero(lhs != rhs)
            if len(mism) and bad is None:
                a = int(S[mism[0]])
                bad = {"a": F.space.describe(F.rows[a]), "b'": F.space.describe(F.rows[bp]),
                       "b": F.space.describe(F.rows[b]), "dominates": bool(lhs[mism[0]])}
    if hyp:
        rep.add("lemma", bad is None, witness=bad, detail=f"{checked} triples")
    else:
        observed = "holds" if bad is None else "fails"
        rep.add_status("lemma", Status.UNMET, f"biconditional {observed} on {checked} triples", witness=bad)
    return rep


def check_prec_compact_containment(F: FnFamily, budget: int | None = None) -> Report:
    """``a < b  <=>  dom(a) within [Y^x]b`` over all S pairs (needs compact-bumpy)."""
    rep = Report(f"prec vs containment {F.name}")
    cb = check_compact_bumpy(F)
    if not cb.ok:
        rep.add_status("hypothesis: compact-bumpy", Status.UNMET,
                       ", ".join(c.name for c in cb.failures))
        return rep
    rep.add("hypothesis: compact-bumpy", True)
    hyp = _cancellation_clause(rep, F)
    try:
        d = domination(F, budget)
    except BudgetExceeded as e:
        rep.add_status("containment", Status.UNVERIFIED, str(e))
        return rep
    S = d.idx
    rows = F.rows[S]
    invbits = (F.space.invertible_value[rows]).astype(np.int64) @ (np.int64(1) << np.arange(F.G.n, dtype=np.int64))
    bits = F.dom_bits[S]
    rhs = (bits[:, None] & ~invbits[None, :]) == 0
    mism = np.argwhere(d.prec != rhs)
    w = None
    if len(mism):
        a, b = mism[0]
        w = {"a": F.space.describe(rows[a]), "b": F.space.describe(rows[b]), "dominates": bool(d.prec[a, b])}
    if hyp:
        rep.add("containment", w is None, witness=w, detail=f"{len(S) ** 2} pairs")
    else:
        observed = "holds" if w is None else "fails"
        rep.add_status("containment", Status.UNMET, f"equivalence {observed} on {len(S) ** 2} pairs", witness=w)
    return rep


# -- algebraic laws -----------------------------------------------------------


def transitivity_witness(F: FnFamily, budget: int | None = None) -> tuple | None:
    """``a <_{b'} b <_{c'} c  =>  a <_{c'} c`` over all quintuples; first failure or None."""
    d = domination(F, budget)
    V, P = d.via, d.prec
    for b in range(d.k):
        below_b = P[:, b]
        for cp, c in np.argwhere(V[b]).tolist():
            bad = np.flatnonzero(below_b & ~V[:, cp, c])
            if len(bad):
                return tuple(int(d.idx[x]) for x in (bad[0], b, cp, c))
    return None


def switch_witness(F: FnFamily, budget: int | None = None) -> tuple | None:
    """``a <_b c  =>  bab <_c b``; first failure ``(a, b, c)`` or None."""
    d = domination(F, budget)
    V, T = d.via, d.table
    for a, b, c in np.argwhere(V).tolist():
        bab = T[T[b, a], b]
        if not V[bab, c, b]:
            return tuple(int(d.idx[x]) for x in (a, b, c))
    return None


def zero_minimum_witness(F: FnFamily) -> int | None:
    """``0 <_a b`` for all ``a, b`` when ``0 in D`` is absorbing; first failing ``a``."""
    d = domination(F)
    if d.zero is None:
        return None
    V0 = d.via_row(d.zero)
    bad = np.argwhere(~V0)
    return None if len(bad) == 0 else int(d.idx[bad[0][0]])


def check_domination_laws(F: FnFamily, budget: int | None = None) -> Report:
    rep = Report(f"domination laws {F.name}")
    try:
        domination(F, budget).require_cubic()
    except BudgetExceeded as e:
        for name in ("transitive", "switch", "zero-minimum"):
            rep.add_status(name, Status.UNVERIFIED, str(e))
        return rep
    w = transitivity_witness(F)
    rep.add("transitive", w is None, witness=w)
    w = switch_witness(F)
    rep.add("switch", w is None, witness=w)
    w = zero_minimum_witness(F)
    rep.add("zero-minimum", w is None, witness=w)
    return rep
