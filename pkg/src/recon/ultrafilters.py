"""Filters and ultrafilters of ``(S, <)`` and recovery of the groupoid from them.

Filters are exchanged as frozensets of family indices (all in ``F.S``);
internally they are boolean masks over ``S``-local positions.

Enumeration relies on the finite filter lemma: in a finite ``S`` with
transitive ``<``, every nonempty filter is ``up(c)`` for some ``c`` with
``c < c``, so the candidates ``gen(a) = {a} | up(a)`` cover all of them.  The
exhaustive-subset oracle checks this independently for small ``S``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .axioms import check_bumpy
from .domination import Domination, domination
from .functions import BudgetExceeded, FnFamily
from .groupoid import FiniteGroupoid, GroupoidError, is_isomorphism
from .report import Report, Status

ORACLE_MAX = 12

Filter = frozenset


# -- conversions ---------------------------------------------------------------


def _mask(d: Domination, T) -> np.ndarray:
    m = np.zeros(d.k, dtype=bool)
    for i in T:
        m[d.local(int(i))] = True
    return m


def _members(d: Domination, m: np.ndarray) -> Filter:
    return frozenset(int(i) for i in d.idx[m])


# -- basic operations ------------------------------------------------------------


def up_closure(F: FnFamily, T) -> Filter:
    """``T^< = {a : some t in T with t < a}`` (does not add ``T`` itself)."""
    d = domination(F)
    m = _mask(d, T)
    return _members(d, d.prec[m].any(axis=0))


def _is_filter_mask(d: Domination, m: np.ndarray) -> bool:
    """Up-set plus down-directed, which together are the filter biconditional."""
    P = d.prec[m]
    if np.any(P.any(axis=0) & ~m):
        return False
    sub = P[:, m].astype(np.float32)
    return bool(np.all(sub.T @ sub > 0)) if m.any() else True


def _is_filter_literal(d: Domination, m: np.ndarray) -> bool:
    """``a, b in F  <=>  exists c in F with c < a, c < b`` over all pairs of S."""
    P = d.prec
    rhs = np.einsum("c,ca,cb->ab", m.astype(np.int64), P.astype(np.int64), P.astype(np.int64)) > 0
    return bool(np.array_equal(np.outer(m, m), rhs))


def _is_proper(d: Domination, m: np.ndarray) -> bool:
    if d.zero is not None:
        return not m[d.zero]
    return not m.all()


def is_filter(F: FnFamily, T) -> bool:
    d = domination(F)
    return _is_filter_literal(d, _mask(d, T))


def is_proper(F: FnFamily, T) -> bool:
    d = domination(F)
    return _is_proper(d, _mask(d, T))


def _proper_filter_candidates(d: Domination) -> np.ndarray:
    """Distinct proper filters among ``gen(a)``, ``a != 0`` (rows of a mask matrix)."""
    gens = d.prec.copy()
    gens[np.arange(d.k), np.arange(d.k)] = True
    if d.zero is not None:
        gens = np.delete(gens, d.zero, axis=0)
    uniq = np.unique(gens, axis=0)
    keep = [m for m in uniq if _is_proper(d, m) and _is_filter_mask(d, m)]
    return np.array(keep, dtype=bool).reshape(-1, d.k)


def _maximal(C: np.ndarray) -> np.ndarray:
    if len(C) == 0:
        return C
    Ci = C.astype(np.int64)
    inter = Ci @ Ci.T
    size = Ci.sum(axis=1)
    strictly_inside = (inter == size[:, None]) & (size[None, :] > size[:, None])
    return C[~strictly_inside.any(axis=1)]


def _sorted_filters(d: Domination, masks: np.ndarray) -> list[Filter]:
    out = [_members(d, m) for m in masks]
    return sorted(out, key=lambda U: sorted(U))


def enumerate_ultrafilters(F: FnFamily, method: str = "gen") -> list[Filter]:
    """All ultrafilters of ``S``, sorted by member list.

    ``method="gen"`` uses the ``gen(a)`` candidates; ``method="brute"``
    enumerates every subset of ``S`` (only for ``|S| <= 12``).
    """
    d = domination(F)
    if method == "gen":
        return _sorted_filters(d, _maximal(_proper_filter_candidates(d)))
    if method == "brute":
        if d.k > ORACLE_MAX:
            raise BudgetExceeded(f"subset oracle needs |S| <= {ORACLE_MAX}, got {d.k}")
        found = []
        for bits in range(1, 1 << d.k):
            m = np.array([(bits >> i) & 1 for i in range(d.k)], dtype=bool)
            if _is_proper(d, m) and _is_filter_literal(d, m):
                found.append(m)
        return _sorted_filters(d, _maximal(np.array(found, dtype=bool).reshape(-1, d.k)))
    raise ValueError(f"unknown method {method!r}")


def is_ultrafilter(F: FnFamily, T) -> bool:
    """Nonempty proper filter with no proper filter strictly above it."""
    d = domination(F)
    m = _mask(d, T)
    if not m.any() or not _is_proper(d, m) or not _is_filter_literal(d, m):
        return False
    cands = _proper_filter_candidates(d)
    above = np.all(cands[:, m], axis=1) & (cands.sum(axis=1) > m.sum())
    return not above.any()


def star(F: FnFamily, T) -> Filter:
    """``T^* = {s : exists t in T, r in S with t <_s r}``."""
    d = domination(F)
    return _members(d, d.witnessing[_mask(d, T)].any(axis=0))


def filter_product(F: FnFamily, U, V) -> Filter | None:
    """``(UV)^<`` when it is a proper filter, else None (the arrows do not compose)."""
    d = domination(F)
    mu, mv = _mask(d, U), _mask(d, V)
    prods = np.unique(d.table[np.ix_(mu.nonzero()[0], mv.nonzero()[0])])
    w = np.zeros(d.k, dtype=bool)
    w[prods] = True
    W = d.prec[w].any(axis=0)
    if not W.any() or not _is_proper(d, W) or not _is_filter_mask(d, W):
        return None
    return _members(d, W)


def unit_map(F: FnFamily, g: int) -> Filter:
    """``S_g = {a in S : a(g) is defined and invertible}``."""
    vals = F.rows[F.S, g]
    ok = F.space.invertible_value[vals]
    return frozenset(int(i) for i in F.S[ok])


# -- reconstruction ----------------------------------------------------------------


@dataclass
class Reconstruction:
    ultrafilters: list[Filter]
    groupoid: FiniteGroupoid | None
    error: str = ""
    products: dict = field(default_factory=dict)

    def index(self, U: Filter) -> int | None:
        try:
            return self.ultrafilters.index(U)
        except ValueError:
            return None


def reconstruct(F: FnFamily) -> Reconstruction:
    """Groupoid of ultrafilters with ``(U, V) -> (UV)^<`` and ``U -> U^*``."""
    ufs = enumerate_ultrafilters(F)
    pos = {U: i for i, U in enumerate(ufs)}
    n = len(ufs)
    mul = np.full((n, n), -1, dtype=np.int64)
    inv = np.full(n, -1, dtype=np.int64)
    for i, U in enumerate(ufs):
        j = pos.get(star(F, U))
        if j is None:
            return Reconstruction(ufs, None, f"star of ultrafilter {i} is not an ultrafilter")
        inv[i] = j
    for i, U in enumerate(ufs):
        for j, V in enumerate(ufs):
            W = filter_product(F, U, V)
            if W is None:
                continue
            k = pos.get(W)
            if k is None:
                return Reconstruction(ufs, None, f"product of ultrafilters {i},{j} is not an ultrafilter")
            mul[i, j] = k
    names = [f"U{i}" for i in range(n)]
    try:
        H = FiniteGroupoid(names, mul, inv, name=f"U({F.name})")
    except GroupoidError as e:
        return Reconstruction(ufs, None, f"ultrafilter groupoid fails {e.axiom}: {e.witness}")
    return Reconstruction(ufs, H)


def verify_recovery(F: FnFamily, graded: bool = False, oracle: bool = True) -> Report:
    """Check that ``g -> S_g`` recovers ``G`` (and its grading if ``graded``)."""
    G = F.G
    rep = Report(f"recovery {F.name}")
    hyp = check_bumpy(F)
    rep.add_status("hypothesis: bumpy", Status.PASS if hyp.ok else Status.UNMET,
                   "" if hyp.ok else ", ".join(c.name for c in hyp.failures))
    if graded:
        homog = G.grading is not None and all(F.grade(i) is not None for i in F.S if i != F.zero)
        rep.add_status("hypothesis: homogeneous domains", Status.PASS if homog else Status.UNMET)
    if not all(c.status is Status.PASS for c in rep.clauses):
        return rep

    try:
        rec = reconstruct(F)
    except BudgetExceeded as e:
        rep.add_status("bijection", Status.UNVERIFIED, str(e))
        return rep
    ufs = rec.ultrafilters
    Sg = [unit_map(F, g) for g in range(G.n)]
    table = {G.arrows[g]: sorted(Sg[g]) for g in range(G.n)}
    rep.data["bijection"] = table
    rep.data["ultrafilters"] = len(ufs)

    if oracle and len(F.S) <= ORACLE_MAX:
        brute = enumerate_ultrafilters(F, "brute")
        rep.add("oracle: gen == subsets", brute == ufs, witness={"gen": ufs, "brute": brute})

    idx = [rec.index(U) for U in Sg]
    bad = [G.arrows[g] for g in range(G.n) if idx[g] is None]
    rep.add("S_g is an ultrafilter", not bad, witness=bad)
    bij = not bad and len(set(idx)) == G.n == len(ufs)
    rep.add("bijection", bij, witness={"arrows": G.n, "ultrafilters": len(ufs), "images": len(set(i for i in idx if i is not None))})

    bad = [G.arrows[g] for g in range(G.n) if star(F, Sg[g]) != Sg[int(G.inv[g])]]
    rep.add("S_{g^-1} = S_g^*", not bad, witness=bad)

    bad_prod, bad_partial = [], []
    for g in range(G.n):
        for h in range(G.n):
            W = filter_product(F, Sg[g], Sg[h])
            gh = G.compose(g, h)
            if gh is None:
                if W is not None:
                    bad_partial.append((G.arrows[g], G.arrows[h]))
            elif W != Sg[gh]:
                bad_prod.append((G.arrows[g], G.arrows[h]))
    rep.add("S_gh = (S_g S_h)^<", not bad_prod, witness=bad_prod)
    rep.add("non-composable products undefined", not bad_partial, witness=bad_partial)

    # basis: U_a = {U : a in U} corresponds to [Y^x]a under g -> S_g
    inv_ok = F.space.invertible_value[F.rows[F.S]]
    bad = []
    for li, a in enumerate(F.S.tolist()):
        lhs = {g for g in range(G.n) if a in Sg[g]}
        rhs = set(np.flatnonzero(inv_ok[li]).tolist())
        if lhs != rhs:
            bad.append(F.space.describe(F.rows[a]))
    rep.add("basis U_a <-> [Y^x]a", not bad, witness=bad[:3])

    if rec.groupoid is None:
        rep.add("ultrafilter groupoid valid", False, witness=rec.error)
    else:
        f = [idx[g] for g in range(G.n)]
        ok = bij and is_isomorphism(G, rec.groupoid, f)
        rep.add("g -> S_g is a groupoid isomorphism", ok)

    if graded:
        bad = []
        for g in range(G.n):
            grades = {F.grade(a) for a in Sg[g]}
            if grades != {G.grade(g)}:
                bad.append(G.arrows[g])
        rep.add("c[S_g] = {c(g)}", not bad, witness=bad)
    return rep


# -- isomorphisms -------------------------------------------------------------------


def _local_map(d1: Domination, d2: Domination, phi) -> np.ndarray:
    """``phi`` (family index -> family index) as an S-local permutation array."""
    out = np.full(d1.k, -1, dtype=np.int64)
    for li, i in enumerate(d1.idx.tolist()):
        j = int(phi[i])
        if j >= 0 and d2.pos[j] >= 0:
            out[li] = d2.pos[j]
    return out


def induced_iso(F1: FnFamily, F2: FnFamily, phi) -> list[int]:
    """``phi~(g)`` = the unique arrow in the intersection of ``dom(phi(a))``, ``a in S_g``."""
    G = F1.G
    out = []
    for g in range(G.n):
        inter = np.ones(F2.G.n, dtype=bool)
        for a in unit_map(F1, g):
            inter &= F2.rows[int(phi[a])] >= 0
        hits = np.flatnonzero(inter)
        if len(hits) != 1:
            raise ValueError(f"intersection at {G.arrows[g]} has {len(hits)} arrows, not 1")
        out.append(int(hits[0]))
    return out


def verify_diagonal_iso(F1: FnFamily, F2: FnFamily, phi, graded: bool = False) -> Report:
    """Check ``phi: S -> S'`` is a diagonal-preserving isomorphism and transport it to ``G -> G'``."""
    rep = Report(f"diagonal iso {F1.name} -> {F2.name}")
    d1, d2 = domination(F1), domination(F2)
    loc = _local_map(d1, d2, phi)
    bij = d1.k == d2.k and np.all(loc >= 0) and len(np.unique(loc)) == d1.k
    rep.add("bijection S -> S'", bool(bij), witness={"|S|": d1.k, "|S'|": d2.k})
    if not bij:
        return rep
    lhs = loc[d1.table]
    rhs = d2.table[np.ix_(loc, loc)]
    bad = np.argwhere(lhs != rhs)
    w = None
    if len(bad):
        i, j = bad[0]
        w = (F1.space.describe(F1.rows[d1.idx[i]]), F1.space.describe(F1.rows[d1.idx[j]]))
    rep.add("multiplicative", w is None, witness=w)
    diag = set(loc[d1.in_D].tolist()) == set(np.flatnonzero(d2.in_D).tolist())
    rep.add("phi[D] = D'", diag)
    if graded:
        bad = [F1.space.describe(F1.rows[a]) for a in d1.idx.tolist()
               if a != F1.zero and F1.grade(a) != F2.grade(int(phi[a]))]
        rep.add("graded", not bad, witness=bad[:3])
    if not rep.ok:
        return rep
    try:
        f = induced_iso(F1, F2, phi)
    except ValueError as e:
        rep.add("induced map well defined", False, witness=str(e))
        return rep
    rep.add("induced map well defined", True)
    rep.data["induced"] = {F1.G.arrows[g]: F2.G.arrows[h] for g, h in enumerate(f)}
    rep.add("induced map is a groupoid isomorphism", is_isomorphism(F1.G, F2.G, f, graded=graded))
    return rep
