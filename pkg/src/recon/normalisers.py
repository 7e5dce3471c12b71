"""Normalisers, commutants, centres and the regular parts of an ambient family.

All subsets are index arrays into the family ``F`` (sorted ascending, so
searches run in canonical element order).  Products go through the family's
Cayley table when it fits and through chunked row products otherwise.
"""

from __future__ import annotations

import numpy as np

from .axioms import check_compact_bumpy, check_z_bumpy, dom_sets, exhaustive_witness, is_T0
from .coefficients import Semigroupoid
from .functions import FnFamily, IllDefinedProduct
from .report import Report, Status

CHUNK = 400_000  # product rows per batch


def _idx(E) -> np.ndarray:
    return np.unique(np.asarray(list(E) if not isinstance(E, np.ndarray) else E, dtype=np.int64))


def products(F: FnFamily, I, J) -> np.ndarray:
    """Matrix of family indices of ``a_i a_j``; raises if a product leaves the family."""
    I, J = np.asarray(I, dtype=np.int64), np.asarray(J, dtype=np.int64)
    if F.k <= F.TABLE_CAP:
        out = F.table()[np.ix_(I, J)].astype(np.int64)
        if F.mode == "bisection" and np.any(out == -2):
            raise IllDefinedProduct("product of two non-bisection elements in bisection mode")
    else:
        out = np.empty((len(I), len(J)), dtype=np.int64)
        step = max(1, CHUNK // max(1, len(J)))
        for start in range(0, len(I), step):
            blk = I[start:start + step]
            out[start:start + len(blk)] = F.prod(blk[:, None], J[None, :])
    if np.any(out == -1):
        i, j = np.argwhere(out == -1)[0]
        raise ValueError(f"product of elements {I[i]} and {J[j]} is not in the family")
    return out


def pairwise(F: FnFamily, I, J) -> np.ndarray:
    """Family indices of ``a_i b_i`` for aligned index arrays."""
    I, J = np.asarray(I, dtype=np.int64), np.asarray(J, dtype=np.int64)
    if len(I) == 0:
        return I
    out = products(F, I, J[:1])[:, 0] if np.all(J == J[0]) else None
    if out is None:
        if F.k <= F.TABLE_CAP:
            out = F.table()[I, J].astype(np.int64)
            if np.any(out == -2):
                raise IllDefinedProduct("product of two non-bisection elements in bisection mode")
        else:
            out = F.prod(I, J)
    if np.any(out == -1):
        raise ValueError("product is not in the family")
    return out


def _row_sets_equal(L: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Per row: set of entries of ``L`` equals set of entries of ``R``."""
    l_in_r = np.all(np.any(L[:, :, None] == R[:, None, :], axis=2), axis=1)
    r_in_l = np.all(np.any(R[:, :, None] == L[:, None, :], axis=2), axis=1)
    return l_in_r & r_in_l


def _scan(F: FnFamily, E, over, test) -> np.ndarray:
    E = _idx(E)
    over = np.arange(F.k) if over is None else _idx(over)
    if len(E) == 0:
        return over
    keep = []
    step = max(1, 50_000 // max(1, len(E)))
    for start in range(0, len(over), step):
        blk = over[start:start + step]
        aE = products(F, blk, E)
        Ea = products(F, E, blk).T
        keep.append(blk[test(aE, Ea)])
    return np.concatenate(keep) if keep else over[:0]


def normalisers(F: FnFamily, E, over=None) -> np.ndarray:
    """``N(E) = {a : aE = Ea}`` as sets of functions."""
    return _scan(F, E, over, _row_sets_equal)


def commutant(F: FnFamily, E, over=None) -> np.ndarray:
    """``C(E) = {a : ad = da for all d in E}``."""
    return _scan(F, E, over, lambda aE, Ea: np.all(aE == Ea, axis=1))


def centre_of(F: FnFamily, E) -> np.ndarray:
    """``Z(E) = E & C(E)``."""
    return commutant(F, E, over=E)


def regular_part(F: FnFamily, E) -> np.ndarray:
    """``E^R = {e in E : exists e' in E, e e' e = e, e' e e' = e'}``."""
    return z_regular(F, E, Z=None)


def z_regular(F: FnFamily, X, Z=None) -> np.ndarray:
    """``X^R_Z``: ``a in X`` with some ``a' in X``, ``aa', a'a in Z``, ``aa'a = a``, ``a'aa' = a'``.

    ``X`` may be an index array or one of ``"S"``, ``"C"``, ``"N"``; ``Z``
    defaults to the family's ``Z``.  ``Z=None`` passed explicitly through
    :func:`regular_part` drops the ``Z`` condition.
    """
    if isinstance(X, str):
        X = {"S": F.S, "C": F.C, "N": F.N}[X]
    X = _idx(X)
    if len(X) == 0:
        return X
    P = products(F, X, X)  # P[i, j] = x_i x_j
    pos = np.full(F.k, -1, dtype=np.int64)
    pos[X] = np.arange(len(X))
    zmask = np.ones(F.k, dtype=bool) if Z is None else F.mask(_idx(Z))
    out = []
    for i, a in enumerate(X.tolist()):
        aap = P[i, :]  # a a'
        apa = P[:, i]  # a' a
        ok = zmask[aap] & zmask[apa]
        if not ok.any():
            continue
        cand = np.flatnonzero(ok)
        # a a' a = a  and  a' a a' = a'
        aap_a = pairwise(F, aap[cand], np.full(len(cand), a))
        apa_ap = pairwise(F, apa[cand], X[cand])
        good = (aap_a == a) & (apa_ap == X[cand])
        if good.any():
            out.append(a)
    return np.array(out, dtype=np.int64)


# -- M and its characterisations ------------------------------------------------


def _st_pairs(F: FnFamily) -> np.ndarray:
    """Pairs ``(s, t)`` of S with ``st, ts in Z``."""
    S = F.S
    P = products(F, S, S)
    zmask = F.mask(F.Z)
    ok = zmask[P] & zmask[P.T]
    si, ti = np.nonzero(ok)
    return np.stack([S[si], S[ti]], axis=1)


def m_witness(F: FnFamily, n: int, pairs: np.ndarray | None = None) -> tuple[int, int] | None:
    """First ``(s, t)`` with ``stn = n = nts``, ``tn, nt in C``, ``st, ts in Z``."""
    pairs = _st_pairs(F) if pairs is None else pairs
    if len(pairs) == 0:
        return None
    s, t = pairs[:, 0], pairs[:, 1]
    cmask = F.mask(F.C)
    if F.k <= F.TABLE_CAP:
        T = F.table()
        tn, nt = T[t, n].astype(np.int64), T[n, t].astype(np.int64)
        if np.any(tn < 0) or np.any(nt < 0):
            raise ValueError("product left the family")
        ok = cmask[tn] & cmask[nt]
        stn, nts = T[s[ok], tn[ok]], T[nt[ok], s[ok]]
    else:
        tn = products(F, t, [n])[:, 0]
        nt = products(F, [n], t)[0]
        ok = cmask[tn] & cmask[nt]
        stn, nts = pairwise(F, s[ok], tn[ok]), pairwise(F, nt[ok], s[ok])
    hit = np.flatnonzero((stn == n) & (nts == n))
    if len(hit) == 0:
        return None
    s, t = s[ok], t[ok]
    return int(s[hit[0]]), int(t[hit[0]])


def compute_M(F: FnFamily) -> np.ndarray:
    """``M = {n in N : some s, t in S witness C-Z-domination}`` (cached on the family)."""
    M = F.__dict__.get("_M")
    if M is None:
        pairs = _st_pairs(F)
        M = np.array([n for n in F.N.tolist() if m_witness(F, n, pairs) is not None], dtype=np.int64)
        F.__dict__["_M"] = M
    return M


def m_via_compact_bisection(F: FnFamily, a: int) -> frozenset[int] | None:
    """A bisection ``B`` with ``s[dom a] <= r[B]``, ``r[dom a] <= s[B]``, ``B dom(a) | dom(a) B <= G^iso``."""
    G = F.G
    dom = frozenset(np.flatnonzero(F.rows[a] >= 0).tolist())
    iso = G.isotropy()
    need_r, need_s = G.sources(dom), G.ranges(dom)
    for B in G.bisections():
        if not need_r <= G.ranges(B) or not need_s <= G.sources(B):
            continue
        if G.set_product(B, dom) <= iso and G.set_product(dom, B) <= iso:
            return B
    return None


def m_effective_characterisation(F: FnFamily) -> Report:
    rep = Report(f"M characterisations {F.name}")
    hyp = check_z_bumpy(F, compact=True)
    if not hyp.ok:
        rep.add_status("hypothesis: compact-z-bumpy", Status.UNMET, ", ".join(c.name for c in hyp.failures))
        return rep
    rep.add("hypothesis: compact-z-bumpy", True)
    M = set(compute_M(F).tolist())
    found: dict[int, bool] = {}  # the search depends on dom(a) only
    for a in range(F.k):
        bits = int(F.dom_bits[a])
        if bits not in found:
            found[bits] = m_via_compact_bisection(F, a) is not None
    via_B = {a for a in range(F.k) if found[int(F.dom_bits[a])]}
    rep.add("M = {a : some B satisfies the M-conditions}", M == via_B,
            witness={"only M": sorted(M - via_B)[:5], "only B": sorted(via_B - M)[:5]})
    if F.G.is_effective():
        rep.add("hypothesis: effective", True)
        on_bis = set(F.S.tolist())  # dom(a) inside a bisection iff dom(a) is a bisection
        rep.add("M = {a : dom(a) inside a bisection}", M == on_bis,
                witness={"only M": sorted(M - on_bis)[:5], "only bisection": sorted(on_bis - M)[:5]})
    else:
        rep.add_status("hypothesis: effective", Status.UNMET)
    return rep


# -- star normalisers --------------------------------------------------------------


def check_involution(Y: Semigroupoid, iota) -> None:
    """Raise unless ``iota`` is an involutive anti-automorphism of ``Y``."""
    iota = np.asarray(iota, dtype=np.int64)
    m = Y.m
    if iota.shape != (m,) or np.any(iota[iota] != np.arange(m)):
        raise ValueError("coefficient map is not an involution")
    pad = Y.mul_pad
    lhs = np.where(Y.mul >= 0, np.append(iota, -1)[Y.mul], -1)  # iota(yz)
    rhs = pad[iota[None, :], iota[:, None]]  # iota(z) iota(y), indexed [y, z]
    if not np.array_equal(lhs, rhs):
        raise ValueError("coefficient map is not an anti-automorphism")


def adjoint_rows(F: FnFamily, rows: np.ndarray, iota) -> np.ndarray:
    """``a*(g) = iota(a(g^-1))``."""
    iota_pad = np.append(np.asarray(iota, dtype=np.int64), -1)
    flipped = np.asarray(rows)[..., F.G.inv]
    return iota_pad[flipped]


def star_normalisers(F: FnFamily, iota=None) -> np.ndarray:
    """``N*(D) = {a : a D a* | a* D a <= D}``; ``iota`` defaults to the identity."""
    Y, sp = F.Y, F.space
    iota = np.arange(Y.m) if iota is None else np.asarray(iota, dtype=np.int64)
    check_involution(Y, iota)
    D = F.D
    drows = F.rows[D]
    out = []
    for a in range(F.k):
        ra = F.rows[a][None, :]
        rs = adjoint_rows(F, ra, iota)
        ok = True
        for x, y in ((ra, rs), (rs, ra)):
            if F.mode == "bisection" and not (sp.bisection_mask(x)[0] or sp.bisection_mask(y)[0]):
                raise IllDefinedProduct("a and a* both lack bisection domains")
            xd = sp.product(np.broadcast_to(x, drows.shape), drows, F.mode, check=False)
            xdy = sp.product(xd, np.broadcast_to(y, drows.shape), F.mode, check=False)
            idx = F.lookup(xdy)
            if np.any(idx < 0) or not np.all(F.in_units[idx]):
                ok = False
                break
        if ok:
            out.append(a)
    return np.array(out, dtype=np.int64)


# -- theorem checkers ----------------------------------------------------------------


def domain_product_witness(F: FnFamily, X=None) -> tuple[int, int] | None:
    """First ``(a, b)`` in ``X`` (default N) with ``dom(ab)`` not inside ``dom(a)dom(b)``."""
    X = F.N if X is None else _idx(X)
    pairs = F.G.pairs
    allbits = np.int64(1) << np.arange(F.G.n, dtype=np.int64)
    dom = F.rows[X] >= 0
    step = max(1, 20_000 // max(1, len(X)))
    for start in range(0, len(X), step):
        I = np.arange(start, min(len(X), start + step))
        if F.mode == "bisection":
            ok = F.is_bisection[X[I]][:, None] | F.is_bisection[X][None, :]
        else:
            ok = np.ones((len(I), len(X)), dtype=bool)
        prod_rows = F.space.product(F.rows[X[I]][:, None, :], F.rows[X][None, :, :], F.mode, check=False)
        pbits = (prod_rows >= 0).astype(np.int64) @ allbits
        setbits = np.zeros((len(I), len(X)), dtype=np.int64)
        for g, h, f in pairs.tolist():
            setbits |= np.where(dom[I, g][:, None] & dom[:, h][None, :], np.int64(1) << f, 0)
        bad = np.argwhere(ok & ((pbits & ~setbits) != 0))
        if len(bad):
            i, j = bad[0]
            return int(X[I[i]]), int(X[j])
    return None


def check_sandwich(F: FnFamily) -> Report:
    """``M <= N(Z) <= N`` (needs ``dom[Z]`` T0) and ``D <= C <= C(Z) <= N(Z)``."""
    rep = Report(f"sandwich {F.name}")
    t0 = is_T0(dom_sets(F, F.Z), F.G.units)
    rep.add_status("hypothesis: dom[Z] T0", Status.PASS if t0 else Status.UNMET)
    NZ = set(normalisers(F, F.Z).tolist())
    CZ = set(commutant(F, F.Z).tolist())
    M = set(compute_M(F).tolist())
    N, C, D = set(F.N.tolist()), set(F.C.tolist()), set(F.D.tolist())
    rep.data.update({"|M|": len(M), "|N(Z)|": len(NZ), "|N|": len(N)})
    if t0:
        rep.add("M <= N(Z)", M <= NZ, witness=sorted(M - NZ)[:5])
        rep.add("N(Z) <= N", NZ <= N, witness=sorted(NZ - N)[:5])
    else:
        rep.add_status("M <= N(Z) <= N", Status.UNMET, f"observed: {M <= NZ and NZ <= N}")
    rep.add("D <= C <= C(Z) <= N(Z)", D <= C <= CZ <= NZ,
            witness={"D-C": sorted(D - C)[:3], "C-C(Z)": sorted(C - CZ)[:3], "C(Z)-N(Z)": sorted(CZ - NZ)[:3]})
    return rep


def check_centre_identities(F: FnFamily) -> Report:
    """``Z = Z(D)`` when D is exhaustive; ``C = C(Z)`` when ``dom[Z]`` is T0."""
    rep = Report(f"centre identities {F.name}")
    Z = set(F.Z.tolist())
    if exhaustive_witness(F) is None:
        ZD = set(centre_of(F, F.D).tolist())
        rep.add("Z = Z(D)", Z == ZD, witness={"Z-Z(D)": sorted(Z - ZD)[:5], "Z(D)-Z": sorted(ZD - Z)[:5]})
    else:
        rep.add_status("Z = Z(D)", Status.UNMET, "D is not exhaustive")
    if is_T0(dom_sets(F, F.Z), F.G.units):
        CZ = set(commutant(F, F.Z).tolist())
        C = set(F.C.tolist())
        rep.add("C = C(Z)", C == CZ, witness={"C-C(Z)": sorted(C - CZ)[:5], "C(Z)-C": sorted(CZ - C)[:5]})
    else:
        rep.add_status("C = C(Z)", Status.UNMET, "dom[Z] is not T0")
    return rep


def check_effective_collapse(F: FnFamily) -> Report:
    """On effective groupoids (with compact-z-bumpy S): ``M = N = S``."""
    rep = Report(f"effective collapse {F.name}")
    if not F.G.is_effective():
        rep.add_status("M = N = S", Status.UNMET, "groupoid is not effective")
        return rep
    hyp = check_z_bumpy(F, compact=True)
    if not hyp.ok:
        rep.add_status("M = N = S", Status.UNMET, "S is not compact-z-bumpy")
        return rep
    M, N, S = set(compute_M(F).tolist()), set(F.N.tolist()), set(F.S.tolist())
    rep.add("N = S", N == S, witness=sorted(N ^ S)[:5])
    rep.add("M = N", M == N, witness=sorted(M ^ N)[:5])
    return rep


def check_RZS(F: FnFamily) -> Report:
    rep = Report(f"R = S^R_Z {F.name}")
    hyp = check_compact_bumpy(F)
    if not hyp.ok:
        rep.add_status("hypothesis: compact-bumpy", Status.UNMET, ", ".join(c.name for c in hyp.failures))
        return rep
    rep.add("hypothesis: compact-bumpy", True)
    R, SRZ = set(F.R.tolist()), set(z_regular(F, "S", F.Z).tolist())
    rep.add("R = S^R_Z", R == SRZ, witness={"R-SRZ": sorted(R - SRZ)[:5], "SRZ-R": sorted(SRZ - R)[:5]})
    return rep


def _rzc_hypotheses(F: FnFamily, rep: Report, need_exhaustive: bool) -> bool:
    ok = True
    hyp = check_compact_bumpy(F)
    rep.add_status("hypothesis: compact-bumpy", Status.PASS if hyp.ok else Status.UNMET,
                   "" if hyp.ok else ", ".join(c.name for c in hyp.failures))
    ok &= hyp.ok
    w = domain_product_witness(F)
    rep.add_status("hypothesis: dom(ab) <= dom(a)dom(b) on N", Status.PASS if w is None else Status.UNMET,
                   witness=w)
    ok &= w is None
    if need_exhaustive:
        w = exhaustive_witness(F)
        rep.add_status("hypothesis: D exhaustive", Status.PASS if w is None else Status.UNMET, witness=w)
        ok &= w is None
    rep.add("hypothesis: ample", True, detail="finite discrete groupoid")
    CRZ = set(z_regular(F, "C", F.Z).tolist())
    S = set(F.S.tolist())
    inside = CRZ <= S
    rep.add_status("hypothesis: C^R_Z <= S", Status.PASS if inside else Status.UNMET,
                   witness=None if inside else [F.space.describe(F.rows[a]) for a in sorted(CRZ - S)[:3]])
    return ok and inside


def check_RZC(F: FnFamily) -> Report:
    rep = Report(f"C^R_Z <= S => N^R_Z <= S {F.name}")
    if not _rzc_hypotheses(F, rep, need_exhaustive=False):
        return rep
    NRZ = set(z_regular(F, "N", F.Z).tolist())
    S = set(F.S.tolist())
    rep.add("N^R_Z <= S", NRZ <= S, witness=sorted(NRZ - S)[:5])
    return rep


def r_formula(F: FnFamily) -> np.ndarray:
    """``N(Z(D)^R)^R_{Z(D)}`` computed purely from the product and ``D``."""
    ZD = centre_of(F, F.D)
    ZDR = regular_part(F, ZD)
    NZ = normalisers(F, ZDR)
    return z_regular(F, NZ, ZD)


def check_R_formula(F: FnFamily) -> Report:
    rep = Report(f"R = N(Z(D)^R)^R_Z(D) {F.name}")
    if not _rzc_hypotheses(F, rep, need_exhaustive=True):
        return rep
    R, RF = set(F.R.tolist()), set(r_formula(F).tolist())
    rep.add("R = N(Z(D)^R)^R_Z(D)", R == RF, witness={"R-formula": sorted(R - RF)[:5], "formula-R": sorted(RF - R)[:5]})
    return rep


# -- interior isotropy ----------------------------------------------------------------


def isotropy_fiber_data(F: FnFamily, x: int) -> dict:
    """Restrictions of C and S to ``H_x`` and the units of the restricted convolution algebra."""
    G = F.G
    H = sorted(G.interior_isotropy_group(x))
    Cx = {tuple(r) for r in F.rows[F.C][:, H].tolist()}
    Sx = {tuple(r) for r in F.rows[F.S][:, H].tolist()}
    ring = F.space.ring
    units = []
    if ring is not None:
        pos = {g: i for i, g in enumerate(H)}
        local_pairs = [(pos[g], pos[h], pos[f]) for g, h, f in G.pairs.tolist() if g in pos and h in pos]
        elems = np.array(sorted(Cx), dtype=np.int64).reshape(-1, len(H))
        tot = F.space.ring_of_y[elems]  # ring indices, 0 off support
        one = np.full(len(H), ring.zero, dtype=np.int64)
        one[pos[x]] = ring.one

        def conv(A, B):
            out = np.full(np.broadcast_shapes(A.shape, B.shape), ring.zero, dtype=np.int64)
            for g, h, f in local_pairs:
                out[..., f] = ring.add[out[..., f], ring.mul[A[..., g], B[..., h]]]
            return out

        is_one = lambda P: np.all(P == one, axis=-1)  # noqa: E731
        for i in range(len(tot)):
            left = is_one(conv(tot[i][None, :], tot))
            right = is_one(conv(tot, tot[i][None, :]))
            if np.any(left & right):
                units.append(tuple(elems[i].tolist()))
    return {"H": H, "C": Cx, "S": Sx, "units": units}


def steinberg_hypothesis(F: FnFamily) -> Report:
    """Per unit: effectiveness, unit-freeness of ``C_x`` and ``C_x^x <= S_x``; then ``C^R_Z <= S`` directly."""
    G = F.G
    rep = Report(f"isotropy chain {F.name}")
    if F.space.ring is None:
        rep.add_status("chain", Status.UNMET, "needs ring coefficients")
        return rep
    chain_ok = True
    for x in sorted(G.units):
        data = isotropy_fiber_data(F, x)
        name = G.arrows[x]
        rep.add_status(f"H_{name} trivial", Status.PASS if len(data["H"]) == 1 else Status.UNMET)
        nontrivial = [u for u in data["units"] if sum(v >= 0 for v in u) != 1]
        rep.add_status(f"C_{name} has no non-trivial units", Status.PASS if not nontrivial else Status.UNMET,
                       witness=nontrivial[:2] or None)
        inside = all(u in data["S"] for u in data["units"])
        rep.add_status(f"C_{name}^x <= S_{name}", Status.PASS if inside else Status.UNMET)
        chain_ok &= inside
    CRZ = set(z_regular(F, "C", F.Z).tolist())
    direct = CRZ <= set(F.S.tolist())
    rep.add_status("C^R_Z <= S (direct)", Status.PASS if direct else Status.UNMET)
    if chain_ok:
        rep.add("chain conclusion agrees with direct check", direct)
    rep.data["chain"] = chain_ok
    rep.data["direct"] = direct
    return rep
