"""Bumpy-semigroup axioms on the bisection part ``S`` of a family.

Everything here is the discrete specialisation: every set is open and
compact, interiors are identities, and quantifiers over open sets can be
replaced by their smallest instances:

* Urysohn: ``O = {g}``, so we need an element with domain exactly ``{g}``
  and an invertible value there.
* Involutive: the neighbourhood ``{g^-1}`` suffices.
* Compact-Urysohn: ``O = C``, so every bisection must be the domain of an
  element with only invertible values.
* Compact-(Z-)Involutive: the largest ``C = [Y^x]a`` implies all smaller ones.
"""

from __future__ import annotations

import numpy as np

from .functions import FnFamily
from .report import Report, Status


def _s_data(F: FnFamily):
    sp = F.space
    rows = F.rows[F.S]
    inv_ok = sp.invertible_value[rows]  # (k, n); False where undefined
    return rows, inv_ok


def urysohn_witness(F: FnFamily) -> str | None:
    """First arrow with no singleton-domain invertible-valued element, or None."""
    rows, inv_ok = _s_data(F)
    single = np.sum(rows >= 0, axis=1) == 1
    covered = np.any(inv_ok & single[:, None], axis=0)
    missing = np.flatnonzero(~covered)
    return F.G.arrows[missing[0]] if len(missing) else None


def _inverse_targets(F: FnFamily, a_row: np.ndarray, positions: np.ndarray):
    """Columns ``g^-1`` and required values ``a(g)^-1`` for ``g`` in ``positions``."""
    sp = F.space
    return F.G.inv[positions], sp.y_inverse[a_row[positions]]


def _z_partners(F: FnFamily, i: int) -> np.ndarray:
    """Mask over S: ``b`` with ``ab, ba in Z`` where ``a`` is family element ``i``."""
    zmask = F.mask(F.Z)
    ab = F.prod(np.full(len(F.S), i), F.S)
    ba = F.prod(F.S, np.full(len(F.S), i))
    return (ab >= 0) & (ba >= 0) & zmask[np.maximum(ab, 0)] & zmask[np.maximum(ba, 0)]


def involutive_witness(F: FnFamily, *, compact: bool = False, z: bool = False) -> tuple | None:
    """First failure ``(a, g)`` (described) of the chosen involutive axiom, or None.

    ``compact`` asks for a single ``b`` inverting ``a`` on all of ``[Y^x]a``;
    ``z`` additionally requires ``ab, ba in Z``.
    """
    rows, inv_ok = _s_data(F)
    sp = F.space
    for li, i in enumerate(F.S.tolist()):
        P = np.flatnonzero(inv_ok[li])
        if len(P) == 0:
            continue
        cols, want = _inverse_targets(F, rows[li], P)
        match = rows[:, cols] == want  # (k, |P|)
        if z:
            match &= _z_partners(F, i)[:, None]
        if compact:
            if not np.any(np.all(match, axis=1)):
                return (sp.describe(rows[li]), F.G.names(P))
        else:
            bad = np.flatnonzero(~np.any(match, axis=0))
            if len(bad):
                return (sp.describe(rows[li]), F.G.arrows[P[bad[0]]])
    return None


def compact_urysohn_witness(F: FnFamily) -> list[str] | None:
    """First bisection that is not the domain of an invertible-valued element of S.

    For graded families only homogeneous bisections are asked for.
    """
    rows, inv_ok = _s_data(F)
    full = np.all((rows < 0) | inv_ok, axis=1)
    have = set(F.dom_bits[F.S][full].tolist())
    for B in F.G.bisections():
        if F.graded and not F.G.is_homogeneous(B):
            continue
        bits = sum(1 << g for g in B)
        if bits not in have:
            return F.G.names(sorted(B))
    return None


def _implication(report: Report, name: str, premise: str, conclusion: str) -> None:
    p, c = report.passed(premise), report.passed(conclusion)
    if not p:
        report.add_status(name, Status.UNMET, f"{premise} fails on this instance")
    else:
        report.add(name, c, witness=conclusion)


def check_bumpy(F: FnFamily) -> Report:
    rep = Report(f"bumpy {F.name}")
    rep.add("1-proper", True, detail="finite: every [1]a is compact")
    empty_in_s = F.zero is not None
    w = urysohn_witness(F)
    rep.add("urysohn", empty_in_s and w is None, witness=w if w is not None else "empty function missing")
    w = involutive_witness(F)
    rep.add("involutive", w is None, witness=w)
    return rep


def check_compact_bumpy(F: FnFamily) -> Report:
    rep = check_bumpy(F)
    rep.title = f"compact-bumpy {F.name}"
    w = compact_urysohn_witness(F)
    rep.add("compact-urysohn", w is None, witness=w)
    w = involutive_witness(F, compact=True)
    rep.add("compact-involutive", w is None, witness=w)
    _implication(rep, "compact-involutive => involutive", "compact-involutive", "involutive")
    _implication(rep, "compact-urysohn => urysohn", "compact-urysohn", "urysohn")
    return rep


def check_z_bumpy(F: FnFamily, compact: bool = True) -> Report:
    rep = check_compact_bumpy(F) if compact else check_bumpy(F)
    rep.title = f"{'compact-' if compact else ''}z-bumpy {F.name}"
    w = involutive_witness(F, z=True)
    rep.add("z-involutive", w is None, witness=w)
    if compact:
        w = involutive_witness(F, compact=True, z=True)
        rep.add("compact-z-involutive", w is None, witness=w)
        _implication(rep, "compact-z-involutive => z-involutive", "compact-z-involutive", "z-involutive")
    return rep


def is_bumpy(F: FnFamily) -> bool:
    return check_bumpy(F).ok


def is_compact_bumpy(F: FnFamily) -> bool:
    return check_compact_bumpy(F).ok


# -- diagonal conditions ------------------------------------------------------


def exhaustive_witness(F: FnFamily) -> tuple[str, str] | None:
    """First ``(unit, y)`` not realised as ``d(unit)`` by any ``d in D``."""
    G, Y = F.G, F.Y
    rows = F.rows[F.D]
    for x in sorted(G.units):
        seen = set(rows[:, x].tolist())
        for y in range(Y.m):
            if y not in seen:
                return (G.arrows[x], Y.names[y])
    return None


def is_exhaustive(F: FnFamily) -> bool:
    return exhaustive_witness(F) is None


def dom_sets(F: FnFamily, idx) -> list[frozenset[int]]:
    return [frozenset(np.flatnonzero(F.rows[i] >= 0).tolist()) for i in idx]


def t0_witness(sets, points) -> tuple[int, int] | None:
    """First pair of distinct points no set separates, or None."""
    points = sorted(points)
    sets = list(sets)
    for i, g in enumerate(points):
        for h in points[i + 1:]:
            if not any((g in P) != (h in P) for P in sets):
                return (g, h)
    return None


def is_T0(sets, points) -> bool:
    return t0_witness(sets, points) is None


def dom_Z_is_T0(F: FnFamily) -> bool:
    return is_T0(dom_sets(F, F.Z), F.G.units)
