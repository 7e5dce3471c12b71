"""Algebraic laws of the function products, checked exhaustively."""

from __future__ import annotations

import numpy as np

from .functions import BudgetExceeded, FnFamily
from .report import Report, Status


def _s_table(F: FnFamily) -> tuple[np.ndarray, np.ndarray]:
    """Products of S elements as S-local indices; -1 if a product leaves S."""
    S = F.S
    pos = np.full(F.k, -1, dtype=np.int64)
    pos[S] = np.arange(len(S))
    prod = F.prod(S[:, None], S[None, :])
    return S, np.where(prod >= 0, pos[np.maximum(prod, 0)], -1)


def associativity_witness(F: FnFamily, max_size: int | None = None) -> tuple | None:
    """First ``(a, b, c)`` in S with ``(ab)c != a(bc)``."""
    S, T = _s_table(F)
    if max_size is not None and len(S) > max_size:
        raise BudgetExceeded(f"|S| = {len(S)} exceeds {max_size} for the triple sweep")
    if np.any(T < 0):
        i, j = np.argwhere(T < 0)[0]
        raise ValueError(f"product of S elements {S[i]}, {S[j]} left S")
    k = len(S)
    for a in range(k):
        left = T[T[a, :], :]  # (ab)c, indexed [b, c]
        right = T[a, T]  # a(bc)
        bad = np.argwhere(left != right)
        if len(bad):
            b, c = bad[0]
            return tuple(F.space.describe(F.rows[S[x]]) for x in (a, b, c))
    return None


def absorbing_witness(F: FnFamily) -> dict | None:
    """First ``a`` with ``a0 != 0`` or ``0a != 0`` (requires the empty function)."""
    if F.zero is None:
        return None
    z = F.zero
    idx = np.arange(F.k)
    if F.mode == "bisection":
        idx = F.S
    left = F.prod(idx, np.full(len(idx), z))
    right = F.prod(np.full(len(idx), z), idx)
    bad = np.flatnonzero((left != z) | (right != z))
    return None if len(bad) == 0 else F.space.describe(F.rows[idx[bad[0]]])


def support_restriction_witness(F: FnFamily) -> tuple | None:
    """Convolution versus bisection product on every pair of bisection-supported elements.

    ``support_restrict(total(a) * total(b)) == a b``; the left side is the
    literal sum over factorisations, the right the single-term product.
    """
    sp = F.space
    if sp.ring is None:
        raise ValueError("needs ring coefficients")
    rows = F.rows[F.S]
    tot = sp.to_ring_rows(rows)
    back = sp.from_ring_rows(tot)
    if not np.array_equal(back, rows):
        return ("round trip", sp.describe(rows[np.flatnonzero(np.any(back != rows, axis=1))[0]]))
    step = max(1, 200_000 // max(1, len(rows) * sp.n))
    for start in range(0, len(rows), step):
        A = rows[start:start + step]
        conv = sp.convolve_rows(A[:, None, :], rows[None, :, :])
        bis = sp.product_rows(A[:, None, :], rows[None, :, :], check=False)
        bad = np.argwhere(np.any(conv != bis, axis=2))
        if len(bad):
            i, j = bad[0]
            return (sp.describe(A[i]), sp.describe(rows[j]))
    return None


def check_algebraic_laws(F: FnFamily, assoc_max: int = 60) -> Report:
    rep = Report(f"algebraic laws {F.name}")
    try:
        w = associativity_witness(F, max_size=assoc_max)
        rep.add("associative on S", w is None, witness=w, detail=f"{len(F.S) ** 3} triples")
    except BudgetExceeded as e:
        rep.add_status("associative on S", Status.UNVERIFIED, str(e))
    if F.zero is not None:
        w = absorbing_witness(F)
        rep.add("empty function absorbing", w is None, witness=w)
    if F.space.ring is not None:
        w = support_restriction_witness(F)
        rep.add("support restriction is multiplicative", w is None, witness=w,
                detail=f"{len(F.S) ** 2} bisection-supported pairs")
    return rep
