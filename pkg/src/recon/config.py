"""Size budgets shared by the verification sweeps."""

from __future__ import annotations

import os

DEFAULT_BUDGET = 400  # max |S| for cubic (triple) sweeps


def budget(value: int | None = None) -> int:
    """Explicit value, else ``RECON_BUDGET``, else the default."""
    if value is not None:
        b = int(value)
    else:
        b = int(os.environ.get("RECON_BUDGET", DEFAULT_BUDGET))
    if b <= 0:
        raise ValueError("budget must be positive")
    return b
