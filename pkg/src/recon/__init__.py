"""Reconstruct finite groupoids from semigroups of partial functions on them."""

from .coefficients import FiniteRing, Semigroupoid, from_ring, gf, trivial, zmod
from .functions import FnFamily, FnSpace, canonical_bumpy, closure, steinberg_family
from .groupoid import FiniteGroupoid, GroupoidError, group, pair, transformation, validate_groupoid
from .pipeline import steinberg_pipeline
from .report import SCHEMA_TOOL_VERSION as __version__
from .report import Report, Status
from .ultrafilters import enumerate_ultrafilters, reconstruct, verify_recovery

__all__ = [
    "FiniteGroupoid", "GroupoidError", "FiniteRing", "Semigroupoid", "FnFamily", "FnSpace", "Report", "Status",
    "validate_groupoid", "group", "pair", "transformation", "gf", "zmod", "trivial", "from_ring",
    "canonical_bumpy", "steinberg_family", "closure", "enumerate_ultrafilters", "reconstruct",
    "verify_recovery", "steinberg_pipeline", "__version__",
]
