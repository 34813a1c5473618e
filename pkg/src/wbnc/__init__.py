"""Polyhedrality threshold and weighted negativity bounds for blow-ups of
Hirzebruch surfaces and the projective plane at infinitely near points."""

from .bounds import BoundsReport, DeltaZeroTable, full_report, omega
from .cone import RationalCone, dual_cone, min_delta_threshold
from .config import (
    BaseSurface,
    ConfigError,
    Configuration,
    CurveDecoration,
    CurveKind,
    Point,
    export_dot,
    parse_configuration,
    serialize,
    validate,
)
from .formulas import Method, compute_a
from .lattice import NSClass, PairingContext, intersect

__all__ = [
    "BaseSurface", "BoundsReport", "ConfigError", "Configuration", "CurveDecoration", "CurveKind",
    "DeltaZeroTable", "Method", "NSClass", "PairingContext", "Point", "RationalCone", "compute_a",
    "dual_cone", "export_dot", "full_report", "intersect", "min_delta_threshold", "omega",
    "parse_configuration", "serialize", "validate",
]
