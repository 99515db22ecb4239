"""Offline monitoring of STL* (signal temporal logic with a value-freeze operator).

Satisfaction sets are computed exactly as unions of convex polygons in the
``(t, t*)`` plane; a signal satisfies a formula iff ``(0, 0)`` is in the root
set.
"""

from .formula import (
    TRUE,
    And,
    Atomic,
    BoundaryComparatorWarning,
    Cmp,
    EqualityUnsupported,
    Eventually,
    Formula,
    FormulaError,
    Freeze,
    Globally,
    Implies,
    IntervalError,
    LinearPredicate,
    Not,
    Or,
    ParseError,
    SignalSchema,
    TrueF,
    UnknownVariable,
    Until,
    desugar,
    parse,
    pretty,
    required_length,
)
from .geometry import ConvexPolygon, Region
from .satset import MonitorReport, ShortSignalError, Verdict, monitor, satisfies
from .signal import DomainError, NonMonotoneTime, ShortSignal, Signal, SignalError, check_length, load_csv

__version__ = "0.1.0"

__all__ = [
    "TRUE", "And", "Atomic", "BoundaryComparatorWarning", "Cmp", "ConvexPolygon", "DomainError",
    "EqualityUnsupported", "Eventually", "Formula", "FormulaError", "Freeze", "Globally", "Implies",
    "IntervalError", "LinearPredicate", "MonitorReport", "NonMonotoneTime", "Not", "Or", "ParseError",
    "Region", "ShortSignal", "ShortSignalError", "Signal", "SignalError", "SignalSchema", "TrueF",
    "UnknownVariable", "Until", "Verdict", "check_length", "desugar", "load_csv", "monitor", "parse",
    "pretty", "required_length", "satisfies",
]
