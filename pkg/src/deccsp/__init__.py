"""Interpreter and bounded state-space explorer for DEcCSP, a CSP dialect
with compensating long-running transactions, data, control blocks and
process variables for dynamic recovery."""

from . import core
from .errors import (
    DeccspError,
    FreshnessViolation,
    NoMatchingPath,
    ParseError,
    SemanticError,
    StaticError,
)
from .explorer import (
    FaultSelector,
    Lts,
    Stepper,
    Trace,
    build_lts,
    compensation_trace,
    compensation_traces,
    find_deadlocks,
    traces,
)
from .options import EngineOptions, FaultMode, UnassignedMode
from .parser import ModelDefinition, load_model, parse_event, parse_model, parse_process
from .semantics import Engine, Transition, step

__version__ = "0.1.0"

__all__ = [
    "core", "DeccspError", "FreshnessViolation", "NoMatchingPath", "ParseError",
    "SemanticError", "StaticError", "FaultSelector", "Lts", "Stepper", "Trace",
    "build_lts", "compensation_trace", "compensation_traces", "find_deadlocks", "traces",
    "EngineOptions", "FaultMode", "UnassignedMode", "ModelDefinition", "load_model",
    "parse_event", "parse_model", "parse_process", "Engine", "Transition", "step",
]
