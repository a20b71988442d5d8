"""Integer-only clock skew compensation with an extended Bresenham walk."""

from ._backend import BACKEND
from .compensator import (
    Case,
    ClockRollbackError,
    ClockState,
    CompensationError,
    CompensationOutcome,
    RatioEstimate,
    WindowParams,
    candidate_window,
    compensate,
    compensate_batch,
    compensate_case1,
    logical_clock_update,
    resync,
)
from .core import (
    Convention,
    DecisionVar,
    InputMagnitudeError,
    LatticePoint,
    Movement,
    Slope,
    initial_td,
    otd,
    reference_walk,
    step,
)
from .oracles import (
    FpFormat,
    QuotientOrder,
    RoundingMode,
    exact_quotient,
    float_compensate,
    fp_quotient,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Case",
    "ClockRollbackError",
    "ClockState",
    "CompensationError",
    "CompensationOutcome",
    "Convention",
    "DecisionVar",
    "FpFormat",
    "InputMagnitudeError",
    "LatticePoint",
    "Movement",
    "QuotientOrder",
    "RatioEstimate",
    "RoundingMode",
    "Slope",
    "WindowParams",
    "candidate_window",
    "compensate",
    "compensate_batch",
    "compensate_case1",
    "exact_quotient",
    "float_compensate",
    "fp_quotient",
    "initial_td",
    "logical_clock_update",
    "otd",
    "reference_walk",
    "resync",
    "step",
]
