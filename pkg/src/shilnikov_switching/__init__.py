"""Semi-analytic model of switching near a symmetric pair of homoclinic loops
to a Shilnikov saddle-focus in three dimensions."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    HypothesisViolation,
    InternalError,
    ModelError,
    PrecisionExhausted,
    SwitchingError,
)
from .geometry import (
    CANONICAL,
    Boundary,
    Cap,
    CapPoint,
    CylinderPoint,
    SaddleSpectrum,
    WallPoint,
    apply_symmetry,
    classify_boundary,
    local_flow,
    local_map,
    time_of_flight,
)
from .maps import TransitionSpec, return_jacobian, return_map, transition
from .orbits import OrbitRecord, Termination, iterate, suspend_orbit
from .paths import ItineraryPath, Symbol
from .switching import (
    AdmissibleInterval,
    Segment,
    find_crossings,
    realize_all,
    realize_infinite_prefix,
    realize_path,
    refine_once,
    segment_image,
)
from .follows import verify_follows

__all__ = [
    "AdmissibleInterval",
    "Boundary",
    "CANONICAL",
    "Cap",
    "CapPoint",
    "ConfigError",
    "CylinderPoint",
    "HypothesisViolation",
    "InternalError",
    "ItineraryPath",
    "ModelError",
    "OrbitRecord",
    "PrecisionExhausted",
    "SaddleSpectrum",
    "Segment",
    "SwitchingError",
    "Symbol",
    "Termination",
    "TransitionSpec",
    "WallPoint",
    "apply_symmetry",
    "classify_boundary",
    "find_crossings",
    "iterate",
    "local_flow",
    "local_map",
    "realize_all",
    "realize_infinite_prefix",
    "realize_path",
    "refine_once",
    "return_jacobian",
    "return_map",
    "segment_image",
    "suspend_orbit",
    "time_of_flight",
    "transition",
    "verify_follows",
]
