"""Exception hierarchy shared by every module.

The CLI maps each family onto a process exit code, so new exceptions should
subclass one of the families below rather than ``Exception`` directly.
"""

from __future__ import annotations


class SwitchingError(Exception):
    """Root of all package errors."""

    exit_code = 5


class ModelError(SwitchingError):
    """A map or flow was evaluated outside its domain."""

    exit_code = 5


class StableManifoldInput(ModelError):
    """The wall point lies on the local stable manifold (y == 0)."""


class OutOfBlock(ModelError):
    """A cylinder point lies outside the isolating block."""


class OmegaHit(ModelError):
    """A trajectory landed on the non-transverse corner set."""


class LeftNeighbourhood(ModelError):
    """A transition image left the wall chart (|y| > 1)."""


class OutsideFlowBox(ModelError):
    """A cap point lies beyond the validity radius of the transition map."""


class InvalidSegment(ModelError):
    pass


class InvalidNeighbourhoods(ModelError):
    pass


class InvalidRectangle(ModelError):
    pass


class PrecisionExhausted(SwitchingError):
    """Sign changes can no longer be resolved at the working precision.

    ``k_found`` is the number of crossings (or refinement levels) that were
    resolved before giving up.
    """

    exit_code = 3

    def __init__(self, message: str, k_found: int = 0):
        super().__init__(message)
        self.k_found = k_found


class ConfigError(SwitchingError):
    exit_code = 2

    def __init__(self, message: str, key: str | None = None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


class HypothesisViolation(SwitchingError):
    """Model parameters break a standing hypothesis; ``hypothesis`` holds its label."""

    exit_code = 4

    def __init__(self, message: str, hypothesis: str = "H1"):
        super().__init__(f"({hypothesis}) {message}")
        self.hypothesis = hypothesis


class InternalError(SwitchingError):
    exit_code = 5
