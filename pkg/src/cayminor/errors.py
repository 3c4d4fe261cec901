"""Exception hierarchy shared by all cayminor modules."""

from __future__ import annotations


class CayminorError(Exception):
    """Base class for every error raised by this package."""

    code = "error"

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


class ModelMismatch(CayminorError):
    code = "model_mismatch"


class ParseError(CayminorError, ValueError):
    code = "parse_error"


class InvalidTable(CayminorError, ValueError):
    code = "invalid_table"


class EmptyGeneratingSet(CayminorError, ValueError):
    code = "empty_generating_set"


class BallTooLarge(CayminorError):
    code = "ball_too_large"

    def __init__(self, achieved_radius: int, vertex_count: int, limit: int):
        super().__init__(
            f"ball exceeded {limit} vertices ({vertex_count}) after completing radius {achieved_radius}"
        )
        self.achieved_radius = achieved_radius
        self.vertex_count = vertex_count
        self.limit = limit

    def to_json(self) -> dict:
        out = super().to_json()
        out["achieved_radius"] = self.achieved_radius
        return out


class RadiusOutOfRange(CayminorError, ValueError):
    code = "radius_out_of_range"


class IndexOutOfBounds(CayminorError, IndexError):
    code = "index_out_of_bounds"


class HostTooLarge(CayminorError, ValueError):
    code = "host_too_large"


class EmptyTerminalSet(CayminorError, ValueError):
    code = "empty_terminal_set"


class DeadComponent(CayminorError, ValueError):
    code = "dead_component"


class TooShort(CayminorError, ValueError):
    code = "too_short"


class SegmentTooShort(CayminorError):
    code = "segment_too_short"


class ConstructionFailed(CayminorError):
    """Raised when the clique construction cannot complete on a finite ball."""

    code = "construction_failed"

    def __init__(self, message: str, pair=None, suggested_radius: int | None = None):
        super().__init__(message)
        self.pair = pair
        self.suggested_radius = suggested_radius

    def to_json(self) -> dict:
        out = super().to_json()
        out["pair"] = list(self.pair) if self.pair is not None else None
        out["suggested_radius"] = self.suggested_radius
        return out


class FrozenRegionExhausted(ConstructionFailed):
    code = "frozen_region_exhausted"


class RoutingFailed(ConstructionFailed):
    code = "routing_failed"


class InvariantViolation(CayminorError, AssertionError):
    code = "invariant_violation"
