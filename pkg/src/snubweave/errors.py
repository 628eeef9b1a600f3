"""Exception types shared across the package.

Every error raised for invalid *input* derives from :class:`SnubWeaveError`,
so callers (and the command-line front end) can distinguish validation
failures from genuine bugs.  :class:`InternalInvariantError` deliberately does
*not* derive from it: it signals that an internal consistency check failed,
which is never the caller's fault.
"""

from __future__ import annotations


class SnubWeaveError(Exception):
    """Base class for all input-validation errors raised by snubweave."""


# ---------------------------------------------------------------------------
# mesh construction / validation
# ---------------------------------------------------------------------------

class NonManifoldError(SnubWeaveError):
    """An edge has more than two incident faces, or the boundary is pinched."""


class DegenerateFaceError(SnubWeaveError):
    """A face cycle is too short, repeats a vertex, or has zero area."""


class IndexRangeError(SnubWeaveError):
    """A vertex index is outside the valid range."""


class InvalidParameterError(SnubWeaveError):
    """A parameter value is outside its documented domain."""


class SelfIntersectionError(SnubWeaveError):
    """Two non-adjacent edges of the mesh cross each other."""


# ---------------------------------------------------------------------------
# snub subdivision
# ---------------------------------------------------------------------------

class InconsistentOrientationError(SnubWeaveError):
    """Bend-side propagation reached an edge with contradictory flags."""


class AmbiguousHalfPlaneError(SnubWeaveError):
    """A new vertex lies on the supporting line of its source edge."""


class MissingProvenanceError(SnubWeaveError):
    """The operation needs per-element role tags that are not available."""


# ---------------------------------------------------------------------------
# classic schemes
# ---------------------------------------------------------------------------

class NotTriangleMeshError(SnubWeaveError):
    """The scheme requires a pure triangle mesh."""


# ---------------------------------------------------------------------------
# weaving
# ---------------------------------------------------------------------------

class NotBipartiteError(SnubWeaveError):
    """The vertex graph contains an odd cycle, so no two-coloring exists."""


class InvalidTriangleColoringError(SnubWeaveError):
    """Some triangle does not have exactly one vertex of the first color."""


class BoundaryC2EdgeError(SnubWeaveError):
    """A second-color edge lies on the boundary, leaving an unglued triangle."""


class MissingOriginRecordsError(SnubWeaveError):
    """The step result lacks the origin records this operation consumes."""


class NoInteriorEdgesError(SnubWeaveError):
    """The mesh has no interior edge, so no crossing can be built."""


# ---------------------------------------------------------------------------
# fractal analysis
# ---------------------------------------------------------------------------

class DepthTooLargeError(SnubWeaveError):
    """The requested rewriting depth exceeds the configured guard."""


class InsufficientDataError(SnubWeaveError):
    """Too few samples to fit a dimension estimate."""


class UnknownSeedError(SnubWeaveError):
    """A curve seed references an edge that does not exist at that step."""


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

class MeshFormatError(SnubWeaveError):
    """A mesh file violates the text format.  Carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class WeaveFormatError(SnubWeaveError):
    """A weave document violates the structured-text layout."""


# ---------------------------------------------------------------------------
# internal
# ---------------------------------------------------------------------------

class InternalInvariantError(Exception):
    """An internal consistency check failed (a bug, not bad input)."""
