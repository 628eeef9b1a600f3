"""Boundary-curve rewriting, length growth, dimension estimates, rasters.

The snub scheme replaces every boundary edge by three segments of
``1/sqrt(7)`` times its length, so the boundary is exactly the curve of the
rewriting system ``F -> ∇F-F+F△`` (turtle alphabet: ``F`` forward, ``∇``
turn left by ``alpha = atan(sqrt(3)/5)``, ``△`` turn right by ``alpha``,
``+`` turn left by 60 degrees, ``-`` turn right by 60 degrees).  Its length
grows by ``3/sqrt(7)`` per step, giving a limit curve of dimension
``log 3 / log sqrt(7) ≈ 1.12915``.  Interior curves also grow, but not at a
fixed rate; they are tracked and reported, never asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import (
    DepthTooLargeError,
    InsufficientDataError,
    InvalidParameterError,
    UnknownSeedError,
)
from .snub import ALPHA, SubdivisionHistory

__all__ = [
    "LSystem",
    "SNUB_BOUNDARY_LSYSTEM",
    "lsystem_expand",
    "boundary_lengths",
    "DimensionEstimate",
    "estimate_fractal_dimension",
    "box_counting_dimension",
    "CurveTrack",
    "CurveFamily",
    "track_inner_curves",
    "FirstHitRaster",
    "first_hit_raster",
    "default_palette",
]

_SQRT7 = math.sqrt(7.0)

#: Scale factor of one rewriting step (new segment length / old).
SEGMENT_SCALE = 1.0 / _SQRT7

#: Boundary length growth factor per step.
LENGTH_FACTOR = 3.0 / _SQRT7


@dataclass(frozen=True)
class LSystem:
    """A single-rule turtle rewriting system."""

    axiom: str = "F"
    variable: str = "F"
    production: str = "∇F-F+F△"
    alpha: float = ALPHA
    #: turn (in units of ``alpha`` and ``pi/3`` respectively) per symbol
    turns: dict = field(default_factory=lambda: {
        "∇": (1, 0), "△": (-1, 0), "+": (0, 1), "-": (0, -1)})


#: The rewriting system whose curve is the snub boundary of one edge.
SNUB_BOUNDARY_LSYSTEM = LSystem()


def lsystem_expand(depth: int, max_depth: int = 12,
                   system: LSystem = SNUB_BOUNDARY_LSYSTEM
                   ) -> tuple[str, np.ndarray]:
    """Expand the rewriting system and run its turtle.

    Returns the symbol string after ``depth`` rewrites and the turtle
    polyline as an ``(n+1, 2)`` array, starting at the origin with one unit
    axiom segment, step length ``(1/sqrt(7)) ** depth``.

    The turtle heading is kept as an exact integer pair (multiples of
    ``alpha`` and of 60 degrees), so long expansions accumulate no heading
    drift.
    """
    if depth < 0:
        raise InvalidParameterError(f"depth must be >= 0, got {depth}")
    if depth > max_depth:
        raise DepthTooLargeError(
            f"depth {depth} exceeds the guard cap {max_depth}")
    symbols = system.axiom
    for _ in range(depth):
        symbols = symbols.replace(system.variable, system.production)

    a = b = 0
    headings = []
    for ch in symbols:
        if ch == system.variable:
            headings.append((a, b))
        else:
            da, db = system.turns[ch]
            a += da
            b += db
    heading = np.asarray(headings, dtype=np.float64)
    angle = heading[:, 0] * system.alpha + heading[:, 1] * (math.pi / 3.0)
    step = SEGMENT_SCALE ** depth
    moves = np.stack([np.cos(angle), np.sin(angle)], axis=1) * step
    polyline = np.vstack([[0.0, 0.0], np.cumsum(moves, axis=0)])
    return symbols, polyline


def boundary_lengths(history: SubdivisionHistory) -> list[float]:
    """Total boundary length of every mesh in the history."""
    out = []
    for mesh in history.meshes:
        lengths = mesh.edge_lengths()
        out.append(float(lengths[mesh.boundary_edge_mask].sum()))
    return out


@dataclass(frozen=True)
class DimensionEstimate:
    """A log-log slope fit: ``dimension`` with its fit ``residual`` (RMS)."""

    dimension: float
    residual: float
    log_sizes: np.ndarray
    log_values: np.ndarray


def estimate_fractal_dimension(lengths) -> DimensionEstimate:
    """Dimension of a curve family from its per-step lengths.

    With scales ``s_t = (1/sqrt(7))^t`` the estimate is
    ``D = 1 - slope`` of ``log L_t`` against ``log s_t``; an exactly
    geometric sequence ``L_t = L_0 (3/sqrt(7))^t`` gives
    ``D = log 3 / log sqrt(7) ≈ 1.12915`` and constant lengths give 1.
    """
    lengths = np.asarray(lengths, dtype=np.float64)
    if len(lengths) < 3:
        raise InsufficientDataError(
            f"need at least 3 length samples, got {len(lengths)}")
    if (lengths <= 0).any():
        raise InvalidParameterError("lengths must be positive")
    t = np.arange(len(lengths))
    log_s = t * math.log(SEGMENT_SCALE)
    log_l = np.log(lengths)
    slope, intercept = np.polyfit(log_s, log_l, 1)
    fit = slope * log_s + intercept
    residual = float(np.sqrt(np.mean((fit - log_l) ** 2)))
    return DimensionEstimate(dimension=float(1.0 - slope), residual=residual,
                             log_sizes=log_s, log_values=log_l)


def box_counting_dimension(polyline: np.ndarray,
                           grid_sizes=tuple(2 ** k for k in range(4, 11)),
                           samples_per_segment: int = 4) -> DimensionEstimate:
    """Cross-validation estimator: count occupied boxes at several grids.

    The polyline is resampled so box occupancy is not undercounted on long
    segments, then for each grid size ``n`` the curve's bounding square is
    split into ``n x n`` boxes and the occupied count ``N(n)`` recorded;
    the dimension is the slope of ``log N`` against ``log n``.
    """
    pts = np.asarray(polyline, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise InvalidParameterError("polyline must be an (n, 2) array, n >= 2")
    if len(grid_sizes) < 3:
        raise InsufficientDataError("need at least 3 grid sizes")
    if samples_per_segment > 1:
        frac = np.linspace(0.0, 1.0, samples_per_segment, endpoint=False)
        seg_a = pts[:-1]
        seg_d = pts[1:] - pts[:-1]
        dense = (seg_a[:, None, :] + frac[None, :, None] * seg_d[:, None, :])
        pts = np.vstack([dense.reshape(-1, 2), pts[-1:]])

    lo = pts.min(axis=0)
    span = float(max(pts.max(axis=0) - lo)) or 1.0
    counts = []
    for n in grid_sizes:
        ij = np.floor((pts - lo) / span * n).astype(np.int64)
        np.clip(ij, 0, n - 1, out=ij)
        counts.append(len(np.unique(ij[:, 0] * n + ij[:, 1])))
    log_n = np.log(np.asarray(grid_sizes, dtype=np.float64))
    log_c = np.log(np.asarray(counts, dtype=np.float64))
    slope, intercept = np.polyfit(log_n, log_c, 1)
    fit = slope * log_n + intercept
    residual = float(np.sqrt(np.mean((fit - log_c) ** 2)))
    return DimensionEstimate(dimension=float(slope), residual=residual,
                             log_sizes=log_n, log_values=log_c)


# ---------------------------------------------------------------------------
# per-curve tracking through a subdivision history
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveTrack:
    """One seed edge followed through every later refinement step."""

    seed_edge: int
    vertex_paths: list      # per step: (k,) vertex-id array into that mesh
    lengths: list           # per step: polyline length (float)
    endpoints_fixed: tuple  # (bool, bool): endpoint never moves across steps

    @property
    def growth_factors(self) -> list:
        return [b / a for a, b in zip(self.lengths, self.lengths[1:])]


@dataclass(frozen=True)
class CurveFamily:
    """Curves tracked from step ``start_step`` to the end of a history."""

    start_step: int
    curves: list


def track_inner_curves(history: SubdivisionHistory, seed_edges,
                       start_step: int = 0) -> CurveFamily:
    """Follow edges of mesh ``start_step`` through all later refinements.

    Each edge becomes three at every step (its replacement segments); the
    tracked object is the polyline through the descendant vertices, measured
    with each step's final (smoothed) positions.  An endpoint is flagged
    fixed when its position is identical across all tracked steps — true for
    boundary vertices and for vertices pinned by symmetry.
    """
    if not 0 <= start_step < len(history.meshes):
        raise InvalidParameterError(
            f"start step {start_step} outside history of {len(history.meshes)}")
    base = history.meshes[start_step]
    seed_edges = [int(e) for e in seed_edges]
    for e in seed_edges:
        if not 0 <= e < base.edge_count:
            raise UnknownSeedError(
                f"edge {e} does not exist at step {start_step} "
                f"({base.edge_count} edges)")

    curves = []
    for e in seed_edges:
        a, b = (int(v) for v in base.edges[e])
        path = np.asarray([a, b], dtype=np.int64)
        paths = [path]
        lengths = [_polyline_length(base, path)]
        for t in range(start_step + 1, len(history.meshes)):
            source = history.meshes[t - 1]
            mesh = history.meshes[t]
            path = _refine_path(source, path)
            paths.append(path)
            lengths.append(_polyline_length(mesh, path))
        fixed = tuple(_position_stable(history, start_step, paths, which)
                      for which in (0, -1))
        curves.append(CurveTrack(seed_edge=e, vertex_paths=paths,
                                 lengths=lengths, endpoints_fixed=fixed))
    return CurveFamily(start_step=start_step, curves=curves)


def _polyline_length(mesh, path: np.ndarray) -> float:
    pos = np.asarray(mesh.positions)[path]
    return float(np.hypot(*(np.diff(pos, axis=0)).T).sum())


def _refine_path(source, path: np.ndarray) -> np.ndarray:
    """Vertex path in the refined mesh after replacing each edge by three."""
    V = source.vertex_count
    u = path[:-1]
    v = path[1:]
    e = np.asarray([source.edge_id(int(a), int(b)) for a, b in zip(u, v)],
                   dtype=np.int64)
    first = np.where(u == source.edges[e, 0],
                     V + 2 * e, V + 2 * e + 1)
    second = (2 * V + 4 * e + 1) - first
    out = np.empty(3 * len(e) + 1, dtype=np.int64)
    out[0::3] = path
    out[1::3] = first
    out[2::3] = second
    return out


def _position_stable(history, start_step, paths, which) -> bool:
    reference = None
    for t, path in zip(range(start_step, len(history.meshes)), paths):
        p = np.asarray(history.meshes[t].positions)[path[which]]
        if reference is None:
            reference = p
        elif not np.allclose(p, reference, atol=1e-12, rtol=0.0):
            return False
    return True


# ---------------------------------------------------------------------------
# first-hit raster
# ---------------------------------------------------------------------------

def default_palette(steps: int) -> np.ndarray:
    """RGB ramp per step: dark-to-bright blues for the first ten steps,
    then a dark-to-bright green ramp for later ones."""
    colors = np.zeros((max(steps, 1), 3), dtype=np.uint8)
    for t in range(len(colors)):
        if t < 10:
            f = t / 9.0 if len(colors) > 1 else 0.0
            colors[t] = (int(30 + 90 * f), int(40 + 140 * f),
                         int(90 + 165 * f))
        else:
            f = min((t - 10) / 9.0, 1.0)
            colors[t] = (int(20 + 80 * f), int(110 + 145 * f),
                         int(40 + 60 * f))
    return colors


@dataclass(frozen=True)
class FirstHitRaster:
    """Per-pixel first refinement step whose vertices hit the pixel.

    ``step_index`` is an ``(H, W)`` array, ``-1`` for never-hit pixels;
    row 0 is the top of the image (maximum y).  ``pixel_counts[t]`` is the
    number of pixels first colored at step ``t``; ``saturation_step`` is the
    last step that colored anything new.
    """

    step_index: np.ndarray
    window: tuple
    palette: np.ndarray
    pixel_counts: np.ndarray
    saturation_step: int

    @property
    def resolution(self) -> int:
        return self.step_index.shape[1]


def first_hit_raster(history: SubdivisionHistory, resolution: int,
                     palette: np.ndarray | None = None,
                     window: tuple | None = None) -> FirstHitRaster:
    """Color each pixel by the first step whose mesh has a vertex inside it.

    Pixels are half-open boxes over ``window = (xmin, ymin, xmax, ymax)``;
    the default window is the input mesh's bounding box padded by 25% of its
    larger dimension, which contains every later mesh (each step's new
    vertices stay within a fraction of an edge length of the old ones).
    Already-colored pixels never change, so extending the history only adds
    pixels (until saturation, after which nothing changes).
    """
    if resolution < 16:
        raise InvalidParameterError(
            f"resolution must be >= 16 pixels, got {resolution}")
    if len(history.meshes) == 0:
        raise InvalidParameterError("history is empty")
    if window is None:
        base = np.asarray(history.meshes[0].positions)
        lo = base.min(axis=0)
        hi = base.max(axis=0)
        pad = 0.25 * float(max(hi - lo))
        window = (float(lo[0] - pad), float(lo[1] - pad),
                  float(hi[0] + pad), float(hi[1] + pad))
    xmin, ymin, xmax, ymax = map(float, window)
    if not (xmax > xmin and ymax > ymin):
        raise InvalidParameterError("window must have positive extent")

    W = int(resolution)
    H = max(int(round(W * (ymax - ymin) / (xmax - xmin))), 1)
    grid = np.full(H * W, -1, dtype=np.int32)
    counts = np.zeros(len(history.meshes), dtype=np.int64)
    saturation = 0
    for t, mesh in enumerate(history.meshes):
        pos = np.asarray(mesh.positions)
        px = np.floor((pos[:, 0] - xmin) / (xmax - xmin) * W).astype(np.int64)
        py = np.floor((ymax - pos[:, 1]) / (ymax - ymin) * H).astype(np.int64)
        ok = (px >= 0) & (px < W) & (py >= 0) & (py < H)
        idx = py[ok] * W + px[ok]
        unset = idx[grid[idx] == -1]
        if len(unset):
            grid[unset] = t
            counts[t] = len(np.unique(unset))
            saturation = t
    if palette is None:
        palette = default_palette(len(history.meshes))
    return FirstHitRaster(step_index=grid.reshape(H, W), window=window,
                          palette=np.asarray(palette, dtype=np.uint8),
                          pixel_counts=counts, saturation_step=saturation)
