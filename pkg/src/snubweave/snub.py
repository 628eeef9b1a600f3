"""Pentagon-producing snub subdivision with boundary-preserving smoothing.

One refinement step applies four operations to a planar mesh:

1. every edge is replaced by a *Z-triplet*: three segments of equal length
   ``|e|/sqrt(7)`` whose consecutive segments enclose an angle of ``2*pi/3``
   and whose bend points sit symmetrically about the edge midpoint;
2. every face receives a new vertex at its vertex centroid (*barycenter*);
3. each bend point is joined by a *spoke* to the barycenter lying in the
   same open half-plane of its source edge, which cuts every refined region
   into pentagons;
4. optionally, every inner vertex is moved (simultaneously) to the mean of
   the barycenters of its incident faces, while outer vertices stay exactly
   where they are.

The bend direction of each Z is controlled by a per-edge side flag.  A
geometric fact makes flag assignment trivial: reversing an edge's direction
swaps both the reference endpoint and left/right, so the flag reads the same
from both incident faces, and the all-pentagon structure forces one global
flag value.  The two values (+1/-1) produce mirror-image refinements.

Positions use an exact closed form: on an edge from ``a`` to ``b`` with
``d = b - a``, the bend point near ``a`` for flag ``s`` is
``a + ((5*dx - s*sqrt(3)*dy) / 14, (s*sqrt(3)*dx + 5*dy) / 14)``, i.e. the
edge direction rotated by ``s * atan(sqrt(3)/5)`` and scaled by
``1/sqrt(7)``; the bend point near ``b`` mirrors it through the midpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
import math

import numpy as np

from .errors import (
    AmbiguousHalfPlaneError,
    InternalInvariantError,
    InvalidParameterError,
    MissingProvenanceError,
)
from .mesh_core import (
    EdgeTag,
    ElementClass,
    Mesh,
    ParentKind,
    Provenance,
    VertexTag,
    build_mesh,
    classify,
)

__all__ = [
    "ALPHA",
    "ZTripletGeometry",
    "Z_GEOMETRY",
    "ZOrientation",
    "StepRecord",
    "SubdivisionHistory",
    "assign_z_orientations",
    "replace_edges_with_z_triplets",
    "insert_barycenters",
    "connect_new_vertices",
    "smooth_inner_vertices",
    "snub_subdivide",
]

logger = logging.getLogger(__name__)

#: Initial turn of a Z-triplet against its edge direction.
ALPHA = math.atan(math.sqrt(3.0) / 5.0)

_SQRT3 = math.sqrt(3.0)
_SQRT7 = math.sqrt(7.0)


@dataclass(frozen=True)
class ZTripletGeometry:
    """The three defining constants of the edge-replacement geometry."""

    alpha: float = ALPHA                 # first/last segment turn (radians)
    segment_ratio: float = 1.0 / _SQRT7  # segment length / edge length
    bend_angle: float = 2.0 * math.pi / 3.0  # enclosed angle at each bend


#: The geometry used by this scheme (all three values are forced by the
#: requirements that the triplet has equal segment lengths, bends of
#: ``2*pi/3``, and preserved endpoints).
Z_GEOMETRY = ZTripletGeometry()


@dataclass(frozen=True)
class ZOrientation:
    """Bend-side flags, one per undirected edge.

    ``edge_flags[e]`` is +1 when, looking along the edge from its
    lower-index endpoint to its higher-index endpoint, the bend point near
    the lower-index endpoint lies to the *left*; -1 when it lies to the
    right.  The reading is direction-symmetric (reversing the viewing
    direction swaps both the reference endpoint and left/right), so the
    same value serves both incident faces.

    ``violations`` lists edges where propagation met a contradiction.  The
    structural argument above means a single global flag always works, so
    the list stays empty; it is kept so callers can rely on the field.
    """

    edge_flags: np.ndarray
    seed_edge: int
    seed_flag: int
    violations: list[int] = field(default_factory=list)

    def flag_between(self, mesh: Mesh, u: int, v: int) -> int:
        """Bend-side flag of the edge joining ``u`` and ``v``.

        The value is the same whichever way the pair is given (the reading
        is direction-symmetric; see the class docstring).
        """
        return int(self.edge_flags[mesh.edge_id(u, v)])


def assign_z_orientations(mesh: Mesh, seed_edge: int | None = None,
                          seed_flag: int = 1) -> ZOrientation:
    """Choose a bend side for every edge, spreading out from a seed edge.

    Consistency around every face requires all edges of the face to carry
    the same flag, and sharing an edge transfers that requirement to the
    neighboring face, so on a connected mesh the seed determines every flag:
    all edges receive ``seed_flag``.  The two possible seeds yield mirror
    refinements.
    """
    if seed_flag not in (1, -1):
        raise InvalidParameterError(f"seed flag must be +1 or -1, got {seed_flag}")
    if seed_edge is None:
        seed_edge = 0
    if not (0 <= seed_edge < mesh.edge_count):
        raise InvalidParameterError(
            f"seed edge {seed_edge} out of range for {mesh.edge_count} edges")
    flags = np.full(mesh.edge_count, seed_flag, dtype=np.int8)
    return ZOrientation(edge_flags=flags, seed_edge=int(seed_edge),
                        seed_flag=int(seed_flag), violations=[])


# ---------------------------------------------------------------------------
# operation 1: edge replacement
# ---------------------------------------------------------------------------

def _bend_points(mesh: Mesh, orient: ZOrientation):
    """Positions of the two bend points of every edge, shape (E, 2) each."""
    pa = mesh.positions[mesh.edges[:, 0]]
    pb = mesh.positions[mesh.edges[:, 1]]
    d = pb - pa
    s = orient.edge_flags.astype(np.float64)
    near_a = np.empty_like(pa)
    near_a[:, 0] = pa[:, 0] + (5.0 * d[:, 0] - s * _SQRT3 * d[:, 1]) / 14.0
    near_a[:, 1] = pa[:, 1] + (s * _SQRT3 * d[:, 0] + 5.0 * d[:, 1]) / 14.0
    near_b = pa + pb - near_a
    return near_a, near_b


def replace_edges_with_z_triplets(mesh: Mesh, orient: ZOrientation
                                  ) -> tuple[Mesh, Provenance]:
    """Replace every edge by its Z-triplet; faces become 3n-cycles.

    New vertices are appended after the originals, interleaved per edge:
    edge ``e`` produces vertices ``V + 2e`` (near its lower-index endpoint)
    and ``V + 2e + 1``.
    """
    if len(orient.edge_flags) != mesh.edge_count:
        raise InvalidParameterError("orientation does not match mesh edges")
    V, E, F = mesh.vertex_count, mesh.edge_count, mesh.face_count
    near_a, near_b = _bend_points(mesh, orient)
    positions = np.empty((V + 2 * E, 2))
    positions[:V] = mesh.positions
    positions[V::2] = near_a
    positions[V + 1::2] = near_b

    flat = mesh.face_vertex_flat
    e_slot = mesh.face_edge_flat
    walk_first = np.where(flat == mesh.edges[e_slot, 0],
                          V + 2 * e_slot, V + 2 * e_slot + 1)
    walk_second = (2 * V + 4 * e_slot + 1) - walk_first
    total = len(flat)
    out_flat = np.empty(3 * total, dtype=np.int64)
    out_flat[0::3] = flat
    out_flat[1::3] = walk_first
    out_flat[2::3] = walk_second
    out_starts = 3 * mesh.face_starts

    refined = build_mesh(positions, (out_flat, out_starts))

    vertex_tags = np.concatenate([
        np.full(V, VertexTag.ORIGINAL, dtype=np.int8),
        np.full(2 * E, VertexTag.Z_VERTEX, dtype=np.int8)])
    edge_tags = np.full(refined.edge_count, EdgeTag.Z_OUTER, dtype=np.int8)
    mid_keys = ((V + 2 * np.arange(E, dtype=np.int64))
                * np.int64(refined.vertex_count)
                + (V + 2 * np.arange(E, dtype=np.int64) + 1))
    edge_tags[_edge_ids_for_keys(refined, mid_keys)] = EdgeTag.Z_MIDDLE

    kind = np.concatenate([
        np.full(V, ParentKind.VERTEX, dtype=np.int8),
        np.full(2 * E, ParentKind.EDGE, dtype=np.int8)])
    pid = np.concatenate([np.arange(V, dtype=np.int64),
                          np.repeat(np.arange(E, dtype=np.int64), 2)])
    prov = Provenance(vertex_tags=vertex_tags, edge_tags=edge_tags,
                      vertex_parent_kind=kind, vertex_parent_id=pid,
                      face_parent=np.arange(F, dtype=np.int64), source=mesh)
    return refined, prov


def _edge_ids_for_keys(mesh: Mesh, keys: np.ndarray) -> np.ndarray:
    """Edge ids for undirected-pair keys ``a * V + b`` (must all exist)."""
    mesh_keys = mesh.edges[:, 0] * np.int64(mesh.vertex_count) + mesh.edges[:, 1]
    idx = np.searchsorted(mesh_keys, keys)
    if (idx >= len(mesh_keys)).any() or (mesh_keys[idx] != keys).any():
        raise InternalInvariantError("expected edge missing from refined mesh")
    return idx


# ---------------------------------------------------------------------------
# operation 2: barycenter insertion
# ---------------------------------------------------------------------------

def insert_barycenters(mesh: Mesh, prov: Provenance) -> tuple[Mesh, Provenance]:
    """Add one vertex per source face at the source face's vertex centroid.

    The new vertices are isolated for now (no incident edges); operation 3
    connects them.  Vertex ids: source face ``f`` gets ``V + 2E + f`` where
    ``V`` and ``E`` count the source mesh's vertices and edges.
    """
    if prov.source is None or prov.face_parent is None:
        raise MissingProvenanceError(
            "barycenter insertion needs the source-face record from the "
            "edge-replacement step")
    source = prov.source
    centroids = source.face_centroids()
    positions = np.vstack([mesh.positions, centroids])
    with_bary = Mesh(positions, mesh.face_vertex_flat, mesh.face_starts,
                     mesh.edges, mesh.edge_left, mesh.edge_right,
                     mesh.face_edge_flat)

    F = source.face_count
    vertex_tags = np.concatenate([
        prov.vertex_tags, np.full(F, VertexTag.BARYCENTER, dtype=np.int8)])
    kind = np.concatenate([prov.vertex_parent_kind,
                           np.full(F, ParentKind.FACE, dtype=np.int8)])
    pid = np.concatenate([prov.vertex_parent_id,
                          np.arange(F, dtype=np.int64)])
    out = Provenance(vertex_tags=vertex_tags, edge_tags=prov.edge_tags,
                     vertex_parent_kind=kind, vertex_parent_id=pid,
                     face_parent=prov.face_parent, source=source)
    return with_bary, out


# ---------------------------------------------------------------------------
# operation 3: spoke connection
# ---------------------------------------------------------------------------

def connect_new_vertices(mesh: Mesh, prov: Provenance,
                         classes: ElementClass | None = None
                         ) -> tuple[Mesh, Provenance]:
    """Join bend points to same-half-plane barycenters; faces become pentagons.

    For every walk position of every source face, the bend point on the
    face's side of the source edge receives a spoke to that face's
    barycenter; the region between consecutive spokes is a pentagon.  After
    building the faces structurally from the bend-side flags, the stated
    half-plane rule is verified for every spoke: a bend point lying on its
    edge's supporting line raises :class:`AmbiguousHalfPlaneError`, and any
    disagreement between the half-plane choice and plain nearest-barycenter
    distance is logged (never asserted).

    ``classes`` (the source mesh's classification) is accepted for callers
    that already computed it; it is not needed by the construction, which
    handles outer edges implicitly (the outside bend point of a boundary
    edge belongs to no face and thus never receives a spoke).
    """
    del classes
    if prov.source is None:
        raise MissingProvenanceError(
            "spoke connection needs the records from operations 1 and 2")
    source = prov.source
    V, E, F = source.vertex_count, source.edge_count, source.face_count
    if mesh.vertex_count != V + 2 * E + F:
        raise MissingProvenanceError(
            "mesh does not look like the output of barycenter insertion")

    # Recover each edge's bend side from the geometry: flag +1 means the
    # bend point near the lower-index endpoint lies left of the edge walked
    # lower -> higher index.
    e_all = np.arange(E, dtype=np.int64)
    pa = source.positions[source.edges[:, 0]]
    d = source.positions[source.edges[:, 1]] - pa
    zna = mesh.positions[V + 2 * e_all] - pa
    bend_cross = d[:, 0] * zna[:, 1] - d[:, 1] * zna[:, 0]
    if (bend_cross == 0.0).any():
        raise AmbiguousHalfPlaneError(
            "a bend point lies exactly on its source edge")
    edge_flags = np.where(bend_cross > 0.0, 1, -1).astype(np.int64)

    flat = source.face_vertex_flat
    nxt = source.slot_next
    e_slot = source.face_edge_flat
    slot_face = source.slot_face
    s_here = edge_flags[e_slot]
    s_next = s_here[nxt]

    walk_first = np.where(flat == source.edges[e_slot, 0],
                          V + 2 * e_slot, V + 2 * e_slot + 1)
    walk_second = (2 * V + 4 * e_slot + 1) - walk_first
    spoke_z = np.where(s_here == 1, walk_first, walk_second)
    bary = V + 2 * E + slot_face

    a_bit = (s_here == 1).astype(np.int64)       # start contributes 2 slots
    b_bit = (s_next == -1).astype(np.int64)      # end contributes 2 slots
    lens = 4 + a_bit + b_bit
    out_starts = np.zeros(len(flat) + 1, dtype=np.int64)
    np.cumsum(lens, out=out_starts[1:])
    out_flat = np.empty(out_starts[-1], dtype=np.int64)
    p0 = out_starts[:-1]
    out_flat[p0] = bary
    out_flat[p0 + 1] = np.where(a_bit == 1, walk_first, walk_second)
    two = np.flatnonzero(a_bit)
    out_flat[p0[two] + 2] = walk_second[two]
    corner_next = flat[nxt]
    out_flat[p0 + 2 + a_bit] = corner_next
    out_flat[p0 + 3 + a_bit] = walk_first[nxt]
    tail = np.flatnonzero(b_bit)
    out_flat[p0[tail] + 4 + a_bit[tail]] = walk_second[nxt][tail]

    refined = build_mesh(mesh.positions, (out_flat, out_starts))
    _verify_half_plane_rule(source, mesh.positions, spoke_z, bary, flat,
                            corner_next, e_slot)

    # edge tags: three Z segments per source edge, plus the new spokes
    Vr = np.int64(refined.vertex_count)
    edge_tags = np.full(refined.edge_count, -1, dtype=np.int8)

    def keys(u, v):
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        return lo * Vr + hi

    e_ids = np.arange(E, dtype=np.int64)
    edge_tags[_edge_ids_for_keys(refined, np.sort(
        keys(V + 2 * e_ids, V + 2 * e_ids + 1)))] = EdgeTag.Z_MIDDLE
    for u, v in ((flat, walk_first), (walk_second, corner_next)):
        edge_tags[_edge_ids_for_keys(refined, np.sort(np.unique(keys(u, v))))] \
            = EdgeTag.Z_OUTER
    edge_tags[_edge_ids_for_keys(refined, np.sort(np.unique(
        keys(bary, spoke_z))))] = EdgeTag.SPOKE
    if (edge_tags < 0).any():
        raise InternalInvariantError("a refined edge received no role tag")

    out = Provenance(vertex_tags=prov.vertex_tags, edge_tags=edge_tags,
                     vertex_parent_kind=prov.vertex_parent_kind,
                     vertex_parent_id=prov.vertex_parent_id,
                     face_parent=slot_face.copy(), source=source)
    return refined, out


def _verify_half_plane_rule(source: Mesh, positions: np.ndarray,
                            spoke_z: np.ndarray, bary: np.ndarray,
                            walk_u: np.ndarray, walk_v: np.ndarray,
                            e_slot: np.ndarray) -> None:
    """Check every structural spoke against the half-plane statement."""
    pu = positions[walk_u]
    pv = positions[walk_v]
    d = pv - pu
    z = positions[spoke_z] - pu
    bc = positions[bary] - pu
    cross_z = d[:, 0] * z[:, 1] - d[:, 1] * z[:, 0]
    cross_b = d[:, 0] * bc[:, 1] - d[:, 1] * bc[:, 0]
    scale = np.hypot(d[:, 0], d[:, 1]) * np.hypot(z[:, 0], z[:, 1])
    ambiguous = np.abs(cross_z) <= 1e-12 * scale
    if ambiguous.any():
        raise AmbiguousHalfPlaneError(
            f"bend point {int(spoke_z[np.flatnonzero(ambiguous)[0]])} lies on "
            f"its source edge's supporting line")
    mism = np.sign(cross_z) != np.sign(cross_b)
    if mism.any():
        logger.warning(
            "half-plane rule disagreed with the bend-side construction for "
            "%d spokes (non-convex source faces?)", int(mism.sum()))

    # nearest-barycenter comparison on interior edges (logged, never asserted)
    e = e_slot
    inner = (source.edge_left[e] >= 0) & (source.edge_right[e] >= 0)
    if inner.any():
        V0, E0 = source.vertex_count, source.edge_count
        other_face = np.where(source.edge_left[e] == bary - V0 - 2 * E0,
                              source.edge_right[e], source.edge_left[e])
        zp = positions[spoke_z]
        d_own = np.hypot(*(positions[bary] - zp).T)
        d_oth = np.hypot(*(positions[V0 + 2 * E0 + other_face] - zp).T)
        disagree = inner & (d_oth < d_own)
        if disagree.any():
            logger.warning(
                "nearest-barycenter distance disagreed with the half-plane "
                "rule for %d spokes", int(disagree.sum()))


# ---------------------------------------------------------------------------
# operation 4: smoothing
# ---------------------------------------------------------------------------

def smooth_inner_vertices(mesh: Mesh, classes: ElementClass) -> Mesh:
    """Move every inner vertex to the mean of its faces' barycenters.

    All moves use the pre-move positions (simultaneous update); outer
    vertices are returned bitwise unchanged.
    """
    barys = mesh.face_centroids()
    V = mesh.vertex_count
    acc = np.zeros((V, 2))
    np.add.at(acc, mesh.face_vertex_flat, barys[mesh.slot_face])
    cnt = np.bincount(mesh.face_vertex_flat, minlength=V)
    inner = classes.vertex_is_inner & (cnt > 0)
    new_positions = mesh.positions.copy()
    new_positions[inner] = acc[inner] / cnt[inner, None]
    return mesh.with_positions(new_positions)


# ---------------------------------------------------------------------------
# multi-step driver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepRecord:
    """Everything recorded about one refinement step (producing mesh t)."""

    orientation: ZOrientation
    provenance: Provenance
    element_class: ElementClass      # classification of the refined mesh
    fixed_vertices: np.ndarray       # outer-vertex ids (never smoothed)


@dataclass(frozen=True)
class SubdivisionHistory:
    """Meshes ``M_0 .. M_t`` plus per-step lineage records.

    ``records[k]`` describes the step that produced ``meshes[k + 1]``.
    """

    meshes: list[Mesh]
    records: list[StepRecord]
    smoothing: bool

    @property
    def final(self) -> Mesh:
        return self.meshes[-1]

    @property
    def steps(self) -> int:
        return len(self.records)

    def __len__(self) -> int:
        return len(self.meshes)


def _check_count_recursion(source: Mesh, refined: Mesh) -> None:
    sum_n = int(source.face_sizes.sum())
    expect = (source.vertex_count + 2 * source.edge_count + source.face_count,
              3 * source.edge_count + sum_n,
              sum_n)
    got = (refined.vertex_count, refined.edge_count, refined.face_count)
    if got != expect:
        raise InternalInvariantError(
            f"element counts {got} do not match the recursion {expect}")


def snub_subdivide(mesh: Mesh, steps: int, smoothing: bool = True,
                   seed_flag: int = 1, seed_edge: int | None = None
                   ) -> SubdivisionHistory:
    """Apply ``steps`` snub refinements, recording every intermediate mesh.

    The bend-side seed is re-derived at every step (same seed edge and
    flag), so identical inputs and parameters give bitwise-identical
    histories.  With ``smoothing`` off, operation 4 is skipped.
    """
    if steps < 0:
        raise InvalidParameterError(f"steps must be >= 0, got {steps}")
    meshes = [mesh]
    records: list[StepRecord] = []
    current = mesh
    for _ in range(steps):
        orient = assign_z_orientations(current, seed_edge=seed_edge,
                                       seed_flag=seed_flag)
        m1, p1 = replace_edges_with_z_triplets(current, orient)
        m2, p2 = insert_barycenters(m1, p1)
        m3, p3 = connect_new_vertices(m2, p2)
        _check_count_recursion(current, m3)
        refined_classes = classify(m3)
        result = smooth_inner_vertices(m3, refined_classes) if smoothing else m3
        records.append(StepRecord(
            orientation=orient, provenance=p3,
            element_class=refined_classes,
            fixed_vertices=refined_classes.outer_vertex_ids))
        meshes.append(result)
        current = result
    return SubdivisionHistory(meshes=meshes, records=records,
                              smoothing=smoothing)
