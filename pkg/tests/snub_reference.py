"""Independent straightforward reference for the snub refinement step.

This module deliberately avoids the library's mesh data structures and its
vectorized construction: it works on plain point/face lists with dictionary
bookkeeping, applies the spoke rule naively per bend vertex (same half-plane
as the target barycenter, nearest-first; the main implementation instead
builds the pentagons structurally from bend-side flags and verifies the rule
afterwards), and smooths with a naive per-vertex loop.  Tests compare its
output against the main implementation up to mesh isomorphism, so any
systematic mistake shared by both code paths would have to be made twice in
structurally different ways.
"""

from __future__ import annotations

import math

ALPHA = math.atan(math.sqrt(3.0) / 5.0)
SQRT7 = math.sqrt(7.0)


def _rot(angle, vec):
    c, s = math.cos(angle), math.sin(angle)
    return (c * vec[0] - s * vec[1], s * vec[0] + c * vec[1])


def _dist(p, q):
    return math.hypot(p[0] - q[0], p[1] - q[1])


def _side(edge_a, edge_b, pt):
    """Which side of the directed line a->b the point lies on (-1, 0, +1)."""
    cross = ((edge_b[0] - edge_a[0]) * (pt[1] - edge_a[1])
             - (edge_b[1] - edge_a[1]) * (pt[0] - edge_a[0]))
    return (cross > 0) - (cross < 0)


def refine_once(points, faces, flag=1, smoothing=True):
    """One snub refinement of (points, faces); faces must be CCW cycles."""
    points = [tuple(map(float, p)) for p in points]
    faces = [list(map(int, f)) for f in faces]

    # --- bend points, two per undirected edge ------------------------------
    new_points = list(points)
    z_id = {}            # (a, b, side) -> new vertex id, with a < b
    z_edge_of = {}       # new vertex id -> (a, b)
    for face in faces:
        for i in range(len(face)):
            u, v = face[i], face[(i + 1) % len(face)]
            a, b = (u, v) if u < v else (v, u)
            if (a, b, "near_a") in z_id:
                continue
            pa, pb = points[a], points[b]
            step = _rot(flag * ALPHA, (pb[0] - pa[0], pb[1] - pa[1]))
            near_a = (pa[0] + step[0] / SQRT7, pa[1] + step[1] / SQRT7)
            near_b = (pa[0] + pb[0] - near_a[0], pa[1] + pb[1] - near_a[1])
            for side, pt in (("near_a", near_a), ("near_b", near_b)):
                z_id[(a, b, side)] = len(new_points)
                z_edge_of[len(new_points)] = (a, b)
                new_points.append(pt)

    # --- one barycenter per original face -----------------------------------
    bary_id = []
    for face in faces:
        cx = sum(points[v][0] for v in face) / len(face)
        cy = sum(points[v][1] for v in face) / len(face)
        bary_id.append(len(new_points))
        new_points.append((cx, cy))

    # --- faces adjacent to each undirected original edge --------------------
    edge_faces = {}
    for fi, face in enumerate(faces):
        for i in range(len(face)):
            u, v = face[i], face[(i + 1) % len(face)]
            key = (u, v) if u < v else (v, u)
            edge_faces.setdefault(key, []).append(fi)

    # --- assemble faces: spokes go to the nearest adjacent barycenter -------
    new_faces = []
    for fi, face in enumerate(faces):
        n = len(face)
        ring = []
        for i in range(n):
            u, v = face[i], face[(i + 1) % n]
            a, b = (u, v) if u < v else (v, u)
            if u < v:
                first, second = z_id[(a, b, "near_a")], z_id[(a, b, "near_b")]
            else:
                first, second = z_id[(a, b, "near_b")], z_id[(a, b, "near_a")]
            ring.extend([u, first, second])
        spoke_slots = []
        for idx, vid in enumerate(ring):
            if vid < len(points):
                continue  # an original corner, never a spoke end
            ea, eb = z_edge_of[vid]
            z_side = _side(points[ea], points[eb], new_points[vid])
            candidates = [f for f in edge_faces[(ea, eb)]
                          if _side(points[ea], points[eb],
                                   new_points[bary_id[f]]) == z_side]
            if not candidates:
                continue  # no barycenter in this bend point's half-plane
            best = min(candidates,
                       key=lambda f: _dist(new_points[vid],
                                           new_points[bary_id[f]]))
            if best == fi:
                spoke_slots.append(idx)
        for k in range(len(spoke_slots)):
            i0 = spoke_slots[k]
            i1 = spoke_slots[(k + 1) % len(spoke_slots)]
            arc = []
            j = i0
            while True:
                arc.append(ring[j])
                if j == i1:
                    break
                j = (j + 1) % len(ring)
            new_faces.append([bary_id[fi]] + arc)

    if smoothing:
        new_points = smooth(new_points, new_faces)
    return new_points, new_faces


def smooth(points, faces):
    """Move inner vertices to the mean of their faces' barycenters."""
    edge_count = {}
    vertex_faces = {}
    for fi, face in enumerate(faces):
        for i in range(len(face)):
            u, v = face[i], face[(i + 1) % len(face)]
            key = (u, v) if u < v else (v, u)
            edge_count[key] = edge_count.get(key, 0) + 1
            vertex_faces.setdefault(u, []).append(fi)
    outer = set()
    for (u, v), cnt in edge_count.items():
        if cnt == 1:
            outer.add(u)
            outer.add(v)
    barys = []
    for face in faces:
        cx = sum(points[v][0] for v in face) / len(face)
        cy = sum(points[v][1] for v in face) / len(face)
        barys.append((cx, cy))
    result = list(points)
    for vid, fs in vertex_faces.items():
        if vid in outer:
            continue
        result[vid] = (sum(barys[f][0] for f in fs) / len(fs),
                       sum(barys[f][1] for f in fs) / len(fs))
    return result


def refine(points, faces, steps, flag=1, smoothing=True):
    """Apply ``refine_once`` repeatedly."""
    for _ in range(steps):
        points, faces = refine_once(points, faces, flag=flag,
                                    smoothing=smoothing)
    return points, faces
