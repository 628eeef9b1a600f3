"""Rewriting system, length growth, dimension estimates, first-hit rasters."""

import math

import numpy as np
import pytest

import snubweave as sw
from snubweave import (
    DepthTooLargeError,
    InsufficientDataError,
    InvalidParameterError,
    UnknownSeedError,
)

SQRT7 = math.sqrt(7.0)
TARGET_DIMENSION = math.log(3.0) / math.log(SQRT7)


def polyline_length(p):
    return float(np.hypot(*np.diff(np.asarray(p), axis=0).T).sum())


# ---------------------------------------------------------------------------
# rewriting system
# ---------------------------------------------------------------------------

class TestLSystemExpand:
    def test_depth_zero(self):
        symbols, polyline = sw.lsystem_expand(0)
        assert symbols == "F"
        assert np.allclose(polyline, [[0.0, 0.0], [1.0, 0.0]], atol=1e-15)

    def test_depth_one_string_and_polyline(self):
        symbols, polyline = sw.lsystem_expand(1)
        assert symbols == "∇F-F+F△"
        # published (truncated) coordinates of the two bend points
        assert abs(polyline[1][0] - 0.35714) < 5e-5
        assert abs(polyline[1][1] - 0.123) < 1e-3
        assert abs(polyline[2][0] - 0.64286) < 5e-5
        assert abs(polyline[2][1] + 0.123) < 1e-3
        assert np.allclose(polyline[3], [1.0, 0.0], atol=1e-15)

    @pytest.mark.parametrize("depth", [2, 4, 7])
    def test_segment_count_length_and_endpoints(self, depth):
        symbols, polyline = sw.lsystem_expand(depth)
        assert symbols.count("F") == 3 ** depth
        assert len(polyline) == 3 ** depth + 1
        assert abs(polyline_length(polyline) - (3.0 / SQRT7) ** depth) < 1e-12
        assert np.allclose(polyline[0], [0.0, 0.0], atol=1e-12)
        assert np.allclose(polyline[-1], [1.0, 0.0], atol=1e-12)

    def test_segment_lengths_equal(self):
        _, polyline = sw.lsystem_expand(3)
        seg = np.hypot(*np.diff(polyline, axis=0).T)
        assert np.allclose(seg, (1.0 / SQRT7) ** 3, atol=1e-12)

    def test_depth_guard(self):
        with pytest.raises(DepthTooLargeError):
            sw.lsystem_expand(13)
        with pytest.raises(InvalidParameterError):
            sw.lsystem_expand(-1)

    def test_alpha_identity(self):
        # |2 e^{i a} + e^{i(a - 60deg)}| = sqrt(7) with real-positive sum
        a = sw.ALPHA
        total = 2 * np.exp(1j * a) + np.exp(1j * (a - math.pi / 3))
        assert abs(abs(total) - SQRT7) < 1e-12
        assert abs(total.imag) < 1e-12 and total.real > 0
        assert abs(a - math.atan(math.sqrt(3.0) / 5.0)) < 1e-15
        assert abs(math.degrees(a) - 19.1066) < 5e-5

    def test_matches_refined_boundary_edge(self):
        # the rewriting curve IS one boundary edge after t refinements
        hist = sw.snub_subdivide(sw.pentagon(), 4)
        family = sw.track_inner_curves(hist, [0])
        track = family.curves[0]
        m0 = hist.meshes[0]
        a, b = np.asarray(m0.edges)[0]
        pa, pb = np.asarray(m0.positions)[[a, b]]
        d = pb - pa
        scale = d[0] * d[0] + d[1] * d[1]
        for t in range(5):
            pos = np.asarray(hist.meshes[t].positions)[track.vertex_paths[t]]
            rel = pos - pa
            # similarity mapping pa -> (0,0), pb -> (1,0)
            norm = np.column_stack([
                (rel[:, 0] * d[0] + rel[:, 1] * d[1]) / scale,
                (rel[:, 1] * d[0] - rel[:, 0] * d[1]) / scale])
            _, expected = sw.lsystem_expand(t)
            assert np.abs(norm - expected).max() < 1e-12


# ---------------------------------------------------------------------------
# boundary lengths and dimension
# ---------------------------------------------------------------------------

class TestBoundaryLengths:
    def test_pentagon_ratio(self):
        hist = sw.snub_subdivide(sw.pentagon(), 4)
        lengths = sw.boundary_lengths(hist)
        assert len(lengths) == 5
        for a, b in zip(lengths, lengths[1:]):
            assert abs(b / a - 3.0 / SQRT7) < 1e-9

    def test_grid_ratio(self):
        hist = sw.snub_subdivide(sw.square_grid(2, 2), 3)
        lengths = sw.boundary_lengths(hist)
        for a, b in zip(lengths, lengths[1:]):
            assert abs(b / a - 3.0 / SQRT7) < 1e-9

    def test_zero_steps_is_perimeter(self):
        hist = sw.snub_subdivide(sw.square_grid(1, 1), 0)
        assert sw.boundary_lengths(hist) == [pytest.approx(4.0)]


class TestDimensionEstimate:
    def test_exact_geometric_series(self):
        lengths = [2.0 * (3.0 / SQRT7) ** t for t in range(7)]
        est = sw.estimate_fractal_dimension(lengths)
        assert abs(est.dimension - 1.12915) < 1e-5
        assert abs(est.dimension - TARGET_DIMENSION) < 1e-6
        assert est.residual < 1e-12

    def test_constant_lengths_give_one(self):
        est = sw.estimate_fractal_dimension([3.3, 3.3, 3.3, 3.3])
        assert abs(est.dimension - 1.0) < 1e-12

    def test_pentagon_history(self):
        hist = sw.snub_subdivide(sw.pentagon(), 6)
        est = sw.estimate_fractal_dimension(sw.boundary_lengths(hist))
        assert abs(est.dimension - TARGET_DIMENSION) < 1e-9

    def test_insufficient_data(self):
        with pytest.raises(InsufficientDataError):
            sw.estimate_fractal_dimension([1.0, 2.0])

    def test_box_counting_cross_validation(self):
        _, polyline = sw.lsystem_expand(8)
        est = sw.box_counting_dimension(polyline)
        assert abs(est.dimension - TARGET_DIMENSION) < 0.02

    def test_box_counting_straight_line(self):
        line = np.column_stack([np.linspace(0, 1, 200), np.zeros(200)])
        est = sw.box_counting_dimension(line)
        assert abs(est.dimension - 1.0) < 0.05


# ---------------------------------------------------------------------------
# curve tracking
# ---------------------------------------------------------------------------

class TestTrackInnerCurves:
    def test_boundary_seed_grows_exactly(self):
        hist = sw.snub_subdivide(sw.pentagon(), 4)
        family = sw.track_inner_curves(hist, [0])
        track = family.curves[0]
        for factor in track.growth_factors:
            assert abs(factor - 3.0 / SQRT7) < 1e-12
        assert track.endpoints_fixed == (True, True)

    def test_center_to_corner_bounded_by_endpoint_distance(self):
        # seed a spoke from the barycenter to an original corner at step 1
        hist = sw.snub_subdivide(sw.pentagon(), 4)
        m1 = hist.meshes[1]
        prov = hist.records[0].provenance
        spoke_ids = np.flatnonzero(
            np.asarray(prov.edge_tags) == sw.EdgeTag.SPOKE)
        seed = int(spoke_ids[0])
        family = sw.track_inner_curves(hist, [seed], start_step=1)
        track = family.curves[0]
        for t, (path, length) in enumerate(zip(track.vertex_paths,
                                               track.lengths), start=1):
            pos = np.asarray(hist.meshes[t].positions)
            endpoint_distance = float(np.hypot(*(pos[path[-1]] - pos[path[0]])))
            assert length >= endpoint_distance - 1e-12

    def test_interior_curve_lengths_reported_not_monotone_asserted(self):
        hist = sw.snub_subdivide(sw.square_grid(2, 2), 3)
        classes = sw.classify(hist.meshes[0])
        seed = int(classes.inner_edge_ids[0])
        family = sw.track_inner_curves(hist, [seed])
        track = family.curves[0]
        assert len(track.lengths) == 4
        assert all(length > 0 for length in track.lengths)

    def test_unknown_seed(self):
        hist = sw.snub_subdivide(sw.pentagon(), 1)
        with pytest.raises(UnknownSeedError):
            sw.track_inner_curves(hist, [99])

    def test_path_vertices_triple_per_step(self):
        hist = sw.snub_subdivide(sw.pentagon(), 3)
        track = sw.track_inner_curves(hist, [2]).curves[0]
        for t, path in enumerate(track.vertex_paths):
            assert len(path) == 3 ** t + 1


# ---------------------------------------------------------------------------
# first-hit raster
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def history():
    return sw.snub_subdivide(sw.pentagon(), 5)


class TestFirstHitRaster:
    def test_input_corners_are_step_zero(self, history):
        raster = sw.first_hit_raster(history, 128)
        xmin, ymin, xmax, ymax = raster.window
        H, W = raster.step_index.shape
        for x, y in np.asarray(history.meshes[0].positions):
            px = int(np.floor((x - xmin) / (xmax - xmin) * W))
            py = int(np.floor((ymax - y) / (ymax - ymin) * H))
            assert raster.step_index[py, px] == 0

    def test_monotone_under_extra_steps(self, history):
        shallow = sw.snub_subdivide(sw.pentagon(), 3)
        r_shallow = sw.first_hit_raster(shallow, 96)
        r_deep = sw.first_hit_raster(history, 96)
        colored = r_shallow.step_index >= 0
        assert np.array_equal(r_shallow.step_index[colored],
                              r_deep.step_index[colored])

    def test_far_window_is_background(self, history):
        raster = sw.first_hit_raster(history, 64,
                                     window=(50.0, 50.0, 51.0, 51.0))
        assert (raster.step_index == -1).all()

    def test_pixel_counts_sum_to_colored(self, history):
        raster = sw.first_hit_raster(history, 128)
        assert raster.pixel_counts.sum() == (raster.step_index >= 0).sum()
        assert raster.saturation_step <= len(history.meshes) - 1

    def test_default_window_contains_every_step(self, history):
        raster = sw.first_hit_raster(history, 64)
        xmin, ymin, xmax, ymax = raster.window
        for mesh in history.meshes:
            pos = np.asarray(mesh.positions)
            assert (pos[:, 0] >= xmin).all() and (pos[:, 0] < xmax).all()
            assert (pos[:, 1] >= ymin).all() and (pos[:, 1] < ymax).all()

    def test_determinism(self, history):
        a = sw.first_hit_raster(history, 64)
        b = sw.first_hit_raster(history, 64)
        assert np.array_equal(a.step_index, b.step_index)

    def test_resolution_guard(self, history):
        with pytest.raises(InvalidParameterError):
            sw.first_hit_raster(history, 8)

    def test_palette_shape(self, history):
        raster = sw.first_hit_raster(history, 64)
        assert raster.palette.shape == (len(history.meshes), 3)
        assert raster.palette.dtype == np.uint8
