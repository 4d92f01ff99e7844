import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from movingframes.atlas import (
    SURFACES,
    EdgeGluing,
    FrameField,
    band_frame,
    check_chart,
    donut_torus,
    fd_jacobian,
    field_continuity,
    flat_plane,
    get_surface,
    identification_residual,
    klein_side_gluing,
    mobius_gluing,
    project_ambient_field,
    sample_field,
    sphere_frame,
    tangent_projector,
    unit_sphere,
    Surface,
)
from movingframes.errors import (
    BadShape,
    MissingEdgeSamples,
    NotOnSphere,
    OutOfDomain,
    RankDeficientJacobian,
)
from movingframes.frames import Frame, is_parseval, project_frame


def unit_vectors(rng, count):
    p = rng.standard_normal((count, 3))
    return p / np.linalg.norm(p, axis=1, keepdims=True)


def edge_grid(nu=100):
    us = np.linspace(0.0, 1.0, nu)
    return np.array([(u, v) for v in (0.0, 0.5, 1.0) for u in us])


# --- sphere frame -----------------------------------------------------------

def test_sphere_frame_examples():
    np.testing.assert_array_equal(sphere_frame((0, 0, 1)).columns, [(1, 0, 0), (0, 1, 0), (0, 0, 0)])
    np.testing.assert_array_equal(sphere_frame((1, 0, 0)).columns, [(0, 0, 0), (0, 1, 0), (0, 0, 1)])


def test_sphere_frame_rejects_off_sphere():
    with pytest.raises(NotOnSphere):
        sphere_frame((1.0, 1.0, 0.0))


def test_sphere_frame_reconstructs_tangent_vectors(rng):
    for p in unit_vectors(rng, 50):
        F = sphere_frame(p)
        for i in range(3):
            np.testing.assert_allclose(F.columns[i], np.eye(3)[i] - p[i] * p, atol=1e-15)
        for _ in range(5):
            y = rng.standard_normal(3)
            y -= (y @ p) * p
            brute = sum((y @ f) * f for f in F.columns)
            np.testing.assert_allclose(brute, y, atol=1e-13)


def test_sphere_frame_equals_projected_basis(rng):
    onb = Frame(np.eye(3))
    for p in unit_vectors(rng, 1000):
        np.testing.assert_allclose(sphere_frame(p).matrix, project_frame(onb, np.eye(3) - np.outer(p, p)).matrix,
                                   rtol=0, atol=1e-12)


# --- band frame -------------------------------------------------------------

def test_band_frame_examples():
    np.testing.assert_array_equal(band_frame(0.3, 0.0).columns, [(1, 0), (0, 0), (0, 1)])
    np.testing.assert_allclose(band_frame(0.3, 0.5).columns, [(0, 0), (1, 0), (0, 1)], atol=1e-16)


@given(st.floats(0, 1), st.floats(0, 1))
def test_band_frame_is_parseval(u, v):
    assert is_parseval(band_frame(u, v), 1e-14)


def test_band_frame_domain():
    with pytest.raises(OutOfDomain):
        band_frame(0.5, 1.5)


# --- surfaces and tangent projectors ----------------------------------------

@pytest.mark.parametrize("name", sorted(SURFACES))
def test_builtin_charts_are_consistent_immersions(name):
    s = get_surface(name)
    assert check_chart(s, s.grid(12, 12)) <= 1e-4


@pytest.mark.parametrize("name", sorted(SURFACES))
def test_tangent_projector_properties(name):
    s = get_surface(name)
    for q in s.grid(15, 15):
        P = tangent_projector(s, q)
        np.testing.assert_allclose(P, P.T, atol=1e-15)
        np.testing.assert_allclose(P @ P, P, atol=1e-10)
        assert np.trace(P) == pytest.approx(2.0, abs=1e-8)


def test_tangent_projector_sphere_matches_normal_projector():
    s = unit_sphere()
    for q in s.grid(20, 20):
        p = s.embed(*q)
        np.testing.assert_allclose(tangent_projector(s, q), np.eye(3) - np.outer(p, p), atol=1e-12)


def test_tangent_projector_flat_plane():
    np.testing.assert_allclose(tangent_projector(flat_plane(), (0.2, 0.7)), np.diag([1.0, 1.0, 0.0]))


def test_rank_deficient_jacobian_at_pole():
    with pytest.raises(RankDeficientJacobian) as info:
        tangent_projector(unit_sphere(), (0.3, 0.0))
    assert info.value.point == (0.3, 0.0)


def test_finite_difference_fallback_for_user_chart():
    s = Surface("paraboloid", ((-1.0, 1.0), (-1.0, 1.0)), lambda u, v: np.array([u, v, u * u + v * v]))
    J = s.jacobian(0.3, -0.2)
    np.testing.assert_allclose(J, [[1, 0], [0, 1], [0.6, -0.4]], atol=1e-8)
    field = project_ambient_field(s, Frame(np.eye(3)), s.grid(6, 6))
    assert all(is_parseval(F) for F in field.frames)


def test_grid_is_row_major_and_respects_pole_margin():
    s = unit_sphere()
    pts = s.grid(4, 3)
    assert pts.shape == (12, 2)
    np.testing.assert_array_equal(pts[:4, 1], np.full(4, 1e-3))
    assert pts[-1, 1] == pytest.approx(np.pi - 1e-3)
    with pytest.raises(ValueError):
        s.grid(1, 5)


# --- ambient projection fields ----------------------------------------------

def test_sphere_field_matches_sphere_frame():
    s = unit_sphere()
    field = project_ambient_field(s, Frame(np.eye(3)), s.grid(30, 30))
    for i, q in enumerate(field.points):
        p = s.embed(*q)
        np.testing.assert_allclose(field.ambient(i), sphere_frame(p).matrix, atol=1e-12)
        assert is_parseval(field.frames[i], 1e-8)


def test_flat_field_is_constant():
    s = flat_plane()
    field = project_ambient_field(s, Frame(np.eye(3)), s.grid(5, 5))
    for F in field.frames:
        np.testing.assert_allclose(F.columns, [(1, 0), (0, 1), (0, 0)], atol=1e-15)
    assert field_continuity(field) <= 1e-15


@pytest.mark.parametrize("name", ["torus", "flat_torus"])
def test_torus_fields_are_parseval(name):
    s = get_surface(name)
    field = project_ambient_field(s, Frame(np.eye(s.ambient_dim)), s.grid(25, 25))
    assert max(is_parseval(F).residual for F in field.frames) <= 1e-8


def test_torus_field_is_continuous_along_rows():
    s = donut_torus()
    field = project_ambient_field(s, Frame(np.eye(3)), s.grid(200, 3))
    assert field_continuity(field) < 0.1


def test_project_ambient_field_reports_offending_point():
    s = unit_sphere()
    with pytest.raises(RankDeficientJacobian) as info:
        project_ambient_field(s, Frame(np.eye(3)), [(0.1, 1.0), (0.2, np.pi)])
    assert info.value.point == (0.2, np.pi)


def test_frame_field_rejects_mixed_shapes():
    with pytest.raises(BadShape):
        FrameField("x", [(0, 0), (1, 0)], [Frame(np.eye(2)), Frame(np.eye(3))])


# --- gluings ----------------------------------------------------------------

def test_gluing_maps_edges():
    g = mobius_gluing()
    np.testing.assert_allclose(g.map_point((0.2, 1.0)), (0.8, 0.0))
    assert g.on_source((0.2, 1.0)) and not g.on_source((0.2, 0.5))
    np.testing.assert_allclose(klein_side_gluing().map_point((1.0, 0.3)), (0.0, 0.3))


def test_gluing_validation():
    with pytest.raises(BadShape):
        EdgeGluing(((0, 1), (1, 1)), ((0, 0), (1, 0)), np.eye(2), (0, -1), np.zeros((2, 2)))
    with pytest.raises(BadShape):
        EdgeGluing(((0, 1), (1, 1)), ((0, 0), (1, 0)), np.eye(2), (0, 0.5), np.eye(2))


def test_band_frame_descends_to_mobius_and_klein():
    field = sample_field("klein", band_frame, edge_grid())
    assert identification_residual(field, mobius_gluing()) <= 1e-10
    assert identification_residual(field, klein_side_gluing()) <= 1e-10


def test_constant_field_fails_mobius_gluing():
    const = Frame([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    field = sample_field("mobius", lambda u, v: const, edge_grid())
    assert identification_residual(field, mobius_gluing()) == pytest.approx(2.0)


def test_identification_needs_edge_samples():
    field = sample_field("mobius", band_frame, [(0.5, 0.5)])
    with pytest.raises(MissingEdgeSamples):
        identification_residual(field, mobius_gluing())
    field = sample_field("mobius", band_frame, [(0.2, 1.0), (0.5, 0.0)])
    with pytest.raises(MissingEdgeSamples):
        identification_residual(field, mobius_gluing())


def test_sphere_field_descends_across_the_seam():
    s = unit_sphere()
    field = project_ambient_field(s, Frame(np.eye(3)), s.grid(40, 10))
    assert identification_residual(field, s.identifications[0]) <= 1e-12


def test_fd_jacobian_matches_sphere():
    s = unit_sphere()
    np.testing.assert_allclose(fd_jacobian(s.embed, 0.4, 1.1), s.jacobian(0.4, 1.1), atol=1e-8)
