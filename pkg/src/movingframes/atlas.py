"""Parameterized surfaces, their tangent projectors, and moving frames on them."""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .config import DEFAULT
from .errors import (
    BadShape,
    MissingEdgeSamples,
    NotOnSphere,
    NotParseval,
    OutOfDomain,
    RankDeficientJacobian,
)
from .frames import Frame, is_parseval

FD_STEP = 1e-6
POLE_MARGIN = 1e-3


@dataclass(frozen=True)
class EdgeGluing:
    """Identification of two domain edges, ``q -> linear @ q + offset``.

    ``tangent_map`` is the differential of the gluing acting on fiber
    (tangent) coordinates.
    """

    source: tuple
    target: tuple
    linear: np.ndarray
    offset: np.ndarray
    tangent_map: np.ndarray

    def __post_init__(self):
        for name in ("linear", "offset", "tangent_map"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if abs(np.linalg.det(self.tangent_map)) < 1e-12:
            raise BadShape("tangent_map must be invertible")
        src = [self.map_point(p) for p in self.source]
        tgt = [np.asarray(p, dtype=float) for p in self.target]
        same = np.allclose(src, tgt, atol=1e-12)
        swapped = np.allclose(src, tgt[::-1], atol=1e-12)
        if not (same or swapped):
            raise BadShape("gluing does not carry the source edge onto the target edge")

    def map_point(self, q):
        return self.linear @ np.asarray(q, dtype=float) + self.offset

    def on_source(self, q, tol=1e-12):
        a, b = (np.asarray(p, dtype=float) for p in self.source)
        q = np.asarray(q, dtype=float)
        d = b - a
        t = np.clip((q - a) @ d / (d @ d), 0.0, 1.0)
        return np.linalg.norm(a + t * d - q) <= tol


@dataclass(frozen=True)
class Surface:
    """Chart ``(u, v) -> R^d`` on a rectangle, with optional edge gluings.

    ``margins`` trims each side of the rectangle when building grids; the
    sphere uses it to keep grids off the coordinate poles.
    """

    name: str
    domain: tuple
    embed: Callable
    jacobian_fn: Optional[Callable] = None
    identifications: tuple = ()
    margins: tuple = ((0.0, 0.0), (0.0, 0.0))

    @property
    def ambient_dim(self):
        return len(self.embed(*self.center))

    @property
    def center(self):
        (a, b), (c, d) = self.domain
        return (0.5 * (a + b), 0.5 * (c + d))

    def jacobian(self, u, v):
        if self.jacobian_fn is not None:
            return np.asarray(self.jacobian_fn(u, v), dtype=float)
        return fd_jacobian(self.embed, u, v)

    def contains(self, q, tol=1e-12):
        (a, b), (c, d) = self.domain
        return a - tol <= q[0] <= b + tol and c - tol <= q[1] <= d + tol

    def grid(self, nu, nv, margin=None):
        """Row-major ``(nu * nv, 2)`` array of parameter points, ``u`` varying fastest."""
        if nu < 2 or nv < 2:
            raise ValueError("grid resolution must be at least 2 per axis")
        (a, b), (c, d) = self.domain
        (ma0, ma1), (mc0, mc1) = self.margins if margin is None else margin
        us = np.linspace(a + ma0, b - ma1, nu)
        vs = np.linspace(c + mc0, d - mc1, nv)
        uu, vv = np.meshgrid(us, vs)
        return np.column_stack([uu.ravel(), vv.ravel()])


def fd_jacobian(embed, u, v, h=FD_STEP):
    du = (np.asarray(embed(u + h, v)) - np.asarray(embed(u - h, v))) / (2 * h)
    dv = (np.asarray(embed(u, v + h)) - np.asarray(embed(u, v - h))) / (2 * h)
    return np.column_stack([du, dv])


def check_chart(surface, points, fd_tol=1e-4, rank_tol=1e-10):
    """Worst finite-difference mismatch of the jacobian over ``points``.

    Raises RankDeficientJacobian at the first point that is not an immersion.
    """
    worst = 0.0
    for q in points:
        J = surface.jacobian(*q)
        sv = np.linalg.svd(J, compute_uv=False)
        if sv[-1] <= rank_tol * max(sv[0], 1.0):
            raise RankDeficientJacobian(q)
        worst = max(worst, float(np.max(np.abs(fd_jacobian(surface.embed, *q) - J))))
    if worst > fd_tol:
        raise BadShape(f"jacobian disagrees with finite differences by {worst:.3e}")
    return worst


# --- built-in surfaces -------------------------------------------------------

def _periodic_u(a, b, c, d):
    return EdgeGluing(((b, c), (b, d)), ((a, c), (a, d)), np.eye(2), (a - b, 0.0), np.eye(2))


def _periodic_v(a, b, c, d):
    return EdgeGluing(((a, d), (b, d)), ((a, c), (b, c)), np.eye(2), (0.0, c - d), np.eye(2))


def unit_sphere():
    """Spherical chart, ``u`` azimuth in ``[0, 2pi]``, ``v`` polar angle in ``[0, pi]``."""

    def embed(u, v):
        return np.array([np.sin(v) * np.cos(u), np.sin(v) * np.sin(u), np.cos(v)])

    def jac(u, v):
        return np.array([
            [-np.sin(v) * np.sin(u), np.cos(v) * np.cos(u)],
            [np.sin(v) * np.cos(u), np.cos(v) * np.sin(u)],
            [0.0, -np.sin(v)],
        ])

    dom = ((0.0, 2 * np.pi), (0.0, np.pi))
    return Surface("sphere", dom, embed, jac, (_periodic_u(0.0, 2 * np.pi, 0.0, np.pi),),
                   ((0.0, 0.0), (POLE_MARGIN, POLE_MARGIN)))


def donut_torus(R=2.0, r=1.0):
    def embed(u, v):
        return np.array([(R + r * np.cos(v)) * np.cos(u), (R + r * np.cos(v)) * np.sin(u), r * np.sin(v)])

    def jac(u, v):
        return np.array([
            [-(R + r * np.cos(v)) * np.sin(u), -r * np.sin(v) * np.cos(u)],
            [(R + r * np.cos(v)) * np.cos(u), -r * np.sin(v) * np.sin(u)],
            [0.0, r * np.cos(v)],
        ])

    t = 2 * np.pi
    return Surface("torus", ((0.0, t), (0.0, t)), embed, jac,
                   (_periodic_u(0.0, t, 0.0, t), _periodic_v(0.0, t, 0.0, t)))


def flat_torus():
    """Clifford torus in ``R^4``."""

    def embed(u, v):
        return np.array([np.cos(u), np.sin(u), np.cos(v), np.sin(v)])

    def jac(u, v):
        return np.array([[-np.sin(u), 0.0], [np.cos(u), 0.0], [0.0, -np.sin(v)], [0.0, np.cos(v)]])

    t = 2 * np.pi
    return Surface("flat_torus", ((0.0, t), (0.0, t)), embed, jac,
                   (_periodic_u(0.0, t, 0.0, t), _periodic_v(0.0, t, 0.0, t)))


def flat_plane():
    return Surface("plane", ((0.0, 1.0), (0.0, 1.0)),
                   lambda u, v: np.array([u, v, 0.0]),
                   lambda u, v: np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))


def mobius_gluing():
    """Top edge onto bottom edge, ``(u, 1) ~ (1 - u, 0)``."""
    return EdgeGluing(((0.0, 1.0), (1.0, 1.0)), ((1.0, 0.0), (0.0, 0.0)),
                      np.diag([-1.0, 1.0]), (1.0, -1.0), np.diag([-1.0, 1.0]))


def klein_side_gluing():
    """Right edge onto left edge, ``(1, v) ~ (0, v)``."""
    return EdgeGluing(((1.0, 0.0), (1.0, 1.0)), ((0.0, 0.0), (0.0, 1.0)),
                      np.eye(2), (-1.0, 0.0), np.eye(2))


def _unit_square(name, gluings):
    return Surface(name, ((0.0, 1.0), (0.0, 1.0)),
                   lambda u, v: np.array([u, v]),
                   lambda u, v: np.eye(2),
                   tuple(gluings))


def mobius():
    return _unit_square("mobius", [mobius_gluing()])


def klein():
    return _unit_square("klein", [mobius_gluing(), klein_side_gluing()])


SURFACES = {
    "sphere": unit_sphere,
    "torus": donut_torus,
    "flat_torus": flat_torus,
    "plane": flat_plane,
    "mobius": mobius,
    "klein": klein,
}


def get_surface(name):
    try:
        return SURFACES[name]()
    except KeyError:
        raise OutOfDomain(f"unknown surface {name!r}; known: {sorted(SURFACES)}") from None


# --- frames on surfaces ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FrameField:
    """Frames sampled at parameter points of a surface.

    ``tangent_bases`` (optional, one ``d x n`` array per sample) maps fiber
    coordinates back to ambient coordinates.
    """

    surface: str
    points: np.ndarray
    frames: tuple
    tangent_bases: Optional[tuple] = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, 2)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "frames", tuple(self.frames))
        if len(self.frames) != len(pts):
            raise BadShape("one frame per parameter point is required")
        if not self.frames:
            raise BadShape("a frame field needs at least one sample")
        shapes = {(f.n, f.k) for f in self.frames}
        if len(shapes) != 1:
            raise BadShape(f"samples disagree on (n, k): {sorted(shapes)}")
        if self.tangent_bases is not None:
            object.__setattr__(self, "tangent_bases", tuple(np.asarray(b, dtype=float) for b in self.tangent_bases))

    @property
    def fiber_dim(self):
        return self.frames[0].n

    @property
    def frame_size(self):
        return self.frames[0].k

    @property
    def samples(self):
        return list(zip(map(tuple, self.points), self.frames))

    def __len__(self):
        return len(self.frames)

    def ambient(self, i):
        """Frame ``i`` in ambient coordinates (requires ``tangent_bases``)."""
        return self.tangent_bases[i] @ self.frames[i].matrix

    def reversed(self):
        bases = None if self.tangent_bases is None else self.tangent_bases[::-1]
        return FrameField(self.surface, self.points[::-1], self.frames[::-1], bases)


def sample_field(surface_name, frame_fn, points):
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    return FrameField(surface_name, pts, [frame_fn(u, v) for u, v in pts])


def field_continuity(field):
    """Largest Frobenius jump between consecutive samples."""
    if len(field) < 2:
        return 0.0
    return max(float(np.linalg.norm(b.matrix - a.matrix)) for a, b in zip(field.frames, field.frames[1:]))


def sphere_frame(p):
    """Projections of ``e_1, e_2, e_3`` onto the tangent plane of the unit sphere at ``p``."""
    x, y, z = np.asarray(p, dtype=float)
    if abs(np.sqrt(x * x + y * y + z * z) - 1.0) > 1e-10:
        raise NotOnSphere(f"point {p} is not on the unit sphere")
    return Frame.from_columns([
        (1 - x * x, -x * y, -x * z),
        (-x * y, 1 - y * y, -y * z),
        (-x * z, -y * z, 1 - z * z),
    ])


def band_frame(u, v):
    """Three-vector Parseval frame on the unit square that twists once along ``v``."""
    if not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0):
        raise OutOfDomain(f"({u}, {v}) is outside the unit square")
    c, s = np.cos(np.pi * v), np.sin(np.pi * v)
    return Frame([[c, s, 0.0], [0.0, 0.0, 1.0]])


def _tangent_basis(surface, q, rank_tol=1e-10):
    J = surface.jacobian(*q)
    Q, R = np.linalg.qr(J)
    d = np.diag(R)
    if abs(d).min() <= rank_tol * max(abs(d).max(), 1.0):
        raise RankDeficientJacobian(q)
    return Q * np.sign(d)


def tangent_projector(surface, q):
    """Orthogonal projector of ``R^d`` onto the tangent plane at parameter ``q``."""
    Q = _tangent_basis(surface, q)
    P = Q @ Q.T
    return 0.5 * (P + P.T)


def project_ambient_field(surface, onb, points, tol=DEFAULT.parseval):
    """Project an ambient orthonormal basis onto every tangent plane along ``points``.

    Each sample is written in an orthonormal tangent basis from the QR factor
    of the jacobian, sign-aligned with the previous point's basis.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    frames, bases = [], []
    prev = None
    for q in pts:
        Q = _tangent_basis(surface, q)
        if prev is not None:
            Q = Q * np.where(np.sum(Q * prev, axis=0) < 0, -1.0, 1.0)
        P = tangent_projector(surface, q)
        F = Frame(Q.T @ (P @ onb.matrix))
        check = is_parseval(F, tol)
        if not check:
            raise NotParseval(check.residual, where=[float(c) for c in q])
        frames.append(F)
        bases.append(Q)
        prev = Q
    return FrameField(surface.name, pts, frames, bases)


def identification_residual(field, gluing, match_tol=1e-9):
    """Worst ``|T f_i(q) - f_i(glue(q))|`` over source-edge samples ``q``."""
    pts = field.points
    worst = None
    T = gluing.tangent_map
    for idx, q in enumerate(pts):
        if not gluing.on_source(q):
            continue
        target = gluing.map_point(q)
        dist = np.linalg.norm(pts - target, axis=1)
        j = int(np.argmin(dist))
        if dist[j] > match_tol:
            raise MissingEdgeSamples(f"no sample at glued point {tuple(target)} (source {tuple(q)})")
        diff = T @ field.frames[idx].matrix - field.frames[j].matrix
        r = float(np.max(np.linalg.norm(diff, axis=0)))
        worst = r if worst is None else max(worst, r)
    if worst is None:
        raise MissingEdgeSamples("field has no samples on the gluing's source edge")
    return worst
