"""Ready-made fields and loops for the sphere, Moebius band and Klein bottle examples."""
import numpy as np

from .atlas import (
    band_frame,
    get_surface,
    project_ambient_field,
    sample_field,
    unit_sphere,
)
from .dilation import kernel_rows, zero_locus_scan
from .frames import Frame, det_normalized_complement

# parameter points of (0, 1, 0) and (0, -1, 0) in the sphere chart
SPHERE_E2_ZEROS = ((0.5 * np.pi, 0.5 * np.pi), (1.5 * np.pi, 0.5 * np.pi))


def sphere_field(resolution):
    s = unit_sphere()
    return project_ambient_field(s, Frame(np.eye(3)), s.grid(resolution, resolution))


def band_field(surface_name, resolution):
    """``band_frame`` on a square grid of the Moebius band or Klein bottle."""
    pts = get_surface(surface_name).grid(resolution, resolution)
    return sample_field(surface_name, band_frame, pts)


def mobius_loop(samples, u=0.5):
    """The ``v``-loop through ``(u, 0)``; it closes through ``(u, 1) ~ (1 - u, 0)``, so ``u = 1/2``."""
    vs = np.linspace(0.0, 1.0, samples)
    return sample_field("mobius", band_frame, np.column_stack([np.full(samples, u), vs]))


def equator_loop(samples):
    s = unit_sphere()
    us = np.linspace(0.0, 2 * np.pi, samples)
    pts = np.column_stack([us, np.full(samples, 0.5 * np.pi)])
    return project_ambient_field(s, Frame(np.eye(3)), pts)


def default_seed(field):
    """Complement of the first sample: det-normalized when ``k = n + 1``, else kernel rows."""
    F0 = field.frames[0]
    if F0.k == F0.n + 1:
        return det_normalized_complement(F0)
    return Frame(kernel_rows(F0)) if F0.k > F0.n else Frame(np.zeros((0, F0.k)))


def sphere_obstruction(nu=200, nv=100, tol=None):
    """Scan the tangential part of ``e_2`` over the sphere for zeros.

    ``tol`` defaults to the grid spacing, which guarantees at least one hit
    near each analytic zero.
    """
    s = unit_sphere()
    pts = s.grid(nu, nv)
    field = project_ambient_field(s, Frame(np.eye(3)), pts)
    vecs = np.array([field.ambient(i)[:, 1] for i in range(len(field))])
    if tol is None:
        (a, b), (c, d) = s.domain
        tol = max((b - a) / (nu - 1), (d - c) / (nv - 1))
    hits = zero_locus_scan(pts, vecs, tol)
    zeros = np.array(SPHERE_E2_ZEROS)
    dist = [float(np.min(np.linalg.norm(zeros - np.array(h), axis=1))) for h in hits]
    per_zero = [sum(1 for h in hits if np.linalg.norm(np.array(h) - z) <= 0.05) for z in zeros]
    return {
        "grid": [nu, nv],
        "tol": float(tol),
        "hits": [list(h) for h in hits],
        "maxDistanceToZero": max(dist, default=0.0),
        "hitsPerZero": per_zero,
        "minNorm": float(np.min(np.linalg.norm(vecs, axis=1))),
    }
