"""Moving dilations: complements over whole frame fields, path continuation, holonomy."""
from dataclasses import dataclass, field

import numpy as np

from .atlas import SURFACES, FrameField
from .config import DEFAULT
from .errors import BadShape, NotClosed, NotOrthonormal, NotParseval, SingularSeed
from .frames import (
    Frame,
    det_normalized_complement,
    is_parseval,
    local_complement,
    parseval_normalize,
    stack_residual,
)

METHODS = ("canonical", "continuation", "detNormalized")


@dataclass(frozen=True, eq=False)
class ComplementField:
    base: FrameField
    complements: tuple
    method: str
    max_stack_residual: float

    def __post_init__(self):
        if self.method not in METHODS:
            raise BadShape(f"unknown complement method {self.method!r}")
        if self.method == "detNormalized" and self.base.frame_size != self.base.fiber_dim + 1:
            raise BadShape("detNormalized complements need k = n + 1")
        object.__setattr__(self, "complements", tuple(self.complements))
        if len(self.complements) != len(self.base):
            raise BadShape("one complement per base sample is required")

    def stacked(self, i):
        return np.vstack([self.base.frames[i].matrix, self.complements[i].matrix])

    def stack_residuals(self):
        return [stack_residual(self.stacked(i)) for i in range(len(self.base))]


@dataclass(frozen=True, eq=False)
class HolonomyReport:
    loop_length: int
    holonomy: np.ndarray
    residual: float
    distance: float
    det: float
    classification: str
    span_residual: float
    step_stats: dict = field(default_factory=dict)

    @property
    def nontrivial(self):
        return self.classification == "nontrivial"


def procrustes_align(C, ref):
    """Rotate the rows of ``C`` within their span to best match ``ref``.

    For a single row this is a sign flip.
    """
    if C.shape[0] == 0:
        return C
    U, _, Vt = np.linalg.svd(ref @ C.T)
    return (U @ Vt) @ C


def _check_samples(base, tol):
    for i, F in enumerate(base.frames):
        check = is_parseval(F, tol)
        if not check:
            raise NotParseval(check.residual, where=i)


def _assemble(base, comps, method):
    residuals = [stack_residual(np.vstack([F.matrix, C.matrix])) for F, C in zip(base.frames, comps)]
    return ComplementField(base, comps, method, max(residuals))


def _empty(k):
    return Frame(np.zeros((0, k)))


def kernel_rows(F):
    """Orthonormal rows spanning ``ker F`` in ``R^k``, from the eigenvectors of ``I - F^T F``."""
    m = F.k - F.n
    if m == 0:
        return np.zeros((0, F.k))
    P = np.eye(F.k) - F.matrix.T @ F.matrix
    _, V = np.linalg.eigh(0.5 * (P + P.T))
    return V[:, -m:].T


def canonical_field(base, tol=DEFAULT.parseval):
    """Pointwise complements spanning ``ker F``, aligned sample to sample."""
    _check_samples(base, tol)
    comps, prev = [], None
    for F in base.frames:
        C = kernel_rows(F)
        if prev is not None:
            C = procrustes_align(C, prev)
        comps.append(Frame(C) if C.shape[0] else _empty(F.k))
        prev = C
    return _assemble(base, comps, "canonical")


def det_normalized_field(base, tol=DEFAULT.parseval):
    _check_samples(base, tol)
    comps = [det_normalized_complement(F, tol) for F in base.frames]
    return _assemble(base, comps, "detNormalized")


def continue_complement(path, seed, tol=DEFAULT.parseval, singular_tol=DEFAULT.singular):
    """Carry ``seed`` along ``path`` by repeated local Gram-Schmidt complements."""
    F0 = path.frames[0]
    if seed.k != F0.k or seed.n != F0.k - F0.n:
        raise BadShape(f"seed of shape {seed.n}x{seed.k} does not complement a {F0.n}x{F0.k} frame")
    r0 = stack_residual(np.vstack([F0.matrix, seed.matrix]))
    if r0 > tol:
        raise NotOrthonormal(f"[path_0; seed] is not orthogonal (residual {r0:.3e})")
    comps = [seed]
    for i in range(1, len(path)):
        try:
            H = local_complement(path.frames[i], path.frames[i - 1], comps[-1], tol, singular_tol)
        except SingularSeed as exc:
            raise SingularSeed("continuation step too large; refine the sampling", index=i) from exc
        except NotParseval as exc:
            raise NotParseval(exc.residual, where=i) from exc
        comps.append(H)
    return _assemble(path, comps, "continuation")


def closure_map(loop, tol=1e-9):
    """Fiber map identifying the last sample of ``loop`` with the first.

    Uses the surface's gluings when the endpoints sit on a glued edge, and the
    identity when the endpoints coincide.  Returns None if neither applies.
    """
    first, last = loop.points[0], loop.points[-1]
    if np.linalg.norm(first - last) <= tol:
        return np.eye(loop.fiber_dim)
    if loop.surface in SURFACES:
        for g in SURFACES[loop.surface]().identifications:
            if g.on_source(last, tol) and np.linalg.norm(g.map_point(last) - first) <= tol:
                return g.tangent_map
    return None


def loop_holonomy(loop, seed, closure=None, tol=DEFAULT.parseval, threshold=DEFAULT.holonomy,
                  closure_tol=DEFAULT.closure):
    """Holonomy of complement continuation around a closed loop.

    ``closure`` maps fiber coordinates at the last sample to those at the
    first (a gluing's tangent map); by default it is looked up from the
    surface's identifications.
    """
    T = closure_map(loop) if closure is None else np.asarray(closure, dtype=float)
    if T is None:
        raise NotClosed("loop endpoints are neither equal nor related by a known gluing")
    gap = float(np.linalg.norm(T @ loop.frames[-1].matrix - loop.frames[0].matrix))
    if gap > closure_tol:
        raise NotClosed(f"first and last samples differ by {gap:.3e} after the closure map")
    cf = continue_complement(loop, seed, tol)
    C_end, C0 = cf.complements[-1].matrix, seed.matrix
    H = C_end @ C0.T
    m = H.shape[0]
    residual = float(np.linalg.norm(H @ H.T - np.eye(m)))
    distance = float(np.linalg.norm(H - np.eye(m)))
    steps = [float(np.linalg.norm(b.matrix - a.matrix)) for a, b in zip(loop.frames, loop.frames[1:])]
    stats = {
        "steps": len(steps),
        "maxStep": max(steps, default=0.0),
        "meanStep": float(np.mean(steps)) if steps else 0.0,
        "maxStackResidual": cf.max_stack_residual,
        "closureGap": gap,
    }
    return HolonomyReport(
        loop_length=len(loop),
        holonomy=H,
        residual=residual,
        distance=distance,
        det=float(np.linalg.det(H)) if m else 1.0,
        classification="nontrivial" if distance > threshold else "trivial",
        span_residual=float(np.linalg.norm(C_end - H @ C0)),
        step_stats=stats,
    )


def refine_path(path):
    """Insert a midpoint sample between each pair of consecutive samples.

    Midpoint frames are averages pushed back onto the Parseval set by
    ``parseval_normalize``.
    """
    pts, frames = [path.points[0]], [path.frames[0]]
    for i in range(1, len(path)):
        a, b = path.frames[i - 1], path.frames[i]
        pts.append(0.5 * (path.points[i - 1] + path.points[i]))
        frames.append(parseval_normalize(Frame(0.5 * (a.matrix + b.matrix))))
        pts.append(path.points[i])
        frames.append(b)
    return FrameField(path.surface, pts, frames)


def holonomy_with_refinement(loop, seed, closure=None, max_depth=6, **kwargs):
    """``loop_holonomy`` that halves the step on SingularSeed, at most ``max_depth`` times."""
    for depth in range(max_depth + 1):
        try:
            report = loop_holonomy(loop, seed, closure, **kwargs)
        except SingularSeed:
            if depth == max_depth:
                raise
            loop = refine_path(loop)
            continue
        report.step_stats["refinements"] = depth
        return report


def zero_locus_scan(points, samples, tol):
    """Parameter points whose sample vector has norm at most ``tol``."""
    vecs = np.asarray(samples, dtype=float)
    if vecs.ndim != 2:
        raise BadShape("samples must be an (N, d) array of equal-length vectors")
    pts = np.asarray(points, dtype=float)
    keep = np.linalg.norm(vecs, axis=1) <= tol
    return [tuple(map(float, q)) for q in pts[keep]]
