"""Finite frame algebra for a single fiber.

A frame of ``k`` vectors in ``R^n`` is stored as the ``n x k`` array whose
i-th column is ``f_i``.  A frame is Parseval exactly when that array has
orthonormal rows, which is the fact every construction below leans on.
"""
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import (
    BadShape,
    DimensionMismatch,
    NotIdempotent,
    NotOrthonormal,
    NotParseval,
    RankDeficient,
    SingularSeed,
)


@dataclass(frozen=True, eq=False)
class Frame:
    """Ordered list of ``k`` vectors in ``R^n`` held as an ``n x k`` array.

    ``n == 0`` is allowed so that the complement of a basis (``k == n``) can be
    represented as an empty ``0 x k`` frame.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2:
            raise BadShape(f"frame array must be 2-d, got shape {m.shape}")
        if m.shape[1] < 1:
            raise BadShape("a frame needs at least one vector")
        if not np.all(np.isfinite(m)):
            raise BadShape("frame coordinates must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_columns(cls, columns):
        cols = np.array(columns, dtype=float)
        if cols.ndim == 1:
            cols = cols[:, None]
        return cls(cols.T)

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def k(self):
        return self.matrix.shape[1]

    @property
    def columns(self):
        return self.matrix.T

    def __repr__(self):
        return f"Frame(n={self.n}, k={self.k})"


@dataclass(frozen=True)
class FrameSpectrum:
    operator: np.ndarray
    lower: float
    upper: float


@dataclass(frozen=True)
class ParsevalCheck:
    """Outcome of :func:`is_parseval`; truthy iff the frame passed."""

    ok: bool
    residual: float

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class DilationPair:
    base: Frame
    complement: Frame
    residual: float

    @property
    def stacked(self):
        return np.vstack([self.base.matrix, self.complement.matrix])


@dataclass(frozen=True, eq=False)
class ComplementProjector:
    gram: np.ndarray
    kernel_projector: np.ndarray


@dataclass(frozen=True, eq=False)
class CanonicalComplement:
    projector: ComplementProjector
    frame: Frame
    isometry_residual: float


def analysis(F, x):
    """Coefficients ``(<x, f_1>, ..., <x, f_k>)``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (F.n,):
        raise DimensionMismatch(f"expected a vector of length {F.n}, got shape {x.shape}")
    return F.matrix.T @ x


def synthesis(F, c):
    c = np.asarray(c, dtype=float)
    if c.shape != (F.k,):
        raise DimensionMismatch(f"expected {F.k} coefficients, got shape {c.shape}")
    return F.matrix @ c


def frame_spectrum(F):
    S = F.matrix @ F.matrix.T
    S = 0.5 * (S + S.T)
    if F.n == 0:
        return FrameSpectrum(S, 0.0, 0.0)
    w = np.linalg.eigvalsh(S)
    # eigvalsh may return -1e-17 for a singular operator
    return FrameSpectrum(S, max(float(w[0]), 0.0), float(w[-1]))


def parseval_residual(F):
    return float(np.linalg.norm(F.matrix @ F.matrix.T - np.eye(F.n)))


def is_parseval(F, tol=DEFAULT.parseval):
    if not tol > 0:
        raise ValueError("tol must be positive")
    r = parseval_residual(F)
    return ParsevalCheck(r <= tol, r)


def stack_residual(M):
    """Frobenius distance of ``M M^T`` from the identity."""
    M = np.asarray(M, dtype=float)
    return float(np.linalg.norm(M @ M.T - np.eye(M.shape[0])))


def _require_parseval(F, tol):
    if F.k < F.n:
        raise BadShape(f"a Parseval frame for R^{F.n} needs at least {F.n} vectors, got {F.k}")
    check = is_parseval(F, tol)
    if not check:
        raise NotParseval(check.residual)
    return check


def parseval_normalize(F, tol=DEFAULT.parseval):
    """Map a frame to the Parseval frame ``(S^{-1/2} f_i)``."""
    S = frame_spectrum(F).operator
    w, V = np.linalg.eigh(S)
    if F.n == 0 or w[0] <= tol:
        lowest = float(w[0]) if F.n else 0.0
        raise RankDeficient(f"frame operator has eigenvalue {lowest:.3e} <= {tol:.1e}; vectors do not span")
    inv_sqrt = (V / np.sqrt(w)) @ V.T
    return Frame(inv_sqrt @ F.matrix)


def orthogonalize(v, basis, reorth_tol=DEFAULT.reorth, force_second=False):
    """Modified Gram-Schmidt sweep of ``v`` against orthonormal ``basis`` rows.

    A second sweep runs when the first leaves a component along the basis
    larger than ``reorth_tol`` relative to what remains.
    """
    w = np.array(v, dtype=float)
    if len(basis) == 0:
        return w
    for q in basis:
        w -= (q @ w) * q
    if force_second:
        again = True
    else:
        leak = np.max(np.abs(basis @ w))
        again = leak > reorth_tol * max(np.linalg.norm(w), np.finfo(float).tiny)
    if again:
        for q in basis:
            w -= (q @ w) * q
    return w


def gram_schmidt_rows(M, fixed=0, singular_tol=DEFAULT.singular, reorth_tol=DEFAULT.reorth):
    """Orthonormalize the rows of ``M`` in order, keeping the first ``fixed`` rows as given.

    The fixed rows must already be orthonormal; they are copied untouched.
    Raises SingularSeed when a later row is (numerically) in the span of the
    earlier ones.
    """
    M = np.asarray(M, dtype=float)
    out = np.empty_like(M)
    out[:fixed] = M[:fixed]
    for i in range(fixed, M.shape[0]):
        w = orthogonalize(M[i], out[:i], reorth_tol)
        nrm = np.linalg.norm(w)
        if nrm <= singular_tol * max(np.linalg.norm(M[i]), 1.0):
            raise SingularSeed(f"row {i} is dependent on the preceding rows (residual norm {nrm:.3e})")
        out[i] = w / nrm
    return out


def dilate(F, tol=DEFAULT.parseval):
    """Complete a Parseval frame to an orthonormal basis of ``R^k``.

    Standard basis rows are appended greedily: at each step the candidate
    with the largest component outside the current row space is taken and
    orthonormalized (two MGS sweeps).  The top ``n`` rows of the stacked
    array are ``F``'s rows, bit for bit.
    """
    _require_parseval(F, tol)
    n, k = F.n, F.k
    rows = [row for row in F.matrix]
    remaining = list(range(k))
    eye = np.eye(k)
    for _ in range(k - n):
        Q = np.array(rows)
        # residual norm^2 of e_j outside span(Q) is 1 - |Q[:, j]|^2
        outside = 1.0 - np.sum(Q[:, remaining] ** 2, axis=0)
        j = remaining.pop(int(np.argmax(outside)))
        w = orthogonalize(eye[j], Q, force_second=True)
        rows.append(w / np.linalg.norm(w))
    complement = Frame(np.array(rows[n:]).reshape(k - n, k))
    stacked = np.vstack([F.matrix, complement.matrix])
    return DilationPair(F, complement, stack_residual(stacked))


def canonical_complement(F, tol=DEFAULT.parseval, samples=16, seed=0):
    """Complement from the analysis embedding ``x -> (<x, f_i>)`` into ``R^k``.

    The returned frame has the columns of ``I - F^T F`` and lives in ambient
    ``R^k`` coordinates.  ``isometry_residual`` is the worst
    ``|<Tx, Ty> - <x, y>|`` over random unit pairs, ``T`` the analysis map.
    """
    _require_parseval(F, tol)
    gram = F.matrix.T @ F.matrix
    P = np.eye(F.k) - gram
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples if F.n else 0):
        x, y = rng.standard_normal((2, F.n))
        x /= np.linalg.norm(x)
        y /= np.linalg.norm(y)
        worst = max(worst, abs(analysis(F, x) @ analysis(F, y) - x @ y))
    return CanonicalComplement(ComplementProjector(gram, P), Frame(P), float(worst))


def local_complement(G, Fref, Href, tol=DEFAULT.parseval, singular_tol=DEFAULT.singular):
    """Complement of ``G`` obtained by Gram-Schmidt on the rows of ``[G; Href]``.

    ``Href`` is a complement of the nearby reference frame ``Fref``.  The
    rows of ``G`` are kept; only the ``Href`` rows are re-orthonormalized,
    so ``local_complement(Fref, Fref, Href)`` returns ``Href``.
    """
    _require_parseval(G, tol)
    if G.k != Href.k or Fref.k != G.k or Fref.n != G.n or Href.n != G.k - G.n:
        raise DimensionMismatch(
            f"incompatible shapes G {G.n}x{G.k}, Fref {Fref.n}x{Fref.k}, Href {Href.n}x{Href.k}"
        )
    ref = stack_residual(np.vstack([Fref.matrix, Href.matrix]))
    if ref > tol:
        raise NotOrthonormal(f"reference pair [Fref; Href] is not orthogonal (residual {ref:.3e})")
    rows = gram_schmidt_rows(np.vstack([G.matrix, Href.matrix]), fixed=G.n, singular_tol=singular_tol)
    return Frame(rows[G.n:].reshape(G.k - G.n, G.k))


def det_normalized_complement(F, tol=DEFAULT.parseval):
    """The unique unit row ``g`` with ``[F; g]`` orthogonal and ``det [F; g] = +1``."""
    if F.k != F.n + 1:
        raise BadShape(f"needs k = n + 1, got n={F.n}, k={F.k}")
    g = dilate(F, tol).complement.matrix
    if np.linalg.det(np.vstack([F.matrix, g])) < 0:
        g = -g
    return Frame(g)


def parseval_tangent_dimension(F, h=DEFAULT.fd_step, rank_tol=DEFAULT.rank, tol=DEFAULT.parseval):
    """Numerical dimension of the Parseval set at ``F``.

    Central differences of ``F -> F F^T`` (upper triangle) over all ``kn``
    coordinates; the result is ``kn`` minus the numerical rank.
    """
    _require_parseval(F, tol)
    if not h > 0:
        raise ValueError("h must be positive")
    n, k = F.n, F.k
    iu = np.triu_indices(n)

    def phi(flat):
        m = flat.reshape(n, k)
        return (m @ m.T)[iu]

    x0 = F.matrix.ravel()
    J = np.empty((len(iu[0]), n * k))
    for j in range(n * k):
        step = np.zeros(n * k)
        step[j] = h
        J[:, j] = (phi(x0 + step) - phi(x0 - step)) / (2 * h)
    sv = np.linalg.svd(J, compute_uv=False)
    rank = int(np.sum(sv > rank_tol * sv[0])) if sv.size and sv[0] > 0 else 0
    return n * k - rank


def range_basis(projector):
    """Orthonormal basis (as columns) of the range of a symmetric projector."""
    w, V = np.linalg.eigh(0.5 * (projector + projector.T))
    return V[:, w > 0.5]


def project_frame(onb, projector, tol=DEFAULT.parseval):
    """Columns ``P e_i`` for an orthonormal basis ``(e_i)`` and a projector ``P``.

    The result is checked to be Parseval on the range of ``P``.
    """
    P = np.asarray(projector, dtype=float)
    if onb.n != onb.k or not is_parseval(onb, tol):
        raise NotOrthonormal("project_frame needs an orthonormal basis")
    if P.shape != (onb.n, onb.n):
        raise DimensionMismatch(f"projector shape {P.shape} does not match R^{onb.n}")
    if np.linalg.norm(P - P.T) > tol or np.linalg.norm(P @ P - P) > tol:
        raise NotIdempotent("projector must be symmetric and idempotent")
    out = Frame(P @ onb.matrix)
    U = range_basis(P)
    if U.shape[1]:
        check = is_parseval(Frame(U.T @ out.matrix), tol)
        if not check:
            raise NotParseval(check.residual)
    return out
