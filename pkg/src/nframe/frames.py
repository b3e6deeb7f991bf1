"""Frames associated to a fixing tuple, viewed as frames for H_F.

A frame element ``p_i`` enters only through its coset ``p_i + L_F``: every
n-inner product ignores the ``L_F`` component, so each element is
represented by the M_F coordinates of its coset representative. Operators
(frame operator, its inverse, transports ``U``) are matrices in
*orthonormal* H_F coordinates, i.e. after whitening with
``QuotientSpace.whitener``; there the adjoint is the conjugate transpose.
"""

from dataclasses import dataclass, field

import numpy as np

from . import ndense
from .errors import DimensionError, NotAFrameError, PreconditionError
from .quotient import QuotientSpace, project
from .tolerances import tol


@dataclass(frozen=True, eq=False)
class Frame:
    """Finite family ``{p_i}`` of ambient vectors (one per row).

    ``synthesis_matrix`` caches the M_F coordinates of every element as a
    column, so ``synthesis_matrix[:, i] == project(qs, p_i)``.
    """

    qs: QuotientSpace
    vectors: np.ndarray
    synthesis_matrix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = np.array(self.vectors, dtype=np.complex128)
        if v.ndim == 1:
            v = v[None, :]
        if v.ndim != 2 or v.shape[0] < 1:
            raise DimensionError("a frame needs at least one vector")
        if v.shape[1] != self.qs.ambient.dim:
            raise DimensionError(
                f"frame vectors have dimension {v.shape[1]}, ambient space has {self.qs.ambient.dim}"
            )
        if not np.all(np.isfinite(v)):
            raise DimensionError("frame vectors have non-finite entries")
        object.__setattr__(self, "vectors", ndense.frozen(v))
        object.__setattr__(self, "synthesis_matrix", ndense.frozen(self.qs.coords(v)))

    def __len__(self):
        return self.vectors.shape[0]

    @property
    def whitened(self):
        """Synthesis matrix in orthonormal H_F coordinates."""
        return self.qs.whitener @ self.synthesis_matrix

    @classmethod
    def from_orthonormal_coords(cls, qs, z):
        """Frame whose element ``i`` has orthonormal coordinates ``z[:, i]``."""
        return cls(qs, qs.lift_orthonormal(z))


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float
    is_frame: bool
    is_tight: bool

    def to_dict(self):
        return {
            "lower": self.lower,
            "upper": self.upper,
            "is_frame": self.is_frame,
            "is_tight": self.is_tight,
        }


@dataclass(frozen=True)
class DualCheck:
    """Outcome of a reconstruction test ``T_F T_G* = I``.

    ``residual`` is ``||T_F T_G* - I||`` and ``transposed_residual`` is
    ``||T_G T_F* - I||`` (operator 2-norms on orthonormal H_F coordinates).
    """

    is_dual: bool
    residual: float
    transposed_residual: float

    def __bool__(self):
        return self.is_dual


def analysis(f, p):
    """Coefficients ``<p, p_i | F>`` for every frame element."""
    c = project(f.qs, p)
    return ndense.adjoint(f.synthesis_matrix) @ f.qs.induced_gram @ c


def synthesis(f, c):
    """``sum_i c_i p_i`` as M_F coordinates."""
    c = ndense.as_vector(c, "coefficients")
    if c.shape[0] != len(f):
        raise DimensionError(f"expected {len(f)} coefficients, got {c.shape[0]}")
    return f.synthesis_matrix @ c


def frame_operator(f):
    """``S_F = T_F T_F*`` in orthonormal H_F coordinates (Hermitian PSD)."""
    z = f.whitened
    s = z @ ndense.adjoint(z)
    return 0.5 * (s + ndense.adjoint(s))


def frame_operator_coords(f):
    """``S_F`` acting on M_F coordinates: ``T T* W`` with ``W`` the induced Gram matrix."""
    t = f.synthesis_matrix
    return t @ ndense.adjoint(t) @ f.qs.induced_gram


def operator_scale(f):
    """Magnitude ``S_F`` would have without cancellation of ``L_F`` parts.

    Round-off in ``S_F`` is relative to this, not to ``S_F`` itself: a family
    lying inside ``L_F`` has ``S_F = 0`` up to noise of this size times eps.
    """
    m = f.qs.whitener @ f.qs.coord_map
    return float(ndense.op_norm(m) ** 2 * np.sum(np.abs(f.vectors) ** 2))


def noise_floor(f):
    """Operators of ``f`` smaller than this are numerically zero."""
    return tol("rank") * operator_scale(f)


def bounds_from_operator(s, reference=None):
    """Extremal eigenvalues of ``s`` and the frame / tight verdicts.

    ``reference`` (see :func:`operator_scale`) sets an absolute floor: an
    operator whose largest eigenvalue is below ``tol('rank') * reference``
    is numerically zero and is not a frame.
    """
    w = ndense.eigvalsh(s)
    upper = max(float(w[-1]), 0.0)
    lower = min(max(float(w[0]), 0.0), upper)
    floor = tol("rank") * reference if reference else 0.0
    is_frame = upper > floor and lower > tol("frame") * upper
    is_tight = is_frame and (upper - lower) / upper <= tol("tight")
    return FrameBounds(lower, upper, bool(is_frame), bool(is_tight))


def frame_bounds(f):
    """Optimal frame bounds: extremal eigenvalues of ``S_F``."""
    return bounds_from_operator(frame_operator(f), operator_scale(f))


def _inverse_operator(f):
    s = frame_operator(f)
    b = bounds_from_operator(s, operator_scale(f))
    if not b.is_frame:
        raise NotAFrameError(
            f"frame operator is singular (lower bound {b.lower:.3e}, upper {b.upper:.3e})"
        )
    return ndense.solve(s, np.eye(s.shape[0]))


def canonical_dual(f):
    """The canonical dual ``{S_F^{-1} p_i}``, lifted back into the ambient space.

    Raises
    ------
    NotAFrameError
        If ``f`` is not a frame.
    """
    z = _inverse_operator(f) @ f.whitened
    return Frame.from_orthonormal_coords(f.qs, z)


def alternative_dual(f, y):
    """A dual of ``f`` other than the canonical one.

    Every dual has analysis matrix ``Z_F* S^{-1} + (I - Z_F* S^{-1} Z_F) Y``
    for some ``m x dim(H_F)`` matrix ``Y``; ``Y = 0`` gives the canonical
    dual.
    """
    y = ndense.as_matrix(y, "y")
    zf = f.whitened
    m = len(f)
    if y.shape != (m, zf.shape[0]):
        raise DimensionError(f"y must be {m}x{zf.shape[0]}, got {y.shape}")
    s_inv = _inverse_operator(f)
    left_inv = ndense.adjoint(zf) @ s_inv  # m x k
    kernel_proj = np.eye(m) - left_inv @ zf
    zg_adj = left_inv + kernel_proj @ y
    return Frame.from_orthonormal_coords(f.qs, ndense.adjoint(zg_adj))


def reconstruction_residual(f, g):
    """``||T_F T_G* - I||`` in orthonormal coordinates."""
    r = f.whitened @ ndense.adjoint(g.whitened)
    return ndense.op_norm(r - np.eye(r.shape[0]))


def same_space(f, g):
    if f.qs is g.qs:
        return True
    a, b = f.qs, g.qs
    return (
        a.mf_basis.shape == b.mf_basis.shape
        and np.allclose(a.mf_basis, b.mf_basis)
        and np.allclose(a.coord_map, b.coord_map)
        and np.allclose(a.induced_gram, b.induced_gram)
    )


def is_dual_pair(f, g):
    """Check both reconstruction identities for the pair ``(f, g)``.

    True iff ``||T_F T_G* - I||`` and ``||T_G T_F* - I||`` are both within
    the ``dual`` tolerance; both residuals are reported.
    """
    if not same_space(f, g):
        raise PreconditionError("frames live in different quotient spaces")
    if len(f) != len(g):
        raise PreconditionError(f"frames have different sizes ({len(f)} vs {len(g)})")
    r1 = reconstruction_residual(f, g)
    r2 = reconstruction_residual(g, f)
    limit = tol("dual")
    return DualCheck(bool(r1 <= limit and r2 <= limit), r1, r2)


def frame_sums(f, p):
    """``sum_i |<p, p_i | F>|^2`` computed straight from the n-inner product."""
    return float(sum(abs(f.qs.inner(p, pi)) ** 2 for pi in f.vectors))


def frame_operator_direct(f):
    """``S_F`` from its defining sum ``S_F p = sum_i <p, p_i | F> p_i``.

    Evaluated on the M_F basis with ``qs.inner`` (Gram determinants for a
    plain quotient), then expressed in orthonormal coordinates. Slow; meant
    as an independent cross-check of :func:`frame_operator`.
    """
    qs = f.qs
    k = qs.dim
    s_coords = np.zeros((k, k), dtype=np.complex128)
    for b in range(k):
        m_b = qs.mf_basis[:, b]
        for i, p_i in enumerate(f.vectors):
            s_coords[:, b] += qs.inner(m_b, p_i) * f.synthesis_matrix[:, i]
    return qs.whitener @ s_coords @ qs.unwhitener
