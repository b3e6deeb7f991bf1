"""The induced Hilbert space H_F of a fixing tuple.

For fixing vectors ``F = (a_2, ..., a_n)`` the form ``<p, q>_F = <p, q | F>``
is a semi-inner product whose kernel is exactly ``L_F = span F``. The
quotient ``H / L_F`` is realized on ``M_F``, the ambient-orthogonal
complement of ``L_F``. Completion is a no-op in finite dimension.

The basis of ``M_F`` is chosen orthonormal for ``<., .>_F`` (it is an
ambient-orthonormal basis rescaled by ``1 / sqrt(det Gram(F))``), so the
coordinates returned by :func:`project` are orthonormal coordinates of H_F
up to rounding. ``induced_gram`` is still computed from the n-inner product
and all operator code whitens with it explicitly.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import ndense
from .errors import DimensionError, InvalidFixingError
from .nspace import AmbientSpace, ConditioningTuple, n_inner


@dataclass(frozen=True, eq=False)
class QuotientSpace:
    """H_F realized on a basis of the complement M_F.

    Attributes
    ----------
    ambient, fixing
        The space and fixing tuple the quotient is built from.
    mf_basis
        ``ambient.dim x k`` matrix whose columns span M_F.
    induced_gram
        ``k x k`` matrix with ``induced_gram[i, j] = <m_j, m_i | F>``.
    coord_map
        ``k x ambient.dim`` matrix sending a vector to the M_F coordinates of
        its coset representative.
    """

    ambient: AmbientSpace
    fixing: ConditioningTuple
    mf_basis: np.ndarray
    induced_gram: np.ndarray
    coord_map: np.ndarray

    @property
    def dim(self):
        return self.mf_basis.shape[1]

    @cached_property
    def whitener(self):
        """Upper-triangular ``R`` with ``induced_gram = R* R``.

        ``R @ project(p)`` are coordinates in an F-orthonormal basis.
        """
        return ndense.frozen(ndense.upper_cholesky(self.induced_gram))

    @cached_property
    def unwhitener(self):
        return ndense.frozen(np.linalg.inv(self.whitener))

    def inner(self, u, v):
        return n_inner(self.ambient, u, v, self.fixing)

    def coords(self, vectors):
        """M_F coordinates of each row of ``vectors`` (one column per vector)."""
        v = np.asarray(vectors, dtype=np.complex128)
        if v.ndim == 1:
            v = v[None, :]
        if v.shape[1] != self.ambient.dim:
            raise DimensionError(f"vectors must have dimension {self.ambient.dim}")
        return self.coord_map @ v.T

    def orthonormal_coords(self, vectors):
        return self.whitener @ self.coords(vectors)

    def lift(self, coords):
        """Ambient vectors (rows) for M_F coordinate columns."""
        c = np.asarray(coords, dtype=np.complex128)
        if c.ndim == 1:
            return self.mf_basis @ c
        return (self.mf_basis @ c).T

    def lift_orthonormal(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return self.lift(self.unwhitener @ z)


def _complement_basis(space, fixing):
    """G-orthonormal basis of the G-orthogonal complement of span(fixing).

    Pivoted Gram-Schmidt on the projected standard basis keeps the choice
    canonical (e.g. fixing e_3 in C^3 gives e_1, e_2).
    """
    d = space.dim
    g = space.gram
    c = fixing.vectors.T  # d x k
    eye = np.eye(d, dtype=np.complex128)
    if c.shape[1]:
        # G-orthogonal projector onto span(c): c (c* G c)^-1 c* G
        cgc = np.conj(c).T @ g @ c
        proj = c @ np.linalg.solve(cgc, np.conj(c).T @ g)
        candidates = eye - proj
    else:
        candidates = eye
    k = d - c.shape[1]
    basis = []
    residual = candidates.copy()
    used = np.zeros(d, dtype=bool)
    for _ in range(k):
        norms = np.sqrt(np.maximum(np.einsum("ai,ab,bi->i", np.conj(residual), g, residual).real, 0))
        norms[used] = -1.0
        top = norms.max()
        pick = int(np.flatnonzero(norms >= (1 - 1e-9) * top)[0])
        used[pick] = True
        col = residual[:, pick]
        for b in basis:  # second pass against round-off
            col = col - (np.conj(b) @ g @ col) * b
        col = col / np.sqrt((np.conj(col) @ g @ col).real)
        basis.append(col)
        coeff = np.conj(col) @ g @ residual
        residual = residual - np.outer(col, coeff)
    return np.column_stack(basis) if basis else np.zeros((d, 0), dtype=np.complex128)


def build_quotient(space, fixing):
    """Construct H_F for the fixing tuple.

    Raises
    ------
    InvalidFixingError
        If the fixing vectors are linearly dependent (normally caught when
        the :class:`ConditioningTuple` is built).
    """
    if fixing.space.dim != space.dim:
        raise DimensionError("fixing tuple belongs to a space of different dimension")
    k = len(fixing)
    if k and ndense.numeric_rank(fixing.vectors.T) < k:
        raise InvalidFixingError("fixing vectors are linearly dependent")
    gamma = ndense.det(space.gram_of(fixing.vectors)).real if k else 1.0
    if gamma <= 0:
        raise InvalidFixingError("fixing vectors have a singular Gram matrix")
    basis = _complement_basis(space, fixing) / np.sqrt(gamma)
    m = basis.shape[1]
    induced = np.empty((m, m), dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            induced[i, j] = n_inner(space, basis[:, j], basis[:, i], fixing)
    induced = 0.5 * (induced + ndense.adjoint(induced))
    # coordinates of the G-orthogonal projection onto span(basis)
    bgb = ndense.adjoint(basis) @ space.gram @ basis
    coord_map = np.linalg.solve(bgb, ndense.adjoint(basis) @ space.gram)
    return QuotientSpace(
        space,
        fixing,
        ndense.frozen(basis),
        ndense.frozen(induced),
        ndense.frozen(coord_map),
    )


def project(qs, p):
    """M_F coordinates of the coset representative of ``p + L_F``.

    >>> s = AmbientSpace.standard(3)
    >>> qs = build_quotient(s, ConditioningTuple(s, [[0, 0, 1]]))
    >>> project(qs, [2, 3, 7]).real
    array([2., 3.])
    """
    p = qs.ambient.check_vector(p)
    return qs.coord_map @ p


def induced_inner(qs, u, v):
    """``<u + L_F, v + L_F>_F``, computed from the n-inner product."""
    return qs.inner(u, v)


def induced_norm(qs, p):
    c = project(qs, p)
    return float(np.sqrt(max((np.conj(c) @ qs.induced_gram @ c).real, 0.0)))
