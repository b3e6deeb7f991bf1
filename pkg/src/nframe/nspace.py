"""n-inner products and n-norms on a finite-dimensional inner-product space.

The n-inner product is the Gram-determinant construction

    <x, y | c_1, ..., c_{n-1}> = det [[<x, y>,   <x, c_j>  ],
                                      [<c_i, y>, <c_i, c_j>]]

over a base inner product ``<u, v> = v* G u`` (linear in the first slot).
At ``n = 1`` (no conditioning vectors) it is the base inner product.
"""

from dataclasses import dataclass

import numpy as np

from . import ndense
from .errors import ContractError, DimensionError, InvalidFixingError
from .tolerances import tol


@dataclass(frozen=True, eq=False)
class AmbientSpace:
    """``C^dim`` with the inner product ``<u, v> = v* gram u``."""

    dim: int
    gram: np.ndarray
    label: str = ""

    def __post_init__(self):
        gram = ndense.as_matrix(self.gram, "gram")
        if gram.shape != (self.dim, self.dim):
            raise DimensionError(f"gram must be {self.dim}x{self.dim}, got {gram.shape}")
        if not ndense.is_hermitian(gram):
            raise ContractError("gram is not Hermitian")
        if self.dim and ndense.eigvalsh(gram)[0] <= 0:
            raise ContractError("gram is not positive-definite")
        object.__setattr__(self, "gram", ndense.frozen(gram))

    @classmethod
    def standard(cls, dim, label=""):
        return cls(dim, np.eye(dim), label or f"C^{dim}")

    def inner(self, u, v):
        return complex(np.conj(v) @ self.gram @ u)

    def gram_of(self, vectors):
        """Matrix ``M[i, j] = <v_i, v_j>`` for the rows ``v_i`` of ``vectors``."""
        v = np.asarray(vectors, dtype=np.complex128)
        return v @ self.gram.T @ np.conj(v).T

    def check_vector(self, x, name="vector"):
        x = ndense.as_vector(x, name)
        if x.shape[0] != self.dim:
            raise DimensionError(f"{name} has dimension {x.shape[0]}, space has {self.dim}")
        return x


@dataclass(frozen=True, eq=False)
class ConditioningTuple:
    """Linearly independent conditioning vectors ``(c_2, ..., c_n)``.

    ``vectors`` holds one vector per row; it may be empty (``n = 1``).
    """

    space: AmbientSpace
    vectors: np.ndarray

    def __post_init__(self):
        v = np.array(self.vectors, dtype=np.complex128)
        if v.size == 0:
            v = np.zeros((0, self.space.dim), dtype=np.complex128)
        if v.ndim == 1:
            v = v[None, :]
        if v.ndim != 2 or v.shape[1] != self.space.dim:
            raise DimensionError(
                f"conditioning vectors must have dimension {self.space.dim}, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ContractError("conditioning vectors have non-finite entries")
        if v.shape[0] >= self.space.dim:
            raise InvalidFixingError("too many conditioning vectors for the space dimension")
        if v.shape[0] and ndense.numeric_rank(v.T) < v.shape[0]:
            raise InvalidFixingError("conditioning vectors are linearly dependent")
        object.__setattr__(self, "vectors", ndense.frozen(v))

    @property
    def order_n(self):
        return self.vectors.shape[0] + 1

    def __len__(self):
        return self.vectors.shape[0]

    def permuted(self, order):
        return ConditioningTuple(self.space, self.vectors[list(order)])


def _check(space, cond, *vectors):
    if cond.space is not space and cond.space.dim != space.dim:
        raise DimensionError("conditioning tuple belongs to a different space")
    return [space.check_vector(v) for v in vectors]


def gram_block(space, x, y, cond):
    """The n-by-n matrix whose determinant is ``<x, y | cond>``."""
    c = cond.vectors
    rows = np.vstack([x[None, :], c])
    cols = np.vstack([y[None, :], c])
    # M[i, j] = <rows_i, cols_j> = cols_j* G rows_i
    return rows @ space.gram.T @ np.conj(cols).T


def n_inner(space, x, y, cond):
    """Gram-determinant n-inner product ``<x, y | c_2, ..., c_n>``.

    >>> e = np.eye(3)
    >>> s = AmbientSpace.standard(3)
    >>> n_inner(s, [1, 1, 0], e[0], ConditioningTuple(s, [e[1]]))
    (1+0j)
    """
    x, y = _check(space, cond, x, y)
    return ndense.det(gram_block(space, x, y, cond))


def n_norm(space, x, cond):
    """``||x, c_2, ..., c_n|| = sqrt(<x, x | c_2, ..., c_n>)``.

    Small negative round-off (above ``-tol('eig')`` relative to the scale of
    the Gram block) is clamped to zero; anything more negative is a
    numerical contract violation.
    """
    x = _check(space, cond, x)[0]
    block = gram_block(space, x, x, cond)
    value = ndense.det(block).real
    scale = max(float(np.prod(np.abs(np.diag(block)))), np.finfo(float).tiny)
    if value < 0:
        if value < -tol("eig") * scale:
            raise ContractError(f"n-inner product <x, x | ...> = {value} is negative")
        value = 0.0
    return float(np.sqrt(value))


def is_dependent(space, x, cond):
    """True when ``x`` together with the conditioning vectors is linearly dependent."""
    x = _check(space, cond, x)[0]
    stacked = np.vstack([x[None, :], cond.vectors])
    return ndense.numeric_rank(stacked.T) < stacked.shape[0]
