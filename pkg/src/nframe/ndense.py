"""Dense complex matrix kernel.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``;
real input is embedded with zero imaginary part. The determinant and the
Hermitian eigensolver are implemented here (pivoted elimination and cyclic
Jacobi rotations); SVD, linear solves and Kronecker products are delegated
to numpy.
"""

import math

import numpy as np

from .errors import ContractError, DimensionError
from .tolerances import tol

_MAX_SWEEPS = 100


def as_matrix(m, name="matrix"):
    """Return ``m`` as a finite 2-D complex array (copy)."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ContractError(f"{name} has non-finite entries")
    return a


def as_vector(v, name="vector"):
    """Return ``v`` as a finite 1-D complex array (copy)."""
    a = np.array(v, dtype=np.complex128)
    if a.ndim == 2 and 1 in a.shape:
        a = a.reshape(-1)
    if a.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ContractError(f"{name} has non-finite entries")
    return a


def frozen(a):
    """Mark an array read-only and return it."""
    a.setflags(write=False)
    return a


def adjoint(m):
    return np.conj(np.asarray(m)).T


def det(m):
    """Determinant by Gaussian elimination with partial pivoting.

    >>> det([[2, 1], [1, 1]])
    (1+0j)
    """
    a = as_matrix(m)
    n, k = a.shape
    if n != k:
        raise DimensionError(f"det needs a square matrix, got {a.shape}")
    if n == 0:
        return complex(1.0)
    if n == 1:
        return complex(a[0, 0])
    result = complex(1.0)
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if a[pivot, col] == 0:
            return complex(0.0)
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            result = -result
        p = a[col, col]
        result *= p
        if col + 1 < n:
            factors = a[col + 1 :, col] / p
            a[col + 1 :, col:] -= np.outer(factors, a[col, col:])
    return complex(result)


def is_hermitian(m, rtol=None):
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    rtol = tol("herm") if rtol is None else rtol
    scale = max(np.linalg.norm(a), 1.0)
    return np.linalg.norm(a - adjoint(a)) <= rtol * scale


def herm_eig(m):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, V)`` with real eigenvalues ``w`` in ascending order and
    orthonormal eigenvector columns ``V`` so that ``m = V diag(w) V*``.

    Raises
    ------
    DimensionError
        If ``m`` is not square.
    ContractError
        If ``m`` is not Hermitian within the relative tolerance ``herm``.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionError(f"herm_eig needs a square matrix, got {a.shape}")
    if not is_hermitian(a):
        raise ContractError("herm_eig input is not Hermitian")
    a = 0.5 * (a + adjoint(a))
    v = np.eye(n, dtype=np.complex128)
    if n == 0:
        return np.zeros(0), v
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n), v
    # converge well below the caller-facing tolerance so reconstruction is
    # accurate to machine precision
    eps = 1e-15 * norm
    for _ in range(_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= eps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300 or r < 1e-18 * norm:
                    continue
                phase = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # U restricted to (p, q) is [[c, s], [-s conj(phase), c conj(phase)]]
                cph = np.conj(phase)
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - s * cph * colq
                a[:, q] = s * colp + c * cph * colq
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - s * phase * rowq
                a[q, :] = s * rowp + c * phase * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * cph * vq
                v[:, q] = s * vp + c * cph * vq
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    recon = v @ np.diag(w) @ adjoint(v)
    if np.linalg.norm(recon - 0.5 * (as_matrix(m) + adjoint(as_matrix(m)))) > tol("eig") * norm:
        raise ContractError("Jacobi eigensolver failed to converge")
    return w, v


def eigvalsh(m):
    return herm_eig(m)[0]


def kron(a, b):
    """Kronecker product, block (i, j) equal to ``a[i, j] * b``.

    One-dimensional inputs are treated as column vectors and give a
    one-dimensional result.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim == 1 and b.ndim == 1:
        return np.kron(a, b)
    if a.ndim == 1:
        a = a[:, None]
    if b.ndim == 1:
        b = b[:, None]
    return np.kron(a, b)


def singular_values(m):
    a = np.asarray(m, dtype=np.complex128)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def numeric_rank(m, rtol=None, atol=0.0):
    """Number of singular values above ``max(rtol * s_max, atol)``."""
    s = singular_values(m)
    if s.size == 0 or s[0] == 0.0:
        return 0
    rtol = tol("rank") if rtol is None else rtol
    return int(np.sum(s > max(rtol * s[0], atol)))


def op_norm(m):
    """Operator 2-norm (largest singular value)."""
    s = singular_values(m)
    return float(s[0]) if s.size else 0.0


def solve(a, b):
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"solve needs a square matrix, got {a.shape}")
    return np.linalg.solve(a, np.asarray(b, dtype=np.complex128))


def rel_residual(actual, expected, floor=0.0):
    """Relative Frobenius residual ``||actual - expected|| / max(||expected||, floor)``.

    Falls back to the absolute residual when the denominator is zero.
    """
    actual = np.asarray(actual)
    expected = np.asarray(expected)
    if actual.shape != expected.shape:
        raise DimensionError(f"shape mismatch {actual.shape} vs {expected.shape}")
    diff = float(np.linalg.norm(actual - expected))
    ref = max(float(np.linalg.norm(expected)), floor)
    return diff / ref if ref > 0 else diff


def upper_cholesky(g):
    """Upper-triangular ``R`` with ``g = R* R`` for Hermitian positive-definite ``g``."""
    g = as_matrix(g)
    try:
        low = np.linalg.cholesky(0.5 * (g + adjoint(g)))
    except np.linalg.LinAlgError as exc:
        raise ContractError("matrix is not positive-definite") from exc
    return adjoint(low)
