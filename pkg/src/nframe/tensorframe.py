"""Tensor products of spaces, fixing tuples, operators and frames.

Conventions
-----------
* Flat index of ``x (x) y`` is ``i_left * dim_right + i_right`` (numpy
  ``kron`` order); the product family ``{p_i (x) q_j}`` is stored with
  ``(i, j)`` at position ``i * m_right + j``.
* The tensor n-inner product is defined by factorization on simple tensors,
  ``<x(x)y, x'(x)y' | a_k(x)b_k> = <x, x' | a>_1 <y, y' | b>_2``, extended
  sesquilinearly. It is *not* the Gram-determinant n-inner product of the
  product space conditioned on the flattened vectors ``a_k (x) b_k``.
* H_F (x) K_G is realized on ``kron(M_F basis, M_G basis)`` with Gram matrix
  ``kron(W_F, W_G)``; all tensor frame operators act there. Its dimension
  ``(d_H - n + 1)(d_K - n + 1)`` generally differs from the dimension
  ``d_H d_K - n + 1`` of the quotient of H (x) K by the flattened tuple, and
  both are reported by :func:`tensor_quotient`.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import ndense
from .errors import DimensionError, NotAFrameError, PreconditionError
from .frames import (
    DualCheck,
    Frame,
    FrameBounds,
    bounds_from_operator,
    frame_bounds,
    frame_operator,
    is_dual_pair,
    noise_floor,
    operator_scale,
)
from .nspace import AmbientSpace, ConditioningTuple, n_inner
from .quotient import QuotientSpace, build_quotient
from .tolerances import tol


@dataclass(frozen=True, eq=False)
class TensorSpace:
    left: AmbientSpace
    right: AmbientSpace
    product: AmbientSpace


def tensor_spaces(h, k):
    """``H (x) K`` with inner product ``kron(G_H, G_K)``."""
    label = f"{h.label or 'H'} (x) {k.label or 'K'}"
    product = AmbientSpace(h.dim * k.dim, ndense.kron(h.gram, k.gram), label)
    return TensorSpace(h, k, product)


def semi_inner_kernel(space, cond):
    """Matrix ``Q`` with ``<u, v | cond> = v* Q u`` (built from Gram determinants)."""
    d = space.dim
    e = np.eye(d, dtype=np.complex128)
    q = np.empty((d, d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            q[j, i] = n_inner(space, e[i], e[j], cond)
    return q


@dataclass(frozen=True, eq=False)
class TensorFixing:
    """Pairs ``(a_k, b_k)`` and the flattened tuple ``(a_k (x) b_k)``."""

    tensor_space: TensorSpace
    left: ConditioningTuple
    right: ConditioningTuple
    flattened: ConditioningTuple

    @property
    def pairs(self):
        return list(zip(self.left.vectors, self.right.vectors))

    @cached_property
    def kernel(self):
        """``kron(Q_F, Q_G)``: the tensor semi-inner product as a matrix."""
        ql = semi_inner_kernel(self.tensor_space.left, self.left)
        qr = semi_inner_kernel(self.tensor_space.right, self.right)
        return ndense.frozen(ndense.kron(ql, qr))


def tensor_fixing(ts, left, right, pairing=None):
    """Pair the fixing tuples of the two factors.

    ``pairing`` optionally reorders the right tuple: pair ``k`` is
    ``(left[k], right[pairing[k]])``.

    Raises
    ------
    InvalidFixingError
        If the flattened vectors are linearly dependent.
    """
    if len(left) != len(right):
        raise DimensionError(
            f"fixing tuples have different lengths ({len(left)} vs {len(right)})"
        )
    if pairing is not None:
        if sorted(pairing) != list(range(len(right))):
            raise DimensionError("pairing must be a permutation of the right fixing indices")
        right = right.permuted(pairing)
    flat = [ndense.kron(a, b) for a, b in zip(left.vectors, right.vectors)]
    flattened = ConditioningTuple(ts.product, np.array(flat).reshape(len(flat), ts.product.dim))
    return TensorFixing(ts, left, right, flattened)


def tensor_n_inner(tf, x, y):
    """Tensor n-inner product ``<x, y | a_2 (x) b_2, ..., a_n (x) b_n>``."""
    x = tf.tensor_space.product.check_vector(x)
    y = tf.tensor_space.product.check_vector(y)
    return complex(np.conj(y) @ tf.kernel @ x)


def tensor_n_norm(tf, x):
    return float(np.sqrt(max(tensor_n_inner(tf, x, x).real, 0.0)))


@dataclass(frozen=True, eq=False)
class TensorWorkingSpace(QuotientSpace):
    """H_F (x) K_G realized inside H (x) K.

    Unlike a plain :class:`QuotientSpace`, ``mf_basis`` together with the
    flattened fixing vectors does not span the product space: the kernel of
    the tensor semi-inner product is ``L_F (x) K + H (x) L_G``.
    """

    left: QuotientSpace = None
    right: QuotientSpace = None
    tensor_fixing: TensorFixing = None

    def inner(self, u, v):
        return tensor_n_inner(self.tensor_fixing, u, v)

    @cached_property
    def whitener(self):
        # Cholesky factor of a Kronecker product is the Kronecker product of factors
        return ndense.frozen(ndense.kron(self.left.whitener, self.right.whitener))


def working_space(tf, left_qs, right_qs):
    return TensorWorkingSpace(
        tf.tensor_space.product,
        tf.flattened,
        ndense.frozen(ndense.kron(left_qs.mf_basis, right_qs.mf_basis)),
        ndense.frozen(ndense.kron(left_qs.induced_gram, right_qs.induced_gram)),
        ndense.frozen(ndense.kron(left_qs.coord_map, right_qs.coord_map)),
        left=left_qs,
        right=right_qs,
        tensor_fixing=tf,
    )


@dataclass(frozen=True, eq=False)
class TensorQuotient:
    """Both candidate realizations of the tensor quotient."""

    naive: QuotientSpace
    working: TensorWorkingSpace

    @property
    def naive_dim(self):
        return self.naive.dim

    @property
    def working_dim(self):
        return self.working.dim


def tensor_quotient(tf, left_qs=None, right_qs=None):
    """Quotient of H (x) K by the flattened tuple, and the working H_F (x) K_G."""
    ts = tf.tensor_space
    left_qs = left_qs or build_quotient(ts.left, tf.left)
    right_qs = right_qs or build_quotient(ts.right, tf.right)
    naive = build_quotient(ts.product, tf.flattened)
    return TensorQuotient(naive, working_space(tf, left_qs, right_qs))


@dataclass(frozen=True, eq=False)
class TensorFrame:
    left_frame: Frame
    right_frame: Frame
    product_frame: Frame

    @property
    def working(self):
        return self.product_frame.qs


def tensor_frame(pf, qf, working=None, pairing=None):
    """The family ``{p_i (x) q_j}`` as a frame on H_F (x) K_G."""
    if len(pf.qs.fixing) != len(qf.qs.fixing):
        raise DimensionError("factor frames use fixing tuples of different lengths")
    if working is None:
        ts = tensor_spaces(pf.qs.ambient, qf.qs.ambient)
        tfix = tensor_fixing(ts, pf.qs.fixing, qf.qs.fixing, pairing)
        working = working_space(tfix, pf.qs, qf.qs)
    elif working.left.dim != pf.qs.dim or working.right.dim != qf.qs.dim:
        raise DimensionError("working space does not match the factor frames")
    vectors = np.array([ndense.kron(p, q) for p in pf.vectors for q in qf.vectors])
    return TensorFrame(pf, qf, Frame(working, vectors))


def _positive_extremes(s):
    w = ndense.eigvalsh(s)
    top = max(float(w[-1]), 0.0)
    positive = w[w > tol("frame") * top] if top > 0 else w[:0]
    low = float(positive[0]) if positive.size else 0.0
    return low, top


@dataclass(frozen=True)
class TensorEquivalence:
    """Frame verdicts for a product family and its factors.

    ``a1``/``b1`` are the factor-1 bounds derived from the product bounds,
    ``A_tensor / lambda_max(S_G)`` and ``B_tensor / lambda_min(S_G)``, with
    ``lambda_min`` taken over the nonzero spectrum.
    """

    left: FrameBounds
    right: FrameBounds
    product: FrameBounds
    holds: bool
    product_of_factor_bounds: tuple
    bounds_residual: float
    a1: float | None
    b1: float | None
    a1_ok: bool
    b1_ok: bool


def check_tensor_equivalence(tf):
    left = frame_bounds(tf.left_frame)
    right = frame_bounds(tf.right_frame)
    product = frame_bounds(tf.product_frame)
    holds = product.is_frame == (left.is_frame and right.is_frame)
    expected = (left.lower * right.lower, left.upper * right.upper)
    scale = max(product.upper, expected[1], noise_floor(tf.product_frame), np.finfo(float).tiny)
    residual = max(abs(product.lower - expected[0]), abs(product.upper - expected[1])) / scale
    a1 = b1 = None
    a1_ok = b1_ok = True
    if product.is_frame:
        g_low, g_top = _positive_extremes(frame_operator(tf.right_frame))
        a1 = product.lower / g_top
        b1 = product.upper / g_low
        slack = tol("bound_slack")
        a1_ok = a1 <= left.lower + slack * max(left.upper, 1.0)
        b1_ok = b1 >= left.upper - slack * max(left.upper, 1.0)
    return TensorEquivalence(
        left, right, product, bool(holds), expected, float(residual), a1, b1, bool(a1_ok), bool(b1_ok)
    )


@dataclass(frozen=True, eq=False)
class TensorOperator:
    operator: np.ndarray
    factored: np.ndarray
    residual: float
    inverse_residual: float | None


def tensor_frame_operator(tf, check=True):
    """Frame operator of the product family, compared with ``S_F (x) S_G``.

    With ``check=True`` a residual above the ``identity`` tolerance raises
    :class:`ContractError`; the inverse identity is compared only when both
    factors are frames.
    """
    from .errors import ContractError

    s = frame_operator(tf.product_frame)
    sf = frame_operator(tf.left_frame)
    sg = frame_operator(tf.right_frame)
    factored = ndense.kron(sf, sg)
    floor = noise_floor(tf.product_frame)
    residual = ndense.rel_residual(s, factored, floor)
    inverse_residual = None
    if frame_bounds(tf.left_frame).is_frame and frame_bounds(tf.right_frame).is_frame:
        inv = ndense.solve(s, np.eye(s.shape[0]))
        inv_factored = ndense.kron(
            ndense.solve(sf, np.eye(sf.shape[0])), ndense.solve(sg, np.eye(sg.shape[0]))
        )
        inverse_residual = ndense.rel_residual(inv, inv_factored)
    if check:
        limit = tol("identity")
        if residual > limit or (inverse_residual is not None and inverse_residual > limit):
            raise ContractError(
                f"S_(F(x)G) differs from S_F (x) S_G (residual {residual:.3e}, "
                f"inverse {inverse_residual})"
            )
    return TensorOperator(s, factored, float(residual), inverse_residual)


@dataclass(frozen=True, eq=False)
class InverseImage:
    """The family ``{S^{-1}_(F(x)G) (p_i (x) q_j)}`` and its bound certificate."""

    frame: Frame
    operator_residual: float
    bounds: FrameBounds
    interval: tuple
    within: bool


def inverse_image_frame(tf, factor_bounds=None):
    """Image of the product family under the inverse tensor frame operator.

    ``factor_bounds`` is ``(A, B, C, D)``; by default the optimal factor
    bounds are used. The certificate checks that the optimal bounds of the
    image lie in ``[AC / (B^2 D^2), BD / (A^2 C^2)]``.

    Raises
    ------
    NotAFrameError
        If either factor is not a frame.
    """
    left = frame_bounds(tf.left_frame)
    right = frame_bounds(tf.right_frame)
    if not (left.is_frame and right.is_frame):
        raise NotAFrameError("both factors must be frames")
    if factor_bounds is None:
        factor_bounds = (left.lower, left.upper, right.lower, right.upper)
    a, b, c, d = factor_bounds
    s = frame_operator(tf.product_frame)
    s_inv = ndense.solve(s, np.eye(s.shape[0]))
    z = s_inv @ tf.product_frame.whitened
    image = Frame.from_orthonormal_coords(tf.working, z)
    image_op = frame_operator(image)
    residual = ndense.rel_residual(image_op, s_inv)
    bounds = bounds_from_operator(image_op, operator_scale(image))
    interval = (a * c / (b * b * d * d), b * d / (a * a * c * c))
    slack = tol("bound_slack")
    within = bounds.lower >= interval[0] - slack and bounds.upper <= interval[1] + slack
    return InverseImage(image, float(residual), bounds, interval, bool(within))


@dataclass(frozen=True, eq=False)
class OperatorImage:
    """The family ``(U_1 (x) U_2)(p_i (x) q_j)`` with its frame verdict."""

    frame: Frame
    kron_invertible: bool
    factors_invertible: bool
    bounds: FrameBounds
    operator_residual: float

    @property
    def is_frame(self):
        return self.bounds.is_frame

    @property
    def consistent(self):
        return self.is_frame == self.kron_invertible


def operator_image_frame(tf, u, v):
    """Apply ``U_1 (x) U_2`` (acting on orthonormal H_F, K_G coordinates)."""
    u = ndense.as_matrix(u, "u")
    v = ndense.as_matrix(v, "v")
    kf, kg = tf.left_frame.qs.dim, tf.right_frame.qs.dim
    if u.shape != (kf, kf) or v.shape != (kg, kg):
        raise DimensionError(
            f"operators must be {kf}x{kf} and {kg}x{kg}, got {u.shape} and {v.shape}"
        )
    k = ndense.kron(u, v)
    kron_invertible = ndense.numeric_rank(k) == kf * kg
    factors_invertible = ndense.numeric_rank(u) == kf and ndense.numeric_rank(v) == kg
    z = k @ tf.product_frame.whitened
    image = Frame.from_orthonormal_coords(tf.working, z)
    s_img = frame_operator(image)
    expected = k @ frame_operator(tf.product_frame) @ ndense.adjoint(k)
    residual = ndense.rel_residual(s_img, expected)
    return OperatorImage(
        image,
        bool(kron_invertible),
        bool(factors_invertible),
        bounds_from_operator(s_img, ndense.op_norm(k) ** 2 * operator_scale(tf.product_frame)),
        float(residual),
    )


@dataclass(frozen=True, eq=False)
class TensorDual:
    primal: Frame
    dual: Frame
    check: DualCheck


def _require_dual(pair, which):
    check = is_dual_pair(*pair)
    if not check.is_dual:
        raise PreconditionError(
            f"{which} factor pair is not dual (residual {check.residual:.3e})"
        )


def tensor_dual(pair_h, pair_k, require_dual=True):
    """``({p_i (x) q_j}, {e_i (x) h_j})`` from dual pairs in each factor.

    With ``require_dual=False`` the factor precondition is skipped and the
    returned check reports whatever the product pair satisfies.
    """
    if require_dual:
        _require_dual(pair_h, "left")
        _require_dual(pair_k, "right")
    primal = tensor_frame(pair_h[0], pair_k[0])
    dual = tensor_frame(pair_h[1], pair_k[1], working=primal.working)
    return TensorDual(primal.product_frame, dual.product_frame, is_dual_pair(primal.product_frame, dual.product_frame))


def is_unitary(u):
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return ndense.op_norm(ndense.adjoint(u) @ u - np.eye(u.shape[0])) <= tol("unitary")


def unitary_transport_dual(pair_h, pair_k, u, v):
    """Transport a tensor dual pair by ``U (x) V`` with ``U``, ``V`` unitary.

    Raises
    ------
    PreconditionError
        If ``u`` or ``v`` is not unitary, or a factor pair is not dual.
    """
    u = ndense.as_matrix(u, "u")
    v = ndense.as_matrix(v, "v")
    if not is_unitary(u):
        raise PreconditionError("u is not unitary")
    if not is_unitary(v):
        raise PreconditionError("v is not unitary")
    base = tensor_dual(pair_h, pair_k)
    working = base.primal.qs
    if u.shape[0] != working.left.dim or v.shape[0] != working.right.dim:
        raise DimensionError("operators do not act on the factor quotient spaces")
    k = ndense.kron(u, v)
    primal = Frame.from_orthonormal_coords(working, k @ base.primal.whitened)
    dual = Frame.from_orthonormal_coords(working, k @ base.dual.whitened)
    return TensorDual(primal, dual, is_dual_pair(primal, dual))
