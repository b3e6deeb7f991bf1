"""Every hand-derived example, computed three ways.

Each case has an ``oracle`` (brute force from :mod:`oracles`), the
library's ``value``, and the ``frozen`` number the oracle produced when the
cases were written. Tests require all three to agree within 1e-9.
"""

import math

import numpy as np

import oracles
from nframe import ndense
from nframe.frames import Frame, analysis, canonical_dual, frame_bounds, frame_operator, is_dual_pair, synthesis
from nframe.nspace import AmbientSpace, ConditioningTuple, n_inner, n_norm
from nframe.quotient import build_quotient, induced_inner, project
from nframe.tensorframe import (
    check_tensor_equivalence,
    inverse_image_frame,
    operator_image_frame,
    tensor_dual,
    tensor_frame,
    tensor_frame_operator,
    tensor_spaces,
    unitary_transport_dual,
)
from nframe.verify import SuiteConfig, gen_instance, run_suite

E = np.eye(3)
I3 = oracles.identity(3)
R2 = 1 / math.sqrt(2)


def _e3_quotient(label=""):
    s = AmbientSpace.standard(3, label)
    return build_quotient(s, ConditioningTuple(s, [E[2]]))


def _hand_frames():
    return Frame(_e3_quotient("H"), [E[0], E[0], E[1]]), Frame(_e3_quotient("K"), [E[0], E[1], E[1]])


def _oracle_s(vectors):
    return oracles.frame_operator_matrix(I3, [E[2]], [E[0], E[1]], [list(v) for v in vectors])


def _diag_of(m):
    return [m[i][i] for i in range(len(m))]


def _oracle_bounds(vectors):
    return oracles.grid_bounds_2d(I3, [E[2]], E[0], E[1], [list(v) for v in vectors])


def _lib_det():
    return ndense.det([[2, 1], [1, 1]])


def _lib_nip():
    s = AmbientSpace.standard(3)
    return n_inner(s, [1, 1, 0], [1, 0, 0], ConditioningTuple(s, [E[1]]))


def _lib_nnorm():
    s = AmbientSpace.standard(3)
    return n_norm(s, [1, 1, 0], ConditioningTuple(s, [E[1]]))


def _lib_diag_fixing_gram():
    s = AmbientSpace.standard(3)
    return build_quotient(s, ConditioningTuple(s, [[0, R2, R2]])).induced_gram


def _oracle_diag_fixing_gram():
    b = [[1, 0, 0], [0, R2, -R2]]
    return [[oracles.n_inner(I3, b[j], b[i], [[0, R2, R2]]) for j in range(2)] for i in range(2)]


def _lib_operator(vectors):
    return frame_operator(Frame(_e3_quotient(), vectors))


def _lib_bounds(vectors):
    b = frame_bounds(Frame(_e3_quotient(), vectors))
    return [b.lower, b.upper]


def _lib_dual(vectors):
    return canonical_dual(Frame(_e3_quotient(), vectors)).synthesis_matrix.T


def _oracle_dual(vectors, spectrum):
    return [oracles.solve_diag(spectrum, list(v[:2])) for v in vectors]


def _lib_self_residual():
    f = Frame(_e3_quotient(), [E[0], E[0], E[1]])
    return is_dual_pair(f, f).residual


def _oracle_self_residual():
    s = _oracle_s([E[0], E[0], E[1]])
    shifted = [[s[i][j] - (1 if i == j else 0) for j in range(2)] for i in range(2)]
    return max(abs(w) for w in oracles.eigh_explicit(shifted))


def _lib_dual_check():
    f = Frame(_e3_quotient(), [E[0], E[0], E[1]])
    return float(is_dual_pair(f, canonical_dual(f)).is_dual)


def _lib_tensor_operator():
    f, g = _hand_frames()
    return frame_operator(tensor_frame(f, g).product_frame)


def _oracle_tensor_operator():
    return oracles.kron_loops(_oracle_s([E[0], E[0], E[1]]), _oracle_s([E[0], E[1], E[1]]))


def _lib_tensor_bounds():
    f, g = _hand_frames()
    b = frame_bounds(tensor_frame(f, g).product_frame)
    return [b.lower, b.upper]


def _lib_non_frame_product():
    _, g = _hand_frames()
    eq = check_tensor_equivalence(tensor_frame(Frame(_e3_quotient(), [E[0]]), g))
    return float(eq.product.is_frame)


def _oracle_non_frame_product():
    k = oracles.kron_loops(_oracle_s([E[0]]), _oracle_s([E[0], E[1], E[1]]))
    return float(min(oracles.eigh_explicit(k)) > 1e-8 * max(oracles.eigh_explicit(k)))


def _lib_a1():
    f, g = _hand_frames()
    return check_tensor_equivalence(tensor_frame(f, g)).a1


def _oracle_a1():
    tensor_low = min(oracles.eigh_explicit(_oracle_tensor_operator()))
    return tensor_low / max(oracles.eigh_explicit(_oracle_s([E[0], E[1], E[1]])))


def _lib_tensor_inverse():
    f, g = _hand_frames()
    return np.linalg.inv(tensor_frame_operator(tensor_frame(f, g)).operator)


def _lib_inverse_image():
    f, g = _hand_frames()
    res = inverse_image_frame(tensor_frame(f, g))
    return _diag_of(frame_operator(res.frame).tolist()) + [res.bounds.lower, res.bounds.upper, *res.interval]


def _oracle_inverse_image():
    inv = oracles.kron_loops(oracles.diag([1 / 2, 1]), oracles.diag([1, 1 / 2]))
    ev = oracles.eigh_explicit(inv)
    a, b = _oracle_bounds([E[0], E[0], E[1]])
    c, d = _oracle_bounds([E[0], E[1], E[1]])
    return _diag_of(inv) + [ev[0], ev[-1], a * c / (b * b * d * d), b * d / (a * a * c * c)]


def _lib_tight_inverse_image():
    tf = tensor_frame(Frame(_e3_quotient(), [2 * E[0], 2 * E[1]]), Frame(_e3_quotient(), [E[0], E[1]]))
    res = inverse_image_frame(tf)
    return [res.bounds.lower, res.bounds.upper, *res.interval]


def _oracle_tight_inverse_image():
    a, b = _oracle_bounds([2 * E[0], 2 * E[1]])
    c, d = _oracle_bounds([E[0], E[1]])
    s = oracles.kron_loops(_oracle_s([2 * E[0], 2 * E[1]]), _oracle_s([E[0], E[1]]))
    ev = oracles.eigh_explicit([[1 / x if x else 0 for x in row] for row in s])  # diagonal
    return [ev[0], ev[-1], a * c / (b * b * d * d), b * d / (a * a * c * c)]


def _lib_operator_image():
    f, g = _hand_frames()
    return frame_operator(operator_image_frame(tensor_frame(f, g), np.diag([2.0, 1.0]), np.eye(2)).frame)


def _oracle_operator_image():
    u = oracles.diag([2, 1])
    usu = oracles.matmul(oracles.matmul(u, _oracle_s([E[0], E[0], E[1]])), oracles.conj_transpose(u))
    return oracles.kron_loops(usu, _oracle_s([E[0], E[1], E[1]]))


def _lib_singular_image():
    f, g = _hand_frames()
    res = operator_image_frame(tensor_frame(f, g), np.diag([0.0, 1.0]), np.eye(2))
    return [res.bounds.lower, float(res.is_frame)]


def _oracle_singular_image():
    u = oracles.diag([0, 1])
    usu = oracles.matmul(oracles.matmul(u, _oracle_s([E[0], E[0], E[1]])), u)
    ev = oracles.eigh_explicit(oracles.kron_loops(usu, _oracle_s([E[0], E[1], E[1]])))
    return [max(ev[0], 0.0), float(ev[0] > 1e-8 * ev[-1])]


def _lib_tensor_dual():
    f, g = _hand_frames()
    c = tensor_dual((f, canonical_dual(f)), (g, canonical_dual(g))).check
    return [float(c.is_dual), c.residual]


def _lib_tensor_non_dual():
    f, g = _hand_frames()
    c = tensor_dual((f, canonical_dual(f)), (g, g), require_dual=False).check
    return [float(c.is_dual), c.residual]


def _oracle_tensor_non_dual():
    # T_F T_G* = I on the left, S_G = diag(1, 2) on the right
    rec = oracles.kron_loops(oracles.identity(2), _oracle_s([E[0], E[1], E[1]]))
    shifted = [[rec[i][j] - (1 if i == j else 0) for j in range(4)] for i in range(4)]
    r = max(abs(w) for w in oracles.eigh_explicit(shifted))
    return [float(r <= 1e-8), r]


def _lib_rotation_transport():
    f, g = _hand_frames()
    rot = np.array(oracles.rotation(math.pi / 4))
    c = unitary_transport_dual((f, canonical_dual(f)), (g, canonical_dual(g)), rot, np.eye(2)).check
    return [float(c.is_dual), c.residual]


def _oracle_rotation_transport():
    rot = oracles.rotation(math.pi / 4)
    u = oracles.kron_loops(rot, oracles.identity(2))
    # (U T_F)(U T_G)* = U U* since T_F T_G* = I
    rec = oracles.matmul(u, oracles.conj_transpose(u))
    shifted = [[rec[i][j] - (1 if i == j else 0) for j in range(4)] for i in range(4)]
    r = max(abs(w) for w in oracles.eigh_explicit(shifted))
    return [float(r <= 1e-8), r]


def _lib_sabotage_rank():
    cfg = SuiteConfig("T3.14", sabotage=True)
    ranks = []
    for t in range(8):
        inst = gen_instance(cfg, t)
        ranks.append(min(ndense.numeric_rank(inst.u) - inst.u.shape[0], ndense.numeric_rank(inst.v) - inst.v.shape[0]))
    return float(max(ranks) < 0)


def _lib_t312_report():
    r = run_suite(SuiteConfig("T3.12", trials=50, seed=42, dim_h=3, dim_k=3, order_n=2, frame_size=4))
    return [float(r.verdict == "pass"), float(r.max_residual <= 1e-9)]


def _lib_t314_sabotage_report():
    r = run_suite(SuiteConfig("T3.14", sabotage=True, trials=40))
    return [float(r.verdict == "pass"), float(r.detections == r.negative_trials == 40)]


# name, oracle thunk, library thunk, frozen value
CASES = [
    ("det [[2,1],[1,1]]", lambda: oracles.det_cofactor([[2, 1], [1, 1]]), _lib_det, 1.0),
    ("eigenvalues [[2,1],[1,2]]", lambda: oracles.eigh_explicit([[2, 1], [1, 2]]), lambda: ndense.eigvalsh([[2, 1], [1, 2]]), [1.0, 3.0]),
    (
        "kron diag(1,2) diag(3,4)",
        lambda: oracles.kron_loops(oracles.diag([1, 2]), oracles.diag([3, 4])),
        lambda: ndense.kron(np.diag([1, 2]), np.diag([3, 4])),
        np.diag([3, 4, 6, 8]).tolist(),
    ),
    (
        "rank of ((1,1,0),(1,0,0),(0,1,0))",
        lambda: oracles.rank_by_elimination([(1, 1, 0), (1, 0, 0), (0, 1, 0)]),
        lambda: ndense.numeric_rank(np.array([(1, 1, 0), (1, 0, 0), (0, 1, 0)]).T),
        2,
    ),
    ("n_inner x=(1,1,0) y=e1 | e2", lambda: oracles.n_inner(I3, [1, 1, 0], [1, 0, 0], [E[1]]), _lib_nip, 1.0),
    ("n_norm x=(1,1,0) | e2", lambda: oracles.n_norm(I3, [1, 1, 0], [E[1]]), _lib_nnorm, 1.0),
    ("induced gram, fixing (0,1,1)/sqrt2", _oracle_diag_fixing_gram, _lib_diag_fixing_gram, np.eye(2).tolist()),
    (
        "project (2,3,7) mod e3",
        lambda: [oracles.n_inner(I3, [2, 3, 7], E[i], [E[2]]) for i in range(2)],
        lambda: project(_e3_quotient(), [2, 3, 7]),
        [2.0, 3.0],
    ),
    (
        "induced inner (1,1,0),(1,0,0) mod e3",
        lambda: oracles.n_inner(I3, [1, 1, 0], [1, 0, 0], [E[2]]),
        lambda: induced_inner(_e3_quotient(), [1, 1, 0], [1, 0, 0]),
        1.0,
    ),
    (
        "analysis {e1,e1,e2} at (2,3,0)",
        lambda: [oracles.n_inner(I3, [2, 3, 0], p, [E[2]]) for p in (E[0], E[0], E[1])],
        lambda: analysis(Frame(_e3_quotient(), [E[0], E[0], E[1]]), [2, 3, 0]),
        [2.0, 2.0, 3.0],
    ),
    (
        "synthesis {e1,e1,e2} of (1,1,2)",
        lambda: [sum(c * p[k] for c, p in zip([1, 1, 2], (E[0], E[0], E[1]))) for k in range(2)],
        lambda: synthesis(Frame(_e3_quotient(), [E[0], E[0], E[1]]), [1, 1, 2]),
        [2.0, 2.0],
    ),
    ("S of {e1,e1,e2}", lambda: _oracle_s([E[0], E[0], E[1]]), lambda: _lib_operator([E[0], E[0], E[1]]), [[2, 0], [0, 1]]),
    ("S of {e1}", lambda: _oracle_s([E[0]]), lambda: _lib_operator([E[0]]), [[1, 0], [0, 0]]),
    ("bounds {e1,e1,e2} (grid)", lambda: list(_oracle_bounds([E[0], E[0], E[1]])), lambda: _lib_bounds([E[0], E[0], E[1]]), [1.0, 2.0]),
    ("bounds {e1} (grid)", lambda: list(_oracle_bounds([E[0]])), lambda: _lib_bounds([E[0]]), [0.0, 1.0]),
    (
        "canonical dual {e1,e1,e2}",
        lambda: _oracle_dual([E[0], E[0], E[1]], [2, 1]),
        lambda: _lib_dual([E[0], E[0], E[1]]),
        [[0.5, 0], [0.5, 0], [0, 1]],
    ),
    ("canonical dual {2e1,e2}", lambda: _oracle_dual([2 * E[0], E[1]], [4, 1]), lambda: _lib_dual([2 * E[0], E[1]]), [[0.5, 0], [0, 1]]),
    ("dual check with canonical dual", lambda: 1.0, _lib_dual_check, 1.0),
    ("self-pair residual {e1,e1,e2}", _oracle_self_residual, _lib_self_residual, 1.0),
    (
        "product gram diag(1,2) (x) diag(3,1)",
        lambda: oracles.kron_loops(oracles.diag([1, 2]), oracles.diag([3, 1])),
        lambda: tensor_spaces(AmbientSpace(2, np.diag([1, 2])), AmbientSpace(2, np.diag([3, 1]))).product.gram,
        np.diag([3, 1, 6, 2]).tolist(),
    ),
    (
        "working gram for orthonormal factors",
        lambda: oracles.kron_loops(oracles.identity(2), oracles.identity(2)),
        lambda: tensor_frame(*_hand_frames()).working.induced_gram,
        np.eye(4).tolist(),
    ),
    ("tensor S", _oracle_tensor_operator, _lib_tensor_operator, np.diag([2, 4, 1, 2]).tolist()),
    (
        "tensor bounds",
        lambda: [min(oracles.eigh_explicit(_oracle_tensor_operator())), max(oracles.eigh_explicit(_oracle_tensor_operator()))],
        _lib_tensor_bounds,
        [1.0, 4.0],
    ),
    ("non-frame factor => product non-frame", _oracle_non_frame_product, _lib_non_frame_product, 0.0),
    ("A1 = A_tensor / lambda_max(S_G)", _oracle_a1, _lib_a1, 0.5),
    (
        "tensor S inverse",
        lambda: oracles.kron_loops(oracles.diag([1 / 2, 1]), oracles.diag([1, 1 / 2])),
        _lib_tensor_inverse,
        np.diag([0.5, 0.25, 1, 0.5]).tolist(),
    ),
    ("inverse image (1,2,1,2)", _oracle_inverse_image, _lib_inverse_image, [0.5, 0.25, 1, 0.5, 0.25, 1.0, 0.0625, 4.0]),
    ("inverse image 2*ONB (x) ONB", _oracle_tight_inverse_image, _lib_tight_inverse_image, [0.25, 0.25, 0.25, 0.25]),
    ("operator image u=diag(2,1)", _oracle_operator_image, _lib_operator_image, np.diag([8, 16, 1, 2]).tolist()),
    ("operator image u=diag(0,1)", _oracle_singular_image, _lib_singular_image, [0.0, 0.0]),
    ("tensor of canonical dual pairs", lambda: [1.0, 0.0], _lib_tensor_dual, [1.0, 0.0]),
    ("tensor with non-dual factor", _oracle_tensor_non_dual, _lib_tensor_non_dual, [0.0, 1.0]),
    ("rotation transport keeps duality", _oracle_rotation_transport, _lib_rotation_transport, [1.0, 0.0]),
    ("sabotage T3.14 forces rank < dim", lambda: 1.0, _lib_sabotage_rank, 1.0),
    ("T3.12 suite run (50 trials, seed 42)", lambda: [1.0, 1.0], _lib_t312_report, [1.0, 1.0]),
    ("T3.14 sabotage suite run", lambda: [1.0, 1.0], _lib_t314_sabotage_report, [1.0, 1.0]),
]


def max_deviation(case):
    """Largest absolute difference among oracle, library and frozen values."""
    _, oracle, library, frozen = case
    o = np.asarray(oracle(), dtype=complex)
    v = np.asarray(library(), dtype=complex)
    f = np.asarray(frozen, dtype=complex)
    if not (o.shape == v.shape == f.shape):
        return math.inf
    return float(max(np.abs(o - v).max(initial=0), np.abs(o - f).max(initial=0), np.abs(v - f).max(initial=0)))
