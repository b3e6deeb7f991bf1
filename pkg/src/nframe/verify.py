"""Seeded randomized verification suites, one per theorem.

Random streams come from numpy's Philox4x64-10 counter-based generator
keyed by ``(seed, trial)``; the counter advances with each draw. A trial's
instance therefore depends only on ``(seed, trial)``, so trials can run in
any order or concurrently.

Every suite has a positive branch (the theorem's conclusion must hold) and
a negative branch that deliberately breaks a hypothesis, e.g. a singular
operator or a rank-deficient frame. The negative branch runs on every
fourth trial, and on every trial when ``sabotage`` is set; it passes only
if the break is detected.
"""

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import ndense
from .errors import NFrameError, NotAFrameError, PreconditionError
from .frames import (
    Frame,
    alternative_dual,
    bounds_from_operator,
    canonical_dual,
    frame_bounds,
    frame_operator,
    frame_operator_direct,
    frame_sums,
    is_dual_pair,
    noise_floor,
    operator_scale,
)
from .nspace import AmbientSpace, ConditioningTuple, is_dependent, n_inner, n_norm
from .quotient import build_quotient, induced_norm
from .tensorframe import (
    check_tensor_equivalence,
    inverse_image_frame,
    operator_image_frame,
    tensor_dual,
    tensor_frame,
    tensor_frame_operator,
    tensor_n_inner,
    tensor_n_norm,
    tensor_quotient,
    unitary_transport_dual,
)
from .tolerances import tol

THEOREMS = (
    "AXIOMS",
    "T2.4",
    "T3.3",
    "T3.5",
    "T3.9",
    "T3.10",
    "T3.12",
    "T3.13",
    "T3.14",
    "T4.2",
    "T4.3",
    "T4.5",
    "T4.6",
)

CONSTRUCTION = "gram-determinant n-inner product; M_F = ambient-orthogonal complement"


class UsageError(NFrameError, ValueError):
    """Invalid suite configuration or unknown theorem id."""


@dataclass(frozen=True)
class SuiteConfig:
    theorem_id: str
    trials: int = 200
    seed: int = 0
    dim_h: int = 3
    dim_k: int = 3
    order_n: int = 2
    frame_size: int = 5
    sabotage: bool = False

    def validate(self):
        if self.theorem_id not in THEOREMS:
            raise UsageError(f"unknown theorem id {self.theorem_id!r}; choose from {', '.join(THEOREMS)}")
        if self.trials < 1:
            raise UsageError("trials must be at least 1")
        if self.order_n < 1:
            raise UsageError("n must be at least 1")
        if self.dim_h < self.order_n or self.dim_k < self.order_n:
            raise UsageError(f"dimensions must be at least n={self.order_n}")
        if self.frame_size < 1:
            raise UsageError("frame size must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must be a 64-bit unsigned integer")
        return self


@dataclass
class TrialResult:
    trial: int
    branch: str
    passed: bool
    residual: float
    checks: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    """Aggregated suite outcome; ``trials`` holds one plain dict per trial."""

    config: dict
    trials: list
    failures: int
    max_residual: float
    verdict: str
    wall_time: float
    negative_trials: int = 0
    detections: int = 0
    construction: str = CONSTRUCTION

    def to_dict(self):
        return asdict(self)

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data["trials"] = [asdict(TrialResult(**t)) for t in data["trials"]]
        return cls(**data)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def same_results(self, other):
        """Equality ignoring ``wall_time``."""
        a, b = self.to_dict(), other.to_dict()
        a.pop("wall_time")
        b.pop("wall_time")
        return a == b


class Checks:
    """Accumulates named residual and boolean checks for one trial."""

    def __init__(self):
        self.items = {}
        self.residuals = []
        self.ok = True

    def residual(self, name, value, limit):
        value = float(value)
        passed = bool(np.isfinite(value) and value <= limit)
        self.items[name] = {"value": value, "limit": limit, "ok": passed}
        self.residuals.append(value)
        self.ok &= passed

    def expect(self, name, condition):
        passed = bool(condition)
        self.items[name] = {"ok": passed}
        self.ok &= passed

    @property
    def max_residual(self):
        return max(self.residuals) if self.residuals else 0.0


# -- random instances ------------------------------------------------------


def rng_for(seed, trial):
    return np.random.Generator(np.random.Philox(key=np.array([seed, trial], dtype=np.uint64)))


def _gaussian(rng, shape, real=False):
    if real:
        return rng.standard_normal(shape).astype(np.complex128)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(rng, d, real=False):
    q, r = np.linalg.qr(_gaussian(rng, (d, d), real))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_gram(rng, d, real=False):
    """Random Hermitian positive-definite matrix with condition number at most 100."""
    q = random_unitary(rng, d, real)
    w = 10.0 ** rng.uniform(0.0, 2.0, size=d)
    w[0] = 1.0
    g = (q * w) @ ndense.adjoint(q)
    return 0.5 * (g + ndense.adjoint(g))


def random_space(rng, d, label, real=False):
    return AmbientSpace(d, random_gram(rng, d, real), label)


def random_fixing(rng, space, count, real=False):
    """Draw conditioning vectors, resampling until well separated from dependence."""
    for _ in range(100):
        v = _gaussian(rng, (count, space.dim), real)
        if count == 0:
            return ConditioningTuple(space, v)
        s = ndense.singular_values(v.T)
        if s[-1] > 1e-3 * s[0]:
            return ConditioningTuple(space, v)
    raise RuntimeError("could not draw independent fixing vectors")


MAX_FRAME_CONDITION = 100.0
MAX_OPERATOR_CONDITION = 4.0


def random_operator(rng, d, singular=False):
    """Random ``d x d`` matrix with condition number at most 4.

    With ``singular`` the smallest singular value is set to zero.
    """
    left, right = random_unitary(rng, d), random_unitary(rng, d)
    s = MAX_OPERATOR_CONDITION ** -rng.uniform(0.0, 1.0, size=d)
    s[0] = 1.0
    if singular:
        s[-1] = 0.0
    return (left * s) @ right


def deficient_frame(rng, qs, size):
    """A family whose cosets span a proper subspace of H_F (never a frame).

    Elements also carry random L_F components, which must not matter.
    """
    k = qs.dim
    basis = random_unitary(rng, k)[:, : k - 1]
    z = basis @ _gaussian(rng, (k - 1, size)) if k > 1 else np.zeros((k, size))
    vectors = qs.lift_orthonormal(z).reshape(size, qs.ambient.dim)
    if len(qs.fixing):
        vectors = vectors + _gaussian(rng, (size, len(qs.fixing))) @ qs.fixing.vectors
    return Frame(qs, vectors)


def random_frame(rng, qs, size):
    """Random family, redrawn until ``cond(S_F) <= 100``.

    Square random families are occasionally very ill-conditioned; products
    and operator images multiply condition numbers, so the cap keeps every
    derived frame far from the numerical frame threshold.
    """
    for _ in range(1000):
        f = Frame(qs, _gaussian(rng, (size, qs.ambient.dim)))
        b = frame_bounds(f)
        if b.is_frame and b.upper <= MAX_FRAME_CONDITION * b.lower:
            return f
    raise RuntimeError("could not draw a well-conditioned frame")


def perturbed(rng, f, scale=0.25):
    """Shift every element's coset by a random amount (breaks duality)."""
    dz = _gaussian(rng, f.whitened.shape)
    norm = np.linalg.norm(f.whitened)
    dz *= scale * max(norm, 1.0) / np.linalg.norm(dz)
    return Frame.from_orthonormal_coords(f.qs, f.whitened + dz)


@dataclass
class Instance:
    negative: bool
    side: str
    h: AmbientSpace
    k: AmbientSpace
    qs_h: object
    qs_k: object
    frame_h: Frame
    frame_k: Frame
    u: np.ndarray
    v: np.ndarray
    unitary_u: np.ndarray
    unitary_v: np.ndarray
    extra: dict


def gen_instance(cfg, trial):
    """Deterministic instance for ``(cfg.seed, trial)``.

    Draws happen in a fixed order so the instance is bit-for-bit
    reproducible. The negative branch replaces the theorem-relevant piece
    (frame, operator, partner) with a broken one.
    """
    cfg.validate()
    rng = rng_for(cfg.seed, trial)
    negative = bool(cfg.sabotage or trial % 4 == 3)
    side = "left" if rng.uniform() < 0.5 else "right"
    k_fix = cfg.order_n - 1
    h = random_space(rng, cfg.dim_h, "H")
    kk = random_space(rng, cfg.dim_k, "K")
    qs_h = build_quotient(h, random_fixing(rng, h, k_fix))
    qs_k = build_quotient(kk, random_fixing(rng, kk, k_fix))
    # frame sizes at least dim(H_F) so random families are frames a.s.
    m_h = max(cfg.frame_size, qs_h.dim)
    m_k = max(cfg.frame_size, qs_k.dim)
    frame_h = random_frame(rng, qs_h, m_h)
    frame_k = random_frame(rng, qs_k, m_k)
    bad_h = deficient_frame(rng, qs_h, m_h)
    bad_k = deficient_frame(rng, qs_k, m_k)
    u = random_operator(rng, qs_h.dim)
    v = random_operator(rng, qs_k.dim)
    u_sing = random_operator(rng, qs_h.dim, singular=True)
    v_sing = random_operator(rng, qs_k.dim, singular=True)
    unitary_u = random_unitary(rng, qs_h.dim)
    unitary_v = random_unitary(rng, qs_k.dim)
    extra = {
        "y_h": _gaussian(rng, (m_h, qs_h.dim)),
        "y_k": _gaussian(rng, (m_k, qs_k.dim)),
        "shift_h": _gaussian(rng, (1, 1)).item(),
        "vectors_h": _gaussian(rng, (4, cfg.dim_h)),
        "vectors_k": _gaussian(rng, (4, cfg.dim_k)),
        "alpha": complex(_gaussian(rng, (1,)).item()),
        "perm": rng.permutation(max(k_fix, 1)),
        "real_space": random_space(rng, cfg.dim_h, "H_real", real=True),
        "real_vectors": _gaussian(rng, (2, cfg.dim_h), real=True),
        "perturb_seed": int(rng.integers(0, 2**63)),
    }
    extra["real_fixing"] = random_fixing(rng, extra["real_space"], k_fix, real=True)
    extra["dependent_coeffs"] = _gaussian(rng, (k_fix,))
    extra["nonunitary"] = unitary_u @ np.diag(np.linspace(2.0, 1.0, qs_h.dim)) if qs_h.dim > 1 else 2 * unitary_u

    tid = cfg.theorem_id
    if negative:
        if tid in ("T3.3", "T3.5", "T3.13", "T4.3"):
            frame_h = bad_h
        elif tid in ("T3.9", "T3.10", "T3.12"):
            if side == "left":
                frame_h = bad_h
            else:
                frame_k = bad_k
        elif tid in ("T2.4", "T3.14"):
            if side == "left":
                u = u_sing
            else:
                v = v_sing
    return Instance(negative, side, h, kk, qs_h, qs_k, frame_h, frame_k, u, v, unitary_u, unitary_v, extra)


# -- suites ----------------------------------------------------------------


def _scale(space, cond, *vectors):
    """Hadamard-type scale for Gram determinants: product of squared norms."""
    s = 1.0
    for x in vectors:
        s *= np.sqrt(max(space.inner(x, x).real, 0.0))
    for c in cond.vectors:
        s *= space.inner(c, c).real
    return max(s, np.finfo(float).tiny)


def suite_axioms(cfg, inst, ck):
    space = inst.h
    cond = inst.qs_h.fixing
    x, y, z, w = inst.extra["vectors_h"]
    a = inst.extra["alpha"]
    lim = tol("axiom")
    if inst.negative:
        coeffs = inst.extra["dependent_coeffs"]
        dep = coeffs @ cond.vectors if len(cond) else np.zeros(space.dim, dtype=np.complex128)
        val = n_inner(space, dep, dep, cond)
        sc = _scale(space, cond, dep, dep) if np.any(dep) else 1.0
        ck.residual("dependent_value", abs(val) / sc, lim)
        ck.expect("dependent_detected", is_dependent(space, dep, cond))
        ck.expect("dependent_norm_small", n_norm(space, dep, cond) <= np.sqrt(lim * sc) + 1e-300)
        return
    sxy = _scale(space, cond, x, y)
    sxx = _scale(space, cond, x, x)
    ip = n_inner(space, x, y, cond)
    xx = n_inner(space, x, x, cond)
    ck.residual("positivity", max(0.0, -xx.real) / sxx, lim)
    ck.residual("self_real", abs(xx.imag) / sxx, lim)
    ck.expect("independent_positive", (not is_dependent(space, x, cond)) and xx.real > lim * sxx)
    if len(cond) > 1:
        perm = inst.extra["perm"]
        ck.residual("permutation", abs(n_inner(space, x, y, cond.permuted(perm)) - ip) / sxy, lim)
    ck.residual("conjugate_symmetry", abs(ip - np.conj(n_inner(space, y, x, cond))) / sxy, lim)
    ck.residual("homogeneity", abs(n_inner(space, a * x, y, cond) - a * ip) / (abs(a) * sxy), lim)
    szy = _scale(space, cond, z, y)
    add = n_inner(space, x + z, y, cond) - ip - n_inner(space, z, y, cond)
    ck.residual("additivity", abs(add) / max(sxy, szy), lim)
    nx, ny = n_norm(space, x, cond), n_norm(space, y, cond)
    ck.residual("cauchy_schwarz", max(0.0, abs(ip) - nx * ny) / sxy, lim)
    npl, nmi = n_norm(space, x + y, cond), n_norm(space, x - y, cond)
    spl = _scale(space, cond, x + y, x + y) + _scale(space, cond, x - y, x - y)
    ck.residual("parallelogram", abs(npl**2 + nmi**2 - 2 * (nx**2 + ny**2)) / spl, lim)
    # n-norm axioms
    ck.residual("norm_homogeneity", abs(n_norm(space, a * x, cond) - abs(a) * nx) / max(abs(a) * np.sqrt(sxx), 1e-300), lim)
    ck.residual("triangle", max(0.0, npl - nx - ny) / np.sqrt(spl), lim)
    if len(cond):
        swapped = ConditioningTuple(space, np.vstack([x[None, :], cond.vectors[1:]]))
        ck.residual(
            "norm_permutation", abs(n_norm(space, cond.vectors[0], swapped) - nx) / np.sqrt(sxx), lim
        )
    # polarization on a real instance
    rs = inst.extra["real_space"]
    rc = inst.extra["real_fixing"]
    rx, ry = inst.extra["real_vectors"]
    pol = (n_norm(rs, rx + ry, rc) ** 2 - n_norm(rs, rx - ry, rc) ** 2) / 4
    rsc = _scale(rs, rc, rx + ry, rx + ry) + _scale(rs, rc, rx - ry, rx - ry)
    ck.residual("polarization_real", abs(n_inner(rs, rx, ry, rc) - pol) / rsc, lim)


def suite_kron(cfg, inst, ck):
    u, v = inst.u, inst.v
    a, b = inst.unitary_u, inst.unitary_v
    x = inst.extra["vectors_h"][0][: u.shape[0]]
    y = inst.extra["vectors_k"][0][: v.shape[0]]
    lim = tol("identity")
    k = ndense.kron(u, v)
    ck.residual("norm", abs(ndense.op_norm(k) - ndense.op_norm(u) * ndense.op_norm(v)) / max(ndense.op_norm(k), 1e-300), 1e-8)
    ck.residual("simple_tensor", ndense.rel_residual(k @ ndense.kron(x, y), ndense.kron(u @ x, v @ y)), lim)
    ck.residual("product", ndense.rel_residual(k @ ndense.kron(a, b), ndense.kron(u @ a, v @ b)), lim)
    ck.residual("adjoint", ndense.rel_residual(ndense.adjoint(k), ndense.kron(ndense.adjoint(u), ndense.adjoint(v))), lim)
    kron_inv = ndense.numeric_rank(k) == k.shape[0]
    factors_inv = ndense.numeric_rank(u) == u.shape[0] and ndense.numeric_rank(v) == v.shape[0]
    ck.expect("invertible_iff", kron_inv == factors_inv)
    if inst.negative:
        ck.expect("singular_detected", not kron_inv)
    else:
        ck.expect("invertible", kron_inv)
        inv = np.linalg.inv(k)
        ck.residual("inverse", ndense.rel_residual(inv, ndense.kron(np.linalg.inv(u), np.linalg.inv(v))), 1e-8)


def quadratic_form_bounds(f, sample=None):
    """Frame bounds straight from the defining inequality.

    Both sides of ``A ||p, F||^2 <= sum_i |<p, p_i | F>|^2 <= B ||p, F||^2``
    are Hermitian forms in the coefficients of ``p`` over a spanning sample
    (the standard basis by default); the optimal bounds are the extreme
    generalized eigenvalues on the range of the norm form. Only n-inner
    products are used, never the quotient construction.
    """
    qs = f.qs
    space, cond = qs.ambient, qs.fixing
    s = np.eye(space.dim, dtype=np.complex128) if sample is None else np.asarray(sample)
    n = s.shape[0]
    norm_form = np.empty((n, n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            norm_form[b, a] = n_inner(space, s[a], s[b], cond)
    r = np.array([[n_inner(space, s[a], p, cond) for a in range(n)] for p in f.vectors])
    frame_form = np.conj(r).T @ r
    norm_form = 0.5 * (norm_form + ndense.adjoint(norm_form))
    w, vecs = ndense.herm_eig(norm_form)
    keep = w > 1e-9 * w[-1]
    x = vecs[:, keep] / np.sqrt(w[keep])
    m = ndense.adjoint(x) @ frame_form @ x
    # size of r without cancellation, for the numerically-zero floor
    fixed = np.prod([space.inner(c, c).real for c in cond.vectors]) if len(cond) else 1.0
    s_norms = np.sqrt([space.inner(v, v).real for v in s])
    p_norms = np.sqrt([space.inner(p, p).real for p in f.vectors])
    r_abs = np.outer(p_norms, s_norms) * fixed
    reference = ndense.op_norm(x) ** 2 * float(np.sum(r_abs**2))
    return bounds_from_operator(0.5 * (m + ndense.adjoint(m)), reference)


def _inequality_samples(ck, f, bounds, points, name="frame_inequality"):
    worst = 0.0
    floor = noise_floor(f)
    for p in points:
        total = frame_sums(f, p)
        norm2 = n_norm(f.qs.ambient, p, f.qs.fixing) ** 2
        scale = max(max(bounds.upper, floor) * norm2, np.finfo(float).tiny)
        worst = max(worst, (bounds.lower * norm2 - total) / scale, (total - bounds.upper * norm2) / scale)
    ck.residual(name, max(worst, 0.0), tol("bound_slack"))


def suite_hf_equivalence(cfg, inst, ck):
    f = inst.frame_h
    b = frame_bounds(f)
    raw = quadratic_form_bounds(f)
    ck.expect("verdicts_agree", b.is_frame == raw.is_frame)
    scale = max(b.upper, noise_floor(f), 1e-300)
    ck.residual("bounds_agree", max(abs(b.lower - raw.lower), abs(b.upper - raw.upper)) / scale, 1e-8)
    _inequality_samples(ck, f, b, inst.extra["vectors_h"])
    if inst.negative:
        ck.expect("deficient_detected", not b.is_frame and not raw.is_frame)
    else:
        ck.expect("is_frame", b.is_frame)


def suite_frame_operator(cfg, inst, ck):
    f = inst.frame_h
    s = frame_operator(f)
    norm = max(np.linalg.norm(s), 1e-300)
    ck.residual("hermitian", np.linalg.norm(s - ndense.adjoint(s)) / norm, 1e-10)
    ck.residual("definition", ndense.rel_residual(frame_operator_direct(f), s, noise_floor(f)), 1e-9)
    w = ndense.eigvalsh(s)
    ck.residual("positive", max(0.0, -w[0]) / max(w[-1], 1e-300), 1e-10)
    b = bounds_from_operator(s, operator_scale(f))
    bessel = sum(induced_norm(f.qs, p) ** 2 for p in f.vectors)
    ck.residual("bounded", max(0.0, ndense.op_norm(s) - bessel) / max(bessel, noise_floor(f), 1e-300), 1e-9)
    invertible = ndense.numeric_rank(s, rtol=tol("frame"), atol=noise_floor(f)) == s.shape[0]
    ck.expect("invertible_iff_frame", invertible == b.is_frame)
    _inequality_samples(ck, f, b, inst.extra["vectors_h"])
    if inst.negative:
        ck.expect("deficient_detected", not b.is_frame)
        try:
            canonical_dual(f)
        except NotAFrameError:
            ck.expect("dual_refused", True)
        else:
            ck.expect("dual_refused", False)
        return
    ck.expect("is_frame", b.is_frame)
    inv_w = ndense.eigvalsh(np.linalg.inv(s))
    slack = 1e-9
    below = max(0.0, 1 / b.upper - slack - inv_w[0])
    above = max(0.0, inv_w[-1] - 1 / b.lower - slack)
    ck.residual("inverse_spectrum", max(below, above), 1e-12)
    dual = canonical_dual(f)
    ck.residual("dual_operator", ndense.rel_residual(frame_operator(dual), np.linalg.inv(s)), 1e-8)
    ck.residual(
        "dual_of_dual", ndense.rel_residual(canonical_dual(dual).synthesis_matrix, f.synthesis_matrix), 1e-9
    )


def suite_tensor_equivalence(cfg, inst, ck):
    tf = tensor_frame(inst.frame_h, inst.frame_k)
    eq = check_tensor_equivalence(tf)
    ck.expect("equivalence", eq.holds)
    ck.residual("product_bounds", eq.bounds_residual, 1e-8)
    ck.expect("a1_below_optimal", eq.a1_ok)
    ck.expect("b1_above_optimal", eq.b1_ok)
    if inst.negative:
        ck.expect("deficient_detected", not eq.product.is_frame)
    else:
        ck.expect("is_frame", eq.product.is_frame)


def suite_tensor_hf(cfg, inst, ck):
    tf = tensor_frame(inst.frame_h, inst.frame_k)
    working = frame_bounds(tf.product_frame)
    # over simple tensors the defining ratio separates, so its extremes are
    # products of the factor extremes from the raw quadratic forms
    raw_h = quadratic_form_bounds(inst.frame_h)
    raw_k = quadratic_form_bounds(inst.frame_k)
    raw_lower = raw_h.lower * raw_k.lower
    raw_upper = raw_h.upper * raw_k.upper
    raw_is_frame = raw_h.is_frame and raw_k.is_frame
    ck.expect("verdicts_agree", raw_is_frame == working.is_frame)
    floor = noise_floor(tf.product_frame)
    scale = max(working.upper, floor, 1e-300)
    ck.residual("bounds_agree", max(abs(raw_lower - working.lower), abs(raw_upper - working.upper)) / scale, 1e-8)
    fixing = tf.working.tensor_fixing
    worst = 0.0
    for p, q in zip(inst.extra["vectors_h"], inst.extra["vectors_k"]):
        x = ndense.kron(p, q)
        total = sum(abs(tensor_n_inner(fixing, x, w)) ** 2 for w in tf.product_frame.vectors)
        norm2 = tensor_n_norm(fixing, x) ** 2
        factored = n_norm(inst.h, p, inst.qs_h.fixing) ** 2 * n_norm(inst.k, q, inst.qs_k.fixing) ** 2
        ck.residual("norm_factorizes", abs(norm2 - factored) / max(factored, 1e-300), 1e-9)
        sc = max(max(working.upper, floor) * norm2, 1e-300)
        worst = max(worst, (working.lower * norm2 - total) / sc, (total - working.upper * norm2) / sc)
    ck.residual("simple_tensor_inequality", max(worst, 0.0), tol("bound_slack"))
    tq = tensor_quotient(fixing, inst.qs_h, inst.qs_k)
    ck.items["dims"] = {"ok": True, "naive": tq.naive_dim, "working": tq.working_dim}
    if inst.negative:
        ck.expect("deficient_detected", not working.is_frame and not raw_is_frame)
    else:
        ck.expect("is_frame", working.is_frame)


def suite_tensor_operator(cfg, inst, ck):
    tf = tensor_frame(inst.frame_h, inst.frame_k)
    op = tensor_frame_operator(tf, check=False)
    ck.residual("factorization", op.residual, 1e-9)
    sf = frame_operator(tf.left_frame)
    sg = frame_operator(tf.right_frame)
    direct = frame_operator_direct(tf.product_frame)
    floor = noise_floor(tf.product_frame)
    ck.residual("definition", ndense.rel_residual(direct, ndense.kron(sf, sg), floor), 1e-9)
    if inst.negative:
        ck.expect("inverse_skipped", op.inverse_residual is None)
        rank = ndense.numeric_rank(op.operator, rtol=tol("frame"), atol=floor)
        rank_f = ndense.numeric_rank(sf, rtol=tol("frame"), atol=noise_floor(tf.left_frame))
        rank_g = ndense.numeric_rank(sg, rtol=tol("frame"), atol=noise_floor(tf.right_frame))
        ck.expect("rank_multiplies", rank == rank_f * rank_g)
        ck.expect("deficient_detected", rank < op.operator.shape[0])
    else:
        ck.expect("inverse_checked", op.inverse_residual is not None)
        if op.inverse_residual is not None:
            ck.residual("inverse_factorization", op.inverse_residual, 1e-9)


def suite_inverse_image(cfg, inst, ck):
    tf = tensor_frame(inst.frame_h, inst.frame_k)
    if inst.negative:
        try:
            inverse_image_frame(tf)
        except NotAFrameError:
            ck.expect("singular_refused", True)
        else:
            ck.expect("singular_refused", False)
        return
    res = inverse_image_frame(tf)
    ck.residual("operator_is_inverse", res.operator_residual, 1e-8)
    ck.expect("bounds_in_interval", res.within)
    ck.items["interval"] = {"ok": True, "lower": res.interval[0], "upper": res.interval[1]}


def suite_operator_image(cfg, inst, ck):
    tf = tensor_frame(inst.frame_h, inst.frame_k)
    res = operator_image_frame(tf, inst.u, inst.v)
    ck.expect("verdict_consistent", res.consistent)
    ck.expect("kron_iff_factors", res.kron_invertible == res.factors_invertible)
    ck.residual("operator_conjugation", res.operator_residual, 1e-8)
    if inst.negative:
        ck.expect("singular_detected", not res.is_frame and not res.kron_invertible)
    else:
        ck.expect("is_frame", res.is_frame)


def _dual_partner(inst, f, y, trial):
    return canonical_dual(f) if trial % 2 == 0 else alternative_dual(f, y)


def suite_dual_equivalence(cfg, inst, ck, trial):
    f = inst.frame_h
    g = _dual_partner(inst, f, inst.extra["y_h"], trial)
    if inst.negative:
        g = perturbed(rng_for(inst.extra["perturb_seed"], 0), g)
        check = is_dual_pair(f, g)
        ck.expect("non_dual_detected", check.residual > tol("dual") and check.transposed_residual > tol("dual"))
        return
    check = is_dual_pair(f, g)
    ck.residual("reconstruction", check.residual, tol("dual"))
    ck.residual("transposed_reconstruction", check.transposed_residual, tol("dual"))


def suite_dual_lower_bound(cfg, inst, ck, trial):
    f = inst.frame_h
    if inst.negative:
        g = random_frame(rng_for(inst.extra["perturb_seed"], 1), f.qs, len(f))
        ck.expect("no_dual_for_deficient", not is_dual_pair(f, g).is_dual)
        ck.expect("deficient_detected", not frame_bounds(f).is_frame)
        return
    g = _dual_partner(inst, f, inst.extra["y_h"], trial + 1)
    ck.expect("pair_is_dual", is_dual_pair(f, g).is_dual)
    bf, bg = frame_bounds(f), frame_bounds(g)
    slack = tol("bound_slack")
    ck.residual("lower_f", max(0.0, 1 / bg.upper - bf.lower - slack), 1e-12)
    ck.residual("lower_g", max(0.0, 1 / bf.upper - bg.lower - slack), 1e-12)


def _pairs(inst, trial):
    ph = (inst.frame_h, _dual_partner(inst, inst.frame_h, inst.extra["y_h"], trial))
    pk = (inst.frame_k, _dual_partner(inst, inst.frame_k, inst.extra["y_k"], trial // 2))
    return ph, pk


def suite_tensor_dual(cfg, inst, ck, trial):
    ph, pk = _pairs(inst, trial)
    if inst.negative:
        broken = (pk[0], perturbed(rng_for(inst.extra["perturb_seed"], 2), pk[1]))
        res = tensor_dual(ph, broken, require_dual=False)
        ck.expect("non_dual_detected", not res.check.is_dual)
        try:
            tensor_dual(ph, broken)
        except PreconditionError:
            ck.expect("precondition_enforced", True)
        else:
            ck.expect("precondition_enforced", False)
        return
    res = tensor_dual(ph, pk)
    ck.residual("reconstruction", res.check.residual, tol("dual"))
    ck.residual("transposed_reconstruction", res.check.transposed_residual, tol("dual"))
    ck.expect("primal_is_frame", frame_bounds(res.primal).is_frame)
    ck.expect("dual_is_frame", frame_bounds(res.dual).is_frame)


def suite_unitary_dual(cfg, inst, ck, trial):
    ph, pk = _pairs(inst, trial)
    if inst.negative:
        bad = inst.extra["nonunitary"]
        try:
            unitary_transport_dual(ph, pk, bad, inst.unitary_v)
        except PreconditionError:
            ck.expect("precondition_enforced", True)
        else:
            ck.expect("precondition_enforced", False)
        base = tensor_dual(ph, pk)
        k = ndense.kron(bad, inst.unitary_v)
        lam = Frame.from_orthonormal_coords(base.primal.qs, k @ base.primal.whitened)
        gam = Frame.from_orthonormal_coords(base.primal.qs, k @ base.dual.whitened)
        ck.expect("non_unitary_breaks_duality", not is_dual_pair(lam, gam).is_dual)
        return
    res = unitary_transport_dual(ph, pk, inst.unitary_u, inst.unitary_v)
    ck.residual("reconstruction", res.check.residual, tol("dual"))
    ck.residual("transposed_reconstruction", res.check.transposed_residual, tol("dual"))
    ck.expect("transported_is_frame", frame_bounds(res.primal).is_frame)


_SUITES = {
    "AXIOMS": suite_axioms,
    "T2.4": suite_kron,
    "T3.3": suite_hf_equivalence,
    "T3.5": suite_frame_operator,
    "T3.9": suite_tensor_equivalence,
    "T3.10": suite_tensor_hf,
    "T3.12": suite_tensor_operator,
    "T3.13": suite_inverse_image,
    "T3.14": suite_operator_image,
    "T4.2": suite_dual_equivalence,
    "T4.3": suite_dual_lower_bound,
    "T4.5": suite_tensor_dual,
    "T4.6": suite_unitary_dual,
}
_NEEDS_TRIAL = {"T4.2", "T4.3", "T4.5", "T4.6"}


def run_trial(cfg, trial):
    inst = gen_instance(cfg, trial)
    ck = Checks()
    suite = _SUITES[cfg.theorem_id]
    try:
        if cfg.theorem_id in _NEEDS_TRIAL:
            suite(cfg, inst, ck, trial)
        else:
            suite(cfg, inst, ck)
    except (NFrameError, np.linalg.LinAlgError) as exc:
        ck.expect(f"raised {type(exc).__name__}: {exc}", False)
    return TrialResult(
        trial,
        "negative" if inst.negative else "positive",
        bool(ck.ok),
        float(ck.max_residual),
        ck.items,
    )


def run_suite(cfg, workers=1):
    """Run every trial of one theorem suite and aggregate a report.

    Raises
    ------
    UsageError
        For an unknown theorem id or infeasible configuration.
    """
    cfg.validate()
    start = time.perf_counter()
    indices = range(cfg.trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: run_trial(cfg, t), indices))
    else:
        results = [run_trial(cfg, t) for t in indices]
    failures = sum(not r.passed for r in results)
    negatives = [r for r in results if r.branch == "negative"]
    return VerificationReport(
        config=asdict(cfg),
        trials=[asdict(r) for r in results],
        failures=failures,
        max_residual=max(r.residual for r in results),
        verdict="pass" if failures == 0 else "fail",
        wall_time=time.perf_counter() - start,
        negative_trials=len(negatives),
        detections=sum(r.passed for r in negatives),
    )
