"""Numerical tolerances.

Every tolerance is multiplied by the environment variable
``NFRAME_TOLERANCE_SCALE`` (default 1), read at call time so exploratory
runs can loosen or tighten checks without code changes.
"""

import os

BASE = {
    "herm": 1e-8,  # relative Hermitian-ness of eigensolver input
    "eig": 1e-8,  # eigen-reconstruction, n-norm clamping
    "rank": 1e-10,  # singular value cutoff relative to the largest
    "frame": 1e-8,  # lower bound / upper bound below which "not a frame"
    "tight": 1e-9,  # (B - A) / B for tightness
    "dual": 1e-8,  # reconstruction residual for dual pairs
    "unitary": 1e-9,  # ||U*U - I||
    "identity": 1e-9,  # operator identities such as S_{F(x)G} = S_F (x) S_G
    "axiom": 1e-9,  # n-inner product axiom residuals
    "bound_slack": 1e-8,  # absolute slack on bound-membership checks
}


def scale():
    raw = os.environ.get("NFRAME_TOLERANCE_SCALE", "1")
    try:
        value = float(raw)
    except ValueError:
        return 1.0
    return value if value > 0 else 1.0


def tol(name):
    """Return the named tolerance, scaled by ``NFRAME_TOLERANCE_SCALE``."""
    return BASE[name] * scale()
