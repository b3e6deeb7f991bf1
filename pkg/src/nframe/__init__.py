"""Frames in n-inner-product spaces, built on the quotient Hilbert space H_F."""

from .errors import (
    ContractError,
    DimensionError,
    InputError,
    InvalidFixingError,
    NFrameError,
    NotAFrameError,
    PreconditionError,
)
from .frames import (
    DualCheck,
    Frame,
    FrameBounds,
    alternative_dual,
    analysis,
    canonical_dual,
    frame_bounds,
    frame_operator,
    is_dual_pair,
    synthesis,
)
from .nspace import AmbientSpace, ConditioningTuple, n_inner, n_norm
from .quotient import QuotientSpace, build_quotient, induced_inner, induced_norm, project
from .tensorframe import (
    check_tensor_equivalence,
    inverse_image_frame,
    operator_image_frame,
    tensor_dual,
    tensor_fixing,
    tensor_frame,
    tensor_frame_operator,
    tensor_quotient,
    tensor_spaces,
    unitary_transport_dual,
)
from .verify import SuiteConfig, VerificationReport, run_suite

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
