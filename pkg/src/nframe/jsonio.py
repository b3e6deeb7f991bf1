"""JSON encoding of spaces, fixing tuples, frames and results.

Complex scalars are ``[re, im]`` pairs (plain numbers are accepted on input);
matrices are row-major lists of rows. Any embedded object (space, fixing,
frame) may instead be given as a path to a JSON file, resolved relative to
the file that references it.

Schemas::

    space   {"dim": d, "gram": [[z, ...], ...], "label": "..."}
    fixing  {"vectors": [[z, ...], ...], "space": space?}
    frame   {"space": space, "fixing": fixing, "vectors": [[z, ...], ...]}
    tensor  {"left": frame, "right": frame, "pairing": [int, ...]?}

All decoding failures raise :class:`InputError` naming the offending field.
"""

import json
import math
import numbers
from pathlib import Path

import numpy as np

from .errors import InputError, NFrameError
from .frames import Frame
from .nspace import AmbientSpace, ConditioningTuple
from .quotient import build_quotient
from .tensorframe import tensor_frame


def encode_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def encode_array(a):
    a = np.asarray(a)
    if a.ndim == 0:
        return encode_complex(a)
    return [encode_array(row) for row in a]


def decode_complex(value, field):
    if isinstance(value, bool):
        raise InputError(field, "expected a number or [re, im] pair, got a boolean")
    if isinstance(value, numbers.Real):
        z = complex(float(value), 0.0)
    elif (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, numbers.Real) and not isinstance(v, bool) for v in value)
    ):
        z = complex(float(value[0]), float(value[1]))
    else:
        raise InputError(field, f"expected a number or [re, im] pair, got {value!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InputError(field, "non-finite value")
    return z


def decode_vector(value, field, dim=None):
    if not isinstance(value, list):
        raise InputError(field, "expected a list of scalars")
    v = np.array([decode_complex(x, f"{field}[{i}]") for i, x in enumerate(value)], dtype=np.complex128)
    if dim is not None and v.shape[0] != dim:
        raise InputError(field, f"expected {dim} entries, got {v.shape[0]}")
    return v


def decode_matrix(value, field, cols=None):
    if not isinstance(value, list):
        raise InputError(field, "expected a list of rows")
    rows = [decode_vector(r, f"{field}[{i}]", cols) for i, r in enumerate(value)]
    if not rows:
        return np.zeros((0, cols or 0), dtype=np.complex128)
    width = rows[0].shape[0]
    for i, r in enumerate(rows):
        if r.shape[0] != width:
            raise InputError(f"{field}[{i}]", f"row has {r.shape[0]} entries, expected {width}")
    return np.vstack(rows)


def read_json(path, field="file"):
    p = Path(path)
    try:
        text = p.read_text()
    except FileNotFoundError:
        raise InputError(field, f"file not found: {path}") from None
    except OSError as exc:
        raise InputError(field, f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(field, f"invalid JSON in {path}: {exc.msg} (line {exc.lineno})") from None


def _resolve(value, field, base):
    """An embedded object, or the contents of the file a string points to."""
    if isinstance(value, str):
        path = Path(value)
        if base is not None and not path.is_absolute():
            path = Path(base) / path
        return read_json(path, field), path.parent
    if not isinstance(value, dict):
        raise InputError(field, "expected an object or a file path")
    return value, base


def _require(obj, key, field):
    if key not in obj:
        raise InputError(f"{field}.{key}" if field else key, "missing field")
    return obj[key]


def _wrap(field, fn, *args):
    """Run a constructor, re-raising library errors as field-named input errors."""
    try:
        return fn(*args)
    except InputError:
        raise
    except NFrameError as exc:
        raise InputError(field, str(exc)) from None


# -- spaces and fixing tuples ----------------------------------------------


def space_to_json(space):
    return {"dim": space.dim, "gram": encode_array(space.gram), "label": space.label}


def space_from_json(value, field="space", base=None):
    obj, base = _resolve(value, field, base)
    dim = _require(obj, "dim", field)
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InputError(f"{field}.dim", "expected a positive integer")
    gram = decode_matrix(obj["gram"], f"{field}.gram", dim) if "gram" in obj else np.eye(dim)
    if gram.shape != (dim, dim):
        raise InputError(f"{field}.gram", f"expected a {dim}x{dim} matrix")
    label = obj.get("label", "")
    if not isinstance(label, str):
        raise InputError(f"{field}.label", "expected a string")
    return _wrap(f"{field}.gram", AmbientSpace, dim, gram, label)


def fixing_to_json(fixing, embed_space=True):
    out = {"vectors": encode_array(fixing.vectors)}
    if embed_space:
        out["space"] = space_to_json(fixing.space)
    return out


def fixing_from_json(value, space=None, field="fixing", base=None):
    obj, base = _resolve(value, field, base)
    if "space" in obj:
        space = space_from_json(obj["space"], f"{field}.space", base)
    if space is None:
        raise InputError(f"{field}.space", "missing field (no space given)")
    vectors = decode_matrix(_require(obj, "vectors", field), f"{field}.vectors", space.dim)
    return _wrap(f"{field}.vectors", ConditioningTuple, space, vectors)


# -- frames ----------------------------------------------------------------


def frame_to_json(f):
    return {
        "space": space_to_json(f.qs.ambient),
        "fixing": fixing_to_json(f.qs.fixing, embed_space=False),
        "vectors": encode_array(f.vectors),
    }


def frame_from_json(value, field="frame", base=None, qs=None):
    obj, base = _resolve(value, field, base)
    if qs is None:
        space = space_from_json(_require(obj, "space", field), f"{field}.space", base)
        fixing = fixing_from_json(obj.get("fixing", {"vectors": []}), space, f"{field}.fixing", base)
        qs = _wrap(f"{field}.fixing", build_quotient, space, fixing)
    vectors = decode_matrix(_require(obj, "vectors", field), f"{field}.vectors", qs.ambient.dim)
    if vectors.shape[0] == 0:
        raise InputError(f"{field}.vectors", "a frame needs at least one vector")
    return _wrap(f"{field}.vectors", Frame, qs, vectors)


def load_frame(path):
    return frame_from_json(read_json(path, "frame"), "frame", Path(path).parent)


def tensor_from_json(value, field="tensor", base=None):
    obj, base = _resolve(value, field, base)
    left = frame_from_json(_require(obj, "left", field), f"{field}.left", base)
    right = frame_from_json(_require(obj, "right", field), f"{field}.right", base)
    pairing = obj.get("pairing")
    if pairing is not None:
        if not isinstance(pairing, list) or not all(
            isinstance(i, int) and not isinstance(i, bool) for i in pairing
        ):
            raise InputError(f"{field}.pairing", "expected a list of integers")
    return _wrap(f"{field}.pairing", tensor_frame, left, right, None, pairing)


def load_tensor(path):
    return tensor_from_json(read_json(path, "tensor"), "tensor", Path(path).parent)


def bounds_to_json(b):
    return b.to_dict()
