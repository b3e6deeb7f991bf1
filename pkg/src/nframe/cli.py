"""Command-line interface: ``nframe <subcommand> ...``.

Exit codes: 0 when everything checked passes, 1 on a verification failure
(a failed suite, a family that is not a frame, a pair that is not dual),
2 on usage or input errors.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import jsonio
from .errors import InputError, NFrameError
from .frames import canonical_dual, frame_bounds, is_dual_pair
from .nspace import n_inner, n_norm
from .quotient import build_quotient
from .tensorframe import check_tensor_equivalence, tensor_frame_operator, tensor_quotient
from .verify import THEOREMS, SuiteConfig, UsageError, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _vector_arg(text, field):
    """A vector given inline as JSON (``'[1, [0, 1], 0]'``) or as a file path."""
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = jsonio.read_json(text, field)
    return jsonio.decode_vector(value, field)


def _load_space_fixing(args):
    base_f = Path(args.fixing).parent
    fix_obj = jsonio.read_json(args.fixing, "fixing")
    space = None
    if args.space:
        space = jsonio.space_from_json(jsonio.read_json(args.space, "space"), "space", Path(args.space).parent)
    elif not (isinstance(fix_obj, dict) and "space" in fix_obj):
        raise InputError("space", "missing field (pass --space or embed it in the fixing file)")
    return jsonio.fixing_from_json(fix_obj, space, "fixing", base_f)


def _fmt(z):
    z = complex(z)
    if abs(z.imag) <= 1e-15 * max(abs(z.real), 1.0):
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _emit(args, payload, text_lines):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(text_lines))


def cmd_nip(args):
    fixing = _load_space_fixing(args)
    x = _vector_arg(args.x, "x")
    y = _vector_arg(args.y, "y")
    value = n_inner(fixing.space, fixing.space.check_vector(x, "x"), fixing.space.check_vector(y, "y"), fixing)
    _emit(args, {"value": jsonio.encode_complex(value), "n": fixing.order_n}, [f"<x, y | F> = {_fmt(value)}"])
    return EXIT_OK


def cmd_nnorm(args):
    fixing = _load_space_fixing(args)
    x = fixing.space.check_vector(_vector_arg(args.x, "x"), "x")
    value = n_norm(fixing.space, x, fixing)
    _emit(args, {"value": value, "n": fixing.order_n}, [f"||x, F|| = {value:.12g}"])
    return EXIT_OK


def cmd_quotient(args):
    fixing = _load_space_fixing(args)
    qs = build_quotient(fixing.space, fixing)
    payload = {
        "dim": qs.dim,
        "mf_basis": jsonio.encode_array(qs.mf_basis.T),
        "induced_gram": jsonio.encode_array(qs.induced_gram),
    }
    lines = [f"dim H_F = {qs.dim}", "M_F basis:"]
    lines += ["  " + " ".join(_fmt(z) for z in col) for col in qs.mf_basis.T]
    _emit(args, payload, lines)
    return EXIT_OK


def _bounds_lines(b, prefix=""):
    return [
        f"{prefix}lower {b.lower:.12g}",
        f"{prefix}upper {b.upper:.12g}",
        f"{prefix}frame {'yes' if b.is_frame else 'no'}, tight {'yes' if b.is_tight else 'no'}",
    ]


def cmd_bounds(args):
    f = jsonio.load_frame(args.frame)
    b = frame_bounds(f)
    _emit(args, jsonio.bounds_to_json(b), _bounds_lines(b))
    return EXIT_OK if b.is_frame else EXIT_FAIL


def cmd_dual(args):
    f = jsonio.load_frame(args.frame)
    b = frame_bounds(f)
    if not b.is_frame:
        _emit(args, {"is_frame": False, "bounds": b.to_dict()}, ["not a frame: no dual exists"])
        return EXIT_FAIL
    if args.partner:
        g = jsonio.frame_from_json(jsonio.read_json(args.partner, "partner"), "partner", Path(args.partner).parent, f.qs)
        check = is_dual_pair(f, g)
        payload = {"is_dual": check.is_dual, "residual": check.residual, "transposed_residual": check.transposed_residual}
        lines = [
            f"dual pair: {'yes' if check.is_dual else 'no'}",
            f"residual {check.residual:.3e}, transposed {check.transposed_residual:.3e}",
        ]
        _emit(args, payload, lines)
        return EXIT_OK if check.is_dual else EXIT_FAIL
    g = canonical_dual(f)
    check = is_dual_pair(f, g)
    payload = jsonio.frame_to_json(g)
    payload["bounds"] = frame_bounds(g).to_dict()
    payload["residual"] = max(check.residual, check.transposed_residual)
    lines = ["canonical dual vectors:"]
    lines += ["  " + " ".join(_fmt(z) for z in v) for v in g.vectors]
    lines += _bounds_lines(frame_bounds(g), "dual ")
    _emit(args, payload, lines)
    return EXIT_OK if check.is_dual else EXIT_FAIL


def cmd_tensor(args):
    tf = jsonio.load_tensor(args.tensor)
    eq = check_tensor_equivalence(tf)
    op = tensor_frame_operator(tf, check=False)
    tq = tensor_quotient(tf.working.tensor_fixing, tf.left_frame.qs, tf.right_frame.qs)
    payload = {
        "left": eq.left.to_dict(),
        "right": eq.right.to_dict(),
        "product": eq.product.to_dict(),
        "equivalence_holds": eq.holds,
        "bounds_residual": eq.bounds_residual,
        "operator_residual": op.residual,
        "working_dim": tq.working_dim,
        "naive_dim": tq.naive_dim,
    }
    lines = (
        _bounds_lines(eq.left, "left ")
        + _bounds_lines(eq.right, "right ")
        + _bounds_lines(eq.product, "product ")
        + [
            f"dims: working {tq.working_dim}, naive quotient {tq.naive_dim}",
            f"S factorization residual {op.residual:.3e}",
        ]
    )
    _emit(args, payload, lines)
    ok = eq.holds and op.residual <= 1e-9
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args):
    ids = THEOREMS if args.theorem == "ALL" else (args.theorem,)
    reports = []
    for tid in ids:
        cfg = SuiteConfig(
            tid,
            trials=args.trials,
            seed=args.seed,
            dim_h=args.dim_h,
            dim_k=args.dim_k,
            order_n=args.n,
            frame_size=args.frame_size,
            sabotage=args.sabotage,
        )
        report = run_suite(cfg, workers=args.workers)
        reports.append(report)
        if not args.json:
            print(
                f"{tid:7s} {report.verdict.upper():4s} trials={cfg.trials} failures={report.failures} "
                f"max_residual={report.max_residual:.2e} negative={report.negative_trials} "
                f"detected={report.detections} time={report.wall_time:.2f}s"
            )
    if args.json:
        data = [r.to_dict() for r in reports]
        print(json.dumps(data[0] if len(data) == 1 else data, indent=2))
    return EXIT_OK if all(r.verdict == "pass" for r in reports) else EXIT_FAIL


def build_parser():
    p = _Parser(prog="nframe", description="Frames for n-inner-product spaces via quotient Hilbert spaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=fn)
        return sp

    for name, fn, help_text in (
        ("nip", cmd_nip, "n-inner product <x, y | F>"),
        ("nnorm", cmd_nnorm, "n-norm ||x, F||"),
        ("quotient", cmd_quotient, "dimension and basis of H_F"),
    ):
        sp = add(name, fn, help_text)
        sp.add_argument("--fixing", required=True, help="fixing tuple JSON file")
        sp.add_argument("--space", help="space JSON file (if not embedded in the fixing file)")
        if name in ("nip", "nnorm"):
            sp.add_argument("--x", required=True, help="vector as inline JSON or a file")
        if name == "nip":
            sp.add_argument("--y", required=True, help="vector as inline JSON or a file")

    add("bounds", cmd_bounds, "optimal frame bounds").add_argument("--frame", required=True)
    sp = add("dual", cmd_dual, "canonical dual, or check a given partner")
    sp.add_argument("--frame", required=True)
    sp.add_argument("--partner", help="frame file to test as a dual of --frame")
    add("tensor", cmd_tensor, "tensor product frame report").add_argument("--tensor", required=True)

    sp = add("verify", cmd_verify, "randomized theorem verification suites")
    sp.add_argument("--theorem", default="ALL", choices=("ALL",) + THEOREMS)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--dim-h", type=int, default=3)
    sp.add_argument("--dim-k", type=int, default=3)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--frame-size", type=int, default=5)
    sp.add_argument("--sabotage", action="store_true", help="force the negative branch on every trial")
    sp.add_argument("--workers", type=int, default=1, help="threads for running trials")
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"nframe: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"nframe: input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NFrameError as exc:
        print(f"nframe: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except np.linalg.LinAlgError as exc:
        print(f"nframe: numerical error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
