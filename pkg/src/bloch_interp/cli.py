"""Command-line interface: ``bloch-interp {gen,analyze,interp,verify,pair,sample}``.

Every command prints a JSON run report.  Exit codes: 0 pass, 1 verification
failure, 2 input error, 3 numerical or conditioning failure.
"""
import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import _kernels
from .analytic import from_dict, to_dict
from .errors import BlochInterpError, ConditioningError
from .functions import beurling_basis, sample_grid
from .interpolation import BLOCH, HINF, InterpolationProblem, interpolate, verify
from .quadrature import (GAUSS_LEGENDRE, RADIAL_EXPONENTIAL, GridSpec, bergman_pairing,
                         monomial_pairing, parse_poly, poly_support)
from .sequences import PointSequence, augment_close, gen_geometric, separation_report

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
PAIR_TOL = 1e-11


class InputError(Exception):
    pass


def _digest(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load_json(path, what):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {what} file {path}: {exc}") from None


def _write(path, text):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from None


def _dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=False, default=_jsonable) + "\n"


def _jsonable(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, (complex, np.complexfloating)):
        return [o.real, o.imag]
    if isinstance(o, np.ndarray):
        return o.tolist()
    if hasattr(o, "to_dict"):
        return o.to_dict()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def load_sequence(path):
    try:
        return PointSequence.from_dict(_load_json(path, "sequence"))
    except ValueError as exc:
        raise InputError(f"invalid sequence {path}: {exc}") from None


def load_targets(path):
    data = _load_json(path, "targets")
    if isinstance(data, dict):
        data = data.get("targets")
    if not isinstance(data, list):
        raise InputError(f"targets file {path} must hold a list or {{'targets': [...]}}")
    return data


def load_interpolant(path):
    data = _load_json(path, "interpolant")
    space = None
    if isinstance(data, dict) and "function" in data:
        space = data.get("space")
        data = data["function"]
    try:
        return from_dict(data), space
    except ValueError as exc:
        raise InputError(f"malformed function tree in {path}: {exc}") from None


def _problem(seq, targets, space):
    try:
        return InterpolationProblem(seq, targets, space)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None


def cmd_gen(args):
    if args.kind != "geometric":
        raise InputError(f"unknown sequence kind {args.kind!r}")
    try:
        seq = gen_geometric(args.n)
        if args.augment_eps is not None:
            seq = augment_close(seq, args.augment_eps)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _write(args.out, _dumps(seq.to_dict()))
    return {"sequence": {"path": str(args.out), "label": seq.label, "n": len(seq)}}, {}, True


def cmd_analyze(args):
    seq = load_sequence(args.seq)
    rep = separation_report(seq)
    return {"separation": rep.to_dict(), "label": seq.label}, {"seq": args.seq}, True


def cmd_interp(args):
    seq = load_sequence(args.seq)
    problem = _problem(seq, load_targets(args.targets), args.space)
    basis = beurling_basis(seq)
    f = interpolate(problem, basis)
    _write(args.out, _dumps({"space": problem.space, "m_est": basis.m_est, "function": to_dict(f)}))
    rep = verify(problem, f, args.tol, basis=basis)
    ok = rep.passed and rep.norm_bound_ok is not False
    return {"interpolant": str(args.out), "residuals": rep.to_dict()}, \
        {"seq": args.seq, "targets": args.targets}, ok


def cmd_verify(args):
    f, stored_space = load_interpolant(args.interpolant)
    space = args.space or stored_space or BLOCH
    seq = load_sequence(args.seq)
    problem = _problem(seq, load_targets(args.targets), space)
    rep = verify(problem, f, args.tol)
    ok = rep.passed and rep.norm_bound_ok is not False
    return {"residuals": rep.to_dict()}, \
        {"interpolant": args.interpolant, "seq": args.seq, "targets": args.targets}, ok


def cmd_pair(args):
    try:
        f = parse_poly(args.f)
        h = parse_poly(args.h)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    grid = None
    if args.radial_nodes or args.angular_nodes:
        grid = GridSpec(args.radial_nodes or 64, args.angular_nodes or 256, GAUSS_LEGENDRE)
    value = bergman_pairing(f, h, grid)
    out = {"f": args.f, "h": args.h, "value": [value.real, value.imag]}
    ok = True
    fs, hs = poly_support(f), poly_support(h)
    if len(fs) <= 1 and len(hs) <= 1:
        ref = 0.0
        if fs and hs:
            (m, c), (k, d) = fs[0], hs[0]
            ref = c * d.conjugate() * monomial_pairing(m, k)
        ref = complex(ref)
        err = abs(value - ref)
        out.update(reference=[ref.real, ref.imag], abs_error=err, tol=PAIR_TOL)
        ok = err <= PAIR_TOL
    return out, {}, ok


def cmd_sample(args):
    f, _ = load_interpolant(args.interpolant)
    if args.scheme == RADIAL_EXPONENTIAL:
        grid = GridSpec(args.radial_nodes, args.angular_nodes, RADIAL_EXPONENTIAL,
                        args.levels_per_octave)
    else:
        grid = GridSpec(args.radial_nodes, args.angular_nodes, GAUSS_LEGENDRE)
    rows = sample_grid(f, grid)
    lines = ["re,im,abs_f,abs_fprime,weighted_deriv"]
    lines += [",".join(f"{v:.17g}" for v in row) for row in rows]
    _write(args.out, "\n".join(lines) + "\n")
    return {"csv": str(args.out), "rows": int(rows.shape[0]), "grid": grid.to_dict(),
            "max_weighted_deriv": float(rows[:, 4].max())}, {"interpolant": args.interpolant}, True


def build_parser():
    p = argparse.ArgumentParser(prog="bloch-interp", description=__doc__.splitlines()[0])
    p.add_argument("--report", help="write the run report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a point sequence")
    g.add_argument("--kind", default="geometric", choices=["geometric"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--augment-eps", type=float, default=None)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="separation and Blaschke diagnostics")
    a.add_argument("seq")
    a.add_argument("--out", help="write the report here")
    a.set_defaults(func=cmd_analyze)

    i = sub.add_parser("interp", help="build and verify an interpolant")
    i.add_argument("--seq", required=True)
    i.add_argument("--targets", required=True)
    i.add_argument("--space", choices=[BLOCH, HINF], default=BLOCH)
    i.add_argument("--out", required=True)
    i.add_argument("--tol", type=float, default=1e-9)
    i.set_defaults(func=cmd_interp)

    v = sub.add_parser("verify", help="re-check a stored interpolant")
    v.add_argument("--interpolant", required=True)
    v.add_argument("--seq", required=True)
    v.add_argument("--targets", required=True)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--space", choices=[BLOCH, HINF], default=None)
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("pair", help="Bergman pairing of two polynomial literals")
    q.add_argument("f")
    q.add_argument("h")
    q.add_argument("--radial-nodes", type=int, default=None)
    q.add_argument("--angular-nodes", type=int, default=None)
    q.set_defaults(func=cmd_pair)

    s = sub.add_parser("sample", help="dump |f|, |f'| and (1-|z|^2)|f'| on a grid as CSV")
    s.add_argument("--interpolant", required=True)
    s.add_argument("--radial-nodes", type=int, default=49)
    s.add_argument("--angular-nodes", type=int, default=256)
    s.add_argument("--scheme", choices=[RADIAL_EXPONENTIAL, GAUSS_LEGENDRE],
                   default=RADIAL_EXPONENTIAL)
    s.add_argument("--levels-per-octave", type=int, default=4)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sample)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    _kernels.configure_threads()
    t0 = time.perf_counter()
    report = {"command": args.command, "inputs": {}, "outputs": {}, "backend": _kernels.BACKEND}
    code = EXIT_PASS
    try:
        outputs, inputs, ok = args.func(args)
        report["outputs"] = outputs
        report["inputs"] = {k: {"path": str(v), "sha256": _digest(v)} for k, v in inputs.items()}
        report["status"] = "pass" if ok else "fail"
        code = EXIT_PASS if ok else EXIT_FAIL
    except (InputError, ValueError) as exc:
        report.update(status="error", error=str(exc))
        code = EXIT_INPUT
    except (ConditioningError, BlochInterpError, FloatingPointError) as exc:
        report.update(status="error", error=f"{type(exc).__name__}: {exc}")
        code = EXIT_NUMERIC
    if code >= EXIT_INPUT:
        print(f"bloch-interp {args.command}: {report['error']}", file=sys.stderr)
    report["exit_code"] = code
    report["wall_time"] = time.perf_counter() - t0
    text = _dumps(report)
    target = getattr(args, "out", None) if args.command == "analyze" else None
    target = target or args.report
    if target:
        try:
            Path(target).write_text(text)
        except OSError as exc:
            print(f"bloch-interp: cannot write report {target}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
