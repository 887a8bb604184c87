"""Command line front door: JSON in, JSON out, deterministic bytes.

Exit status: 0 success / checks passed, 1 check failure, 2 input error
(bad flags, schema violations, dimension mismatches), 3 numerical failure
(no convergence, saddle gap, empty intersection, ordering violations).
"""

import argparse
import json
import os
import sys

import numpy as np

from . import verify
from .errors import (
    CalculusError,
    EmptyIntersection,
    EnvelopeViolation,
    NoConvergence,
    NotOrdered,
    SaddleGap,
    SchemaError,
)
from .fcalc import (
    fc_semicontinuous_detailed,
    saddle_build,
    saddle_from_json,
    saddle_to_json,
)
from .homog import builtin, eval_family_detailed, function_from_json, map_from_json
from .lattice import RmElement, StepFunction, element_to_json

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

_NUMERICAL = (NoConvergence, SaddleGap, EmptyIntersection, NotOrdered, EnvelopeViolation)
_GENERATED_BUILTINS = ("example-7.1", "example-7.2")


class _InputError(Exception):
    def __init__(self, message):
        super().__init__(message)
        self.message = message


def _parse_vector(text, what="vector"):
    try:
        vals = [float(tok) for tok in str(text).split(",") if tok.strip() != ""]
    except ValueError:
        raise _InputError(f"{what}: expected comma-separated reals, got {text!r}") from None
    if not vals:
        raise _InputError(f"{what}: empty vector")
    return np.array(vals)


def _parse_element(text, kind):
    if kind == "rm":
        return RmElement(_parse_vector(text, "--f"))
    parts = str(text).split("|")
    if len(parts) != 2:
        raise _InputError("--f for step lattice needs 'breakpoints|values', e.g. 0,0.5,1|2,5")
    bp = _parse_vector(parts[0], "--f breakpoints")
    vals = _parse_vector(parts[1], "--f values")
    try:
        return StepFunction(bp, vals)
    except ValueError as exc:
        raise _InputError(f"--f: {exc}") from None


def _read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(path, "$", f"invalid JSON: {exc}") from None


def _load_function(args):
    if getattr(args, "builtin", None) and getattr(args, "family", None):
        raise _InputError("give either --builtin or --family, not both")
    if getattr(args, "builtin", None):
        kwargs = {}
        if getattr(args, "budget", None) is not None:
            if args.budget < 1:
                raise _InputError("--budget must be >= 1")
            if args.builtin in _GENERATED_BUILTINS:
                kwargs["budget"] = args.budget
        return builtin(args.builtin, **kwargs)
    if getattr(args, "family", None):
        return function_from_json(_read_json(args.family), source=args.family)
    raise _InputError("need --builtin NAME or --family FILE")


def _emit(obj, out_path=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("HOMOCALC_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _InputError(f"HOMOCALC_SEED must be an integer, got {env!r}") from None
    return 0


def _cmd_eval(args):
    h = _load_function(args)
    x = _parse_vector(args.x, "--x")
    value, terms = eval_family_detailed(h, x, tol=args.tol)
    _emit({"value": value, "diagnostics": {"family_terms_used": terms}}, args.out)
    return EXIT_OK


def _cmd_fc(args):
    h = _load_function(args)
    if not args.f:
        raise _InputError("need at least one --f element")
    fs = [_parse_element(f, args.lattice) for f in args.f]
    element, diagnostics = fc_semicontinuous_detailed(h, fs, tol=args.tol)
    _emit({"element": element_to_json(element), "diagnostics": diagnostics}, args.out)
    return EXIT_OK


def _cmd_saddle_build(args):
    if not args.family:
        raise _InputError("saddle-build needs --family FILE with {'phis': [...], 'psis': [...]}")
    doc = _read_json(args.family)
    if not isinstance(doc, dict) or "phis" not in doc or "psis" not in doc:
        raise SchemaError(args.family, "$", "expected {'phis': [maps], 'psis': [maps]}")
    if not isinstance(doc["phis"], list) or not isinstance(doc["psis"], list):
        raise SchemaError(args.family, "phis/psis", "expected lists of maps")
    phis = [map_from_json(o, args.family, f"phis[{i}]") for i, o in enumerate(doc["phis"])]
    psis = [map_from_json(o, args.family, f"psis[{j}]") for j, o in enumerate(doc["psis"])]
    S = saddle_build(phis, psis, tol=args.tol)
    _emit(saddle_to_json(S), args.out)
    return EXIT_OK


def _cmd_saddle_eval(args):
    if not args.family:
        raise _InputError("saddle-eval needs --family FILE holding a saddle document")
    S = saddle_from_json(_read_json(args.family), source=args.family)
    x = _parse_vector(args.x, "--x")
    if x.size != S.dim:
        raise _InputError(f"--x has dim {x.size}, saddle has dim {S.dim}")
    M = S.coeffs @ x
    infsup = float(M.max(axis=1).min())
    supinf = float(M.min(axis=0).max())
    _emit({"infsup": infsup, "supinf": supinf}, args.out)
    return EXIT_OK


_CHECKS = {
    "engine-vs-oracle": lambda args, seed: verify.check_engine_vs_oracle(
        args.builtin or "example-7.1", tol=args.tol if args.tol is not None else 1e-6, seed=seed
    ),
    "interchange": lambda args, seed: verify.check_interchange(
        tol=args.tol if args.tol is not None else 1e-12, seed=seed
    ),
    "rep-independence": lambda args, seed: verify.check_rep_independence(
        tol=args.tol if args.tol is not None else 1e-3, seed=seed
    ),
    "continuous-agreement": lambda args, seed: verify.check_continuous_agreement(
        tol=args.tol if args.tol is not None else 1e-6, seed=seed
    ),
    "sublattice-invariance": lambda args, seed: verify.check_sublattice_invariance(seed=seed),
    "saddle": lambda args, seed: verify.check_saddle(
        tol=args.tol if args.tol is not None else 1e-9, seed=seed
    ),
    "negative-controls": lambda args, seed: verify.negative_controls(seed=seed),
}


def _cmd_check(args):
    runner = _CHECKS.get(args.name)
    if runner is None:
        raise _InputError(f"unknown check {args.name!r}; known: {', '.join(sorted(_CHECKS))}")
    report = runner(args, _seed(args))
    _emit(report.to_json(), args.out)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _cmd_suite(args):
    reports = verify.default_suite(seed=_seed(args))
    passed = all(r.passed for r in reports)
    _emit({"passed": passed, "reports": [r.to_json() for r in reports]}, args.out)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def _add_common(p, tol_default):
    p.add_argument("--tol", type=float, default=tol_default, help="tolerance override")
    p.add_argument("--seed", type=int, default=None, help="seed (default: $HOMOCALC_SEED or 0)")
    p.add_argument("--out", default=None, help="also write the JSON output to this file")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="homocalc",
        description="Functional calculus of positively homogeneous functions on vector lattices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a PH function at a point")
    p.add_argument("--builtin", default=None)
    p.add_argument("--family", default=None, help="JSON file with a family document")
    p.add_argument("--x", required=True, help="point, comma-separated")
    p.add_argument("--budget", type=int, default=None, help="generated-family budget")
    _add_common(p, 1e-9)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("fc", help="lift a PH function over lattice elements")
    p.add_argument("--builtin", default=None)
    p.add_argument("--family", default=None)
    p.add_argument("--f", action="append", default=[], help="lattice element (repeat per argument)")
    p.add_argument("--lattice", choices=("rm", "step"), default="rm")
    p.add_argument("--budget", type=int, default=None)
    _add_common(p, 1e-9)
    p.set_defaults(func=_cmd_fc)

    p = sub.add_parser("saddle-build", help="build saddle coefficients from map families")
    p.add_argument("--family", default=None, help="JSON file: {'phis': [maps], 'psis': [maps]}")
    _add_common(p, 1e-9)
    p.set_defaults(func=_cmd_saddle_build)

    p = sub.add_parser("saddle-eval", help="evaluate a saddle document at a point")
    p.add_argument("--family", default=None, help="JSON file holding a saddle document")
    p.add_argument("--x", required=True)
    _add_common(p, 1e-9)
    p.set_defaults(func=_cmd_saddle_eval)

    p = sub.add_parser("check", help="run one verification check")
    p.add_argument("name", choices=sorted(_CHECKS))
    p.add_argument("--builtin", default=None, help="builtin for engine-vs-oracle")
    _add_common(p, None)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("suite", help="run the full verification suite")
    _add_common(p, None)
    p.set_defaults(func=_cmd_suite)

    return parser


def _fail(code, operation, message):
    sys.stderr.write(
        json.dumps({"error": {"operation": operation, "message": message}}, sort_keys=True) + "\n"
    )
    return code


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        return _fail(EXIT_INPUT, args.command, exc.message)
    except SchemaError as exc:
        return _fail(EXIT_INPUT, "load", exc.message)
    except _NUMERICAL as exc:
        return _fail(EXIT_NUMERICAL, exc.operation, exc.message)
    except CalculusError as exc:
        return _fail(EXIT_INPUT, exc.operation, exc.message)
    except ValueError as exc:
        return _fail(EXIT_INPUT, args.command, str(exc))


if __name__ == "__main__":
    sys.exit(main())
