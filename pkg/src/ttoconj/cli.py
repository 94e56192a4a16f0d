"""Command-line front end.

Exit codes:
    0  pass
    1  fail / negative verdict
    2  invalid input (a JSON error object is printed)
    3  inconclusive (residual inside the hysteresis band)
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import harness
from .blaschke import value_and_derivative
from .errors import TTOError
from .operators import c_symmetry_residual, compress_to, tto_residual
from .serialize import (
    blaschke_from_json,
    operator_from_json,
    operator_to_json,
    pair,
    unpair,
)

EXIT = {harness.PASS: 0, harness.FAIL: 1, harness.INCONCLUSIVE: 3}
INVALID = 2


class InvalidInput(Exception):
    pass


def _load(source: str) -> dict:
    try:
        if source == "-":
            text = sys.stdin.read()
        elif source.lstrip().startswith("{"):
            text = source
        else:
            text = Path(source).read_text()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read JSON from {source!r}: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidInput("top-level JSON value must be an object")
    return data


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(text.replace("i", "j"))
    return complex(float(parts[0]), float(parts[1]))


def _band(residual: float, tol: float, tol_fail: float) -> str:
    if residual <= tol:
        return harness.PASS
    if residual >= tol_fail:
        return harness.FAIL
    return harness.INCONCLUSIVE


def cmd_eval(args) -> dict:
    data = _load(args.input)
    B = blaschke_from_json(data["blaschke"])
    z = np.array([unpair(p) for p in data["z"]], dtype=complex)
    v, d = value_and_derivative(B, z)
    return {
        "values": [pair(x) for x in np.atleast_1d(v)],
        "derivatives": [pair(x) for x in np.atleast_1d(d)],
        "verdict": harness.PASS,
    }


def cmd_check(args, which: str) -> dict:
    A = operator_from_json(_load(args.input))
    if which == "c_symmetry":
        r = c_symmetry_residual(A)
    else:
        r = tto_residual(A, args.anchor)
    return {
        "check": which,
        "basis": A.basis_tag,
        "degree": A.N,
        "residual": r,
        "tolerance": args.tol,
        "tolerance_fail": args.tol_fail,
        "verdict": _band(r, args.tol, args.tol_fail),
    }


def cmd_compress(args) -> dict:
    A = operator_from_json(_load(args.input))
    n = args.degree if args.degree is not None else A.N - 1
    out = operator_to_json(compress_to(A, n))
    out["verdict"] = harness.PASS
    return out


def _config(args) -> harness.TrialConfig:
    kw = {"seed": args.seed, "trials": args.trials, "tolerance_pass": args.tol,
          "tolerance_fail": args.tol_fail, "workers": args.workers}
    if args.degree_range:
        kw["degree_range"] = tuple(args.degree_range)
    if args.cap is not None:
        kw["zero_modulus_cap"] = args.cap
    return harness.TrialConfig(**kw)


def cmd_verify(args) -> dict:
    cfg = _config(args)
    name = args.name
    kw = {}
    if name in ("zn", "single_zero", "finite_blaschke") and args.degree is not None:
        kw["degree"] = args.degree
    elif name == "toeplitz_h2" and args.degree is not None:
        kw["size"] = args.degree
    elif name == "infinite_blaschke" and args.degree is not None:
        kw["order"] = args.degree
    if name == "single_zero" and args.a is not None:
        kw["a"] = _complex_arg(args.a)
    if name == "example3" and args.w is not None:
        kw["w"] = _complex_arg(args.w)
    return harness.VERIFIERS[name](cfg, **kw).to_dict()


def cmd_generate(args) -> dict:
    cfg = _config(args)
    A = harness.gen_instance(args.kind, cfg, 0, args.degree)
    out = operator_to_json(A)
    out["kind"] = args.kind
    out["seed"] = args.seed
    out["verdict"] = harness.PASS
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ttoconj", description="Truncated Toeplitz operators and conjugations")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tol=True):
        sp.add_argument("--out", help="also write the JSON result to this file")
        if tol:
            sp.add_argument("--tol", type=float, default=1e-8)
            sp.add_argument("--tol-fail", type=float, default=1e-4)

    sp = sub.add_parser("eval", help="evaluate a Blaschke product and its derivative")
    sp.add_argument("input", help="JSON file, inline JSON, or - for stdin")
    common(sp, tol=False)

    for name in ("check-csym", "check-tto"):
        sp = sub.add_parser(name, help=f"{name.split('-')[1]} check of an operator matrix")
        sp.add_argument("input")
        sp.add_argument("--anchor", type=int, default=0, help="anchor row for the TTO criterion")
        common(sp)

    sp = sub.add_parser("compress", help="compress an operator to a leading sub-model-space")
    sp.add_argument("input")
    sp.add_argument("--degree", type=int)
    common(sp, tol=False)

    for name, choices in (("verify", sorted(harness.VERIFIERS)), ("generate", None)):
        sp = sub.add_parser(name)
        if choices:
            sp.add_argument("--name", required=True, choices=choices)
            sp.add_argument("--a", help="single zero, 're,im'")
            sp.add_argument("--w", help="degree-3 example parameter, 're,im'")
        else:
            sp.add_argument("--kind", required=True,
                            choices=["tto", "chain_csym", "top_csym_only", "toeplitz", "perturbed"])
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=20)
        sp.add_argument("--degree", type=int)
        sp.add_argument("--degree-range", type=int, nargs=2, metavar=("MIN", "MAX"))
        sp.add_argument("--cap", type=float, help="zero modulus cap (<= 0.9)")
        sp.add_argument("--workers", type=int, default=1)
        common(sp)
    return p


def _validate(args):
    tol = getattr(args, "tol", None)
    if tol is not None and not tol > 0:
        raise InvalidInput("--tol must be positive")
    if tol is not None and not args.tol_fail > tol:
        raise InvalidInput("--tol-fail must exceed --tol")
    if getattr(args, "trials", 1) < 1:
        raise InvalidInput("--trials must be at least 1")


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            return 0
        print(json.dumps({"error": {"type": "usage", "message": "invalid command line"}}))
        return INVALID
    handlers = {
        "eval": cmd_eval,
        "check-csym": lambda a: cmd_check(a, "c_symmetry"),
        "check-tto": lambda a: cmd_check(a, "tto"),
        "compress": cmd_compress,
        "verify": cmd_verify,
        "generate": cmd_generate,
    }
    try:
        _validate(args)
        result = handlers[args.command](args)
    except (InvalidInput, TTOError, KeyError, TypeError, ValueError) as exc:
        kind = type(exc).__name__
        msg = str(exc) if not isinstance(exc, KeyError) else f"missing field {exc}"
        print(json.dumps({"error": {"type": kind, "message": msg}}))
        return INVALID
    text = json.dumps(result, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    sys.stdout.write(text + "\n")
    return EXIT[result["verdict"]]


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
