"""JSON codecs.  Complex numbers are always ``[re, im]`` pairs."""
from __future__ import annotations

import math

import numpy as np

from .blaschke import PLAIN, FiniteBlaschke
from .errors import BasisMismatchError, DimensionMismatchError
from .model_space import (
    EXAMPLE3,
    MONOMIAL,
    ORTHONORMAL,
    KernelBasis,
    example3_basis,
    monomial_basis,
    orthonormal_basis,
)
from .operators import KERNEL, OperatorMatrix, SymbolSpec


def pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def unpair(p) -> complex:
    if isinstance(p, (int, float)):
        return complex(p)
    if not (isinstance(p, (list, tuple)) and len(p) == 2):
        raise DimensionMismatchError(f"expected a [re, im] pair, got {p!r}")
    re, im = (float(x) for x in p)
    if not (math.isfinite(re) and math.isfinite(im)):
        raise DimensionMismatchError(f"non-finite complex pair {p!r}")
    return complex(re, im)


def matrix_to_json(M) -> list:
    return [[pair(x) for x in row] for row in np.asarray(M)]


def matrix_from_json(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise DimensionMismatchError("entries must be a nonempty list of rows")
    return np.array([[unpair(x) for x in row] for row in rows], dtype=complex)


def blaschke_to_json(B: FiniteBlaschke) -> dict:
    return {"zeros": [pair(a) for a in B.zeros], "gamma": B.gamma, "mode": B.mode}


def blaschke_from_json(d: dict) -> FiniteBlaschke:
    return FiniteBlaschke.from_gamma(
        [unpair(a) for a in d["zeros"]], float(d.get("gamma", 0.0)), d.get("mode", PLAIN)
    )


def basis_to_json(basis) -> dict:
    tag = KERNEL if isinstance(basis, KernelBasis) else basis.tag
    return {"blaschke": blaschke_to_json(basis.blaschke), "basis": tag}


def basis_from_json(d: dict):
    B = blaschke_from_json(d["blaschke"])
    tag = d.get("basis", KERNEL)
    if tag == KERNEL:
        return KernelBasis(B)
    if tag == MONOMIAL:
        if any(a != 0 for a in B.zeros):
            raise BasisMismatchError("the monomial basis belongs to z^N (all zeros at 0)")
        return monomial_basis(B.degree)
    if tag == EXAMPLE3:
        nonzero = [a for a in B.zeros if a != 0]
        if B.degree != 3 or len(nonzero) != 1:
            raise BasisMismatchError("the degree-3 example has zeros {0, 0, w} with w != 0")
        return example3_basis(nonzero[0])
    if tag == ORTHONORMAL:
        return orthonormal_basis(B)
    raise BasisMismatchError(f"unknown basis tag {tag!r}")


def operator_to_json(A: OperatorMatrix) -> dict:
    return {"basis": basis_to_json(A.basis), "entries": matrix_to_json(A.entries)}


def operator_from_json(d: dict) -> OperatorMatrix:
    return OperatorMatrix(matrix_from_json(d["entries"]), basis_from_json(d["basis"]))


def symbol_to_json(s: SymbolSpec) -> dict:
    if s.trig is not None:
        return {"trig": {str(k): pair(v) for k, v in sorted(s.trig.items())}}
    out = {}
    if s.psi is not None:
        out["psi"] = [pair(x) for x in s.psi]
    if s.chi is not None:
        out["chi"] = [pair(x) for x in s.chi]
    return out


def symbol_from_json(d: dict) -> SymbolSpec:
    if "trig" in d:
        return SymbolSpec(trig={int(k): unpair(v) for k, v in d["trig"].items()})
    psi = [unpair(x) for x in d["psi"]] if "psi" in d else None
    chi = [unpair(x) for x in d["chi"]] if "chi" in d else None
    return SymbolSpec(psi=psi, chi=chi)
