"""Finite Blaschke products, partial products and zero-set separation.

A finite Blaschke product is stored as its ordered zero list together with a
unimodular front constant.  Two normalisations are supported:

``plain``
    ``B(z) = c * prod (z - a_j) / (1 - conj(a_j) z)``
``normalized``
    ``B(z) = c * prod (conj(a_j)/|a_j|) (a_j - z) / (1 - conj(a_j) z)``,
    where a zero at the origin contributes the factor ``z``.

Every evaluation routine accepts scalars or numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    DomainError,
    DuplicateZerosError,
    EmptySubsetError,
    IndexOutOfRangeError,
    PoleProximityError,
)

#: zeros closer than this to the unit circle are rejected
MODULUS_CEILING = 1.0 - 1e-12
#: evaluation points may sit this far outside the closed disk
CIRCLE_SLACK = 1e-12
POLE_FLOOR = 1e-13
DISTINCT_FLOOR = 1e-10

PLAIN = "plain"
NORMALIZED = "normalized"


def as_disk_point(value) -> complex:
    """Coerce ``value`` to a complex number strictly inside the unit disk."""
    a = complex(value)
    if not (math.isfinite(a.real) and math.isfinite(a.imag)):
        raise DomainError(f"non-finite point {value!r}")
    if abs(a) >= MODULUS_CEILING:
        raise DomainError(f"|{a}| = {abs(a)} is not below {MODULUS_CEILING}")
    return a


def _unit_factor(a: complex) -> complex:
    """The factor ``-conj(a)/|a|`` turning a plain factor into a normalized one."""
    if a == 0:
        return 1.0 + 0j
    return -a.conjugate() / abs(a)


@dataclass(frozen=True)
class FiniteBlaschke:
    zeros: tuple[complex, ...]
    front_constant: complex = 1.0 + 0j
    mode: str = PLAIN

    def __post_init__(self):
        zeros = tuple(as_disk_point(a) for a in self.zeros)
        if not zeros:
            raise EmptySubsetError("a Blaschke product needs at least one zero")
        c = complex(self.front_constant)
        if abs(abs(c) - 1.0) > 1e-14:
            raise DomainError(f"front constant {c} is not unimodular")
        if self.mode not in (PLAIN, NORMALIZED):
            raise ValueError(f"unknown normalization mode {self.mode!r}")
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "front_constant", c)

    @classmethod
    def from_gamma(cls, zeros: Iterable, gamma: float = 0.0, mode: str = PLAIN):
        return cls(tuple(zeros), complex(np.exp(1j * gamma)), mode)

    @classmethod
    def monomial(cls, n: int) -> "FiniteBlaschke":
        """``z**n``."""
        if n < 1:
            raise EmptySubsetError("degree must be positive")
        return cls((0j,) * n)

    @classmethod
    def single_zero_power(cls, a, n: int) -> "FiniteBlaschke":
        """``b_a(z)**n`` with ``b_a(z) = (z - a)/(1 - conj(a) z)``."""
        if n < 1:
            raise EmptySubsetError("degree must be positive")
        return cls((complex(a),) * n)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    @property
    def gamma(self) -> float:
        return math.atan2(self.front_constant.imag, self.front_constant.real)

    @property
    def constant(self) -> complex:
        """Total unimodular constant multiplying the plain product."""
        c = self.front_constant
        if self.mode == NORMALIZED:
            for a in self.zeros:
                c *= _unit_factor(a)
        return c

    def has_distinct_zeros(self, floor: float = DISTINCT_FLOOR) -> bool:
        z = np.asarray(self.zeros)
        if len(z) < 2:
            return True
        d = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(d, np.inf)
        return bool(d.min() > floor)

    def __call__(self, z):
        return evaluate(self, z)


def _check_args(B: FiniteBlaschke, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 + CIRCLE_SLACK):
        raise DomainError("evaluation point outside the closed unit disk")
    a = np.asarray(B.zeros)
    den = 1.0 - np.conj(a)[:, None] * z.reshape(-1)[None, :]
    if np.any(np.abs(den) < POLE_FLOOR):
        raise PoleProximityError("evaluation point is (nearly) a pole")
    return z


def _value_and_derivative(B: FiniteBlaschke, z, want_derivative: bool):
    z = _check_args(B, z)
    value = np.ones_like(z)
    deriv = np.zeros_like(z)
    for a in B.zeros:
        den = 1.0 - a.conjugate() * z
        factor = (z - a) / den
        if want_derivative:
            # product rule: (B f)' = B' f + B f'
            deriv = deriv * factor + value * (1.0 - abs(a) ** 2) / den**2
        value = value * factor
    c = B.constant
    value = c * value
    deriv = c * deriv
    if value.ndim == 0:
        return complex(value), complex(deriv)
    return value, deriv


def evaluate(B: FiniteBlaschke, z):
    """Value of ``B`` at ``z`` (scalar or array)."""
    return _value_and_derivative(B, z, False)[0]


def derivative(B: FiniteBlaschke, z):
    """Analytic derivative ``B'(z)`` built up factor by factor."""
    return _value_and_derivative(B, z, True)[1]


def value_and_derivative(B: FiniteBlaschke, z):
    return _value_and_derivative(B, z, True)


@dataclass(frozen=True)
class InfiniteBlaschkeSpec:
    """A zero sequence known through a rule or an explicit prefix.

    Only the first ``truncation_order`` zeros are ever materialized.
    """

    zero_sequence: Callable[[int], complex] | Sequence[complex]
    truncation_order: int
    gamma: float = 0.0
    _prefix: tuple[complex, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.truncation_order < 1:
            raise IndexOutOfRangeError("truncation order must be positive")
        seq = self.zero_sequence
        if callable(seq):
            # rule is 1-based, matching the usual a_1, a_2, ... labelling
            prefix = tuple(as_disk_point(seq(j)) for j in range(1, self.truncation_order + 1))
        else:
            if len(seq) < self.truncation_order:
                raise IndexOutOfRangeError(
                    f"only {len(seq)} zeros given, truncation order {self.truncation_order}"
                )
            prefix = tuple(as_disk_point(a) for a in seq[: self.truncation_order])
        object.__setattr__(self, "_prefix", prefix)

    @property
    def zeros(self) -> tuple[complex, ...]:
        return self._prefix

    def blaschke_sum(self) -> float:
        return float(sum(1.0 - abs(a) for a in self._prefix))

    def truncation(self) -> FiniteBlaschke:
        """The normalized product over the stored prefix."""
        return FiniteBlaschke.from_gamma(self._prefix, self.gamma, NORMALIZED)


def geometric_zeros(j: int) -> complex:
    """``a_j = 1 - 2**-j``; uniformly separated, accumulating at 1."""
    return complex(1.0 - 2.0**-j)


def partial_product(spec: InfiniteBlaschkeSpec | FiniteBlaschke, n: int):
    """Return ``(B_n, lambda_n)``.

    ``B_n`` is the plain product over the first ``n`` zeros, and
    ``lambda_n = (-1)**n prod conj(a_j)/|a_j|`` (a zero at the origin counts
    as ``-1``) so that ``lambda_n * B_n`` is the normalized partial product.
    """
    zeros = spec.zeros
    if not 1 <= n <= len(zeros):
        raise IndexOutOfRangeError(f"n={n} outside 1..{len(zeros)}")
    lam = 1.0 + 0j
    for a in zeros[:n]:
        lam *= _unit_factor(a)
    return FiniteBlaschke(tuple(zeros[:n])), lam


def divisor(B: FiniteBlaschke, subset: Iterable[int]) -> FiniteBlaschke:
    """Blaschke product over the zeros indexed (0-based) by ``subset``.

    The result keeps the normalization mode of ``B`` and has front constant 1,
    so ``B / divisor(B, S)`` is inner.
    """
    idx = sorted(set(int(i) for i in subset))
    if not idx:
        raise EmptySubsetError("divisor needs a nonempty index set")
    if idx[0] < 0 or idx[-1] >= B.degree:
        raise IndexOutOfRangeError(f"indices {idx} outside 0..{B.degree - 1}")
    if len(idx) == B.degree:
        return B
    return FiniteBlaschke(tuple(B.zeros[i] for i in idx), 1.0 + 0j, B.mode)


def pseudo_hyperbolic(a: complex, b: complex) -> float:
    return abs((a - b) / (1.0 - a.conjugate() * b))


def separation_delta(zeros: Sequence[complex]) -> float:
    """``min_n prod_{j != n} |(a_j - a_n)/(1 - conj(a_j) a_n)|`` over a finite list."""
    z = np.asarray([complex(a) for a in zeros])
    if len(z) < 2:
        raise IndexOutOfRangeError("separation needs at least two zeros")
    diff = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(diff, np.inf)
    if diff.min() <= DISTINCT_FLOOR:
        raise DuplicateZerosError("zero sequence has coinciding points")
    rho = diff / np.abs(1.0 - np.conj(z)[:, None] * z[None, :])
    np.fill_diagonal(rho, 1.0)
    # log-sum avoids underflow for long prefixes
    return float(np.exp(np.log(rho).sum(axis=0).min()))
