"""Model spaces ``K_B = H^2 minus B H^2`` in coordinates.

Two kinds of coordinates are used:

* the reproducing kernels ``k_j(z) = 1/(1 - conj(a_j) z)`` at distinct zeros
  (:class:`KernelBasis`, non-orthonormal), and
* orthonormal bases sampled on the circle (:class:`OrthonormalBasis`), used
  for repeated zeros such as ``z**N``, ``b_a**N`` and the degree-3 example
  ``z**2 (w - z)/(1 - conj(w) z)``.

All inner products on the circle are computed with the equispaced rule
``<f, g> = mean(f * conj(g))``, which is exact for trigonometric polynomials
of degree below ``M/2`` and geometrically accurate for rational functions
with poles outside the disk.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .blaschke import (
    DISTINCT_FLOOR,
    FiniteBlaschke,
    derivative,
    evaluate,
    partial_product,
    value_and_derivative,
)
from .errors import (
    DuplicateZerosError,
    GridMismatchError,
    IllConditionedGramError,
    IndexOutOfRangeError,
    NotInModelSpaceError,
)

DEFAULT_GRID = 4096
MIN_ORACLE_GRID = 256
COND_LIMIT = 1e12


def unit_grid(M: int = DEFAULT_GRID) -> np.ndarray:
    if M < 2 or M & (M - 1):
        raise GridMismatchError(f"grid size {M} is not a power of two")
    return np.exp(2j * np.pi * np.arange(M) / M)


@dataclass(frozen=True, eq=False)
class FunctionSamples:
    """Values of a function on the grid ``exp(2 pi i t / M)``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).reshape(-1)
        M = v.size
        if M < 2 or M & (M - 1):
            raise GridMismatchError(f"grid size {M} is not a power of two")
        object.__setattr__(self, "values", v)

    @classmethod
    def of(cls, func, M: int = DEFAULT_GRID) -> "FunctionSamples":
        return cls(func(unit_grid(M)))

    @property
    def M(self) -> int:
        return self.values.size

    @property
    def points(self) -> np.ndarray:
        return unit_grid(self.M)

    def __add__(self, other):
        _same_grid(self, other)
        return FunctionSamples(self.values + other.values)

    def __sub__(self, other):
        _same_grid(self, other)
        return FunctionSamples(self.values - other.values)

    def __mul__(self, scalar):
        return FunctionSamples(self.values * scalar)

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.sqrt(quadrature_inner(self, self).real))


def _same_grid(f: FunctionSamples, g: FunctionSamples):
    if f.M != g.M:
        raise GridMismatchError(f"grid sizes differ: {f.M} vs {g.M}")


def quadrature_inner(f: FunctionSamples, g: FunctionSamples) -> complex:
    """``<f, g>`` in ``L^2(T, m)`` by the equispaced rule."""
    _same_grid(f, g)
    return complex(np.mean(f.values * np.conj(g.values)))


def conj_apply(theta, f: FunctionSamples) -> FunctionSamples:
    """Apply ``C_theta f = theta * conj(z f)`` pointwise on the grid.

    ``theta`` may be a :class:`FiniteBlaschke`, anything carrying a
    ``blaschke`` attribute, or a callable.
    """
    theta = getattr(theta, "blaschke", theta)
    z = f.points
    return FunctionSamples(theta(z) * np.conj(z * f.values))


def check_conditioning(G: np.ndarray, limit: float = COND_LIMIT) -> float:
    cond = float(np.linalg.cond(G))
    if not np.isfinite(cond) or cond > limit:
        raise IllConditionedGramError(f"Gram condition number {cond:.3e} exceeds {limit:.0e}")
    return cond


# -- kernel coordinates ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KernelBasis:
    """Kernels ``k_1..k_N`` at the distinct zeros of a finite Blaschke product.

    ``gram[i, j] = <k_j, k_i> = 1/(1 - conj(a_j) a_i)`` and
    ``bprime[j] = B'(a_j)``.  Sub-products ``B_n`` over the leading zeros are
    always taken in plain form; unimodular constants never affect the
    coordinates or the symmetry tests.
    """

    blaschke: FiniteBlaschke
    _subs: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if not self.blaschke.has_distinct_zeros(DISTINCT_FLOOR):
            raise DuplicateZerosError("kernel bases need pairwise distinct zeros")

    @property
    def zeros(self) -> np.ndarray:
        return np.asarray(self.blaschke.zeros)

    @property
    def N(self) -> int:
        return self.blaschke.degree

    @cached_property
    def gram(self) -> np.ndarray:
        a = self.zeros
        return 1.0 / (1.0 - np.conj(a)[None, :] * a[:, None])

    @cached_property
    def bprime(self) -> np.ndarray:
        return derivative(self.blaschke, self.zeros)

    def sub(self, n: int) -> "KernelBasis":
        """Basis of ``K_{B_n}``, with ``B_n`` the plain product of the first n zeros."""
        if n == self.N and self.blaschke.constant == 1:
            return self
        if n not in self._subs:
            self._subs[n] = KernelBasis(partial_product(self.blaschke, n)[0])
        return self._subs[n]

    def kernel_values(self, z) -> np.ndarray:
        """Matrix ``K[t, j] = k_j(z_t)``."""
        z = np.asarray(z, dtype=complex).reshape(-1)
        return 1.0 / (1.0 - np.conj(self.zeros)[None, :] * z[:, None])

    def kernel(self, j: int, M: int = DEFAULT_GRID) -> FunctionSamples:
        a = self.zeros[j]
        return FunctionSamples.of(lambda z: 1.0 / (1.0 - np.conj(a) * z), M)

    def conj_kernel(self, j: int, M: int = DEFAULT_GRID) -> FunctionSamples:
        """``C_B k_j = B(z)/(z - a_j)`` sampled directly from the closed form."""
        a = self.zeros[j]
        B = self.blaschke
        return FunctionSamples.of(lambda z: evaluate(B, z) / (z - a), M)

    def synthesize(self, coeffs, M: int = DEFAULT_GRID) -> FunctionSamples:
        return FunctionSamples(self.kernel_values(unit_grid(M)) @ np.asarray(coeffs, dtype=complex))

    def evaluate_combination(self, coeffs, z) -> np.ndarray:
        return self.kernel_values(z) @ np.asarray(coeffs, dtype=complex)


def gram(basis: KernelBasis) -> np.ndarray:
    return basis.gram.copy()


def conj_pairing(basis: KernelBasis, n: int, j: int, m: int) -> complex:
    """``<C_n k_j, k_m>`` for the sub-product ``B_n`` (0-based ``j < n``)."""
    N = basis.N
    if not (1 <= n <= N and 0 <= j < n and 0 <= m < N):
        raise IndexOutOfRangeError(f"need 0 <= j < n <= N={N} and 0 <= m < N (j={j}, n={n}, m={m})")
    Bn = partial_product(basis.blaschke, n)[0]
    a = basis.zeros
    if m < n:
        return complex(derivative(Bn, a[j])) if m == j else 0j
    return complex(evaluate(Bn, a[m]) / (a[m] - a[j]))


def project_kernel(basis: KernelBasis, n: int, m: int) -> np.ndarray:
    """Coordinates of ``P_n k_m`` in ``k_1..k_n`` for ``m >= n`` (0-based)."""
    N = basis.N
    if not (1 <= n < N and n <= m < N):
        raise IndexOutOfRangeError(f"need 1 <= n <= m < N={N} (n={n}, m={m})")
    Bn = partial_product(basis.blaschke, n)[0]
    a = basis.zeros
    dBn = derivative(Bn, a[:n])
    return np.conj(evaluate(Bn, a[m])) / (np.conj(dBn) * (np.conj(a[m]) - np.conj(a[:n])))


def expand(basis: KernelBasis, f: FunctionSamples, tol: float = 1e-8) -> np.ndarray:
    """Kernel coordinates ``c_j = <f, C_B k_j> / conj(B'(a_j))``.

    Raises :class:`NotInModelSpaceError` when re-synthesis misses ``f`` by
    more than ``tol`` (relative to ``max(1, ||f||)``).
    """
    c = np.array(
        [quadrature_inner(f, basis.conj_kernel(j, f.M)) for j in range(basis.N)]
    ) / np.conj(basis.bprime)
    miss = (f - basis.synthesize(c, f.M)).norm()
    if miss > tol * max(1.0, f.norm()):
        raise NotInModelSpaceError(f"re-synthesis residual {miss:.3e} exceeds {tol:.1e}")
    return c


def ratio_identities(basis: KernelBasis, n: int) -> tuple[float, float]:
    """Residuals of the two ratio identities linking ``B_{n-1}`` and ``B_n``.

    Returns ``(r3, r4)`` with
    ``r3 = |B_{n-1}(a_n)/B_n'(a_n) - (1 - |a_n|^2)|`` and
    ``r4 = max_j |B'_{n-1}(a_j)/B_n'(a_j) - (1 - conj(a_n) a_j)/(a_j - a_n)|``.
    Here ``n`` is 1-based, so ``a_n`` is ``basis.zeros[n - 1]``.
    """
    if not 2 <= n <= basis.N:
        raise IndexOutOfRangeError(f"n={n} outside 2..{basis.N}")
    a = basis.zeros
    prev = partial_product(basis.blaschke, n - 1)[0]
    cur = partial_product(basis.blaschke, n)[0]
    an = a[n - 1]
    pv, pd = value_and_derivative(prev, a[:n])
    cd = derivative(cur, a[:n])
    r3 = abs(pv[n - 1] / cd[n - 1] - (1.0 - abs(an) ** 2))
    aj = a[: n - 1]
    r4 = np.abs(pd[: n - 1] / cd[: n - 1] - (1.0 - np.conj(an) * aj) / (aj - an))
    return float(r3), float(r4.max())


def general_kernel(B: FiniteBlaschke, w, M: int = DEFAULT_GRID) -> FunctionSamples:
    """``k^B_w(z) = (1 - conj(B(w)) B(z)) / (1 - conj(w) z)`` on the grid."""
    w = complex(w)
    Bw = complex(evaluate(B, w))
    return FunctionSamples.of(lambda z: (1.0 - np.conj(Bw) * evaluate(B, z)) / (1.0 - np.conj(w) * z), M)


def kernel_norm_sq(B: FiniteBlaschke, w) -> float:
    w = complex(w)
    return (1.0 - abs(complex(evaluate(B, w))) ** 2) / (1.0 - abs(w) ** 2)


# -- orthonormal coordinates -------------------------------------------------

MONOMIAL = "monomial"
EXAMPLE3 = "example3"
ORTHONORMAL = "orthonormal"


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Orthonormal basis ``e_0..e_{N-1}`` of ``K_B`` given by grid samples.

    ``functions`` has shape ``(N, M)``.  The tag records how it was built:
    ``monomial`` for ``{1, z, ..., z^{N-1}}`` in ``K_{z^N}``, ``example3`` for
    ``{1, z, z^2 k_w/||k_w||}``, ``orthonormal`` for Gram-Schmidt bases.
    """

    blaschke: FiniteBlaschke
    functions: np.ndarray
    tag: str = ORTHONORMAL
    w: complex | None = None

    @property
    def N(self) -> int:
        return self.functions.shape[0]

    @property
    def M(self) -> int:
        return self.functions.shape[1]

    def element(self, k: int) -> FunctionSamples:
        return FunctionSamples(self.functions[k])

    def synthesize(self, coeffs) -> FunctionSamples:
        return FunctionSamples(np.asarray(coeffs, dtype=complex) @ self.functions)

    def coordinates(self, f: FunctionSamples) -> np.ndarray:
        if f.M != self.M:
            raise GridMismatchError(f"grid sizes differ: {f.M} vs {self.M}")
        return np.conj(self.functions) @ f.values / self.M

    @cached_property
    def conjugation(self) -> np.ndarray:
        """``J[k, j] = <C_B e_j, e_k>``; ``C_B`` acts as ``x -> J conj(x)``."""
        if self.tag == MONOMIAL:
            return np.eye(self.N)[::-1].astype(complex)
        z = unit_grid(self.M)
        Ce = self.blaschke(z)[None, :] * np.conj(z[None, :] * self.functions)
        return (np.conj(self.functions) @ Ce.T) / self.M


def monomial_basis(N: int, M: int = DEFAULT_GRID) -> OrthonormalBasis:
    z = unit_grid(M)
    return OrthonormalBasis(FiniteBlaschke.monomial(N), z[None, :] ** np.arange(N)[:, None], MONOMIAL)


def example3_blaschke(w) -> FiniteBlaschke:
    """``z**2 (w - z)/(1 - conj(w) z) = -z**2 b_w(z)``."""
    return FiniteBlaschke((0j, 0j, complex(w)), -1.0 + 0j)


def example3_basis(w, M: int = DEFAULT_GRID) -> OrthonormalBasis:
    """``{1, z, z^2 k_w / ||k_w||}`` for ``K_B``, ``B = z^2 (w - z)/(1 - conj(w) z)``."""
    w = complex(w)
    if w == 0:
        raise ValueError("the degree-3 example needs w != 0")
    z = unit_grid(M)
    knorm = 1.0 / np.sqrt(1.0 - abs(w) ** 2)
    e3 = z**2 / (1.0 - np.conj(w) * z) / knorm
    return OrthonormalBasis(example3_blaschke(w), np.vstack([np.ones(M), z, e3]), EXAMPLE3, w)


def orthonormal_basis(B: FiniteBlaschke, M: int = DEFAULT_GRID) -> OrthonormalBasis:
    """Nested orthonormal basis of ``K_B`` for any zero multiplicities.

    Gram-Schmidt (by quadrature) of ``z^k / prod_{j<=k} (1 - conj(a_j) z)``,
    ``k = 0..N-1``; the first ``n`` elements span ``K_{B_n}`` for every ``n``.
    """
    z = unit_grid(M)
    a = np.asarray(B.zeros)
    raw = []
    den = np.ones(M, dtype=complex)
    for k in range(B.degree):
        den = den * (1.0 - np.conj(a[k]) * z)
        raw.append(z**k / den)
    out = []
    for f in raw:
        for e in out:
            f = f - np.mean(f * np.conj(e)) * e
        out.append(f / np.sqrt(np.mean(np.abs(f) ** 2)))
    return OrthonormalBasis(B, np.vstack(out))
