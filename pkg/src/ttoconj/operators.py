"""Operator matrices on model spaces.

Matrices follow the column convention ``A k_j = sum_m b[m, j] k_m``: column
``j`` holds the coordinates of the image of the ``j``-th basis vector.  In
kernel coordinates the basis is non-orthonormal, so adjoints and symmetry
tests go through the Gram matrix and the derivative values ``B'(a_j)``.

Residuals are scale-free: each is divided by ``max(1, max |entry|)`` of the
quantities being compared.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .blaschke import FiniteBlaschke, as_disk_point, derivative, evaluate, partial_product
from .errors import (
    BasisMismatchError,
    DimensionMismatchError,
    IndexOutOfRangeError,
    NotTTOError,
)
from .model_space import (
    DEFAULT_GRID,
    EXAMPLE3,
    MONOMIAL,
    FunctionSamples,
    KernelBasis,
    OrthonormalBasis,
    check_conditioning,
    orthonormal_basis,
    unit_grid,
)

KERNEL = "kernel"
#: kernel bases with a zero beyond this modulus are not resolved by quadrature
QUADRATURE_RADIUS = 0.9


def _scale(*arrays) -> float:
    return max([1.0] + [float(np.abs(x).max()) for x in arrays if np.size(x)])


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    entries: np.ndarray
    basis: KernelBasis | OrthonormalBasis

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise DimensionMismatchError(f"operator matrix must be square, got {e.shape}")
        if e.shape[0] != self.basis.N:
            raise DimensionMismatchError(f"{e.shape[0]}x{e.shape[0]} matrix on a {self.basis.N}-dimensional space")
        if not np.all(np.isfinite(e)):
            raise DimensionMismatchError("operator matrix has non-finite entries")
        object.__setattr__(self, "entries", e)

    @property
    def basis_tag(self) -> str:
        return KERNEL if isinstance(self.basis, KernelBasis) else self.basis.tag

    @property
    def blaschke(self) -> FiniteBlaschke:
        return self.basis.blaschke

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    def with_entries(self, entries) -> "OperatorMatrix":
        return OperatorMatrix(entries, self.basis)


@dataclass(frozen=True)
class SymbolSpec:
    """Symbol ``phi = psi + conj(chi)``.

    ``psi``/``chi`` are kernel coordinates (kernel bases only).  ``trig`` maps
    integer ``k`` to ``c_k``; on kernel and monomial bases it means
    ``sum c_k z^k`` (negative ``k`` giving powers of ``conj(z)``), on the
    degree-3 example it means
    ``c_-2 conj(e_3) + c_-1 conj(z) + c_0 + c_1 z + c_2 e_3`` with
    ``e_3 = z^2 k_w/||k_w||``.
    """

    psi: tuple | None = None
    chi: tuple | None = None
    trig: Mapping[int, complex] | None = field(default=None)

    def __post_init__(self):
        if self.trig is None and self.psi is None and self.chi is None:
            raise DimensionMismatchError("empty symbol")
        if self.trig is not None and (self.psi is not None or self.chi is not None):
            raise DimensionMismatchError("give either kernel coefficients or a trigonometric form")
        for name in ("psi", "chi"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, tuple(complex(x) for x in v))
        if self.trig is not None:
            object.__setattr__(self, "trig", {int(k): complex(v) for k, v in self.trig.items()})

    @classmethod
    def constant(cls, c: complex = 1.0) -> "SymbolSpec":
        return cls(trig={0: c})

    def parts(self, basis):
        """Callables ``(f, g)`` with ``phi = f + conj(g)``, ``f, g`` analytic."""
        if self.trig is not None:
            if isinstance(basis, OrthonormalBasis) and basis.tag == EXAMPLE3:
                return _example3_parts(self.trig, basis.w)
            if isinstance(basis, OrthonormalBasis) and basis.tag == MONOMIAL:
                bad = [k for k in self.trig if abs(k) >= basis.N]
                if bad:
                    raise DimensionMismatchError(f"trig degrees {bad} exceed N-1={basis.N - 1}")
            pos = {k: c for k, c in self.trig.items() if k >= 0}
            neg = {-k: np.conj(c) for k, c in self.trig.items() if k < 0}
            return _poly(pos), _poly(neg)
        if not isinstance(basis, KernelBasis):
            raise BasisMismatchError("kernel-coordinate symbols need a kernel basis")
        zero = (0j,) * basis.N
        psi = np.asarray(self.psi if self.psi is not None else zero)
        chi = np.asarray(self.chi if self.chi is not None else zero)
        if psi.size != basis.N or chi.size != basis.N:
            raise DimensionMismatchError(f"symbol coefficients do not match dimension {basis.N}")
        return (lambda z: basis.evaluate_combination(psi, z)), (lambda z: basis.evaluate_combination(chi, z))

    def on_circle(self, basis, z):
        f, g = self.parts(basis)
        return f(z) + np.conj(g(z))


def _poly(coeffs: Mapping[int, complex]):
    def p(z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for k, c in coeffs.items():
            out = out + c * z**k
        return out
    return p


def _example3_parts(c: Mapping[int, complex], w: complex):
    bad = [k for k in c if abs(k) > 2]
    if bad:
        raise DimensionMismatchError(f"degree-3 example symbols use c_-2..c_2, got {bad}")
    knorm = 1.0 / np.sqrt(1.0 - abs(w) ** 2)
    get = lambda k: c.get(k, 0j)

    def e3(z):
        return z**2 / (1.0 - np.conj(w) * z) / knorm

    f = lambda z: get(0) + get(1) * z + get(2) * e3(z)
    g = lambda z: np.conj(get(-1)) * z + np.conj(get(-2)) * e3(z)
    return f, g


# -- construction ------------------------------------------------------------


def tto_matrix(basis, symbol: SymbolSpec, method: str = "auto", M: int = DEFAULT_GRID) -> OperatorMatrix:
    """Matrix of ``A_phi f = P_B(phi f)``.

    Kernel bases support two routes.  ``quadrature`` pairs against the
    biorthogonal system: ``b[i, j] = <phi k_j, C_B k_i> / conj(B'(a_i))``.
    ``gram`` uses ``<A k_j, k_i> = G[i, j] (f(a_i) + conj(g(a_j)))`` and solves
    with the Gram matrix.  ``auto`` takes quadrature unless some zero lies
    beyond radius 0.9, where the grid no longer resolves the kernels.
    """
    if isinstance(basis, KernelBasis):
        if method == "auto":
            method = "quadrature" if np.abs(basis.zeros).max() <= QUADRATURE_RADIUS else "gram"
        f, g = symbol.parts(basis)
        if method == "gram":
            G = basis.gram
            check_conditioning(G)
            a = basis.zeros
            X = G * (f(a)[:, None] + np.conj(g(a))[None, :])
            return OperatorMatrix(np.linalg.solve(G, X), basis)
        if method != "quadrature":
            raise ValueError(f"unknown method {method!r}")
        z = unit_grid(M)
        phi = f(z) + np.conj(g(z))
        K = basis.kernel_values(z)  # (M, N)
        CK = basis.blaschke(z)[:, None] / (z[:, None] - basis.zeros[None, :])
        pair = (np.conj(CK).T @ (phi[:, None] * K)) / M  # pair[i, j] = <phi k_j, C k_i>
        return OperatorMatrix(pair / np.conj(basis.bprime)[:, None], basis)

    if basis.tag == MONOMIAL and symbol.trig is not None:
        symbol.parts(basis)  # dimension check
        n = basis.N
        idx = np.subtract.outer(np.arange(n), np.arange(n))
        T = np.vectorize(lambda k: symbol.trig.get(int(k), 0j), otypes=[complex])(idx)
        return OperatorMatrix(T, basis)
    z = unit_grid(basis.M)
    phi = symbol.on_circle(basis, z)
    E = basis.functions
    return OperatorMatrix((np.conj(E) @ (phi[None, :] * E).T) / basis.M, basis)


def example3_matrix(w, c: Mapping[int, complex]) -> np.ndarray:
    """Closed-form TTO matrix on ``{1, z, z^2 k_w/||k_w||}`` for coefficients ``c_-2..c_2``."""
    w = complex(w)
    kn = 1.0 / np.sqrt(1.0 - abs(w) ** 2)
    cm2, cm1, c0, c1, c2 = (complex(c.get(k, 0j)) for k in (-2, -1, 0, 1, 2))
    wb = w.conjugate()
    return np.array(
        [
            [c0, cm1, cm2],
            [c1, c0, cm2 * wb + cm1 / kn],
            [c2, c1 / kn + c2 * w, cm2 * wb**2 * kn + cm1 * wb + c0 + c1 * w + c2 * w**2 * kn],
        ]
    )


def example3_residuals(b: np.ndarray, w) -> np.ndarray:
    """Absolute residuals of the four linear relations describing TTO matrices
    in the degree-3 example (1-based labels ``b_ij`` = ``b[i-1, j-1]``)."""
    return np.abs(_example3_signed(np.asarray(b), w))


def example3_constraint_matrix(w) -> np.ndarray:
    """The four relations as rows acting on ``vec(b)`` (row-major)."""
    rows = []
    for p in range(9):
        E = np.zeros(9, dtype=complex)
        E[p] = 1
        rows.append(_example3_signed(E.reshape(3, 3), w))
    return np.array(rows).T


def _example3_signed(b, w):
    w = complex(w)
    kn = 1.0 / np.sqrt(1.0 - abs(w) ** 2)
    wb = w.conjugate()
    return np.array(
        [
            b[1, 1] - b[0, 0],
            b[1, 2] - (wb * b[0, 2] + b[0, 1] / kn),
            b[2, 1] - (b[1, 0] / kn + w * b[2, 0]),
            b[2, 2] - (b[0, 0] + wb**2 * kn * b[0, 2] + wb * b[0, 1] + w * b[1, 0] + w**2 * kn * b[2, 0]),
        ]
    )


# -- adjoints and symmetry ---------------------------------------------------


def adjoint(A: OperatorMatrix) -> OperatorMatrix:
    """Matrix of ``A*`` in the same basis: ``G Y = A^H G`` for kernel bases."""
    if isinstance(A.basis, KernelBasis):
        G = A.basis.gram
        check_conditioning(G)
        return A.with_entries(np.linalg.solve(G, A.entries.conj().T @ G))
    return A.with_entries(A.entries.conj().T)


def c_symmetry_residual(A: OperatorMatrix) -> float:
    if isinstance(A.basis, KernelBasis):
        # conj(B'(a_j)) b[j, i] == conj(B'(a_i)) b[i, j]
        S = np.conj(A.basis.bprime)[:, None] * A.entries
        return float(np.abs(S - S.T).max() / _scale(S))
    J = A.basis.conjugation
    # C A C = A*  <=>  conj(J) A J = A^T  (C acts as x -> J conj(x))
    L = np.conj(J) @ A.entries @ J
    return float(np.abs(L - A.entries.T).max() / _scale(A.entries))


def is_c_symmetric(A: OperatorMatrix, tol: float = 1e-8) -> tuple[bool, float]:
    """Whether ``C_B A C_B = A*``; on the monomial basis this is persymmetry."""
    r = c_symmetry_residual(A)
    return r <= tol, r


def persymmetry_residual(T: np.ndarray) -> float:
    T = np.asarray(T)
    return float(np.abs(T - T[::-1, ::-1].T).max() / _scale(T))


def toeplitz_residual(T: np.ndarray) -> float:
    """Largest jump along any diagonal."""
    T = np.asarray(T)
    if T.shape[0] < 2:
        return 0.0
    return float(np.abs(T[1:, 1:] - T[:-1, :-1]).max() / _scale(T))


# -- compressions ------------------------------------------------------------


def _sub_basis(basis, n: int):
    if isinstance(basis, KernelBasis):
        return basis.sub(n)
    tag = MONOMIAL if basis.tag in (MONOMIAL, EXAMPLE3) else basis.tag
    B = FiniteBlaschke.monomial(n) if tag == MONOMIAL else partial_product(basis.blaschke, n)[0]
    return OrthonormalBasis(B, basis.functions[:n], tag)


def compress(A: OperatorMatrix) -> OperatorMatrix:
    """``P_{n-1} A`` restricted to ``K_{B_{n-1}}``, one degree down.

    In kernel coordinates only the last row feeds back:
    ``b'[i, j] = b[i, j] + conj(B_{n-1}(a_n)) b[n, j] / (conj(B'_{n-1}(a_i)) (conj(a_n) - conj(a_i)))``.
    Nested orthonormal bases just drop the last row and column.
    """
    n = A.N
    if n < 2:
        raise IndexOutOfRangeError("cannot compress a 1x1 operator")
    sub = _sub_basis(A.basis, n - 1)
    b = A.entries
    if not isinstance(A.basis, KernelBasis):
        return OperatorMatrix(b[: n - 1, : n - 1].copy(), sub)
    a = A.basis.zeros
    prev = sub.blaschke
    coef = np.conj(evaluate(prev, a[n - 1])) / (
        np.conj(derivative(prev, a[: n - 1])) * (np.conj(a[n - 1]) - np.conj(a[: n - 1]))
    )
    return OperatorMatrix(b[: n - 1, : n - 1] + coef[:, None] * b[n - 1, : n - 1][None, :], sub)


def compress_to(A: OperatorMatrix, n: int) -> OperatorMatrix:
    if not 1 <= n <= A.N:
        raise IndexOutOfRangeError(f"n={n} outside 1..{A.N}")
    while A.N > n:
        A = compress(A)
    return A


def compress_from_tail(A: OperatorMatrix, n: int) -> OperatorMatrix:
    """One-shot compression to degree ``n`` through the tail sum over rows ``m >= n``."""
    if not isinstance(A.basis, KernelBasis):
        raise BasisMismatchError("tail compression works in kernel coordinates")
    N = A.N
    if not 1 <= n <= N:
        raise IndexOutOfRangeError(f"n={n} outside 1..{N}")
    if n == N:
        return A
    sub = A.basis.sub(n)
    a = A.basis.zeros
    Bn = sub.blaschke
    tail = np.conj(evaluate(Bn, a[n:]))  # (N-n,)
    den = np.conj(derivative(Bn, a[:n]))[:, None] * (np.conj(a[n:])[None, :] - np.conj(a[:n])[:, None])
    W = tail[None, :] / den  # W[i, m]
    return OperatorMatrix(A.entries[:n, :n] + W @ A.entries[n:, :n], sub)


def compression_chain(A: OperatorMatrix) -> list[OperatorMatrix]:
    """``[A_N, A_{N-1}, ..., A_1]``."""
    out = [A]
    while out[-1].N > 1:
        out.append(compress(out[-1]))
    return out


def chain_residuals(A: OperatorMatrix) -> list[float]:
    """C-symmetry residual of every compression, indexed by degree ``n = 1..N``."""
    return [c_symmetry_residual(X) for X in reversed(compression_chain(A))]


# -- membership --------------------------------------------------------------


def tto_residual(A: OperatorMatrix, anchor: int = 0) -> float:
    basis = A.basis
    b = A.entries
    if isinstance(basis, KernelBasis):
        N = A.N
        if not 0 <= anchor < N:
            raise IndexOutOfRangeError(f"anchor {anchor} outside 0..{N - 1}")
        if N == 1:
            return 0.0
        ab = np.conj(basis.zeros)
        dp = np.conj(basis.bprime)
        p = anchor
        i, j = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
        off = i != j
        i, j = i[off], j[off]
        pred = (dp[p] / dp[i]) * (b[p, i] * (ab[p] - ab[i]) + b[p, j] * (ab[j] - ab[p])) / (ab[j] - ab[i])
        return float(np.abs(b[i, j] - pred).max() / _scale(b))
    if basis.tag == MONOMIAL:
        return toeplitz_residual(b)
    if basis.tag == EXAMPLE3:
        return float(example3_residuals(b, basis.w).max() / _scale(b))
    raise BasisMismatchError(f"no truncated Toeplitz criterion for basis tag {basis.tag!r}")


def is_tto(A: OperatorMatrix, tol: float = 1e-8, anchor: int = 0) -> tuple[bool, float]:
    """Truncated Toeplitz membership test.

    Kernel coordinates: every off-diagonal entry must be reproduced from the
    anchor row by the rational rule
    ``b[i,j] = conj(B'(a_p))/conj(B'(a_i)) (b[p,i](conj a_p - conj a_i) + b[p,j](conj a_j - conj a_p)) / (conj a_j - conj a_i)``.
    Monomial basis: constant diagonals.  Degree-3 example: its four relations.
    """
    r = tto_residual(A, anchor)
    return r <= tol, r


def brown_halmos_residuals(A: OperatorMatrix) -> list[tuple[str, int, int, float]]:
    """Trace residuals against the rank-two test operators on ``K_{z^n}``.

    With ``u (x) v : x -> <x, v> u`` and ``tr(A (u (x) v)) = <A u, v>``, for all
    ``k, l >= 0`` with ``k + l + 1 <= n``:

    * ``lower``: ``tr(A(1 (x) z^k)) - tr(A(z^l (x) z^{k+l}))``
    * ``upper``: ``tr(A(z^k (x) 1)) - tr(A(z^{k+l} (x) z^l))``
    """
    if A.basis_tag != MONOMIAL:
        raise BasisMismatchError("Brown-Halmos residuals need the monomial basis of z^n")
    b = A.entries
    n = A.N
    out = []
    for k in range(n):
        for l in range(n - k):
            # <A z^q, z^p> = b[p, q] in an orthonormal basis
            out.append(("lower", k, l, float(abs(b[k, 0] - b[k + l, l]))))
            out.append(("upper", k, l, float(abs(b[0, k] - b[l, k + l]))))
    return out


# -- spatial isomorphism -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class CrespoTransform:
    """``U f(z) = sqrt(1 - |a|^2)/(1 - conj(a) z) f(b_a(z))`` from ``K_{z^n}`` to ``K_{b_a^n}``.

    ``matrix[k, j] = <U z^j, e_k>`` against the nested orthonormal basis
    ``e_k`` of ``K_{b_a^n}`` from :func:`orthonormal_basis`.
    """

    a: complex
    n: int
    domain: OrthonormalBasis
    codomain: OrthonormalBasis
    matrix: np.ndarray

    def apply(self, f) -> FunctionSamples:
        """Transform a callable defined on the circle."""
        a = self.a
        z = unit_grid(self.codomain.M)
        ba = (z - a) / (1.0 - np.conj(a) * z)
        return FunctionSamples(np.sqrt(1.0 - abs(a) ** 2) / (1.0 - np.conj(a) * z) * f(ba))

    def apply_coefficients(self, x) -> FunctionSamples:
        x = np.asarray(x, dtype=complex)
        return self.apply(lambda z: np.polyval(x[::-1], z))

    def unitarity_deficit(self) -> float:
        U = self.matrix
        return float(max(np.abs(U.conj().T @ U - np.eye(self.n)).max(), np.abs(U @ U.conj().T - np.eye(self.n)).max()))

    def transport(self, A: OperatorMatrix) -> OperatorMatrix:
        """``U A U*`` written in the codomain basis."""
        if A.basis_tag != MONOMIAL or A.N != self.n:
            raise BasisMismatchError("transport expects an operator on K_{z^n} in monomial coordinates")
        U = self.matrix
        return OperatorMatrix(U @ A.entries @ U.conj().T, self.codomain)


def crespo_transform(a, n: int, M: int = DEFAULT_GRID) -> CrespoTransform:
    from .model_space import monomial_basis

    a = as_disk_point(a)
    if n < 1:
        raise IndexOutOfRangeError("degree must be positive")
    dom = monomial_basis(n, M)
    cod = orthonormal_basis(FiniteBlaschke.single_zero_power(a, n), M)
    T = CrespoTransform(a, n, dom, cod, np.zeros((n, n), dtype=complex))
    cols = [cod.coordinates(T.apply(lambda z, j=j: z**j)) for j in range(n)]
    object.__setattr__(T, "matrix", np.array(cols).T)
    return T


# -- symbol recovery ---------------------------------------------------------


def recover_symbol(A: OperatorMatrix, tol: float = 1e-8) -> SymbolSpec:
    """A symbol reproducing ``A``; raises :class:`NotTTOError` for non-TTOs.

    Kernel coordinates: least squares for ``psi``, ``chi`` in ``K_B`` with
    ``chi(0) = 0`` pinned, which removes the one-dimensional ambiguity
    ``(k_0, -k_0)``.
    """
    ok, r = is_tto(A, tol)
    if not ok:
        raise NotTTOError(f"operator fails the TTO criterion (residual {r:.3e})")
    basis = A.basis
    b = A.entries
    if isinstance(basis, KernelBasis):
        N = basis.N
        G = basis.gram
        check_conditioning(G)
        Kaa = basis.kernel_values(basis.zeros)  # Kaa[i, p] = k_p(a_i)
        cols = []
        for p in range(N):
            cols.append(np.linalg.solve(G, G * Kaa[:, p][:, None]).reshape(-1))
        for p in range(N):
            cols.append(np.linalg.solve(G, G * np.conj(Kaa[:, p])[None, :]).reshape(-1))
        L = np.array(cols).T
        # pin: chi(0) = sum chi_p = 0  <=>  sum conj(chi_p) = 0
        pin = np.concatenate([np.zeros(N), np.ones(N)])[None, :] * _scale(L)
        L = np.vstack([L, pin])
        rhs = np.concatenate([b.reshape(-1), [0.0]])
        x = np.linalg.lstsq(L, rhs, rcond=None)[0]
        sym = SymbolSpec(psi=x[:N], chi=np.conj(x[N:]))
    elif basis.tag == MONOMIAL:
        n = A.N
        sym = SymbolSpec(trig={k: np.diagonal(b, -k).mean() for k in range(-(n - 1), n)})
    elif basis.tag == EXAMPLE3:
        sym = SymbolSpec(trig={0: b[0, 0], -1: b[0, 1], -2: b[0, 2], 1: b[1, 0], 2: b[2, 0]})
    else:
        raise BasisMismatchError(f"no symbol recovery for basis tag {basis.tag!r}")
    rebuilt = tto_matrix(basis, sym, method="gram") if isinstance(basis, KernelBasis) else tto_matrix(basis, sym)
    miss = float(np.abs(rebuilt.entries - b).max() / _scale(b))
    if miss > tol:
        raise NotTTOError(f"recovered symbol misses the operator by {miss:.3e}")
    return sym
