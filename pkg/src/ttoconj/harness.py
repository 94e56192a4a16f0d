"""Seeded verification runs for the conjugation characterizations.

Every run produces a :class:`Report`.  A trial is a list of named checks,
each a nonnegative residual together with the expectation ``hold`` (residual
should be at most ``tolerance_pass``) or ``violate`` (residual should be at
least ``tolerance_fail``).  Residuals falling between the two tolerances are
never classified: the check, and with it the trial, is ``inconclusive``.

Randomness comes only from ``numpy.random.default_rng([seed, trial])``, so a
report is a pure function of its configuration.
"""
from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .blaschke import (
    FiniteBlaschke,
    InfiniteBlaschkeSpec,
    as_disk_point,
    derivative,
    geometric_zeros,
    partial_product,
    pseudo_hyperbolic,
    separation_delta,
)
from .errors import (
    DegenerateConstraintsError,
    GenerationExhaustedError,
    SeparationTooSmallError,
)
from .model_space import (
    KernelBasis,
    OrthonormalBasis,
    conj_apply,
    example3_basis,
    monomial_basis,
    orthonormal_basis,
)
from .operators import (
    OperatorMatrix,
    SymbolSpec,
    brown_halmos_residuals,
    c_symmetry_residual,
    chain_residuals,
    compress_from_tail,
    compress_to,
    compression_chain,
    crespo_transform,
    example3_constraint_matrix,
    example3_matrix,
    example3_residuals,
    persymmetry_residual,
    toeplitz_residual,
    tto_matrix,
    tto_residual,
)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
HOLD, VIOLATE = "hold", "violate"
#: singular values at or below this count as zero in rank decisions
RANK_TOL = 1e-8
#: minimum pseudo-hyperbolic distance between generated zeros
MIN_ZERO_DISTANCE = 0.1


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 0
    trials: int = 20
    degree_range: tuple[int, int] = (2, 6)
    zero_modulus_cap: float = 0.8
    tolerance_pass: float = 1e-8
    tolerance_fail: float = 1e-4
    workers: int = 1

    def __post_init__(self):
        lo, hi = self.degree_range
        object.__setattr__(self, "degree_range", (int(lo), int(hi)))
        if not 1 <= lo <= hi:
            raise ValueError(f"bad degree range {self.degree_range}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 < self.zero_modulus_cap <= 0.9:
            raise ValueError("zero_modulus_cap must lie in (0, 0.9]")
        if not 0 < self.tolerance_pass < self.tolerance_fail:
            raise ValueError("need 0 < tolerance_pass < tolerance_fail")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")

    def rng(self, index: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, index])

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["degree_range"] = list(self.degree_range)
        d.pop("workers")
        return d


@dataclass
class Trial:
    index: int
    residuals: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)
    verdict: str = PASS

    def check(self, name: str, residual: float, expect: str = HOLD):
        self.residuals[name] = float(residual)
        self.expected[name] = expect

    def classify(self, cfg: TrialConfig) -> str:
        verdicts = [classify(self.residuals[k], self.expected[k], cfg) for k in self.residuals]
        self.verdict = combine(verdicts)
        return self.verdict

    def to_dict(self) -> dict:
        d = {"index": self.index, "residuals": self.residuals, "expected": self.expected}
        if self.info:
            d["info"] = self.info
        d["verdict"] = self.verdict
        return d


def classify(residual: float, expect: str, cfg: TrialConfig) -> str:
    if residual <= cfg.tolerance_pass:
        return PASS if expect == HOLD else FAIL
    if residual >= cfg.tolerance_fail:
        return PASS if expect == VIOLATE else FAIL
    return INCONCLUSIVE


def combine(verdicts) -> str:
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return FAIL
    if INCONCLUSIVE in verdicts:
        return INCONCLUSIVE
    return PASS


def flag(condition: bool) -> float:
    """Residual encoding of a boolean check: 0 when it holds, 1 otherwise."""
    return 0.0 if condition else 1.0


@dataclass
class Report:
    name: str
    config: dict
    trials: list
    witness: dict | None
    verdict: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "config": self.config,
            "trials": [t.to_dict() for t in self.trials],
            "witness": self.witness.to_dict() if isinstance(self.witness, Trial) else self.witness,
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def worst(self, name: str) -> float:
        vals = [t.residuals[name] for t in self.trials if name in t.residuals]
        return max(vals) if vals else float("nan")


def _run(name: str, cfg: TrialConfig, body: Callable[[int], Trial], params: dict, witness: Trial | None = None) -> Report:
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            trials = list(pool.map(body, range(cfg.trials)))
    else:
        trials = [body(i) for i in range(cfg.trials)]
    verdicts = [t.classify(cfg) for t in trials]
    if witness is not None:
        verdicts.append(witness.classify(cfg))
    config = cfg.to_dict()
    config["params"] = params
    return Report(name, config, trials, witness, combine(verdicts))


# -- generators --------------------------------------------------------------


def _cnormal(rng, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_zeros(rng, N: int, cap: float, min_distance: float = MIN_ZERO_DISTANCE) -> tuple[complex, ...]:
    """``N`` points uniform in the disk of radius ``cap``, pairwise
    pseudo-hyperbolically at least ``min_distance`` apart."""
    zeros: list[complex] = []
    for _ in range(100000):
        r = cap * np.sqrt(rng.uniform())
        a = complex(r * np.exp(2j * np.pi * rng.uniform()))
        if all(pseudo_hyperbolic(a, b) >= min_distance for b in zeros):
            zeros.append(a)
            if len(zeros) == N:
                return tuple(zeros)
    raise GenerationExhaustedError(f"could not place {N} separated zeros within radius {cap}")


def random_symbol(rng, N: int) -> SymbolSpec:
    return SymbolSpec(psi=_cnormal(rng, N), chi=_cnormal(rng, N))


def random_toeplitz(rng, N: int) -> np.ndarray:
    c = _cnormal(rng, 2 * N - 1)
    idx = np.subtract.outer(np.arange(N), np.arange(N)) + N - 1
    return c[idx]


def off_toeplitz_part(P: np.ndarray) -> np.ndarray:
    """``P`` minus its diagonal averages (orthogonal to all Toeplitz matrices)."""
    N = P.shape[0]
    out = P.copy()
    for k in range(-(N - 1), N):
        rows = np.arange(max(0, k), min(N, N + k))
        cols = rows - k
        out[rows, cols] -= P[rows, cols].mean()
    return out


def degree_for(cfg: TrialConfig, rng) -> int:
    lo, hi = cfg.degree_range
    return int(rng.integers(lo, hi + 1))


def null_space(K: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal null-space basis (columns) of the row-normalized constraints."""
    n = K.shape[1]
    if K.shape[0] == 0:
        return np.eye(n, dtype=complex)
    norms = np.linalg.norm(K, axis=1)
    # rows that vanish up to rounding would become noise after normalization
    keep = norms > 1e-12 * max(norms.max(), 1.0)
    K = K[keep] / norms[keep, None]
    if K.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, Vh = np.linalg.svd(K)
    s = np.concatenate([s, np.zeros(n - s.size)])
    ambiguous = (s > tol) & (s < 1e3 * tol)
    if ambiguous.any():
        raise DegenerateConstraintsError(
            f"singular values {s[ambiguous]} sit too close to the rank threshold {tol:.0e}"
        )
    return Vh[s <= tol].conj().T


def _constraint_matrix(N: int, residual_vector: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    cols = []
    for p in range(N * N):
        E = np.zeros(N * N, dtype=complex)
        E[p] = 1.0
        cols.append(residual_vector(E.reshape(N, N)))
    return np.array(cols).T


def chain_constraint_matrix(basis) -> np.ndarray:
    """Linear constraints on ``vec(b)`` (row-major) expressing C-symmetry of
    every compression ``A_n``, ``n = 1..N``."""

    def residual_vector(b):
        out = []
        for X in compression_chain(OperatorMatrix(b, basis)):
            iu = np.triu_indices(X.N, 1)
            if isinstance(X.basis, KernelBasis):
                S = np.conj(X.basis.bprime)[:, None] * X.entries
                out.append((S - S.T)[iu])
            else:
                J = X.basis.conjugation
                L = np.conj(J) @ X.entries @ J - X.entries.T
                out.append(L.reshape(-1))
        return np.concatenate(out) if out else np.zeros(0)

    return _constraint_matrix(basis.N, residual_vector)


def sample_null_space(rng, V: np.ndarray, N: int) -> np.ndarray:
    x = V @ _cnormal(rng, V.shape[1])
    return x.reshape(N, N)


def gen_instance(kind: str, cfg: TrialConfig, index: int = 0, degree: int | None = None) -> OperatorMatrix:
    """Deterministic random instance for trial ``index`` of ``cfg``.

    Kinds: ``tto``, ``chain_csym``, ``top_csym_only`` (kernel bases on random
    zeros) and ``toeplitz``, ``perturbed`` (monomial basis of ``z^N``).
    """
    rng = cfg.rng(index)
    N = degree if degree is not None else degree_for(cfg, rng)
    if kind in ("toeplitz", "perturbed"):
        basis = monomial_basis(N)
        T = random_toeplitz(rng, N)
        if kind == "perturbed":
            if N < 2:
                raise GenerationExhaustedError("a 1x1 matrix is always Toeplitz")
            P = off_toeplitz_part(_cnormal(rng, N, N))
            T = T + 0.05 * P / np.abs(P).max()
        return OperatorMatrix(T, basis)
    basis = KernelBasis(FiniteBlaschke(random_zeros(rng, N, cfg.zero_modulus_cap)))
    if kind == "tto":
        return tto_matrix(basis, random_symbol(rng, N))
    if kind == "chain_csym":
        V = null_space(chain_constraint_matrix(basis))
        return OperatorMatrix(sample_null_space(rng, V, N), basis)
    if kind == "top_csym_only":
        if N < 3:
            raise GenerationExhaustedError("for N <= 2 top-level C-symmetry already forces a TTO")
        d = np.conj(basis.bprime)
        for _ in range(1000):
            S = _cnormal(rng, N, N)
            S = (S + S.T) / 2
            A = OperatorMatrix(S / d[:, None], basis)
            if c_symmetry_residual(A) <= 1e-12 and max(chain_residuals(A)) >= cfg.tolerance_fail:
                return A
        raise GenerationExhaustedError("no top-level-only C-symmetric instance in 1000 attempts")
    raise ValueError(f"unknown instance kind {kind!r}")


# -- z^N ---------------------------------------------------------------------


def _persym_chain(T: np.ndarray) -> float:
    return max(persymmetry_residual(T[:n, :n]) for n in range(1, T.shape[0] + 1))


def _persym_chain_null_space(N: int) -> np.ndarray:
    def residual_vector(b):
        return np.concatenate([(b[:n, :n] - b[:n, :n][::-1, ::-1].T).reshape(-1) for n in range(1, N + 1)])

    return null_space(_constraint_matrix(N, residual_vector))


def diag121_witness(cfg: TrialConfig) -> Trial:
    """``diag(1, 2, 1)`` on ``K_{z^3}``: persymmetric, not Toeplitz."""
    T = np.diag([1.0, 2.0, 1.0]).astype(complex)
    A = OperatorMatrix(T, monomial_basis(3))
    w = Trial(-1, info={"matrix": "diag(1,2,1)", "degree": 3})
    w.check("top_persymmetry", persymmetry_residual(T), HOLD)
    w.check("chain_persymmetry", _persym_chain(T), VIOLATE)
    w.check("toeplitz", toeplitz_residual(T), VIOLATE)
    w.check("brown_halmos_max", max(r[-1] for r in brown_halmos_residuals(A)), VIOLATE)
    return w


def verify_zn(cfg: TrialConfig, degree: int | None = None) -> Report:
    """Toeplitz on ``K_{z^N}`` iff persymmetric at every leading block."""
    null_cache: dict[int, np.ndarray] = {}

    def body(i):
        rng = cfg.rng(i)
        N = degree if degree is not None else degree_for(cfg, rng)
        t = Trial(i, info={"degree": N})
        T = random_toeplitz(rng, N)
        t.check("toeplitz_chain_persymmetry", _persym_chain(T))
        if N not in null_cache:
            null_cache[N] = _persym_chain_null_space(N)
        V = null_cache[N]
        t.check("chain_space_dimension", abs(V.shape[1] - (2 * N - 1)))
        X = sample_null_space(rng, V, N)
        t.check("chain_sample_persymmetry", _persym_chain(X))
        t.check("chain_sample_toeplitz", toeplitz_residual(X))
        if N >= 2:
            R = _cnormal(rng, N, N)
            t.check("generic_chain_persymmetry", _persym_chain(R), VIOLATE)
            t.check("generic_toeplitz", toeplitz_residual(R), VIOLATE)
            P = (R + R[::-1, ::-1].T) / 2
            t.check("top_persym_top", persymmetry_residual(P))
            expect = HOLD if N <= 2 else VIOLATE
            t.check("top_persym_chain", _persym_chain(P), expect)
            t.check("top_persym_toeplitz", toeplitz_residual(P), expect)
        return t

    return _run("zn", cfg, body, {"degree": degree}, diag121_witness(cfg))


# -- H^2 through truncations ---------------------------------------------------


def verify_toeplitz_h2(cfg: TrialConfig, size: int = 10) -> Report:
    """Toeplitz characterization on the truncation ``K_{z^size}``.

    Condition on all ``z^n`` is tested in full; the condition on arbitrary
    inner divisors is sampled with one random finite Blaschke product per trial.
    """
    basis = monomial_basis(size)
    V = _persym_chain_null_space(size)

    def body(i):
        rng = cfg.rng(i)
        band = int(rng.integers(1, size))
        c = _cnormal(rng, 2 * band + 1)
        sym = SymbolSpec(trig={k: c[k + band] for k in range(-band, band + 1)})
        A = tto_matrix(basis, sym)
        t = Trial(i, info={"bandwidth": band})
        t.check("toeplitz_chain_persymmetry", _persym_chain(A.entries))
        t.check("toeplitz_brown_halmos", max(r[-1] for r in brown_halmos_residuals(A)))
        alpha = KernelBasis(FiniteBlaschke(random_zeros(rng, 3, cfg.zero_modulus_cap)))
        t.check("divisor_c_symmetry", c_symmetry_residual(tto_matrix(alpha, sym)))
        X = OperatorMatrix(sample_null_space(rng, V, size), basis)
        t.check("chain_sample_brown_halmos", max(r[-1] for r in brown_halmos_residuals(X)) / max(1.0, np.abs(X.entries).max()))
        P = off_toeplitz_part(_cnormal(rng, size, size))
        Y = A.with_entries(A.entries + 0.05 * P / np.abs(P).max())
        t.info["perturbation_off_toeplitz"] = toeplitz_residual(Y.entries)
        t.check("perturbed_chain_persymmetry", _persym_chain(Y.entries), VIOLATE)
        t.check("perturbed_brown_halmos", max(r[-1] for r in brown_halmos_residuals(Y)), VIOLATE)
        return t

    return _run("toeplitz_h2", cfg, body, {"size": size})


# -- single zero ---------------------------------------------------------------


def intertwining_residual(U, rng) -> float:
    """``||U C_{z^n} f - C_{b_a^n} U f||`` for a random polynomial ``f``, deg < n."""
    n = U.n
    x = _cnormal(rng, n)
    f = lambda z: np.polyval(x[::-1], z)
    Cf = lambda z: z**n * np.conj(z * f(z))  # valid on the circle, where U samples
    left = U.apply(Cf)
    right = conj_apply(U.codomain.blaschke, U.apply(f))
    return (left - right).norm()


def verify_single_zero(cfg: TrialConfig, a: complex = 0.5, degree: int | None = None) -> Report:
    a = as_disk_point(a)
    if abs(a) > cfg.zero_modulus_cap:
        raise ValueError(f"|a| = {abs(a)} exceeds zero_modulus_cap {cfg.zero_modulus_cap}")
    transforms: dict[int, object] = {}

    def transform(N):
        if N not in transforms:
            transforms[N] = crespo_transform(a, N)
        return transforms[N]

    def body(i):
        rng = cfg.rng(i)
        N = degree if degree is not None else degree_for(cfg, rng)
        U = transform(N)
        t = Trial(i, info={"degree": N})
        t.check("unitarity", U.unitarity_deficit())
        t.check("intertwining", intertwining_residual(U, rng))
        T = OperatorMatrix(random_toeplitz(rng, N), U.domain)
        t.check("tto_zn_chain", _persym_chain(T.entries))
        t.check("tto_transported_chain", max(chain_residuals(U.transport(T))))
        if N >= 3:
            R = _cnormal(rng, N, N)
            P = OperatorMatrix((R + R[::-1, ::-1].T) / 2, U.domain)
            t.check("top_only_zn_chain", _persym_chain(P.entries), VIOLATE)
            t.check("top_only_transported_top", c_symmetry_residual(U.transport(P)))
            t.check("top_only_transported_chain", max(chain_residuals(U.transport(P))), VIOLATE)
        return t

    w = None
    if degree is None or degree == 3:
        U = transform(3)
        X = U.transport(OperatorMatrix(np.diag([1.0, 2.0, 1.0]), U.domain))
        w = Trial(-1, info={"matrix": "U diag(1,2,1) U*", "degree": 3})
        w.check("transported_top", c_symmetry_residual(X))
        w.check("transported_chain", max(chain_residuals(X)), VIOLATE)
    return _run("single_zero", cfg, body, {"a": [a.real, a.imag], "degree": degree}, w)


# -- finite Blaschke ----------------------------------------------------------


def verify_finite_blaschke(cfg: TrialConfig, degree: int | None = None, zeros=None) -> Report:
    """Chain C-symmetry against TTO membership on kernel coordinates."""
    fixed = None if zeros is None else tuple(as_disk_point(z) for z in zeros)

    def body(i):
        rng = cfg.rng(i)
        if fixed is not None:
            Z = fixed
        else:
            N = degree if degree is not None else degree_for(cfg, rng)
            Z = random_zeros(rng, N, cfg.zero_modulus_cap)
        N = len(Z)
        basis = KernelBasis(FiniteBlaschke(Z))
        t = Trial(i, info={"degree": N, "zeros": [[z.real, z.imag] for z in Z]})
        A = tto_matrix(basis, random_symbol(rng, N))
        t.check("tto_chain_c_symmetry", max(chain_residuals(A)))
        t.check("tto_criterion", tto_residual(A))
        V = null_space(chain_constraint_matrix(basis))
        t.check("chain_space_dimension", abs(V.shape[1] - (2 * N - 1)))
        X = OperatorMatrix(sample_null_space(rng, V, N), basis)
        anchor = int(rng.integers(N))
        t.info["anchor"] = anchor
        t.check("chain_sample_chain_c_symmetry", max(chain_residuals(X)))
        t.check("chain_sample_tto", tto_residual(X))
        t.check("chain_sample_tto_random_anchor", tto_residual(X, anchor))
        if N >= 3:
            d = np.conj(basis.bprime)
            S = _cnormal(rng, N, N)
            Y = OperatorMatrix((S + S.T) / 2 / d[:, None], basis)
            t.check("top_only_top", c_symmetry_residual(Y))
            t.check("top_only_chain", max(chain_residuals(Y)), VIOLATE)
            t.check("top_only_tto", tto_residual(Y), VIOLATE)
            t.check("top_only_tto_random_anchor", tto_residual(Y, anchor), VIOLATE)
        return t

    params = {"degree": degree}
    if fixed is not None:
        params["zeros"] = [[z.real, z.imag] for z in fixed]
    return _run("finite_blaschke", cfg, body, params)


# -- infinite Blaschke, by truncation -----------------------------------------


def tail_convergence(A: OperatorMatrix, i: int = 0, j: int = 1) -> list[float]:
    """``|b^{(n)}_{ij} - b_{ij}|`` for ``n = max(i,j)+1 .. N`` via the tail sum."""
    N = A.N
    return [float(abs(compress_from_tail(A, n).entries[i, j] - A.entries[i, j])) for n in range(max(i, j) + 1, N + 1)]


def verify_infinite_blaschke(cfg: TrialConfig, order: int = 12, zero_rule=geometric_zeros) -> Report:
    """Chain symmetry and entry convergence on a truncated uniformly separated
    sequence (default ``a_j = 1 - 2^-j``).

    Trial 0 uses the symbol ``k_1``.  Later trials draw random kernel
    coefficients damped by ``4^-p``, so the symbol is dominated by the first
    kernels as it would be for an operator on the full infinite space; for
    these only the decreasing trend of the entry gap is asserted.
    """
    spec = InfiniteBlaschkeSpec(zero_rule, order)
    try:
        delta = separation_delta(spec.zeros)
    except Exception as exc:
        raise SeparationTooSmallError(str(exc)) from exc
    if delta < 0.01:
        raise SeparationTooSmallError(f"separation {delta:.3e} below 0.01")
    B = FiniteBlaschke(spec.zeros)
    basis = KernelBasis(B)
    a = basis.zeros
    lam_deriv = [partial_product(spec, n)[1] * derivative(partial_product(spec, n)[0], a[0]) for n in range(1, order + 1)]
    increments = [abs(lam_deriv[n] - lam_deriv[n - 1]) for n in range(1, order)]

    def body(i):
        rng = cfg.rng(i)
        if i == 0:
            sym = SymbolSpec(psi=np.eye(order)[0])
        else:
            damp = 4.0 ** -np.arange(order)
            sym = SymbolSpec(psi=damp * _cnormal(rng, order), chi=damp * _cnormal(rng, order))
        A = tto_matrix(basis, sym, method="gram")
        t = Trial(i, info={"symbol": "k_1" if i == 0 else "random"})
        t.check("chain_c_symmetry", max(chain_residuals(A)))
        conv = tail_convergence(A, 0, 1)  # conv[n - 2] belongs to degree n
        t.info["entry_12_gap"] = conv
        t.check("tail_vs_iterated", max(
            float(np.abs(compress_from_tail(A, n).entries - compress_to(A, n).entries).max()) / max(1.0, np.abs(A.entries).max())
            for n in range(1, order + 1)
        ))
        if order >= 11:
            t.check("gap_decreases_5_to_10", flag(conv[10 - 2] < conv[5 - 2]))
            if i == 0:
                t.check("gap_at_11_below_1e-5", flag(conv[11 - 2] <= 1e-5))
        return t

    report = _run("infinite_blaschke", cfg, body, {"order": order})
    report.config["params"]["separation_delta"] = delta
    report.config["params"]["lambda_derivative_increments"] = increments
    return report


# -- the degree-3 example --------------------------------------------------------


def example3_divisors(w) -> list[tuple[complex, ...]]:
    """Zero sets of the nonconstant divisors of ``z^2 (w - z)/(1 - conj(w) z)``."""
    w = complex(w)
    return [(0j,), (0j, 0j), (w,), (0j, w), (0j, 0j, w)]


def example3_divisor_constraints(w, ebasis: OrthonormalBasis | None = None) -> np.ndarray:
    """C-symmetry of every divisor compression, as rows acting on ``vec(b)``."""
    e = ebasis if ebasis is not None else example3_basis(w)
    pieces = []
    for zeros in example3_divisors(w):
        if len(zeros) == 3:
            V, J = np.eye(3), e.conjugation
        else:
            sub = orthonormal_basis(FiniteBlaschke(zeros), e.M)
            V = np.array([e.coordinates(sub.element(k)) for k in range(sub.N)]).T
            J = sub.conjugation
        pieces.append((V, J))

    def residual_vector(b):
        out = []
        for V, J in pieces:
            Ab = V.conj().T @ b @ V
            out.append((np.conj(J) @ Ab @ J - Ab.T).reshape(-1))
        return np.concatenate(out)

    return _constraint_matrix(3, residual_vector)


def verify_example_degree3(cfg: TrialConfig, w: complex = 0.5) -> Report:
    w = as_disk_point(w)
    if w == 0 or abs(w) > 0.9:
        raise ValueError("the degree-3 example needs 0 < |w| <= 0.9")
    e = example3_basis(w)
    eq_null = null_space(example3_constraint_matrix(w))
    div_null = null_space(example3_divisor_constraints(w, e))

    def body(i):
        rng = cfg.rng(i)
        cv = _cnormal(rng, 5)
        c = {k: cv[k + 2] for k in range(-2, 3)}
        A = tto_matrix(e, SymbolSpec(trig=c))
        t = Trial(i)
        t.check("displayed_matrix", float(np.abs(A.entries - example3_matrix(w, c)).max()))
        t.check("tto_relations", float(example3_residuals(A.entries, w).max()))
        t.check("tto_top_c_symmetry", c_symmetry_residual(A))
        t.check("relation_space_dimension", abs(eq_null.shape[1] - 5))
        t.check("divisor_space_dimension", abs(div_null.shape[1] - 5))
        X = OperatorMatrix(sample_null_space(rng, div_null, 3), e)
        t.check("divisor_sample_relations", float(example3_residuals(X.entries, w).max()) / max(1.0, np.abs(X.entries).max()))
        S = _cnormal(rng, 3, 3)
        J = e.conjugation
        # symmetric part under M -> J^T M^T conj(J): only the top-level symmetry
        Y = OperatorMatrix((S + J.T @ S.T @ np.conj(J)) / 2, e)
        t.check("top_only_top", c_symmetry_residual(Y))
        t.check("top_only_relations", float(example3_residuals(Y.entries, w).max()) / max(1.0, np.abs(Y.entries).max()), VIOLATE)
        return t

    return _run("example_degree3", cfg, body, {"w": [w.real, w.imag]})


VERIFIERS = {
    "zn": verify_zn,
    "toeplitz_h2": verify_toeplitz_h2,
    "single_zero": verify_single_zero,
    "finite_blaschke": verify_finite_blaschke,
    "infinite_blaschke": verify_infinite_blaschke,
    "example3": verify_example_degree3,
}
