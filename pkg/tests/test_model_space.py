import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttoconj.blaschke import FiniteBlaschke, derivative, evaluate
from ttoconj.errors import (
    DuplicateZerosError,
    GridMismatchError,
    IndexOutOfRangeError,
    NotInModelSpaceError,
)
from ttoconj.model_space import (
    FunctionSamples,
    KernelBasis,
    conj_apply,
    conj_pairing,
    example3_basis,
    expand,
    general_kernel,
    gram,
    kernel_norm_sq,
    monomial_basis,
    orthonormal_basis,
    project_kernel,
    quadrature_inner,
    ratio_identities,
    unit_grid,
)

from conftest import random_disk_points


def random_basis(rng, N, cap=0.8):
    while True:
        zeros = random_disk_points(rng, N, cap)
        z = np.array(zeros)
        d = np.abs(z[:, None] - z[None, :]) + np.eye(N)
        if d.min() > 0.05:
            return KernelBasis(FiniteBlaschke(zeros))


# -- quadrature ----------------------------------------------------------------


def test_quadrature_constants_and_modes():
    one = FunctionSamples.of(lambda z: np.ones_like(z), 64)
    z = FunctionSamples.of(lambda z: z, 64)
    assert quadrature_inner(one, one) == pytest.approx(1)
    assert abs(quadrature_inner(z, one)) < 1e-15


def test_quadrature_kernel_norm():
    k = FunctionSamples.of(lambda z: 1 / (1 - 0.5 * z), 1024)
    assert abs(quadrature_inner(k, k) - 4 / 3) < 1e-10


def test_grid_checks():
    with pytest.raises(GridMismatchError):
        quadrature_inner(FunctionSamples(np.ones(64)), FunctionSamples(np.ones(128)))
    with pytest.raises(ValueError):
        FunctionSamples(np.ones(100))


# -- Gram matrix and pairings ----------------------------------------------------


def test_gram_single_origin():
    assert np.allclose(gram(KernelBasis(FiniteBlaschke((0,)))), [[1]])


def test_gram_two_points():
    basis = KernelBasis(FiniteBlaschke((0, 0.5)))
    G = gram(basis)
    assert np.abs(G - np.array([[1, 1], [1, 4 / 3]])).max() < 1e-15
    Q = np.array([[quadrature_inner(basis.kernel(j), basis.kernel(i)) for j in range(2)] for i in range(2)])
    assert np.abs(G - Q).max() < 1e-10


def test_gram_matches_quadrature(rng):
    for _ in range(10):
        basis = random_basis(rng, int(rng.integers(2, 9)))
        K = [basis.kernel(j) for j in range(basis.N)]
        Q = np.array([[quadrature_inner(K[j], K[i]) for j in range(basis.N)] for i in range(basis.N)])
        assert np.abs(basis.gram - Q).max() < 1e-9


def test_duplicate_zeros_rejected():
    with pytest.raises(DuplicateZerosError):
        KernelBasis(FiniteBlaschke((0.3, 0.3)))


def test_conj_pairing_full_degree(rng):
    basis = random_basis(rng, 4)
    for j in range(4):
        for m in range(4):
            v = conj_pairing(basis, 4, j, m)
            if m == j:
                assert v == pytest.approx(derivative(basis.blaschke, basis.zeros[j]))
            else:
                assert abs(v) < 1e-15


def test_conj_pairing_two_points():
    basis = KernelBasis(FiniteBlaschke((0, 0.5)))
    assert conj_pairing(basis, 1, 0, 1) == pytest.approx(1)
    # <C_1 k_1, k_2> by quadrature, with B_1(z) = z
    q = quadrature_inner(conj_apply(FiniteBlaschke((0,)), basis.kernel(0)), basis.kernel(1))
    assert q == pytest.approx(1, abs=1e-12)


def test_conj_pairing_matches_quadrature(rng):
    basis = random_basis(rng, 5)
    for n in range(1, 6):
        Bn = FiniteBlaschke(tuple(basis.zeros[:n]))
        for j in range(n):
            Ck = conj_apply(Bn, basis.kernel(j))
            for m in range(5):
                assert abs(conj_pairing(basis, n, j, m) - quadrature_inner(Ck, basis.kernel(m))) < 1e-9


def test_conj_pairing_range():
    basis = KernelBasis(FiniteBlaschke((0, 0.5)))
    with pytest.raises(IndexOutOfRangeError):
        conj_pairing(basis, 1, 1, 0)


def test_project_kernel_two_points():
    basis = KernelBasis(FiniteBlaschke((0, 0.5)))
    assert project_kernel(basis, 1, 1) == pytest.approx([1])


def test_project_kernel_normal_equations(rng):
    basis = random_basis(rng, 5)
    G = basis.gram
    n, m = 3, 4
    d = np.linalg.solve(G[:n, :n], G[:n, m])  # G_n d = (<k_m, k_i>)_{i<n}
    assert np.abs(project_kernel(basis, n, m) - d).max() < 1e-10


def test_project_kernel_precondition():
    basis = KernelBasis(FiniteBlaschke((0, 0.5, -0.3)))
    with pytest.raises(IndexOutOfRangeError):
        project_kernel(basis, 2, 1)


# -- expansions -------------------------------------------------------------------


def test_expand_kernel_is_unit_vector(rng):
    basis = random_basis(rng, 4)
    c = expand(basis, basis.kernel(2))
    assert np.abs(c - np.eye(4)[2]).max() < 1e-10


def test_expand_conjugate_kernel():
    basis = KernelBasis(FiniteBlaschke((0, 0.5)))
    f = basis.conj_kernel(0)
    # <f, k_i> = f(a_i): B'(a_1) at i = 1, and 0 at the other zero
    rhs = np.array([derivative(basis.blaschke, 0), 0])
    oracle = np.linalg.solve(basis.gram, rhs)
    assert np.abs(expand(basis, f) - oracle).max() < 1e-10


def test_expand_rejects_outside_model_space():
    basis = KernelBasis(FiniteBlaschke((0, 0.5)))
    f = FunctionSamples.of(lambda z: evaluate(basis.blaschke, z) * (1 + z**2))
    with pytest.raises(NotInModelSpaceError):
        expand(basis, f)


# -- conjugations -------------------------------------------------------------------


def test_conj_on_monomials():
    B = FiniteBlaschke.monomial(5)
    for k in range(5):
        out = conj_apply(B, FunctionSamples.of(lambda z: z**k, 256))
        assert np.abs(out.values - unit_grid(256) ** (4 - k)).max() < 1e-12


def test_conj_on_kernels(rng):
    basis = random_basis(rng, 4)
    for j in range(4):
        out = conj_apply(basis.blaschke, basis.kernel(j))
        assert np.abs(out.values - basis.conj_kernel(j).values).max() < 1e-12


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_conj_involutive_and_antiunitary(seed):
    rng = np.random.default_rng(seed)
    basis = random_basis(rng, int(rng.integers(1, 7)))
    c1 = rng.standard_normal(basis.N) + 1j * rng.standard_normal(basis.N)
    c2 = rng.standard_normal(basis.N) + 1j * rng.standard_normal(basis.N)
    f, g = basis.synthesize(c1, 512), basis.synthesize(c2, 512)
    Cf, Cg = conj_apply(basis, f), conj_apply(basis, g)
    assert np.abs(conj_apply(basis, Cf).values - f.values).max() < 1e-12 * max(1, np.abs(f.values).max())
    assert abs(quadrature_inner(Cf, Cg) - quadrature_inner(g, f)) < 1e-9 * max(1, f.norm() * g.norm())


# -- ratio identities -------------------------------------------------------------


def test_ratio_identity_values():
    B2 = FiniteBlaschke((0, 0.5))
    B1 = FiniteBlaschke((0,))
    assert evaluate(B1, 0.5) / derivative(B2, 0.5) == pytest.approx(0.75)
    assert derivative(B1, 0) / derivative(B2, 0) == pytest.approx((1 - 0) / (0 - 0.5))
    r3, r4 = ratio_identities(KernelBasis(B2), 2)
    assert r3 < 1e-15 and r4 < 1e-15


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_ratio_identities_property(seed):
    rng = np.random.default_rng(seed)
    basis = random_basis(rng, int(rng.integers(2, 9)))
    for n in range(2, basis.N + 1):
        assert max(ratio_identities(basis, n)) <= 1e-12


# -- general kernels ------------------------------------------------------------------


def test_general_kernel_norm_and_reproduction(rng):
    basis = random_basis(rng, 4)
    B = basis.blaschke
    w = 0.3 - 0.2j
    k = general_kernel(B, w)
    assert quadrature_inner(k, k) == pytest.approx(kernel_norm_sq(B, w), abs=1e-10)
    c = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    f = basis.synthesize(c)
    assert quadrature_inner(f, k) == pytest.approx(basis.evaluate_combination(c, w)[0], abs=1e-10)


# -- orthonormal bases --------------------------------------------------------------------


@pytest.mark.parametrize(
    "basis",
    [
        monomial_basis(4),
        example3_basis(0.5),
        example3_basis(0.3 + 0.2j),
        orthonormal_basis(FiniteBlaschke((0.2, 0.2, -0.5j, 0.4))),
    ],
    ids=["monomial", "example3", "example3-complex", "gram-schmidt"],
)
def test_orthonormal_bases(basis):
    E = basis.functions
    assert np.abs(np.conj(E) @ E.T / basis.M - np.eye(basis.N)).max() < 1e-10
    # every element lies in K_B: orthogonal to B z^k
    z = unit_grid(basis.M)
    Bz = evaluate(basis.blaschke, z)
    for k in range(4):
        assert np.abs(np.conj(Bz * z**k) @ E.T / basis.M).max() < 1e-10
    # the conjugation matrix is unitary and squares to the identity as x -> J conj(x)
    J = basis.conjugation
    assert np.abs(J @ np.conj(J) - np.eye(basis.N)).max() < 1e-10
    assert np.abs(J.conj().T @ J - np.eye(basis.N)).max() < 1e-10


def test_gram_schmidt_basis_is_nested():
    B = FiniteBlaschke((0.3, 0.3, 0.3))
    e = orthonormal_basis(B)
    sub = FiniteBlaschke((0.3, 0.3))
    z = unit_grid(e.M)
    Bz = evaluate(sub, z)
    assert np.abs(np.conj(Bz) @ e.functions[:2].T / e.M).max() < 1e-10
