import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttoconj.blaschke import (
    NORMALIZED,
    FiniteBlaschke,
    InfiniteBlaschkeSpec,
    derivative,
    divisor,
    evaluate,
    geometric_zeros,
    partial_product,
    separation_delta,
    value_and_derivative,
)
from ttoconj.errors import (
    DomainError,
    DuplicateZerosError,
    EmptySubsetError,
    IndexOutOfRangeError,
)

from conftest import random_disk_points

disk = st.builds(
    lambda r, t: complex(r * np.cos(t), r * np.sin(t)),
    st.floats(0, 0.8),
    st.floats(0, 2 * np.pi),
)


def naive(zeros, z, c=1.0):
    """Direct product, factor by factor."""
    out = c
    for a in zeros:
        out *= (z - a) / (1 - np.conj(a) * z)
    return out


def test_identity_factor():
    assert evaluate(FiniteBlaschke((0,)), 0.3) == pytest.approx(0.3)


def test_vanishes_at_zero():
    assert abs(evaluate(FiniteBlaschke((0, 0.5)), 0.5)) < 1e-15


def test_two_zero_value():
    # 0.2 * (0.2 - 0.5) / (1 - 0.1) = -1/15
    assert evaluate(FiniteBlaschke((0, 0.5)), 0.2) == pytest.approx(-1 / 15, abs=1e-15)


def test_derivative_values():
    assert derivative(FiniteBlaschke((0,)), 0) == pytest.approx(1)
    B = FiniteBlaschke((0, 0.5))
    assert derivative(B, 0) == pytest.approx(-0.5, abs=1e-14)
    assert derivative(B, 0.5) == pytest.approx(2 / 3, abs=1e-14)


def central_difference(B, z, h=1e-6):
    return (naive(B.zeros, z + h, B.constant) - naive(B.zeros, z - h, B.constant)) / (2 * h)


def test_derivative_matches_central_difference(rng):
    for _ in range(30):
        zeros = random_disk_points(rng, int(rng.integers(1, 9)))
        B = FiniteBlaschke(zeros, np.exp(1j * rng.uniform(0, 6)))
        z = random_disk_points(rng, 1)[0]
        d = complex(derivative(B, z))
        assert abs(d - central_difference(B, z)) <= 1e-7 * max(1.0, abs(d))


@given(st.lists(disk, min_size=1, max_size=8), disk)
@settings(max_examples=60, deadline=None)
def test_value_matches_naive_product(zeros, z):
    B = FiniteBlaschke(tuple(zeros))
    assert abs(evaluate(B, z) - naive(zeros, z)) < 1e-12


@given(st.lists(disk, min_size=1, max_size=8))
@settings(max_examples=40, deadline=None)
def test_unimodular_on_circle(zeros):
    z = np.exp(2j * np.pi * np.arange(128) / 128)
    assert np.abs(np.abs(evaluate(FiniteBlaschke(tuple(zeros)), z)) - 1).max() < 1e-12


def test_vectorized_value_and_derivative(rng):
    B = FiniteBlaschke(random_disk_points(rng, 5))
    z = np.array(random_disk_points(rng, 7))
    v, d = value_and_derivative(B, z)
    assert v.shape == d.shape == (7,)
    for k in range(7):
        assert v[k] == pytest.approx(evaluate(B, z[k]))
        assert d[k] == pytest.approx(derivative(B, z[k]))


def test_normalized_mode_factors():
    # normalized factor conj(a)/|a| (a - z)/(1 - conj(a) z); a zero at 0 gives z
    a = 0.3 + 0.4j
    B = FiniteBlaschke((0, a), mode=NORMALIZED)
    z = 0.1 - 0.2j
    expected = z * np.conj(a) / abs(a) * (a - z) / (1 - np.conj(a) * z)
    assert evaluate(B, z) == pytest.approx(expected, abs=1e-15)


def test_domain_and_pole_errors():
    B = FiniteBlaschke((0.5,))
    with pytest.raises(DomainError):
        evaluate(B, 1.5)
    with pytest.raises(DomainError):
        FiniteBlaschke((1.0,))
    with pytest.raises(DomainError):
        FiniteBlaschke((0.1,), 2.0)
    with pytest.raises(EmptySubsetError):
        FiniteBlaschke(())


def test_lambda_positive_real_zeros():
    spec = InfiniteBlaschkeSpec([0.2, 0.7, 0.4], 3)
    assert partial_product(spec, 2)[1] == pytest.approx(1)


def test_lambda_single_zero():
    B, lam = partial_product(FiniteBlaschke((0.5,)), 1)
    assert lam == pytest.approx(-1)
    # lambda_1 B_1(0) equals the normalized factor (a - z)/(1 - a z) at 0
    assert lam * evaluate(B, 0) == pytest.approx(0.5)


def test_lambda_geometric():
    spec = InfiniteBlaschkeSpec(geometric_zeros, 12)
    assert partial_product(spec, 3)[1] == pytest.approx(-1)


def test_lambda_matches_normalized_product(rng):
    zeros = random_disk_points(rng, 6)
    spec = InfiniteBlaschkeSpec(list(zeros), 6)
    z = 0.2 + 0.1j
    for n in range(1, 7):
        Bn, lam = partial_product(spec, n)
        Nn = FiniteBlaschke(zeros[:n], mode=NORMALIZED)
        assert lam * evaluate(Bn, z) == pytest.approx(evaluate(Nn, z), abs=1e-14)


def test_partial_product_range():
    with pytest.raises(IndexOutOfRangeError):
        partial_product(FiniteBlaschke((0.1, 0.2)), 3)


def test_divisor_all_indices_is_identity():
    B = FiniteBlaschke((0.1, 0.2j, -0.3))
    assert divisor(B, [0, 1, 2]) is B


def test_divisor_single():
    B = FiniteBlaschke((0, 0.5))
    D = divisor(B, [0])
    assert D.zeros == (0j,)
    assert evaluate(D, 0.37) == pytest.approx(0.37)


def test_divisor_quotient_is_inner(rng):
    z = np.exp(2j * np.pi * np.arange(64) / 64)
    for _ in range(10):
        B = FiniteBlaschke(random_disk_points(rng, 5), np.exp(1j * rng.uniform(0, 6)))
        k = int(rng.integers(1, 5))
        subset = rng.choice(5, size=k, replace=False)
        q = evaluate(B, z) / evaluate(divisor(B, subset), z)
        assert np.abs(np.abs(q) - 1).max() <= 1e-10


def test_divisor_errors():
    B = FiniteBlaschke((0.1, 0.2))
    with pytest.raises(EmptySubsetError):
        divisor(B, [])
    with pytest.raises(IndexOutOfRangeError):
        divisor(B, [2])


def test_separation_two_points():
    assert separation_delta([0, 0.5]) == pytest.approx(0.5)


def test_separation_duplicates():
    with pytest.raises(DuplicateZerosError):
        separation_delta([0.3, 0.3])


def direct_separation(zeros):
    best = np.inf
    for n, an in enumerate(zeros):
        p = 1.0
        for j, aj in enumerate(zeros):
            if j != n:
                p *= abs((aj - an) / (1 - np.conj(aj) * an))
        best = min(best, p)
    return best


# frozen values from direct_separation on a_j = 1 - 2^-j
SEPARATION_10 = 0.019135
SEPARATION_12 = 0.016887


def test_separation_geometric_prefixes():
    d10 = separation_delta([geometric_zeros(j) for j in range(1, 11)])
    d12 = separation_delta([geometric_zeros(j) for j in range(1, 13)])
    assert d10 == pytest.approx(direct_separation([geometric_zeros(j) for j in range(1, 11)]), rel=1e-12)
    assert d10 == pytest.approx(SEPARATION_10, abs=1e-6)
    assert d12 == pytest.approx(SEPARATION_12, abs=1e-6)
    # extending the prefix can only shrink the infimum
    assert 0.01 <= d12 <= d10


def test_infinite_spec_list_and_rule():
    spec = InfiniteBlaschkeSpec(geometric_zeros, 4)
    assert spec.zeros == (0.5, 0.75, 0.875, 0.9375)
    assert spec.blaschke_sum() == pytest.approx(0.5 + 0.25 + 0.125 + 0.0625)
    assert spec.truncation().degree == 4
