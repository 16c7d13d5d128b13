import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylcap.errors import IndexOutOfRangeError, InvalidDimensionError
from weylcap.weyl import (
    all_indices,
    eigenstate_stack,
    root_of_unity,
    weyl_eigenbasis,
    weyl_eigenvalues,
    weyl_operator,
    weyl_order,
    weyl_power,
    weyl_stack,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


def test_qubit_operators_are_paulis():
    np.testing.assert_allclose(weyl_operator((0, 0), 2), np.eye(2))
    np.testing.assert_allclose(weyl_operator((0, 1), 2), X)
    np.testing.assert_allclose(weyl_operator((1, 0), 2), Z)
    # sum_k (-1)^k |k><k+1| = [[0, 1], [-1, 0]] = i sigma_y
    np.testing.assert_allclose(weyl_operator((1, 1), 2), [[0, 1], [-1, 0]], atol=1e-15)


def test_qutrit_clock_and_shift():
    w = cmath.exp(2j * math.pi / 3)
    np.testing.assert_allclose(weyl_operator((1, 0), 3), np.diag([1, w, w * w]), atol=1e-15)
    shift = weyl_operator((0, 1), 3)
    # |k><k+1|: row k has its one in column k+1
    np.testing.assert_allclose(shift, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])


def test_root_of_unity_exact_reduction():
    assert root_of_unity(0, 7) == 1
    assert abs(root_of_unity(7 * 10**12 + 1, 7) - cmath.exp(2j * math.pi / 7)) < 1e-15
    assert abs(root_of_unity(1, 4) - 1j) < 1e-16


@pytest.mark.parametrize("d", range(2, 9))
def test_unitary_and_index_order(d):
    stack = weyl_stack(d)
    assert stack.shape == (d * d, d, d)
    eye = np.eye(d)
    for k, idx in enumerate(all_indices(d)):
        assert idx == (k // d, k % d)
        W = stack[k]
        np.testing.assert_allclose(W @ W.conj().T, eye, atol=1e-12)


def test_weyl_stack_is_read_only():
    with pytest.raises(ValueError):
        weyl_stack(3)[0, 0, 0] = 2.0


@pytest.mark.parametrize(
    "idx, d, ell, phase",
    [
        ((1, 1), 2, 2, -1),  # (i sigma_y)^2 = -I
        ((0, 1), 2, 2, 1),
        ((1, 0), 3, 3, 1),
        ((1, 1), 4, 4, -1),  # p = i^(-4 * 1 / 2) = i^(-2) = -1
        ((3, 0), 6, 2, 1),
        ((2, 3), 6, 6, 1),  # w^(-6*6/2) = w^(-18) = 1
    ],
)
def test_order_and_phase_examples(idx, d, ell, phase):
    got_ell, got_phase = weyl_order(idx, d)
    assert got_ell == ell
    W = weyl_operator(idx, d)
    np.testing.assert_allclose(np.linalg.matrix_power(W, ell), got_phase * np.eye(d), atol=1e-12)
    assert abs(got_phase - phase) < 1e-12


def test_order_phase_d4_n2_m2():
    # w = i, l = 2, p = w^(-l n m / 2) = i^(-4) = 1
    assert weyl_order((2, 2), 4)[0] == 2
    assert abs(weyl_order((2, 2), 4)[1] - 1) < 1e-12


@pytest.mark.parametrize("d", range(2, 7))
def test_power_closed_form(d):
    for idx in all_indices(d):
        W = weyl_operator(idx, d)
        P = np.eye(d, dtype=complex)
        for q in range(0, 2 * d + 1):
            np.testing.assert_allclose(weyl_power(idx, d, q), P, atol=1e-10)
            P = P @ W


def test_qubit_eigenvalues():
    # W_11 = i sigma_y has eigenvalues +-i
    lam = weyl_eigenvalues((1, 1), 2)
    np.testing.assert_allclose(sorted(lam, key=lambda z: z.imag), [-1j, 1j], atol=1e-15)
    np.testing.assert_allclose(sorted(weyl_eigenvalues((0, 1), 2).real), [-1, 1], atol=1e-15)


def test_degenerate_multiplicity():
    # W_20 on d=4 is diag(1, -1, 1, -1)
    lam = weyl_eigenvalues((2, 0), 4)
    np.testing.assert_allclose(sorted(lam.real), [-1, -1, 1, 1], atol=1e-15)
    spec = weyl_eigenbasis((2, 0), 4)
    assert spec.order == 2 and spec.degenerate


def _multiset_distance(a, b):
    used = np.zeros(len(b), dtype=bool)
    worst = 0.0
    for x in a:
        dist = np.where(used, np.inf, np.abs(b - x))
        j = int(np.argmin(dist))
        used[j] = True
        worst = max(worst, dist[j])
    return worst


@pytest.mark.parametrize("d", range(2, 9))
def test_eigenvalues_match_numerics(d):
    for idx in all_indices(d):
        numeric = np.linalg.eigvals(weyl_operator(idx, d))
        assert _multiset_distance(numeric, weyl_eigenvalues(idx, d)) < 1e-10


@pytest.mark.parametrize("d", range(2, 13))
def test_eigenbasis_is_orthonormal_eigenbasis(d):
    for idx in all_indices(d):
        spec = weyl_eigenbasis(idx, d)
        V = spec.eigenvectors
        W = weyl_operator(idx, d)
        np.testing.assert_allclose(V.conj().T @ V, np.eye(d), atol=1e-12)
        np.testing.assert_allclose(W @ V, V * spec.eigenvalues, atol=1e-12)
        assert _multiset_distance(spec.eigenvalues, weyl_eigenvalues(idx, d)) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 5, 7, 11])
def test_prime_dimension_nondegenerate(d):
    for idx in all_indices(d, include_identity=False):
        spec = weyl_eigenbasis(idx, d)
        assert spec.order == d and not spec.degenerate
        lam = spec.eigenvalues
        gaps = np.abs(lam[:, None] - lam[None, :]) + np.eye(d)
        assert gaps.min() > 1e-6


def test_shift_eigenbasis_is_fourier():
    # W_01 on d=3: eigenvectors (1, w^r, w^2r)/sqrt3 with eigenvalue w^r
    spec = weyl_eigenbasis((0, 1), 3)
    w = cmath.exp(2j * math.pi / 3)
    for r in range(3):
        v = np.array([1, w**r, w ** (2 * r)]) / math.sqrt(3)
        col = int(np.argmin(np.abs(spec.eigenvalues - w**r)))
        overlap = abs(np.vdot(v, spec.eigenvectors[:, col]))
        assert overlap == pytest.approx(1.0, abs=1e-12)


def test_eigenbasis_deterministic_and_sorted_within_cycle():
    a = weyl_eigenbasis((1, 2), 5)
    b = weyl_eigenbasis((1, 2), 5)
    np.testing.assert_array_equal(a.eigenvectors, b.eigenvectors)
    # single cycle: s = angle * d / (2 pi) - offset increases along the list
    offset = 1 * 2 * (5 - 1) / 2
    s = (np.angle(a.eigenvalues) / (2 * math.pi) * 5 - offset) % 5
    s = np.round(s).astype(int) % 5
    assert list(s) == sorted(s)


def test_eigenstate_stack_layout():
    st3 = eigenstate_stack(3)
    assert st3.shape == (9, 3, 3)
    np.testing.assert_allclose(st3[5], weyl_eigenbasis((1, 2), 3).eigenvectors)


@pytest.mark.parametrize("bad", [1, 0, -3, 2.5, True])
def test_invalid_dimension(bad):
    with pytest.raises(InvalidDimensionError):
        weyl_operator((0, 0), bad)


@pytest.mark.parametrize("idx", [(3, 0), (0, 3), (-1, 0), (0, 1, 2)])
def test_index_out_of_range(idx):
    with pytest.raises(IndexOutOfRangeError):
        weyl_operator(idx, 3)


@settings(max_examples=60, deadline=None)
@given(d=st.integers(2, 9), data=st.data())
def test_product_rule(d, data):
    # W_ab W_ce = w^(b c) W_(a+c, b+e)
    a, b, c, e = (data.draw(st.integers(0, d - 1)) for _ in range(4))
    lhs = weyl_operator((a, b), d) @ weyl_operator((c, e), d)
    rhs = root_of_unity(b * c, d) * weyl_operator(((a + c) % d, (b + e) % d), d)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(d=st.integers(2, 10), data=st.data())
def test_order_divides_dimension(d, data):
    n = data.draw(st.integers(0, d - 1))
    m = data.draw(st.integers(0, d - 1))
    ell, phase = weyl_order((n, m), d)
    assert d % ell == 0
    assert ell == d // math.gcd(math.gcd(n, m), d)
    assert abs(abs(phase) - 1) < 1e-14
    # no smaller power is proportional to the identity
    W = weyl_operator((n, m), d)
    for q in range(1, ell):
        Wq = np.linalg.matrix_power(W, q)
        assert np.abs(Wq - Wq[0, 0] * np.eye(d)).max() > 1e-9
