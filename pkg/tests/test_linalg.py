import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from charvar.errors import NonHermitianInput, NotPositiveDefinite, SingularInput, SizeMismatch
from charvar.linalg import (
    exp_hermitian,
    frobenius_inner,
    hermitian_eig,
    log_posdef,
    polar_decompose,
    posdef_power,
)


def random_hermitian(rng, n, scale=1.0):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (z + z.conj().T)


def series_exp(x, terms=60):
    """Truncated Taylor series; independent of the eigen-based path."""
    out = np.eye(len(x), dtype=complex)
    term = np.eye(len(x), dtype=complex)
    for k in range(1, terms):
        term = term @ x / k
        out = out + term
    return out


class TestHermitianEig:
    def test_identity(self):
        w, v = hermitian_eig(np.eye(2))
        np.testing.assert_array_equal(w, [1.0, 1.0])
        np.testing.assert_array_equal(v, np.eye(2))

    def test_diagonal_is_sorted(self):
        w, v = hermitian_eig(np.diag([3.0, 1.0]))
        np.testing.assert_array_equal(w, [1.0, 3.0])
        np.testing.assert_allclose(np.abs(v), [[0, 1], [1, 0]])

    def test_characteristic_polynomial(self):
        # lambda^2 - 4 lambda + 3 = (lambda - 1)(lambda - 3)
        w, _ = hermitian_eig([[2.0, 1.0], [1.0, 2.0]])
        np.testing.assert_allclose(w, [1.0, 3.0], atol=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 8])
    def test_invariants_and_lapack_agreement(self, n):
        rng = np.random.default_rng(n)
        for _ in range(30):
            m = random_hermitian(rng, n, 3.0)
            w, v = hermitian_eig(m)
            assert np.all(np.diff(w) >= 0)
            assert np.linalg.norm(v.conj().T @ v - np.eye(n)) <= 1e-10
            assert np.linalg.norm(m @ v - v * w) <= 1e-9 * (1 + np.linalg.norm(m))
            np.testing.assert_allclose(w, np.linalg.eigvalsh(m), atol=1e-12 * (1 + np.linalg.norm(m)))

    def test_phase_convention(self):
        rng = np.random.default_rng(3)
        _, v = hermitian_eig(random_hermitian(rng, 3))
        for col in v.T:
            lead = col[np.argmax(np.abs(col) > 1e-12)]
            assert lead.real > 0 and abs(lead.imag) < 1e-15

    def test_deterministic(self):
        m = random_hermitian(np.random.default_rng(5), 4)
        a, b = hermitian_eig(m), hermitian_eig(m)
        np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
        np.testing.assert_array_equal(a.basis, b.basis)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianInput):
            hermitian_eig([[1.0, 2.0], [0.0, 1.0]])

    def test_rejects_non_square(self):
        with pytest.raises(SizeMismatch):
            hermitian_eig(np.ones((2, 3)))

    def test_real_input_stays_real(self):
        m = np.array([[1.0, 2.0, 0.5], [2.0, -1.0, 0.3], [0.5, 0.3, 4.0]])
        _, v = hermitian_eig(m)
        assert np.all(v.imag == 0)


class TestExpLog:
    def test_zero(self):
        np.testing.assert_array_equal(exp_hermitian(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self):
        out = exp_hermitian(np.diag([math.log(2), -math.log(2)]))
        np.testing.assert_allclose(out, np.diag([2.0, 0.5]), atol=1e-15)

    def test_cosh_sinh(self):
        out = exp_hermitian([[0.0, 1.0], [1.0, 0.0]])
        expected = [[math.cosh(1), math.sinh(1)], [math.sinh(1), math.cosh(1)]]
        np.testing.assert_allclose(out, expected, atol=1e-14)
        np.testing.assert_allclose(out, series_exp(np.array([[0.0, 1.0], [1.0, 0.0]])), atol=1e-14)

    def test_matches_series(self):
        rng = np.random.default_rng(11)
        for n in (2, 3, 4):
            x = random_hermitian(rng, n, 0.5)
            np.testing.assert_allclose(exp_hermitian(x), series_exp(x), atol=1e-12)

    def test_log_identity_and_diagonal(self):
        np.testing.assert_allclose(log_posdef(np.eye(2)), np.zeros((2, 2)), atol=1e-16)
        np.testing.assert_allclose(log_posdef(np.diag([4.0, 1.0])), np.diag([math.log(4), 0.0]), atol=1e-15)

    def test_round_trip(self):
        rng = np.random.default_rng(12)
        for i in range(200):
            x = random_hermitian(rng, 1 + i % 4)
            x *= 2.0 * rng.uniform() / np.linalg.norm(x)
            p = exp_hermitian(x)
            assert np.linalg.norm(exp_hermitian(log_posdef(p)) - p) <= 1e-9 * (1 + np.linalg.norm(p))
            assert np.linalg.norm(log_posdef(p) - x) <= 1e-9

    def test_exp_is_positive_definite(self):
        x = random_hermitian(np.random.default_rng(13), 3, 2.0)
        w, _ = hermitian_eig(exp_hermitian(x))
        np.testing.assert_allclose(w, np.exp(np.linalg.eigvalsh(x)), rtol=1e-12)

    @pytest.mark.parametrize("p", [np.diag([1.0, 0.0]), np.diag([1.0, -1.0]), np.diag([1.0, 1e-15])])
    def test_log_rejects_non_positive(self, p):
        with pytest.raises(NotPositiveDefinite):
            log_posdef(p)


class TestPosdefPower:
    def test_zero_and_one(self):
        p = exp_hermitian(random_hermitian(np.random.default_rng(20), 3))
        np.testing.assert_allclose(posdef_power(p, 0), np.eye(3), atol=1e-10)
        assert np.linalg.norm(posdef_power(p, 1) - p) <= 1e-10 * (1 + np.linalg.norm(p))

    def test_square_root(self):
        np.testing.assert_allclose(posdef_power(np.diag([4.0, 1.0]), 0.5), np.diag([2.0, 1.0]), atol=1e-15)

    def test_inverse_pair(self):
        p = exp_hermitian(random_hermitian(np.random.default_rng(21), 4))
        np.testing.assert_allclose(posdef_power(p, -0.5) @ posdef_power(p, 0.5), np.eye(4), atol=1e-12)

    def test_semigroup(self):
        rng = np.random.default_rng(22)
        for _ in range(100):
            p = exp_hermitian(random_hermitian(rng, 3))
            s, t = rng.uniform(-1, 1, 2)
            lhs = posdef_power(p, s) @ posdef_power(p, t)
            assert np.linalg.norm(lhs - posdef_power(p, s + t)) <= 1e-9


class TestPolar:
    def test_unitary_input(self):
        u0 = np.array([[0, 1j], [1j, 0]])
        u, p = polar_decompose(u0)
        np.testing.assert_allclose(u, u0, atol=1e-15)
        np.testing.assert_allclose(p, np.eye(2), atol=1e-15)

    def test_positive_input(self):
        g = exp_hermitian(random_hermitian(np.random.default_rng(30), 3))
        u, p = polar_decompose(g)
        np.testing.assert_allclose(u, np.eye(3), atol=1e-13)
        np.testing.assert_allclose(p, g, atol=1e-13)

    def test_unipotent(self):
        g = np.array([[1.0, 1.0], [0.0, 1.0]])
        u, p = polar_decompose(g)
        # for 2x2 real g with det g = 1 the rotation factor is (g + g^-T) normalized
        np.testing.assert_allclose(u, np.array([[2.0, 1.0], [-1.0, 2.0]]) / math.sqrt(5), atol=1e-15)
        np.testing.assert_allclose(p @ p, [[1.0, 1.0], [1.0, 2.0]], atol=1e-14)
        w = np.linalg.eigvalsh(p.real)
        np.testing.assert_allclose(w**2, [(3 - math.sqrt(5)) / 2, (3 + math.sqrt(5)) / 2], atol=1e-14)
        np.testing.assert_allclose(p, posdef_power(g.T @ g, 0.5), atol=1e-14)

    def test_random_reconstruction(self):
        rng = np.random.default_rng(31)
        for i in range(200):
            n = 1 + i % 4
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            u, p = polar_decompose(g)
            assert np.linalg.norm(u @ p - g) <= 1e-10 * (1 + np.linalg.norm(g))
            assert np.linalg.norm(u.conj().T @ u - np.eye(n)) <= 1e-10
            assert np.linalg.norm(p - p.conj().T) <= 1e-12 * (1 + np.linalg.norm(p))

    def test_singular(self):
        with pytest.raises(SingularInput):
            polar_decompose([[1.0, 2.0], [2.0, 4.0]])


class TestFrobeniusInner:
    def test_values(self):
        a = np.array([[1.0, 1.0], [0.0, 1.0]])
        assert frobenius_inner(np.eye(2), np.eye(2)) == 2
        assert frobenius_inner(a, a) == 3

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(40)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert frobenius_inner(a, b) == pytest.approx(np.conj(frobenius_inner(b, a)))
        assert frobenius_inner(a, b) == pytest.approx(np.trace(a.conj().T @ b))

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            frobenius_inner(np.eye(2), np.eye(3))


entries = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(re=arrays(np.float64, (3, 3), elements=entries), im=arrays(np.float64, (3, 3), elements=entries))
def test_exp_log_round_trip_hypothesis(re, im):
    z = re + 1j * im
    x = 0.5 * (z + z.conj().T)
    assert np.linalg.norm(log_posdef(exp_hermitian(x)) - x) <= 1e-9
