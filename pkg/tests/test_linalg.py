import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from optomech_rabi.errors import DimensionTooLarge, NotHermitian
from optomech_rabi.linalg import (
    dagger,
    hermitian_eigenvalues,
    jacobi_eigh,
    kron,
    matrix_exp,
)


def random_complex(rng, n, m=None):
    m = n if m is None else m
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


def random_hermitian(rng, n):
    x = random_complex(rng, n)
    return 0.5 * (x + x.conj().T)


def test_kron_identity():
    assert np.array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))


def test_kron_diagonal():
    out = kron(np.diag([1, -1]), np.eye(2))
    assert np.array_equal(out, np.diag([1, 1, -1, -1]))


def test_kron_index_layout():
    rng = np.random.default_rng(1)
    a, b = random_complex(rng, 2), random_complex(rng, 3)
    out = kron(a, b)
    assert out.shape == (6, 6)
    for i in range(2):
        for j in range(2):
            for k in range(3):
                for l in range(3):
                    assert abs(out[i * 3 + k, j * 3 + l] - a[i, j] * b[k, l]) < 1e-15


def test_kron_mixed_product():
    rng = np.random.default_rng(2)
    a, c = random_complex(rng, 2), random_complex(rng, 2)
    b, d = random_complex(rng, 3), random_complex(rng, 3)
    lhs = kron(a, b) @ kron(c, d)
    rhs = kron(a @ c, b @ d)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_kron_associative_on_integers(n1, n2, n3, seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rng.integers(-5, 6, size=(n, n)).astype(complex) for n in (n1, n2, n3))
    assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))


def test_dagger_basic():
    assert np.array_equal(dagger(np.eye(3)), np.eye(3))
    assert np.array_equal(dagger([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]]))


def test_dagger_elementwise():
    rng = np.random.default_rng(3)
    a = random_complex(rng, 3)
    d = dagger(a)
    for i in range(3):
        for j in range(3):
            assert d[i, j] == np.conj(a[j, i])


@given(arrays(np.complex128, (4, 4), elements=st.complex_numbers(max_magnitude=1e6, allow_nan=False,
                                                                   allow_infinity=False)))
def test_dagger_involution(a):
    assert np.array_equal(dagger(dagger(a)), a)


def test_eigenvalues_trivial():
    assert hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0])) == [1.0, 2.0, 3.0]
    w = hermitian_eigenvalues(np.array([[0, 1], [1, 0]]))
    assert w == pytest.approx([-1.0, 1.0], abs=1e-15)


def test_eigenvalues_match_cubic_roots():
    # Oracle: roots of the characteristic polynomial in 50-digit arithmetic.
    import mpmath as mp

    mp.mp.dps = 50
    rng = np.random.default_rng(4)
    h = random_hermitian(rng, 3)
    m = mp.matrix(3, 3)
    for i in range(3):
        for j in range(3):
            m[i, j] = mp.mpc(h[i, j].real, h[i, j].imag)
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    minors = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
              + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
    det = mp.det(m)
    roots = sorted(float(mp.re(r)) for r in mp.polyroots([1, -tr, minors, -det], maxsteps=200, extraprec=100))
    assert hermitian_eigenvalues(h) == pytest.approx(roots, abs=1e-12)


def test_not_hermitian_rejected():
    with pytest.raises(NotHermitian):
        hermitian_eigenvalues(np.array([[0, 1], [0, 0]]), tol=1e-9)


@pytest.mark.parametrize("n", [1, 2, 5, 16, 33, 64])
def test_jacobi_reconstruction(n):
    rng = np.random.default_rng(n)
    h = random_hermitian(rng, n)
    w, v = jacobi_eigh(h)
    norm = np.linalg.norm(h, 2)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) <= 1e-10 * norm
    assert np.max(np.abs(v.conj().T @ v - np.eye(n))) < 1e-12
    assert np.all(np.diff(w) >= 0)
    assert np.max(np.abs(w - np.linalg.eigvalsh(h))) < 1e-10 * norm


def test_jacobi_reconstruction_dim_256():
    rng = np.random.default_rng(256)
    h = random_hermitian(rng, 256)
    w, v = jacobi_eigh(h)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) <= 1e-10 * np.linalg.norm(h, 2)


def test_jacobi_warm_start_agrees_with_cold():
    rng = np.random.default_rng(5)
    h = random_hermitian(rng, 20)
    _, v = jacobi_eigh(h)
    h2 = h + 1e-3 * random_hermitian(rng, 20)
    assert np.allclose(jacobi_eigh(h2, basis=v)[0], jacobi_eigh(h2)[0], atol=1e-12)


def test_jacobi_degenerate_spectrum():
    rng = np.random.default_rng(6)
    q, _ = np.linalg.qr(random_complex(rng, 6))
    h = q @ np.diag([1.0, 1.0, 1.0, -2.0, -2.0, 5.0]) @ q.conj().T
    assert hermitian_eigenvalues(h) == pytest.approx([-2, -2, 1, 1, 1, 5], abs=1e-12)


def test_eigenvalues_sum_to_trace_of_density_matrix():
    rng = np.random.default_rng(7)
    x = random_complex(rng, 12)
    rho = x @ x.conj().T
    rho /= np.trace(rho)
    assert abs(sum(hermitian_eigenvalues(rho)) - 1.0) <= 1e-10 * 12


def test_expm_trivial_cases():
    assert np.array_equal(matrix_exp(np.zeros((3, 3))), np.eye(3))
    out = matrix_exp(np.diag([0.3, -1.7]))
    assert np.allclose(out, np.diag(np.exp([0.3, -1.7])), rtol=1e-14, atol=0)
    n = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert np.max(np.abs(matrix_exp(n) - (np.eye(2) + n))) < 1e-15


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.floats(0.01, 10.0), st.integers(0, 2**32 - 1))
def test_expm_inverse_property(n, scale, seed):
    rng = np.random.default_rng(seed)
    a = random_complex(rng, n)
    a *= scale / np.linalg.norm(a, 2)
    prod = matrix_exp(a) @ matrix_exp(-a)
    assert np.max(np.abs(prod - np.eye(n))) <= 1e-9


def test_expm_against_eigendecomposition():
    rng = np.random.default_rng(8)
    h = random_hermitian(rng, 8)
    w, v = np.linalg.eigh(h)
    exact = v @ np.diag(np.exp(-1j * 3.0 * w)) @ v.conj().T
    assert np.max(np.abs(matrix_exp(-3j * h) - exact)) < 1e-11


def test_expm_dimension_cap():
    with pytest.raises(DimensionTooLarge):
        matrix_exp(np.zeros((4097, 4097)))
