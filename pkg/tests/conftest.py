import numpy as np
import pytest

SEED = 20260810


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def complex_matrix(rng, rows, cols=None):
    cols = rows if cols is None else cols
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    return z / np.sqrt(2.0)


def complex_vector(rng, n, unit=False):
    z = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
    return z / np.linalg.norm(z) if unit else z


def gapped_matrix(rng, n, base=3.0, step=0.5):
    """Matrix with well separated singular values and Haar frames."""
    u = haar_unitary(rng, n)
    v = haar_unitary(rng, n)
    s = base - step * np.arange(n) + rng.uniform(0.0, step / 8, n)
    s = np.sort(np.abs(s))[::-1]
    return (u * s) @ v.conj().T


def haar_unitary(rng, n):
    q, r = np.linalg.qr(complex_matrix(rng, n))
    d = np.diagonal(r).copy()
    d[d == 0] = 1.0
    return q * (d / np.abs(d))
