"""Shared random generators for the test suite."""

import numpy as np


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def random_unitary(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    # fix the phase convention so the factorization is unique
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_psd(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return a @ a.conj().T


def random_density(rng, dim):
    m = random_psd(rng, dim)
    return m / m.trace().real


def random_xstate(rng):
    """Random valid two-qubit X-state; the anti-diagonal magnitudes run all
    the way to the positivity boundary."""
    diag = rng.uniform(0.0, 1.0, size=4)
    diag /= diag.sum()
    a, b, c, d = diag
    f = rng.uniform(0.0, 1.0) * np.sqrt(b * c) * np.exp(2j * np.pi * rng.uniform())
    g = rng.uniform(0.0, 1.0) * np.sqrt(a * d) * np.exp(2j * np.pi * rng.uniform())
    m = np.diag(diag).astype(np.complex128)
    m[1, 2] = f
    m[2, 1] = np.conj(f)
    m[0, 3] = g
    m[3, 0] = np.conj(g)
    return m
