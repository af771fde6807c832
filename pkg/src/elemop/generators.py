"""Seeded random matrices and planted instances used by tests and the harness."""

from __future__ import annotations

import numpy as np

from .elementary import CoefficientFamily, ElementaryOperator

DEFAULT_SEED = 0xE1E_05EC


def rng_for(seed: int, index: int | None = None) -> np.random.Generator:
    """Independent stream for ``(seed, index)``."""
    key = [int(seed)] if index is None else [int(seed), int(index)]
    return np.random.default_rng(np.random.SeedSequence(key))


def gaussian(rng, m, n=None, complex_=True):
    n = m if n is None else n
    a = rng.standard_normal((m, n))
    if complex_:
        a = a + 1j * rng.standard_normal((m, n))
        a /= np.sqrt(2)
    return a.astype(complex)


def unitary(rng, n):
    """Haar-distributed unitary via QR of a complex Gaussian with phase fix."""
    Q, R = np.linalg.qr(gaussian(rng, n))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def hermitian(rng, n):
    G = gaussian(rng, n)
    return (G + G.conj().T) / 2


def psd(rng, n, rank=None):
    C = gaussian(rng, n, n if rank is None else rank)
    return C @ C.conj().T


def random_family(rng, m, n, J, complex_=True) -> ElementaryOperator:
    return ElementaryOperator(
        CoefficientFamily(
            [(gaussian(rng, m, complex_=complex_), gaussian(rng, n, complex_=complex_))
             for _ in range(J)]
        )
    )


def planted_commuting_normal(rng, n, J, kind="complex"):
    """``J`` matrices ``U diag(d_j) U*`` sharing a random unitary ``U``.

    ``kind`` selects the diagonal entries: ``"complex"`` (normal),
    ``"real"`` (Hermitian) or ``"nonneg"`` (PSD). Returns the matrices, ``U``
    and the ``n x J`` array of planted diagonals.
    """
    U = unitary(rng, n)
    if kind == "complex":
        D = rng.standard_normal((n, J)) + 1j * rng.standard_normal((n, J))
    elif kind == "real":
        D = rng.standard_normal((n, J)).astype(complex)
    elif kind == "nonneg":
        D = rng.uniform(0.0, 1.0, (n, J)).astype(complex)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    mats = [U @ np.diag(D[:, j]) @ U.conj().T for j in range(J)]
    return mats, U, D
