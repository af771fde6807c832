"""Diagonal-coefficient elementary operators as Schur (entrywise) multipliers.

An operator ``X -> sum_j A_j X B_j`` with diagonal ``A_j = diag(a_j)`` and
``B_j = diag(b_j)`` acts as ``X -> F o X`` with symbol
``F[i, k] = sum_j a_j(i) b_j(k)``. Matrix units are eigenvectors, so the
spectrum is the multiset of symbol entries.

The multiplier norm ``||X -> F o X||`` (operator norm on the operator-norm
class) is bracketed from both sides:

* upper: any exact factorization ``F[i, k] = <p_i, q_k>`` gives
  ``max_i |p_i| * max_k |q_k|``;
* lower: the largest entry, and ``||F o X|| / ||X||`` over sampled ``X``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .elementary import ElementaryOperator
from .errors import DimensionError, PreconditionError
from .generators import DEFAULT_SEED, gaussian, rng_for
from .linalg import as_cmatrix, op_norm
from .spectrum import DEFAULT_TOL, SpectrumSet, Tolerance

__all__ = [
    "SchurSymbol", "symbol_from_diagonal_family", "schur_apply", "schur_spectrum",
    "trig_sum", "toeplitz_symbol", "NormBound", "schur_norm_upper", "schur_norm_lower",
    "atoms_from_json", "atoms_to_json", "ProbeRow", "wiener_pitt_probe", "probe_to_csv",
]

#: Maximum entry of ``F - P Q*`` for an upper bound to count as certified.
FACTOR_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SchurSymbol:
    F: np.ndarray
    origin: str = "explicit"  # from_family | toeplitz | explicit
    samples: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "F", as_cmatrix(self.F, "symbol"))

    @property
    def shape(self):
        return self.F.shape

    def reciprocal(self) -> "SchurSymbol":
        if np.any(self.F == 0):
            raise PreconditionError("symbol has a vanishing entry; reciprocal undefined")
        s = None if self.samples is None else 1.0 / self.samples
        return SchurSymbol(1.0 / self.F, self.origin, s)


def _symbol(F):
    return F if isinstance(F, SchurSymbol) else SchurSymbol(F)


def symbol_from_diagonal_family(op: ElementaryOperator, tol: Tolerance = DEFAULT_TOL) -> SchurSymbol:
    for j, (A, B) in enumerate(op.terms):
        for name, M in (("A", A), ("B", B)):
            off = op_norm(M - np.diag(np.diag(M)))
            if off > tol.bound(op_norm(M)):
                raise PreconditionError(f"{name}[{j}] is not diagonal (off-diagonal norm {off:.3e})")
    a = np.array([np.diag(A) for A in op.family.left])   # J x m
    b = np.array([np.diag(B) for B in op.family.right])  # J x n
    return SchurSymbol(a.T @ b, "from_family")


def schur_apply(F, X) -> np.ndarray:
    F = _symbol(F).F
    X = as_cmatrix(X, "X")
    if X.shape != F.shape:
        raise DimensionError(f"symbol is {F.shape}, argument is {X.shape}")
    return F * X


def schur_spectrum(F, tol: Tolerance = DEFAULT_TOL) -> SpectrumSet:
    return SpectrumSet(_symbol(F).F.ravel(order="F"), tol, "formula")


def trig_sum(atoms: Sequence[tuple[complex, float]]) -> Callable:
    """``g(t) = sum_m c_m exp(-i t x_m)`` for atoms ``(c_m, x_m)``.

    This is the Fourier-Stieltjes transform of the discrete measure
    ``sum_m c_m delta_{x_m}``; its total variation ``sum |c_m|`` bounds the
    multiplier norm of every Toeplitz symbol ``g(k - i)``.
    """
    c = np.array([complex(a[0]) for a in atoms])
    x = np.array([float(a[1]) for a in atoms])

    def g(t):
        t = np.asarray(t, dtype=float)
        return np.exp(-1j * np.multiply.outer(t, x)) @ c

    g.atoms = list(zip(c, x))
    return g


def toeplitz_symbol(g, N: int) -> SchurSymbol:
    """``F[i, k] = g(k - i)`` for ``0 <= i, k < N``.

    ``g`` is either a callable on integer offsets or an array of samples at
    offsets ``-(N-1) .. N-1`` (length ``2N - 1``).
    """
    offsets = np.arange(-(N - 1), N)
    if callable(g):
        samples = np.asarray(g(offsets), dtype=complex)
    else:
        samples = np.asarray(g, dtype=complex).ravel()
        if samples.size < 2 * N - 1:
            raise DimensionError(f"need {2 * N - 1} samples for N={N}, got {samples.size}")
        samples = samples[: 2 * N - 1]
    i, k = np.indices((N, N))
    return SchurSymbol(samples[(k - i) + N - 1], "toeplitz", samples)


@dataclass(frozen=True)
class NormBound:
    value: float
    residual: float = 0.0
    certified: bool = True

    def __float__(self):
        return self.value


def _balanced_factor(F, wr, wc, rank):
    """Exact factorization ``F = P Q*`` minimizing weighted row-norm sums.

    For positive weights the minimum of ``sum_i wr_i |p_i|^2 + sum_k wc_k |q_k|^2``
    is attained by the balanced SVD of ``D_wr^(1/2) F D_wc^(1/2)``.
    """
    sr, sc = np.sqrt(wr), np.sqrt(wc)
    U, s, Vh = np.linalg.svd(sr[:, None] * F * sc[None, :], full_matrices=False)
    r = min(rank, s.size)
    root = np.sqrt(s[:r])
    P = (U[:, :r] * root) / sr[:, None]
    Q = (Vh[:r].conj().T * root) / sc[:, None]
    return P, Q


def schur_norm_upper(F, rank: int | None = None, sweeps: int = 200, restarts: int = 5,
                     seed: int = DEFAULT_SEED) -> NormBound:
    """Upper bound on the multiplier norm from an exact Gram factorization.

    Alternates between a weighted balanced factorization ``F = P Q*`` and a
    multiplicative reweighting that raises the weight of rows and columns
    whose factor vectors are long; the product of the largest row norms is
    tracked across sweeps and restarts (the first restart uses uniform
    weights, later ones random weights). The residual of the best
    factorization is added to the bound through the trivial factorization
    ``E = E I``, and the bound is reported uncertified (value ``inf``) when
    the largest entry of ``F - P Q*`` exceeds ``FACTOR_TOL``. A semidefinite
    program would give the exact norm; this estimator needs no solver.
    """
    F = _symbol(F).F
    m, n = F.shape
    if m == 0 or n == 0:
        return NormBound(0.0)
    rank = min(m, n) if rank is None else int(rank)
    if rank < 1:
        raise ValueError("rank must be at least 1")
    best = (np.inf, np.inf)
    floor = 1e-12
    for k in range(restarts):
        rng = rng_for(seed, k)
        if k == 0:
            wr, wc = np.ones(m), np.ones(n)
        else:
            wr, wc = rng.uniform(0.5, 1.5, m), rng.uniform(0.5, 1.5, n)
        prev = np.inf
        for _ in range(sweeps):
            P, Q = _balanced_factor(F, wr, wc, rank)
            rp = np.linalg.norm(P, axis=1)
            rq = np.linalg.norm(Q, axis=1)
            resid = float(np.abs(F - P @ Q.conj().T).max())
            bound = float(rp.max() * rq.max())
            if (resid <= FACTOR_TOL) and bound < best[0]:
                best = (bound, resid)
            elif best[0] == np.inf and resid < best[1]:
                best = (np.inf, resid)
            if abs(prev - bound) <= 1e-13 * bound:
                break
            prev = bound
            # push weight toward rows/columns that currently set the maximum
            wr = wr * rp ** 2
            wc = wc * rq ** 2
            wr = np.maximum(wr / wr.max(), floor) if wr.max() > 0 else np.ones(m)
            wc = np.maximum(wc / wc.max(), floor) if wc.max() > 0 else np.ones(n)
    value, resid = best
    if not np.isfinite(value):
        return NormBound(np.inf, resid, False)
    # ||S_E|| <= max_i ||E[i, :]||_2 <= sqrt(n) max|E| for the residual E
    return NormBound(value + float(np.sqrt(n) * resid), resid, True)


def schur_norm_lower(F, samples: int = 64, seed: int = DEFAULT_SEED) -> NormBound:
    """Largest entry, or ``||F o X|| / ||X||`` over random Gaussian ``X``, whichever is larger."""
    F = _symbol(F).F
    if F.size == 0:
        return NormBound(0.0)
    best = float(np.abs(F).max())
    rng = rng_for(seed)
    for _ in range(samples):
        X = gaussian(rng, *F.shape)
        best = max(best, op_norm(F * X) / op_norm(X))
    return NormBound(best)


def atoms_from_json(obj) -> list[tuple[complex, float]]:
    """Parse ``[{"c_re": .., "c_im": .., "x": ..}, ...]``."""
    return [(complex(a["c_re"], a.get("c_im", 0.0)), float(a["x"])) for a in obj]


def atoms_to_json(atoms) -> list[dict]:
    return [{"c_re": complex(c).real, "c_im": complex(c).imag, "x": float(x)} for c, x in atoms]


@dataclass(frozen=True)
class ProbeRow:
    N: int
    inf_abs_F: float
    lower: float
    upper: float


def wiener_pitt_probe(atoms, sizes: Sequence[int], samples: int = 64,
                      seed: int = DEFAULT_SEED) -> tuple[list[ProbeRow], bool]:
    """Multiplier-norm brackets of the reciprocal Toeplitz symbol ``1/g(k - i)``.

    Returns one row per size and a flag telling whether the upper bounds are
    non-decreasing in ``N``. Purely descriptive: nothing is asserted about
    the limit.
    """
    g = trig_sum(atoms)
    rows = []
    for N in sizes:
        sym = toeplitz_symbol(g, int(N))
        inf_abs = float(np.abs(sym.samples).min())
        if inf_abs == 0.0:
            raise PreconditionError(f"symbol vanishes at some offset for N={N}")
        rec = sym.reciprocal()
        rows.append(ProbeRow(
            int(N), inf_abs,
            schur_norm_lower(rec, samples, seed).value,
            schur_norm_upper(rec, seed=seed).value,
        ))
    ups = [r.upper for r in rows]
    return rows, all(b >= a for a, b in zip(ups, ups[1:]))


def probe_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "inf_abs_F", "lower", "upper"])
    for r in rows:
        w.writerow([r.N, repr(r.inf_abs_F), repr(r.lower), repr(r.upper)])
    return buf.getvalue()
