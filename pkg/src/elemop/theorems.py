"""Spectra predicted by structure theorems, and checks against the Kronecker oracle.

For commuting normal coefficient families the spectrum of
``X -> sum_j A_j X B_j`` is the set of bilinear products ``lambda . mu`` of
joint eigenvalue vectors. When only the left family is commuting normal,
the spectrum is the union over joint eigenvalues ``lambda`` of the spectra
of the fibers ``sum_j lambda_j B_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .elementary import ElementaryOperator
from .errors import ConvergenceError, DimensionError, PreconditionError
from .generators import gaussian, rng_for, unitary
from .linalg import Check, as_cmatrix, commute, eig, is_normal, is_psd, op_norm
from .spectrum import DEFAULT_TOL, SpectrumSet, Tolerance, directed_distance, hausdorff

__all__ = [
    "JointSpectrum", "joint_diagonalize", "product_spectrum", "fiber_spectrum",
    "LudersReport", "luders_check", "IntertwinedInstance", "make_intertwined_instance",
    "check_inclusion", "eigenvalue_membership", "oracle_scale",
]

# relative eigenvalue gap below which a Hermitian combination is treated as degenerate
_CLUSTER_GAP = 1e-5
_MAX_DEPTH = 32


def oracle_scale(op: ElementaryOperator) -> float:
    """``max(1, ||K||)`` for the operator's Kronecker matrix."""
    return max(1.0, op_norm(op.kron_matrix()))


@dataclass(frozen=True, eq=False)
class JointSpectrum:
    """Joint eigenvalue vectors of a commuting normal family.

    ``vectors[p, j]`` is the ``p``-th diagonal entry of ``U* A_j U``.
    """

    vectors: np.ndarray
    unitary: np.ndarray
    residual: float = 0.0

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def J(self) -> int:
        return self.vectors.shape[1]


def _check_family(mats, tol):
    for j, A in enumerate(mats):
        chk = is_normal(A, tol)
        if not chk:
            raise PreconditionError(f"member {j} is not normal (residual {chk.residual:.3e})")
    for i, j in combinations(range(len(mats)), 2):
        chk = commute(mats[i], mats[j], tol)
        if not chk:
            raise PreconditionError(
                f"members {i} and {j} do not commute (residual {chk.residual:.3e})"
            )


def _is_scalar(C, tol, scale):
    k = C.shape[0]
    return op_norm(C - np.trace(C) / k * np.eye(k)) <= tol.bound(scale)


def _refine(mats, V, rng, tol, depth=0):
    """Orthonormal columns spanning ``V`` that diagonalize every compressed member."""
    k = V.shape[1]
    if k <= 1:
        return V
    comp = [V.conj().T @ A @ V for A in mats]
    if all(_is_scalar(C, tol, 1.0) for C in comp):
        return V
    if depth > _MAX_DEPTH:
        raise ConvergenceError(f"joint diagonalization did not split a {k}-dim block")
    H = np.zeros((k, k), dtype=complex)
    for C in comp:
        re = (C + C.conj().T) / 2
        im = (C - C.conj().T) / 2j
        H += rng.standard_normal() * re + rng.standard_normal() * im
    H = (H + H.conj().T) / 2
    w, W = np.linalg.eigh(H)
    VW = V @ W
    gap = _CLUSTER_GAP * max(1.0, float(np.abs(w).max()))
    cuts = np.flatnonzero(np.diff(w) > gap) + 1
    blocks = np.split(np.arange(k), cuts)
    if len(blocks) == 1:
        # whole block looked degenerate for this combination; draw another
        return _refine(mats, VW, rng, tol, depth + 1)
    return np.hstack([_refine(mats, VW[:, b], rng, tol, depth + 1) for b in blocks])


def joint_diagonalize(
    family: Sequence, tol: Tolerance = DEFAULT_TOL, seed: int = 0, retries: int = 5
) -> JointSpectrum:
    """Simultaneously diagonalize a commuting family of normal matrices.

    Diagonalizes random Hermitian combinations of the Hermitian and
    skew-Hermitian parts, recursing into near-degenerate eigenspaces until
    every member is diagonal. Columns of the returned unitary are ordered
    lexicographically by the joint eigenvalues, first member first.

    Raises
    ------
    PreconditionError
        A member is not normal, or two members do not commute, within ``tol``.
    ConvergenceError
        ``retries`` random restarts failed to reach the residual bound.
    """
    mats = [as_cmatrix(A, f"family[{j}]") for j, A in enumerate(family)]
    if not mats:
        raise DimensionError("empty family")
    n = mats[0].shape[0]
    for A in mats:
        if A.shape != (n, n):
            raise DimensionError(f"family members must all be {n}x{n}, got {A.shape}")
    _check_family(mats, tol)
    scales = [max(op_norm(A), np.finfo(float).tiny) for A in mats]
    normed = [A / s for A, s in zip(mats, scales)]

    worst = np.inf
    for attempt in range(retries):
        rng = rng_for(seed, attempt)
        U = _refine(normed, np.eye(n, dtype=complex), rng, tol)
        diags = [U.conj().T @ A @ U for A in mats]
        worst = max(
            (op_norm(D - np.diag(np.diag(D))) / s for D, s in zip(diags, scales)),
            default=0.0,
        )
        if worst <= 10 * tol.bound(1.0):
            break
    else:
        raise ConvergenceError(
            f"joint diagonalization residual {worst:.3e} after {retries} attempts"
        )
    vectors = np.column_stack([np.diag(D) for D in diags]) if n else np.zeros((0, len(mats)))
    order = _lex_order(vectors, max(scales))
    return JointSpectrum(vectors[order], U[:, order], worst)


def _lex_order(vectors, scale):
    # quantize so that roundoff-level differences do not decide ties
    q = np.round(vectors / (scale * 1e-9)) if vectors.size else vectors
    keys = []
    for j in reversed(range(vectors.shape[1])):
        keys += [q[:, j].imag, q[:, j].real]
    return np.lexsort(keys) if keys else np.arange(vectors.shape[0])


def product_spectrum(js_a: JointSpectrum, js_b: JointSpectrum,
                     tol: Tolerance = DEFAULT_TOL) -> SpectrumSet:
    """All bilinear products ``sum_j lambda_j mu_j`` (no conjugation)."""
    if js_a.J != js_b.J:
        raise DimensionError(f"family sizes differ: {js_a.J} vs {js_b.J}")
    return SpectrumSet((js_a.vectors @ js_b.vectors.T).ravel(), tol, "formula")


def fiber_spectrum(op: ElementaryOperator, tol: Tolerance = DEFAULT_TOL,
                   seed: int = 0) -> SpectrumSet:
    """Union over left joint eigenvalues ``lambda`` of ``eig(sum_j lambda_j B_j)``."""
    js = joint_diagonalize(op.family.left, tol, seed=seed)
    right = np.array(op.family.right)
    parts = [eig(np.tensordot(lam, right, axes=1)).values for lam in js.vectors]
    values = np.concatenate(parts) if parts else np.empty(0, complex)
    return SpectrumSet(values, tol, "formula")


@dataclass(frozen=True)
class LudersReport:
    hypotheses_met: bool
    spectrum: SpectrumSet = field(repr=False)
    min_re: float
    max_abs_im: float
    verdict: str  # PASS | FAIL | NOT_APPLICABLE


def luders_check(op: ElementaryOperator, tol: Tolerance = DEFAULT_TOL) -> LudersReport:
    """Test non-negativity of the spectrum when the left coefficients commute.

    Hypotheses (evaluated, not assumed): every ``A_j`` and ``B_j`` PSD and the
    ``A_j`` pairwise commuting. The spectrum comes from the Kronecker oracle.
    """
    psd = all(is_psd(A, tol) and is_psd(B, tol) for A, B in op.terms)
    left = op.family.left
    comm = psd and all(commute(a, b, tol) for a, b in combinations(left, 2))
    spec = op.spectrum(tol)
    bound = tol.bound(oracle_scale(op))
    min_re, max_im = spec.min_real, spec.max_abs_imag
    if not (psd and comm):
        verdict = "NOT_APPLICABLE"
    elif min_re >= -bound and max_im <= bound:
        verdict = "PASS"
    else:
        verdict = "FAIL"
    return LudersReport(psd and comm, spec, min_re, max_im, verdict)


@dataclass(frozen=True, eq=False)
class IntertwinedInstance:
    """``T`` (q x q), normal ``N`` (k x k) and injective ``Psi`` with ``Psi N = T Psi``."""

    T: np.ndarray
    N: np.ndarray
    Psi: np.ndarray
    seed: int | None = None

    def intertwining_residual(self) -> float:
        return op_norm(self.Psi @ self.N - self.T @ self.Psi)

    def min_singular_value(self) -> float:
        s = np.linalg.svd(self.Psi, compute_uv=False)
        return float(s.min()) if s.size else 0.0


def make_intertwined_instance(k: int, q: int, seed: int, R=None, M=None) -> IntertwinedInstance:
    """Block upper-triangular ``T = [[N, R], [0, M]]`` with ``Psi`` the first ``k`` columns.

    ``N`` is a random normal matrix (unitary conjugate of a random complex
    diagonal). ``R`` and ``M`` are random unless given.
    """
    if not 1 <= k <= q:
        raise DimensionError(f"need 1 <= k <= q, got k={k}, q={q}")
    rng = rng_for(seed)
    U = unitary(rng, k)
    d = gaussian(rng, k, 1).ravel()
    N = U @ np.diag(d) @ U.conj().T
    R = gaussian(rng, k, q - k) if R is None else as_cmatrix(R, "R")
    M = gaussian(rng, q - k) if M is None else as_cmatrix(M, "M")
    if R.shape != (k, q - k) or M.shape != (q - k, q - k):
        raise DimensionError("R must be k x (q-k) and M must be (q-k) x (q-k)")
    T = np.block([[N, R], [np.zeros((q - k, k)), M]])
    Psi = np.eye(q, k, dtype=complex)
    return IntertwinedInstance(T, N, Psi, seed)


def check_inclusion(inst: IntertwinedInstance, tol: Tolerance = DEFAULT_TOL) -> Check:
    """Every eigenvalue of ``N`` lies within ``tol`` of some eigenvalue of ``T``."""
    d = directed_distance(eig(inst.N).values, eig(inst.T).values)
    return Check(d <= tol.bound(op_norm(inst.T)), d)


def eigenvalue_membership(op: ElementaryOperator, tol: Tolerance = DEFAULT_TOL) -> Check:
    """Compare spectra of the two independent assemblies of the same operator.

    One assembly applies the operator to matrix units column by column, the
    other sums Kronecker products. The residual is their Hausdorff distance.
    """
    a = eig(op.apply_matrix()).values
    b = eig(op.kron_matrix()).values
    d = hausdorff(a, b)
    return Check(d <= tol.bound(oracle_scale(op)), d)
