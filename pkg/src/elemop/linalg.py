"""Dense complex matrix primitives.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``;
:func:`as_cmatrix` is the single validation point. Vectorization stacks
columns, so that ``vec(A @ X @ B) == kron(B.T, A) @ vec(X)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ConvergenceError, DimensionError, PreconditionError
from .spectrum import DEFAULT_TOL, SpectrumSet, Tolerance

__all__ = [
    "KRON_CAP", "Check", "as_cmatrix", "eig", "herm_eig", "kron", "vec", "unvec",
    "op_norm", "is_hermitian", "is_normal", "is_psd", "commute",
    "matrix_to_json", "matrix_from_json",
]

#: Default cap on the row count of a Kronecker result.
KRON_CAP = 4096


@dataclass(frozen=True)
class Check:
    """Outcome of a structural predicate: the verdict and the residual behind it."""

    ok: bool
    residual: float

    def __bool__(self):
        return self.ok


def as_cmatrix(M, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a finite 2-D complex128 array, or raise."""
    a = np.asarray(M, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def _square(M, name="matrix"):
    a = as_cmatrix(M, name)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got {a.shape[0]}x{a.shape[1]}")
    return a


def eig(M, tol: Tolerance = DEFAULT_TOL) -> SpectrumSet:
    """All eigenvalues of a square matrix, with multiplicity (LAPACK ``geev``)."""
    a = _square(M)
    if a.shape[0] == 0:
        return SpectrumSet(np.empty(0, complex), tol)
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"eigenvalue iteration failed for {a.shape[0]}x{a.shape[0]} matrix "
            f"(LAPACK geev, 30*n QR sweeps): {exc}"
        ) from exc
    return SpectrumSet(vals, tol)


def herm_eig(M, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns ascending real eigenvalues ``w`` and a unitary ``U`` with
    ``U* M U = diag(w)``. Raises :class:`PreconditionError` if ``M`` is not
    Hermitian within ``tol`` relative to its norm.
    """
    a = _square(M)
    chk = is_hermitian(a, tol)
    if not chk:
        raise PreconditionError(
            f"matrix is not Hermitian: ||M - M*|| = {chk.residual:.3e}"
        )
    h = (a + a.conj().T) / 2
    try:
        w, U = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigensolver failed: {exc}") from exc
    return w, U


def kron(A, B, cap: int = KRON_CAP) -> np.ndarray:
    A = as_cmatrix(A, "A")
    B = as_cmatrix(B, "B")
    rows = A.shape[0] * B.shape[0]
    cols = A.shape[1] * B.shape[1]
    if max(rows, cols) > cap:
        raise CapacityError(f"Kronecker product of size {rows}x{cols} exceeds cap {cap}")
    return np.kron(A, B)


def vec(X) -> np.ndarray:
    """Stack the columns of ``X`` into one vector."""
    return as_cmatrix(X).ravel(order="F")


def unvec(v, m: int, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    if v.size != m * n:
        raise DimensionError(f"cannot reshape vector of length {v.size} to {m}x{n}")
    return v.reshape((m, n), order="F")


def op_norm(M) -> float:
    """Largest singular value."""
    a = as_cmatrix(M)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def is_hermitian(M, tol: Tolerance = DEFAULT_TOL) -> Check:
    a = _square(M)
    r = op_norm(a - a.conj().T)
    return Check(r <= tol.bound(op_norm(a)), r)


def is_normal(M, tol: Tolerance = DEFAULT_TOL) -> Check:
    a = _square(M)
    ah = a.conj().T
    r = op_norm(a @ ah - ah @ a)
    return Check(r <= tol.bound(op_norm(a) ** 2), r)


def is_psd(M, tol: Tolerance = DEFAULT_TOL) -> Check:
    """Hermitian with smallest eigenvalue above ``-(abs + rel*||M||)``.

    The residual is the larger of the Hermitian defect and the negative part
    of the smallest eigenvalue.
    """
    a = _square(M)
    herm = is_hermitian(a, tol)
    if not herm:
        return Check(False, herm.residual)
    if a.shape[0] == 0:
        return Check(True, 0.0)
    lo = float(np.linalg.eigvalsh((a + a.conj().T) / 2)[0])
    r = max(herm.residual, -lo)
    return Check(-lo <= tol.bound(op_norm(a)), r)


def commute(A, B, tol: Tolerance = DEFAULT_TOL) -> Check:
    A = _square(A, "A")
    B = _square(B, "B")
    if A.shape != B.shape:
        raise DimensionError(f"cannot commute {A.shape} with {B.shape}")
    r = op_norm(A @ B - B @ A)
    return Check(r <= tol.bound(op_norm(A) * op_norm(B)), r)


def matrix_to_json(M) -> dict:
    a = as_cmatrix(M)
    out = {"rows": a.shape[0], "cols": a.shape[1], "re": a.real.tolist()}
    if np.any(a.imag):
        out["im"] = a.imag.tolist()
    return out


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.array(obj["re"], dtype=float).reshape(rows, cols)
    im = obj.get("im")
    im = np.zeros_like(re) if im is None else np.array(im, dtype=float).reshape(rows, cols)
    return as_cmatrix(re + 1j * im)
