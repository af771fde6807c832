"""Elementary operators X -> sum_j A_j X B_j on m x n matrices."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DimensionError
from .linalg import (
    KRON_CAP, as_cmatrix, eig, is_hermitian, is_psd, is_normal, matrix_from_json,
    matrix_to_json, op_norm, vec, unvec,
)
from .spectrum import DEFAULT_TOL, SpectrumSet, Tolerance

__all__ = [
    "CoefficientFamily", "ElementaryOperator", "Classification", "classify",
    "family_to_json", "family_from_json",
]


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CoefficientFamily:
    """Ordered coefficient pairs ``(A_j, B_j)``, ``A_j`` m x m and ``B_j`` n x n.

    Arrays are copied and made read-only on construction.
    """

    terms: tuple[tuple[np.ndarray, np.ndarray], ...]

    def __init__(self, terms: Iterable[tuple]):
        clean = []
        for j, (A, B) in enumerate(terms):
            A = as_cmatrix(A, f"A[{j}]")
            B = as_cmatrix(B, f"B[{j}]")
            if A.shape[0] != A.shape[1] or B.shape[0] != B.shape[1]:
                raise DimensionError(f"term {j}: coefficients must be square")
            clean.append((_frozen(A), _frozen(B)))
        if not clean:
            raise DimensionError("a coefficient family needs at least one term")
        m, n = clean[0][0].shape[0], clean[0][1].shape[0]
        for j, (A, B) in enumerate(clean):
            if A.shape[0] != m or B.shape[0] != n:
                raise DimensionError(
                    f"term {j}: expected {m}x{m} and {n}x{n}, got {A.shape} and {B.shape}"
                )
        object.__setattr__(self, "terms", tuple(clean))

    @property
    def m(self) -> int:
        return self.terms[0][0].shape[0]

    @property
    def n(self) -> int:
        return self.terms[0][1].shape[0]

    @property
    def J(self) -> int:
        return len(self.terms)

    @property
    def left(self) -> list[np.ndarray]:
        return [A for A, _ in self.terms]

    @property
    def right(self) -> list[np.ndarray]:
        return [B for _, B in self.terms]

    @cached_property
    def budgets(self) -> tuple[float, float]:
        """``(sum ||A_j||^2, sum ||B_j||^2)``."""
        return (
            sum(op_norm(A) ** 2 for A in self.left),
            sum(op_norm(B) ** 2 for B in self.right),
        )

    @cached_property
    def norm_scale(self) -> float:
        """``sum ||A_j|| ||B_j||``, an upper bound on the operator norm."""
        return sum(op_norm(A) * op_norm(B) for A, B in self.terms)


class ElementaryOperator:
    """The map ``X -> sum_j A_j X B_j`` acting on m x n matrices.

    Instances are immutable. The Kronecker realization
    ``K = sum_j B_j^T (x) A_j`` is computed lazily and cached; concurrent
    fills compute identical values.
    """

    def __init__(self, family, cap: int = KRON_CAP):
        if not isinstance(family, CoefficientFamily):
            family = CoefficientFamily(family)
        self.family = family
        self.cap = cap

    # construction helpers

    @classmethod
    def from_pairs(cls, pairs, **kw):
        return cls(CoefficientFamily(pairs), **kw)

    @classmethod
    def luders(cls, coefficients: Sequence, **kw):
        """Symmetric operator ``X -> sum_j A_j X A_j``."""
        return cls(CoefficientFamily([(A, A) for A in coefficients]), **kw)

    @classmethod
    def identity(cls, m: int, n: int | None = None, **kw):
        n = m if n is None else n
        return cls(CoefficientFamily([(np.eye(m), np.eye(n))]), **kw)

    @property
    def m(self) -> int:
        return self.family.m

    @property
    def n(self) -> int:
        return self.family.n

    @property
    def terms(self):
        return self.family.terms

    def __repr__(self):
        return f"ElementaryOperator(m={self.m}, n={self.n}, J={self.family.J})"

    def apply(self, X) -> np.ndarray:
        X = as_cmatrix(X, "X")
        if X.shape != (self.m, self.n):
            raise DimensionError(f"operator acts on {self.m}x{self.n}, got {X.shape}")
        out = np.zeros((self.m, self.n), dtype=complex)
        for A, B in self.terms:
            out += A @ X @ B
        return out

    __call__ = apply

    @cached_property
    def _kron(self) -> np.ndarray:
        size = self.m * self.n
        if size > self.cap:
            raise CapacityError(f"Kronecker realization {size}x{size} exceeds cap {self.cap}")
        K = np.zeros((size, size), dtype=complex)
        for A, B in self.terms:
            K += np.kron(B.T, A)
        K.setflags(write=False)
        return K

    def kron_matrix(self) -> np.ndarray:
        """Matrix of the operator acting on column-stacked ``vec(X)``."""
        return self._kron

    def apply_matrix(self) -> np.ndarray:
        """The same matrix assembled column by column from images of matrix units."""
        size = self.m * self.n
        if size > self.cap:
            raise CapacityError(f"matrix {size}x{size} exceeds cap {self.cap}")
        M = np.empty((size, size), dtype=complex)
        for col in range(size):
            E = np.zeros(size, dtype=complex)
            E[col] = 1.0
            M[:, col] = vec(self.apply(unvec(E, self.m, self.n)))
        return M

    def spectrum(self, tol: Tolerance = DEFAULT_TOL) -> SpectrumSet:
        s = eig(self.kron_matrix(), tol)
        return SpectrumSet(s.values, tol, "oracle")

    def formal_adjoint(self) -> "ElementaryOperator":
        """``X -> sum_j A_j* X B_j*``; its Kronecker matrix is ``K*``."""
        return ElementaryOperator(
            CoefficientFamily([(A.conj().T, B.conj().T) for A, B in self.terms]),
            cap=self.cap,
        )

    def compose(self, other: "ElementaryOperator") -> "ElementaryOperator":
        """``self o other``: the terms ``(A_i A'_j, B'_j B_i)``."""
        if (self.m, self.n) != (other.m, other.n):
            raise DimensionError(
                f"cannot compose {self.m}x{self.n} operator with {other.m}x{other.n} operator"
            )
        terms = [(A @ A2, B2 @ B) for A, B in self.terms for A2, B2 in other.terms]
        return ElementaryOperator(CoefficientFamily(terms), cap=self.cap)

    def same_terms(self, other: "ElementaryOperator") -> bool:
        """Exact coefficient-wise equality."""
        return self.family.J == other.family.J and all(
            np.array_equal(A, A2) and np.array_equal(B, B2)
            for (A, B), (A2, B2) in zip(self.terms, other.terms)
        )


@dataclass(frozen=True)
class Classification:
    formally_selfadjoint: bool
    formally_normal: bool
    c2_positive: bool
    is_luders: bool
    haagerup_left: float
    haagerup_right: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def classify(op: ElementaryOperator, tol: Tolerance = DEFAULT_TOL) -> Classification:
    """Structural flags of ``op`` read off its Kronecker matrix and coefficients.

    ``haagerup_left = ||sum A_j A_j*||`` and ``haagerup_right = ||sum B_j* B_j||``.
    """
    K = op.kron_matrix()
    luders = op.m == op.n and all(
        op_norm(A - B) <= tol.bound(op_norm(A)) and is_psd(A, tol)
        for A, B in op.terms
    )
    left = sum(A @ A.conj().T for A in op.family.left)
    right = sum(B.conj().T @ B for B in op.family.right)
    return Classification(
        formally_selfadjoint=is_hermitian(K, tol).ok,
        formally_normal=is_normal(K, tol).ok,
        c2_positive=is_psd(K, tol).ok,
        is_luders=luders,
        haagerup_left=op_norm(left),
        haagerup_right=op_norm(right),
    )


def family_to_json(op) -> dict:
    family = op.family if isinstance(op, ElementaryOperator) else op
    return {
        "terms": [{"A": matrix_to_json(A), "B": matrix_to_json(B)} for A, B in family.terms]
    }


def family_from_json(obj: dict) -> ElementaryOperator:
    """Parse ``{"terms": [{"A": ..., "B": ...}, ...]}``; a missing ``B`` copies ``A``."""
    pairs = []
    for t in obj["terms"]:
        A = matrix_from_json(t["A"])
        B = matrix_from_json(t["B"]) if "B" in t else A
        pairs.append((A, B))
    return ElementaryOperator(CoefficientFamily(pairs))
