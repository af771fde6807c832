"""Finite eigenvalue multisets and the distances used to compare them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair.

    A quantity ``q`` passes against a scale ``s`` iff ``|q| <= abs + rel * s``.
    """

    abs: float = 1e-10
    rel: float = 1e-10

    def __post_init__(self):
        if not (self.abs >= 0 and self.rel >= 0):
            raise ValueError(f"tolerances must be non-negative, got {self}")

    def bound(self, scale: float = 0.0) -> float:
        return self.abs + self.rel * float(scale)

    def passes(self, q, scale: float = 0.0) -> bool:
        return bool(abs(q) <= self.bound(scale))

    def scaled(self, factor: float) -> "Tolerance":
        return Tolerance(self.abs * factor, self.rel * factor)


DEFAULT_TOL = Tolerance()


def hausdorff(a, b) -> float:
    """Hausdorff distance between two finite point sets in the complex plane."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size == 0 and b.size == 0:
        return 0.0
    if a.size == 0 or b.size == 0:
        return float("inf")
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def directed_distance(a, b) -> float:
    """Largest distance from a point of ``a`` to its nearest point of ``b``."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size == 0:
        return 0.0
    if b.size == 0:
        return float("inf")
    return float(np.abs(a[:, None] - b[None, :]).min(axis=1).max())


def multiset_distance(a, b) -> float:
    """Largest pair distance under a minimum-cost perfect matching.

    Returns ``inf`` when the multisets have different sizes. A small value
    certifies multiset agreement (the matching is a witness).
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size != b.size:
        return float("inf")
    if a.size == 0:
        return 0.0
    d = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(d)
    return float(d[rows, cols].max())


@dataclass(frozen=True, eq=False)
class SpectrumSet:
    """Eigenvalue multiset together with the tolerance used to judge it.

    ``provenance`` records how the values were obtained: ``"oracle"`` for a
    direct eigensolve of an assembled matrix, ``"formula"`` for values
    predicted from a spectral formula.
    """

    values: np.ndarray
    tol: Tolerance = DEFAULT_TOL
    provenance: str = "oracle"
    _scale: float = field(init=False, repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex).ravel()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(
            self, "_scale", float(np.abs(vals).max()) if vals.size else 0.0
        )

    def __len__(self):
        return self.values.size

    def __iter__(self):
        return iter(self.values)

    @property
    def scale(self) -> float:
        return self._scale

    @property
    def max_abs_imag(self) -> float:
        return float(np.abs(self.values.imag).max()) if len(self) else 0.0

    @property
    def min_real(self) -> float:
        return float(self.values.real.min()) if len(self) else 0.0

    @property
    def is_real(self) -> bool:
        return self.max_abs_imag <= self.tol.bound(self.scale)

    @property
    def is_nonneg(self) -> bool:
        return self.is_real and self.min_real >= -self.tol.bound(self.scale)

    def sorted(self) -> np.ndarray:
        """Values ordered lexicographically by (real, imag)."""
        v = self.values
        return v[np.lexsort((v.imag, v.real))]

    def hausdorff(self, other) -> float:
        return hausdorff(self.values, _values(other))

    def multiset_distance(self, other) -> float:
        return multiset_distance(self.values, _values(other))

    def contains(self, z, tol: Tolerance | None = None) -> bool:
        """True when ``z`` lies within tolerance of some element."""
        tol = self.tol if tol is None else tol
        if not len(self):
            return False
        return bool(np.abs(self.values - z).min() <= tol.bound(self.scale))

    def to_pairs(self) -> list[list[float]]:
        return [[float(z.real), float(z.imag)] for z in self.sorted()]


def _values(x):
    return x.values if isinstance(x, SpectrumSet) else x
