"""Hilbert-Schmidt commutator budgets of a family against coordinate projections.

For a ladder of coordinate projections ``P_r`` (onto the first ``r`` basis
vectors) the budget at rung ``r`` is ``s_r = sum_j ||[A_j, P_r]||_2^2``. A
family whose budgets stay bounded along an exhausting ladder is
2-semidiagonal. Banded families are the basic bounded example.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError
from .generators import rng_for
from .linalg import as_cmatrix


@dataclass(frozen=True)
class ProjectionLadder:
    N: int
    ranks: tuple[int, ...]

    def __post_init__(self):
        r = tuple(int(x) for x in self.ranks)
        object.__setattr__(self, "ranks", r)
        if any(b <= a for a, b in zip(r, r[1:])):
            raise DimensionError(f"ranks must be strictly increasing: {r}")
        if r and (r[0] < 0 or r[-1] > self.N):
            raise DimensionError(f"ranks must lie in [0, {self.N}]: {r}")

    @classmethod
    def full(cls, N: int) -> "ProjectionLadder":
        """Ranks ``1 .. N-1``."""
        return cls(N, tuple(range(1, N)))


def _family(family: Sequence) -> list[np.ndarray]:
    mats = [as_cmatrix(A) for A in family]
    if not mats:
        raise DimensionError("empty family")
    N = mats[0].shape[0]
    for A in mats:
        if A.shape != (N, N):
            raise DimensionError(f"family members must be {N}x{N}, got {A.shape}")
    return mats


def _sq(a):
    # squared moduli without a sqrt round trip, so integer data stays exact
    return a.real ** 2 + a.imag ** 2


def coordinate_projection(N: int, r: int) -> np.ndarray:
    P = np.zeros((N, N))
    P[:r, :r] = np.eye(r)
    return P


def commutator_hs_budget(family: Sequence, r: int) -> float:
    """``sum_j ||A_j P - P A_j||_F^2`` for the rank-``r`` coordinate projection."""
    mats = _family(family)
    N = mats[0].shape[0]
    if not 0 <= r <= N:
        raise DimensionError(f"rank {r} outside [0, {N}]")
    P = coordinate_projection(N, r)
    return float(sum(_sq(A @ P - P @ A).sum() for A in mats))


def crossing_entry_sum(family: Sequence, r: int) -> float:
    """The same budget counted as entries whose row and column straddle the cut."""
    mats = _family(family)
    N = mats[0].shape[0]
    if not 0 <= r <= N:
        raise DimensionError(f"rank {r} outside [0, {N}]")
    return float(sum(
        _sq(A[:r, r:]).sum() + _sq(A[r:, :r]).sum() for A in mats
    ))


@dataclass
class SemidiagProfile:
    N: int
    J: int
    rungs: list[tuple[int, float]]
    max_budget: float
    growth_exponent: float | None

    def budgets(self) -> np.ndarray:
        return np.array([s for _, s in self.rungs])

    def to_json(self) -> dict:
        return {
            "N": self.N, "J": self.J,
            "profile": [{"r": r, "s": s} for r, s in self.rungs],
            "max": self.max_budget,
            "fit": {"model": "log s = a + k log(r(N-r))", "exponent": self.growth_exponent},
        }

    def to_csv(self, band=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "J", "b", "r", "s"])
        for r, s in self.rungs:
            w.writerow([self.N, self.J, "" if band is None else band, r, repr(s)])
        return buf.getvalue()


def _growth_exponent(N, rungs):
    x, y = [], []
    for r, s in rungs:
        cut = r * (N - r)
        if cut > 0 and s > 0:
            x.append(np.log(cut))
            y.append(np.log(s))
    if len(set(x)) < 2:
        return None
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def semidiag_profile(family: Sequence, ladder: ProjectionLadder | None = None) -> SemidiagProfile:
    """Budgets along ``ladder`` (default: every rank ``1 .. N-1``).

    ``growth_exponent`` is the least-squares slope of ``log s_r`` against
    ``log r(N-r)`` over rungs with positive budget: near 1 for dense
    families, near 0 for banded ones, ``None`` when undetermined.
    """
    mats = _family(family)
    N = mats[0].shape[0]
    ladder = ProjectionLadder.full(N) if ladder is None else ladder
    if ladder.N != N:
        raise DimensionError(f"ladder is for dimension {ladder.N}, family is {N}")
    rungs = [(r, commutator_hs_budget(mats, r)) for r in ladder.ranks]
    mx = max((s for _, s in rungs), default=0.0)
    return SemidiagProfile(N, len(mats), rungs, mx, _growth_exponent(N, rungs))


def _disk(rng, shape):
    # uniform on the closed unit disk: |z| <= 1 and E|z|^2 = 1/2
    rad = np.sqrt(rng.uniform(0.0, 1.0, shape))
    return rad * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, shape))


def band_family(N: int, bandwidth: int, J: int, seed: int) -> list[np.ndarray]:
    """``J`` random matrices supported on ``|i - k| <= bandwidth``, entries in the unit disk."""
    if not 0 <= bandwidth < N:
        raise DimensionError(f"bandwidth must be in [0, {N}), got {bandwidth}")
    rng = rng_for(seed)
    i, k = np.indices((N, N))
    mask = np.abs(i - k) <= bandwidth
    return [np.where(mask, _disk(rng, (N, N)), 0) for _ in range(J)]


def dense_family(N: int, J: int, seed: int) -> list[np.ndarray]:
    """``J`` dense random matrices with entries uniform on the unit disk."""
    rng = rng_for(seed)
    return [_disk(rng, (N, N)) for _ in range(J)]


def band_bound(J: int, bandwidth: int, max_entry: float) -> float:
    """Upper bound ``J b (b+1) c^2`` on every budget of a banded family."""
    return J * bandwidth * (bandwidth + 1) * max_entry ** 2
