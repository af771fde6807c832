"""Acceptance criteria 1-10, runnable from pytest or ``elemop selftest``.

Each criterion returns a :class:`CriterionResult`; tolerances and runtime
limits are fixed here and never adjusted by callers.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .elementary import ElementaryOperator
from .generators import DEFAULT_SEED, gaussian, rng_for
from .harness import comnor_instance, verify
from .linalg import vec
from .schur import (
    schur_norm_lower, schur_norm_upper, schur_spectrum, symbol_from_diagonal_family,
)
from .search import (
    SearchConfig, formally_positive_witness, magajna_objective, search_factorization,
)
from .semidiag import band_family, semidiag_profile
from .spectrum import Tolerance, multiset_distance
from .theorems import fiber_spectrum, joint_diagonalize, oracle_scale, product_spectrum


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    time_limit: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.time_limit:g}s)" if self.time_limit else ""
        return (f"[{status}] criterion {self.number:2d} {self.name}: {self.detail}; "
                f"{self.seconds:.2f}s{limit}")


def _random_families(seed, count=200):
    out = []
    for i in range(count):
        rng = rng_for(seed, i)
        m, n = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        J = int(rng.integers(1, 5))
        cplx = bool(rng.integers(2))
        pairs = [(gaussian(rng, m, complex_=cplx), gaussian(rng, n, complex_=cplx))
                 for _ in range(J)]
        out.append((ElementaryOperator.from_pairs(pairs), rng))
    return out


def criterion_1(seed):
    """Kronecker realization matches direct application."""
    worst = 0.0
    for op, rng in _random_families(seed):
        K = op.kron_matrix()
        for _ in range(5):
            X = gaussian(rng, op.m, op.n, complex_=bool(rng.integers(2)))
            err = np.linalg.norm(vec(op.apply(X)) - K @ vec(X))
            worst = max(worst, err / (op.family.norm_scale * np.linalg.norm(X)))
    return worst <= 1e-12, f"max relative error {worst:.2e} <= 1e-12", 2.0


def criterion_2(seed):
    """The formal adjoint assembles to the exact conjugate transpose."""
    bad = sum(
        not np.array_equal(op.formal_adjoint().kron_matrix(), op.kron_matrix().conj().T)
        for op, _ in _random_families(seed)
    )
    return bad == 0, f"{bad}/200 families with inexact adjoint", None


def _sweep(kind, seed, limit):
    recs = verify(kind, 100, seed)
    worst = max(r.hausdorff for r in recs)
    fails = sum(not r.passed for r in recs)
    return fails == 0, f"{100 - fails}/100 pass, max distance {worst:.2e}", limit


def criterion_3(seed):
    """Product formula for commuting normal families."""
    return _sweep("comnor", seed, 5.0)


def criterion_4(seed):
    """Fiber formula; fiber and product formulas agree when both sides commute."""
    ok, detail, _ = _sweep("tens", seed, None)
    worst = 0.0
    for i in range(100):
        op = comnor_instance(seed + 1, i)
        fib = fiber_spectrum(op, seed=i)
        prod = product_spectrum(joint_diagonalize(op.family.left, seed=i),
                                joint_diagonalize(op.family.right, seed=i))
        worst = max(worst, multiset_distance(fib.values, prod.values) / oracle_scale(op))
    ok = ok and worst <= 1e-8
    return ok, f"{detail}; fiber vs product multiset {worst:.2e} <= 1e-8", None


def criterion_5(seed):
    """Non-negative spectrum with commuting PSD left coefficients."""
    return _sweep("luders", seed, None)


def criterion_6(seed):
    """Eigenvalues of N lie in the spectrum of T."""
    return _sweep("intertwine", seed, None)


def criterion_7(seed):
    """Commutator budgets: shift, all-ones and tridiagonal families."""
    N = 16
    shift = np.eye(N, k=-1)
    s_shift = semidiag_profile([shift]).budgets()
    shift_ok = np.all(np.abs(s_shift - 1) <= 1e-12)
    ones = semidiag_profile([np.ones((N, N))])
    ones_ok = all(s == 2 * r * (N - r) for r, s in ones.rungs)
    tri_ok = True
    for i in range(20):
        fam = band_family(32, 1, 3, seed=seed + i)
        c = max(np.abs(A).max() for A in fam)
        tri_ok &= semidiag_profile(fam).max_budget <= 6 * c ** 2
    ok = bool(shift_ok and ones_ok and tri_ok)
    return ok, f"shift={bool(shift_ok)} all-ones={ones_ok} tridiagonal={bool(tri_ok)}", None


_WITNESS = {}


def criterion_8(seed):
    """Gradient correctness, monotone descent, and the lam=4 factorization."""
    rng = rng_for(seed, 8)
    d, J, lam = 3, 3, complex(0.4, -1.3)
    x = rng.standard_normal(4 * J * d * d)
    _, g = magajna_objective(x, lam, d, J)
    h = 1e-6
    worst = 0.0
    for _ in range(50):
        v = rng.standard_normal(x.size)
        v /= np.linalg.norm(v)
        fd = (magajna_objective(x + h * v, lam, d, J)[0]
              - magajna_objective(x - h * v, lam, d, J)[0]) / (2 * h)
        an = g @ v
        worst = max(worst, abs(fd - an) / max(abs(an), 1e-8))
    res = search_factorization(4.0, 3, 1, SearchConfig(restarts=10, iters=500, seed=seed))
    mono = all(np.all(np.diff(t) <= 0) for t in res.run_traces)
    _WITNESS[seed] = res
    ok = worst <= 1e-5 and mono and res.residual <= 1e-6
    return ok, (f"gradient rel. error {worst:.2e} <= 1e-5, monotone={mono}, "
                f"lam=4 residual {res.residual:.2e} <= 1e-6"), 10.0


def criterion_9(seed):
    """Formal positivity: Delta = adj(Lam) Lam maps I to lam^2 I."""
    witnesses = [ElementaryOperator.from_pairs([(2 * np.eye(3), 2 * np.eye(3))])]
    res = _WITNESS.get(seed)
    if res is None:
        res = search_factorization(4.0, 3, 1, SearchConfig(seed=seed))
    if res.residual <= 1e-8:
        witnesses.append(ElementaryOperator.from_pairs(zip(res.left, res.right)))
    tol = Tolerance(abs=1e-8, rel=0.0)
    worst_id = worst_eig = 0.0
    positive = True
    for Lam in witnesses:
        rep = formally_positive_witness(Lam, 4.0, tol)
        worst_id = max(worst_id, rep.identity_residual)
        worst_eig = max(worst_eig, rep.eigen_distance)
        positive &= rep.c2_positive
    ok = worst_id <= 1e-6 and worst_eig <= 1e-6
    return ok, (f"{len(witnesses)} witnesses, ||Delta(I)-16I|| {worst_id:.2e}, "
                f"eigen distance {worst_eig:.2e}, C2-positive={positive}"), None


def criterion_10(seed):
    """Schur multipliers: spectrum, rank-one norm, and norm sandwich."""
    worst_spec = 0.0
    for i in range(50):
        rng = rng_for(seed, 1000 + i)
        m, n, J = int(rng.integers(1, 7)), int(rng.integers(1, 7)), int(rng.integers(1, 5))
        op = ElementaryOperator.from_pairs(
            [(np.diag(gaussian(rng, m, 1).ravel()), np.diag(gaussian(rng, n, 1).ravel()))
             for _ in range(J)])
        F = symbol_from_diagonal_family(op)
        worst_spec = max(worst_spec, multiset_distance(schur_spectrum(F).values,
                                                       op.spectrum().values))
    worst_r1 = 0.0
    for i in range(10):
        rng = rng_for(seed, 2000 + i)
        u = gaussian(rng, int(rng.integers(1, 7)), 1).ravel()
        v = gaussian(rng, int(rng.integers(1, 7)), 1).ravel()
        F = np.outer(u, v)
        target = np.abs(u).max() * np.abs(v).max()
        up = schur_norm_upper(F, seed=seed).value
        lo = schur_norm_lower(F, seed=seed).value
        worst_r1 = max(worst_r1, abs(up - target), abs(lo - target))
    gap = -np.inf
    for i in range(100):
        rng = rng_for(seed, 3000 + i)
        F = gaussian(rng, int(rng.integers(1, 7)), int(rng.integers(1, 7)))
        up = schur_norm_upper(F, seed=seed)
        if up.certified:
            gap = max(gap, schur_norm_lower(F, seed=seed).value - up.value)
    ok = worst_spec <= 1e-10 and worst_r1 <= 1e-6 and gap <= 1e-9
    return ok, (f"spectrum {worst_spec:.2e} <= 1e-10, rank-one {worst_r1:.2e} <= 1e-6, "
                f"max(lower-upper) {gap:.2e} <= 1e-9"), None


CRITERIA = {
    1: ("Kronecker realization", criterion_1),
    2: ("adjoint identity", criterion_2),
    3: ("product spectrum", criterion_3),
    4: ("fiber spectrum", criterion_4),
    5: ("positive one-sided commuting", criterion_5),
    6: ("intertwining inclusion", criterion_6),
    7: ("semidiagonality diagnostics", criterion_7),
    8: ("optimizer soundness", criterion_8),
    9: ("formal positivity", criterion_9),
    10: ("Schur multipliers", criterion_10),
}


def run_criterion(number: int, seed: int = DEFAULT_SEED) -> CriterionResult:
    name, fn = CRITERIA[number]
    t0 = time.perf_counter()
    ok, detail, limit = fn(seed)
    dt = time.perf_counter() - t0
    passed = bool(ok) and (limit is None or dt < limit)
    return CriterionResult(number, name, passed, detail, dt, limit)


def run_all(seed: int = DEFAULT_SEED) -> list[CriterionResult]:
    return [run_criterion(k, seed) for k in CRITERIA]
