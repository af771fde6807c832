"""Randomized formula-versus-oracle sweeps.

Every instance draws from its own RNG stream keyed on ``(seed, index)``, so
results are independent of execution order.
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass


from .elementary import CoefficientFamily, ElementaryOperator
from .generators import gaussian, planted_commuting_normal, psd, rng_for
from .spectrum import Tolerance
from .theorems import (
    check_inclusion, fiber_spectrum, joint_diagonalize, luders_check,
    make_intertwined_instance, oracle_scale, product_spectrum,
)

KINDS = ("comnor", "tens", "luders", "intertwine")

#: Tolerance for formula-versus-oracle comparisons, relative to max(1, ||K||).
FORMULA_TOL = Tolerance(abs=0.0, rel=1e-8)


@dataclass
class InstanceRecord:
    seed: int
    index: int
    dims: list
    J: int
    hausdorff: float
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def _dims(rng, max_dim=6, max_terms=4):
    m = int(rng.integers(1, max_dim + 1))
    n = int(rng.integers(1, max_dim + 1))
    J = int(rng.integers(1, max_terms + 1))
    return m, n, J


def comnor_instance(seed, index, both_normal=True):
    """Commuting normal left family; right family commuting normal or arbitrary."""
    rng = rng_for(seed, index)
    m, n, J = _dims(rng)
    left, _, _ = planted_commuting_normal(rng, m, J)
    if both_normal:
        right, _, _ = planted_commuting_normal(rng, n, J)
    else:
        right = [gaussian(rng, n) for _ in range(J)]
    return ElementaryOperator(CoefficientFamily(zip(left, right)))


def luders_instance(seed, index):
    """Commuting PSD left family, arbitrary PSD right family."""
    rng = rng_for(seed, index)
    m, n, J = _dims(rng)
    left, _, _ = planted_commuting_normal(rng, m, J, kind="nonneg")
    right = [psd(rng, n) / n for _ in range(J)]
    return ElementaryOperator(CoefficientFamily(zip(left, right)))


def run_instance(kind: str, seed: int, index: int, tol: Tolerance = FORMULA_TOL) -> InstanceRecord:
    if kind == "comnor":
        op = comnor_instance(seed, index)
        js_a = joint_diagonalize(op.family.left, seed=index)
        js_b = joint_diagonalize(op.family.right, seed=index)
        d = product_spectrum(js_a, js_b).hausdorff(op.spectrum())
        ok = d <= tol.bound(oracle_scale(op))
        return InstanceRecord(seed, index, [op.m, op.n], op.family.J, d, "PASS" if ok else "FAIL")
    if kind == "tens":
        op = comnor_instance(seed, index, both_normal=False)
        d = fiber_spectrum(op, seed=index).hausdorff(op.spectrum())
        ok = d <= tol.bound(oracle_scale(op))
        return InstanceRecord(seed, index, [op.m, op.n], op.family.J, d, "PASS" if ok else "FAIL")
    if kind == "luders":
        op = luders_instance(seed, index)
        rep = luders_check(op, tol)
        d = max(0.0, -rep.min_re, rep.max_abs_im)
        verdict = rep.verdict if rep.hypotheses_met else "FAIL"
        return InstanceRecord(seed, index, [op.m, op.n], op.family.J, d, verdict)
    if kind == "intertwine":
        rng = rng_for(seed, index)
        k = int(rng.integers(1, 5))
        q = int(rng.integers(k, 9))
        inst = make_intertwined_instance(k, q, seed=int(rng.integers(2**63)))
        chk = check_inclusion(inst, Tolerance(abs=1e-8, rel=0.0))
        ok = chk.ok and inst.intertwining_residual() == 0.0
        return InstanceRecord(seed, index, [k, q], 0, chk.residual, "PASS" if ok else "FAIL")
    raise ValueError(f"unknown verification kind {kind!r}; expected one of {KINDS}")


def verify(kind: str, instances: int, seed: int, tol: Tolerance = FORMULA_TOL) -> list[InstanceRecord]:
    return [run_instance(kind, seed, i, tol) for i in range(instances)]


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["seed", "n", "J", "d_H", "pass"])
    for r in records:
        w.writerow([r.seed, "x".join(map(str, r.dims)), r.J, repr(float(r.hausdorff)),
                    int(r.passed)])
    return buf.getvalue()


def records_to_json(records) -> list[dict]:
    return [{**asdict(r), "pass": r.passed} for r in records]
