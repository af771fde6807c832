import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from elemop.errors import DimensionError
from elemop.semidiag import (
    ProjectionLadder, band_bound, band_family, commutator_hs_budget, coordinate_projection,
    crossing_entry_sum, dense_family, semidiag_profile,
)

seeds = st.integers(0, 2**32 - 1)


def test_diagonal_family_has_zero_budget():
    prof = semidiag_profile([np.diag(np.arange(10.0)), np.diag(np.ones(10))])
    assert prof.max_budget == 0
    assert prof.growth_exponent is None


def test_shift_budget_is_one():
    N = 12
    prof = semidiag_profile([np.eye(N, k=-1)])
    np.testing.assert_array_equal(prof.budgets(), np.ones(N - 1))


def test_all_ones_budget():
    N = 16
    prof = semidiag_profile([np.ones((N, N))])
    for r, s in prof.rungs:
        assert s == 2 * r * (N - r)
    assert prof.max_budget == 128
    assert prof.growth_exponent == pytest.approx(1.0, abs=1e-12)


def test_projection():
    P = coordinate_projection(4, 2)
    np.testing.assert_array_equal(P @ P, P)
    assert np.trace(P) == 2


@given(seeds, st.integers(2, 10), st.integers(1, 3), st.data())
def test_budget_equals_crossing_entries(seed, N, J, data):
    fam = dense_family(N, J, seed)
    r = data.draw(st.integers(0, N))
    s = commutator_hs_budget(fam, r)
    assert s == pytest.approx(crossing_entry_sum(fam, r), rel=1e-12, abs=1e-14)


@given(seeds, st.integers(2, 10), st.data())
def test_budget_symmetry_under_complement(seed, N, data):
    # [A, P] and [A, I-P] have the same norm
    fam = dense_family(N, 2, seed)
    r = data.draw(st.integers(0, N))
    s_compl = sum(np.linalg.norm(A @ (np.eye(N) - coordinate_projection(N, r))
                                 - (np.eye(N) - coordinate_projection(N, r)) @ A) ** 2
                  for A in fam)
    assert commutator_hs_budget(fam, r) == pytest.approx(s_compl, rel=1e-12, abs=1e-14)


def test_trivial_projections_have_zero_budget():
    fam = dense_family(6, 2, 0)
    assert commutator_hs_budget(fam, 0) == 0
    assert commutator_hs_budget(fam, 6) == 0


@settings(max_examples=50)
@given(seeds, st.integers(4, 20), st.integers(0, 3), st.integers(1, 3))
def test_band_bound(seed, N, b, J):
    b = min(b, N - 1)
    fam = band_family(N, b, J, seed)
    c = max(np.abs(A).max() for A in fam)
    assert semidiag_profile(fam).max_budget <= band_bound(J, b, c) * (1 + 1e-12)


def test_bandwidth_zero_is_diagonal():
    fam = band_family(8, 0, 3, seed=1)
    assert semidiag_profile(fam).max_budget == 0


def test_band_entries_in_unit_disk():
    fam = band_family(16, 2, 4, seed=3)
    for A in fam:
        assert np.abs(A).max() <= 1
        i, k = np.nonzero(A)
        assert np.abs(i - k).max() <= 2


def test_tridiagonal_bound_over_seeds():
    for seed in range(20):
        fam = band_family(32, 1, 3, seed)
        c = max(np.abs(A).max() for A in fam)
        assert semidiag_profile(fam).max_budget <= 6 * c ** 2


def test_dense_growth():
    N = 24
    ratios = []
    for seed in range(20):
        prof = semidiag_profile(dense_family(N, 3, seed))
        ratios.append([s / (r * (N - r)) for r, s in prof.rungs])
    # each crossing entry contributes E|z|^2 = 1/2, per member and per side
    assert np.mean(ratios, axis=0).min() >= 0.1
    assert np.mean(ratios) == pytest.approx(3.0, rel=0.1)


def test_growth_exponent_separates_dense_from_band():
    dense = semidiag_profile(dense_family(32, 3, 0)).growth_exponent
    band = semidiag_profile(band_family(32, 1, 3, 0)).growth_exponent
    assert dense > 0.8
    assert abs(band) < 0.3


def test_budget_monotone_in_family():
    fam = dense_family(10, 4, 5)
    prev = np.zeros(9)
    for k in range(1, 5):
        cur = semidiag_profile(fam[:k]).budgets()
        assert np.all(cur >= prev)
        prev = cur


def test_ladder_and_errors():
    prof = semidiag_profile(dense_family(8, 1, 0), ProjectionLadder(8, (2, 4, 6)))
    assert [r for r, _ in prof.rungs] == [2, 4, 6]
    with pytest.raises(DimensionError):
        ProjectionLadder(8, (3, 2))
    with pytest.raises(DimensionError):
        ProjectionLadder(8, (9,))
    with pytest.raises(DimensionError):
        semidiag_profile(dense_family(8, 1, 0), ProjectionLadder(6, (1,)))
    with pytest.raises(DimensionError):
        semidiag_profile([])
    with pytest.raises(DimensionError):
        semidiag_profile([np.eye(2), np.eye(3)])
    with pytest.raises(DimensionError):
        commutator_hs_budget([np.eye(3)], 4)
    with pytest.raises(DimensionError):
        band_family(4, 4, 1, 0)


def test_outputs():
    prof = semidiag_profile([np.eye(4, k=-1)])
    obj = prof.to_json()
    assert obj["max"] == 1.0 and len(obj["profile"]) == 3
    lines = prof.to_csv(band=1).splitlines()
    assert lines[0] == "N,J,b,r,s"
    assert lines[1] == "4,1,1,1,1.0"
