from __future__ import annotations

import numpy as np
import pytest
from scipy.stats import chi2

from tannercycles.stats import (
    factorial_moment,
    histogram_of,
    joint_independence_check,
    poisson_gof,
)


def test_gof_calibrated_on_poisson_draws():
    rng = np.random.default_rng(11)
    passes = sum(
        poisson_gof(histogram_of(rng.poisson(166.7, 1000)), 166.7)[1] > 0.01 for _ in range(100)
    )
    assert passes >= 95


def test_gof_rejects_constant_histogram():
    _, p = poisson_gof({100: 1000}, 100.0)
    assert p < 1e-6


def test_gof_rejects_shifted_mean():
    rng = np.random.default_rng(2)
    _, p = poisson_gof(histogram_of(rng.poisson(120, 2000)), 100.0)
    assert p < 1e-6


def test_gof_needs_two_bins():
    with pytest.raises(ValueError):
        poisson_gof({3: 1}, 3.0)
    with pytest.raises(ValueError):
        poisson_gof({}, 3.0)
    with pytest.raises(ValueError):
        poisson_gof({3: 10}, 0.0)


def test_gof_p_value_matches_scipy():
    rng = np.random.default_rng(5)
    hist = histogram_of(rng.poisson(4.0, 500))
    stat, p = poisson_gof(hist, 4.0)
    # recover the degrees of freedom by matching against the reference survival function
    assert any(abs(chi2.sf(stat, dof) - p) < 1e-12 for dof in range(1, 30))


def test_factorial_moments():
    assert factorial_moment([1, 2, 3], 0) == 1.0
    assert factorial_moment([1, 2, 3], 1) == 2.0
    assert factorial_moment([3], 3) == 6.0
    rng = np.random.default_rng(8)
    x = rng.poisson(6.0, 20000)
    for r in (1, 2, 3):
        ff = np.prod([x - i for i in range(r)], axis=0).astype(float)
        se = ff.std() / np.sqrt(len(x))
        assert abs(factorial_moment(x, r) - 6.0**r) < 5 * se
    with pytest.raises(ValueError):
        factorial_moment(x, -1)


def test_joint_independence():
    assert joint_independence_check([1, 2], [3, 4], 0, 0, 5.0, 5.0) == 1.0
    rng = np.random.default_rng(9)
    a, b = rng.poisson(10, 20000), rng.poisson(20, 20000)
    assert joint_independence_check(a, b, 1, 1, 10, 20) == pytest.approx(1, abs=0.03)
    assert joint_independence_check(a, b, 2, 1, 10, 20) == pytest.approx(1, abs=0.05)
    with pytest.raises(ValueError):
        joint_independence_check([1], [1, 2], 1, 1, 1, 1)


def test_histogram_sorted():
    assert histogram_of([3, 1, 3, 2]) == {1: 1, 2: 1, 3: 2}
