"""
Poisson goodness of fit and factorial moments for cycle-count samples.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Mapping, Sequence

import numpy as np
from scipy.special import gammainc, gammaincc

MIN_EXPECTED = 5.0


def _poisson_pmf(k: int, lam: float) -> float:
    return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))


def poisson_gof(histogram: Mapping[int, int], lam: float) -> tuple[float, float]:
    """
    Pearson chi-square test of observed counts against Poisson(``lam``).

    Bins are the integers; adjacent bins are merged from each tail inwards
    until every bin expects at least five observations, the two tails
    absorbing the rest of the Poisson mass.  Degrees of freedom are the
    merged bin count minus one.

    Returns
    -------
    statistic, p_value
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    total = sum(histogram.values())
    if total <= 0 or any(v < 0 for v in histogram.values()):
        raise ValueError("histogram must hold a positive number of non-negative counts")

    lo = max(0, min(min(histogram), int(lam - 10 * math.sqrt(lam) - 10)))
    hi = max(max(histogram), int(lam + 10 * math.sqrt(lam) + 10))
    ks = range(lo, hi + 1)
    exp = [total * _poisson_pmf(k, lam) for k in ks]
    obs = [histogram.get(k, 0) for k in ks]
    # P[X < lo] = Q(lo, lam) and P[X > hi] = P(hi + 1, lam)
    if lo > 0:
        exp[0] += total * float(gammaincc(lo, lam))
    exp[-1] += total * float(gammainc(hi + 1, lam))

    bins: list[list[float]] = []
    acc_e = acc_o = 0.0
    for e, o in zip(exp, obs):
        acc_e += e
        acc_o += o
        if acc_e >= MIN_EXPECTED:
            bins.append([acc_e, acc_o])
            acc_e = acc_o = 0.0
    if acc_e or acc_o:
        if bins:
            bins[-1][0] += acc_e
            bins[-1][1] += acc_o
        else:
            bins.append([acc_e, acc_o])
    if len(bins) < 2:
        raise ValueError("fewer than two bins after merging; histogram too small for the test")

    stat = float(sum((o - e) ** 2 / e for e, o in bins))
    dof = len(bins) - 1
    return stat, float(gammaincc(dof / 2.0, stat / 2.0))


def histogram_of(samples: Sequence[int]) -> dict[int, int]:
    return dict(sorted(Counter(int(x) for x in samples).items()))


def falling_factorial(x: np.ndarray, r: int) -> np.ndarray:
    out = np.ones(len(x), dtype=float)
    x = np.asarray(x, dtype=float)
    for i in range(r):
        out *= x - i
    return out


def factorial_moment(samples: Sequence[int], r: int) -> float:
    """Sample mean of ``x (x - 1) ... (x - r + 1)``."""
    if r < 0:
        raise ValueError("order must be non-negative")
    if r == 0:
        return 1.0
    return float(falling_factorial(np.asarray(samples), r).mean())


def joint_independence_check(
    samples_a: Sequence[int],
    samples_b: Sequence[int],
    r_a: int,
    r_b: int,
    lam_a: float,
    lam_b: float,
) -> float:
    """
    ``E[(A)_{r_a} (B)_{r_b}] / (lam_a^r_a lam_b^r_b)`` from paired samples.

    Close to 1 when ``A`` and ``B`` are independent Poisson variables with
    means ``lam_a`` and ``lam_b``.
    """
    a = np.asarray(samples_a)
    b = np.asarray(samples_b)
    if a.shape != b.shape:
        raise ValueError("samples must be paired")
    if r_a == 0 and r_b == 0:
        return 1.0
    joint = float((falling_factorial(a, r_a) * falling_factorial(b, r_b)).mean())
    return joint / (lam_a**r_a * lam_b**r_b)
