"""
Closed-form expectations and bounds for short-cycle counts.

Random irregular graphs
    ``E[N_c]`` is bracketed by ``x^(c/2) / c`` from above, with
    ``x = (2/eta) sum C(d_u, 2) * (2/eta) sum C(d_w, 2)``, and by the same
    value times ``[S(h_u) S(h_w)]^(-c/2)`` from below, where ``S`` is
    Specht's ratio.  For bi-regular graphs both collapse to
    ``((d_u - 1)(d_w - 1))^(c/2) / c``.

Complete bipartite bases
    Exact class count of TBC walks of length ``c`` and the closed-walk count
    of the complete graph ``K_a``.

Random cyclic lifts
    Mean and variance bounds driven by the walk partition of the base.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graph import DegreeSequence, EdgeDistribution, Protograph
from .walks import DEFAULT_ENUMERATION_CAP, partition_walks


@dataclass(frozen=True)
class MeanBounds:
    c: int
    lower: float
    upper: float
    point_estimate: float

    def __post_init__(self):
        if min(self.lower, self.upper, self.point_estimate) < 0:
            raise ValueError("bounds must be non-negative")
        tol = 1e-9 * max(1.0, abs(self.upper))
        if self.lower > self.upper + tol or self.lower > self.point_estimate + tol:
            raise ValueError("lower bound exceeds upper bound or point estimate")

    def as_row(self) -> dict:
        return {"c": self.c, "lower": self.lower, "point": self.point_estimate, "upper": self.upper}


@dataclass(frozen=True)
class SpechtParams:
    h_u: float
    h_w: float

    @classmethod
    def from_degrees(cls, u_degrees, w_degrees) -> SpechtParams:
        return cls(_h(u_degrees), _h(w_degrees))

    @property
    def factor(self) -> float:
        """``S(h_u) * S(h_w)``."""
        return specht_ratio(self.h_u) * specht_ratio(self.h_w)


def _h(degrees) -> float:
    hi, lo = max(degrees), min(degrees)
    if hi == lo:
        return 1.0
    return hi * (hi - 1) / (lo * (lo - 1))


def _check_c(c: int) -> None:
    if c < 4 or c % 2:
        raise ValueError(f"cycle length must be even and at least 4, got {c}")


def _check_degrees(*degrees) -> None:
    if any(d < 2 for d in degrees):
        raise ValueError("all degrees must be at least 2")


def specht_ratio(h: float) -> float:
    """
    ``S(h) = (h - 1) h^(1/(h-1)) / (e ln h)`` with ``S(1) = 1``.

    Evaluated in log space; ``log1p`` keeps it accurate close to 1.
    """
    if h < 1:
        raise ValueError(f"Specht's ratio needs h >= 1, got {h}")
    if h == 1:
        return 1.0
    t = h - 1.0
    log_h = math.log1p(t)
    return math.exp(math.log(t) + log_h / t - 1.0 - math.log(log_h))


def _pair_factors(dist: DegreeSequence | EdgeDistribution) -> tuple[float, float, SpechtParams]:
    """``(2/eta) sum C(d, 2)`` for each part, plus the Specht parameters."""
    if isinstance(dist, DegreeSequence):
        _check_degrees(*dist.u_degrees, *dist.w_degrees)
        eta = dist.eta
        fu = sum(d * (d - 1) for d in dist.u_degrees) / eta
        fw = sum(d * (d - 1) for d in dist.w_degrees) / eta
        return fu, fw, SpechtParams.from_degrees(dist.u_degrees, dist.w_degrees)
    if isinstance(dist, EdgeDistribution):
        _check_degrees(*dist.lam, *dist.rho)
        # edge perspective: (2/eta) sum C(d,2) = sum_d lam_d (d - 1)
        fu = sum(f * (d - 1) for d, f in dist.lam.items()) / sum(dist.lam.values())
        fw = sum(f * (d - 1) for d, f in dist.rho.items()) / sum(dist.rho.values())
        return fu, fw, SpechtParams.from_degrees(list(dist.lam), list(dist.rho))
    raise TypeError("expected a DegreeSequence or an EdgeDistribution")


def expected_cycles_irregular(dist: DegreeSequence | EdgeDistribution, c: int) -> MeanBounds:
    """Asymptotic bounds on ``E[N_c]``; the point estimate is the upper bound."""
    _check_c(c)
    fu, fw, sp = _pair_factors(dist)
    upper = (fu * fw) ** (c // 2) / c
    lower = upper * sp.factor ** (-(c // 2))
    return MeanBounds(c=c, lower=min(lower, upper), upper=upper, point_estimate=upper)


def expected_cycles_biregular(d_u: int, d_w: int, c: int) -> float:
    _check_c(c)
    _check_degrees(d_u, d_w)
    return ((d_u - 1) * (d_w - 1)) ** (c // 2) / c


def lets_multiplicity_estimate(d_u: int, d_w: int, a: int) -> float:
    """Expected number of ``(a, a)`` LETS, i.e. chordless ``2a``-cycles."""
    if a < 1:
        raise ValueError("a must be positive")
    _check_degrees(d_u, d_w)
    # a = 1 falls outside the cycle formula's domain but the expression is kept
    return ((d_u - 1) * (d_w - 1)) ** a / (2 * a)


def tbc_count_complete_exact(a: int, b: int, c: int) -> Fraction:
    """
    Exact rooted-walk count over ``c`` for ``K_{a,b}``.

    Periodic walks make this a non-integer for some lengths, e.g.
    ``(3, 5, 16)`` gives ``2113665/2``.
    """
    _check_c(c)
    if a < 2 or b < 2:
        raise ValueError("both parts need at least two nodes")
    k = c // 2
    sign = (-1) ** k
    num = (a - 1) * (b - 1) * (sign + (a - 1) ** (k - 1)) * (sign + (b - 1) ** (k - 1))
    return Fraction(num, c)


def tbc_count_complete(a: int, b: int, c: int) -> int:
    """Integer TBC count of ``K_{a,b}``: the exact value rounded down."""
    value = tbc_count_complete_exact(a, b, c)
    if value < 0:
        raise AssertionError(f"negative TBC count {value} for a={a}, b={b}, c={c}")
    return value.numerator // value.denominator


def closed_walks_complete(a: int, k: int) -> int:
    """Closed walks of length ``k`` from a fixed node of ``K_a``."""
    if a < 2 or k < 1:
        raise ValueError("need a >= 2 and k >= 1")
    value = Fraction((a - 1) * (-1) ** k + (a - 1) ** k, a)
    if value.denominator != 1:
        raise AssertionError("non-integral closed-walk count")
    return int(value)


def tbc_bound_biregular(n_u: int, d_u: int, d_w: int, c: int) -> float:
    """Upper bound on the TBC walk count of a bi-regular base."""
    _check_c(c)
    return n_u * d_u / c * ((d_u - 1) * (d_w - 1)) ** (c // 2 - 1)


def cyclic_lift_mean_bounds(
    base: Protograph, c: int, N: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> MeanBounds:
    """
    Bounds on ``E[N_c]`` of a random cyclic ``N``-lift from the class counts
    ``T1`` and ``T3`` of the base; the point estimate is the upper bound.
    """
    _check_c(c)
    if N < 1:
        raise ValueError("lifting degree must be positive")
    part = partition_walks(base, c, cap)
    lower = max(0.0, (N - c**3 / 4) * part.T1)
    upper = N * part.T1 + c / 4 * part.T3
    return MeanBounds(c=c, lower=lower, upper=upper, point_estimate=upper)


def cyclic_lift_variance_bound(
    base: Protograph, c: int, N: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> float:
    """Leading linear-in-``N`` term of the variance bound."""
    _check_c(c)
    part = partition_walks(base, c, cap)
    t1, t3 = part.T1, part.T3
    return (c**3 / 2 * t1**2 + c / 4 * t3**2 + c / 2 * t1 * t3) * N
