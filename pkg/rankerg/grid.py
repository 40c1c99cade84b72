# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
The time grid used to pass from grid times to all times t >= 1.

Every unit interval [m, m+1], m >= 1, is cut into
``floor(e^{delta m/2} + 1)`` cells of equal length. With this refinement the
series ``sum_n t_n^2 e^{-delta t_n}`` converges, dominated term by term by
``sum_m (m+1)^2 floor(e^{delta m/2}+1) e^{-delta m}``.
"""

# stdlib
import logging
import math

# external
import numpy as np

# internal
from rankerg import errors
from rankerg import utils

# Module-level logger
LOG = logging.getLogger(__name__)

# Largest grid time_grid() will materialise.
MAX_GRID_POINTS = 2 ** 24

# Intervals with more cells than this are summed in closed form.
ENUMERATION_CAP = 2 ** 22

CAUCHY_TOL = 1e-6

_CHUNK = 2 ** 20


def cells_per_unit(delta, m):
    """Number of equal cells in [m, m+1]: ``floor(e^{delta m/2} + 1)``."""
    return int(math.floor(math.exp(0.5 * delta * m) + 1.0))


def time_grid(delta, m_max):
    """Return the increasing grid times covering [1, m_max + 1].

    Args:
        delta: Positive decay rate rho - r.
        m_max: Last unit interval [m_max, m_max + 1].

    Returns:
        A numpy array starting at 1 and ending at m_max + 1.

    Raises:
        errors.PreconditionError: For delta <= 0, m_max < 1 or a grid with
            more than MAX_GRID_POINTS points.
    """
    utils.check_positive("delta", delta)
    utils.check_at_least("m_max", m_max, 1)
    m_max = int(m_max)

    counts = [cells_per_unit(delta, m) for m in range(1, m_max + 1)]
    total = sum(counts) + 1

    if total > MAX_GRID_POINTS:
        msg = "Grid would hold {0} points (limit {1})".format(total, MAX_GRID_POINTS)
        raise errors.PreconditionError(msg, name="m_max", value=m_max)

    pieces = [m + np.arange(k) / float(k) for m, k in zip(range(1, m_max + 1), counts)]
    pieces.append(np.array([m_max + 1.0]))
    return np.concatenate(pieces)


def _term(delta, t):
    return t * t * np.exp(-delta * t)


def _term_d1(delta, t):
    return (2.0 * t - delta * t * t) * math.exp(-delta * t)


def _term_d3(delta, t):
    return (-6.0 * delta + 6.0 * delta ** 2 * t - delta ** 3 * t * t) * math.exp(-delta * t)


def _term_integral(delta, a, b):
    """Exact integral of t^2 e^{-delta t} over [a, b]."""
    def antiderivative(t):
        return -math.exp(-delta * t) * (t * t / delta + 2.0 * t / delta ** 2 + 2.0 / delta ** 3)

    return antiderivative(b) - antiderivative(a)


def _interval_max(delta, m):
    """max of t^2 e^{-delta t} on [m, m+1]; the peak sits at t = 2/delta."""
    peak = min(max(2.0 / delta, m), m + 1.0)
    return float(_term(delta, peak))


def _enumerated_sum(delta, m, k):
    total = 0.0
    largest = 0.0

    for start in range(0, k, _CHUNK):
        j = np.arange(start, min(start + _CHUNK, k), dtype=float)
        values = _term(delta, m + j / k)
        total += float(values.sum())
        largest = max(largest, float(values.max()))

    return total, largest


def _euler_maclaurin_sum(delta, m, k):
    """Left-point sum over k cells of [m, m+1] via Euler-Maclaurin."""
    h = 1.0 / k
    a, b = float(m), float(m + 1)
    total = (
        _term_integral(delta, a, b) / h
        + 0.5 * (_term(delta, a) - _term(delta, b))
        + (h / 12.0) * (_term_d1(delta, b) - _term_d1(delta, a))
        - (h ** 3 / 720.0) * (_term_d3(delta, b) - _term_d3(delta, a))
    )
    return float(total), _interval_max(delta, m)


class FiniteSumCheck(object):
    """Partial sums of ``sum_n t_n^2 e^{-delta t_n}`` over the grid.

    Attributes:
        delta (float): Decay rate.
        counts (list): Cells per interval, m = 1..m_max.
        partial_sums (numpy.ndarray): S(M) for M = 1..m_max.
        dominating_sums (numpy.ndarray): Partial sums of
            ``(m+1)^2 floor(e^{delta m/2}+1) e^{-delta m}``.
        dominated (bool): Every term is below its interval bound
            ``(m+1)^2 e^{-delta m}``.
        cauchy_gaps (list): (M, |S(2M) - S(M)|) for 2M <= m_max.
        threshold (int): Smallest M from which every recorded gap is below
            CAUCHY_TOL, or None.
    """

    def __init__(self, delta, counts, partial_sums, dominating_sums, dominated,
                 cauchy_gaps, threshold, enumerated_up_to):
        self.delta = delta
        self.counts = counts
        self.partial_sums = partial_sums
        self.dominating_sums = dominating_sums
        self.dominated = dominated
        self.cauchy_gaps = cauchy_gaps
        self.threshold = threshold
        self.enumerated_up_to = enumerated_up_to

    @property
    def total(self):
        return float(self.partial_sums[-1])

    def __repr__(self):
        return "FiniteSumCheck(delta={0}, total={1!r}, threshold={2})".format(
            self.delta, self.total, self.threshold)


def finite_sum_check(delta, m_max, tol=CAUCHY_TOL):
    """Sum ``t_n^2 e^{-delta t_n}`` over the grid of time_grid(delta, m_max).

    Intervals with at most ENUMERATION_CAP cells are summed point by point;
    larger ones use the Euler-Maclaurin expansion of the left-point sum,
    with domination checked through the exact interval maximum.

    Returns:
        A FiniteSumCheck.
    """
    utils.check_positive("delta", delta)
    utils.check_at_least("m_max", m_max, 1)
    m_max = int(m_max)

    counts, sums, bounds = [], [], []
    dominated = True
    enumerated_up_to = 0

    for m in range(1, m_max + 1):
        k = cells_per_unit(delta, m)
        bound = (m + 1.0) ** 2 * math.exp(-delta * m)

        if k <= ENUMERATION_CAP:
            interval_sum, largest = _enumerated_sum(delta, m, k)
            enumerated_up_to = m
        else:
            interval_sum, largest = _euler_maclaurin_sum(delta, m, k)

        if largest > bound:
            LOG.warning("Term bound fails on [%d, %d]: %g > %g", m, m + 1, largest, bound)
            dominated = False

        counts.append(k)
        sums.append(interval_sum)
        bounds.append(k * bound)

    partial = np.cumsum(sums)
    dominating = np.cumsum(bounds)
    gaps = [(big, abs(float(partial[2 * big - 1] - partial[big - 1])))
            for big in range(1, m_max // 2 + 1)]

    threshold = None
    for big, gap in reversed(gaps):
        if gap >= tol:
            break
        threshold = big

    LOG.info("Grid sum for delta=%g up to m=%d: %r (Cauchy threshold M=%s)",
             delta, m_max, float(partial[-1]), threshold)
    return FiniteSumCheck(delta, counts, partial, dominating, dominated, gaps, threshold,
                          enumerated_up_to)
