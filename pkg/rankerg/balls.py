# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
Haar measure of Riemannian balls and ball averages of spherical functions.

In Cartan coordinates the Haar measure of ``B_t = {g : d(gK, K) <= t}`` is
``m(B_t) = int_0^t Delta(tau) dtau`` with the radial density
``Delta(tau) = sinh(tau)^n1 * sinh(2 tau)^n2``. The ball average of a
spherical function is

    psi_s(t) = int_0^t phi_s(a_tau) Delta(tau) dtau / m(B_t)

Both integrals grow like e^{2 rho t}; they are accumulated scaled by
e^{-2 rho t} (see rankerg.quadrature.cumulative) and only the ratio or the
logarithm is formed at the end.
"""

# stdlib
import collections
import functools
import logging
import math

# external
import numpy as np
from scipy import interpolate

# internal
from rankerg import errors
from rankerg import quadrature
from rankerg import special
from rankerg import utils

# Module-level logger
LOG = logging.getLogger(__name__)

# Knot spacing of the cached volume table.
KNOT_SPACING = 0.05

# Bisection settings for the radial inverse CDF.
CDF_TOL = 1e-12
CDF_MAX_ITER = 200

# Extrapolation nodes and acceptance for psi_asymptotic_constant().
ASYMPTOTIC_NODES = (20.0, 30.0, 40.0)
ASYMPTOTIC_RTOL = 1e-4

LIPSCHITZ_SLACK = 1e-9

_LOG2 = math.log(2.0)


LipschitzCheck = collections.namedtuple("LipschitzCheck", ["difference", "bound", "holds"])


class PsiValue(object):
    """psi_s(t) for one parameter and one t.

    Attributes:
        value (float): The ball average, in [-1, 1].
        t (float): Ball radius.
        param: The SpectralParam.
    """

    def __init__(self, value, t, param):
        self.value = value
        self.t = t
        self.param = param

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return "PsiValue(t={0}, param={1}, value={2!r})".format(
            self.t, self.param.label, self.value
        )


def _log_sinh(x):
    # log sinh(x) for x >= 0 without overflow
    return x + np.log(-np.expm1(-2.0 * x)) - _LOG2


def log_delta(group, ts):
    """log Delta(t) on an array; -inf at t = 0."""
    ts = utils.as_array(ts)

    with np.errstate(divide="ignore"):
        value = group.n1 * _log_sinh(ts)

        if group.n2:
            value = value + group.n2 * _log_sinh(2.0 * ts)

    return value


def delta(group, t):
    """Radial Haar density ``Delta(t) = sinh(t)^n1 sinh(2t)^n2``.

    Returns:
        A float for scalar `t`, otherwise a numpy array.

    Raises:
        errors.PreconditionError: If t < 0.
    """
    ts = utils.as_array(t)

    if np.any(ts < 0):
        raise errors.PreconditionError("Delta needs t >= 0", name="t", value=t)

    values = np.exp(log_delta(group, ts))
    return float(values[0]) if np.ndim(t) == 0 else values


def _scaled_density(group):
    rate = 2.0 * group.rho

    def fn(tau, ref):
        return np.exp(log_delta(group, tau) - rate * ref)

    return fn


def _edges_for(ts, max_panel):
    ts = utils.as_array(ts)
    edges = quadrature.panel_edges(0.0, float(ts.max()), max_panel=max_panel, breaks=ts)
    return edges, np.searchsorted(edges, ts)


def scaled_volumes(group, ts, max_panel=quadrature.MAX_PANEL):
    """Return ``m(B_t) e^{-2 rho t}`` for every t in `ts` (t >= 0)."""
    ts = utils.as_array(ts)

    if np.any(ts < 0):
        raise errors.PreconditionError("Ball radii must be >= 0", name="t", value=ts)

    if not np.any(ts > 0):
        return np.zeros_like(ts)

    edges, idx = _edges_for(ts, max_panel)
    totals = quadrature.cumulative(_scaled_density(group), edges, rate=2.0 * group.rho)
    return totals[idx]


def log_ball_volume(group, t, max_panel=quadrature.MAX_PANEL):
    """log m(B_t); -inf at t = 0."""
    utils.check_nonnegative("t", t)

    if t == 0:
        return -np.inf

    scaled = scaled_volumes(group, [t], max_panel=max_panel)[0]
    return math.log(scaled) + 2.0 * group.rho * t


def ball_volume(group, t, max_panel=quadrature.MAX_PANEL):
    """Haar measure m(B_t) of the ball of radius t.

    Raises:
        errors.PreconditionError: If t < 0.
        errors.QuadratureError: If the quadrature does not converge.
    """
    utils.check_nonnegative("t", t)

    if t == 0:
        return 0.0

    return math.exp(log_ball_volume(group, t, max_panel=max_panel))


def shell_volume(group, t, eps):
    """m(B_{t+eps} minus B_t), integrated directly over [t, t+eps]."""
    utils.check_nonnegative("t", t)
    utils.check_positive("eps", eps)
    rate = 2.0 * group.rho
    top = t + eps

    # scaled to e^{-2 rho (t+eps)} so the integrand stays <= 1
    scaled = quadrature.integrate(lambda tau: np.exp(log_delta(group, tau) - rate * top), t, top)
    return scaled, top


def shell_fraction(group, t, eps):
    """``m(B_{t+eps} minus B_t) / m(B_{t+eps})``."""
    scaled_shell, top = shell_volume(group, t, eps)
    return scaled_shell / scaled_volumes(group, [top])[0]


def volume_regularity(group, t, eps):
    """Return ``m(B_{t+eps} minus B_t) / (eps m(B_t))``.

    Raises:
        errors.PreconditionError: Unless t >= 1 and 0 < eps < 1.
    """
    utils.check_at_least("t", t, 1.0)
    utils.check_open_interval("eps", eps, 0.0, 1.0)

    scaled_shell, top = shell_volume(group, t, eps)
    scaled_ball = scaled_volumes(group, [t])[0]
    # shell is scaled by e^{-2 rho (t+eps)}, ball by e^{-2 rho t}
    return scaled_shell * math.exp(2.0 * group.rho * eps) / (eps * scaled_ball)


class VolumeProfile(object):
    """Cached table of ball volumes for fast radial CDF inversion.

    The scaled volume ``g(tau) = m(B_tau) e^{-2 rho tau}`` is tabulated on
    knots spaced KNOT_SPACING apart together with its first two derivatives,
    and interpolated by piecewise quintic Hermite polynomials. The profile is
    immutable once built.

    Args:
        group: A RankOneGroup.
        t_max: Largest radius the profile must cover.
        knot_spacing: Distance between knots.
    """

    def __init__(self, group, t_max, knot_spacing=KNOT_SPACING):
        utils.check_positive("t_max", t_max)
        utils.check_positive("knot_spacing", knot_spacing)

        self._group = group
        self._rate = 2.0 * group.rho
        count = max(int(math.ceil(t_max / knot_spacing)), 1)
        self._knots = np.linspace(0.0, count * knot_spacing, count + 1)
        self._t_max = float(self._knots[-1])
        self._poly = self._build()

    def _build(self):
        LOG.info("Building volume profile for %s on [0, %g]", self._group.name, self._t_max)
        group, rate, knots = self._group, self._rate, self._knots

        g = quadrature.cumulative(_scaled_density(group), knots, rate=rate)
        scaled_delta = np.exp(log_delta(group, knots) - rate * knots)
        scaled_ddelta = np.zeros_like(knots)

        inner = knots > 0
        tau = knots[inner]
        # Delta'/Delta = n1 coth(tau) + 2 n2 coth(2 tau)
        log_deriv = group.n1 / np.tanh(tau)
        if group.n2:
            log_deriv = log_deriv + 2.0 * group.n2 / np.tanh(2.0 * tau)
        scaled_ddelta[inner] = scaled_delta[inner] * log_deriv

        if (group.n1, group.n2) == (1, 0):
            scaled_ddelta[0] = 1.0

        g1 = scaled_delta - rate * g
        g2 = scaled_ddelta - rate * scaled_delta - rate * g1

        table = np.column_stack([g, g1, g2])
        return interpolate.BPoly.from_derivatives(knots, table)

    @property
    def group(self):
        return self._group

    @property
    def t_max(self):
        return self._t_max

    @property
    def knots(self):
        return self._knots

    def scaled_volume(self, taus):
        """Interpolated ``m(B_tau) e^{-2 rho tau}``."""
        return self._poly(utils.as_array(taus))

    def volume(self, taus):
        taus = utils.as_array(taus)
        return self.scaled_volume(taus) * np.exp(self._rate * taus)

    def _check_radius(self, t):
        if not 0 < t <= self._t_max * (1 + 1e-12):
            msg = "Radius {0} is outside the profile range (0, {1}]".format(t, self._t_max)
            raise errors.PreconditionError(msg, name="t", value=t)

    def cdf(self, taus, t):
        """Radial law ``P(tau' <= tau) = m(B_tau)/m(B_t)`` on [0, t]."""
        self._check_radius(t)
        taus = np.clip(utils.as_array(taus), 0.0, t)
        top = self.scaled_volume([t])[0]
        values = self.scaled_volume(taus) * np.exp(self._rate * (taus - t)) / top
        return np.clip(values, 0.0, 1.0)

    def inverse_cdf(self, quantiles, t):
        """Invert the radial law by bisection to CDF_TOL in CDF space.

        Args:
            quantiles: Array of uniforms in [0, 1].
            t: Ball radius.

        Raises:
            errors.InverseCDFError: If a quantile lies outside [0, 1] or a
                bracket does not close.
        """
        quantiles = utils.as_array(quantiles)

        if np.any(quantiles < 0) or np.any(quantiles > 1) or np.any(np.isnan(quantiles)):
            msg = "Quantiles must lie in [0, 1]"
            raise errors.InverseCDFError(msg, t=t, quantiles=quantiles)

        lo = np.zeros_like(quantiles)
        hi = np.full_like(quantiles, float(t))

        for _ in range(CDF_MAX_ITER):
            mid = 0.5 * (lo + hi)
            below = self.cdf(mid, t) < quantiles
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)

            # bracket width at double resolution puts the CDF error far below CDF_TOL
            closed = hi - lo <= 4 * np.finfo(float).eps * t

            if np.all(closed):
                break
        else:
            msg = "Inverse CDF bisection did not close for {0} quantile(s)".format((~closed).sum())
            raise errors.InverseCDFError(msg, t=t, quantiles=quantiles[~closed])

        return 0.5 * (lo + hi)


@functools.lru_cache(maxsize=256)
def _psi_table(group, param, ts, max_panel):
    ts = np.asarray(ts)
    edges, idx = _edges_for(ts, max_panel)
    rate = 2.0 * group.rho
    density = _scaled_density(group)

    def weighted(tau, ref):
        return special.spherical_values(group, param, tau) * density(tau, ref)

    LOG.debug("psi table for %s on %s: %d panels", param.label, group.name, len(edges) - 1)
    numer = quadrature.cumulative(weighted, edges, rate=rate)
    denom = quadrature.cumulative(density, edges, rate=rate)
    values = numer[idx] / denom[idx]
    values = np.clip(values, -1.0, 1.0)
    values.setflags(write=False)
    return values


def psi_values(group, param, ts, max_panel=quadrature.MAX_PANEL):
    """Vectorised ball averages psi_s(t) for t > 0.

    All radii share one sweep of panels, so a whole profile costs about as
    much as its largest radius. Results are cached.

    Raises:
        errors.PreconditionError: If any t <= 0.
    """
    ts = utils.as_array(ts)

    if np.any(ts <= 0) or np.any(~np.isfinite(ts)):
        raise errors.PreconditionError("psi needs finite t > 0", name="t", value=ts)

    if param.is_trivial:
        return np.ones_like(ts)

    return np.array(_psi_table(group, param, tuple(ts.tolist()), float(max_panel)))


def psi(group, param, t, max_panel=quadrature.MAX_PANEL):
    """Ball average of phi_s over B_t, as a PsiValue.

    Exactly 1 for the trivial representation.
    """
    value = psi_values(group, param, [t], max_panel=max_panel)[0]
    return PsiValue(float(value), float(t), param)


def psi_bound_check(group, params, t_grid, r):
    """Measure ``C = max |psi_s(t)| e^{(rho-r)t} / t`` over params and grid.

    Args:
        group: A RankOneGroup.
        params: SpectralParam objects with Re(s) <= r.
        t_grid: Radii t >= 1.
        r: Spectral gap parameter.

    Returns:
        The constant as a float; 0 for an empty parameter list.

    Raises:
        errors.InvalidParameterError: If a parameter has Re(s) > r.
    """
    ts = utils.as_array(t_grid)
    utils.check_nonempty("t_grid", ts)

    if np.any(ts < 1):
        raise errors.PreconditionError("psi_bound_check needs t >= 1", name="t_grid", value=ts)

    params = list(params)

    for param in params:
        if param.is_trivial or param.re_s(group) > r * (1 + 1e-12):
            msg = "Parameter {0} has Re(s) = {1} > r = {2}".format(
                param.label, param.re_s(group), r)
            raise errors.InvalidParameterError(msg, param=param)

    constant = 0.0
    envelope = np.exp((group.rho - r) * ts) / ts

    for param in params:
        ratios = np.abs(psi_values(group, param, ts)) * envelope
        LOG.debug("psi bound for %s: %g", param.label, ratios.max())
        constant = max(constant, float(ratios.max()))

    return constant


def psi_closed_form_constant(group, param):
    """Leading constant ``c(s) 2 rho / (rho + s)`` of psi_s(t) e^{(rho-s)t}."""
    c = special.hc_c_function(group, param).real
    s = param.re_s(group)
    return c * 2.0 * group.rho / (group.rho + s)


def psi_asymptotic_constant(group, param, nodes=ASYMPTOTIC_NODES):
    """Limit of ``psi_s(t) e^{(rho-s)t}`` by Aitken extrapolation.

    Args:
        group: A RankOneGroup.
        param: Trivial or Complementary(s) with s < rho.
        nodes: Three increasing, equally spaced radii.

    Returns:
        The extrapolated constant (1 for the trivial representation).

    Raises:
        errors.InvalidParameterError: For principal parameters or s = rho.
        errors.ExtrapolationError: If the last stage moves the estimate by
            more than ASYMPTOTIC_RTOL relative.
    """
    if param.is_trivial:
        return 1.0

    if not param.is_complementary:
        msg = "Asymptotic constants are defined for complementary parameters"
        raise errors.InvalidParameterError(msg, param=param)

    s = param.value

    if abs(s - group.rho) <= 1e-12 * group.rho:
        msg = "s = rho is reserved for the trivial representation"
        raise errors.InvalidParameterError(msg, param=param)

    nodes = utils.as_array(nodes)
    values = psi_values(group, param, nodes) * np.exp((group.rho - s) * nodes)
    v0, v1, v2 = values[-3:]
    denom = (v2 - v1) - (v1 - v0)

    if denom == 0:
        extrapolated = float(v2)
    else:
        extrapolated = float(v2 - (v2 - v1) ** 2 / denom)

    change = abs(extrapolated - v2) / abs(extrapolated)

    if change > ASYMPTOTIC_RTOL:
        msg = "psi asymptotics for {0} not settled: last stage moved {1:.3g} relative"
        raise errors.ExtrapolationError(msg.format(param.label, change),
                                        nodes=tuple(nodes), values=tuple(values))

    return extrapolated


def psi_lipschitz_check(group, param, t, eps):
    """Compare ``|psi(t+eps) - psi(t)|`` with ``m(B_{t+eps} minus B_t)/m(B_{t+eps})``.

    Returns:
        A LipschitzCheck(difference, bound, holds) tuple; ``holds`` allows
        LIPSCHITZ_SLACK.
    """
    utils.check_at_least("t", t, 1.0)
    utils.check_open_interval("eps", eps, 0.0, 1.0)

    values = psi_values(group, param, [t, t + eps])
    difference = abs(float(values[1] - values[0]))
    bound = float(shell_fraction(group, t, eps))
    return LipschitzCheck(difference, bound, difference <= bound + LIPSCHITZ_SLACK)
