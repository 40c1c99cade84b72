# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
This module evaluates the spherical functions of a rank-one group and the
Harish-Chandra c-function that governs their decay.

On the Cartan ray ``a_t`` the spherical function with parameter ``s`` is the
Jacobi function::

    phi_s(a_t) = 2F1((rho + s)/2, (rho - s)/2; alpha + 1; -sinh(t)^2)

with ``s = i*lambda`` on the principal series. The hypergeometric parameters
are then a conjugate pair, so phi_s is real.
"""

# stdlib
import cmath
import logging
import math

# external
import numpy as np

# internal
from rankerg import errors
from rankerg import utils
from rankerg.special import gamma
from rankerg.special import hypergeom

# Module-level logger
LOG = logging.getLogger(__name__)

# Re-exported kernels.
ln_gamma = gamma.ln_gamma
gauss_2f1_neg = hypergeom.gauss_2f1_neg


class SphericalValue(object):
    """phi_s(a_t) for one parameter and one t.

    Attributes:
        value (float): The spherical function value, in [-1, 1].
        t (float): Radial coordinate.
        param: The SpectralParam.
        degenerate (bool): True when the split-parameter evaluation of the
            connection formula was used.
    """

    def __init__(self, value, t, param, degenerate=False):
        self.value = value
        self.t = t
        self.param = param
        self.degenerate = degenerate

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return "SphericalValue(t={0}, param={1}, value={2!r})".format(
            self.t, self.param.label, self.value
        )


class CFunctionValue(object):
    """c(s) for one spectral parameter.

    Attributes:
        c (complex): The c-function value. Real and positive on the
            complementary series.
        param: The SpectralParam.
    """

    def __init__(self, c, param):
        self.c = c
        self.param = param

    @property
    def real(self):
        return self.c.real

    def __abs__(self):
        return abs(self.c)

    def __repr__(self):
        return "CFunctionValue(param={0}, c={1!r})".format(self.param.label, self.c)


class BoundCertificate(object):
    """Measured constant of the bound ``|phi_s(a_t)| <= C e^{-(rho-Re s)t}(1+t)``.

    Attributes:
        param: The SpectralParam.
        constant (float): The maximum of the normalised ratio over the grid.
        t_at_max (float): Where the maximum was attained.
    """

    def __init__(self, param, constant, t_at_max):
        self.param = param
        self.constant = constant
        self.t_at_max = t_at_max

    def __repr__(self):
        return "BoundCertificate(param={0}, constant={1!r}, t_at_max={2!r})".format(
            self.param.label, self.constant, self.t_at_max
        )


def jacobi_params(group, param):
    """Return the 2F1 parameters (a, b, c) of phi_s for `group`."""
    s = param.s(group)
    rho = group.rho
    a = (rho + s) / 2.0
    b = (rho - s) / 2.0

    if not param.is_principal:
        a, b = a.real, b.real

    return a, b, group.alpha + 1.0


def log_cosh2(ts):
    """log(cosh(t)^2) = log(1 + sinh(t)^2), finite for every finite t."""
    ts = np.abs(utils.as_array(ts))
    out = np.empty_like(ts)
    small = ts <= 1.0
    out[small] = np.log1p(np.sinh(ts[small]) ** 2)
    large = ts[~small]
    out[~small] = 2.0 * (large + np.log1p(np.exp(-2.0 * large)) - math.log(2.0))
    return out


def _evaluate(group, param, ts, method):
    ts = utils.as_array(ts)

    if np.any(ts < 0) or np.any(~np.isfinite(ts)):
        msg = "Spherical functions are evaluated at finite t >= 0"
        raise errors.PreconditionError(msg, name="t", value=ts)

    if param.is_trivial:
        return np.ones_like(ts), False

    a, b, c = jacobi_params(group, param)
    values, degenerate = hypergeom.evaluate_log(a, b, c, log_cosh2(ts), method=method)

    if degenerate:
        LOG.warning("Degenerate connection coefficients for %s on %s; "
                    "using the split-parameter average", param.label, group.name)

    values = np.clip(values, -1.0, 1.0)
    values[ts == 0] = 1.0
    return values, degenerate


def spherical_values(group, param, ts, method=hypergeom.AUTO):
    """Vectorised phi_s(a_t).

    Args:
        group: A RankOneGroup.
        param: A SpectralParam.
        ts: Sequence or array of t >= 0.
        method: 2F1 evaluation strategy; "auto" unless testing overlaps.

    Returns:
        A numpy array of values in [-1, 1].
    """
    values, _ = _evaluate(group, param, ts, method)
    return values


def spherical_fn(group, param, t, method=hypergeom.AUTO):
    """Return the SphericalValue phi_s(a_t).

    The value is exactly 1 for the trivial representation and at t = 0.

    Raises:
        errors.PreconditionError: If t < 0.
        errors.SeriesConvergenceError: If the hypergeometric series fails.
    """
    values, degenerate = _evaluate(group, param, [t], method)
    return SphericalValue(float(values[0]), float(t), param, degenerate=degenerate)


def c_function_value(group, s):
    """c(s) for a complex s; the analytic formula behind hc_c_function().

    A pole of a denominator gamma factor gives exactly 0.

    Raises:
        errors.GammaPoleError: If a numerator gamma factor has a pole.
    """
    s = complex(s)
    rho, alpha, beta = group.rho, group.alpha, group.beta
    lower = ((rho + s) / 2.0, (s + alpha - beta + 1.0) / 2.0)

    if any(gamma.is_pole(z) for z in lower):
        return 0j

    log_c = (
        (rho - s) * math.log(2.0)
        + gamma.ln_gamma(alpha + 1.0)
        + gamma.ln_gamma(s)
        - gamma.ln_gamma(lower[0])
        - gamma.ln_gamma(lower[1])
    )
    return cmath.exp(log_c)


def hc_c_function(group, param):
    """Harish-Chandra c-function::

        c(s) = 2^(rho-s) Gamma(alpha+1) Gamma(s) /
               (Gamma((rho+s)/2) Gamma((s+alpha-beta+1)/2))

    so that ``phi_s(a_t) ~ c(s) e^{-(rho-s)t}`` for large t.

    Returns:
        A CFunctionValue.

    Raises:
        errors.GammaPoleError: At s = 0 (the principal parameter lambda = 0).
    """
    c = c_function_value(group, param.s(group))

    if not param.is_principal:
        c = complex(c.real, 0.0)

    return CFunctionValue(c, param)


def envelope_01(group, param, ts):
    """``e^{-(rho - Re s) t} (1 + t)`` on an array of t."""
    ts = utils.as_array(ts)
    return np.exp(-(group.rho - param.re_s(group)) * ts) * (1.0 + ts)


def certify_bound_01(group, params, t_grid):
    """Measure the constant in ``|phi_s(a_t)| << e^{-(rho-Re s)t}(1+t)``.

    Args:
        group: A RankOneGroup.
        params: Iterable of SpectralParam objects.
        t_grid: Nonempty sequence of t >= 0.

    Returns:
        A list of BoundCertificate objects, one per parameter, in order.
    """
    ts = utils.as_array(t_grid)
    utils.check_nonempty("t_grid", ts)
    certificates = []

    for param in params:
        if param.is_trivial:
            # phi = 1 and the envelope is 1 + t.
            ratios = 1.0 / (1.0 + ts)
        else:
            ratios = np.abs(spherical_values(group, param, ts)) / envelope_01(group, param, ts)

        idx = int(np.argmax(ratios))
        certificate = BoundCertificate(param, float(ratios[idx]), float(ts[idx]))
        LOG.debug("Bound certificate: %r", certificate)
        certificates.append(certificate)

    return certificates
