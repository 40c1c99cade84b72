# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
Gauss hypergeometric function 2F1(a, b; c; x) on the negative real axis.

Three evaluation regions cover x <= 0:

* ``|x| <= 1/2``: the defining power series.
* ``x/(x-1) <= 3/4``: the Pfaff transformation, a series in x/(x-1).
* otherwise: the connection formula, two series in 1/(1-x) with gamma
  factor coefficients.

Parameters must be real, or ``a`` and ``b`` must be complex conjugates; in
both cases the function is real on x <= 0.
"""

# stdlib
import logging

# external
import numpy as np

# internal
from rankerg import errors
from rankerg import utils
from rankerg.special import gamma

# Module-level logger
LOG = logging.getLogger(__name__)

SERIES = "series"
PFAFF = "pfaff"
CONNECTION = "connection"
AUTO = "auto"

METHODS = (AUTO, SERIES, PFAFF, CONNECTION)

# Region thresholds on |x| and on the Pfaff variable x/(x-1).
SERIES_RADIUS = 0.5
PFAFF_LIMIT = 0.75

# Half-width of the parameter split used when a - b is an integer.
DEGENERATE_EPS = 1e-6

MAX_TERMS = 50000
SERIES_RTOL = 1e-17

_REAL = "real"
_CONJUGATE = "conjugate"


def _pairing(a, b):
    a = complex(a)
    b = complex(b)

    if a.imag == 0 and b.imag == 0:
        return _REAL

    if abs(a - b.conjugate()) <= 1e-15 * max(1.0, abs(a)):
        return _CONJUGATE

    msg = "2F1 parameters must be real or a conjugate pair. Found a={0}, b={1}"
    raise errors.InvalidParameterError(msg.format(a, b), param=(a, b))


def _terminates(a, b):
    """Return the degree if a or b is a nonpositive integer, else None."""
    for p in (complex(a), complex(b)):
        if gamma.is_pole(p):
            return int(-p.real)
    return None


def _series(coeff, c, z):
    """Sum ``sum_k prod_{j<k} coeff(j)/((c+j)(j+1)) z^k`` elementwise.

    Args:
        coeff: Callable returning the numerator factor for index k.
        c: Lower parameter.
        z: numpy array of arguments with |z| < 1 (or a terminating series).
    """
    dtype = np.result_type(z, coeff(0), c)
    total = np.ones_like(z, dtype=dtype)
    term = np.ones_like(z, dtype=dtype)

    for k in range(MAX_TERMS):
        term = term * (coeff(k) / ((c + k) * (k + 1.0))) * z
        total = total + term

        if np.all(np.abs(term) <= SERIES_RTOL * np.abs(total)):
            return total

    msg = "2F1 series did not converge after {0} terms".format(MAX_TERMS)
    raise errors.SeriesConvergenceError(msg, terms=MAX_TERMS,
                                        diagnostics={"max_z": float(np.max(np.abs(z)))})


def _direct(a, b, c, x):
    # (a+k)(b+k) = k^2 + k(a+b) + ab is real for real and conjugate pairs.
    total = complex(a) + complex(b)
    product = complex(a) * complex(b)
    sigma = total.real
    prod = product.real
    return _series(lambda k: k * k + k * sigma + prod, float(np.real(c)), x).real


def _pfaff(a, b, c, log_1mx):
    # x/(x-1) = 1 - 1/(1-x)
    z = -np.expm1(-log_1mx)
    cb = c - b
    value = _series(lambda k: (a + k) * (cb + k), c, z)
    value = value * np.exp(-a * log_1mx)
    return value.real


def _connection(a, b, c, log_1mx, pairing):
    w = np.exp(-log_1mx)

    coeff_a = gamma.gamma_ratio((c, b - a), (b, c - a))
    ca = c - b
    term_a = coeff_a * np.exp(-a * log_1mx) * _series(
        lambda k: (a + k) * (ca + k), a - b + 1, w)

    if pairing == _CONJUGATE:
        return 2.0 * term_a.real

    coeff_b = gamma.gamma_ratio((c, a - b), (a, c - b))
    cb = c - a
    term_b = coeff_b * np.exp(-b * log_1mx) * _series(
        lambda k: (b + k) * (cb + k), b - a + 1, w)

    return (term_a + term_b).real


def _connection_or_split(a, b, c, log_1mx, pairing):
    """Connection formula, with the split-parameter average when a - b is an
    integer. Returns (values, degenerate)."""
    diff = complex(a) - complex(b)

    if abs(diff - round(diff.real)) >= DEGENERATE_EPS:
        try:
            return _connection(a, b, c, log_1mx, pairing), False
        except errors.DegenerateParameterError:
            pass

    LOG.debug("Degenerate connection coefficients for a=%s b=%s; splitting by %g",
              a, b, DEGENERATE_EPS)

    delta = 0.5 * DEGENERATE_EPS
    a, b = complex(a).real, complex(b).real
    upper = _connection(a + delta, b - delta, c, log_1mx, _REAL)
    lower = _connection(a - delta, b + delta, c, log_1mx, _REAL)
    return 0.5 * (upper + lower), True


def _check_method(method):
    if method not in METHODS:
        msg = "Unknown 2F1 method '{0}'. Expected one of {1}".format(method, METHODS)
        raise errors.InvalidParameterError(msg, param=method)


def _normalise(a, b, c):
    c = complex(c)

    if gamma.is_pole(c):
        msg = "2F1 lower parameter c = {0} is a nonpositive integer".format(c.real)
        raise errors.InvalidParameterError(msg, param=c)

    pairing = _pairing(a, b)

    if pairing == _REAL:
        return complex(a).real, complex(b).real, c.real, pairing

    return complex(a), complex(b), c.real, pairing


def _dispatch(a, b, c, x, log_1mx, pairing, method):
    """Evaluate on matching arrays of x and log(1 - x). Entries of x may be
    -inf where the connection region applies."""
    values = np.ones_like(log_1mx)
    nonzero = log_1mx > 0

    if _terminates(a, b) is not None:
        if np.any(~np.isfinite(x)):
            msg = "Terminating 2F1 series need finite x"
            raise errors.PreconditionError(msg, name="x", value=x)
        # Polynomial: the direct sum is exact for any x.
        values[nonzero] = _direct(a, b, c, x[nonzero])
        return values, False

    if method == AUTO:
        # |x| <= 1/2 and x/(x-1) <= 3/4 in terms of log(1 - x).
        in_series = nonzero & (log_1mx <= np.log1p(SERIES_RADIUS))
        in_pfaff = nonzero & ~in_series & (log_1mx <= -np.log1p(-PFAFF_LIMIT))
        in_connection = nonzero & ~in_series & ~in_pfaff
    else:
        none = np.zeros_like(nonzero)
        in_series = nonzero if method == SERIES else none
        in_pfaff = nonzero if method == PFAFF else none
        in_connection = nonzero if method == CONNECTION else none

    degenerate = False

    if np.any(in_series):
        if np.any(-x[in_series] >= 1.0):
            msg = "The direct 2F1 series needs |x| < 1"
            raise errors.PreconditionError(msg, name="x", value=x[in_series])
        values[in_series] = _direct(a, b, c, x[in_series])

    if np.any(in_pfaff):
        values[in_pfaff] = _pfaff(a, b, c, log_1mx[in_pfaff])

    if np.any(in_connection):
        values[in_connection], degenerate = _connection_or_split(
            a, b, c, log_1mx[in_connection], pairing)

    return values, degenerate


def evaluate(a, b, c, x, method=AUTO):
    """Evaluate 2F1 on an array of nonpositive arguments.

    Args:
        a, b: Upper parameters (real, or a complex conjugate pair).
        c: Lower parameter; must not be a nonpositive integer.
        x: Array of arguments <= 0.
        method: AUTO picks the region per argument; SERIES, PFAFF or
            CONNECTION force one evaluation strategy.

    Returns:
        A (values, degenerate) pair: a float64 array and a flag telling
        whether the split-parameter average was used anywhere.
    """
    _check_method(method)
    a, b, c, pairing = _normalise(a, b, c)
    x = utils.as_array(x)

    if np.any(x > 0) or np.any(~np.isfinite(x)):
        msg = "2F1 evaluation is restricted to finite x <= 0"
        raise errors.PreconditionError(msg, name="x", value=x)

    return _dispatch(a, b, c, x, np.log1p(-x), pairing, method)


def evaluate_log(a, b, c, log_1mx, method=AUTO):
    """Evaluate 2F1 at x = 1 - e^L for an array of L = log(1 - x) >= 0.

    Arguments whose x would overflow a float stay finite in this form, so
    the connection region works for any finite L.

    Returns:
        A (values, degenerate) pair, as evaluate().
    """
    _check_method(method)
    a, b, c, pairing = _normalise(a, b, c)
    log_1mx = utils.as_array(log_1mx)

    if np.any(log_1mx < 0) or np.any(~np.isfinite(log_1mx)):
        msg = "log(1 - x) must be finite and >= 0"
        raise errors.PreconditionError(msg, name="log_1mx", value=log_1mx)

    with np.errstate(over="ignore"):
        x = -np.expm1(log_1mx)

    return _dispatch(a, b, c, x, log_1mx, pairing, method)


def gauss_2f1_neg(a, b, c, x, method=AUTO):
    """Gauss hypergeometric function 2F1(a, b; c; x) for x <= 0.

    Args:
        a: Upper parameter.
        b: Upper parameter; real, or the complex conjugate of `a`.
        c: Lower parameter, not a nonpositive integer.
        x: A number or array of numbers <= 0.
        method: One of "auto", "series", "pfaff" or "connection".

    Returns:
        A float if `x` is a scalar, otherwise a numpy array.

    Raises:
        errors.InvalidParameterError: For unsupported parameters.
        errors.PreconditionError: For x > 0.
        errors.SeriesConvergenceError: If a series fails to converge.
    """
    values, _ = evaluate(a, b, c, x, method=method)

    if np.ndim(x) == 0:
        return float(values[0])

    return values.reshape(np.shape(x))
