# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

# builtins
import contextlib
import logging
import math
import os

# external
import numpy as np

# internal
from rankerg import errors

# Module-level logger
LOG = logging.getLogger(__name__)

# Environment variable holding the default worker count.
ENV_THREADS = "RANKERG_THREADS"


@contextlib.contextmanager
def ignored(*exceptions):
    """Allows you to ignore exceptions cleanly using context managers."""
    try:
        yield
    except exceptions:
        pass


def as_array(values):
    """Return `values` as a one dimensional float64 numpy array."""
    return np.atleast_1d(np.asarray(values, dtype=np.float64))


def check_finite(name, value):
    if math.isfinite(value):
        return

    msg = "'{0}' must be finite. Found '{1}'".format(name, value)
    raise errors.PreconditionError(message=msg, name=name, value=value)


def check_positive(name, value):
    """Raise PreconditionError unless `value` is a finite number > 0."""
    check_finite(name, value)

    if value > 0:
        return

    msg = "'{0}' must be positive. Found '{1}'".format(name, value)
    raise errors.PreconditionError(message=msg, name=name, value=value)


def check_nonnegative(name, value):
    check_finite(name, value)

    if value >= 0:
        return

    msg = "'{0}' must be nonnegative. Found '{1}'".format(name, value)
    raise errors.PreconditionError(message=msg, name=name, value=value)


def check_open_interval(name, value, low, high):
    """Raise PreconditionError unless ``low < value < high``."""
    check_finite(name, value)

    if low < value < high:
        return

    msg = "'{0}' must lie in ({1}, {2}). Found '{3}'".format(name, low, high, value)
    raise errors.PreconditionError(message=msg, name=name, value=value)


def check_at_least(name, value, low):
    check_finite(name, value)

    if value >= low:
        return

    msg = "'{0}' must be >= {1}. Found '{2}'".format(name, low, value)
    raise errors.PreconditionError(message=msg, name=name, value=value)


def check_nonempty(name, values):
    if len(values):
        return

    msg = "'{0}' must not be empty".format(name)
    raise errors.PreconditionError(message=msg, name=name, value=values)


def default_threads():
    """Return the worker count from the RANKERG_THREADS environment variable,
    or 1 if it is unset.

    Raises:
        errors.ConfigError: If the variable does not hold a positive integer.
    """
    raw = os.environ.get(ENV_THREADS)

    if not raw:
        return 1

    try:
        threads = int(raw)
    except ValueError:
        threads = 0

    if threads < 1:
        msg = "{0} must be a positive integer. Found '{1}'".format(ENV_THREADS, raw)
        raise errors.ConfigError(message=msg, path=ENV_THREADS)

    LOG.debug("Using %d worker(s) from %s", threads, ENV_THREADS)
    return threads


def fit_exponent(ts, values):
    """Least-squares fit of ``log(values) = a + k * ts``.

    Non-positive values are skipped.

    Returns:
        A (k, stderr_k) pair. Both are NaN when fewer than two usable points
        remain; stderr_k is NaN with exactly two.
    """
    ts = as_array(ts)
    values = as_array(values)
    mask = values > 0

    if mask.sum() < 2:
        return float("nan"), float("nan")

    x = ts[mask]
    y = np.log(values[mask])

    if mask.sum() == 2:
        slope = (y[1] - y[0]) / (x[1] - x[0])
        return float(slope), float("nan")

    coeffs, cov = np.polyfit(x, y, 1, cov="unscaled")
    residuals = y - np.polyval(coeffs, x)
    dof = max(len(x) - 2, 1)
    scale = float(np.dot(residuals, residuals)) / dof
    return float(coeffs[0]), float(math.sqrt(max(cov[0, 0] * scale, 0.0)))
