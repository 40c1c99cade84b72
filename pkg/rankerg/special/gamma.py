# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
Complex log-gamma via the Lanczos approximation (g = 7, nine terms) with the
reflection formula for Re(z) < 1/2.
"""

# stdlib
import cmath
import logging
import math

# internal
from rankerg import errors

# Module-level logger
LOG = logging.getLogger(__name__)

_LANCZOS_G = 7
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)
_LOG_PI = math.log(math.pi)


def is_pole(z):
    """Return True if `z` is a nonpositive integer (a pole of Gamma)."""
    z = complex(z)
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def _wrap(value):
    """Reduce the imaginary part of a logarithm to (-pi, pi]."""
    imag = math.remainder(value.imag, 2 * math.pi)

    if imag == -math.pi:
        imag = math.pi

    return complex(value.real, imag)


def _sinpi(z):
    """sin(pi*z) with the real part reduced first, so integers stay exact."""
    n = round(z.real)
    value = cmath.sin(math.pi * (z - n))
    return -value if n % 2 else value


def _lanczos(z):
    # log Gamma(z) for Re(z) >= 1/2
    z = z - 1
    x = _LANCZOS_COEFFS[0]

    for i, coeff in enumerate(_LANCZOS_COEFFS[1:]):
        x += coeff / (z + i + 1)

    t = z + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def ln_gamma(z):
    """Principal value of log Gamma(z).

    Args:
        z: A real or complex number that is not a nonpositive integer.

    Returns:
        complex: log Gamma(z) with the imaginary part in (-pi, pi]. For real
        z > 0 the imaginary part is exactly 0.

    Raises:
        errors.GammaPoleError: If `z` is a pole of Gamma.
    """
    z = complex(z)

    if is_pole(z):
        msg = "Gamma has a pole at z = {0}".format(z.real)
        raise errors.GammaPoleError(message=msg, z=z)

    if z.real < 0.5:
        value = _LOG_PI - cmath.log(_sinpi(z)) - _lanczos(1 - z)
    else:
        value = _lanczos(z)

    if z.imag == 0 and z.real > 0:
        return complex(value.real, 0.0)

    return _wrap(value)


def gamma(z):
    """Gamma(z) as a complex number."""
    return cmath.exp(ln_gamma(z))


def gamma_ratio(numerator, denominator):
    """Return prod(Gamma(numerator)) / prod(Gamma(denominator)).

    A pole in the denominator makes the ratio exactly zero.

    Args:
        numerator: Iterable of gamma arguments on the top.
        denominator: Iterable of gamma arguments on the bottom.

    Raises:
        errors.DegenerateParameterError: If a numerator argument is a pole.
    """
    numerator = [complex(z) for z in numerator]
    denominator = [complex(z) for z in denominator]

    poles = [z for z in numerator if is_pole(z)]

    if poles:
        msg = "Gamma quotient has a numerator pole at {0}".format(poles)
        raise errors.DegenerateParameterError(message=msg, params=tuple(numerator))

    if any(is_pole(z) for z in denominator):
        return 0j

    total = sum(ln_gamma(z) for z in numerator) - sum(ln_gamma(z) for z in denominator)
    return cmath.exp(total)
