# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
The upper half-plane model of PSL(2,R)/SO(2) and the modular quotient.

PSL(2,R) acts by Moebius transformations ``z -> (az + b)/(cz + d)``. Points
are reduced to the standard fundamental domain of PSL(2,Z),
``{|Re z| <= 1/2, |z| >= 1}``, by integer translations and the inversion
``z -> -1/z``.
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

# Reduction gives up after this many inversions.
MAX_REDUCTION_STEPS = 10 ** 6

DET_TOL = 1e-12


class HPoint(object):
    """A point ``x + iy`` of the upper half-plane (y > 0)."""

    def __init__(self, x, y):
        x, y = float(x), float(y)

        if not (math.isfinite(x) and math.isfinite(y) and y > 0):
            msg = "Upper half-plane points need finite x and y > 0. Found ({0}, {1})"
            raise errors.PreconditionError(msg.format(x, y), name="point", value=(x, y))

        self._x = x
        self._y = y

    @classmethod
    def from_complex(cls, z):
        return cls(z.real, z.imag)

    @property
    def x(self):
        return self._x

    @property
    def y(self):
        return self._y

    @property
    def z(self):
        return complex(self._x, self._y)

    def __eq__(self, other):
        try:
            return (self._x, self._y) == (other.x, other.y)
        except AttributeError:
            return False

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self._x, self._y))

    def __repr__(self):
        return "HPoint({0!r}, {1!r})".format(self._x, self._y)


I = HPoint(0.0, 1.0)


class Mat2(object):
    """An element of PSL(2,R), stored with determinant renormalised to 1.

    Args:
        a, b, c, d: Matrix entries ``[[a, b], [c, d]]`` with ad - bc > 0.

    Raises:
        errors.PreconditionError: If the determinant is not positive.
    """

    def __init__(self, a, b, c, d):
        det = a * d - b * c

        if not det > 0:
            msg = "Matrix [[{0}, {1}], [{2}, {3}]] has nonpositive determinant"
            raise errors.PreconditionError(msg.format(a, b, c, d), name="det", value=det)

        scale = 1.0 / math.sqrt(det)
        self._entries = (a * scale, b * scale, c * scale, d * scale)

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def rotation(cls, theta):
        """k(theta) in SO(2); theta in [0, pi) covers PSO(2)."""
        cos, sin = math.cos(theta), math.sin(theta)
        return cls(cos, sin, -sin, cos)

    @classmethod
    def translation(cls, n):
        """T^n: z -> z + n."""
        return cls(1.0, float(n), 0.0, 1.0)

    @classmethod
    def inversion(cls):
        """S: z -> -1/z."""
        return cls(0.0, -1.0, 1.0, 0.0)

    @classmethod
    def radial(cls, tau):
        """a_tau = diag(e^{tau/2}, e^{-tau/2}), moving i to e^tau i."""
        return cls(math.exp(0.5 * tau), 0.0, 0.0, math.exp(-0.5 * tau))

    @classmethod
    def base(cls, point):
        """The upper triangular element moving i to `point`."""
        root = math.sqrt(point.y)
        return cls(root, point.x / root, 0.0, 1.0 / root)

    @property
    def entries(self):
        return self._entries

    @property
    def det(self):
        a, b, c, d = self._entries
        return a * d - b * c

    def inverse(self):
        a, b, c, d = self._entries
        return Mat2(d, -b, -c, a)

    def act(self, point):
        """Moebius action on an HPoint."""
        a, b, c, d = self._entries
        z = point.z
        return HPoint.from_complex((a * z + b) / (c * z + d))

    def __mul__(self, other):
        a, b, c, d = self._entries
        e, f, g, h = other.entries
        return Mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def __eq__(self, other):
        # projective: M and -M are the same element
        try:
            mine, theirs = np.array(self._entries), np.array(other.entries)
        except AttributeError:
            return False

        return bool(np.allclose(mine, theirs, atol=DET_TOL) or
                    np.allclose(mine, -theirs, atol=DET_TOL))

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return "Mat2([[{0!r}, {1!r}], [{2!r}, {3!r}]])".format(*self._entries)


def hyp_dist(z, w):
    """Hyperbolic distance ``2 asinh(|z - w| / (2 sqrt(Im z Im w)))``.

    Equivalent to ``cosh d = 1 + |z-w|^2 / (2 Im z Im w)`` and accurate for
    nearby points.
    """
    gap = math.hypot(z.x - w.x, z.y - w.y)
    return 2.0 * math.asinh(gap / (2.0 * math.sqrt(z.y * w.y)))


def in_domain(point, tol=1e-12):
    """True if `point` lies in the closed standard fundamental domain."""
    return abs(point.x) <= 0.5 + tol and point.x ** 2 + point.y ** 2 >= 1.0 - tol


def reduce(point, return_word=False):
    """Move `point` into the standard fundamental domain of PSL(2,Z).

    Args:
        point: An HPoint.
        return_word: Also return the Mat2 ``w`` in PSL(2,Z) with
            ``w.act(point)`` equal to the result.

    Returns:
        The reduced HPoint, or a (HPoint, Mat2) pair.

    Raises:
        errors.ReductionError: After MAX_REDUCTION_STEPS inversions.
    """
    x, y = point.x, point.y
    word = Mat2.identity()

    for _ in range(MAX_REDUCTION_STEPS):
        shift = math.floor(x + 0.5)

        if shift:
            x -= shift
            word = Mat2.translation(-shift) * word

        norm = x * x + y * y

        if norm >= 1.0:
            reduced = HPoint(x, y)
            return (reduced, word) if return_word else reduced

        x, y = -x / norm, y / norm
        word = Mat2.inversion() * word

    msg = "Reduction of {0!r} did not terminate after {1} steps".format(point, MAX_REDUCTION_STEPS)
    raise errors.ReductionError(msg, point=point, iterations=MAX_REDUCTION_STEPS)


def reduce_points(xs, ys):
    """Vectorised reduce() on arrays of coordinates.

    Returns:
        The reduced (xs, ys) arrays.
    """
    xs = np.array(xs, dtype=float)
    ys = np.array(ys, dtype=float)
    active = np.ones(xs.shape, dtype=bool)

    for _ in range(MAX_REDUCTION_STEPS):
        xa, ya = xs[active], ys[active]
        xa = xa - np.floor(xa + 0.5)
        norm = xa * xa + ya * ya
        inside = norm < 1.0

        xa = np.where(inside, -xa / norm, xa)
        ya = np.where(inside, ya / norm, ya)
        xs[active], ys[active] = xa, ya

        idx = np.flatnonzero(active)
        active[idx[~inside]] = False

        if not active.any():
            return xs, ys

    bad = np.flatnonzero(active)[0]
    msg = "Reduction did not terminate after {0} steps".format(MAX_REDUCTION_STEPS)
    raise errors.ReductionError(msg, point=(xs[bad], ys[bad]), iterations=MAX_REDUCTION_STEPS)


def mobius(entries, zs):
    """Apply ``(a z + b)/(c z + d)`` elementwise; entries may be arrays."""
    a, b, c, d = entries
    return (a * zs + b) / (c * zs + d)


def rotation_entries(thetas):
    cos, sin = np.cos(thetas), np.sin(thetas)
    return cos, sin, -sin, cos


def cartan_draws(profile, t, count, rng):
    """Draw Cartan coordinates (theta1, tau, theta2) of ``g ~ beta_t``.

    The angles are uniform on [0, pi) and tau has density
    ``Delta(tau)/m(B_t)`` on [0, t], drawn by inverting the cached radial
    law of `profile`.
    """
    utils.check_nonnegative("t", t)
    theta1 = rng.uniform(0.0, math.pi, count)
    theta2 = rng.uniform(0.0, math.pi, count)
    quantiles = rng.random(count)

    if t == 0:
        taus = np.zeros(count)
    else:
        taus = profile.inverse_cdf(quantiles, t)

    return theta1, taus, theta2


def cartan_sample(profile, t, rng):
    """Draw one ``g = k(theta1) a_tau k(theta2)`` uniformly from the ball B_t.

    Args:
        profile: VolumeProfile of SO(2,1) covering t.
        t: Ball radius >= 0.
        rng: A numpy Generator.

    Returns:
        A (Mat2, tau) pair; ``hyp_dist(g.act(I), I) == tau``.
    """
    theta1, taus, theta2 = cartan_draws(profile, t, 1, rng)
    tau = float(taus[0])
    g = Mat2.rotation(theta1[0]) * Mat2.radial(tau) * Mat2.rotation(theta2[0])
    return g, tau


def orbit_points(base, theta1, taus, theta2, inverse=True):
    """Return ``h0 g^{-1} i`` (or ``h0 g i``) for arrays of Cartan draws.

    ``h0`` is the upper triangular element with ``h0 i = base``. Since
    rotations fix i, ``g^{-1} i = k(-theta2) e^{-tau} i`` and
    ``g i = k(theta1) e^{tau} i``.

    Returns:
        Complex numpy array of orbit points.
    """
    if inverse:
        zs = mobius(rotation_entries(-theta2), 1j * np.exp(-taus))
    else:
        zs = mobius(rotation_entries(theta1), 1j * np.exp(taus))

    return base.y * zs + base.x
