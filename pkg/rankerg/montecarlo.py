# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
Monte Carlo ball averages on the modular surface PSL(2,Z)\\H.

``A_t f(x0)`` is estimated as the mean of ``f(reduce(g_i^{-1} x0))`` over
draws ``g_i`` from the normalised Haar measure on the ball B_t of
G = PSL(2,R) (the SO(2,1) case, rho = 1/2). The sample index space is cut
into fixed-size chunks, each with its own SeedSequence child, and the chunk
sums are reduced in chunk order. Estimates are therefore bit-identical for
any worker count.
"""

# stdlib
import functools
import logging
import math

# external
import numpy as np
from joblib import Parallel, delayed
from scipy import stats

# internal
from rankerg import balls
from rankerg import errors
from rankerg import groups
from rankerg import hyperbolic
from rankerg import report
from rankerg import utils

# Module-level logger
LOG = logging.getLogger(__name__)

CHUNK_SIZE = 65536
MIN_SAMPLES = 100

# Deviations within this many standard errors count as noise.
NOISE_SIGMAS = 4.0

# Deviations may exceed the fitted envelope C t e^{-t/2} by this factor.
ENVELOPE_SLACK = 2.0

# Kolmogorov-Smirnov critical value coefficient at the 1% level.
KS_COEFF_1PCT = 1.63

DEFAULT_BASE = hyperbolic.HPoint(0.1, 1.3)

# Profile margin so neighbouring radii share one table.
_PROFILE_STEP = 5.0

MODULAR_AREA = math.pi / 3.0


def modular_group():
    """The group PSL(2,R) ~ SO(2,1)."""
    return groups.make_group(groups.SO, n=2)


@functools.lru_cache(maxsize=8)
def _profile(t_max):
    return balls.VolumeProfile(modular_group(), t_max)


def volume_profile(t):
    """Cached VolumeProfile of SO(2,1) covering radius t."""
    t_max = _PROFILE_STEP * max(math.ceil(t / _PROFILE_STEP), 1)
    return _profile(float(t_max))


class CuspIndicator(object):
    """Indicator of the cusp region ``Im z > height`` (height >= 1)."""

    def __init__(self, height):
        height = float(height)

        if not height >= 1:
            msg = "Cusp height must be >= 1 so the region lies in the domain. Found {0}"
            raise errors.ObservableError(msg.format(height), observable=self)

        self.height = height

    @property
    def mean(self):
        """Normalised area ``(1/height) / (pi/3) = 3/(pi height)``."""
        return 3.0 / (math.pi * self.height)

    @property
    def oscillation(self):
        return 1.0

    @property
    def label(self):
        return "cusp:{0!r}".format(self.height)

    def __call__(self, xs, ys):
        return (ys > self.height).astype(float)


class DiskIndicator(object):
    """Indicator of a closed hyperbolic disk inside the fundamental domain.

    The hyperbolic disk of radius r about x + iy is the Euclidean disk with
    centre ``x + i y cosh r`` and radius ``y sinh r``.
    """

    def __init__(self, center, radius):
        radius = float(radius)

        if not radius > 0:
            raise errors.ObservableError("Disk radius must be positive", observable=self)

        self.center = center
        self.radius = radius

        e_center = center.y * math.cosh(radius)
        e_radius = center.y * math.sinh(radius)
        inside = (abs(center.x) + e_radius <= 0.5
                  and math.hypot(center.x, e_center) - e_radius >= 1.0)

        if not inside:
            msg = "Disk around {0!r} of radius {1} leaves the fundamental domain"
            raise errors.ObservableError(msg.format(center, radius), observable=self)

    @property
    def mean(self):
        """Normalised area ``2 pi (cosh r - 1) / (pi/3)``."""
        return 6.0 * (math.cosh(self.radius) - 1.0)

    @property
    def oscillation(self):
        return 1.0

    @property
    def label(self):
        return "disk:{0!r},{1!r},{2!r}".format(self.center.x, self.center.y, self.radius)

    def __call__(self, xs, ys):
        cx, cy = self.center.x, self.center.y
        gap = np.hypot(xs - cx, ys - cy)
        dist = 2.0 * np.arcsinh(gap / (2.0 * np.sqrt(ys * cy)))
        return (dist <= self.radius).astype(float)


class ConstantObservable(object):
    """The constant function."""

    def __init__(self, value=1.0):
        self.value = float(value)

    @property
    def mean(self):
        return self.value

    @property
    def oscillation(self):
        return 0.0

    @property
    def label(self):
        return "const:{0!r}".format(self.value)

    def __call__(self, xs, ys):
        return np.full(np.shape(xs), self.value)


def parse_observable(spec):
    """Parse ``cusp:<Y> | disk:<x>,<y>,<r> | const[:<c>]``.

    Raises:
        errors.ObservableError: If the spec cannot be parsed or the region
            does not fit in the fundamental domain.
    """
    text = str(spec).strip().lower()
    kind, _, arg = text.partition(":")

    try:
        if kind == "cusp":
            return CuspIndicator(float(arg))
        elif kind == "disk":
            x, y, r = (float(v) for v in arg.split(","))
            return DiskIndicator(hyperbolic.HPoint(x, y), r)
        elif kind == "const":
            return ConstantObservable(float(arg) if arg else 1.0)
    except (ValueError, errors.PreconditionError):
        pass

    msg = "Cannot parse observable '{0}'. Expected cusp:Y | disk:x,y,r | const[:c]"
    raise errors.ObservableError(msg.format(spec), observable=spec)


def observable_eval(obs, point):
    """Evaluate `obs` at a reduced HPoint."""
    if not hyperbolic.in_domain(point):
        msg = "{0!r} is not in the fundamental domain".format(point)
        raise errors.PreconditionError(msg, name="point", value=point)

    return float(obs(np.array([point.x]), np.array([point.y]))[0])


def observable_mean(obs):
    """Space average of `obs` for the normalised area measure."""
    return obs.mean


class MCRun(object):
    """One Monte Carlo estimate of A_t f(x0).

    Attributes:
        t (float): Ball radius.
        samples (int): Number of draws N.
        seed: Master seed.
        observable: The observable evaluated.
        base (HPoint): Base point x0.
        estimate (float): Sample mean.
        standard_error (float): Sample standard deviation over sqrt(N).
        inverse (bool): Whether g^{-1} (True) or g was applied to x0.
    """

    def __init__(self, t, samples, seed, observable, base, estimate, standard_error,
                 inverse=True):
        self.t = t
        self.samples = samples
        self.seed = seed
        self.observable = observable
        self.base = base
        self.estimate = estimate
        self.standard_error = standard_error
        self.inverse = inverse

    @property
    def mean(self):
        return self.observable.mean

    @property
    def deviation(self):
        """|estimate - space average|."""
        return abs(self.estimate - self.observable.mean)

    def as_row(self):
        return (self.t, self.samples, str(self.seed), self.observable.label,
                self.estimate, self.standard_error, self.mean, self.deviation)

    def __repr__(self):
        return "MCRun(t={0}, N={1}, obs={2}, estimate={3!r}, stderr={4!r})".format(
            self.t, self.samples, self.observable.label, self.estimate, self.standard_error)


RUN_COLUMNS = ("t", "samples", "seed", "observable", "estimate", "stderr", "mean", "deviation")


def _chunk_sums(t, count, seed_seq, obs, base, inverse):
    rng = np.random.default_rng(seed_seq)
    profile = volume_profile(t) if t > 0 else None
    theta1, taus, theta2 = hyperbolic.cartan_draws(profile, t, count, rng)
    zs = hyperbolic.orbit_points(base, theta1, taus, theta2, inverse=inverse)
    xs, ys = hyperbolic.reduce_points(zs.real, zs.imag)
    values = obs(xs, ys)
    return float(values.sum()), float(np.dot(values, values))


def _seed_sequence(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


def mc_average(t, samples, obs, seed, base=DEFAULT_BASE, threads=1, inverse=True,
               chunk_size=CHUNK_SIZE):
    """Monte Carlo estimate of the ball average ``A_t f(x0)``.

    Args:
        t: Ball radius >= 0 (t = 0 returns f(x0) exactly).
        samples: Number of draws, at least MIN_SAMPLES.
        obs: Observable callable on reduced coordinates.
        seed: Integer master seed or a numpy SeedSequence.
        base: Base point x0 as an HPoint.
        threads: Worker threads; results do not depend on it.
        inverse: Apply g^{-1} (True) or g (False) to x0.
        chunk_size: Draws per RNG substream.

    Returns:
        An MCRun.
    """
    utils.check_nonnegative("t", t)
    utils.check_at_least("samples", samples, MIN_SAMPLES)
    utils.check_positive("chunk_size", chunk_size)
    samples = int(samples)

    counts = [chunk_size] * (samples // chunk_size)
    if samples % chunk_size:
        counts.append(samples % chunk_size)

    children = _seed_sequence(seed).spawn(len(counts))
    LOG.info("Monte Carlo at t=%g: %d samples in %d chunk(s), %d thread(s)",
             t, samples, len(counts), threads)

    if t > 0:
        volume_profile(t)  # build once before the workers start

    parts = Parallel(n_jobs=threads, backend="threading")(
        delayed(_chunk_sums)(t, count, child, obs, base, inverse)
        for count, child in zip(counts, children)
    )

    total, total_sq = 0.0, 0.0
    for part_sum, part_sq in parts:
        total += part_sum
        total_sq += part_sq

    estimate = total / samples
    variance = max(total_sq - total * total / samples, 0.0) / (samples - 1)
    stderr = math.sqrt(variance / samples)
    return MCRun(float(t), samples, seed, obs, base, estimate, stderr, inverse=inverse)


def radial_ks_test(t, samples, seed):
    """Kolmogorov-Smirnov test of sampled radii against ``m(B_tau)/m(B_t)``.

    Returns:
        A (statistic, pvalue, passed) tuple; ``passed`` compares the
        statistic with ``1.63/sqrt(N)``.
    """
    utils.check_positive("t", t)
    profile = volume_profile(t)
    rng = np.random.default_rng(_seed_sequence(seed))
    _, taus, _ = hyperbolic.cartan_draws(profile, t, int(samples), rng)
    result = stats.kstest(taus, lambda x: profile.cdf(x, t))
    critical = KS_COEFF_1PCT / math.sqrt(samples)
    return float(result.statistic), float(result.pvalue), bool(result.statistic < critical)


def decay_envelope(ts, constant):
    """``C t e^{-t/2}`` for the modular surface (rho = 1/2, r = 0)."""
    ts = utils.as_array(ts)
    return constant * ts * np.exp(-0.5 * ts)


class EnvelopeFit(object):
    """Least-squares fit of MC deviations to ``C t e^{-t/2}``.

    Attributes:
        constant (float): Fitted C over the significant points; 0 if none.
        sup_ratio (float): Largest deviation/(C t e^{-t/2}) over the
            significant points; 0 if none.
        within (bool): Every deviation is at most
            ``max(ENVELOPE_SLACK * C t e^{-t/2}, NOISE_SIGMAS * stderr)``.
        monotone (bool): No deviation exceeds an earlier one by more than
            NOISE_SIGMAS combined standard errors.
        significant: Boolean mask of deviations above the noise band.
    """

    def __init__(self, constant, sup_ratio, within, monotone, significant):
        self.constant = constant
        self.sup_ratio = sup_ratio
        self.within = within
        self.monotone = monotone
        self.significant = significant

    def __repr__(self):
        return "EnvelopeFit(C={0!r}, sup_ratio={1!r}, within={2}, monotone={3})".format(
            self.constant, self.sup_ratio, self.within, self.monotone)


def fit_envelope(ts, deviations, stderrs):
    """Fit the decay envelope to tabulated deviations.

    Only deviations above NOISE_SIGMAS standard errors enter the fit; the
    rest are checked against the noise band alone.

    Returns:
        An EnvelopeFit.
    """
    ts = utils.as_array(ts)
    dev = utils.as_array(deviations)
    se = utils.as_array(stderrs)

    if not len(ts) == len(dev) == len(se):
        raise errors.PreconditionError("t, deviation and stderr arrays differ in length",
                                       name="deviations", value=dev)

    shape = decay_envelope(ts, 1.0)
    significant = dev > NOISE_SIGMAS * se

    if significant.any():
        s, d = shape[significant], dev[significant]
        constant = float(np.dot(s, d) / np.dot(s, s))
        sup_ratio = float(np.max(d / (constant * s)))
    else:
        constant, sup_ratio = 0.0, 0.0

    allowed = np.maximum(ENVELOPE_SLACK * constant * shape, NOISE_SIGMAS * se)
    within = bool(np.all(dev <= allowed * (1 + 1e-12)))

    monotone = True
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            band = NOISE_SIGMAS * math.hypot(se[i], se[j])
            if dev[j] > dev[i] + band:
                monotone = False

    return EnvelopeFit(constant, sup_ratio, within, monotone, significant)


def decay_scan(t_grid, samples, obs, seed, base=DEFAULT_BASE, threads=1):
    """Estimate A_t f(x0) along a t-grid and fit the decay envelope.

    Each radius uses its own SeedSequence child of `seed`. The envelope
    constant C and the exponent are fitted on the deviations that stand out
    of the noise; see fit_envelope().

    Returns:
        A DecayReport with columns t, estimate, stderr, deviation, envelope
        and summary keys fitted_constant, within_envelope and
        monotone_within_noise.
    """
    ts = utils.as_array(t_grid)
    utils.check_nonempty("t_grid", ts)

    if np.any(ts < 1) or np.any(ts > 10):
        raise errors.PreconditionError("decay_scan radii must lie in [1, 10]",
                                       name="t_grid", value=ts)

    children = _seed_sequence(seed).spawn(len(ts))
    runs = [mc_average(t, samples, obs, child, base=base, threads=threads)
            for t, child in zip(ts, children)]

    dev = np.array([run.deviation for run in runs])
    se = np.array([run.standard_error for run in runs])
    fit = fit_envelope(ts, dev, se)
    exponent, exponent_se = utils.fit_exponent(ts[fit.significant], dev[fit.significant])
    envelope = decay_envelope(ts, fit.constant)

    rows = zip(ts.tolist(), [r.estimate for r in runs], se.tolist(), dev.tolist(),
               envelope.tolist())
    decay = report.DecayReport(
        ("t", "estimate", "stderr", "deviation", "envelope"), rows,
        fitted_exponent=exponent,
        exponent_stderr=exponent_se,
        sup_ratio=fit.sup_ratio,
        summary={
            "fitted_constant": fit.constant,
            "within_envelope": fit.within,
            "monotone_within_noise": fit.monotone,
            "observable": obs.label,
            "mean": obs.mean,
        },
    )
    LOG.info("Decay scan: C=%g, exponent %g +- %g, monotone=%s", fit.constant, exponent,
             exponent_se, fit.monotone)
    return decay


def mc_lipschitz_check(t, eps, samples, obs, seed, base=DEFAULT_BASE, threads=1):
    """Compare ``|A_{t+eps} f(x0) - A_t f(x0)|`` with the averaging-operator
    bound ``osc(f) m(B_{t+eps} minus B_t)/m(B_{t+eps})``.

    Both averages reuse the same seed, so the radii are coupled through
    common uniforms.

    Returns:
        A (difference, bound, noise, holds) tuple; ``holds`` allows
        NOISE_SIGMAS combined standard errors.
    """
    utils.check_at_least("t", t, 1.0)
    utils.check_open_interval("eps", eps, 0.0, 1.0)

    near = mc_average(t, samples, obs, seed, base=base, threads=threads)
    far = mc_average(t + eps, samples, obs, seed, base=base, threads=threads)
    difference = abs(far.estimate - near.estimate)
    bound = obs.oscillation * float(balls.shell_fraction(modular_group(), t, eps))
    noise = NOISE_SIGMAS * math.hypot(near.standard_error, far.standard_error)
    return difference, bound, noise, bool(difference <= bound + noise)
