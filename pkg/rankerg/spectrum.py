# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
Spectral model of an action satisfying the purity assumption.

The averaging operator over B_t acts on every spherical component as
multiplication by psi_s(t). A PuritySpectrum lists the isolated atoms
``rho = s_0 > s_1 > ... > s_k > r`` and a discretised remainder Omega of
weighted parameters with ``Re(s) <= r``; a SpectralVector holds the norms of
a model function on each component. The functions below evaluate the
deviation ``A_t f - sum_j psi_j(t) P_j f`` and the constants built from it.
"""

# stdlib
import logging
import math

# external
import numpy as np
from joblib import Parallel, delayed

# internal
from rankerg import balls
from rankerg import errors
from rankerg import grid
from rankerg import groups
from rankerg import report
from rankerg import utils
from rankerg.groups import SpectralParam

# Module-level logger
LOG = logging.getLogger(__name__)


class PuritySpectrum(object):
    """Atoms, gap parameter and discretised Omega for one group.

    Args:
        group: A RankOneGroup.
        atoms: Decreasing reals starting at rho.
        r: Spectral gap parameter, 0 < r < s_k.
        omega: Iterable of (SpectralParam, weight) pairs; weight is the
            nu-mass of the cell the parameter represents.

    Raises:
        errors.PurityError: Listing every violated inequality.
    """

    def __init__(self, group, atoms, r, omega=()):
        self._group = group
        self._atoms = tuple(float(a) for a in atoms)
        self._r = float(r)
        self._omega = tuple((param, float(weight)) for param, weight in omega)

        violations = groups.purity_violations(group, self._atoms, self._r, self.params)

        for param, weight in self._omega:
            if not (math.isfinite(weight) and weight >= 0):
                violations.append("weight {0} of {1} must be finite and >= 0".format(
                    weight, param.label))

        if violations:
            msg = "Spectrum violates purity: {0}".format("; ".join(violations))
            raise errors.PurityError(msg, violations=violations)

    @property
    def group(self):
        return self._group

    @property
    def atoms(self):
        return self._atoms

    @property
    def r(self):
        return self._r

    @property
    def omega(self):
        return self._omega

    @property
    def params(self):
        return [param for param, _ in self._omega]

    @property
    def weights(self):
        return [weight for _, weight in self._omega]

    @property
    def delta(self):
        """The decay rate rho - r."""
        return self._group.rho - self._r

    @property
    def atom_params(self):
        """SpectralParam for each atom; s_0 is the trivial representation."""
        first = [SpectralParam.trivial()] if self._atoms else []
        return first + [SpectralParam.complementary(s) for s in self._atoms[1:]]

    def default_vector(self):
        """Unit norms on the atoms and sqrt(weight) on Omega."""
        return SpectralVector([1.0] * len(self._atoms), [math.sqrt(w) for w in self.weights])

    def __repr__(self):
        return "PuritySpectrum(group={0}, atoms={1}, r={2}, omega={3})".format(
            self._group.name, list(self._atoms), self._r,
            [(p.label, w) for p, w in self._omega]
        )


class SpectralVector(object):
    """Component norms of a model function f.

    Attributes:
        atom_norms (tuple): ``||P_j f||`` per atom.
        omega_norms (tuple): ``||f_sigma||`` per Omega component.
        atom_signs (tuple): Sign carried by each atom component.
        omega_signs (tuple): Sign carried by each Omega component.
    """

    def __init__(self, atom_norms, omega_norms=(), atom_signs=None, omega_signs=None):
        self.atom_norms = tuple(float(x) for x in atom_norms)
        self.omega_norms = tuple(float(x) for x in omega_norms)
        self.atom_signs = tuple(atom_signs or (1.0,) * len(self.atom_norms))
        self.omega_signs = tuple(omega_signs or (1.0,) * len(self.omega_norms))

        for name, values in (("atom_norms", self.atom_norms), ("omega_norms", self.omega_norms)):
            for value in values:
                if not (math.isfinite(value) and value >= 0):
                    msg = "{0} entries must be finite and >= 0. Found {1}".format(name, value)
                    raise errors.PreconditionError(msg, name=name, value=values)

    @property
    def norm(self):
        """||f|| from the Parseval identity of the model."""
        return math.sqrt(sum(x * x for x in self.atom_norms) + sum(x * x for x in self.omega_norms))

    def signed_atoms(self):
        return np.array(self.atom_norms) * np.array(self.atom_signs)

    def signed_omega(self):
        return np.array(self.omega_norms) * np.array(self.omega_signs)

    def scaled(self, factor):
        """Return ``factor * f`` for factor >= 0."""
        return SpectralVector([factor * x for x in self.atom_norms],
                              [factor * x for x in self.omega_norms],
                              self.atom_signs, self.omega_signs)

    def __eq__(self, other):
        try:
            return (self.atom_norms, self.omega_norms) == (other.atom_norms, other.omega_norms)
        except AttributeError:
            return False

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "SpectralVector(atom_norms={0}, omega_norms={1})".format(
            list(self.atom_norms), list(self.omega_norms))


def check_vector(spec, f):
    """Raise PreconditionError unless `f` is aligned with `spec`."""
    if len(f.atom_norms) != len(spec.atoms) or len(f.omega_norms) != len(spec.omega):
        msg = "Vector shape ({0}, {1}) does not match spectrum ({2}, {3})".format(
            len(f.atom_norms), len(f.omega_norms), len(spec.atoms), len(spec.omega))
        raise errors.PreconditionError(msg, name="f", value=f)

    for (param, weight), norm in zip(spec.omega, f.omega_norms):
        if weight == 0 and norm != 0:
            msg = "Omega component {0} has zero weight but norm {1}".format(param.label, norm)
            raise errors.PreconditionError(msg, name="omega_norms", value=norm)


def _check_times(ts, low=None):
    """Times must be > 0, or >= `low` when given."""
    ts = utils.as_array(ts)
    utils.check_nonempty("t_grid", ts)

    if low is None and np.any(ts <= 0):
        raise errors.PreconditionError("Times must be > 0", name="t", value=ts)

    if low is not None and np.any(ts < low):
        msg = "Times must be >= {0}".format(low)
        raise errors.PreconditionError(msg, name="t", value=ts)

    return ts


def psi_tables(spec, ts, threads=1):
    """Return psi_s(t) for every atom and Omega component.

    Components are tabulated independently, in parallel when threads > 1;
    the result does not depend on the thread count.

    Returns:
        An (atom_table, omega_table) pair of arrays shaped
        (components, len(ts)).
    """
    ts = _check_times(ts)
    params = spec.atom_params + spec.params
    LOG.debug("Tabulating psi for %d component(s) on %d time(s)", len(params), len(ts))

    rows = Parallel(n_jobs=threads, backend="threading")(
        delayed(balls.psi_values)(spec.group, param, ts) for param in params
    )
    table = np.array(rows).reshape(len(params), len(ts))
    return table[:len(spec.atoms)], table[len(spec.atoms):]


def apply_average(spec, f, t):
    """Apply the ball average A_t to the model vector `f`.

    Each component norm is multiplied by |psi_s(t)|; the sign of psi_s(t)
    is folded into the component signs.

    Returns:
        A new SpectralVector.
    """
    check_vector(spec, f)
    atom_psi, omega_psi = psi_tables(spec, [t])
    atom_psi, omega_psi = atom_psi[:, 0], omega_psi[:, 0]

    return SpectralVector(
        np.abs(atom_psi) * f.atom_norms,
        np.abs(omega_psi) * f.omega_norms if len(f.omega_norms) else (),
        tuple(np.sign(atom_psi) * f.atom_signs),
        tuple(np.sign(omega_psi) * f.omega_signs) if len(f.omega_norms) else None,
    )


def deviations(spec, f, ts, threads=1):
    """``||A_t f - sum_j psi_j(t) P_j f||`` on an array of t.

    Only Omega contributes; the atom terms cancel exactly.
    """
    check_vector(spec, f)
    ts = _check_times(ts)

    if not spec.omega:
        return np.zeros_like(ts)

    _, omega_psi = psi_tables(spec, ts, threads=threads)
    terms = np.abs(omega_psi * np.array(f.omega_norms)[:, None])
    # column-max scaling keeps the squares in range
    peak = terms.max(axis=0)
    safe = np.where(peak > 0, peak, 1.0)
    return peak * np.sqrt(np.sum((terms / safe) ** 2, axis=0))


def deviation_norm(spec, f, t):
    """The deviation of A_t f from its atom part at one t > 0."""
    return float(deviations(spec, f, [t])[0])


def mean_envelope(spec, f, ts):
    """``t e^{-(rho-r)t} ||f||``."""
    ts = utils.as_array(ts)
    return ts * np.exp(-spec.delta * ts) * f.norm


def _ratios(deviation, envelope):
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(deviation == 0, 0.0, deviation / envelope)
    return ratios


def theorem_mean_report(spec, f, t_grid, threads=1):
    """Tabulate the deviation against ``t e^{-(rho-r)t} ||f||``.

    Args:
        spec: A PuritySpectrum.
        f: A SpectralVector aligned with `spec`.
        t_grid: Nonempty radii t >= 1.
        threads: Workers for the per-component tables.

    Returns:
        A DecayReport with columns t, deviation, envelope, ratio.
    """
    ts = _check_times(t_grid, low=1.0)
    deviation = deviations(spec, f, ts, threads=threads)
    envelope = mean_envelope(spec, f, ts)
    ratios = _ratios(deviation, envelope)
    exponent, stderr = utils.fit_exponent(ts, deviation)

    rows = zip(ts.tolist(), deviation.tolist(), envelope.tolist(), ratios.tolist())
    decay = report.DecayReport(
        ("t", "deviation", "envelope", "ratio"), rows,
        fitted_exponent=exponent,
        exponent_stderr=stderr,
        sup_ratio=float(ratios.max()),
        summary={"delta": spec.delta, "norm": f.norm},
    )
    LOG.info("Mean report: sup ratio %g, fitted exponent %g (expected >= %g)",
             decay.sup_ratio, exponent, -spec.delta)
    return decay


def direction_convergence(spec, f, t_grid, threads=1):
    """Distance between ``(A_t f - P_0 f)/||A_t f - P_0 f||`` and the unit
    vector of atom 1, for each t.

    Returns:
        A numpy array of distances. A vanishing deviation counts as
        converged (distance 0).

    Raises:
        errors.PreconditionError: Without an atom s_1 or with
            ``atom_norms[1] == 0``.
    """
    check_vector(spec, f)

    if len(spec.atoms) < 2:
        raise errors.PreconditionError("The spectrum has no atom s_1", name="atoms",
                                       value=spec.atoms)

    if f.atom_norms[1] <= 0:
        raise errors.PreconditionError("atom_norms[1] must be positive", name="atom_norms",
                                       value=f.atom_norms)

    ts = _check_times(t_grid)
    atom_psi, omega_psi = psi_tables(spec, ts, threads=threads)

    lead = atom_psi[1] * f.signed_atoms()[1]
    others = (atom_psi[2:] * f.signed_atoms()[2:, None]) ** 2
    rest = np.sum(others, axis=0)

    if spec.omega:
        rest = rest + np.sum((omega_psi * f.signed_omega()[:, None]) ** 2, axis=0)

    total = np.sqrt(lead ** 2 + rest)

    with np.errstate(divide="ignore", invalid="ignore"):
        # 1 - lead/total = rest / (total (total + lead)), free of cancellation
        along = rest / (total * (total + lead))
        distance = np.sqrt(rest / total ** 2 + along ** 2)

    return np.where(total == 0, 0.0, distance)


class DiscreteConstant(object):
    """Norm-level constant ``(sum_n n^{-3-2eps} e^{2 delta n} dev(n)^2)^{1/2}``.

    Attributes:
        value (float): The constant at N_max.
        partial_sums (numpy.ndarray): Running sums of the squared terms.
        tail_bound (float): Bound on the squared tail beyond N_max from the
            comparison series ``C^2 ||f||^2 sum n^{-1-2eps}``.
        deviation_constant (float): The C above, measured on 1..N_max.
    """

    def __init__(self, value, partial_sums, tail_bound, deviation_constant):
        self.value = value
        self.partial_sums = partial_sums
        self.tail_bound = tail_bound
        self.deviation_constant = deviation_constant

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return "DiscreteConstant(value={0!r}, tail_bound={1!r})".format(self.value, self.tail_bound)


def discrete_constant(spec, f, eps, n_max, threads=1):
    """Evaluate the discrete-time constant with log-space terms.

    Args:
        spec: A PuritySpectrum.
        f: A SpectralVector.
        eps: Positive exponent slack.
        n_max: Number of terms (>= 1).

    Returns:
        A DiscreteConstant.
    """
    utils.check_positive("eps", eps)
    utils.check_at_least("n_max", n_max, 1)

    ns = np.arange(1, int(n_max) + 1, dtype=float)
    deviation = deviations(spec, f, ns, threads=threads)

    with np.errstate(divide="ignore"):
        log_terms = (-3.0 - 2.0 * eps) * np.log(ns) + 2.0 * spec.delta * ns \
            + 2.0 * np.log(deviation)

    terms = np.exp(log_terms)
    partial = np.cumsum(terms)

    norm = f.norm
    if norm > 0:
        with np.errstate(divide="ignore"):
            scale = np.exp(np.log(deviation) - np.log(ns) + spec.delta * ns - math.log(norm))
        dev_constant = float(scale.max())
    else:
        dev_constant = 0.0

    n = float(n_max)
    tail = dev_constant ** 2 * norm ** 2 * n ** (-2.0 * eps) / (2.0 * eps)
    return DiscreteConstant(math.sqrt(partial[-1]), partial, tail, dev_constant)


def pointwise_exponent(spec, p):
    """Almost-everywhere error exponent ``(1/2 - 1/p)(rho - r)`` for p > 2."""
    if not p > 2:
        raise errors.PreconditionError("p must exceed 2", name="p", value=p)

    return (0.5 - 1.0 / p) * spec.delta


def informative_atoms(spec, p):
    """Indices of the atoms whose psi_j(t) decays slower than the pointwise
    error term, i.e. ``s_j > (1/2 - 1/p) r + (1/2 + 1/p) rho``."""
    if not p > 2:
        raise errors.PreconditionError("p must exceed 2", name="p", value=p)

    cut = (0.5 - 1.0 / p) * spec.r + (0.5 + 1.0 / p) * spec.group.rho
    return [idx for idx, s in enumerate(spec.atoms) if s > cut]


def fixedbound_envelope(spec, f, t_grid, threads=1):
    """``sup_t e^{delta t/2} dev(t) / ||f||`` over t >= 1 in the grid."""
    ts = _check_times(t_grid, low=1.0)
    norm = f.norm

    if norm == 0:
        return 0.0

    deviation = deviations(spec, f, ts, threads=threads)
    return float(np.max(np.exp(0.5 * spec.delta * ts) * deviation / norm))


def chain_check(spec, f, ts, m_max=None, threads=1):
    """Check the interpolation between grid times.

    For each t >= 1 with ``t_n <= t < t_{n+1}`` on the grid of
    grid.time_grid(rho - r, m_max) this evaluates::

        dev(t) <= dev(t_n) + ||(A_t - A_{t_n}) f||
                  + sum_j |psi_j(t) - psi_j(t_n)| ||P_j f||

    and the Lipschitz bound ``|psi(t) - psi(t_n)| <= m(B_t minus B_{t_n})/m(B_t)``
    for every component.

    Returns:
        A Table with columns t, t_n, lhs, rhs, chain_holds, max_psi_step,
        shell_fraction, cell_factor, lipschitz_holds.
    """
    check_vector(spec, f)
    ts = _check_times(ts, low=1.0)
    m_max = int(m_max or math.ceil(ts.max()))
    times = grid.time_grid(spec.delta, m_max)

    if ts.max() >= times[-1]:
        msg = "Times must lie below the last grid time {0}".format(times[-1])
        raise errors.PreconditionError(msg, name="ts", value=ts)

    idx = np.searchsorted(times, ts, side="right") - 1
    t_ns = times[idx]

    both = np.concatenate([ts, t_ns])
    atom_psi, omega_psi = psi_tables(spec, both, threads=threads)
    n = len(ts)

    dev = deviations(spec, f, both, threads=threads)
    atom_step = np.abs(atom_psi[:, :n] - atom_psi[:, n:])
    omega_step = np.abs(omega_psi[:, :n] - omega_psi[:, n:])

    atom_norms = np.array(f.atom_norms)[:, None]
    omega_norms = np.array(f.omega_norms)[:, None] if spec.omega else np.zeros((0, 1))

    operator_gap = np.sqrt(np.sum((atom_step * atom_norms) ** 2, axis=0)
                           + np.sum((omega_step * omega_norms) ** 2, axis=0))
    atom_gap = np.sum(atom_step * atom_norms, axis=0)
    lhs = dev[:n]
    rhs = dev[n:] + operator_gap + atom_gap

    steps = np.concatenate([atom_step, omega_step]).max(axis=0)
    table = report.Table(("t", "t_n", "lhs", "rhs", "chain_holds", "max_psi_step",
                          "shell_fraction", "cell_factor", "lipschitz_holds"))

    for i, (t, t_n) in enumerate(zip(ts, t_ns)):
        if t > t_n:
            fraction = float(balls.shell_fraction(spec.group, t_n, t - t_n))
        else:
            fraction = 0.0

        cell = 1.0 / grid.cells_per_unit(spec.delta, int(math.floor(t_n)))
        table.append((
            float(t), float(t_n), float(lhs[i]), float(rhs[i]),
            bool(lhs[i] <= rhs[i] + balls.LIPSCHITZ_SLACK),
            float(steps[i]), fraction, cell,
            bool(steps[i] <= fraction + balls.LIPSCHITZ_SLACK),
        ))

    return table
