# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
The acceptance suite run by ``rankerg verify``.

Every check returns a Check with a pass flag and a one-line detail. On
SO(3,1) the spherical functions, ball volumes and psi constants are
compared with their elementary closed forms; on other groups
self-consistency checks take their place. The 2F1 region overlap runs on
every group. The spectral-model and grid checks are group independent. The
Monte Carlo checks are opt-in.
"""

# stdlib
import logging
import math

# external
import numpy as np

# internal
from rankerg import balls
from rankerg import grid
from rankerg import groups
from rankerg import montecarlo
from rankerg import report
from rankerg import special
from rankerg import spectrum
from rankerg.groups import SpectralParam
from rankerg.special import hypergeom

# Module-level logger
LOG = logging.getLogger(__name__)

ORACLE_TOL = 1e-10
OVERLAP_TOL = 1e-11
C_FUNCTION_RTOL = 1e-8
VOLUME_RTOL = 1e-10
VOLUME_LIMIT_TOL = 1e-6
PSI_STAGE_RTOL = 1e-3
PSI_CONSTANT_RTOL = 1e-6
EXPONENT_TOL = 0.05
REFINEMENT_RTOL = 0.01
DIRECTION_TOL = 1e-3
MC_LIMIT_T = 10.0


class Check(object):
    """Outcome of one acceptance check."""

    def __init__(self, name, passed, detail=""):
        self.name = name
        self.passed = bool(passed)
        self.detail = detail

    def __repr__(self):
        return "Check({0}, passed={1}, {2})".format(self.name, self.passed, self.detail)


def _h3_phi(s, ts):
    return np.sinh(s * ts) / (s * np.sinh(ts))


def _h3_phi_principal(lam, ts):
    return np.sin(lam * ts) / (lam * np.sinh(ts))


def _h3_volume(ts):
    return (np.sinh(ts) * np.cosh(ts) - ts) / 2.0


def check_spherical_oracle(group):
    ts = np.logspace(math.log10(0.01), math.log10(25.0), 200)
    worst = 0.0

    for s in np.round(np.arange(1, 11) * 0.1, 10):
        values = special.spherical_values(group, SpectralParam.complementary(s), ts)
        worst = max(worst, float(np.max(np.abs(values - _h3_phi(s, ts)))))

    for lam in (0.5, 1.0, 2.0):
        values = special.spherical_values(group, SpectralParam.principal(lam), ts)
        worst = max(worst, float(np.max(np.abs(values - _h3_phi_principal(lam, ts)))))

    return Check("spherical_oracle", worst <= ORACLE_TOL, "max error {0:.3g}".format(worst))


def check_region_overlap(group, params):
    bands = (
        (hypergeom.SERIES, hypergeom.PFAFF, np.linspace(0.3, 0.65, 15)),
        (hypergeom.PFAFF, hypergeom.CONNECTION, np.linspace(1.1, 1.6, 15)),
    )
    worst = 0.0

    for param in params:
        for first, second, ts in bands:
            one = special.spherical_values(group, param, ts, method=first)
            two = special.spherical_values(group, param, ts, method=second)
            worst = max(worst, float(np.max(np.abs(one - two))))

    return Check("region_overlap", worst <= OVERLAP_TOL, "max disagreement {0:.3g}".format(worst))


def check_c_function(group, svalues, t=40.0):
    worst = 0.0

    for s in svalues:
        param = SpectralParam.complementary(s)
        c = special.hc_c_function(group, param).real
        phi = special.spherical_fn(group, param, t).value
        limit = phi * math.exp((group.rho - s) * t)
        # the c(-s) term still matters at t for small s
        limit -= special.c_function_value(group, -s).real * math.exp(-2.0 * s * t)
        worst = max(worst, abs(limit - c) / c)

    return Check("c_function_limit", worst <= C_FUNCTION_RTOL, "max rel error {0:.3g}".format(worst))


def check_bound_01(group, params):
    ts = np.linspace(0.0, 20.0, 201)
    certificates = special.certify_bound_01(group, [SpectralParam.trivial()] + list(params), ts)
    trivial = certificates[0].constant
    finite = all(math.isfinite(c.constant) for c in certificates)
    detail = ", ".join("{0}={1:.4g}".format(c.param.label, c.constant) for c in certificates)
    return Check("bound_01", finite and trivial == 1.0, detail)


def check_ball_volume_oracle(group):
    ts = np.linspace(0.1, 30.0, 60)
    scaled = balls.scaled_volumes(group, ts)
    exact = _h3_volume(ts) * np.exp(-2.0 * ts)
    worst = float(np.max(np.abs(scaled - exact) / exact))
    limit = float(balls.scaled_volumes(group, [30.0])[0])
    # m(B_t) e^{-2t} -> 1/8 on H^3
    limit_ok = abs(limit - 0.125) <= VOLUME_LIMIT_TOL
    detail = "max rel error {0:.3g}; m(B_30)e^-60 = {1!r}".format(worst, limit)
    return Check("ball_volume", worst <= VOLUME_RTOL and limit_ok, detail)


def check_psi_asymptotics(group, s, closed_form=None):
    param = SpectralParam.complementary(s)
    values = balls.psi_values(group, param, [30.0, 40.0]) * np.exp((group.rho - s) * np.array([30.0, 40.0]))
    stage = abs(values[1] - values[0]) / abs(values[1])
    constant = balls.psi_asymptotic_constant(group, param)
    target = closed_form if closed_form is not None else balls.psi_closed_form_constant(group, param)
    rel = abs(constant - target) / abs(target)
    detail = "stage change {0:.3g}; constant {1!r} vs {2!r}".format(stage, constant, target)
    return Check("psi_asymptotics", stage < PSI_STAGE_RTOL and rel <= PSI_CONSTANT_RTOL, detail)


def check_psi_lipschitz(group, params):
    worst = float("inf")

    for param in params:
        for t in (1.0, 2.0, 5.0, 10.0):
            for eps in (0.01, 0.1, 0.5):
                result = balls.psi_lipschitz_check(group, param, t, eps)
                worst = min(worst, result.bound - result.difference)

    return Check("psi_lipschitz", worst >= -balls.LIPSCHITZ_SLACK, "min slack {0:.3g}".format(worst))


def reference_spectrum():
    """rho = 1, atoms {1, 0.7}, r = 0.4, Omega = {c:0.4, p:1}."""
    group = groups.make_group(groups.SO, n=3)
    omega = [(SpectralParam.complementary(0.4), 1.0), (SpectralParam.principal(1.0), 1.0)]
    spec = spectrum.PuritySpectrum(group, [1.0, 0.7], 0.4, omega)
    return spec, spectrum.SpectralVector([1.0, 1.0], [1.0, 1.0])


def check_mean_envelope(threads=1):
    spec, f = reference_spectrum()
    coarse = spectrum.theorem_mean_report(spec, f, np.linspace(1.0, 40.0, 79), threads=threads)
    fine = spectrum.theorem_mean_report(spec, f, np.linspace(1.0, 40.0, 157), threads=threads)
    change = abs(fine.sup_ratio - coarse.sup_ratio) / coarse.sup_ratio
    exponent_ok = abs(fine.fitted_exponent + spec.delta) <= EXPONENT_TOL
    detail = "sup ratio {0:.5g} (refinement change {1:.3g}); exponent {2:.4f}".format(
        fine.sup_ratio, change, fine.fitted_exponent)
    passed = math.isfinite(fine.sup_ratio) and change < REFINEMENT_RTOL and exponent_ok
    return Check("mean_envelope", passed, detail)


def check_direction(threads=1):
    spec, f = reference_spectrum()
    distances = spectrum.direction_convergence(spec, f, [10.0, 20.0, 40.0], threads=threads)
    final = float(distances[-1])
    return Check("direction_convergence", final < DIRECTION_TOL,
                 "distance at t=40: {0:.3g}".format(final))


def check_grid_sum():
    result = grid.finite_sum_check(0.5, 200)
    passed = result.dominated and result.threshold is not None
    detail = "dominated={0}; S={1!r}; Cauchy threshold M={2}".format(
        result.dominated, result.total, result.threshold)
    return Check("grid_sum", passed, detail)


def check_mc_limit(t=MC_LIMIT_T, samples=10 ** 6, seed=42, threads=1):
    """Cusp average against 3/(2 pi) within NOISE_SIGMAS standard errors.

    At t = 6 the finite-radius deviation of the ball average is larger than
    the noise of 10^6 draws, so the default radius is MC_LIMIT_T.
    """
    obs = montecarlo.CuspIndicator(2.0)
    run = montecarlo.mc_average(t, samples, obs, seed, threads=threads)
    passed = run.deviation <= montecarlo.NOISE_SIGMAS * run.standard_error
    detail = "t={0:g}: estimate {1:.6f} vs {2:.6f} (stderr {3:.2g}, {4:.2f} sigma)".format(
        t, run.estimate, obs.mean, run.standard_error, run.deviation / run.standard_error)
    return Check("mc_limit", passed, detail)


def check_mc_constant(threads=1):
    run = montecarlo.mc_average(6.0, 10 ** 4, montecarlo.ConstantObservable(), 42, threads=threads)
    return Check("mc_constant", run.estimate == 1.0 and run.standard_error == 0.0,
                 "estimate {0!r}".format(run.estimate))


def check_mc_radial():
    results = [montecarlo.radial_ks_test(t, 10 ** 5, 42) for t in (1.0, 3.0, 6.0)]
    detail = ", ".join("D={0:.4g}".format(stat) for stat, _, _ in results)
    return Check("mc_radial_ks", all(passed for _, _, passed in results), detail)


def check_mc_decay(threads=1):
    decay = montecarlo.decay_scan(np.arange(2.0, 9.0), 10 ** 6, montecarlo.CuspIndicator(2.0),
                                  42, threads=threads)
    summary = decay.summary
    passed = summary["within_envelope"] and summary["monotone_within_noise"]
    detail = "C={0:.4g}; sup ratio {1:.3g}; monotone={2}".format(
        summary["fitted_constant"], decay.sup_ratio, summary["monotone_within_noise"])
    return Check("mc_decay", passed, detail)


def run_checks(group, with_mc=False, threads=1):
    """Run the acceptance suite for `group`.

    Returns:
        A list of Check objects.
    """
    checks = []
    principal = [SpectralParam.principal(1.0)]

    if (group.n1, group.n2) == (2, 0):
        checks.append(check_spherical_oracle(group))
        checks.append(check_region_overlap(group, [SpectralParam.complementary(0.5)] + principal))
        checks.append(check_c_function(group, (0.3, 0.5, 0.9)))
        checks.append(check_bound_01(group, principal + [SpectralParam.complementary(0.5)]))
        checks.append(check_ball_volume_oracle(group))
        checks.append(check_psi_asymptotics(group, 0.5, closed_form=8.0 / 3.0))
        checks.append(check_psi_lipschitz(group, [SpectralParam.complementary(0.5)] + principal))
    else:
        # keep s off the integers, where the connection formula degenerates
        svalues = [group.rho_prime * f for f in (0.37, 0.61)]
        params = [SpectralParam.complementary(s) for s in svalues] + principal
        checks.append(check_region_overlap(group, params))
        checks.append(check_c_function(group, svalues))
        checks.append(check_bound_01(group, params))
        checks.append(check_psi_lipschitz(group, params))

    checks.append(check_mean_envelope(threads=threads))
    checks.append(check_direction(threads=threads))
    checks.append(check_grid_sum())

    if with_mc:
        checks.append(check_mc_constant(threads=threads))
        checks.append(check_mc_radial())
        checks.append(check_mc_limit(threads=threads))
        checks.append(check_mc_decay(threads=threads))

    for check in checks:
        LOG.info("%-22s %s  %s", check.name, "PASS" if check.passed else "FAIL", check.detail)

    return checks


def as_table(checks):
    table = report.Table(("check", "passed", "detail"))

    for check in checks:
        table.append((check.name, check.passed, check.detail))

    return table
