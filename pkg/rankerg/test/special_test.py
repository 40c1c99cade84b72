# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

# stdlib
import cmath
import math
import unittest

# external
import numpy as np
from scipy import special as sp_special

# internal
from rankerg import errors
from rankerg import groups
from rankerg import special
from rankerg.groups import SpectralParam
from rankerg.special import gamma
from rankerg.special import hypergeom


H3 = None  # defined in setUpModule()
H2 = None


def setUpModule():
    global H3, H2

    H3 = groups.make_group(groups.SO, n=3)
    H2 = groups.make_group(groups.SO, n=2)


def _h3_phi(s, ts):
    return np.sinh(s * ts) / (s * np.sinh(ts))


def _h3_phi_principal(lam, ts):
    return np.sin(lam * ts) / (lam * np.sinh(ts))


class LnGammaTests(unittest.TestCase):
    POINTS = (0.1, 0.5, 1.7, 10.3, 57.25, -2.5, -0.3 + 1j, 3 + 4j, 0.5 - 7j, -6.2 - 0.4j)

    def test_matches_scipy(self):
        for z in self.POINTS:
            mine = gamma.ln_gamma(z)
            ref = complex(sp_special.loggamma(complex(z)))
            self.assertAlmostEqual(mine.real, ref.real, delta=1e-12 * max(1.0, abs(ref.real)))
            # branches may differ by 2 pi i
            self.assertAlmostEqual(abs(cmath.exp(1j * (mine.imag - ref.imag)) - 1), 0.0, delta=1e-11)

    def test_principal_branch(self):
        for z in self.POINTS:
            value = gamma.ln_gamma(z)
            self.assertTrue(-math.pi < value.imag <= math.pi)

    def test_real_positive_is_real(self):
        self.assertEqual(gamma.ln_gamma(4.5).imag, 0.0)

    def test_factorials(self):
        self.assertAlmostEqual(gamma.gamma(5).real, 24.0, delta=1e-11)
        self.assertAlmostEqual(gamma.gamma(0.5).real, math.sqrt(math.pi), delta=1e-13)

    def test_poles(self):
        self.assertRaises(errors.GammaPoleError, gamma.ln_gamma, 0)
        self.assertRaises(errors.GammaPoleError, gamma.ln_gamma, -3.0)
        self.assertTrue(gamma.is_pole(-7))
        self.assertFalse(gamma.is_pole(-7 + 1e-9j))

    def test_ratio(self):
        self.assertAlmostEqual(gamma.gamma_ratio([5], [3]).real, 12.0, delta=1e-11)
        self.assertEqual(gamma.gamma_ratio([1.5], [-2]), 0j)
        self.assertRaises(errors.DegenerateParameterError, gamma.gamma_ratio, [-1], [2])


class HypergeometricTests(unittest.TestCase):
    def test_real_parameters_match_scipy(self):
        xs = np.array([-0.1, -0.45, -0.9, -2.0, -7.5, -50.0, -1e4])
        for a, b, c in ((0.75, 0.25, 1.5), (1.3, -0.4, 2.25), (0.6, 0.1, 1.0)):
            values = hypergeom.gauss_2f1_neg(a, b, c, xs)
            ref = sp_special.hyp2f1(a, b, c, xs)
            np.testing.assert_allclose(values, ref, rtol=1e-9)

    def test_conjugate_pair(self):
        ts = np.array([0.2, 1.0, 3.0, 9.0])
        lam = 2.0
        values = hypergeom.gauss_2f1_neg((1 + 1j * lam) / 2, (1 - 1j * lam) / 2, 1.5, -np.sinh(ts) ** 2)
        np.testing.assert_allclose(values, _h3_phi_principal(lam, ts), atol=1e-12)

    def test_region_overlap(self):
        x = -np.sinh(np.linspace(0.3, 0.65, 9)) ** 2
        series = hypergeom.gauss_2f1_neg(0.8, 0.2, 1.5, x, method=hypergeom.SERIES)
        pfaff = hypergeom.gauss_2f1_neg(0.8, 0.2, 1.5, x, method=hypergeom.PFAFF)
        np.testing.assert_allclose(series, pfaff, atol=1e-11)

        x = -np.sinh(np.linspace(1.1, 1.6, 9)) ** 2
        pfaff = hypergeom.gauss_2f1_neg(0.8, 0.2, 1.5, x, method=hypergeom.PFAFF)
        connection = hypergeom.gauss_2f1_neg(0.8, 0.2, 1.5, x, method=hypergeom.CONNECTION)
        np.testing.assert_allclose(pfaff, connection, atol=1e-11)

    def test_parameter_symmetry(self):
        x = np.array([-0.3, -4.0, -300.0])
        np.testing.assert_allclose(
            hypergeom.gauss_2f1_neg(0.8, 0.2, 1.5, x),
            hypergeom.gauss_2f1_neg(0.2, 0.8, 1.5, x),
            rtol=1e-12,
        )

    def test_terminating(self):
        # 2F1(-2, 1; 1; x) = (1 - x)^2
        self.assertAlmostEqual(hypergeom.gauss_2f1_neg(-2, 1, 1, -3.0), 16.0, delta=1e-12)

    def test_degenerate_split(self):
        # a - b = 1; 2F1(a, b; a; x) = (1 - x)^(-b)
        x = np.array([-10.0, -100.0])
        values, degenerate = hypergeom.evaluate(1.5, 0.5, 1.5, x)
        self.assertTrue(degenerate)
        np.testing.assert_allclose(values, (1 - x) ** -0.5, rtol=1e-6)

    def test_zero_argument(self):
        self.assertEqual(hypergeom.gauss_2f1_neg(0.3, 0.7, 1.2, 0.0), 1.0)

    def test_log_argument(self):
        x = -np.array([0.2, 1.5, 40.0])
        values, _ = hypergeom.evaluate(0.3, 0.7, 1.2, x)
        logged, _ = hypergeom.evaluate_log(0.3, 0.7, 1.2, np.log1p(-x))
        np.testing.assert_allclose(logged, values, rtol=1e-13)

        logged, _ = hypergeom.evaluate_log(0.3, 0.7, 1.2, [1000.0])
        self.assertTrue(np.isfinite(logged[0]))
        self.assertRaises(errors.PreconditionError, hypergeom.evaluate_log, 0.3, 0.7, 1.2, [-0.1])

    def test_scalar_returns_float(self):
        self.assertIsInstance(hypergeom.gauss_2f1_neg(0.3, 0.7, 1.2, -1.0), float)

    def test_rejections(self):
        self.assertRaises(errors.PreconditionError, hypergeom.gauss_2f1_neg, 0.3, 0.7, 1.2, 0.5)
        self.assertRaises(errors.InvalidParameterError, hypergeom.gauss_2f1_neg, 0.3, 0.7, -1, -0.5)
        self.assertRaises(errors.InvalidParameterError, hypergeom.gauss_2f1_neg,
                          0.3 + 1j, 0.7 + 1j, 1.2, -0.5)
        self.assertRaises(errors.InvalidParameterError, hypergeom.gauss_2f1_neg,
                          0.3, 0.7, 1.2, -0.5, "taylor")


class SphericalFunctionTests(unittest.TestCase):
    def test_h3_complementary_oracle(self):
        ts = np.logspace(-2, math.log10(25.0), 60)
        for s in (0.1, 0.3, 0.5, 0.7, 0.9):
            values = special.spherical_values(H3, SpectralParam.complementary(s), ts)
            np.testing.assert_allclose(values, _h3_phi(s, ts), rtol=0, atol=1e-10)

    def test_h3_principal_oracle(self):
        ts = np.logspace(-2, math.log10(25.0), 60)
        for lam in (0.5, 1.0, 2.0):
            values = special.spherical_values(H3, SpectralParam.principal(lam), ts)
            np.testing.assert_allclose(values, _h3_phi_principal(lam, ts), rtol=0, atol=1e-10)

    def test_h2_against_scipy(self):
        ts = np.array([0.3, 1.0, 2.5])
        param = SpectralParam.complementary(0.3)
        a, b, c = special.jacobi_params(H2, param)
        ref = sp_special.hyp2f1(a, b, c, -np.sinh(ts) ** 2)
        np.testing.assert_allclose(special.spherical_values(H2, param, ts), ref, rtol=1e-10)

    def test_trivial_and_origin(self):
        self.assertEqual(special.spherical_fn(H3, SpectralParam.trivial(), 7.0).value, 1.0)
        self.assertEqual(special.spherical_fn(H3, SpectralParam.complementary(0.4), 0.0).value, 1.0)
        self.assertEqual(special.spherical_fn(H3, SpectralParam.principal(3.0), 0.0).value, 1.0)

    def test_bounded_by_one(self):
        ts = np.linspace(0.0, 30.0, 301)
        for param in (SpectralParam.complementary(0.95), SpectralParam.principal(0.2)):
            values = special.spherical_values(H3, param, ts)
            self.assertTrue(np.all(np.abs(values) <= 1.0))

    def test_negative_t(self):
        self.assertRaises(errors.PreconditionError, special.spherical_fn,
                          H3, SpectralParam.complementary(0.5), -1.0)

    def test_large_t(self):
        # sinh(t)^2 is not representable here
        for t in (360.0, 400.0, 700.0):
            value = special.spherical_fn(H3, SpectralParam.complementary(0.5), t).value
            self.assertAlmostEqual(math.log(value), math.log(2.0) - 0.5 * t, delta=1e-10)

        for lam in (0.5, 1.0):
            value = special.spherical_fn(H3, SpectralParam.principal(lam), 400.0).value
            self.assertAlmostEqual(value * math.exp(400.0), 2.0 * math.sin(lam * 400.0) / lam,
                                   delta=1e-8)

    def test_value_object(self):
        value = special.spherical_fn(H3, SpectralParam.complementary(0.5), 2.0)
        self.assertEqual(float(value), value.value)
        self.assertFalse(value.degenerate)


class CFunctionTests(unittest.TestCase):
    def test_h3_closed_form(self):
        for s in (0.3, 0.5, 0.9):
            c = special.hc_c_function(H3, SpectralParam.complementary(s))
            self.assertAlmostEqual(c.real, 1.0 / s, delta=1e-11 / s)
            self.assertEqual(c.c.imag, 0.0)

    def test_h3_reflected(self):
        self.assertAlmostEqual(special.c_function_value(H3, -0.5).real, -2.0, delta=1e-11)

    def test_trivial_is_one(self):
        for group in (H2, H3, groups.make_group(groups.SU, n=3)):
            self.assertAlmostEqual(abs(special.c_function_value(group, group.rho)), 1.0, delta=1e-12)

    def test_h3_limit(self):
        param = SpectralParam.complementary(0.5)
        phi = special.spherical_fn(H3, param, 40.0).value
        limit = phi * math.exp(0.5 * 40.0)
        self.assertAlmostEqual(limit, 2.0, delta=1e-8)

    def test_principal_zero_pole(self):
        self.assertRaises(errors.GammaPoleError, special.hc_c_function, H3,
                          SpectralParam.principal(0.0))

    def test_principal_is_complex(self):
        c = special.hc_c_function(H3, SpectralParam.principal(1.0))
        # c(i lambda) = 1/(i lambda) on H^3
        self.assertAlmostEqual(c.c.real, 0.0, delta=1e-12)
        self.assertAlmostEqual(c.c.imag, -1.0, delta=1e-12)


class BoundCertificateTests(unittest.TestCase):
    def test_trivial_constant(self):
        certificate = special.certify_bound_01(H3, [SpectralParam.trivial()], np.linspace(0, 20, 41))[0]
        self.assertEqual(certificate.constant, 1.0)
        self.assertEqual(certificate.t_at_max, 0.0)

    def test_finite_constants(self):
        params = [SpectralParam.principal(1.0), SpectralParam.complementary(0.5)]
        certificates = special.certify_bound_01(H3, params, np.linspace(0, 20, 201))
        self.assertEqual(len(certificates), 2)

        for certificate in certificates:
            self.assertTrue(math.isfinite(certificate.constant))
            self.assertGreaterEqual(certificate.constant, 1.0)

        self.assertLessEqual(certificates[0].constant, 2.0)

    def test_empty_grid(self):
        self.assertRaises(errors.PreconditionError, special.certify_bound_01, H3,
                          [SpectralParam.trivial()], [])


if __name__ == "__main__":
    unittest.main()
