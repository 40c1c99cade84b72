# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

# stdlib
import math
import unittest

# external
import numpy as np

# internal
from rankerg import errors
from rankerg import quadrature


class GaussLegendreTests(unittest.TestCase):
    def test_weights(self):
        nodes, weights = quadrature.gauss_legendre(20)
        self.assertEqual(len(nodes), 20)
        self.assertAlmostEqual(weights.sum(), 2.0, delta=1e-14)

    def test_cached_readonly(self):
        nodes, _ = quadrature.gauss_legendre(20)
        self.assertIs(nodes, quadrature.gauss_legendre(20)[0])
        self.assertRaises(ValueError, nodes.__setitem__, 0, 1.0)


class PanelTests(unittest.TestCase):
    def test_edges_with_breaks(self):
        edges = quadrature.panel_edges(0.0, 1.0, max_panel=0.25, breaks=[0.3, 2.0])
        np.testing.assert_allclose(edges, [0.0, 0.25, 0.3, 0.5, 0.75, 1.0])

    def test_bad_panel(self):
        self.assertRaises(errors.PreconditionError, quadrature.panel_edges, 0.0, 1.0, 0.0)


class IntegrateTests(unittest.TestCase):
    def test_exponential(self):
        self.assertAlmostEqual(quadrature.integrate(np.exp, 0.0, 1.0), math.e - 1, delta=1e-13)

    def test_sine(self):
        self.assertAlmostEqual(quadrature.integrate(np.sin, 0.0, math.pi), 2.0, delta=1e-13)

    def test_empty_interval(self):
        self.assertEqual(quadrature.integrate(np.exp, 2.0, 2.0), 0.0)

    def test_panel_integrals(self):
        edges = np.array([0.0, 1.0, 3.0])
        integrals, errs = quadrature.integrate_panels(lambda tau, ref: tau ** 2, edges)
        np.testing.assert_allclose(integrals, [1.0 / 3.0, 26.0 / 3.0], rtol=1e-13)
        self.assertTrue(np.all(errs >= 0))

    def test_singular_integrand(self):
        self.assertRaises(errors.QuadratureError, quadrature.integrate,
                          lambda tau: 1.0 / np.sqrt(tau), 0.0, 1.0)


class CumulativeTests(unittest.TestCase):
    def test_scaled_growth(self):
        # F = e^{2 tau}: e^{-2b} int_0^b F = (1 - e^{-2b}) / 2
        edges = quadrature.panel_edges(0.0, 60.0)
        totals = quadrature.cumulative(lambda tau, ref: np.exp(2.0 * (tau - ref)), edges, rate=2.0)
        expected = 0.5 * (1.0 - np.exp(-2.0 * edges))
        self.assertEqual(totals[0], 0.0)
        np.testing.assert_allclose(totals[1:], expected[1:], rtol=1e-12)

    def test_unscaled(self):
        edges = np.linspace(0.0, 2.0, 5)
        totals = quadrature.cumulative(lambda tau, ref: np.ones_like(tau), edges)
        np.testing.assert_allclose(totals, edges, atol=1e-14)


if __name__ == "__main__":
    unittest.main()
