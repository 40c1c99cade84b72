# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

# stdlib
import math
import unittest

# external
import numpy as np

# internal
from rankerg import balls
from rankerg import errors
from rankerg import groups
from rankerg import hyperbolic
from rankerg.hyperbolic import HPoint, Mat2


class PointTests(unittest.TestCase):
    def test_lower_half_plane(self):
        self.assertRaises(errors.PreconditionError, HPoint, 0.0, 0.0)
        self.assertRaises(errors.PreconditionError, HPoint, 0.3, -1.0)
        self.assertRaises(errors.PreconditionError, HPoint, float("inf"), 1.0)

    def test_equality(self):
        self.assertEqual(HPoint(0.25, 2.0), HPoint.from_complex(0.25 + 2j))
        self.assertNotEqual(HPoint(0.25, 2.0), (0.25, 2.0))


class MatrixTests(unittest.TestCase):
    def test_nonpositive_determinant(self):
        self.assertRaises(errors.PreconditionError, Mat2, 1.0, 0.0, 0.0, -1.0)
        self.assertRaises(errors.PreconditionError, Mat2, 1.0, 2.0, 2.0, 4.0)

    def test_normalised(self):
        m = Mat2(2.0, 0.0, 0.0, 2.0)
        self.assertAlmostEqual(m.det, 1.0, delta=1e-15)
        self.assertEqual(m, Mat2.identity())

    def test_projective_equality(self):
        self.assertEqual(Mat2.inversion() * Mat2.inversion(), Mat2.identity())

    def test_radial(self):
        image = Mat2.radial(1.5).act(hyperbolic.I)
        self.assertAlmostEqual(image.x, 0.0, delta=1e-15)
        self.assertAlmostEqual(image.y, math.exp(1.5), delta=1e-12)

    def test_rotation_fixes_i(self):
        image = Mat2.rotation(0.8).act(hyperbolic.I)
        self.assertAlmostEqual(image.x, 0.0, delta=1e-15)
        self.assertAlmostEqual(image.y, 1.0, delta=1e-15)

    def test_inverse(self):
        m = Mat2(2.0, 1.0, 3.0, 4.0)
        self.assertEqual(m * m.inverse(), Mat2.identity())

    def test_base(self):
        point = HPoint(0.1, 1.3)
        image = Mat2.base(point).act(hyperbolic.I)
        self.assertAlmostEqual(image.x, 0.1, delta=1e-15)
        self.assertAlmostEqual(image.y, 1.3, delta=1e-15)


class DistanceTests(unittest.TestCase):
    def test_vertical(self):
        self.assertAlmostEqual(hyperbolic.hyp_dist(hyperbolic.I, HPoint(0.0, math.e)), 1.0,
                               delta=1e-14)

    def test_horizontal(self):
        self.assertAlmostEqual(hyperbolic.hyp_dist(hyperbolic.I, HPoint(1.0, 1.0)),
                               math.acosh(1.5), delta=1e-14)

    def test_invariance(self):
        z, w = HPoint(0.3, 0.8), HPoint(-1.2, 2.5)
        g = Mat2(2.0, 1.0, 3.0, 4.0)
        self.assertAlmostEqual(hyperbolic.hyp_dist(g.act(z), g.act(w)),
                               hyperbolic.hyp_dist(z, w), delta=1e-12)


class ReductionTests(unittest.TestCase):
    def test_known_point(self):
        reduced = hyperbolic.reduce(HPoint(0.7, 0.4))
        self.assertAlmostEqual(reduced.x, 0.2, delta=1e-14)
        self.assertAlmostEqual(reduced.y, 1.6, delta=1e-14)

    def test_word(self):
        point = HPoint(3.41, 0.013)
        reduced, word = hyperbolic.reduce(point, return_word=True)
        self.assertTrue(hyperbolic.in_domain(reduced))
        image = word.act(point)
        self.assertAlmostEqual(image.x, reduced.x, delta=1e-9)
        self.assertAlmostEqual(image.y, reduced.y, delta=1e-9)

    def test_translation_invariant(self):
        one = hyperbolic.reduce(HPoint(0.7, 0.4))
        two = hyperbolic.reduce(HPoint(1.7, 0.4))
        self.assertAlmostEqual(one.x, two.x, delta=1e-12)
        self.assertAlmostEqual(one.y, two.y, delta=1e-12)

    def test_domain_points_fixed(self):
        point = HPoint(0.2, 1.6)
        self.assertEqual(hyperbolic.reduce(point), point)

    def test_vectorised(self):
        rng = np.random.default_rng(7)
        xs = rng.uniform(-5.0, 5.0, 50)
        ys = np.exp(rng.uniform(-6.0, 2.0, 50))
        rx, ry = hyperbolic.reduce_points(xs, ys)

        for x, y, ex, ey in zip(xs, ys, rx, ry):
            reduced = hyperbolic.reduce(HPoint(x, y))
            self.assertAlmostEqual(reduced.x, ex, delta=1e-12)
            self.assertAlmostEqual(reduced.y, ey, delta=1e-12 * ey)
            self.assertTrue(hyperbolic.in_domain(reduced))


class SamplingTests(unittest.TestCase):
    def setUp(self):
        self.profile = balls.VolumeProfile(groups.make_group(groups.SO, n=2), 5.0)

    def test_cartan_distance(self):
        rng = np.random.default_rng(11)

        for _ in range(20):
            g, tau = hyperbolic.cartan_sample(self.profile, 4.0, rng)
            self.assertTrue(0.0 <= tau <= 4.0)
            dist = hyperbolic.hyp_dist(g.act(hyperbolic.I), hyperbolic.I)
            self.assertAlmostEqual(dist, tau, delta=1e-9 * max(1.0, tau))

    def test_zero_radius(self):
        rng = np.random.default_rng(3)
        theta1, taus, theta2 = hyperbolic.cartan_draws(None, 0.0, 4, rng)
        np.testing.assert_array_equal(taus, np.zeros(4))
        self.assertTrue(np.all((theta1 >= 0) & (theta1 < math.pi)))

    def test_orbit_at_origin(self):
        base = HPoint(0.1, 1.3)
        thetas = np.array([0.0, 0.9, 2.5])
        zs = hyperbolic.orbit_points(base, thetas, np.zeros(3), thetas[::-1])
        np.testing.assert_allclose(zs, np.full(3, base.z), atol=1e-14)

    def test_orbit_distance(self):
        base = HPoint(0.1, 1.3)
        taus = np.array([0.5, 2.0, 4.5])
        zs = hyperbolic.orbit_points(base, np.zeros(3), taus, np.array([0.3, 1.1, 2.9]))

        for z, tau in zip(zs, taus):
            dist = hyperbolic.hyp_dist(HPoint.from_complex(z), base)
            self.assertAlmostEqual(dist, tau, delta=1e-9)


if __name__ == "__main__":
    unittest.main()
