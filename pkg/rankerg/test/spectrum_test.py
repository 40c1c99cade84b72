# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

# stdlib
import math
import unittest

# external
import numpy as np

# internal
from rankerg import errors
from rankerg import groups
from rankerg import spectrum
from rankerg.groups import SpectralParam


H3 = None  # defined in setUpModule()
OMEGA = None


def setUpModule():
    global H3, OMEGA

    H3 = groups.make_group(groups.SO, n=3)
    OMEGA = [(SpectralParam.complementary(0.4), 1.0), (SpectralParam.principal(1.0), 1.0)]


def _reference():
    spec = spectrum.PuritySpectrum(H3, [1.0, 0.7], 0.4, OMEGA)
    return spec, spectrum.SpectralVector([1.0, 1.0], [1.0, 1.0])


class PuritySpectrumTests(unittest.TestCase):
    def test_properties(self):
        spec, _ = _reference()
        self.assertAlmostEqual(spec.delta, 0.6, delta=1e-15)
        self.assertTrue(spec.atom_params[0].is_trivial)
        self.assertEqual(spec.atom_params[1], SpectralParam.complementary(0.7))
        self.assertEqual(spec.weights, [1.0, 1.0])

    def test_violations_reported(self):
        try:
            spectrum.PuritySpectrum(H3, [0.9, 0.95], 0.4, OMEGA)
        except errors.PurityError as ex:
            self.assertEqual(len(ex.violations), 2)
        else:
            self.fail("PurityError not raised")

    def test_negative_weight(self):
        omega = [(SpectralParam.complementary(0.3), -1.0)]
        self.assertRaises(errors.PurityError, spectrum.PuritySpectrum, H3, [1.0], 0.4, omega)

    def test_default_vector(self):
        spec = spectrum.PuritySpectrum(H3, [1.0], 0.4, [(SpectralParam.principal(2.0), 4.0)])
        vector = spec.default_vector()
        self.assertEqual(vector.atom_norms, (1.0,))
        self.assertEqual(vector.omega_norms, (2.0,))
        self.assertAlmostEqual(vector.norm, math.sqrt(5.0), delta=1e-15)


class SpectralVectorTests(unittest.TestCase):
    def test_negative_norm(self):
        self.assertRaises(errors.PreconditionError, spectrum.SpectralVector, [1.0, -0.5])

    def test_scaled(self):
        vector = spectrum.SpectralVector([1.0, 2.0], [2.0])
        self.assertEqual(vector.scaled(0.5), spectrum.SpectralVector([0.5, 1.0], [1.0]))

    def test_shape_mismatch(self):
        spec, _ = _reference()
        bad = spectrum.SpectralVector([1.0], [1.0, 1.0])
        self.assertRaises(errors.PreconditionError, spectrum.check_vector, spec, bad)

    def test_zero_weight_component(self):
        spec = spectrum.PuritySpectrum(H3, [1.0], 0.4, [(SpectralParam.complementary(0.2), 0.0)])
        vector = spectrum.SpectralVector([1.0], [0.5])
        self.assertRaises(errors.PreconditionError, spectrum.check_vector, spec, vector)


class AverageTests(unittest.TestCase):
    def test_contraction(self):
        spec, f = _reference()

        for t in (0.5, 2.0, 10.0):
            self.assertLessEqual(spectrum.apply_average(spec, f, t).norm, f.norm)

    def test_trivial_component_kept(self):
        spec, f = _reference()
        averaged = spectrum.apply_average(spec, f, 5.0)
        self.assertAlmostEqual(averaged.atom_norms[0], 1.0, delta=1e-15)

    def test_no_omega(self):
        spec = spectrum.PuritySpectrum(H3, [1.0, 0.7], 0.4)
        f = spectrum.SpectralVector([1.0, 1.0])
        np.testing.assert_array_equal(spectrum.deviations(spec, f, [1.0, 5.0]), [0.0, 0.0])

    def test_homogeneous(self):
        spec, f = _reference()
        ts = np.array([1.0, 3.0, 9.0])
        np.testing.assert_allclose(spectrum.deviations(spec, f.scaled(2.0), ts),
                                   2.0 * spectrum.deviations(spec, f, ts), rtol=1e-14)

    def test_nonpositive_time(self):
        spec, f = _reference()
        self.assertRaises(errors.PreconditionError, spectrum.deviations, spec, f, [0.0, 1.0])

    def test_threads(self):
        spec, f = _reference()
        ts = np.linspace(1.0, 20.0, 12)
        np.testing.assert_array_equal(spectrum.deviations(spec, f, ts, threads=1),
                                      spectrum.deviations(spec, f, ts, threads=2))


class MeanReportTests(unittest.TestCase):
    def test_finite_ratio(self):
        spec, f = _reference()
        decay = spectrum.theorem_mean_report(spec, f, np.linspace(1.0, 40.0, 79))
        self.assertEqual(decay.columns, ("t", "deviation", "envelope", "ratio"))
        self.assertEqual(len(decay), 79)
        self.assertTrue(math.isfinite(decay.sup_ratio))
        self.assertGreater(decay.sup_ratio, 0.0)

    def test_exponent(self):
        spec, f = _reference()
        decay = spectrum.theorem_mean_report(spec, f, np.linspace(1.0, 40.0, 157))
        self.assertLess(abs(decay.fitted_exponent + spec.delta), 0.05)

    def test_times_below_one(self):
        spec, f = _reference()
        self.assertRaises(errors.PreconditionError, spectrum.theorem_mean_report, spec, f,
                          [0.5, 2.0])


class DirectionTests(unittest.TestCase):
    def test_converges(self):
        spec, f = _reference()
        distances = spectrum.direction_convergence(spec, f, [10.0, 20.0, 40.0])
        self.assertLess(distances[-1], 1e-3)
        self.assertTrue(np.all(np.diff(distances) < 0))

    def test_needs_second_atom(self):
        spec = spectrum.PuritySpectrum(H3, [1.0], 0.4, OMEGA)
        f = spectrum.SpectralVector([1.0], [1.0, 1.0])
        self.assertRaises(errors.PreconditionError, spectrum.direction_convergence, spec, f, [5.0])

    def test_needs_atom_mass(self):
        spec, _ = _reference()
        f = spectrum.SpectralVector([1.0, 0.0], [1.0, 1.0])
        self.assertRaises(errors.PreconditionError, spectrum.direction_convergence, spec, f, [5.0])


class PointwiseTests(unittest.TestCase):
    def test_exponent(self):
        spec, _ = _reference()
        self.assertAlmostEqual(spectrum.pointwise_exponent(spec, 4.0), 0.15, delta=1e-15)

    def test_informative_atoms(self):
        spec, _ = _reference()
        self.assertEqual(spectrum.informative_atoms(spec, 4.0), [0])
        self.assertEqual(spectrum.informative_atoms(spec, 100.0), [0])

    def test_p_at_most_two(self):
        spec, _ = _reference()
        self.assertRaises(errors.PreconditionError, spectrum.pointwise_exponent, spec, 2.0)
        self.assertRaises(errors.PreconditionError, spectrum.informative_atoms, spec, 1.5)


class ConstantTests(unittest.TestCase):
    def test_discrete_constant(self):
        spec, f = _reference()
        constant = spectrum.discrete_constant(spec, f, 0.5, 30)
        self.assertTrue(math.isfinite(float(constant)))
        self.assertEqual(len(constant.partial_sums), 30)
        self.assertTrue(np.all(np.diff(constant.partial_sums) > 0))
        self.assertGreater(constant.tail_bound, 0.0)

    def test_discrete_constant_long_horizon(self):
        spec, f = _reference()
        short = spectrum.discrete_constant(spec, f, 0.5, 200)
        long = spectrum.discrete_constant(spec, f, 0.5, 1000)
        self.assertTrue(math.isfinite(float(long)))
        self.assertTrue(math.isfinite(long.deviation_constant))
        self.assertGreaterEqual(float(long), float(short))
        self.assertLess(long.tail_bound, short.tail_bound)

    def test_fixedbound(self):
        spec, f = _reference()
        value = spectrum.fixedbound_envelope(spec, f, np.linspace(1.0, 40.0, 40))
        self.assertTrue(math.isfinite(value))
        self.assertGreater(value, 0.0)

    def test_fixedbound_zero_vector(self):
        spec, _ = _reference()
        zero = spectrum.SpectralVector([0.0, 0.0], [0.0, 0.0])
        self.assertEqual(spectrum.fixedbound_envelope(spec, zero, [1.0, 2.0]), 0.0)


class ChainTests(unittest.TestCase):
    def test_holds(self):
        spec, f = _reference()
        table = spectrum.chain_check(spec, f, [1.3, 2.7, 5.1])
        self.assertEqual(len(table), 3)
        self.assertTrue(all(table.column("chain_holds")))
        self.assertTrue(all(table.column("lipschitz_holds")))

        for t, t_n in zip(table.column("t"), table.column("t_n")):
            self.assertLessEqual(t_n, t)

    def test_grid_time_exact(self):
        spec, f = _reference()
        table = spectrum.chain_check(spec, f, [2.0])
        self.assertEqual(table.column("t_n"), [2.0])
        self.assertEqual(table.column("shell_fraction"), [0.0])

    def test_beyond_grid(self):
        spec, f = _reference()
        self.assertRaises(errors.PreconditionError, spectrum.chain_check, spec, f, [4.5], m_max=2)


if __name__ == "__main__":
    unittest.main()
