# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

# stdlib
import unittest

# internal
from rankerg import groups
from rankerg import verify


H3 = None  # defined in setUpModule()


def setUpModule():
    global H3

    H3 = groups.make_group(groups.SO, n=3)


class OracleCheckTests(unittest.TestCase):
    def test_spherical_oracle(self):
        check = verify.check_spherical_oracle(H3)
        self.assertTrue(check.passed, msg=check.detail)

    def test_ball_volume(self):
        check = verify.check_ball_volume_oracle(H3)
        self.assertTrue(check.passed, msg=check.detail)

    def test_psi_asymptotics(self):
        check = verify.check_psi_asymptotics(H3, 0.5, closed_form=8.0 / 3.0)
        self.assertTrue(check.passed, msg=check.detail)


class SelfConsistencyTests(unittest.TestCase):
    def test_c_function_small_s(self):
        group = groups.make_group(groups.SO, n=2)
        check = verify.check_c_function(group, (0.185, 0.305))
        self.assertTrue(check.passed, msg=check.detail)

    def test_region_overlap(self):
        group = groups.parse_group("su:2")
        params = [groups.SpectralParam.complementary(0.74), groups.SpectralParam.principal(1.0)]
        check = verify.check_region_overlap(group, params)
        self.assertTrue(check.passed, msg=check.detail)


class ModelCheckTests(unittest.TestCase):
    def test_grid_sum(self):
        check = verify.check_grid_sum()
        self.assertTrue(check.passed, msg=check.detail)
        self.assertIn("threshold", check.detail)

    def test_direction(self):
        check = verify.check_direction()
        self.assertTrue(check.passed, msg=check.detail)

    def test_reference_spectrum(self):
        spec, f = verify.reference_spectrum()
        self.assertEqual(spec.atoms, (1.0, 0.7))
        self.assertEqual(f.norm, 2.0)


class MonteCarloCheckTests(unittest.TestCase):
    def test_limit_at_default_radius(self):
        check = verify.check_mc_limit(samples=2 * 10 ** 5)
        self.assertTrue(check.passed, msg=check.detail)
        self.assertTrue(check.detail.startswith("t=10:"))

    def test_finite_radius_bias_at_six(self):
        # the ball average at t = 6 still sits about 0.003 below 3/(2 pi)
        check = verify.check_mc_limit(t=6.0)
        self.assertFalse(check.passed, msg=check.detail)


class SuiteTests(unittest.TestCase):
    def test_h3_suite(self):
        checks = verify.run_checks(H3)
        failed = [check for check in checks if not check.passed]
        self.assertEqual(failed, [])

        table = verify.as_table(checks)
        self.assertEqual(table.columns, ("check", "passed", "detail"))
        self.assertEqual(len(table), len(checks))
        self.assertIn("grid_sum", table.column("check"))
        self.assertIn("region_overlap", table.column("check"))


if __name__ == "__main__":
    unittest.main()
