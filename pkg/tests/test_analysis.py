#!/usr/bin/env python
# -*- coding: utf-8 -*-
import os, sys
sys.path.insert(0, os.path.abspath('..'))
import math
import unittest

import numpy as np

from pricecap.analysis import (StudyReport, fit_slope, localization_study,
                               refinement_study, truncation_study)
from pricecap.discretization import BoundaryMode, GridSpec
from pricecap.errors import ConfigurationError, DomainError
from pricecap.model import ModelParams, Payoff
from pricecap.montecarlo import McConfig, black_scholes_put


def table2_params(**changes):
    params = dict(alpha=0.015, beta=0.4, sigma=0.5, ell=1.5, sigma_j=0.5,
                  r=0.04, s0=50.0, maturity=1.0)
    params.update(changes)
    return ModelParams(**params)


class StudyReportTestCase(unittest.TestCase):

    def test_table(self):
        report = StudyReport([(0.1, 0.5, 1.0), (0.05, 0.25, 2.0)], 1.0, 'finest level')
        self.assertEqual(report.to_table().convert('csv'),
                         'param,error,runtime_s\n0.1,0.5,1.0\n0.05,0.25,2.0\n# fitted_rate=1.0\n')

    def test_extras(self):
        report = StudyReport([(1, 0.5, 0)], math.nan, extras={'bound_constant': 2.5})
        text = report.to_table().convert('csv')
        self.assertTrue(text.endswith('# fitted_rate=nan\n# bound_constant=2.5\n'))

    def test_validation(self):
        with self.assertRaises(ValueError):
            StudyReport([], 1.0)
        with self.assertRaises(ValueError):
            StudyReport([(1, -0.5, 0)], 1.0)
        with self.assertRaises(ValueError):
            StudyReport([(1, 0.5, 0), (2, 0.4, 0), (1.5, 0.3, 0)], 1.0)
        with self.assertRaises(ValueError):
            StudyReport([(1, 0.5, 0), (1, 0.4, 0)], 1.0)

    def test_orders(self):
        report = StudyReport([(1, 4.0, 0), (0.5, 2.0, 0), (0.25, 1.0, 0), (0.125, 0.0, 0)], 1.0)
        self.assertEqual(report.observed_orders(), [1.0, 1.0, math.inf])
        self.assertTrue(report.is_decreasing())
        self.assertEqual(report.params, [1.0, 0.5, 0.25, 0.125])

    def test_fit_slope(self):
        self.assertAlmostEqual(fit_slope([0, 1, 2], [1, 3, 5]), 2.0, places=12)
        self.assertTrue(math.isnan(fit_slope([1], [1])))


class RefinementStudyTestCase(unittest.TestCase):

    def test_smooth_payoff(self):
        report = refinement_study(table2_params(), Payoff.gaussian(50, 0.5),
                                  GridSpec(-1.5, 1.5, 60, 10), 4)
        self.assertEqual(len(report.rows), 4)
        self.assertAlmostEqual(report.params[0], 0.05, places=12)
        self.assertEqual(report.errors[-1], 0.0)
        self.assertTrue(report.is_decreasing())
        self.assertGreaterEqual(report.fitted_rate, 0.9)
        self.assertIn('finest level', report.reference_description)

    def test_exact_reference(self):
        m = table2_params(alpha=0.04, beta=0.0, ell=0.0)
        spec = GridSpec(-2, 2, 40, 10, boundary=BoundaryMode.DIRICHLET_PAYOFF)

        def exact(x):
            return [math.exp(0.04) * black_scholes_put(50 * math.exp(v), 45, 0.04, 0.5, 1.0) for v in x]

        report = refinement_study(m, Payoff.put(45), spec, 3, reference=exact, window=(-0.3, 0.3))
        self.assertTrue(report.is_decreasing())
        self.assertTrue(all(e > 0 for e in report.errors))
        self.assertEqual(report.reference_description, 'exact values at tau=T')

    def test_warns_on_kinked_payoff(self):
        with self.assertLogs('pricecap.analysis', 'WARNING'):
            refinement_study(table2_params(), Payoff.put(45), GridSpec(-1, 1, 20, 4), 3)

    def test_threads(self):
        args = (table2_params(), Payoff.gaussian(50, 0.5), GridSpec(-1, 1, 20, 4), 3)
        self.assertEqual(refinement_study(*args).errors, refinement_study(*args, threads=3).errors)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            refinement_study(table2_params(), Payoff.put(45), GridSpec(-1, 1, 20, 4), 2)
        with self.assertRaises(ConfigurationError):
            refinement_study(table2_params(sigma_j=0.0), Payoff.put(45), GridSpec(-1, 1, 20, 4), 3)


class LocalizationStudyTestCase(unittest.TestCase):

    def test_put(self):
        report = localization_study(table2_params(), Payoff.put(45), [0.5, 1.0, 1.5, 2.0])
        self.assertEqual(report.params, [0.5, 1.0, 1.5, 2.0])
        self.assertEqual(report.errors[-1], 0.0)
        self.assertTrue(report.is_decreasing())
        self.assertLessEqual(report.fitted_rate, -0.5)

    def test_bound_constant(self):
        report = localization_study(table2_params(), Payoff.put(45), [0.5, 1.0, 1.5], n_time=20,
                                    bound_cfg=McConfig(n_paths=500, n_substeps=8))
        self.assertGreater(report.extras['bound_constant'], 1.0)

    def test_unbounded_payoff(self):
        with self.assertRaises(DomainError):
            localization_study(table2_params(), Payoff.call(45), [0.5, 1.0])

    def test_widths(self):
        with self.assertRaises(ValueError):
            localization_study(table2_params(), Payoff.put(45), [1.0, 0.5])
        with self.assertRaises(ValueError):
            localization_study(table2_params(), Payoff.put(45), [])


class TruncationStudyTestCase(unittest.TestCase):

    def setUp(self):
        self.spec = GridSpec(-1, 1, 200, 50)

    def test_decay(self):
        report = truncation_study(table2_params(), Payoff.put(45), [1, 2, 3, 4], self.spec, scale=0.5)
        self.assertTrue(report.is_decreasing())
        self.assertEqual(report.errors[-1], 0.0)
        self.assertLess(report.fitted_rate, 0)

    def test_default_width_is_enough(self):
        m = table2_params()
        report = truncation_study(m, Payoff.put(45), [1, 2, 3, 4, 6, 8], self.spec, scale=0.5)
        self.assertLessEqual(report.errors[4], 1e-8 * 45)

    def test_no_jumps(self):
        report = truncation_study(table2_params(ell=0.0), Payoff.put(45), [1, 2], self.spec)
        self.assertEqual(report.errors, [0.0, 0.0])
        self.assertTrue(math.isnan(report.fitted_rate))

    def test_invalid(self):
        with self.assertRaises(ValueError):
            truncation_study(table2_params(), Payoff.put(45), [2, 1], self.spec)


if __name__ == '__main__':
    unittest.main()
