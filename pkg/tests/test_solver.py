#!/usr/bin/env python
# -*- coding: utf-8 -*-
import os, sys
sys.path.insert(0, os.path.abspath('..'))
import math
import shutil
import tempfile
import unittest

import mock
import numpy as np

from pricecap.contrib.tables import Table
from pricecap.discretization import (BoundaryMode, GridSpec, build_grid, default_truncation,
                                     jump_weights, operator_coefficients)
from pricecap.errors import (ConfigurationError, DomainError, ExtrapolationError,
                             NumericalFailure)
from pricecap.model import ModelParams, Payoff, TimeFunction, payoff_eval
from pricecap.montecarlo import black_scholes_call, merton_call
from pricecap.solver import (Solution, apply_jump_operator, check_admissible,
                             implicit_step, initial_condition, price_at, price_surface)


def table2_params(**changes):
    params = dict(alpha=0.015, beta=0.4, sigma=0.5, ell=1.5, sigma_j=0.5,
                  r=0.04, s0=50.0, maturity=1.0)
    params.update(changes)
    return ModelParams(**params)


WIDE = GridSpec(-2.5, 2.5, 1000, 500, boundary=BoundaryMode.DIRICHLET_PAYOFF)


class InitialConditionTestCase(unittest.TestCase):

    def setUp(self):
        self.m = table2_params()
        self.grid = build_grid(GridSpec(-1, 1, 200, 10), self.m)

    def test_call(self):
        p = Payoff.call(45)
        u0 = initial_condition(p, self.grid, self.m)
        self.assertEqual(self.grid.x[100], 0.0)
        self.assertEqual(u0[100], 5.0)
        expected = [payoff_eval(p, s) for s in self.m.s0 * np.exp(self.grid.x)]
        np.testing.assert_array_equal(u0, expected)
        self.assertAlmostEqual(payoff_eval(p, 50 * math.exp(math.log(45.0 / 50.0))), 0.0, places=12)

    def test_put_bounded(self):
        u0 = initial_condition(Payoff.put(45), self.grid, self.m)
        self.assertTrue(np.all(u0 <= 45))
        self.assertTrue(np.all(u0 >= 0))


class JumpOperatorTestCase(unittest.TestCase):

    def setUp(self):
        self.m = table2_params(sigma_j=0.1)
        self.grid = build_grid(GridSpec(-2, 2, 40, 10), self.m)
        self.w = jump_weights(self.m, self.grid.dx, *default_truncation(0.1))

    def brute_force(self, u, fill=(0.0, 0.0)):
        n = len(u)
        v = np.zeros(n)
        for i in range(n):
            for j in range(self.w.k_left, self.w.k_right + 1):
                if 0 <= i + j < n:
                    v[i] += self.w.weight(j) * u[i + j]
                else:
                    v[i] += self.w.weight(j) * fill[i + j >= n]
            v[i] -= self.w.total * u[i]
        return v

    def test_spike(self):
        for k in (0, 3, 20, 40):
            u = np.zeros(41)
            u[k] = 1.0
            v = apply_jump_operator(u, self.w)
            np.testing.assert_allclose(v, self.brute_force(u), rtol=0, atol=1e-15)
            expected = np.array([self.w.weight(k - i) for i in range(41)])
            expected[k] -= self.w.total
            np.testing.assert_allclose(v, expected, rtol=0, atol=1e-15)

    def test_random_row(self):
        u = np.random.default_rng(5).uniform(0, 10, 41)
        np.testing.assert_allclose(apply_jump_operator(u, self.w), self.brute_force(u),
                                   rtol=1e-12, atol=1e-12)

    def test_no_jumps(self):
        w = jump_weights(self.m.replace(ell=0.0), self.grid.dx, -1.0, 1.0)
        np.testing.assert_array_equal(apply_jump_operator(np.ones(41), w), np.zeros(41))

    def test_constants_on_full_stencils(self):
        v = apply_jump_operator(np.full(41, 3.0), self.w)
        inner = v[-self.w.k_left:41 - self.w.k_right]
        self.assertTrue(len(inner) > 0)
        self.assertLess(np.max(np.abs(inner)), 1e-12)
        # mass leaks where the stencil leaves the grid
        self.assertLess(v[0], 0)

    def test_fill_values(self):
        u = np.random.default_rng(8).uniform(0, 10, 41)
        fill = (u[0], u[-1])
        np.testing.assert_allclose(apply_jump_operator(u, self.w, fill), self.brute_force(u, fill),
                                   rtol=1e-12, atol=1e-12)
        v = apply_jump_operator(np.full(41, 3.0), self.w, (3.0, 3.0))
        self.assertLess(np.max(np.abs(v)), 1e-12)


class ImplicitStepTestCase(unittest.TestCase):

    def setUp(self):
        self.m = table2_params(alpha=0.125, beta=0.0, ell=0.0)
        self.grid = build_grid(GridSpec(-1, 1, 50, 10), self.m)
        self.coeffs = operator_coefficients(self.m, self.grid.tau[1], self.grid)

    def test_zero_step(self):
        u = np.random.default_rng(0).normal(size=51)
        np.testing.assert_array_equal(implicit_step(u, self.coeffs, 0.0), u)

    def test_constant(self):
        u = implicit_step(np.full(51, 2.0), self.coeffs, 0.1)
        np.testing.assert_allclose(u, 2.0, rtol=0, atol=1e-12)

    def test_edges(self):
        u = implicit_step(np.full(51, 2.0), self.coeffs, 0.1, edges=(0.0, 0.0))
        self.assertEqual((u[0], u[-1]), (0.0, 0.0))
        self.assertTrue(np.all(u[1:-1] < 2.0))

    def test_dense_oracle(self):
        dt = 0.01
        u = self.grid.x ** 2
        a, b, c = self.coeffs.a, self.coeffs.b, self.coeffs.c
        dense = np.eye(51)
        for row in range(1, 50):
            dense[row, row - 1] = -c[row - 1] * dt
            dense[row, row] = 1 + a[row - 1] * dt
            dense[row, row + 1] = -b[row - 1] * dt
        expected = np.linalg.solve(dense, u)
        np.testing.assert_allclose(implicit_step(u, self.coeffs, dt), expected,
                                   rtol=1e-10, atol=1e-12)


class PriceSurfaceTestCase(unittest.TestCase):

    def test_no_steps(self):
        m = table2_params()
        solution = price_surface(m, Payoff.call(45), GridSpec(-1, 1, 20, 0))
        self.assertEqual(solution.u.shape, (1, 21))
        with self.assertRaises(ExtrapolationError):
            solution.price_at(0.0, 50.0)
        self.assertEqual(solution.price_at(1.0, 50.0), 5.0)

    def test_table12_run(self):
        m = table2_params()
        solution = price_surface(m, Payoff.call(45), GridSpec(-0.096, 0.079, 175, 100))
        self.assertEqual(solution.u.shape, (101, 176))
        self.assertTrue(np.all(np.isfinite(solution.u)))
        self.assertLessEqual(np.max(np.abs(solution.u)), np.max(solution.u[0]) * (1 + 1e-12))

    def test_zero_boundary(self):
        solution = price_surface(table2_params(), Payoff.put(45), GridSpec(-1, 1, 40, 5))
        np.testing.assert_array_equal(solution.u[1:, 0], 0.0)
        np.testing.assert_array_equal(solution.u[1:, -1], 0.0)

    def test_payoff_boundary(self):
        spec = GridSpec(-1, 1, 40, 5, boundary=BoundaryMode.DIRICHLET_PAYOFF)
        solution = price_surface(table2_params(), Payoff.put(45), spec)
        np.testing.assert_array_equal(solution.u[:, 0], solution.u[0, 0])
        np.testing.assert_array_equal(solution.u[:, -1], solution.u[0, -1])

    def test_constant_preserved(self):
        m = table2_params(alpha=0.125, beta=0.0, ell=0.0)
        spec = GridSpec(-1, 1, 40, 20, boundary=BoundaryMode.DIRICHLET_PAYOFF)
        solution = price_surface(m, Payoff.table([(0, 3.0), (1000, 3.0)]), spec)
        np.testing.assert_allclose(solution.u, 3.0, rtol=0, atol=1e-12)

    def test_jumps_off_grid_land_on_edges(self):
        constant = Payoff.table([(0, 3.0), (1000, 3.0)])
        spec = GridSpec(-1, 1, 40, 20, boundary=BoundaryMode.DIRICHLET_PAYOFF)
        solution = price_surface(table2_params(beta=0.0), constant, spec)
        np.testing.assert_allclose(solution.u, 3.0, rtol=0, atol=1e-12)
        leaky = price_surface(table2_params(beta=0.0), constant, GridSpec(-1, 1, 40, 20))
        self.assertLess(leaky.u[-1, 20], 3.0)

    def test_stability(self):
        m = table2_params()
        total = jump_weights(m, 0.01, *default_truncation(0.5)).total
        spec = GridSpec(-1, 1, 200, 2)
        solution = price_surface(m.replace(maturity=1.8 / total), Payoff.put(45), spec)
        self.assertLessEqual(np.max(np.abs(solution.u)), 45 * (1 + 1e-12))
        with self.assertRaises(ConfigurationError) as ctx:
            price_surface(m.replace(maturity=3.0 / total), Payoff.put(45), spec)
        self.assertIn('stability bound', str(ctx.exception))
        self.assertEqual(ctx.exception.violations[0].field, 'grid.n_time')

    def test_invalid_params(self):
        with self.assertRaises(ConfigurationError) as ctx:
            price_surface(table2_params(sigma_j=0.0, ell=-1.0), Payoff.put(45),
                          GridSpec(-1, 1, 20, 5))
        fields = [v.field for v in ctx.exception.violations]
        self.assertEqual(sorted(fields), ['model.ell', 'model.sigma_j'])

    def test_comparison_principle(self):
        m = table2_params()
        spec = GridSpec(-1, 1, 200, 50)
        low = price_surface(m, Payoff.call(45), spec).u
        high = price_surface(m, Payoff.call(50), spec).u
        self.assertTrue(np.all(low >= high - 1e-12 * 45))

    def test_linearity(self):
        m = table2_params()
        spec = GridSpec(-1, 1, 100, 20)
        first = price_surface(m, Payoff.put(45), spec).u
        second = price_surface(m, Payoff.put(50), spec).u
        combined = price_surface(m, Payoff.table([(0, 145), (45, 10), (50, 0), (1000, 0)]), spec).u
        np.testing.assert_allclose(combined, first + 2 * second, rtol=1e-10, atol=1e-10)

    def test_black_scholes(self):
        m = table2_params(alpha=0.04, beta=0.0, ell=0.0)
        solution = price_surface(m, Payoff.call(45), WIDE)
        expected = black_scholes_call(50.0, 45.0, 0.04, 0.5, 1.0)
        self.assertLessEqual(abs(solution.price_at(0.0, 50.0) - expected) / expected, 0.01)
        self.assertEqual(solution.grid.x[500], 0.0)
        self.assertLessEqual(abs(solution.u[-1, 500] - math.exp(0.04) * expected),
                             0.01 * expected)

    def test_merton(self):
        m = table2_params(alpha=0.04, beta=0.0)
        solution = price_surface(m, Payoff.call(45), WIDE)
        expected = merton_call(50.0, 45.0, 0.04, 0.5, 0.5, 1.5, 1.0, 50)
        self.assertLessEqual(abs(price_at(solution, 0.0, 50.0) - expected) / expected, 0.015)

    def test_numerical_failure(self):
        with mock.patch('pricecap.solver.implicit_step', return_value=np.full(21, np.nan)):
            with self.assertRaises(NumericalFailure) as ctx:
                price_surface(table2_params(), Payoff.put(45), GridSpec(-1, 1, 20, 5))
        self.assertEqual(ctx.exception.step, 1)

    def test_coefficients_reused(self):
        import pricecap.solver
        spec = GridSpec(-1, 1, 20, 10)
        with mock.patch('pricecap.solver.operator_coefficients',
                        wraps=pricecap.solver.operator_coefficients) as patched:
            price_surface(table2_params(), Payoff.put(45), spec)
        self.assertEqual(patched.call_count, 1)
        sigma = TimeFunction.table([(0, 0.5), (0.5, 0.4)])
        with mock.patch('pricecap.solver.operator_coefficients',
                        wraps=pricecap.solver.operator_coefficients) as patched:
            price_surface(table2_params(sigma=sigma), Payoff.put(45), spec)
        self.assertEqual(patched.call_count, 2)

    def test_check_admissible(self):
        grid, weights = check_admissible(table2_params(), GridSpec(-1, 1, 20, 5))
        self.assertEqual(grid.n_space, 20)
        self.assertAlmostEqual(weights.total, 1.5, places=7)


class SolutionTestCase(unittest.TestCase):

    def setUp(self):
        self.m = table2_params()
        self.solution = price_surface(self.m, Payoff.put(45), GridSpec(-1, 1, 40, 10))

    def test_maturity_row(self):
        spots = self.solution.spots()
        for i in (0, 7, 20, 33, 40):
            self.assertAlmostEqual(self.solution.price_at(1.0, spots[i]),
                                   payoff_eval(Payoff.put(45), spots[i]), places=10)

    def test_nodes(self):
        grid, u = self.solution.grid, self.solution.u
        spots = self.solution.spots()
        for n, i in ((0, 5), (3, 17), (10, 20), (7, 39)):
            expected = math.exp(-0.04 * grid.tau[n]) * u[n, i]
            self.assertAlmostEqual(self.solution.price_at(1.0 - grid.tau[n], spots[i]),
                                   expected, places=10)

    def test_bilinear(self):
        grid, u = self.solution.grid, self.solution.u
        x = 0.5 * (grid.x[10] + grid.x[11])
        tau = 0.5 * (grid.tau[4] + grid.tau[5])
        value = self.solution.price_at(1.0 - tau, 50.0 * math.exp(x))
        expected = math.exp(-0.04 * tau) * 0.25 * (u[4, 10] + u[4, 11] + u[5, 10] + u[5, 11])
        self.assertAlmostEqual(value, expected, places=10)

    def test_out_of_grid(self):
        with self.assertRaises(ExtrapolationError):
            self.solution.price_at(0.0, 50.0 * math.exp(1.1))
        with self.assertRaises(ExtrapolationError):
            self.solution.price_at(0.0, 50.0 * math.exp(-1.1))
        with self.assertRaises(ExtrapolationError):
            self.solution.price_at(0.0, 0.0)
        with self.assertRaises(DomainError):
            self.solution.price_at(-0.1, 50.0)
        with self.assertRaises(DomainError):
            self.solution.price_at(1.5, 50.0)

    def test_prices(self):
        prices = self.solution.prices()
        np.testing.assert_allclose(prices[-1], math.exp(-0.04) * self.solution.u[-1])
        np.testing.assert_array_equal(prices[0], self.solution.u[0])

    def test_read_only(self):
        with self.assertRaises(ValueError):
            self.solution.u[0, 0] = 1.0

    def test_shape_check(self):
        with self.assertRaises(ValueError):
            Solution(np.zeros((2, 2)), self.solution.grid, self.m)

    def test_table(self):
        table = self.solution.to_table()
        self.assertEqual(table.headers, ['tau', 'x', 'S', 'u', 'C'])
        self.assertEqual(len(table), 11 * 41)
        rows = table.rows
        self.assertEqual(rows[0][:2], [0.0, -1.0])
        self.assertEqual(rows[1][0], 0.0)
        self.assertEqual(rows[41][0], self.solution.grid.tau[1])
        self.assertEqual(list(self.solution.iter_nodes())[42], tuple(rows[42]))

    def test_save(self):
        folder = tempfile.mkdtemp()
        try:
            filename = os.path.join(folder, 'surface.csv')
            self.solution.save(filename)
            data = Table.data_from_file(filename)
            self.assertEqual(data[0], ['tau', 'x', 'S', 'u', 'C'])
            self.assertEqual(len(data), 1 + 11 * 41)
            self.assertEqual(float(data[-1][3]), self.solution.u[-1, -1])
        finally:
            shutil.rmtree(folder)


if __name__ == '__main__':
    unittest.main()
