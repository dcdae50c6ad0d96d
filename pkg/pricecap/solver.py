#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    pricecap.solver
    ~~~~~~~~~~~~~~~

    Explicit-implicit time stepping of the pricing equation in
    ``u(tau, x) = exp(r tau) C(T - tau, S0 exp(x))``.

    :copyright: (c) 2012 by Roman Haritonov.
    :license: BSD, see LICENSE.txt for more details.
"""
import logging
import math

import numpy as np

from pricecap.contrib.tables import Table
from pricecap.discretization import (BoundaryMode, build_grid, jump_weights,
                                     operator_coefficients, stability_bound)
from pricecap.errors import (ConfigurationError, DomainError, ExtrapolationError,
                             NumericalFailure, Violation)
from pricecap.model import validate_params
from pricecap.tridiag import TridiagonalSystem, solve
from pricecap.utils import timing

__all__ = ['Solution', 'BoundaryMode', 'initial_condition', 'apply_jump_operator',
           'implicit_step', 'check_admissible', 'price_surface', 'price_at']

logger = logging.getLogger(__name__)

SURFACE_HEADERS = ('tau', 'x', 'S', 'u', 'C')

# relative distance under which a query snaps to the node
_SNAP = 1e-9


class Solution(object):
    """ Lattice ``u[n, i]`` of transformed values with its grid

    ``u[n, i]`` approximates ``exp(r tau_n) C(T - tau_n, S0 exp(x_i))``;
    row 0 is the payoff. The array is read-only.
    """

    def __init__(self, u, grid, params, payoff=None, weights=None):
        u = np.asarray(u, dtype=float)
        if u.shape != (len(grid.tau), len(grid.x)):
            raise ValueError('lattice shape %s does not match grid' % (u.shape,))
        u.flags.writeable = False
        self.u = u
        self.grid = grid
        self.params = params
        self.payoff = payoff
        self.weights = weights

    def __repr__(self):
        return '<Solution %r>' % (self.grid,)

    def discount_factors(self):
        """ ``exp(-r tau_n)`` for every time level """
        return np.exp(-self.params.r * self.grid.tau)

    def prices(self):
        """ Option prices ``C`` on the lattice, same layout as :attr:`u` """
        return self.u * self.discount_factors()[:, np.newaxis]

    def spots(self):
        return self.grid.spots(self.params.s0)

    def iter_nodes(self):
        """ Yields ``(tau, x, S, u, C)`` for every node, level by level """
        spots = self.spots()
        discount = self.discount_factors()
        for n, tau in enumerate(self.grid.tau):
            row = self.u[n]
            for i, x in enumerate(self.grid.x):
                yield (float(tau), float(x), float(spots[i]), float(row[i]),
                       float(row[i] * discount[n]))

    def to_table(self):
        """ :class:`~pricecap.contrib.tables.Table` with columns ``tau,x,S,u,C`` """
        table = Table(SURFACE_HEADERS)
        for node in self.iter_nodes():
            table.writerow(node)
        return table

    def save(self, filename, fmt=None):
        self.to_table().save(filename, fmt)

    def _locate(self, value, nodes, step, name):
        """ Cell index and weight of `value` on uniform `nodes` """
        last = len(nodes) - 1
        if last == 0 or step == 0:
            return 0, 0.0
        pos = (value - nodes[0]) / step
        if abs(pos - round(pos)) < _SNAP:
            pos = float(round(pos))
        if pos < 0 or pos > last:
            raise ExtrapolationError('%s=%r outside [%r, %r]' % (name, value, nodes[0], nodes[-1]))
        i = min(int(math.floor(pos)), last - 1)
        return i, pos - i

    def price_at(self, t, s):
        """ Price ``C(t, S)`` by bilinear interpolation of the lattice

        :param t: calendar time in `[0, T]`
        :param s: spot, inside the grid range ``S0 exp(x_left) .. S0 exp(x_right)``
        :raises DomainError: if `t` is outside `[0, T]`
        :raises ExtrapolationError: if the query is outside the grid
        """
        m, grid = self.params, self.grid
        if not 0 <= t <= m.maturity:
            raise DomainError('t=%r outside [0, %r]' % (t, m.maturity))
        if not s > 0:
            raise ExtrapolationError('S=%r outside the grid' % (s,))
        tau = m.maturity - t
        x = math.log(s / m.s0)
        if len(grid.tau) == 1 and tau > 0:
            raise ExtrapolationError('only tau=0 was computed, asked tau=%r' % tau)
        i, wx = self._locate(x, grid.x, grid.dx, 'x')
        n, wt = self._locate(tau, grid.tau, grid.dt, 'tau')
        u = self.u
        value = (1 - wx) * u[n, i] + wx * u[n, i + 1]
        if wt:
            upper = (1 - wx) * u[n + 1, i] + wx * u[n + 1, i + 1]
            value = (1 - wt) * value + wt * upper
        return float(math.exp(-m.r * tau) * value)


def price_at(sol, t, s):
    """ Shortcut for :meth:`Solution.price_at` """
    return sol.price_at(t, s)


def initial_condition(p, grid, m):
    """ ``u^0_i = H(S0 exp(x_i))`` """
    return p.values(grid.spots(m.s0))


def apply_jump_operator(u_row, w, fill=(0.0, 0.0)):
    """ Discrete jump operator ``v_i = sum_j nu_j (u_{i+j} - u_i)``

    :param fill: values taken by ``u`` left and right of the grid
    """
    u_row = np.asarray(u_row, dtype=float)
    if w.total == 0:
        return np.zeros_like(u_row)
    left, right = fill
    extended = np.concatenate((np.full(-w.k_left, left), u_row, np.full(w.k_right, right)))
    return np.convolve(extended, w.nu[::-1], 'valid') - w.total * u_row


def implicit_step(u_expl, coeffs, dt, edges=None):
    """ One implicit convection-diffusion step

    Solves ``-c dt u_{i-1} + (1 + a dt) u_i - b dt u_{i+1} = u_expl_i`` on
    interior nodes.

    :param u_expl: right-hand side including the explicit jump contribution
    :param coeffs: :class:`~pricecap.discretization.OperatorCoeffs`
    :param dt: time step
    :param edges: `(u_0, u_N)` of the new level, the edges of `u_expl` if `None`
    :returns: new level, `N + 1` values
    """
    u_expl = np.asarray(u_expl, dtype=float)
    left, right = (u_expl[0], u_expl[-1]) if edges is None else edges
    rhs = u_expl[1:-1].copy()
    rhs[0] += coeffs.c[0] * dt * left
    rhs[-1] += coeffs.b[-1] * dt * right
    system = TridiagonalSystem(-dt * coeffs.c[1:], 1.0 + dt * coeffs.a,
                               -dt * coeffs.b[:-1], rhs)
    result = np.empty_like(u_expl)
    result[0], result[-1] = left, right
    result[1:-1] = solve(system)
    return result


def check_admissible(m, gs):
    """ Validates model and grid before stepping

    :returns: tuple `(grid, weights)`
    :raises ConfigurationError: listing every violation, including a time
                                step above the stability bound
    """
    violations = list(validate_params(m).violations)
    violations.extend(Violation(*v) for v in gs.violations())
    if violations:
        raise ConfigurationError(violations)
    grid = build_grid(gs, m)
    b_left, b_right = gs.truncation(m.sigma_j)
    weights = jump_weights(m, grid.dx, b_left, b_right)
    bound = stability_bound(weights)
    if grid.dt > bound:
        raise ConfigurationError([Violation(
            'grid.n_time', 'time step %r exceeds stability bound %r' % (grid.dt, bound))])
    return grid, weights


def price_surface(m, p, gs):
    """ Runs the explicit-implicit scheme over the whole grid

    Each step folds the explicit jump term into the right-hand side,
    ``rhs = u^n + dt J(u^n)``, then solves the implicit system with
    coefficients taken at ``tau_{n+1}``.

    :param m: :class:`~pricecap.model.ModelParams`
    :param p: :class:`~pricecap.model.Payoff`
    :param gs: :class:`~pricecap.discretization.GridSpec`
    :returns: :class:`Solution`
    :raises ConfigurationError: on invalid input or unstable time step
    :raises NumericalFailure: when a non-finite value shows up
    """
    grid, weights = check_admissible(m, gs)
    dt = grid.dt
    u = np.empty((len(grid.tau), len(grid.x)))
    u[0] = initial_condition(p, grid, m)
    if not np.all(np.isfinite(u[0])):
        raise NumericalFailure(0)
    if gs.boundary is BoundaryMode.DIRICHLET_PAYOFF:
        edges = (u[0, 0], u[0, -1])
    else:
        edges = (0.0, 0.0)
    key = coeffs = None
    with timing('price_surface N=%d M=%d' % (grid.n_space, grid.n_time)):
        for n in range(grid.n_time):
            tau_next = grid.tau[n + 1]
            current = m.coefficients_at(max(m.maturity - tau_next, 0.0))
            if current != key:
                key = current
                coeffs = operator_coefficients(m, tau_next, grid, gs.drift_form)
            rhs = u[n] + dt * apply_jump_operator(u[n], weights, edges)
            u[n + 1] = implicit_step(rhs, coeffs, dt, edges)
            if not np.all(np.isfinite(u[n + 1])):
                raise NumericalFailure(n + 1)
    logger.info('solved %r', grid)
    return Solution(u, grid, m, p, weights)
