#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    pricecap.analysis
    ~~~~~~~~~~~~~~~~~

    Error studies: grid refinement order, localization decay and
    jump truncation decay.

    :copyright: (c) 2012 by Roman Haritonov.
    :license: BSD, see LICENSE.txt for more details.
"""
import logging
import math
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from pricecap.contrib.tables import Table
from pricecap.discretization import GridSpec
from pricecap.errors import DomainError
from pricecap.model import PayoffKind
from pricecap.montecarlo import localization_constant
from pricecap.solver import check_admissible, price_surface
from pricecap.utils import format_float, timing

__all__ = ['StudyRow', 'StudyReport', 'fit_slope', 'refinement_study',
           'localization_study', 'truncation_study']

logger = logging.getLogger(__name__)

REPORT_HEADERS = ('param', 'error', 'runtime_s')

#: share of the domain, around its center, where errors are measured
CENTRAL_SHARE = 0.2


class StudyRow(namedtuple('StudyRow', 'param error runtime')):
    __slots__ = ()


def fit_slope(xs, ys):
    """ Least-squares slope of `ys` against `xs`, ``nan`` for fewer than two points """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) < 2:
        return math.nan
    return float(np.polyfit(xs, ys, 1)[0])


class StudyReport(object):
    """ Rows of ``(param, error, runtime)`` with a fitted decay rate

    :param rows: iterable of `(param, error, runtime)`, params strictly
                 monotone, errors >= 0
    :param fitted_rate: slope on the study's log scale
    :param reference_description: what the errors are measured against
    :param extras: additional ``name: value`` pairs written as comments
    :raises ValueError: if rows are empty, unordered or have negative errors
    """

    def __init__(self, rows, fitted_rate, reference_description='', extras=None):
        rows = [StudyRow(float(p), float(e), float(t)) for p, e, t in rows]
        if not rows:
            raise ValueError('study report needs at least one row')
        if any(not row.error >= 0 for row in rows):
            raise ValueError('errors must be >= 0')
        steps = np.diff([row.param for row in rows])
        if len(steps) and not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValueError('parameter values must be strictly monotone')
        self.rows = rows
        self.fitted_rate = float(fitted_rate)
        self.reference_description = reference_description
        self.extras = dict(extras or {})

    def __repr__(self):
        return '<StudyReport %d rows, fitted_rate=%r>' % (len(self.rows), self.fitted_rate)

    @property
    def params(self):
        return [row.param for row in self.rows]

    @property
    def errors(self):
        return [row.error for row in self.rows]

    def observed_orders(self):
        """ ``log2(e_k / e_k+1)`` between successive rows """
        orders = []
        for first, second in zip(self.errors, self.errors[1:]):
            if first > 0 and second > 0:
                orders.append(math.log2(first / second))
            elif first > 0:
                orders.append(math.inf)
            else:
                orders.append(math.nan)
        return orders

    def is_decreasing(self):
        errors = self.errors
        return all(a > b for a, b in zip(errors, errors[1:]))

    def to_table(self):
        table = Table(REPORT_HEADERS)
        for row in self.rows:
            table.writerow(row)
        table.comment('fitted_rate=%s' % format_float(self.fitted_rate))
        for name, value in sorted(self.extras.items()):
            table.comment('%s=%s' % (name, format_float(value)))
        return table

    def save(self, filename, fmt=None):
        self.to_table().save(filename, fmt)


def _solve_all(m, p, specs, threads):
    """ Solves every spec, returns `(solution, seconds)` in input order """

    def job(spec):
        with timing('solve %r' % (spec,)) as clock:
            solution = price_surface(m, p, spec)
        return solution, clock.elapsed

    if threads > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(job, specs))
    return [job(spec) for spec in specs]


def _central_points(x_left, x_right, share=CENTRAL_SHARE):
    center = 0.5 * (x_left + x_right)
    return center, 0.5 * share * (x_right - x_left)


def refinement_study(m, p, base, levels, threads=1, reference=None, window=None):
    """ Self-convergence of the scheme under simultaneous halving of `dx` and `dt`

    Level `k` uses ``2**k`` times the base resolution. Errors are max-norm
    differences at ``tau = T`` on the base nodes against the finest level,
    or against `reference` when given.

    :param base: coarsest :class:`~pricecap.discretization.GridSpec`
    :param levels: number of levels, >= 3
    :param reference: optional callable mapping base nodes `x` to exact `u(T, x)`
    :param window: optional `(x_lo, x_hi)` restricting the measured nodes
    :returns: :class:`StudyReport` with `param` = `dx` and the fitted
              order as slope of ``ln(error)`` on ``ln(dx)``
    :raises ConfigurationError: if any level is inadmissible
    """
    if levels < 3:
        raise ValueError('refinement study needs at least 3 levels')
    if p.kind is not PayoffKind.GAUSSIAN:
        logger.warning('refinement study with a %s payoff; the order holds for smooth payoffs',
                       p.kind.value)
    specs = [base.refined(2 ** k) for k in range(levels)]
    for spec in specs:
        check_admissible(m, spec)
    results = _solve_all(m, p, specs, threads)

    base_x = results[0][0].grid.x
    mask = np.ones(len(base_x), dtype=bool)
    if window is not None:
        mask = (base_x >= window[0]) & (base_x <= window[1])
    if reference is not None:
        target = np.asarray(reference(base_x[mask]), dtype=float)
        description = 'exact values at tau=T'
    else:
        finest = results[-1][0]
        target = finest.u[-1, ::2 ** (levels - 1)][mask]
        description = 'finest level N=%d M=%d' % (finest.grid.n_space, finest.grid.n_time)

    rows = []
    for k, (solution, elapsed) in enumerate(results):
        values = solution.u[-1, ::2 ** k][mask]
        rows.append((solution.grid.dx, float(np.max(np.abs(values - target))), elapsed))
        logger.info('refinement level %d dx=%r error=%r', k, solution.grid.dx, rows[-1][1])
    positive = [(dx, e) for dx, e, _ in rows if e > 0]
    rate = fit_slope([math.log(dx) for dx, _ in positive], [math.log(e) for _, e in positive])
    return StudyReport(rows, rate, description)


def localization_study(m, p_bounded, widths, dx=0.01, n_time=100, threads=1,
                       bound_cfg=None, **grid_options):
    """ Decay of the localization error with the domain width

    Every domain is ``(-w, w)`` with the same `dx`. Errors are measured at
    ``tau = T`` on ``|x| <= 0.2 * min(widths)`` against the widest domain.

    :param p_bounded: bounded payoff (put, table or gaussian)
    :param widths: strictly increasing half-widths
    :param bound_cfg: :class:`~pricecap.montecarlo.McConfig` to also estimate
                      the bound constant, reported as `bound_constant`
    :param grid_options: other :class:`~pricecap.discretization.GridSpec` fields
    :returns: :class:`StudyReport`, `fitted_rate` is the slope of
              ``ln(error)`` on width, negative for exponential decay
    """
    if not p_bounded.is_bounded:
        raise DomainError('localization study needs a bounded payoff, got %s'
                          % p_bounded.kind.value)
    widths = [float(w) for w in widths]
    if not widths or any(w <= 0 for w in widths) or np.any(np.diff(widths) <= 0):
        raise ValueError('widths must be positive and strictly increasing')
    specs = [GridSpec(-w, w, max(2, int(round(2 * w / dx))), n_time, **grid_options)
             for w in widths]
    for spec in specs:
        check_admissible(m, spec)
    results = _solve_all(m, p_bounded, specs, threads)

    half = CENTRAL_SHARE * widths[0]
    points = np.arange(-math.floor(half / dx), math.floor(half / dx) + 1) * dx
    profiles = [np.interp(points, s.grid.x, s.u[-1]) for s, _ in results]
    reference = profiles[-1]
    rows = [(w, float(np.max(np.abs(profile - reference))), elapsed)
            for w, profile, (_, elapsed) in zip(widths, profiles, results)]
    positive = [(w, e) for w, e, _ in rows if e > 0]
    rate = fit_slope([w for w, _ in positive], [math.log(e) for _, e in positive])
    extras = {}
    if bound_cfg is not None:
        extras['bound_constant'] = localization_constant(m, m.maturity, bound_cfg, threads).price
    return StudyReport(rows, rate, 'widest domain w=%r' % widths[-1], extras)


def truncation_study(m, p, b_values, gs, scale=1.0, threads=1):
    """ Decay of the jump truncation error

    For each `B` the jump sizes are cut to
    ``[-(B * scale + sigma_j**2 / 2), B * scale]``; errors are measured at
    ``tau = T`` on the central 20% of the grid against the largest `B`.

    :param b_values: strictly increasing positive values
    :param gs: :class:`~pricecap.discretization.GridSpec` shared by all runs
    :param scale: unit of `b_values`, e.g. `sigma_j`
    :returns: :class:`StudyReport`, `fitted_rate` is the slope of
              ``ln(error)`` on `B`
    """
    b_values = [float(b) for b in b_values]
    if not b_values or any(b <= 0 for b in b_values) or np.any(np.diff(b_values) <= 0):
        raise ValueError('b_values must be positive and strictly increasing')
    shift = 0.5 * m.sigma_j ** 2
    specs = [gs.replace(b_left=-(b * scale + shift), b_right=b * scale) for b in b_values]
    for spec in specs:
        check_admissible(m, spec)
    results = _solve_all(m, p, specs, threads)

    x = results[0][0].grid.x
    center, half = _central_points(x[0], x[-1])
    mask = np.abs(x - center) <= half
    reference = results[-1][0].u[-1, mask]
    rows = [(b, float(np.max(np.abs(s.u[-1, mask] - reference))), elapsed)
            for b, (s, elapsed) in zip(b_values, results)]
    positive = [(b, e) for b, e, _ in rows if e > 0]
    rate = fit_slope([b for b, _ in positive], [math.log(e) for _, e in positive])
    return StudyReport(rows, rate, 'largest truncation B=%r' % b_values[-1])
