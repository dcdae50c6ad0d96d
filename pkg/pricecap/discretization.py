#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    pricecap.discretization
    ~~~~~~~~~~~~~~~~~~~~~~~

    Space-time grid, jump quadrature weights, upwind operator coefficients
    and the stability bound of the explicit jump step.

    :copyright: (c) 2012 by Roman Haritonov.
    :license: BSD, see LICENSE.txt for more details.
"""
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.stats import norm

from pricecap.errors import DomainError

__all__ = ['DriftForm', 'BoundaryMode', 'GridSpec', 'Grid', 'JumpWeights',
           'OperatorCoeffs', 'build_grid', 'default_truncation', 'jump_weights',
           'drift_coefficient', 'operator_coefficients', 'stability_bound']

logger = logging.getLogger(__name__)

#: Default jump truncation in units of `sigma_j`
TRUNCATION_WIDTH = 6.0


class DriftForm(Enum):
    """ First-order coefficient of the log-space operator

    All forms share ``alpha - sigma**2 / 2`` and differ in the `beta` term:

    - ``DERIVED``: ``-(beta / S0) * exp(-x)``, what the change of variables gives
    - ``EXP_PLUS``: ``-(beta / S0) * exp(+x)``
    - ``NO_EXP``: ``-(beta / S0)``
    """
    DERIVED = 'derived'
    EXP_PLUS = 'paper_fds'
    NO_EXP = 'paper_ca'


class BoundaryMode(Enum):
    """ Values held at `x_0` and `x_N` while stepping """
    #: zero outside the interior, like the jump operator assumes
    DIRICHLET_ZERO = 'dirichlet_zero'
    #: edges keep the payoff value for every time level
    DIRICHLET_PAYOFF = 'dirichlet_payoff'


def default_truncation(sigma_j):
    """ `(B_left, B_right)` leaving less than 1e-8 of jump mass outside """
    return (-(TRUNCATION_WIDTH * sigma_j + 0.5 * sigma_j ** 2),
            TRUNCATION_WIDTH * sigma_j)


@dataclass(frozen=True)
class GridSpec(object):
    """ Geometry of the log-moneyness grid and the jump truncation

    :param x_left: left end of the domain, ``x = ln(S / S0)``
    :param x_right: right end of the domain
    :param n_space: number of space intervals `N`
    :param n_time: number of time steps `M`
    :param b_left: left truncation of jump sizes, ``None`` for the default
    :param b_right: right truncation of jump sizes, ``None`` for the default
    """
    x_left: float
    x_right: float
    n_space: int
    n_time: int
    b_left: float = None
    b_right: float = None
    drift_form: DriftForm = DriftForm.DERIVED
    boundary: BoundaryMode = BoundaryMode.DIRICHLET_ZERO

    def __post_init__(self):
        object.__setattr__(self, 'drift_form', DriftForm(self.drift_form))
        object.__setattr__(self, 'boundary', BoundaryMode(self.boundary))
        object.__setattr__(self, 'x_left', float(self.x_left))
        object.__setattr__(self, 'x_right', float(self.x_right))
        for name in ('b_left', 'b_right'):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, float(value))

    def violations(self):
        """ Broken geometry rules as ``(field, rule)`` pairs """
        found = []
        if not (math.isfinite(self.x_left) and math.isfinite(self.x_right)):
            found.append(('grid.x_left', 'domain ends must be finite'))
        elif not self.x_left < self.x_right:
            found.append(('grid.x_left', 'must be < x_right'))
        if int(self.n_space) != self.n_space or self.n_space < 2:
            found.append(('grid.n_space', 'must be an integer >= 2'))
        if int(self.n_time) != self.n_time or self.n_time < 0:
            found.append(('grid.n_time', 'must be an integer >= 0'))
        if self.b_left is not None and not self.b_left < 0:
            found.append(('grid.b_left', 'must be < 0'))
        if self.b_right is not None and not self.b_right > 0:
            found.append(('grid.b_right', 'must be > 0'))
        return found

    @property
    def dx(self):
        return (self.x_right - self.x_left) / self.n_space

    def truncation(self, sigma_j):
        """ `(B_left, B_right)`, defaults filled in from `sigma_j` """
        left, right = default_truncation(sigma_j)
        return (left if self.b_left is None else self.b_left,
                right if self.b_right is None else self.b_right)

    def refined(self, factor=2):
        """ Same domain with `factor` times more space and time steps """
        return replace(self, n_space=self.n_space * factor, n_time=self.n_time * factor)

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class Grid(object):
    """ Nodes ``x_i = x_left + i * dx`` and levels ``tau_n = n * dt`` """
    spec: GridSpec
    x: np.ndarray
    tau: np.ndarray
    dx: float
    dt: float
    maturity: float

    @property
    def n_space(self):
        return len(self.x) - 1

    @property
    def n_time(self):
        return len(self.tau) - 1

    def spots(self, s0):
        return s0 * np.exp(self.x)

    def __repr__(self):
        return 'Grid(x=[%r, %r], N=%d, M=%d, dx=%r, dt=%r)' % (
            float(self.x[0]), float(self.x[-1]), self.n_space, self.n_time, self.dx, self.dt)


def build_grid(gs, m):
    """ Builds uniform grid for `gs` over `[0, m.maturity]`

    ::

        >>> g = build_grid(GridSpec(-1, 1, 2, 4), params)
        >>> g.x
        array([-1.,  0.,  1.])

    :raises ValueError: if `gs` geometry or maturity is invalid
    """
    problems = gs.violations()
    if not m.maturity > 0:
        problems.append(('model.maturity', 'must be > 0'))
    if problems:
        raise ValueError('; '.join('%s: %s' % p for p in problems))
    n, steps = int(gs.n_space), int(gs.n_time)
    dx = (gs.x_right - gs.x_left) / n
    x = gs.x_left + dx * np.arange(n + 1)
    x[-1] = gs.x_right
    if steps:
        dt = m.maturity / steps
        tau = dt * np.arange(steps + 1)
        tau[-1] = m.maturity
    else:
        dt = 0.0
        tau = np.zeros(1)
    x.flags.writeable = False
    tau.flags.writeable = False
    logger.debug('grid N=%d M=%d dx=%r dt=%r', n, steps, dx, dt)
    return Grid(gs, x, tau, dx, dt, m.maturity)


@dataclass(frozen=True)
class JumpWeights(object):
    """ Cell masses of the jump-size law times the intensity

    ``nu[j - k_left]`` is the weight of a jump by `j` nodes.
    """
    k_left: int
    k_right: int
    nu: np.ndarray
    total: float

    @property
    def offsets(self):
        return np.arange(self.k_left, self.k_right + 1)

    def weight(self, j):
        if not self.k_left <= j <= self.k_right:
            return 0.0
        return float(self.nu[j - self.k_left])

    def __len__(self):
        return len(self.nu)


def jump_weights(m, dx, b_left, b_right):
    """ Weights of the explicit jump operator

    ``nu_j = ell * P((j - 1/2) dx < ln J <= (j + 1/2) dx)`` for
    ``j = floor(b_left / dx) .. ceil(b_right / dx)``.

    :param m: :class:`~pricecap.model.ModelParams`
    :param dx: grid spacing
    :param b_left: left truncation, < 0
    :param b_right: right truncation, > 0
    :raises ValueError: on invalid arguments
    """
    if not dx > 0:
        raise ValueError('dx must be > 0')
    if not (b_left < 0 < b_right):
        raise ValueError('truncation must satisfy b_left < 0 < b_right')
    if not m.sigma_j > 0:
        raise ValueError('sigma_j must be > 0')
    k_left = int(math.floor(b_left / dx))
    k_right = int(math.ceil(b_right / dx))
    if m.ell > 0:
        edges = (np.arange(k_left, k_right + 2) - 0.5) * dx
        z = (edges + 0.5 * m.sigma_j ** 2) / m.sigma_j
        # upper tail through the survival function keeps small cells accurate
        lower_tail = np.diff(norm.cdf(z))
        upper_tail = -np.diff(norm.sf(z))
        nu = m.ell * np.where(z[:-1] < 0, lower_tail, upper_tail)
        nu = np.maximum(nu, 0.0)
    else:
        nu = np.zeros(k_right - k_left + 1)
    nu.flags.writeable = False
    total = math.fsum(nu)
    logger.debug('jump weights j=%d..%d total=%r', k_left, k_right, total)
    return JumpWeights(k_left, k_right, nu, total)


def stability_bound(w):
    """ Largest time step the explicit jump step allows, ``inf`` without jumps """
    if w.total <= 0:
        return math.inf
    return 1.0 / w.total


def drift_coefficient(m, tau, x, form=DriftForm.DERIVED):
    """ First-order coefficient `f(tau, x)`, vectorized over `x`

    :raises DomainError: if `tau` is outside `[0, T]`
    """
    if not 0 <= tau <= m.maturity * (1 + 1e-12):
        raise DomainError('tau=%r outside [0, %r]' % (tau, m.maturity))
    t = max(m.maturity - tau, 0.0)
    alpha, beta, sigma = m.coefficients_at(t)
    return _drift(alpha, beta, sigma, m.s0, x, DriftForm(form))


def _drift(alpha, beta, sigma, s0, x, form):
    base = alpha - 0.5 * sigma ** 2
    ratio = beta / s0
    if form is DriftForm.DERIVED:
        return base - ratio * np.exp(-np.asarray(x, dtype=float))
    if form is DriftForm.EXP_PLUS:
        return base - ratio * np.exp(np.asarray(x, dtype=float))
    return base - ratio + 0.0 * np.asarray(x, dtype=float)


@dataclass(frozen=True)
class OperatorCoeffs(object):
    """ Upwind coefficients on interior nodes `1..N-1`; ``a == b + c`` """
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __len__(self):
        return len(self.a)


def operator_coefficients(m, tau_next, grid, form=DriftForm.DERIVED):
    """ Upwind convection-diffusion coefficients at time level `tau_next`

    With ``s = sigma**2`` and ``d = s / (2 dx**2)``: forward difference
    ``b = f / dx + d, c = d`` where ``f >= 0``, backward difference
    ``b = d, c = -f / dx + d`` where ``f < 0``.
    """
    if not 0 <= tau_next <= m.maturity * (1 + 1e-12):
        raise DomainError('tau=%r outside [0, %r]' % (tau_next, m.maturity))
    t = max(m.maturity - tau_next, 0.0)
    alpha, beta, sigma = m.coefficients_at(t)
    return _coefficients(alpha, beta, sigma, m.s0, grid.x[1:-1], grid.dx, DriftForm(form))


def _coefficients(alpha, beta, sigma, s0, x, dx, form):
    f = _drift(alpha, beta, sigma, s0, x, form)
    diffusion = sigma ** 2 / (2.0 * dx * dx)
    forward = f >= 0
    b = np.where(forward, f / dx + diffusion, diffusion)
    c = np.where(forward, diffusion, -f / dx + diffusion)
    a = b + c
    for arr in (a, b, c):
        arr.flags.writeable = False
    return OperatorCoeffs(a, b, c)
