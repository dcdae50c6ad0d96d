#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    pricecap.montecarlo
    ~~~~~~~~~~~~~~~~~~~

    Monte Carlo oracle built on the exact solution of the spot dynamics,
    and closed-form Black-Scholes and Merton prices for degenerate cases.

    :copyright: (c) 2012 by Roman Haritonov.
    :license: BSD, see LICENSE.txt for more details.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm, poisson

from pricecap.errors import DomainError
from pricecap.utils import timing

__all__ = ['McConfig', 'McEstimate', 'simulate_terminal', 'mc_price',
           'localization_constant', 'black_scholes_call', 'black_scholes_put',
           'merton_call']

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class McConfig(object):
    """ Simulation settings

    :param n_paths: number of simulated paths
    :param n_substeps: uniform sub-intervals of the time grid used for the
                       `beta` integral (coefficient breakpoints are added)
    :param seed: unsigned 64-bit seed
    :param antithetic: simulate paths in antithetic pairs, `n_paths` must be even
    :param block_size: paths per random stream, results depend on it
    """
    n_paths: int = 100000
    n_substeps: int = 256
    seed: int = 0
    antithetic: bool = False
    block_size: int = 4096

    def __post_init__(self):
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise ValueError('n_paths must be an integer >= 1')
        if int(self.n_substeps) != self.n_substeps or self.n_substeps < 1:
            raise ValueError('n_substeps must be an integer >= 1')
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError('seed must be an unsigned 64-bit integer')
        if self.block_size < 2 or self.block_size % 2:
            raise ValueError('block_size must be an even integer >= 2')
        if self.antithetic and self.n_paths % 2:
            raise ValueError('antithetic sampling needs an even n_paths')

    @property
    def n_blocks(self):
        return -(-self.n_paths // self.block_size)


@dataclass(frozen=True)
class McEstimate(object):
    """ Monte Carlo price with its standard error

    `negative_fraction` is the share of simulated terminal spots below zero.
    """
    price: float
    std_error: float
    n_paths: int
    seed: int = 0
    negative_fraction: float = 0.0

    def confidence_interval(self, width=3.0):
        return (self.price - width * self.std_error, self.price + width * self.std_error)

    def agrees_with(self, value, width=3.0):
        """ `value` lies within `width` standard errors of the estimate """
        return abs(value - self.price) <= width * self.std_error


def _block_rng(seed, index):
    """ Independent stream of block `index`, same for any worker count """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def _time_grid(m, t0, n_substeps):
    """ Uniform grid on `[t0, T]` merged with coefficient breakpoints """
    uniform = np.linspace(t0, m.maturity, n_substeps + 1)
    inner = m.breakpoints()
    inner = inner[(inner > t0) & (inner < m.maturity)]
    return np.union1d(uniform, inner)


class _Paths(object):
    """ Log-factor `X` relative to `t0`, right and left limits at every node """

    def __init__(self, terminal, x_right, x_left):
        self.terminal = terminal
        self.x_right = x_right
        self.x_left = x_left

    def sup_abs_increment(self):
        """ ``sup_s |X_T - X_s|`` over the nodes """
        x_end = self.x_right[:, -1:]
        return np.maximum(np.abs(x_end - self.x_right).max(axis=1),
                          np.abs(x_end - self.x_left).max(axis=1))


def _simulate(m, spot, grid, count, rng, antithetic=False):
    """ Simulates `count` terminal spots started from `spot` at ``grid[0]`` """
    t0, end = grid[0], grid[-1]
    tau = end - t0
    base = count // 2 if antithetic else count
    jumps = rng.poisson(m.ell * tau, size=base) if m.ell > 0 else np.zeros(base, dtype=int)
    k_max = int(jumps.max()) if base else 0
    used = np.arange(k_max) < jumps[:, np.newaxis]
    jump_times = np.where(used, t0 + tau * rng.random((base, k_max)), end)
    xi = rng.standard_normal((base, k_max))
    z = rng.standard_normal((base, len(grid) - 1 + k_max))
    if antithetic:
        used = np.concatenate((used, used))
        jump_times = np.concatenate((jump_times, jump_times))
        xi = np.concatenate((xi, -xi))
        z = np.concatenate((z, -z))
    sizes = np.where(used, m.jump_mean + m.sigma_j * xi, 0.0)

    # grid nodes first so padded jumps at T sort after the last node
    n = len(jump_times)
    times = np.concatenate((np.broadcast_to(grid, (n, len(grid))), jump_times), axis=1)
    sizes = np.concatenate((np.zeros((n, len(grid))), sizes), axis=1)
    order = np.argsort(times, axis=1, kind='stable')
    times = np.take_along_axis(times, order, axis=1)
    sizes = np.take_along_axis(sizes, order, axis=1)

    left, right = times[:, :-1], times[:, 1:]
    variance = m.sigma.squared().integral(left, right)
    drift = m.alpha.integral(left, right) - 0.5 * variance
    continuous = np.zeros_like(times)
    continuous[:, 1:] = np.cumsum(drift + np.sqrt(np.maximum(variance, 0.0)) * z, axis=1)
    x_right = continuous + np.cumsum(sizes, axis=1)
    x_left = x_right - sizes
    x_end = x_right[:, -1]

    # trapezoid on every interval between consecutive nodes, beta is flat there
    beta = m.beta.at(0.5 * (left + right))
    integrand = np.exp(x_end[:, np.newaxis] - x_right[:, :-1]) + np.exp(x_end[:, np.newaxis] - x_left[:, 1:])
    beta_integral = (0.5 * (right - left) * beta * integrand).sum(axis=1)
    terminal = spot * np.exp(x_end) - beta_integral
    return _Paths(terminal, x_right, x_left)


def simulate_terminal(m, x, tau, rng=None, n_substeps=256):
    """ One sample of the spot at maturity

    :param m: :class:`~pricecap.model.ModelParams`
    :param x: log-moneyness ``ln(S / S0)`` at time ``T - tau``
    :param tau: remaining time, in `[0, T]`
    :param rng: :class:`numpy.random.Generator` or an integer seed
    :param n_substeps: sub-intervals of the `beta` integral
    """
    if not 0 <= tau <= m.maturity:
        raise DomainError('tau=%r outside [0, %r]' % (tau, m.maturity))
    if not isinstance(rng, np.random.Generator):
        rng = np.random.Generator(np.random.Philox(rng))
    spot = m.s0 * math.exp(x)
    if tau == 0:
        return spot
    grid = _time_grid(m, m.maturity - tau, n_substeps)
    return float(_simulate(m, spot, grid, 1, rng).terminal[0])


def _reduce(samples):
    """ Mean and standard error, independent of summation order """
    n = len(samples)
    mean = math.fsum(samples) / n
    if n == 1:
        return mean, math.inf
    if np.all(samples == samples[0]):
        return float(samples[0]), 0.0
    variance = math.fsum((samples - mean) ** 2) / (n - 1)
    return mean, math.sqrt(variance / n)


def _run_blocks(cfg, job, threads):
    if threads > 1 and cfg.n_blocks > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(job, range(cfg.n_blocks)))
    return [job(index) for index in range(cfg.n_blocks)]


def _block_count(cfg, index):
    return min(cfg.block_size, cfg.n_paths - index * cfg.block_size)


def mc_price(m, p, s, t, cfg, threads=1):
    """ Discounted expected payoff ``exp(-r (T - t)) E[H(S_T) | S_t = s]``

    Paths are split into blocks of ``cfg.block_size`` with their own random
    streams, so the estimate is bit-identical for any `threads`.

    :param m: :class:`~pricecap.model.ModelParams`
    :param p: :class:`~pricecap.model.Payoff`
    :param s: spot at time `t`, > 0
    :param t: calendar time in `[0, T)`
    :param cfg: :class:`McConfig`
    :param threads: worker threads
    :returns: :class:`McEstimate`
    """
    if not s > 0:
        raise DomainError('spot must be > 0, got %r' % (s,))
    if not 0 <= t < m.maturity:
        raise DomainError('t=%r outside [0, %r)' % (t, m.maturity))
    grid = _time_grid(m, t, cfg.n_substeps)

    def job(index):
        count = _block_count(cfg, index)
        paths = _simulate(m, s, grid, count, _block_rng(cfg.seed, index), cfg.antithetic)
        values = p.values(paths.terminal)
        if cfg.antithetic:
            half = count // 2
            values = 0.5 * (values[:half] + values[half:])
        return values, int(np.count_nonzero(paths.terminal < 0))

    with timing('mc_price %d paths' % cfg.n_paths):
        blocks = _run_blocks(cfg, job, threads)
    samples = np.concatenate([values for values, _ in blocks])
    negatives = sum(count for _, count in blocks)
    mean, std_error = _reduce(samples)
    discount = math.exp(-m.r * (m.maturity - t))
    logger.info('mc price %r +- %r (%d paths)', discount * mean, discount * std_error, cfg.n_paths)
    return McEstimate(discount * mean, discount * std_error, cfg.n_paths, cfg.seed,
                      negatives / cfg.n_paths)


def localization_constant(m, tau, cfg, threads=1):
    """ Estimates ``E[exp(sup |X_T - X_s|)]`` over ``s`` in ``[T - tau, T]``

    This is the constant in front of the exponential localization bound.
    The result is returned as :class:`McEstimate` with the expectation
    in `price`.
    """
    if not 0 < tau <= m.maturity:
        raise DomainError('tau=%r outside (0, %r]' % (tau, m.maturity))
    grid = _time_grid(m, m.maturity - tau, cfg.n_substeps)

    def job(index):
        paths = _simulate(m, m.s0, grid, _block_count(cfg, index),
                          _block_rng(cfg.seed, index), cfg.antithetic)
        return np.exp(paths.sup_abs_increment())

    samples = np.concatenate(_run_blocks(cfg, job, threads))
    mean, std_error = _reduce(samples)
    return McEstimate(mean, std_error, cfg.n_paths, cfg.seed)


def black_scholes_call(s, k, r, sigma, tau):
    """ Black-Scholes call price, with the expiry and zero-volatility limits """
    if tau <= 0:
        return max(s - k, 0.0)
    discounted = k * math.exp(-r * tau)
    if sigma <= 0:
        return max(s - discounted, 0.0)
    vol = sigma * math.sqrt(tau)
    d1 = (math.log(s / k) + (r + 0.5 * sigma * sigma) * tau) / vol
    d2 = d1 - vol
    return float(s * norm.cdf(d1) - discounted * norm.cdf(d2))


def black_scholes_put(s, k, r, sigma, tau):
    if tau <= 0:
        return max(k - s, 0.0)
    discounted = k * math.exp(-r * tau)
    if sigma <= 0:
        return max(discounted - s, 0.0)
    vol = sigma * math.sqrt(tau)
    d1 = (math.log(s / k) + (r + 0.5 * sigma * sigma) * tau) / vol
    d2 = d1 - vol
    return float(discounted * norm.cdf(-d2) - s * norm.cdf(-d1))


def merton_call(s, k, r, sigma, sigma_j, ell, tau, n_terms=50):
    """ Merton jump-diffusion call as a Poisson mixture of Black-Scholes prices

    With ``E[J] = 1`` the rate needs no jump compensation, so term `n` is
    Black-Scholes with variance ``sigma**2 + n sigma_j**2 / tau``.

    :param n_terms: last term of the series, >= 1
    """
    if n_terms < 1:
        raise ValueError('n_terms must be >= 1')
    if tau <= 0 or ell == 0:
        return black_scholes_call(s, k, r, sigma, tau)
    n = np.arange(n_terms + 1)
    weights = poisson.pmf(n, ell * tau)
    vols = np.sqrt(sigma ** 2 + n * sigma_j ** 2 / tau)
    return math.fsum(w * black_scholes_call(s, k, r, v, tau) for w, v in zip(weights, vols))
