#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    pricecap.model
    ~~~~~~~~~~~~~~

    Spot price model under price-cap regulation: time-dependent coefficients,
    log-normal jump law, payoffs and parameter validation.

    :copyright: (c) 2012 by Roman Haritonov.
    :license: BSD, see LICENSE.txt for more details.
"""
import math
import numbers
import operator
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy.stats import norm

from pricecap.errors import DomainError, Violation

__all__ = ['SIGMA_MIN', 'TimeFunction', 'ModelParams', 'PayoffKind', 'Payoff',
           'ValidationReport', 'eval_time_function', 'payoff_eval',
           'log_jump_density', 'validate_params', 'price_cap_coefficients']

#: Smallest volatility accepted by :func:`validate_params`
SIGMA_MIN = 1e-8


class TimeFunction(object):
    """ Piecewise-constant function of calendar time (years), right-continuous
    at its breakpoints

    Usage::

        >>> alpha = TimeFunction([0.1, 0.2], [0.0, 0.5])
        >>> alpha(0.25), alpha(0.5)
        (0.1, 0.2)
        >>> TimeFunction.constant(0.015)(0.5)
        0.015

    Supported operations: `+`, `-` with another :class:`TimeFunction` or a
    number (result lives on the union of breakpoints), `*` by a number, unary `-`::

        >>> beta = subsidy + penalties - uncontrollable

    Instances are immutable.
    """

    def __init__(self, values, breakpoints=(0.0,), horizon=math.inf):
        """
        :param values: value on each interval `[t_k, t_k+1)`
        :param breakpoints: `t_k`, strictly increasing, starting at 0
        :param horizon: evaluation is allowed on `[0, horizon]`
        """
        values = np.array(values, dtype=float, ndmin=1)
        breakpoints = np.array(breakpoints, dtype=float, ndmin=1)
        if values.ndim != 1 or not len(values):
            raise ValueError('time function needs at least one value')
        if values.shape != breakpoints.shape:
            raise ValueError('got %d values for %d breakpoints'
                             % (len(values), len(breakpoints)))
        if breakpoints[0] != 0.0:
            raise ValueError('first breakpoint must be 0')
        if np.any(np.diff(breakpoints) <= 0):
            raise ValueError('breakpoints must be strictly increasing')
        values.flags.writeable = False
        breakpoints.flags.writeable = False
        self._values = values
        self._breakpoints = breakpoints
        self._horizon = float(horizon)
        # running integral at each breakpoint
        cumulative = np.concatenate(([0.0], np.cumsum(values[:-1] * np.diff(breakpoints))))
        cumulative.flags.writeable = False
        self._cumulative = cumulative

    @classmethod
    def constant(cls, value):
        return cls([value])

    @classmethod
    def table(cls, pairs):
        """ Builds function from `(t_k, v_k)` pairs """
        pairs = list(pairs)
        if not pairs:
            raise ValueError('time function needs at least one value')
        return cls([v for _, v in pairs], [t for t, _ in pairs])

    @classmethod
    def coerce(cls, value):
        """ Returns `value` if it's already a :class:`TimeFunction`,
        constant function otherwise
        """
        if isinstance(value, TimeFunction):
            return value
        return cls.constant(value)

    @property
    def values(self):
        return self._values

    @property
    def breakpoints(self):
        return self._breakpoints

    @property
    def horizon(self):
        return self._horizon

    @property
    def is_constant(self):
        return bool(np.all(self._values == self._values[0]))

    def with_horizon(self, horizon):
        """ Same function restricted to `[0, horizon]` """
        return TimeFunction(self._values, self._breakpoints, horizon)

    def max_abs(self):
        return float(np.max(np.abs(self._values)))

    def _check_domain(self, t):
        t = np.asarray(t, dtype=float)
        slack = 1e-12 * max(1.0, self._horizon if math.isfinite(self._horizon) else 1.0)
        if np.any(np.isnan(t)) or np.any(t < -slack) or np.any(t > self._horizon + slack):
            raise DomainError('t=%s outside [0, %r]' % (t, self._horizon))
        return np.clip(t, 0.0, self._horizon)

    def at(self, t):
        """ Vectorized evaluation without domain check """
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self._breakpoints, t, side='right') - 1
        idx = np.clip(idx, 0, len(self._values) - 1)
        return self._values[idx]

    def __call__(self, t):
        t = self._check_domain(t)
        result = self.at(t)
        return float(result) if result.ndim == 0 else result

    def integral(self, t0, t1):
        """ Exact integral over `[t0, t1]`, vectorized over both bounds """
        return self._antiderivative(t1) - self._antiderivative(t0)

    def _antiderivative(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self._breakpoints, t, side='right') - 1,
                      0, len(self._values) - 1)
        return self._cumulative[idx] + self._values[idx] * (t - self._breakpoints[idx])

    def breakpoints_within(self, t0, t1):
        """ Breakpoints strictly inside `(t0, t1)` """
        bp = self._breakpoints
        return bp[(bp > t0) & (bp < t1)]

    def squared(self):
        return TimeFunction(self._values ** 2, self._breakpoints, self._horizon)

    def _combine(self, other, op):
        if isinstance(other, numbers.Real):
            return TimeFunction(op(self._values, float(other)), self._breakpoints, self._horizon)
        if not isinstance(other, TimeFunction):
            return NotImplemented
        breakpoints = np.union1d(self._breakpoints, other._breakpoints)
        return TimeFunction(op(self.at(breakpoints), other.at(breakpoints)), breakpoints,
                            min(self._horizon, other._horizon))

    def __add__(self, other):
        return self._combine(other, operator.add)

    def __sub__(self, other):
        return self._combine(other, operator.sub)

    def __rsub__(self, other):
        return (-self)._combine(other, operator.add)

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            return self._combine(other, operator.mul)
        return NotImplemented

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return TimeFunction(-self._values, self._breakpoints, self._horizon)

    def __eq__(self, other):
        if not isinstance(other, TimeFunction):
            return False
        return (np.array_equal(self._values, other._values)
                and np.array_equal(self._breakpoints, other._breakpoints))

    def __hash__(self):
        return hash((self._values.tobytes(), self._breakpoints.tobytes()))

    def __repr__(self):
        if len(self._values) == 1:
            return 'TimeFunction.constant(%r)' % float(self._values[0])
        pairs = ', '.join('(%r, %r)' % (float(t), float(v))
                          for t, v in zip(self._breakpoints, self._values))
        return 'TimeFunction.table([%s])' % pairs


def eval_time_function(tf, t):
    """ Value of `tf` at time `t`

    :raises DomainError: if `t` is outside `[0, T]`
    """
    return tf(t)


def price_cap_coefficients(inflation, efficiency, subsidy=0.0, quality_penalty=0.0,
                           uncontrollable_cost=0.0):
    """ Aggregates price-cap components into the model's drift coefficients

    ``alpha = inflation - efficiency`` and
    ``beta = subsidy + quality_penalty - uncontrollable_cost``

    Every argument is a number or :class:`TimeFunction`.

    :returns: tuple `(alpha, beta)` of :class:`TimeFunction`
    """
    c = TimeFunction.coerce
    alpha = c(inflation) - c(efficiency)
    beta = c(subsidy) + c(quality_penalty) - c(uncontrollable_cost)
    return alpha, beta


@dataclass(frozen=True)
class ModelParams(object):
    """ Coefficients of the spot price dynamics

    ``dS = (alpha(t) S - beta(t)) dt + sigma(t) S dW + (J - 1) S dq``

    with ``ln J ~ N(-sigma_j**2 / 2, sigma_j**2)`` so that ``E[J] = 1``; the
    mean of `ln J` is derived and can't be set.

    `alpha`, `beta` and `sigma` accept numbers or :class:`TimeFunction`;
    they are bound to `[0, maturity]`. Nothing is validated here,
    see :func:`validate_params`.
    """
    alpha: TimeFunction
    beta: TimeFunction
    sigma: TimeFunction
    ell: float
    sigma_j: float
    r: float
    s0: float
    maturity: float

    def __post_init__(self):
        for name in ('ell', 'sigma_j', 'r', 's0', 'maturity'):
            object.__setattr__(self, name, float(getattr(self, name)))
        for name in ('alpha', 'beta', 'sigma'):
            tf = TimeFunction.coerce(getattr(self, name))
            object.__setattr__(self, name, tf.with_horizon(self.maturity))

    @property
    def jump_mean(self):
        """ Mean of `ln J` """
        return -0.5 * self.sigma_j ** 2

    def coefficients_at(self, t):
        """ `(alpha, beta, sigma)` at calendar time `t` """
        return self.alpha(t), self.beta(t), self.sigma(t)

    def breakpoints(self):
        """ Union of the coefficient breakpoints """
        return np.union1d(np.union1d(self.alpha.breakpoints, self.beta.breakpoints),
                          self.sigma.breakpoints)

    def replace(self, **changes):
        return replace(self, **changes)


class PayoffKind(Enum):
    CALL = 'call'
    PUT = 'put'
    TABLE = 'table'
    #: smooth bump ``exp(-(ln(S/K)/width)**2)``
    GAUSSIAN = 'gaussian'


@dataclass(frozen=True)
class Payoff(object):
    """ Terminal payoff `H(S)`

    Build it with :meth:`call`, :meth:`put`, :meth:`table` or :meth:`gaussian`::

        >>> Payoff.call(45)(50)
        5.0

    Table payoffs interpolate linearly between `(S, H)` points and stay flat
    outside them, so they are bounded and Lipschitz.
    """
    kind: PayoffKind
    strike: float = None
    points: tuple = field(default=())
    width: float = 1.0

    def __post_init__(self):
        kind = PayoffKind(self.kind)
        object.__setattr__(self, 'kind', kind)
        if kind is PayoffKind.TABLE:
            points = tuple((float(s), float(h)) for s, h in self.points)
            object.__setattr__(self, 'points', points)
            if len(points) < 2:
                raise ValueError('table payoff needs at least two points')
            s, h = np.array(points).T
            if not (np.all(np.isfinite(s)) and np.all(np.isfinite(h))):
                raise ValueError('table payoff points must be finite')
            if s[0] < 0:
                raise ValueError('table payoff spots must be >= 0')
            if np.any(np.diff(s) <= 0):
                raise ValueError('table payoff spots must be strictly increasing')
            if np.any(h < 0):
                raise ValueError('table payoff values must be >= 0')
            return
        if self.strike is None:
            raise ValueError('%s payoff needs a strike' % kind.value)
        object.__setattr__(self, 'strike', float(self.strike))
        if not self.strike > 0:
            raise ValueError('strike must be > 0')
        if kind is PayoffKind.GAUSSIAN and not self.width > 0:
            raise ValueError('width must be > 0')

    @classmethod
    def call(cls, strike):
        return cls(PayoffKind.CALL, strike)

    @classmethod
    def put(cls, strike):
        return cls(PayoffKind.PUT, strike)

    @classmethod
    def table(cls, points):
        return cls(PayoffKind.TABLE, points=tuple(points))

    @classmethod
    def gaussian(cls, strike, width=1.0):
        return cls(PayoffKind.GAUSSIAN, strike, width=float(width))

    def with_strike(self, strike):
        """ Same payoff with another strike (not for tables) """
        if self.kind is PayoffKind.TABLE:
            raise ValueError('table payoff has no strike')
        return replace(self, strike=strike)

    @property
    def is_bounded(self):
        return self.kind is not PayoffKind.CALL

    def sup_norm(self):
        """ `sup |H|` over `S >= 0` """
        if self.kind is PayoffKind.CALL:
            return math.inf
        if self.kind is PayoffKind.PUT:
            return self.strike
        if self.kind is PayoffKind.TABLE:
            return max(h for _, h in self.points)
        return 1.0

    def lipschitz_constant(self):
        if self.kind is PayoffKind.TABLE:
            s, h = np.array(self.points).T
            return float(np.max(np.abs(np.diff(h) / np.diff(s))))
        if self.kind is PayoffKind.GAUSSIAN:
            # max of |d/dS exp(-(ln(S/K)/w)^2)|, attained where ln(S/K) solves a quadratic
            w = self.width
            y = (-w ** 2 - math.sqrt(w ** 4 + 8 * w ** 2)) / 4.0
            return 2 * abs(y) / w ** 2 * math.exp(-(y / w) ** 2 - y) / self.strike
        return 1.0

    def values(self, s):
        """ Vectorized `H(S)` with no domain check

        Negative spots (possible in Monte Carlo samples) go through the raw
        call/put formulas; tables clamp to their end values; the Gaussian
        payoff is 0 there.
        """
        s = np.asarray(s, dtype=float)
        kind = self.kind
        if kind is PayoffKind.CALL:
            return np.maximum(s - self.strike, 0.0)
        if kind is PayoffKind.PUT:
            return np.maximum(self.strike - s, 0.0)
        if kind is PayoffKind.TABLE:
            spots, heights = np.array(self.points).T
            return np.interp(s, spots, heights)
        positive = s > 0
        y = np.log(np.where(positive, s, self.strike) / self.strike) / self.width
        return np.where(positive, np.exp(-y * y), 0.0)

    def __call__(self, s):
        return payoff_eval(self, s)


def payoff_eval(p, s):
    """ `H(S)` for one spot

    :raises DomainError: for negative `s`
    """
    if not s >= 0:
        raise DomainError('spot must be >= 0, got %r' % (s,))
    return float(p.values(s))


def log_jump_density(sigma_j, y):
    """ Density of `ln J`, normal with mean `-sigma_j**2/2` and std `sigma_j` """
    if not sigma_j > 0:
        raise DomainError('sigma_j must be > 0')
    return norm.pdf(y, loc=-0.5 * sigma_j ** 2, scale=sigma_j)


class ValidationReport(object):
    """ Result of :func:`validate_params`; true when nothing is violated """

    def __init__(self, violations=()):
        self.violations = list(violations)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def fields(self):
        return [v.field for v in self.violations]

    def __repr__(self):
        if self.ok:
            return 'ValidationReport(pass)'
        return 'ValidationReport(%s)' % '; '.join(str(v) for v in self.violations)


def validate_params(m, sigma_min=SIGMA_MIN):
    """ Checks every model invariant, never raises

    :param m: :class:`ModelParams`
    :param sigma_min: volatility floor
    :returns: :class:`ValidationReport`
    """
    violations = []

    def check(ok, name, rule):
        if not ok:
            violations.append(Violation('model.' + name, rule))

    check(m.maturity > 0, 'maturity', 'must be > 0')
    check(m.s0 > 0, 's0', 'must be > 0')
    check(m.ell >= 0, 'ell', 'must be >= 0')
    check(m.sigma_j > 0, 'sigma_j', 'must be > 0')
    check(math.isfinite(m.r), 'r', 'must be finite')
    for name in ('ell', 'sigma_j', 's0', 'maturity'):
        check(math.isfinite(getattr(m, name)), name, 'must be finite')
    for name in ('alpha', 'beta', 'sigma'):
        tf = getattr(m, name)
        check(bool(np.all(np.isfinite(tf.values))), name, 'must be bounded')
        if m.maturity > 0:
            check(tf.breakpoints[-1] <= m.maturity, name, 'last breakpoint must be <= maturity')
    check(float(np.min(m.sigma.values)) >= sigma_min, 'sigma', 'must be >= %r everywhere' % sigma_min)
    return ValidationReport(violations)
