#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    pricecap.errors
    ~~~~~~~~~~~~~~~

    Exceptions raised by the pricing engine.

    :copyright: (c) 2012 by Roman Haritonov.
    :license: BSD, see LICENSE.txt for more details.
"""
from collections import namedtuple

__all__ = ['Violation', 'PricingError', 'DomainError', 'ExtrapolationError',
           'ConfigurationError', 'NumericalFailure']


class Violation(namedtuple('Violation', 'field rule')):
    """ One broken rule: `field` is the config-style name (``model.sigma_j``,
    ``payoff.strike``), `rule` a short human readable statement
    """
    __slots__ = ()

    def as_dict(self):
        return {'field': self.field, 'rule': self.rule}

    def __str__(self):
        return '%s: %s' % (self.field, self.rule)


class PricingError(Exception):
    pass


class DomainError(PricingError, ValueError):
    """ Argument outside the domain of an operation """


class ExtrapolationError(DomainError):
    """ Price query outside the computed grid """


class ConfigurationError(PricingError):
    """ Model, payoff or grid settings can't be used

    :param violations: list of :class:`Violation`
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super(ConfigurationError, self).__init__(
            '; '.join(str(v) for v in self.violations))


class NumericalFailure(PricingError):
    """ Non-finite value appeared while time stepping

    :param step: index of the time level where it was detected
    """

    def __init__(self, step, message=None):
        self.step = step
        super(NumericalFailure, self).__init__(
            message or 'non-finite value at time step %d' % step)
