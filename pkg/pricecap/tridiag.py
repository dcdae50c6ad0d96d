#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    pricecap.tridiag
    ~~~~~~~~~~~~~~~~

    Thomas algorithm for strictly diagonally dominant tridiagonal systems.

    :copyright: (c) 2012 by Roman Haritonov.
    :license: BSD, see LICENSE.txt for more details.
"""
from dataclasses import dataclass

import numpy as np

from pricecap.errors import PricingError

__all__ = ['TridiagonalSystem', 'DiagonalDominanceError', 'solve']


class DiagonalDominanceError(PricingError):
    """ Matrix is not strictly diagonally dominant

    :param row: first offending row
    """

    def __init__(self, row, message=None):
        self.row = row
        super(DiagonalDominanceError, self).__init__(
            message or 'row %d is not strictly diagonally dominant' % row)


@dataclass(frozen=True)
class TridiagonalSystem(object):
    """ ``lower[i-1] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]``

    ::

        >>> solve(TridiagonalSystem([1.0], [2.0, 2.0], [1.0], [3.0, 3.0]))
        array([1., 1.])

    """
    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        for name in ('lower', 'diag', 'upper', 'rhs'):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=float)))
        n = len(self.diag)
        if not n:
            raise ValueError('empty system')
        if len(self.rhs) != n:
            raise ValueError('rhs has %d entries, expected %d' % (len(self.rhs), n))
        if len(self.lower) != n - 1 or len(self.upper) != n - 1:
            raise ValueError('off diagonals must have %d entries' % (n - 1))

    def __len__(self):
        return len(self.diag)

    def check_dominance(self):
        """ :raises DiagonalDominanceError: naming the first bad row """
        off = np.zeros(len(self))
        off[1:] += np.abs(self.lower)
        off[:-1] += np.abs(self.upper)
        bad = np.flatnonzero(~(np.abs(self.diag) > off))
        if len(bad):
            raise DiagonalDominanceError(int(bad[0]))

    def to_dense(self):
        n = len(self)
        a = np.diag(self.diag)
        if n > 1:
            a += np.diag(self.lower, -1) + np.diag(self.upper, 1)
        return a

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[1:] += self.lower * x[:-1]
        y[:-1] += self.upper * x[1:]
        return y

    def residual(self, x):
        """ ``|Ax - rhs|_inf / (|A|_inf |x|_inf + |rhs|_inf)`` """
        norm_a = np.abs(self.diag).copy()
        norm_a[1:] += np.abs(self.lower)
        norm_a[:-1] += np.abs(self.upper)
        scale = norm_a.max() * np.abs(x).max() + np.abs(self.rhs).max()
        if scale == 0:
            return 0.0
        return float(np.abs(self.matvec(x) - self.rhs).max() / scale)


def solve(system):
    """ Solves `system` with one elimination and one back substitution pass

    :param system: :class:`TridiagonalSystem`
    :returns: solution as :class:`numpy.ndarray`
    :raises DiagonalDominanceError: if dominance fails, before any elimination
    """
    system.check_dominance()
    # scalar recurrences on python floats
    lower = system.lower.tolist()
    upper = system.upper.tolist()
    diag = system.diag.tolist()
    rhs = system.rhs.tolist()
    n = len(diag)
    for k in range(1, n):
        w = lower[k - 1] / diag[k - 1]
        diag[k] -= w * upper[k - 1]
        rhs[k] -= w * rhs[k - 1]
    x = rhs
    x[-1] = rhs[-1] / diag[-1]
    for k in range(n - 2, -1, -1):
        x[k] = (rhs[k] - upper[k] * x[k + 1]) / diag[k]
    return np.array(x)
