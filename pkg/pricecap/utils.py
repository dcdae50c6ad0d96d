#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    pricecap.utils
    ~~~~~~~~~~~~~~

    Utility functions for timing, number formatting and argument parsing.

    :copyright: (c) 2012 by Roman Haritonov.
    :license: BSD, see LICENSE.txt for more details.
"""
import logging
import time
from contextlib import contextmanager

__all__ = ['timing', 'format_float', 'parse_float_list']

logger = logging.getLogger(__name__)


class _Elapsed(object):
    def __init__(self, begin):
        self.begin = begin
        self.elapsed = 0.0


@contextmanager
def timing(message=u'Elapsed'):
    """ Context manager for timing execution

    :param message: message to log

    Usage::

        with timing('solve') as t:
            do_some_actions()
        print(t.elapsed)

    Will log at debug level::

        solve: 1.000 s  # where 1.000 is actual execution time

    """
    clock = _Elapsed(time.perf_counter())
    try:
        yield clock
    finally:
        clock.elapsed = time.perf_counter() - clock.begin
        logger.debug(u'%s: %.3f s', message, clock.elapsed)


def format_float(value):
    """ Returns shortest string that round-trips to the same double

    ::

        >>> format_float(0.1)
        '0.1'
        >>> format_float(numpy.float64(2))
        '2.0'

    """
    return repr(float(value))


def parse_float_list(text):
    """ Parses comma separated numbers, ``'0.5, 1,1.5'`` -> ``[0.5, 1.0, 1.5]``

    :raises ValueError: on empty input or a non-numeric item
    """
    items = [item.strip() for item in text.split(',') if item.strip()]
    if not items:
        raise ValueError('empty list')
    return [float(item) for item in items]
