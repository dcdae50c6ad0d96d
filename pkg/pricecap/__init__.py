#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    pricecap
    ~~~~~~~~

    Option pricing on electricity spot prices under price-cap regulation.

    :copyright: (c) 2012 by Roman Haritonov.
    :license: BSD, see LICENSE.txt for more details.
"""
__docformat__ = 'restructuredtext en'
__version__ = '0.3.0'

from pricecap.errors import *
from pricecap.model import *
from pricecap.discretization import *
from pricecap.tridiag import *
from pricecap.solver import *
from pricecap.montecarlo import *
from pricecap.analysis import *
