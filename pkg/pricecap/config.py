#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    pricecap.config
    ~~~~~~~~~~~~~~~

    Run configuration from INI files and built-in presets.

    :copyright: (c) 2012 by Roman Haritonov.
    :license: BSD, see LICENSE.txt for more details.
"""
import configparser
import logging
import math
import os
from dataclasses import dataclass, field

from pricecap.contrib.tables import Table
from pricecap.discretization import BoundaryMode, DriftForm, GridSpec
from pricecap.errors import ConfigurationError, Violation
from pricecap.model import (ModelParams, Payoff, PayoffKind, TimeFunction,
                            price_cap_coefficients, validate_params)
from pricecap.montecarlo import McConfig
from pricecap.utils import format_float

__all__ = ['RunConfig', 'PRESETS', 'load_config', 'loads', 'dump']

logger = logging.getLogger(__name__)

#: Model and scheme settings of the reference experiment
TABLE12 = """\
[model]
alpha = 0.015
beta = 0.4
sigma = 0.5
ell = 1.5
sigma_j = 0.5
r = 0.04
s0 = 50
maturity = 1

[payoff]
kind = call
strike = 45

[grid]
x_left = -0.096
x_right = 0.079
n_space = 175
n_time = 100
"""

PRESETS = {'table12': TABLE12}

PRICE_CAP_KEYS = ('inflation', 'efficiency', 'subsidy', 'quality_penalty',
                  'uncontrollable_cost')

KEYS = {
    'model': ('alpha', 'beta', 'sigma', 'ell', 'sigma_j', 'r', 's0', 'maturity') + PRICE_CAP_KEYS,
    'payoff': ('kind', 'strike', 'points', 'file', 'width'),
    'grid': ('x_left', 'x_right', 'n_space', 'n_time', 'b_left', 'b_right',
             'drift_form', 'boundary'),
    'mc': ('paths', 'substeps', 'seed', 'antithetic'),
}
REQUIRED = {
    'model': ('sigma', 'ell', 'sigma_j', 'r', 's0', 'maturity'),
    'payoff': ('kind',),
    'grid': ('x_left', 'x_right', 'n_space', 'n_time'),
    'mc': (),
}


@dataclass(frozen=True)
class RunConfig(object):
    """ Everything a command needs: model, payoff, grid and Monte Carlo settings """
    model: ModelParams
    payoff: Payoff
    grid: GridSpec
    mc: McConfig = field(default_factory=McConfig)
    sources: tuple = ()


class _Reader(object):
    """ Typed access to a parsed config, collecting violations """

    def __init__(self, parser, base_dir):
        self.parser = parser
        self.base_dir = base_dir
        self.violations = []

    def fail(self, section, key, rule):
        self.violations.append(Violation('%s.%s' % (section, key), rule))

    def has(self, section, key):
        return self.parser.has_option(section, key)

    def raw(self, section, key):
        return self.parser.get(section, key).strip()

    def number(self, section, key, default=None):
        if not self.has(section, key):
            return default
        try:
            return float(self.raw(section, key))
        except ValueError:
            self.fail(section, key, 'must be a number')
            return default

    def integer(self, section, key, default=None):
        value = self.number(section, key)
        if value is None:
            return default
        if not (math.isfinite(value) and value == int(value)):
            self.fail(section, key, 'must be an integer')
            return default
        return int(value)

    def boolean(self, section, key, default=False):
        if not self.has(section, key):
            return default
        try:
            return self.parser.getboolean(section, key)
        except ValueError:
            self.fail(section, key, 'must be true or false')
            return default

    def choice(self, section, key, enum, default):
        if not self.has(section, key):
            return default
        try:
            return enum(self.raw(section, key).lower())
        except ValueError:
            self.fail(section, key, 'must be one of %s' % ', '.join(e.value for e in enum))
            return default

    def pairs(self, section, key):
        """ ``0:0.1, 0.5:0.2`` or ``file:<path>`` as list of float pairs """
        text = self.raw(section, key)
        try:
            if text.startswith('file:'):
                return self._pairs_from_file(text[len('file:'):].strip())
            return [tuple(float(v) for v in item.split(':'))
                    for item in text.split(',') if item.strip()]
        except (ValueError, OSError) as e:
            self.fail(section, key, 'unreadable table (%s)' % e)
            return None

    def _pairs_from_file(self, path):
        path = os.path.join(self.base_dir, path)
        pairs = []
        for row in Table.data_from_file(path):
            try:
                pairs.append((float(row[0]), float(row[1])))
            except ValueError:
                continue  # header row
        return pairs

    def time_function(self, section, key):
        if not self.has(section, key):
            return None
        text = self.raw(section, key)
        if ':' not in text:
            return self.number(section, key)
        pairs = self.pairs(section, key)
        if pairs is None:
            return None
        try:
            return TimeFunction.table(pairs)
        except ValueError as e:
            self.fail(section, key, str(e))
            return None


def _check_keys(parser):
    violations = []
    for section in parser.sections():
        if section not in KEYS:
            violations.append(Violation(section, 'unknown section'))
            continue
        for key in parser.options(section):
            if key not in KEYS[section]:
                violations.append(Violation('%s.%s' % (section, key), 'unknown key'))
    for section, keys in REQUIRED.items():
        for key in keys:
            if not parser.has_option(section, key):
                violations.append(Violation('%s.%s' % (section, key), 'is required'))
    return violations


def _read_model(reader):
    r = reader
    s = 'model'
    explicit = [k for k in ('alpha', 'beta') if r.has(s, k)]
    components = [k for k in PRICE_CAP_KEYS if r.has(s, k)]
    if explicit and components:
        r.fail(s, components[0], 'give either alpha and beta or the price cap components')
    if components:
        for key in ('inflation', 'efficiency'):
            if not r.has(s, key):
                r.fail(s, key, 'is required')
        values = [r.time_function(s, k) for k in PRICE_CAP_KEYS]
        values = [0.0 if v is None else v for v in values]
        alpha, beta = price_cap_coefficients(*values)
    else:
        for key in ('alpha', 'beta'):
            if not r.has(s, key):
                r.fail(s, key, 'is required')
        alpha, beta = r.time_function(s, 'alpha'), r.time_function(s, 'beta')
    sigma = r.time_function(s, 'sigma')
    numbers = dict((k, r.number(s, k)) for k in ('ell', 'sigma_j', 'r', 's0', 'maturity'))
    if any(v is None for v in (alpha, beta, sigma)) or any(v is None for v in numbers.values()):
        return None
    model = ModelParams(alpha, beta, sigma, **numbers)
    r.violations.extend(validate_params(model).violations)
    return model


def _read_payoff(reader):
    r = reader
    s = 'payoff'
    kind = r.choice(s, 'kind', PayoffKind, None)
    if kind is None:
        return None
    if kind is PayoffKind.TABLE:
        if r.has(s, 'points') == r.has(s, 'file'):
            r.fail(s, 'points', 'table payoff needs exactly one of points, file')
            return None
        if r.has(s, 'points'):
            points = r.pairs(s, 'points')
        else:
            try:
                points = r._pairs_from_file(r.raw(s, 'file'))
            except (ValueError, OSError) as e:
                r.fail(s, 'file', 'unreadable table (%s)' % e)
                return None
        if points is None:
            return None
        try:
            return Payoff.table(points)
        except ValueError as e:
            r.fail(s, 'points', str(e))
            return None
    strike = r.number(s, 'strike')
    if strike is None:
        if not r.has(s, 'strike'):
            r.fail(s, 'strike', 'is required for a %s payoff' % kind.value)
        return None
    if not strike > 0:
        r.fail(s, 'strike', 'must be > 0')
        return None
    width = r.number(s, 'width', 1.0)
    if kind is PayoffKind.GAUSSIAN:
        if not width > 0:
            r.fail(s, 'width', 'must be > 0')
            return None
        return Payoff.gaussian(strike, width)
    return Payoff(kind, strike)


def _read_grid(reader):
    r = reader
    s = 'grid'
    grid = GridSpec(r.number(s, 'x_left', math.nan), r.number(s, 'x_right', math.nan),
                    r.integer(s, 'n_space', 0), r.integer(s, 'n_time', -1),
                    r.number(s, 'b_left'), r.number(s, 'b_right'),
                    r.choice(s, 'drift_form', DriftForm, DriftForm.DERIVED),
                    r.choice(s, 'boundary', BoundaryMode, BoundaryMode.DIRICHLET_ZERO))
    known = set(v.field for v in r.violations)
    r.violations.extend(Violation(*v) for v in grid.violations() if v[0] not in known)
    return grid


def _read_mc(reader):
    r = reader
    s = 'mc'
    defaults = McConfig()
    paths = r.integer(s, 'paths', defaults.n_paths)
    substeps = r.integer(s, 'substeps', defaults.n_substeps)
    seed = r.integer(s, 'seed', defaults.seed)
    antithetic = r.boolean(s, 'antithetic', defaults.antithetic)
    if paths < 1:
        r.fail(s, 'paths', 'must be >= 1')
    elif antithetic and paths % 2:
        r.fail(s, 'paths', 'must be even for antithetic sampling')
    if substeps < 1:
        r.fail(s, 'substeps', 'must be >= 1')
    if not 0 <= seed < 2 ** 64:
        r.fail(s, 'seed', 'must be an unsigned 64-bit integer')
    if r.violations and r.violations[-1].field.startswith('mc.'):
        return None
    return McConfig(paths, substeps, seed, antithetic)


def loads(*texts, **kwargs):
    """ Builds :class:`RunConfig` from INI texts, later texts override earlier ones

    :param base_dir: directory that ``file:`` paths are relative to
    :raises ConfigurationError: listing every problem found
    """
    base_dir = kwargs.pop('base_dir', os.curdir)
    sources = kwargs.pop('sources', ())
    parser = configparser.ConfigParser(interpolation=None)
    try:
        for text in texts:
            parser.read_string(text)
    except configparser.Error as e:
        raise ConfigurationError([Violation('config', 'malformed (%s)' % e)])
    for section in KEYS:
        if not parser.has_section(section):
            parser.add_section(section)
    violations = _check_keys(parser)
    if violations:
        raise ConfigurationError(violations)
    reader = _Reader(parser, base_dir)
    model = _read_model(reader)
    payoff = _read_payoff(reader)
    grid = _read_grid(reader)
    mc = _read_mc(reader)
    if reader.violations:
        raise ConfigurationError(reader.violations)
    return RunConfig(model, payoff, grid, mc, tuple(sources))


def load_config(path=None, preset=None):
    """ Reads config from `path`, on top of a named preset if given

    :param path: INI file
    :param preset: name from :data:`PRESETS`
    :raises ConfigurationError: on unknown preset, unreadable file or bad values
    """
    texts, sources = [], []
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigurationError([Violation('preset', 'unknown preset %r' % preset)])
        texts.append(PRESETS[preset])
        sources.append('preset:%s' % preset)
    base_dir = os.curdir
    if path is not None:
        try:
            with open(path, encoding='utf-8') as stream:
                texts.append(stream.read())
        except OSError as e:
            raise ConfigurationError([Violation('config', 'cannot read %s (%s)' % (path, e.strerror))])
        base_dir = os.path.dirname(os.path.abspath(path))
        sources.append(path)
    if not texts:
        raise ConfigurationError([Violation('config', 'give a config file or a preset')])
    return loads(*texts, base_dir=base_dir, sources=sources)


def _format_time_function(tf):
    if len(tf.values) == 1:
        return format_float(tf.values[0])
    return ', '.join('%s:%s' % (format_float(t), format_float(v))
                     for t, v in zip(tf.breakpoints, tf.values))


def dump(cfg):
    """ INI text that :func:`loads` turns back into `cfg` """
    m, p, g, mc = cfg.model, cfg.payoff, cfg.grid, cfg.mc
    lines = ['[model]']
    for key in ('alpha', 'beta', 'sigma'):
        lines.append('%s = %s' % (key, _format_time_function(getattr(m, key))))
    for key in ('ell', 'sigma_j', 'r', 's0', 'maturity'):
        lines.append('%s = %s' % (key, format_float(getattr(m, key))))
    lines += ['', '[payoff]', 'kind = %s' % p.kind.value]
    if p.kind is PayoffKind.TABLE:
        lines.append('points = %s' % ', '.join('%s:%s' % (format_float(s), format_float(h))
                                               for s, h in p.points))
    else:
        lines.append('strike = %s' % format_float(p.strike))
        if p.kind is PayoffKind.GAUSSIAN:
            lines.append('width = %s' % format_float(p.width))
    lines += ['', '[grid]']
    for key in ('x_left', 'x_right'):
        lines.append('%s = %s' % (key, format_float(getattr(g, key))))
    lines.append('n_space = %d' % g.n_space)
    lines.append('n_time = %d' % g.n_time)
    for key in ('b_left', 'b_right'):
        if getattr(g, key) is not None:
            lines.append('%s = %s' % (key, format_float(getattr(g, key))))
    lines.append('drift_form = %s' % g.drift_form.value)
    lines.append('boundary = %s' % g.boundary.value)
    lines += ['', '[mc]', 'paths = %d' % mc.n_paths, 'substeps = %d' % mc.n_substeps,
              'seed = %d' % mc.seed, 'antithetic = %s' % str(mc.antithetic).lower(), '']
    return '\n'.join(lines)
