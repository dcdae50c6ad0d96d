#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    pricecap.cli
    ~~~~~~~~~~~~

    Command line interface: pricing surfaces, slices, Monte Carlo prices,
    oracle checks and error studies written as CSV files.

    :copyright: (c) 2012 by Roman Haritonov.
    :license: BSD, see LICENSE.txt for more details.
"""
import argparse
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

from pricecap import __version__
from pricecap.analysis import localization_study, refinement_study, truncation_study
from pricecap.config import load_config
from pricecap.contrib.tables import Table
from pricecap.discretization import BoundaryMode, GridSpec
from pricecap.errors import (ConfigurationError, DomainError, NumericalFailure,
                             PricingError, Violation)
from pricecap.model import PayoffKind, TimeFunction
from pricecap.montecarlo import McConfig, black_scholes_call, mc_price, merton_call
from pricecap.solver import check_admissible, price_surface
from pricecap.utils import format_float, parse_float_list

__all__ = ['main', 'build_parser']

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ORACLE_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

SLICE_MODES = ('vs_spot_at_times', 'vs_time_at_spots', 'vs_strike')

#: wide grid for comparisons against closed forms and Monte Carlo
ORACLE_GRID = GridSpec(-2.5, 2.5, 1000, 500, boundary=BoundaryMode.DIRICHLET_PAYOFF)
ORACLE_CASES = (('black_scholes', 0.01), ('merton', 0.015), ('full_model_mc', None))
MERTON_TERMS = 50


def _float_list(text):
    try:
        return parse_float_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated numbers, got %r' % text)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='INI file with [model], [payoff], [grid], [mc]')
    common.add_argument('--preset', choices=['table12'], help='built-in settings, --config overrides them')
    common.add_argument('--output', default='.', help='directory for CSV files')
    common.add_argument('--threads', type=int, default=1, help='worker threads')
    common.add_argument('--seed', type=int, help='Monte Carlo seed, overrides [mc] seed')
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='log progress')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='errors only')

    parser = argparse.ArgumentParser(prog='pricecap', description=__doc__.strip().split('\n')[0])
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    cmd = commands.add_parser('price', parents=[common], help='full price surface')
    cmd.set_defaults(handler=cmd_price)

    cmd = commands.add_parser('slices', parents=[common], help='price curves for plotting')
    cmd.add_argument('--mode', choices=SLICE_MODES, default='vs_spot_at_times')
    cmd.add_argument('--times', type=_float_list, help='calendar times, default 0')
    cmd.add_argument('--spots', type=_float_list, help='spot prices, default S0')
    cmd.add_argument('--strikes', type=_float_list, help='strikes for vs_strike, default K')
    cmd.set_defaults(handler=cmd_slices)

    cmd = commands.add_parser('mc-price', parents=[common], help='Monte Carlo price')
    cmd.add_argument('--spot', type=float, help='spot at --time, default S0')
    cmd.add_argument('--time', type=float, default=0.0, help='calendar time')
    cmd.add_argument('--paths', type=int)
    cmd.add_argument('--substeps', type=int)
    cmd.add_argument('--antithetic', action='store_true', default=None)
    cmd.set_defaults(handler=cmd_mc_price)

    cmd = commands.add_parser('oracle-check', parents=[common],
                              help='compare against Black-Scholes, Merton and Monte Carlo')
    cmd.set_defaults(handler=cmd_oracle_check)

    cmd = commands.add_parser('study-refine', parents=[common], help='grid refinement order')
    cmd.add_argument('--levels', type=int, default=4)
    cmd.set_defaults(handler=cmd_study_refine)

    cmd = commands.add_parser('study-localize', parents=[common], help='localization decay')
    cmd.add_argument('--widths', type=_float_list, default=[0.5, 1.0, 1.5, 2.0])
    cmd.add_argument('--bound-constant', action='store_true',
                     help='estimate the bound constant with the [mc] settings')
    cmd.set_defaults(handler=cmd_study_localize)

    cmd = commands.add_parser('study-truncate', parents=[common], help='jump truncation decay')
    cmd.add_argument('--b-values', type=_float_list, default=[1.0, 2.0, 3.0, 4.0],
                     help='truncation in units of sigma_j')
    cmd.set_defaults(handler=cmd_study_truncate)
    return parser


def _load(args):
    cfg = load_config(args.config, args.preset)
    if args.preset:
        logger.warning('preset %s uses the small replication domain; '
                       'accuracy checks need a wider grid', args.preset)
    if args.seed is not None:
        cfg = replace(cfg, mc=replace(cfg.mc, seed=args.seed))
    return cfg


def _output_path(args, name):
    if not os.path.isdir(args.output):
        os.makedirs(args.output)
    return os.path.join(args.output, name)


def _save(table, args, name):
    path = _output_path(args, name)
    table.save(path, 'csv')
    logger.info('written %s', path)
    return path


def cmd_price(args):
    cfg = _load(args)
    check_admissible(cfg.model, cfg.grid)
    solution = price_surface(cfg.model, cfg.payoff, cfg.grid)
    price = solution.price_at(0.0, cfg.model.s0)
    _save(solution.to_table(), args, 'surface.csv')
    print('price(t=0, S=S0)=%s' % format_float(price))
    return EXIT_OK


def _check_slices(cfg, times, spots):
    m, gs = cfg.model, cfg.grid
    violations = []
    for t in times:
        if not 0 <= t <= m.maturity:
            violations.append(Violation('slices.times', 't=%r outside [0, %r]' % (t, m.maturity)))
    low, high = m.s0 * math.exp(gs.x_left), m.s0 * math.exp(gs.x_right)
    for s in spots:
        if not low <= s <= high:
            violations.append(Violation('slices.spots', 'S=%r outside [%r, %r]' % (s, low, high)))
    if violations:
        raise ConfigurationError(violations)


def cmd_slices(args):
    cfg = _load(args)
    m, p = cfg.model, cfg.payoff
    times = args.times or [0.0]
    spots = args.spots or [m.s0]
    _check_slices(cfg, times, spots)
    check_admissible(m, cfg.grid)

    if args.mode == 'vs_strike':
        if p.kind is PayoffKind.TABLE:
            raise ConfigurationError([Violation('payoff.kind', 'vs_strike needs a payoff with a strike')])
        strikes = args.strikes or [p.strike]
        if any(not k > 0 for k in strikes):
            raise ConfigurationError([Violation('slices.strikes', 'must be > 0')])

        def job(strike):
            return price_surface(m, p.with_strike(strike), cfg.grid).price_at(times[0], spots[0])

        with ThreadPoolExecutor(max_workers=max(1, args.threads)) as executor:
            prices = list(executor.map(job, strikes))
        table = Table(('K', 'price'))
        for strike, price in zip(strikes, prices):
            table.writerow((strike, price))
        _save(table, args, 'vs_strike.csv')
        return EXIT_OK

    solution = price_surface(m, p, cfg.grid)
    if args.mode == 'vs_spot_at_times':
        for t in times:
            table = Table(('S', 'price'))
            for s in solution.spots():
                table.writerow((s, solution.price_at(t, s)))
            _save(table, args, 'vs_spot_at_times_t=%s.csv' % format_float(t))
    else:
        for s in spots:
            table = Table(('remaining_time', 'price'))
            for tau in solution.grid.tau:
                table.writerow((tau, solution.price_at(m.maturity - tau, s)))
            _save(table, args, 'vs_time_at_spots_S=%s.csv' % format_float(s))
    return EXIT_OK


def _mc_config(cfg, args):
    mc = cfg.mc
    changes = dict((name, value) for name, value in (
        ('n_paths', args.paths), ('n_substeps', args.substeps), ('antithetic', args.antithetic))
        if value is not None)
    try:
        return replace(mc, **changes)
    except ValueError as e:
        raise ConfigurationError([Violation('mc', str(e))])


def cmd_mc_price(args):
    cfg = _load(args)
    m = cfg.model
    mc = _mc_config(cfg, args)
    spot = m.s0 if args.spot is None else args.spot
    estimate = mc_price(m, cfg.payoff, spot, args.time, mc, args.threads)
    if estimate.negative_fraction:
        logger.warning('%.4f%% of terminal spots are negative', 100 * estimate.negative_fraction)
    table = Table(('price', 'std_error', 'n_paths', 'seed'))
    table.writerow((estimate.price, estimate.std_error, estimate.n_paths, estimate.seed))
    _save(table, args, 'mc_price.csv')
    return EXIT_OK


def _snapshot(tf):
    """ Constant function with the value at ``t = 0`` """
    return TimeFunction.constant(tf(0.0))


def _oracle_rows(cfg, threads):
    m, p = cfg.model, cfg.payoff
    if p.kind is not PayoffKind.CALL:
        raise ConfigurationError([Violation('payoff.kind', 'oracle check needs a call payoff')])
    grid = replace(ORACLE_GRID, drift_form=cfg.grid.drift_form)
    sigma = _snapshot(m.sigma)
    bs_model = m.replace(alpha=TimeFunction.constant(m.r), beta=TimeFunction.constant(0.0),
                         sigma=sigma, ell=0.0)
    merton_model = replace(bs_model, ell=m.ell)
    for model in (bs_model, merton_model, m):
        check_admissible(model, grid)

    s, k, r, tau = m.s0, p.strike, m.r, m.maturity
    vol = sigma(0.0)
    for (case, tolerance), model in zip(ORACLE_CASES, (bs_model, merton_model, m)):
        pide = price_surface(model, p, grid).price_at(0.0, s)
        if case == 'black_scholes':
            oracle = black_scholes_call(s, k, r, vol, tau)
        elif case == 'merton':
            oracle = merton_call(s, k, r, vol, m.sigma_j, m.ell, tau, MERTON_TERMS)
        else:
            estimate = mc_price(model, p, s, 0.0, cfg.mc, threads)
            oracle = estimate.price
        abs_err = abs(pide - oracle)
        rel_err = abs_err / abs(oracle) if oracle else math.inf
        if tolerance is None:
            passed = estimate.agrees_with(pide)
        else:
            passed = rel_err <= tolerance
        logger.info('%s: pide=%r oracle=%r pass=%s', case, pide, oracle, passed)
        yield case, pide, oracle, abs_err, rel_err, passed


def cmd_oracle_check(args):
    cfg = _load(args)
    table = Table(('case', 'pide', 'oracle', 'abs_err', 'rel_err', 'pass'))
    for row in _oracle_rows(cfg, args.threads):
        table.writerow(row)
    _save(table, args, 'oracle_check.csv')
    failed = [row[0] for row in table.rows if not row[-1]]
    if failed:
        logger.error('oracle check failed: %s', ', '.join(failed))
        return EXIT_ORACLE_FAILURE
    return EXIT_OK


def cmd_study_refine(args):
    cfg = _load(args)
    report = refinement_study(cfg.model, cfg.payoff, cfg.grid, args.levels, args.threads)
    _save(report.to_table(), args, 'study_refine.csv')
    return EXIT_OK


def cmd_study_localize(args):
    cfg = _load(args)
    if not cfg.payoff.is_bounded:
        raise ConfigurationError([Violation(
            'payoff.kind', 'localization study needs a bounded payoff, not %s' % cfg.payoff.kind.value)])
    gs = cfg.grid
    report = localization_study(cfg.model, cfg.payoff, args.widths, dx=gs.dx, n_time=gs.n_time,
                                threads=args.threads,
                                bound_cfg=cfg.mc if args.bound_constant else None,
                                b_left=gs.b_left, b_right=gs.b_right,
                                drift_form=gs.drift_form, boundary=gs.boundary)
    _save(report.to_table(), args, 'study_localize.csv')
    return EXIT_OK


def cmd_study_truncate(args):
    cfg = _load(args)
    report = truncation_study(cfg.model, cfg.payoff, args.b_values, cfg.grid,
                              scale=cfg.model.sigma_j, threads=args.threads)
    _save(report.to_table(), args, 'study_truncate.csv')
    return EXIT_OK


def _report_violations(violations):
    sys.stderr.write(json.dumps([v.as_dict() for v in violations]) + '\n')


def configure_logging(args):
    if getattr(args, 'verbose', False):
        level = logging.INFO
    elif getattr(args, 'quiet', False):
        level = logging.ERROR
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s', force=True)


def main(argv=None):
    """ Runs command from `argv`, returns exit status """
    args = build_parser().parse_args(argv)
    configure_logging(args)
    try:
        return args.handler(args)
    except ConfigurationError as e:
        _report_violations(e.violations)
        return EXIT_CONFIG
    except DomainError as e:
        _report_violations([Violation(args.command, str(e))])
        return EXIT_CONFIG
    except NumericalFailure as e:
        logger.error('numerical failure at step %d: %s', e.step, e)
        return EXIT_NUMERICAL
    except PricingError as e:
        logger.error('%s', e)
        return EXIT_NUMERICAL
    except ValueError as e:
        _report_violations([Violation(args.command, str(e))])
        return EXIT_CONFIG


if __name__ == '__main__':
    sys.exit(main())
