#!/usr/bin/env python
# -*- coding: utf-8 -*-
from pricecap import ModelParams, Payoff, GridSpec, price_surface

m = ModelParams(alpha=0.015, beta=0.4, sigma=0.5, ell=1.5, sigma_j=0.5,
                r=0.04, s0=50, maturity=1)
call = Payoff.call(45)

grid = GridSpec(-2.5, 2.5, 1000, 500, boundary='dirichlet_payoff')
solution = price_surface(m, call, grid)
print(solution.price_at(0.0, 50.0))

for spot in (40, 45, 50, 55):
    print(spot, solution.price_at(0.5, spot))

from pricecap import McConfig, mc_price

estimate = mc_price(m, call, 50.0, 0.0, McConfig(n_paths=100000, seed=1))
print(estimate.price, estimate.confidence_interval())

from pricecap import TimeFunction, price_cap_coefficients

inflation = TimeFunction.table([(0, 0.02), (0.5, 0.035)])
alpha, beta = price_cap_coefficients(inflation, efficiency=0.01, subsidy=0.5,
                                     uncontrollable_cost=0.2)
seasonal = m.replace(alpha=alpha, beta=beta)
print(price_surface(seasonal, call, grid).price_at(0.0, 50.0))

from pricecap import refinement_study

report = refinement_study(m, Payoff.gaussian(50, 0.5), GridSpec(-1.5, 1.5, 60, 10), 4)
print(report.fitted_rate, report.observed_orders())
report.save('study_refine.csv')
