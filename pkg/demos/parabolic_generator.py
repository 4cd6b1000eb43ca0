"""Formal generator of e^x - 1 and its half iterate."""
from fractions import Fraction
from math import factorial

from germflow import FormalSeries, GermMap, compose, evaluate_flow, exp_map, flow_family, formal_log

N = 12
u = GermMap([FormalSeries.from_coefficients([0] + [Fraction(1, factorial(k)) for k in range(1, N + 1)], N)])
v = formal_log(u)
print("generator v =", v.render())
print("exp(v) == u:", exp_map(v) == u)
half = evaluate_flow(flow_family(u), Fraction(1, 2))
print("half iterate =", half.render())
print("half o half == u:", compose(half, half) == u)
