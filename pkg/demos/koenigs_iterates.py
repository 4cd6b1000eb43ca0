"""Fractional iterates of z/2 + z^2 from its Koenigs map."""
from fractions import Fraction

from germflow import FormalSeries, GermMap, compose, evaluate_flow, flow_family, koenigs

N = 8
u = GermMap([FormalSeries.from_coefficients([0, Fraction(1, 2), 1], N)])
print("Koenigs map f =", koenigs(u).f.render())
flow = flow_family(u)
for t in (Fraction(1, 2), Fraction(1, 3), Fraction(2)):
    print(f"phi^{t} =", evaluate_flow(flow, t).render())
half = evaluate_flow(flow, Fraction(1, 2))
print("phi^(1/2) o phi^(1/2) == u:", compose(half, half) == u)
