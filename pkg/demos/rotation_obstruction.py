"""No formal square root exists for zeta_2m z + z^(2m+1): print the certificate for each m."""
from fractions import Fraction

from germflow import FormalSeries, GermMap, format_coeff, iterative_root, root_of_unity

for m in range(1, 7):
    u = GermMap([FormalSeries(1, 2 * m + 2, {(1,): root_of_unity(2 * m, 1), (2 * m + 1,): Fraction(1)})])
    for branch in (0, 1):
        cert = iterative_root(u, 2, 2 * m + 2, branch)
        c1 = format_coeff(cert.root_multipliers[0])
        print(f"m={m} branch={branch} c1={c1:<14} degree {cert.degree}: "
              f"{format_coeff(cert.alpha)}*c = {format_coeff(cert.beta)}  replay {cert.replay() == (cert.alpha, cert.beta)}")
