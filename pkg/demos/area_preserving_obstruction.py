"""Area-preserving germ with a rotation by pi/m: its square-root search is blocked at degree 2m+1."""
from germflow import example2_germ, format_coeff, iterative_root

for m in (1, 2, 3):
    u = example2_germ(m)
    print(f"m={m}: u = {u[0].render(['z', 'zbar'])}")
    for branch in range(4):
        cert = iterative_root(u, 2, 2 * m + 1, branch)
        mults = ", ".join(format_coeff(c) for c in cert.root_multipliers)
        print(f"  branch {branch}: roots ({mults}) blocked at degree {cert.degree} "
              f"on component {cert.component}, monomial {cert.exponents}: 0*c = {format_coeff(cert.beta)}")
