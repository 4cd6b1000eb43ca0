"""Independent reference computations built on sympy, mpmath and brute force.

Nothing here calls the composition, inversion or solver code under test;
germs are converted to sympy polynomials and expanded directly.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
import sympy as sp

from germflow import BigComplex, Cyclotomic, Radical

Z, ZB = sp.symbols("z zbar")


def to_sympy(c):
    """Exact sympy value of an engine coefficient."""
    if isinstance(c, int):
        return sp.Integer(c)
    if isinstance(c, Fraction):
        return sp.Rational(c.numerator, c.denominator)
    if isinstance(c, Cyclotomic):
        w = sp.exp(2 * sp.pi * sp.I / c.conductor)
        return sum((sp.Rational(x.numerator, x.denominator) * w**i for i, x in enumerate(c.coeffs)), sp.Integer(0))
    if isinstance(c, Radical):
        a = sp.Rational(c.rho.numerator, c.rho.denominator) ** sp.Rational(1, c.n)
        return sum((sp.Rational(x.numerator, x.denominator) * a**i for i, x in enumerate(c.coeffs)), sp.Integer(0))
    raise TypeError(type(c))


def to_mpc(c, dps=60):
    """mpmath value of any coefficient (exact ones through sympy)."""
    mpmath.mp.dps = max(mpmath.mp.dps, dps)
    if isinstance(c, BigComplex):
        return mpmath.mpc(str(c.real), str(c.imag))
    re, im = sp.N(to_sympy(c), dps).as_real_imag()
    return mpmath.mpc(str(re), str(im))


def is_sympy_zero(expr) -> bool:
    e = sp.nsimplify(sp.expand_complex(sp.expand(expr)))
    if e == 0:
        return True
    return abs(complex(sp.N(e, 80))) < 1e-60


def series_poly(s, names):
    """A FormalSeries as a sympy polynomial in ``names``."""
    out = sp.Integer(0)
    for e, c in s.items():
        mono = sp.Integer(1)
        for v, k in zip(names, e):
            mono *= v**k
        out += to_sympy(c) * mono
    return out


def truncate_poly(expr, names, order):
    p = sp.Poly(sp.expand(expr), *names)
    return sum(
        (c * sp.prod([v**k for v, k in zip(names, m)]) for m, c in p.terms() if sum(m) <= order),
        sp.Integer(0),
    )


def compose_polys(outer, inner, names, order):
    """outer(inner) truncated at ``order`` by plain substitution and expansion."""
    res = []
    for o in outer:
        e = sp.expand(o.subs(dict(zip(names, inner)), simultaneous=True))
        res.append(truncate_poly(e, names, order))
    return res


def cyclotomic_sympy(k):
    x = sp.Symbol("x")
    return tuple(int(c) for c in reversed(sp.Poly(sp.cyclotomic_poly(k, x), x).all_coeffs()))


def brute_force_resonances(lams, D):
    """Every (s, m) with 2 <= |m| <= D and lam_s = prod lam_i^m_i, by a plain loop."""
    n = len(lams)
    found = set()
    for m in itertools.product(range(D + 1), repeat=n):
        if not 2 <= sum(m) <= D:
            continue
        p = Fraction(1)
        for lam, e in zip(lams, m):
            p *= lam**e
        for s in range(n):
            if lams[s] == p:
                found.add((s, m))
    return found


def rotation_obstruction(m, c1):
    """Degree 2m+1 equation of g(g(z)) = zeta_2m z + z^(2m+1) with g = c1 z + c z^(2m+1).

    Lower coefficients c_2..c_2m are set to zero (the forced prefix); the
    return value is (alpha, beta) with alpha*c = beta the blocked equation.
    """
    c = sp.Symbol("c")
    g = c1 * Z + c * Z ** (2 * m + 1)
    gg = sp.expand(g.subs(Z, g))
    coeff = sp.Poly(gg, Z).coeff_monomial(Z ** (2 * m + 1))
    alpha = sp.expand(sp.diff(coeff, c))
    rest = sp.expand(coeff - alpha * c)
    beta = 1 - rest
    return sp.simplify(alpha), sp.simplify(beta)


def _w_poly(c, K):
    """Coefficient list (low to high) of ``c`` in the power basis of Q(zeta_K)."""
    if isinstance(c, (int, Fraction)):
        return [Fraction(c)]
    if isinstance(c, Cyclotomic):
        if K % c.conductor:
            raise ValueError("conductor does not divide K")
        step = K // c.conductor
        out = [Fraction(0)] * (step * (len(c.coeffs) - 1) + 1)
        for i, x in enumerate(c.coeffs):
            out[i * step] = x
        return out
    raise TypeError(type(c))


class RootOracle:
    """Undetermined-coefficient square-root search in sympy's sparse polynomial ring.

    Scalars of Q(zeta_K) are polynomials in a generator ``w`` reduced modulo
    the K-th cyclotomic polynomial.  Degree-d unknowns are ring generators;
    their coefficient in the degree-d part of g(g) is read off by
    differentiation.  Coefficients whose equation reads 0*c = 0 stay symbolic
    (generators ``f*``), so the blocked equation is obtained for every choice
    of them at once.
    """

    def __init__(self, u_components, mus, K, k=2):
        self.n = len(u_components)
        self.N = u_components[0].order
        self.K, self.k = K, k
        n, N = self.n, self.N
        self.monos = [
            tuple(e)
            for d in range(2, N + 1)
            for e in itertools.product(range(d + 1), repeat=n)
            if sum(e) == d
        ]
        slots = [(s, e) for e in self.monos for s in range(n)]
        names = [f"v{i}" for i in range(n)] + ["w"]
        names += [f"f{i}" for i in range(len(slots))] + [f"x{i}" for i in range(len(slots))]
        self.R, *gens = sp.ring(",".join(names), sp.QQ)
        self.vars = gens[:n]
        self.w = gens[n]
        self.fgen = dict(zip(slots, gens[n + 1 : n + 1 + len(slots)]))
        self.xgen = dict(zip(slots, gens[n + 1 + len(slots) :]))
        wx = sp.Symbol("w")
        phi = sp.Poly(sp.cyclotomic_poly(K, wx), wx)
        self.phi_sym = phi
        self.phi = self.R(0)
        for (i,), c in phi.terms():
            self.phi += self.R(c) * self.w**i
        self.u = [self._series(c) for c in u_components]
        self.mus = [self._scalar(x) for x in mus]

    def _scalar(self, c):
        out = self.R(0)
        for i, x in enumerate(_w_poly(c, self.K)):
            out += self.R(sp.Rational(x.numerator, x.denominator)) * self.w**i
        return self.reduce(out)

    def _series(self, s):
        out = self.R(0)
        for e, c in s.items():
            mono = self.R(1)
            for v, k in zip(self.vars, e):
                mono *= v**k
            out += self._scalar(c) * mono
        return out

    def reduce(self, p):
        return p.rem(self.phi)

    def _trunc(self, p, d):
        n = self.n
        return self.R({m: c for m, c in p.items() if sum(m[:n]) <= d})

    def compose(self, outer, inner, d):
        """outer(inner) keeping total degree <= d in the germ variables."""
        n = self.n
        powers = [[self.R(1)] for _ in range(n)]
        out = self.R(0)
        for mono, c in outer.items():
            term = self.R({(0,) * n + tuple(mono[n:]): c})
            for i in range(n):
                while len(powers[i]) <= mono[i]:
                    powers[i].append(self._trunc(powers[i][-1] * inner[i], d))
                term = self._trunc(term * powers[i][mono[i]], d)
            out += term
        return [self.reduce(x) for x in [out]][0]

    def coeff(self, p, e):
        """Coefficient of the germ monomial ``e`` (a polynomial in w and unknowns)."""
        n = self.n
        return self.R({(0,) * n + m[n:]: c for m, c in p.items() if tuple(m[:n]) == tuple(e)})

    def _inverse(self, a):
        wx = self.phi_sym.gens[0]
        coeffs = {}
        for m, c in a.items():
            coeffs[m[self.n]] = c
        pa = sp.Poly(sum((sp.Rational(c) * wx**i for i, c in coeffs.items()), sp.Integer(0)), wx)
        inv = sp.invert(pa, self.phi_sym)
        out = self.R(0)
        for (i,), c in sp.Poly(inv, wx).terms():
            out += self.R(c) * self.w**i
        return out

    def _is_scalar(self, p):
        n = self.n
        return all(not any(m[:n]) and not any(m[n + 1 :]) for m in p.keys())

    def solve(self):
        """Return ("root", g) or ("blocked", degree, blocks, prefix, free).

        ``blocks`` maps (component, exponents) to (alpha, beta) for every
        equation of the first inconsistent degree that reads 0*c = beta, beta != 0.
        """
        n, k = self.n, self.k
        g = [self.mus[s] * self.vars[s] for s in range(n)]
        free = []
        for d in range(2, self.N + 1):
            trial = list(g)
            for e in self.monos:
                if sum(e) != d:
                    continue
                for s in range(n):
                    mono = self.R(1)
                    for v, x in zip(self.vars, e):
                        mono *= v**x
                    trial[s] = trial[s] + self.xgen[(s, e)] * mono
            it = [self._trunc(x, d) for x in trial]
            for _ in range(k - 1):
                it = [self.compose(c, it, d) for c in trial]
            fixes = []
            blocks = {}
            for e in self.monos:
                if sum(e) != d:
                    continue
                for s in range(n):
                    x = self.xgen[(s, e)]
                    lhs = self.coeff(it[s], e)
                    alpha = self.reduce(lhs.diff(x))
                    rest = self.reduce(lhs - alpha * x)
                    for y in self.xgen.values():
                        rest = rest.subs(y, 0) if y != x else rest
                    beta = self.reduce(self.coeff(self.u[s], e) - rest)
                    if alpha == 0:
                        if beta == 0:
                            free.append((s, e))
                            fixes.append((s, e, self.fgen[(s, e)]))
                            continue
                        blocks[(s, e)] = (alpha, beta)
                        continue
                    if not self._is_scalar(alpha):
                        raise AssertionError("divisor depends on unknowns")
                    fixes.append((s, e, self.reduce(beta * self._inverse(alpha))))
            if blocks:
                return ("blocked", d, blocks, g, free)
            for s, e, c in fixes:
                mono = self.R(1)
                for v, x in zip(self.vars, e):
                    mono *= v**x
                g[s] = g[s] + c * mono
        return ("root", g)

    def depends_on_free(self, p) -> bool:
        n = self.n
        nf = len(self.fgen)
        return any(any(m[n + 1 : n + 1 + nf]) for m in p.keys())

    def as_engine_scalar(self, c):
        """Embed an engine coefficient for comparison with ring values."""
        return self._scalar(c)
