"""Conjugacy of a germ to its linear part, resonances, and matrix log/powers.

The one-variable solver is the Koenigs recursion for f(u(z)) = lam * f(z);
the n-variable solver handles a diagonal linear part with no resonances,
dividing by lam**m - lam_s degree by degree. The matrix functions are the
Mercator series for log(E + X) and the exponential series, evaluated in
arbitrary-precision complex arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import gmpy2

from .coeff import (
    BigComplex,
    abs_squared_vs_one,
    embed_complex,
    is_exact,
    is_zero,
)
from .matrix import SquareMatrix
from .series import (
    FormalSeries,
    GermMap,
    compose,
    compositional_inverse,
    monomials_of_degree,
)

__all__ = [
    "Closeness",
    "LinearizationError",
    "LinearizationResult",
    "NonConvergenceError",
    "ResonanceError",
    "ResonanceWitness",
    "SquareMatrix",
    "closeness_check",
    "koenigs",
    "matrix_exp",
    "matrix_log",
    "matrix_power_t",
    "multiplier",
    "poincare_linearize",
    "resonance_check",
]

MAX_SERIES_TERMS = 10_000


class LinearizationError(ValueError):
    """The germ does not satisfy the preconditions of the linearization."""


class NonConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ResonanceWitness:
    """A relation ``lam[s] == prod(lam[i] ** m[i])`` with ``sum(m) >= 2``."""

    s: int
    m: tuple

    def to_json(self):
        return {"s": self.s, "m": list(self.m)}


class ResonanceError(LinearizationError):
    def __init__(self, witnesses: Sequence[ResonanceWitness]):
        self.witnesses = list(witnesses)
        w = self.witnesses[0]
        super().__init__(
            f"resonant multipliers: lambda_{w.s + 1} = prod lambda_i^{list(w.m)}"
            + (f" (+{len(self.witnesses) - 1} more)" if len(self.witnesses) > 1 else "")
        )


@dataclass(frozen=True)
class LinearizationResult:
    """Conjugacy ``f o u = diag(multipliers) . f`` with ``f`` tangent to the identity."""

    f: GermMap
    multipliers: tuple
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def f_inverse(self) -> GermMap:
        if "inv" not in self._cache:
            self._cache["inv"] = compositional_inverse(self.f)
        return self._cache["inv"]

    def linear_germ(self) -> GermMap:
        return GermMap.linear(SquareMatrix.diag(self.multipliers), self.f.order)


class Closeness(NamedTuple):
    norm: object  # mpfr
    close: bool


# ---------------------------------------------------------------------------


def multiplier(u: GermMap) -> SquareMatrix:
    """Jacobian matrix of ``u`` at the origin."""
    return u.linear_part()


def _sign_minus_one(s, prec=128) -> int:
    """Sign of ``s - 1`` for a real value ``s`` (exact values decided exactly at 0)."""
    if isinstance(s, BigComplex):
        d = s.real - 1
        return (d > 0) - (d < 0)
    d = s - 1
    if is_zero(d):
        return 0
    while True:
        v = embed_complex(d, prec).real
        if abs(v) > gmpy2.mpfr(2) ** (16 - prec):
            return 1 if v > 0 else -1
        prec *= 2


def closeness_check(J: SquareMatrix, prec: int = 256) -> Closeness:
    """Frobenius distance from ``J`` to the identity and whether it is below one."""
    D = J - SquareMatrix.identity(J.n)
    sq = D.frobenius_squared()
    sign = _sign_minus_one(sq)
    return Closeness(D.frobenius_norm(prec), sign < 0)


def _abs_sign(lam, tol) -> int:
    """Sign of |lam| - 1, with a tolerance band for approximate values."""
    if isinstance(lam, BigComplex):
        d = abs(lam) - 1
        if abs(d) <= tol:
            return 0
        return 1 if d > 0 else -1
    return abs_squared_vs_one(lam)


def _is_small(c, tol) -> bool:
    if isinstance(c, BigComplex):
        return abs(c) <= tol
    return is_zero(c)


def _default_tol(x):
    prec = x.prec if isinstance(x, BigComplex) else 256
    return gmpy2.mpfr(2) ** (8 - prec)


def koenigs(u: GermMap, order: int | None = None, tol=None) -> LinearizationResult:
    """Koenigs map of a one-variable germ with ``|lam|`` not in {0, 1}.

    Returns ``f = z + O(z**2)`` with ``f(u(z)) = lam * f(z)`` to the given
    order. For ``|lam| > 1`` the same ``f`` is obtained from the inverse germ,
    whose multiplier is ``1/lam``.
    """
    if u.nvars != 1:
        raise LinearizationError("koenigs expects a one-variable germ")
    N = u.order if order is None else min(order, u.order)
    u = u.truncate(N)
    lam = u[0].coefficient((1,))
    tol = _default_tol(lam) if tol is None else tol
    if _is_small(lam, tol):
        raise LinearizationError("multiplier is zero; the germ is not a diffeomorphism")
    side = _abs_sign(lam, tol)
    if side == 0:
        raise LinearizationError(
            "|lambda| = 1: no Koenigs linearization (use the flow module's parabolic "
            "path when lambda = 1)"
        )
    src = compositional_inverse(u) if side > 0 else u
    mu = src[0].coefficient((1,))
    f = _koenigs_series(src[0], mu, N, tol)
    return LinearizationResult(GermMap([f]), (lam,))


def _koenigs_series(s: FormalSeries, lam, N, tol) -> FormalSeries:
    # c_k (lam^k - lam) = -sum_{j<k} c_j [z^k] s^j
    one = lam / lam
    powers = [None, s]
    for j in range(2, N + 1):
        powers.append(powers[-1] * s)
    c = {1: one}
    lam_k = lam
    for k in range(2, N + 1):
        lam_k = lam_k * lam
        known = 0
        for j, cj in c.items():
            p = powers[j].coefficient((k,))
            if not is_zero(p):
                known = known + cj * p
        div = lam_k - lam
        if _is_small(div, tol):
            raise LinearizationError(f"small divisor lam^{k} - lam at degree {k}")
        if not is_zero(known):
            c[k] = -known / div
    return FormalSeries(1, N, {(k,): v for k, v in c.items()})


def resonance_check(multipliers: Sequence, max_degree: int, tol=None) -> list[ResonanceWitness]:
    """Every ``(s, m)`` with ``2 <= |m| <= max_degree`` and ``lam_s = lam**m``."""
    if max_degree < 2:
        raise ValueError("max_degree must be at least 2")
    lams = list(multipliers)
    n = len(lams)
    approx = any(not is_exact(x) for x in lams)
    if approx and tol is None:
        tol = min(_default_tol(x) for x in lams if not is_exact(x))
    prods: dict = {(0,) * n: 1}
    out = []
    for d in range(1, max_degree + 1):
        for m in monomials_of_degree(n, d):
            i = next(k for k in range(n) if m[k])
            prev = list(m)
            prev[i] -= 1
            p = prods[tuple(prev)] * lams[i]
            prods[m] = p
            if d < 2:
                continue
            for s, lam in enumerate(lams):
                if approx:
                    hit = abs(embed_complex(lam, 64) - p if is_exact(lam) else lam - p) <= tol
                else:
                    hit = lam == p
                if hit:
                    out.append(ResonanceWitness(s, m))
    return out


def poincare_linearize(u: GermMap, order: int | None = None, tol=None) -> LinearizationResult:
    """Linearize a germ with diagonal, non-resonant, contracting linear part.

    An all-expanding linear part is reduced to the contracting case through
    the inverse germ. The result satisfies ``f o u = diag(lam) . f``.
    """
    N = u.order if order is None else min(order, u.order)
    u = u.truncate(N)
    J = multiplier(u)
    lams = tuple(J.diagonal())
    tol = _default_tol(lams[0]) if tol is None else tol
    if not J.is_diagonal(tol):
        raise LinearizationError("linear part is not diagonal")
    sides = {_abs_sign(x, tol) for x in lams}
    if any(_is_small(x, tol) for x in lams):
        raise LinearizationError("zero eigenvalue; the germ is not a diffeomorphism")
    if sides not in ({-1}, {1}):
        raise LinearizationError(
            "eigenvalues must all lie strictly inside (or all strictly outside) the unit circle"
        )
    if N >= 2:
        w = resonance_check(lams, N, tol if not all(is_exact(x) for x in lams) else None)
        if w:
            raise ResonanceError(w)
    src = compositional_inverse(u) if sides == {1} else u
    mus = tuple(src.linear_part().diagonal())
    f = _poincare_series(src, mus, N)
    return LinearizationResult(f, lams)


def _poincare_series(u: GermMap, lams, N) -> GermMap:
    n = u.nvars
    one = lams[0] / lams[0]
    terms = [dict() for _ in range(n)]
    for s in range(n):
        e = [0] * n
        e[s] = 1
        terms[s][tuple(e)] = one
    # lam**m for every monomial, built incrementally
    lam_pow = {(0,) * n: one}
    for d in range(2, N + 1):
        f = GermMap._raw(FormalSeries._raw(n, d, dict(t)) for t in terms)
        known = compose(f, u.truncate(d)).degree_part(d)
        for m in monomials_of_degree(n, d):
            lm = _lam_power(lam_pow, lams, m)
            for s in range(n):
                k = known[s].coefficient(m)
                if is_zero(k):
                    continue
                terms[s][m] = -k / (lm - lams[s])
    return GermMap(FormalSeries(n, N, t) for t in terms)


def _lam_power(cache, lams, m):
    got = cache.get(m)
    if got is None:
        i = next(k for k in range(len(m)) if m[k])
        prev = list(m)
        prev[i] -= 1
        got = _lam_power(cache, lams, tuple(prev)) * lams[i]
        cache[m] = got
    return got


# ---------------------------------------------------------------------------
# matrix logarithm and powers (raw mpc arithmetic inside one context)


def _to_mpc_rows(J: SquareMatrix, prec: int):
    return [[embed_complex(a, prec).value for a in r] for r in J.rows]


def _from_mpc_rows(rows, prec) -> SquareMatrix:
    return SquareMatrix([[BigComplex._raw(x, prec) for x in r] for r in rows])


def _mm(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), gmpy2.mpc(0)) for j in range(n)] for i in range(n)]


def _fro2(a):
    return sum((gmpy2.norm(x) for r in a for x in r), gmpy2.mpfr(0))


def _series_tol(prec, tol):
    return gmpy2.mpfr(2) ** (8 - prec) if tol is None else gmpy2.mpfr(tol)


def matrix_log(J: SquareMatrix, prec: int = 256, tol=None) -> SquareMatrix:
    """Principal logarithm of ``J`` from the Mercator series of ``log(E + X)``.

    Requires ``||J - E||_F < 1``. Terms are summed until the Frobenius norm of
    the next term drops below ``tol`` (default ``2**(8 - prec)``).
    """
    chk = closeness_check(J, prec)
    if not chk.close:
        raise LinearizationError(
            f"||J - E||_F = {float(chk.norm):.6g} >= 1: the logarithm series does not converge"
        )
    n = J.n
    with gmpy2.context(precision=prec):
        eps2 = _series_tol(prec, tol) ** 2
        X = _to_mpc_rows(J, prec)
        for i in range(n):
            X[i][i] -= 1
        L = [list(r) for r in X]
        P = X
        for k in range(2, MAX_SERIES_TERMS + 1):
            P = _mm(P, X)
            sign = 1 if k % 2 else -1
            term = [[sign * x / k for x in r] for r in P]
            L = [[a + b for a, b in zip(r, s)] for r, s in zip(L, term)]
            if _fro2(term) < eps2:
                break
        else:
            raise NonConvergenceError("matrix logarithm series did not converge")
    return _from_mpc_rows(L, prec)


def matrix_exp(L: SquareMatrix, prec: int = 256, tol=None) -> SquareMatrix:
    """Exponential series ``sum L**k / k!`` to the series tolerance."""
    n = L.n
    with gmpy2.context(precision=prec):
        eps2 = _series_tol(prec, tol) ** 2
        A = _to_mpc_rows(L, prec)
        E = [[gmpy2.mpc(1 if i == j else 0) for j in range(n)] for i in range(n)]
        S = [list(r) for r in E]
        T = E
        for k in range(1, MAX_SERIES_TERMS + 1):
            T = [[x / k for x in r] for r in _mm(T, A)]
            S = [[a + b for a, b in zip(r, s)] for r, s in zip(S, T)]
            if _fro2(T) < eps2:
                break
        else:
            raise NonConvergenceError("matrix exponential series did not converge")
    return _from_mpc_rows(S, prec)


def matrix_power_t(J: SquareMatrix, t, prec: int = 256, tol=None) -> SquareMatrix:
    """``J**t = exp(t log J)`` for a matrix close to the identity."""
    L = matrix_log(J, prec, tol)
    tt = embed_complex(t, prec) if is_exact(t) else t
    return matrix_exp(L.scale(tt), prec, tol)
