"""Flows of germs: the exponential map, its formal inverse, and iterative roots.

A flow ``phi^t`` embedding a germ ``u`` is represented by the data that
builds it for any ``t``:

* :class:`HyperbolicFlow` keeps a linearizing map ``f`` and the multipliers,
  so ``phi^t = f^-1 o (Lambda^t . f)``;
* :class:`ParabolicFlow` keeps a generator ``v``, so ``phi^t`` is the
  Lie series of ``t v``.

:func:`iterative_root` solves ``g o ... o g = u`` by undetermined
coefficients and, when the linear equation for a new coefficient reads
``0 * c = beta`` with ``beta != 0``, returns an :class:`ObstructionCertificate`
instead of a root.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import gmpy2

from .coeff import (
    BigComplex,
    NotRepresentableError,
    conj,
    embed_complex,
    format_coeff,
    is_exact,
    is_zero,
    kth_roots,
    polar_decompose,
    root_of_unity,
    scalar_power,
)
from .linearize import (
    LinearizationError,
    _abs_sign,
    _default_tol,
    _is_small,
    koenigs,
    poincare_linearize,
)
from .matrix import SquareMatrix
from .series import (
    FormalSeries,
    GermMap,
    VectorFieldGerm,
    _mul,
    apply_linear,
    compose,
    compose_power,
    compositional_inverse,
    monomials_of_degree,
)

__all__ = [
    "FlowError",
    "FlowFamily",
    "HyperbolicFlow",
    "ObstructionCertificate",
    "ParabolicFlow",
    "conjugate_pair",
    "example2_germ",
    "evaluate_flow",
    "exp_flow",
    "exp_map",
    "flow_family",
    "formal_log",
    "involution",
    "is_conjugate_pair",
    "iterative_root",
    "lie_derivative",
    "verify_group_law",
]

DEFAULT_PRECISION = 256


class FlowError(ValueError):
    """The germ is outside the cases for which a flow is constructed."""


# ---------------------------------------------------------------------------
# Lie series


def lie_derivative(v: VectorFieldGerm, s: FormalSeries) -> FormalSeries:
    """``sum_i v_i * ds/dx_i``.

    Since every ``v_i`` vanishes at the origin the result is known to the
    full order of ``s`` even though each derivative loses one degree.
    """
    N = min(s.order, v.order)
    acc = FormalSeries.zero(s.nvars, N)
    for i, vi in enumerate(v.components):
        if vi.is_zero():
            continue
        acc = acc + _mul(vi, s.derive(i), N)
    return acc


def _one_like(x):
    return x / x if isinstance(x, BigComplex) else Fraction(1)


def _is_nilpotent(A: SquareMatrix) -> bool:
    P = A ** A.n
    return all(is_zero(x) for x in P.entries())


def exp_flow(v: VectorFieldGerm, t, order: int | None = None, tol=None) -> GermMap:
    """Time-``t`` flow of ``v`` as the Lie series ``sum t**k/k! D_v**k (x)``.

    In exact mode the series must terminate, which holds when the linear part
    of ``v`` is nilpotent (or ``t = 0``); otherwise ``exp(t A)`` has no exact
    form and :class:`NotRepresentableError` is raised. In approximate mode the
    series is summed until two consecutive terms fall below ``tol``.
    """
    if not isinstance(v, VectorFieldGerm):
        raise TypeError("exp_flow expects a VectorFieldGerm")
    N = v.order if order is None else min(order, v.order)
    v = v.truncate(N)
    n = v.nvars
    exact_t = is_exact(t)
    if v.exact is not None and v.exact != exact_t:
        if v.exact:
            v = v.map_coefficients(lambda c: embed_complex(c, t.prec))
        else:
            t = embed_complex(t, _prec_of(v))
            exact_t = False
    one = Fraction(1) if exact_t else _one_like(t)
    x = GermMap.identity(n, N, one)
    if is_zero(t) or v.is_zero():
        return x
    if exact_t:
        t = Fraction(t) if isinstance(t, int) else t
        if not _is_nilpotent(v.linear_part()):
            raise NotRepresentableError(
                "exp(t*A) for a non-nilpotent linear part has no exact form; use float mode"
            )
        cap = N * n + n + 2
    else:
        tol = _default_tol(t) if tol is None else tol
        cap = 10_000
    comps = list(x.components)
    current = list(x.components)
    coef = one
    small_run = 0
    for k in range(1, cap + 1):
        current = [lie_derivative(v, c) for c in current]
        coef = coef * t / k
        if all(c.is_zero() for c in current):
            break
        terms = [c.scale(coef) for c in current]
        comps = [a + b for a, b in zip(comps, terms)]
        if not exact_t:
            size = max((abs(y) for c in terms for y in c._terms.values()), default=0)
            small_run = small_run + 1 if size < tol else 0
            if small_run >= 2:
                break
    else:
        raise ArithmeticError("Lie series did not terminate")
    return GermMap(comps)


def _prec_of(g):
    for c in g.components:
        for x in c._terms.values():
            return x.prec
    return DEFAULT_PRECISION


def exp_map(v: VectorFieldGerm, order: int | None = None) -> GermMap:
    """Time-one flow of ``v``."""
    return exp_flow(v, Fraction(1), order)


def _tangent_to_identity(u: GermMap, tol=None) -> bool:
    J = u.linear_part()
    if u.exact is not False:
        return J == SquareMatrix.identity(u.nvars)
    tol = _default_tol(J[0, 0]) if tol is None else tol
    return all(_is_small(a - (1 if i == j else 0), tol) for i, r in enumerate(J.rows) for j, a in enumerate(r))


def formal_log(u: GermMap, order: int | None = None, tol=None) -> VectorFieldGerm:
    """Infinitesimal generator ``v`` of a germ tangent to the identity.

    Degree ``d`` of ``exp_map(v)`` is ``v_d`` plus terms built only from lower
    degrees of ``v``, so each new degree is a subtraction: no division occurs.
    """
    N = u.order if order is None else min(order, u.order)
    u = u.truncate(N)
    n = u.nvars
    if not _tangent_to_identity(u, tol):
        raise FlowError("formal_log needs a germ whose linear part is the identity")
    one = Fraction(1) if u.exact is not False else embed_complex(1, _prec_of(u))
    parts = [dict() for _ in range(n)]
    for d in range(2, N + 1):
        v = VectorFieldGerm._raw(FormalSeries._raw(n, d, dict(p)) for p in parts)
        e = exp_map(v, d) if not v.is_zero() else GermMap.identity(n, d, one)
        for s in range(n):
            diff = u[s].degree_part(d) - e[s].degree_part(d)
            parts[s].update(diff._terms)
    return VectorFieldGerm(FormalSeries(n, N, p) for p in parts)


# ---------------------------------------------------------------------------
# flow families


@dataclass(frozen=True)
class HyperbolicFlow:
    """``phi^t = f^-1 o (diag(multipliers)**t . f)``."""

    f: GermMap
    f_inverse: GermMap
    multipliers: tuple
    order: int

    kind = "hyperbolic"

    def evaluate(self, t, order=None):
        return evaluate_flow(self, t, order)

    def to_json(self):
        return {
            "kind": self.kind,
            "order": self.order,
            "multipliers": [format_coeff(x) for x in self.multipliers],
            "conjugacy": self.f.to_json(),
        }


@dataclass(frozen=True)
class ParabolicFlow:
    """``phi^t = exp(t v)`` for a generator ``v``."""

    v: VectorFieldGerm
    order: int

    kind = "parabolic"

    def evaluate(self, t, order=None):
        return evaluate_flow(self, t, order)

    def to_json(self):
        return {"kind": self.kind, "order": self.order, "generator": self.v.to_json()}


FlowFamily = Union[HyperbolicFlow, ParabolicFlow]


def flow_family(u: GermMap, order: int | None = None, tol=None) -> FlowFamily:
    """Build the one-parameter family through ``u``.

    * linear part the identity: parabolic, generator from :func:`formal_log`;
    * one variable, ``|lam|`` not in {0, 1}: hyperbolic via Koenigs;
    * n variables, diagonal non-resonant contracting (or expanding) linear
      part: hyperbolic via Poincare linearization.
    """
    N = u.order if order is None else min(order, u.order)
    u = u.truncate(N)
    n = u.nvars
    J = u.linear_part()
    exact = u.exact is not False
    if _tangent_to_identity(u, tol):
        return ParabolicFlow(formal_log(u, N, tol), N)
    if n == 1:
        lam = J[0, 0]
        t = tol if tol is not None else _default_tol(lam)
        if _abs_sign(lam, t) == 0:
            pd = polar_decompose(lam) if exact else None
            if pd is not None and pd[0] == 1:
                raise FlowError(
                    f"multiplier {format_coeff(lam)} is a root of unity other than 1; "
                    "use iterative_root to test for an obstruction certificate"
                )
            raise FlowError("|lambda| = 1 with lambda != 1 is not supported")
        lin = koenigs(u, N, tol)
    else:
        try:
            lin = poincare_linearize(u, N, tol)
        except LinearizationError as exc:
            raise FlowError(str(exc)) from exc
    return HyperbolicFlow(lin.f, compositional_inverse(lin.f), tuple(lin.multipliers), N)


def _powers_exact(lams, t):
    return [scalar_power(x, t) for x in lams]


def _to_float_flow(F: HyperbolicFlow, prec):
    emb = lambda c: embed_complex(c, prec)  # noqa: E731
    return HyperbolicFlow(
        F.f.map_coefficients(emb),
        F.f_inverse.map_coefficients(emb),
        tuple(emb(x) for x in F.multipliers),
        F.order,
    )


def evaluate_flow(F: FlowFamily, t, order: int | None = None, prec: int = DEFAULT_PRECISION) -> GermMap:
    """The germ ``phi^t`` of a flow family.

    For hyperbolic families in exact mode ``lam**t`` must have an exact form
    (rational, radical, or cyclotomic); otherwise a warning is issued and
    the evaluation is redone in approximate mode at ``prec`` bits.
    """
    N = F.order if order is None else min(order, F.order)
    if isinstance(F, ParabolicFlow):
        if F.v.exact is False and is_exact(t):
            t = embed_complex(t, _prec_of(F.v))
        return exp_flow(F.v, t, N)
    if isinstance(t, int):
        t = Fraction(t)
    exact = F.f.exact is not False and is_exact(t)
    if exact:
        try:
            lt = _powers_exact(F.multipliers, t)
            return _hyperbolic_at(F, lt, N)
        except NotRepresentableError as exc:
            warnings.warn(f"{exc}; falling back to approximate evaluation", RuntimeWarning, stacklevel=2)
    if F.f.exact is not False:
        F = _to_float_flow(F, prec)
    tt = embed_complex(t, prec) if is_exact(t) else t
    lt = [lam**tt for lam in F.multipliers]
    return _hyperbolic_at(F, lt, N)


def _hyperbolic_at(F: HyperbolicFlow, lam_t, N) -> GermMap:
    scaled = apply_linear(SquareMatrix.diag(lam_t), F.f.truncate(N))
    return compose(F.f_inverse.truncate(N), scaled)


def verify_group_law(F: FlowFamily, s, t, order: int | None = None) -> GermMap:
    """Residual ``phi^s o phi^t - phi^(s+t)``; identically zero in exact mode."""
    a = evaluate_flow(F, s, order)
    b = evaluate_flow(F, t, order)
    c = evaluate_flow(F, s + t, order)
    return compose(a, b) - c


# ---------------------------------------------------------------------------
# iterative roots


@dataclass(frozen=True)
class ObstructionCertificate:
    """Proof that no formal ``k``-th iterative root exists on a given branch.

    At total ``degree`` the coefficient ``c`` of monomial ``exponents`` in
    component ``component`` must satisfy ``alpha * c = beta`` with
    ``alpha == 0`` and ``beta != 0``. ``forced_prefix`` lists every lower
    coefficient ``(component, exponents, value)`` fixed along the way;
    ``free`` lists those that were undetermined (``0 * c = 0``) and set to 0.
    """

    degree: int
    alpha: object
    beta: object
    component: int
    exponents: tuple
    k: int
    branch: int
    root_multipliers: tuple
    forced_prefix: tuple
    free: tuple = ()
    germ: GermMap | None = field(default=None, repr=False, compare=False)

    def prefix_germ(self) -> GermMap:
        """The root candidate assembled from the forced prefix, at order ``degree``."""
        n = len(self.root_multipliers)
        terms = [dict() for _ in range(n)]
        for s, e, c in self.forced_prefix:
            if not is_zero(c):
                terms[s][tuple(e)] = c
        return GermMap(FormalSeries(n, self.degree, t) for t in terms)

    def replay(self, germ: GermMap | None = None):
        """Recompute ``(alpha, beta)`` by composition alone.

        ``beta`` is the gap left by the prefix; ``alpha`` is the change at the
        blocked monomial when a unit term is added there (the degree-``d``
        coefficient of ``g**k`` is affine in that unknown).
        """
        u = germ if germ is not None else self.germ
        if u is None:
            raise ValueError("replay needs the source germ")
        g = self.prefix_germ()
        s, m = self.component, tuple(self.exponents)
        G = compose_power(g, self.k, self.degree)
        probe = GermMap._raw(
            [c + FormalSeries(g.nvars, self.degree, {m: 1}) if i == s else c for i, c in enumerate(g)]
        )
        P = compose_power(probe, self.k, self.degree)
        before = G[s].coefficient(m)
        return P[s].coefficient(m) - before, u[s].coefficient(m) - before

    def to_json(self):
        return {
            "degree": self.degree,
            "alpha": format_coeff(self.alpha),
            "beta": format_coeff(self.beta),
            "branch": self.branch,
            "k": self.k,
            "component": self.component,
            "exponents": list(self.exponents),
            "root_multipliers": [format_coeff(x) for x in self.root_multipliers],
            "forced_prefix": [
                {"component": s, "exponents": list(e), "coeff": format_coeff(c)}
                for s, e, c in self.forced_prefix
            ],
            "free": [{"component": s, "exponents": list(e)} for s, e in self.free],
        }


def _mono_value(mus, m):
    p = 1
    for mu, e in zip(mus, m):
        if e:
            p = mu**e * p
    return p


def _alpha(mus, s, m, k):
    """Coefficient of the new unknown ``c x**m e_s`` in degree ``|m|`` of ``g**k``."""
    mm = _mono_value(mus, m)
    total = 0
    for j in range(k):
        total = total + mus[s] ** (k - 1 - j) * mm**j
    return total


def _float_roots(lam, k, prec):
    lam = embed_complex(lam, prec)
    with gmpy2.context(precision=prec):
        principal = BigComplex._raw(lam.value ** (gmpy2.mpfr(1) / k), prec)
        out = []
        for j in range(k):
            ang = 2 * gmpy2.const_pi() * j / k
            out.append(principal * BigComplex._raw(gmpy2.mpc(gmpy2.cos(ang), gmpy2.sin(ang)), prec))
    return out


def root_branches(u: GermMap, k: int) -> int:
    """Number of branch indices accepted by :func:`iterative_root`."""
    return k ** u.nvars


def iterative_root(u: GermMap, k: int, order: int | None = None, branch: int = 0, tol=None):
    """Solve ``g o ... o g = u`` (``k`` copies) degree by degree.

    The linear part of ``g`` is a diagonal ``k``-th root of that of ``u``;
    ``branch`` is read in base ``k``, digit ``s`` choosing the root
    ``principal * zeta_k**digit`` for component ``s``.

    Returns
    -------
    GermMap or ObstructionCertificate
        The root to ``order``, or the certificate for the first degree whose
        equation is ``0 * c = beta`` with ``beta != 0``.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    N = u.order if order is None else min(order, u.order)
    u = u.truncate(N)
    n = u.nvars
    if not 0 <= branch < k**n:
        raise ValueError(f"branch must be in [0, {k ** n})")
    J = u.linear_part()
    exact = u.exact is not False
    if not exact:
        tol = _default_tol(J[0, 0]) if tol is None else tol
    if not J.is_diagonal(tol):
        raise FlowError("iterative_root needs a diagonal linear part")
    lams = J.diagonal()
    digits = [(branch // k**s) % k for s in range(n)]
    mus = []
    for s, lam in enumerate(lams):
        if _is_small(lam, tol):
            raise FlowError("zero multiplier; the germ is not a diffeomorphism")
        roots = kth_roots(lam, k) if exact else _float_roots(lam, k, _prec_of(u))
        mus.append(roots[digits[s]])
    mus = tuple(mus)

    terms = [dict() for _ in range(n)]
    prefix = []
    for s in range(n):
        e = [0] * n
        e[s] = 1
        terms[s][tuple(e)] = mus[s]
        for j in range(n):
            f = [0] * n
            f[j] = 1
            prefix.append((s, tuple(f), mus[s] if j == s else Fraction(0)))
    free = []
    for d in range(2, N + 1):
        g = GermMap._raw(FormalSeries._raw(n, d, dict(t)) for t in terms)
        G = compose_power(g, k, d)
        level = []
        for m in monomials_of_degree(n, d):
            for s in range(n):
                alpha = _alpha(mus, s, m, k)
                beta = u[s].coefficient(m) - G[s].coefficient(m)
                if not _is_small(alpha, tol):
                    c = beta / alpha
                elif _is_small(beta, tol):
                    c = Fraction(0) if exact else 0 * beta
                    free.append((s, m))
                elif exact:
                    return ObstructionCertificate(
                        degree=d,
                        alpha=alpha,
                        beta=beta,
                        component=s,
                        exponents=m,
                        k=k,
                        branch=branch,
                        root_multipliers=mus,
                        forced_prefix=tuple(prefix),
                        free=tuple(free),
                        germ=u,
                    )
                else:
                    raise FlowError(
                        f"no iterative root of order {k} on branch {branch}: vanishing divisor with "
                        f"nonzero right-hand side at degree {d} (use exact mode for a certificate)"
                    )
                level.append((s, m, c))
        for s, m, c in level:
            if not is_zero(c):
                terms[s][m] = c
        prefix.extend(sorted(level, key=lambda x: x[0]))
    return GermMap(FormalSeries(n, N, t) for t in terms)


# ---------------------------------------------------------------------------
# the (z, zbar) chart


def involution(s: FormalSeries) -> FormalSeries:
    """Conjugate coefficients and swap the exponents of ``z`` and ``zbar``."""
    if s.nvars != 2:
        raise ValueError("the conjugation involution acts on series in (z, zbar)")
    return FormalSeries(2, s.order, {(e[1], e[0]): conj(c) for e, c in s._terms.items()})


def conjugate_pair(first: FormalSeries) -> GermMap:
    """The real germ ``(first, involution(first))`` in the (z, zbar) chart."""
    return GermMap([first, involution(first)])


def is_conjugate_pair(g: GermMap) -> bool:
    return g.nvars == 2 and involution(g[0]) == g[1]


def example2_germ(m: int, order: int | None = None) -> GermMap:
    """Area-preserving germ ``e^{i pi/m} (z + ((z - zbar)/(2i))**(2m+1))`` with its conjugate.

    Exact coefficients lie in a cyclotomic field containing ``zeta_2m`` and ``i``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    N = 2 * m + 1 if order is None else order
    if N < 2 * m + 1:
        raise ValueError(f"order must be at least {2 * m + 1}")
    z = FormalSeries.variable(2, 0, N)
    zb = FormalSeries.variable(2, 1, N)
    w = (z - zb) / (2 * root_of_unity(4))
    first = (z + w ** (2 * m + 1)).scale(root_of_unity(2 * m))
    return conjugate_pair(first)
