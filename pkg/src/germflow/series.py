"""Truncated multivariate formal power series and germs built from them.

A :class:`FormalSeries` stores its terms sparsely, keyed by exponent tuples,
and carries an explicit truncation order: every term of total degree above
the order is discarded, so two series computed to the same order compare
exactly. :class:`GermMap` and :class:`VectorFieldGerm` are n-tuples of
series in n variables with zero constant terms.
"""
from __future__ import annotations

import operator
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .coeff import ModeError, format_coeff, is_exact, is_zero
from .matrix import SquareMatrix

__all__ = [
    "FormalSeries",
    "GermMap",
    "VectorFieldGerm",
    "apply_linear",
    "compose",
    "compose_power",
    "compositional_inverse",
    "default_names",
    "monomials_of_degree",
    "substitute",
]

Exponents = tuple


def _sort_key(e):
    return (sum(e), tuple(-x for x in e))


def _normalize(c):
    if isinstance(c, bool):
        c = int(c)
    if isinstance(c, int):
        return Fraction(c)
    return c


def monomials_of_degree(nvars: int, d: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree ``d``, in the series term order."""
    if nvars == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - first):
            out.append((first,) + rest)
    return out


def default_names(nvars: int) -> list[str]:
    return ["z"] if nvars == 1 else [f"x{i + 1}" for i in range(nvars)]


class FormalSeries:
    """Truncated power series in ``nvars`` variables.

    Parameters
    ----------
    nvars : int
        Number of variables.
    order : int
        Truncation order; terms of total degree above it are dropped.
    terms : mapping, optional
        Exponent tuple -> coefficient. Zero coefficients are dropped.

    All coefficients must share one arithmetic mode (exact or approximate).
    """

    __slots__ = ("nvars", "order", "_terms", "_sorted")

    def __init__(self, nvars: int, order: int, terms: Mapping | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        if order < 0:
            raise ValueError("order must be non-negative")
        clean = {}
        mode = None
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent tuple {e} for {nvars} variables")
            if sum(e) > order:
                continue
            c = _normalize(c)
            if is_zero(c):
                continue
            m = is_exact(c)
            if mode is None:
                mode = m
            elif mode != m:
                raise ModeError("series mixes exact and approximate coefficients")
            clean[e] = clean[e] + c if e in clean else c
        self.nvars = nvars
        self.order = order
        self._terms = {e: c for e, c in clean.items() if not is_zero(c)}
        self._sorted = None

    @classmethod
    def _raw(cls, nvars, order, terms):
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.order = order
        obj._terms = terms
        obj._sorted = None
        return obj

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, order: int) -> "FormalSeries":
        return cls._raw(nvars, order, {})

    @classmethod
    def constant(cls, nvars: int, order: int, c) -> "FormalSeries":
        return cls(nvars, order, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, index: int, order: int, one=1) -> "FormalSeries":
        e = [0] * nvars
        e[index] = 1
        return cls(nvars, order, {tuple(e): one})

    @classmethod
    def from_coefficients(cls, coeffs: Sequence, order: int | None = None) -> "FormalSeries":
        """One-variable series ``sum coeffs[i] * z**i``."""
        order = len(coeffs) - 1 if order is None else order
        return cls(1, order, {(i,): c for i, c in enumerate(coeffs)})

    # inspection -----------------------------------------------------------
    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def _items(self):
        if self._sorted is None:
            self._sorted = [
                (sum(e), e, self._terms[e]) for e in sorted(self._terms, key=_sort_key)
            ]
        return self._sorted

    def items(self) -> list:
        """Terms as ``(exponents, coefficient)`` pairs in deterministic order."""
        return [(e, c) for _, e, c in self._items()]

    def coefficient(self, exps) -> object:
        return self._terms.get(tuple(exps), 0)

    def __getitem__(self, exps):
        if isinstance(exps, int):
            exps = (exps,)
        return self.coefficient(exps)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def exact(self) -> bool | None:
        """True/False for exact/approximate coefficients; None for the zero series."""
        for c in self._terms.values():
            return is_exact(c)
        return None

    def valuation(self) -> int | None:
        items = self._items()
        return items[0][0] if items else None

    def degree_part(self, d: int) -> "FormalSeries":
        return FormalSeries._raw(
            self.nvars, self.order, {e: c for e, c in self._terms.items() if sum(e) == d}
        )

    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "FormalSeries"):
        if not isinstance(other, FormalSeries):
            raise TypeError(f"expected FormalSeries, got {type(other).__name__}")
        if other.nvars != self.nvars:
            raise ValueError(f"arity mismatch: {self.nvars} vs {other.nvars} variables")
        a, b = self.exact, other.exact
        if a is not None and b is not None and a != b:
            raise ModeError("cannot combine exact and approximate series")

    def __add__(self, other):
        if not isinstance(other, FormalSeries):
            return self + FormalSeries.constant(self.nvars, self.order, other)
        self._check(other)
        order = min(self.order, other.order)
        out = {e: c for e, c in self._terms.items() if sum(e) <= order}
        for e, c in other._terms.items():
            if sum(e) > order:
                continue
            if e in out:
                s = out[e] + c
                if is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return FormalSeries._raw(self.nvars, order, out)

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries._raw(self.nvars, self.order, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "FormalSeries":
        c = _normalize(c)
        if is_zero(c):
            return FormalSeries.zero(self.nvars, self.order)
        out = {}
        for e, x in self._terms.items():
            y = x * c
            if not is_zero(y):
                out[e] = y
        return FormalSeries._raw(self.nvars, self.order, out)

    def __mul__(self, other):
        if isinstance(other, FormalSeries):
            self._check(other)
            return _mul(self, other, min(self.order, other.order))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        if isinstance(c, FormalSeries):
            raise TypeError("series division is only defined by a scalar")
        c = _normalize(c)
        if is_zero(c):
            raise ZeroDivisionError("division of a series by zero")
        return self.scale(1 / c)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("series powers need a non-negative integer exponent")
        result = FormalSeries.constant(self.nvars, self.order, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def truncate(self, order: int) -> "FormalSeries":
        """Drop terms above ``order``; the order never increases."""
        order = min(order, self.order)
        return FormalSeries._raw(
            self.nvars, order, {e: c for e, c in self._terms.items() if sum(e) <= order}
        )

    def derive(self, var: int) -> "FormalSeries":
        """Partial derivative in variable ``var``; the order drops by one."""
        if not 0 <= var < self.nvars:
            raise IndexError(f"variable index {var} out of range")
        out = {}
        for e, c in self._terms.items():
            k = e[var]
            if k:
                f = list(e)
                f[var] = k - 1
                out[tuple(f)] = c * k
        return FormalSeries._raw(self.nvars, max(self.order - 1, 0), out)

    def map_coefficients(self, fn) -> "FormalSeries":
        return FormalSeries(self.nvars, self.order, {e: fn(c) for e, c in self._terms.items()})

    def permute_variables(self, perm: Sequence[int]) -> "FormalSeries":
        """Rename variable ``i`` to ``perm[i]``."""
        out = {}
        for e, c in self._terms.items():
            f = [0] * self.nvars
            for i, k in enumerate(e):
                f[perm[i]] = k
            out[tuple(f)] = c
        return FormalSeries._raw(self.nvars, self.order, out)

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        if self.nvars != other.nvars or self.order != other.order:
            return False
        if self._terms.keys() != other._terms.keys():
            return False
        return all(c == other._terms[e] for e, c in self._terms.items())

    __hash__ = None

    # text -----------------------------------------------------------------
    def render(self, names: Sequence[str] | None = None) -> str:
        names = list(names or default_names(self.nvars))
        parts = []
        for e, c in self.items():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            sign, body = _split_sign(c)
            if mono:
                if body == "1":
                    body = mono
                else:
                    body = f"{body}*{mono}"
            if not parts:
                parts.append(("-" if sign else "") + body)
            else:
                parts.append((" - " if sign else " + ") + body)
        return "".join(parts) if parts else "0"

    def to_json(self) -> list[dict]:
        return [{"exponents": list(e), "coeff": format_coeff(c)} for e, c in self.items()]

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"FormalSeries({self.render()!r}, nvars={self.nvars}, order={self.order})"


def _split_sign(c):
    """(is_negative, text) with parentheses around compound coefficients."""
    if isinstance(c, Fraction):
        return c < 0, format_coeff(abs(c))
    text = format_coeff(c)
    if text.startswith("(") or (" + " not in text and " - " not in text):
        if text.startswith("-") and not text.startswith("("):
            return True, text[1:]
        return False, text
    return False, f"({text})"


def _mul(a: FormalSeries, b: FormalSeries, order: int) -> FormalSeries:
    out: dict = {}
    get = out.get
    bi = b._items()
    n = a.nvars
    for da, ea, ca in a._items():
        lim = order - da
        if lim < 0:
            break
        for db, eb, cb in bi:
            if db > lim:
                break
            if n == 1:
                key = (ea[0] + eb[0],)
            elif n == 2:
                key = (ea[0] + eb[0], ea[1] + eb[1])
            else:
                key = tuple(map(operator.add, ea, eb))
            prev = get(key)
            out[key] = ca * cb if prev is None else prev + ca * cb
    return FormalSeries._raw(n, order, {e: c for e, c in out.items() if not is_zero(c)})


# ---------------------------------------------------------------------------
# germs


class _SeriesTuple:
    __slots__ = ("components",)

    _what = "map"

    def __init__(self, components: Iterable[FormalSeries]):
        comps = tuple(components)
        n = len(comps)
        if n == 0:
            raise ValueError(f"a {self._what} needs at least one component")
        orders = {c.order for c in comps}
        for c in comps:
            if not isinstance(c, FormalSeries):
                raise TypeError("components must be FormalSeries")
            if c.nvars != n:
                raise ValueError(f"{n} components need series in {n} variables, got {c.nvars}")
            if not is_zero(c.constant_term()):
                raise ValueError(f"a {self._what} must vanish at the origin (nonzero constant term)")
        if len(orders) > 1:
            m = min(orders)
            comps = tuple(c.truncate(m) for c in comps)
        modes = {c.exact for c in comps} - {None}
        if len(modes) > 1:
            raise ModeError(f"{self._what} mixes exact and approximate components")
        self.components = comps

    @classmethod
    def _raw(cls, comps):
        obj = object.__new__(cls)
        obj.components = tuple(comps)
        return obj

    @property
    def nvars(self) -> int:
        return len(self.components)

    @property
    def order(self) -> int:
        return self.components[0].order

    @property
    def exact(self) -> bool | None:
        modes = {c.exact for c in self.components} - {None}
        return modes.pop() if modes else None

    def __getitem__(self, i) -> FormalSeries:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def linear_part(self) -> SquareMatrix:
        """Matrix of degree-one coefficients: entry (i, j) is d(comp_i)/d(x_j) at 0."""
        n = self.nvars
        rows = []
        for c in self.components:
            row = []
            for j in range(n):
                e = [0] * n
                e[j] = 1
                row.append(c.coefficient(tuple(e)))
            rows.append(row)
        return SquareMatrix(rows)

    def nonlinear_part(self):
        return type(self)._raw(
            FormalSeries._raw(c.nvars, c.order, {e: x for e, x in c._terms.items() if sum(e) >= 2})
            for c in self.components
        )

    def truncate(self, order: int):
        return type(self)._raw(c.truncate(order) for c in self.components)

    def map_coefficients(self, fn):
        return type(self)(c.map_coefficients(fn) for c in self.components)

    def degree_part(self, d: int):
        return type(self)._raw(c.degree_part(d) for c in self.components)

    def _check_pair(self, other):
        if not isinstance(other, _SeriesTuple) or other.nvars != self.nvars:
            raise ValueError("arity mismatch")

    def __add__(self, other):
        self._check_pair(other)
        return type(self)(a + b for a, b in zip(self.components, other.components))

    def __sub__(self, other):
        self._check_pair(other)
        return type(self)(a - b for a, b in zip(self.components, other.components))

    def __neg__(self):
        return type(self)._raw(-c for c in self.components)

    def scale(self, c):
        return type(self)._raw(x.scale(c) for x in self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, _SeriesTuple):
            return NotImplemented
        return self.components == other.components

    __hash__ = None

    def render(self, names: Sequence[str] | None = None) -> str:
        parts = [c.render(names) for c in self.components]
        return parts[0] if len(parts) == 1 else "(" + ", ".join(parts) + ")"

    def to_json(self) -> list[list[dict]]:
        return [c.to_json() for c in self.components]

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"{type(self).__name__}({self.render()!r}, order={self.order})"


class GermMap(_SeriesTuple):
    """Formal diffeomorphism germ fixing the origin (n series in n variables)."""

    __slots__ = ()
    _what = "germ"

    @classmethod
    def identity(cls, n: int, order: int, one=1) -> "GermMap":
        return cls(FormalSeries.variable(n, i, order, one) for i in range(n))

    @classmethod
    def linear(cls, matrix: SquareMatrix, order: int) -> "GermMap":
        n = matrix.n
        comps = []
        for i in range(n):
            terms = {}
            for j in range(n):
                e = [0] * n
                e[j] = 1
                terms[tuple(e)] = matrix[i, j]
            comps.append(FormalSeries(n, order, terms))
        return cls(comps)

    @classmethod
    def from_series(cls, *series: FormalSeries) -> "GermMap":
        return cls(series)


class VectorFieldGerm(_SeriesTuple):
    """Formal vector field vanishing at the origin."""

    __slots__ = ()
    _what = "vector field"

    @classmethod
    def zero(cls, n: int, order: int) -> "VectorFieldGerm":
        return cls(FormalSeries.zero(n, order) for _ in range(n))


# ---------------------------------------------------------------------------
# composition


def substitute(outers: Sequence[FormalSeries], inner: Sequence[FormalSeries], order: int):
    """Evaluate each series of ``outers`` at the tuple ``inner`` (no constant terms).

    Monomials of the inner germ are built once, each from a smaller cached
    monomial times one component, and every product is capped at ``order``.
    """
    n = len(inner)
    zero = (0,) * n
    cache: dict = {}
    inner = [c.truncate(order) for c in inner]

    def mono(e):
        got = cache.get(e)
        if got is not None:
            return got
        i = next(k for k in range(n) if e[k])
        f = list(e)
        f[i] -= 1
        f = tuple(f)
        got = inner[i] if f == zero else _mul(mono(f), inner[i], order)
        cache[e] = got
        return got

    results = []
    for s in outers:
        if s.nvars != n:
            raise ValueError(f"series in {s.nvars} variables evaluated at {n} components")
        acc: dict = {}
        for d, e, c in s._items():
            if d > order:
                break
            if d == 0:
                acc[zero] = c
                continue
            for k, x in mono(e)._terms.items():
                prev = acc.get(k)
                acc[k] = c * x if prev is None else prev + c * x
        results.append(
            FormalSeries._raw(n, order, {k: v for k, v in acc.items() if not is_zero(v)})
        )
    return results


def _check_inner(inner):
    for c in inner.components:
        if not is_zero(c.constant_term()):
            raise ValueError("inner germ must have zero constant terms")


def compose(outer: GermMap, inner: GermMap) -> GermMap:
    """``outer o inner`` truncated to the smaller of the two orders."""
    if outer.nvars != inner.nvars:
        raise ValueError("arity mismatch in composition")
    _check_inner(inner)
    a, b = outer.exact, inner.exact
    if a is not None and b is not None and a != b:
        raise ModeError("cannot compose exact and approximate germs")
    order = min(outer.order, inner.order)
    return type(outer)._raw(substitute(outer.components, inner.components, order))


def compose_power(g: GermMap, k: int, order: int | None = None) -> GermMap:
    """``g`` composed with itself ``k`` times (``k >= 1``)."""
    if k < 1:
        raise ValueError("compose_power needs k >= 1")
    if order is not None:
        g = g.truncate(order)
    result = g
    for _ in range(k - 1):
        result = compose(g, result)
    return result


def apply_linear(matrix: SquareMatrix, g: _SeriesTuple):
    """The germ ``x -> matrix . g(x)``."""
    comps = []
    for i in range(matrix.n):
        acc = FormalSeries.zero(g.nvars, g.order)
        for j in range(matrix.n):
            a = matrix[i, j]
            if not is_zero(a):
                acc = acc + g.components[j].scale(a)
        comps.append(acc)
    return type(g)._raw(comps)


def compositional_inverse(u: GermMap) -> GermMap:
    """Formal inverse germ, from the fixed point ``v = A^-1 (x - h(v))``.

    Each pass fixes one more degree, so pass ``d`` only needs order ``d``.
    """
    A = u.linear_part()
    try:
        Ainv = A.inverse()
    except ZeroDivisionError:
        raise ValueError("linear part is singular; germ is not invertible") from None
    n, N = u.nvars, u.order
    one = Fraction(1) if u.exact is not False else _float_one(u)
    h = u.nonlinear_part()
    v = apply_linear(Ainv, GermMap.identity(n, N, one))
    for d in range(2, N + 1):
        vd = v.truncate(d)
        hv = compose(h.truncate(d), vd)
        x = GermMap.identity(n, d, one)
        v_new = apply_linear(Ainv, x - hv)
        v = GermMap._raw(
            [
                FormalSeries._raw(
                    n, N, {**{e: c for e, c in old._terms.items() if sum(e) != d}, **new.degree_part(d)._terms}
                )
                for old, new in zip(v.components, v_new.components)
            ]
        )
    return v


def _float_one(u):
    for c in u.components:
        for x in c._terms.values():
            return x / x
    raise ValueError("empty germ")
