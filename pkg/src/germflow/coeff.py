"""Scalar coefficient domains.

Three exact domains and one approximate one are supported:

* ``fractions.Fraction`` (and plain ``int``) for rationals,
* :class:`Cyclotomic` for elements of Q(zeta_k), zeta_k = exp(2*pi*i/k),
* :class:`Radical` for elements of Q(rho**(1/n)) with rho a positive rational,
* :class:`BigComplex` for arbitrary-precision complex floats.

Exact values are always returned in canonical form: an algebraic element whose
value is rational is demoted to a ``Fraction``, so equality of values is
equality of representations. Mixing exact and approximate operands raises
:class:`ModeError`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

import gmpy2

__all__ = [
    "BigComplex",
    "abs_squared_vs_one",
    "Coefficient",
    "Cyclotomic",
    "ModeError",
    "NotRepresentableError",
    "Radical",
    "conj",
    "cyclotomic_polynomial",
    "embed_complex",
    "euler_phi",
    "format_coeff",
    "is_exact",
    "is_zero",
    "kth_roots",
    "polar_decompose",
    "rational_power",
    "root_of_unity",
    "scalar_power",
]

MIN_PRECISION = 64


class ModeError(TypeError):
    """Raised when exact and approximate coefficients are combined."""


class NotRepresentableError(ValueError):
    """Raised when an exact result does not live in any supported exact domain."""


# ---------------------------------------------------------------------------
# polynomials over Q, coefficient lists ordered low -> high


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_divmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = b[-1]
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    for i in range(len(a) - len(b), -1, -1):
        c = r[i + len(b) - 1]
        if c:
            c = Fraction(c) / lead if lead != 1 else c
            q[i] = c
            for j, y in enumerate(b):
                r[i + j] -= c * y
    return _trim(q), _trim(r[: len(b) - 1])


def _poly_inverse_mod(a, m):
    """Inverse of ``a`` modulo the irreducible polynomial ``m``."""
    r0, r1 = _trim(m), _trim(a)
    s0, s1 = [], [Fraction(1)]
    if not r1:
        raise ZeroDivisionError("division by zero in algebraic field")
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        qs = _poly_mul(q, s1)
        s = [0] * max(len(s0), len(qs))
        for i, x in enumerate(s0):
            s[i] += x
        for i, x in enumerate(qs):
            s[i] -= x
        r0, r1 = r1, r
        s0, s1 = s1, _trim(s)
        if not r1:
            raise ZeroDivisionError("element is not invertible modulo the field polynomial")
    c = Fraction(r1[0])
    return [x / c for x in s1]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(k: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the k-th cyclotomic polynomial.

    Computed as ``x**k - 1`` divided by ``Phi_d`` for every proper divisor ``d``.
    """
    if k < 1:
        raise ValueError("cyclotomic_polynomial requires k >= 1")
    num = [-1] + [0] * (k - 1) + [1]
    for d in range(1, k):
        if k % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(int(c) for c in num)


@lru_cache(maxsize=None)
def euler_phi(k: int) -> int:
    return len(cyclotomic_polynomial(k)) - 1


def _reduce_monic(coeffs, modulus):
    """Reduce a coefficient list modulo a monic polynomial."""
    deg = len(modulus) - 1
    r = list(coeffs)
    for i in range(len(r) - 1, deg - 1, -1):
        c = r[i]
        if c:
            base = i - deg
            for j in range(deg):
                m = modulus[j]
                if m:
                    r[base + j] -= c * m
            r[i] = 0
    r = r[:deg]
    r.extend([0] * (deg - len(r)))
    return r


# ---------------------------------------------------------------------------
# algebraic elements


class _Algebraic:
    """Element of Q[x]/(m(x)) for an irreducible monic ``m``; immutable."""

    __slots__ = ("coeffs",)

    # subclass hooks -------------------------------------------------------
    def _modulus(self):
        raise NotImplementedError

    def _same_field(self, other):
        raise NotImplementedError

    def _common(self, other):
        """Lift ``self`` and ``other`` into one field; returns (a, b, builder)."""
        raise NotImplementedError

    def _build(self, coeffs):
        raise NotImplementedError

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return None
        if isinstance(other, BigComplex):
            raise ModeError("cannot combine exact and approximate coefficients")
        if isinstance(other, _Algebraic):
            if type(other) is not type(self):
                raise NotRepresentableError(
                    f"cannot combine {type(self).__name__} and {type(other).__name__} values"
                )
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            c = list(self.coeffs)
            c[0] += other
            return self._build(c)
        a, b, build = self._common(o)
        return build([x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return self._build([-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return self._build([x * other for x in self.coeffs])
        a, b, build = self._common(o)
        mod = a._modulus()
        return build(_reduce_monic(_poly_mul(a.coeffs, b.coeffs), mod))

    __rmul__ = __mul__

    def inverse(self):
        mod = self._modulus()
        inv = _poly_inverse_mod(list(self.coeffs), list(mod))
        return self._build(_reduce_monic(inv, mod))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            if other == 0:
                raise ZeroDivisionError("division by zero coefficient")
            return self._build([x / Fraction(other) for x in self.coeffs])
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.inverse() * other

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result: Coefficient = Fraction(1)
        base: Coefficient = self
        while e:
            if e & 1:
                result = base * result
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            # arithmetic results are demoted, but the public constructors are not
            return _trim(list(self.coeffs)) == _trim([Fraction(other)])
        if isinstance(other, BigComplex):
            raise ModeError("exact and approximate coefficients are not comparable")
        if isinstance(other, _Algebraic):
            if type(other) is not type(self):
                return False
            a, b, _ = self._common(other)
            return a.coeffs == b.coeffs
        return NotImplemented

    __hash__ = None  # equality crosses conductors; no cheap canonical hash

    def __bool__(self):
        return any(self.coeffs)

    def __str__(self):
        return format_coeff(self)


class Cyclotomic(_Algebraic):
    """Element of the cyclotomic field Q(zeta_k) in the power basis.

    Coefficients are reduced modulo the k-th cyclotomic polynomial, so two
    elements of the same conductor are equal iff their coefficient tuples are.
    Use :func:`root_of_unity` or arithmetic on existing values rather than the
    constructor; arithmetic results with rational value are demoted to
    ``Fraction``.
    """

    __slots__ = ("conductor",)

    def __init__(self, conductor: int, coeffs):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        mod = cyclotomic_polynomial(conductor)
        self.conductor = conductor
        self.coeffs = tuple(Fraction(c) for c in _reduce_monic(list(coeffs), mod))

    @classmethod
    def _raw(cls, conductor, coeffs):
        obj = object.__new__(cls)
        obj.conductor = conductor
        obj.coeffs = tuple(coeffs)
        return obj

    def _modulus(self):
        return cyclotomic_polynomial(self.conductor)

    def _build(self, coeffs):
        return _make_cyclotomic(self.conductor, coeffs)

    def lift(self, k: int) -> "Cyclotomic":
        """Same value written over Q(zeta_k); ``k`` must be a multiple of the conductor."""
        if k % self.conductor:
            raise ValueError(f"cannot lift conductor {self.conductor} to {k}")
        if k == self.conductor:
            return self
        step = k // self.conductor
        c = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for i, x in enumerate(self.coeffs):
            c[i * step] = x
        return Cyclotomic._raw(k, _reduce_monic(c, cyclotomic_polynomial(k)))

    def _common(self, other):
        if other.conductor == self.conductor:
            return self, other, self._build
        k = math.lcm(self.conductor, other.conductor)
        return self.lift(k), other.lift(k), lambda c: _make_cyclotomic(k, c)

    def conjugate(self):
        """Complex conjugate, the Galois map zeta -> zeta**(k-1)."""
        k = self.conductor
        c = [Fraction(0)] * k
        for i, x in enumerate(self.coeffs):
            c[(-i) % k] += x
        return _make_cyclotomic(k, _reduce_monic(c, cyclotomic_polynomial(k)))

    def __repr__(self):
        return f"Cyclotomic({self.conductor}, {[str(c) for c in self.coeffs]})"


def _make_cyclotomic(k, coeffs):
    coeffs = [Fraction(c) for c in coeffs]
    if not any(coeffs[1:]):
        return coeffs[0] if coeffs else Fraction(0)
    return Cyclotomic._raw(k, coeffs)


def _perfect_power_base(r: Fraction) -> tuple[Fraction, int]:
    """Write positive ``r`` as ``base**e`` with ``e`` maximal."""
    if r <= 0:
        raise ValueError("perfect power decomposition needs a positive rational")
    total = 1
    p, q = r.numerator, r.denominator
    changed = True
    while changed:
        changed = False
        bound = max(p.bit_length(), q.bit_length(), 2)
        for e in range(2, bound + 1):
            if not _is_prime_small(e):
                continue
            rp, okp = gmpy2.iroot(p, e)
            if not okp:
                continue
            rq, okq = gmpy2.iroot(q, e)
            if okq:
                p, q = int(rp), int(rq)
                total *= e
                changed = True
                break
        if p == 1 and q == 1:
            break
    return Fraction(p, q), total


def _is_prime_small(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


class Radical(_Algebraic):
    """Element of Q(alpha), alpha = rho**(1/n) the positive real root.

    ``rho`` is kept free of perfect powers, which makes ``x**n - rho``
    irreducible; fields with the same ``rho`` nest by divisibility of ``n``.
    """

    __slots__ = ("rho", "n")

    @classmethod
    def _raw(cls, rho, n, coeffs):
        obj = object.__new__(cls)
        obj.rho = rho
        obj.n = n
        obj.coeffs = tuple(coeffs)
        return obj

    @classmethod
    def generator(cls, rho: Fraction, n: int):
        """The positive real ``n``-th root of ``rho`` (``rho`` not a perfect power)."""
        return _make_radical(rho, n, [Fraction(0), Fraction(1)] + [Fraction(0)] * (n - 2))

    def _modulus(self):
        return _radical_modulus(self.rho, self.n)

    def _build(self, coeffs):
        return _make_radical(self.rho, self.n, coeffs)

    def lift(self, n: int) -> "Radical":
        if n % self.n:
            raise ValueError(f"cannot lift degree {self.n} to {n}")
        step = n // self.n
        c = [Fraction(0)] * n
        for i, x in enumerate(self.coeffs):
            c[i * step] = x
        return Radical._raw(self.rho, n, c)

    def _common(self, other):
        if other.rho != self.rho:
            raise NotRepresentableError(
                f"values from Q({self.rho}^(1/{self.n})) and Q({other.rho}^(1/{other.n})) "
                "do not share a supported field"
            )
        if other.n == self.n:
            return self, other, self._build
        n = math.lcm(self.n, other.n)
        return self.lift(n), other.lift(n), lambda c: _make_radical(self.rho, n, c)

    def conjugate(self):
        return self  # real field

    def __repr__(self):
        return f"Radical({self.rho}, {self.n}, {[str(c) for c in self.coeffs]})"


@lru_cache(maxsize=None)
def _radical_modulus(rho, n):
    return (-rho,) + (0,) * (n - 1) + (1,)


def _make_radical(rho, n, coeffs):
    coeffs = [Fraction(c) for c in coeffs]
    coeffs.extend([Fraction(0)] * (n - len(coeffs)))
    if not any(coeffs[1:]):
        return coeffs[0]
    # shrink to the smallest subfield Q(rho^(1/d)) holding the value
    nz = [i for i, c in enumerate(coeffs) if c]
    g = n
    for i in nz:
        g = math.gcd(g, i)
    if g > 1:
        coeffs = coeffs[::g]
        n //= g
    return Radical._raw(rho, n, coeffs)


# ---------------------------------------------------------------------------
# approximate complex numbers


class BigComplex:
    """Arbitrary-precision complex float with explicit precision in bits.

    Results carry the larger operand precision. Only tolerance comparison is
    supported; ``==`` raises.
    """

    __slots__ = ("value", "prec")

    def __init__(self, re=0, im=0, prec: int = 256):
        if prec < MIN_PRECISION:
            raise ValueError(f"precision must be at least {MIN_PRECISION} bits")
        with gmpy2.context(precision=prec):
            self.value = gmpy2.mpc(gmpy2.mpfr(re), gmpy2.mpfr(im))
        self.prec = prec

    @classmethod
    def _raw(cls, value, prec):
        obj = object.__new__(cls)
        obj.value = value
        obj.prec = prec
        return obj

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag

    def __abs__(self):
        with gmpy2.context(precision=self.prec):
            return abs(self.value)

    def _other(self, other):
        if isinstance(other, BigComplex):
            return other
        if isinstance(other, (int, float, complex)):
            with gmpy2.context(precision=self.prec):
                return BigComplex._raw(gmpy2.mpc(other), self.prec)
        if isinstance(other, (Fraction, _Algebraic)):
            raise ModeError("cannot combine exact and approximate coefficients")
        return NotImplemented

    def _op(self, other, fn):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        prec = max(self.prec, o.prec)
        with gmpy2.context(precision=prec):
            return BigComplex._raw(fn(self.value, o.value), prec)

    def __add__(self, other):
        return self._op(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._op(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._op(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._op(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        if o.value == 0:
            raise ZeroDivisionError("division by zero coefficient")
        return self._op(o, lambda a, b: a / b)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __neg__(self):
        with gmpy2.context(precision=self.prec):
            return BigComplex._raw(-self.value, self.prec)

    def __pow__(self, e):
        if isinstance(e, int):
            if e < 0:
                return 1 / (self ** (-e))
            with gmpy2.context(precision=self.prec):
                return BigComplex._raw(self.value**e, self.prec)
        o = self._other(e)
        if o is NotImplemented:
            return NotImplemented
        return self._op(o, lambda a, b: a**b)

    def __eq__(self, other):
        raise ModeError("approximate coefficients support only tolerance comparison (use isclose)")

    __hash__ = None

    def __bool__(self):
        return self.value != 0

    def isclose(self, other, tol) -> bool:
        return abs(self - other) <= tol

    def conjugate(self):
        with gmpy2.context(precision=self.prec):
            return BigComplex._raw(self.value.conjugate(), self.prec)

    def log(self):
        with gmpy2.context(precision=self.prec):
            return BigComplex._raw(gmpy2.log(self.value), self.prec)

    def exp(self):
        with gmpy2.context(precision=self.prec):
            return BigComplex._raw(gmpy2.exp(self.value), self.prec)

    def __repr__(self):
        return f"BigComplex({format_coeff(self)}, prec={self.prec})"

    __str__ = __repr__


Coefficient = Union[int, Fraction, Cyclotomic, Radical, BigComplex]


# ---------------------------------------------------------------------------
# helpers over the union


def is_exact(c) -> bool:
    if isinstance(c, BigComplex):
        return False
    if isinstance(c, (int, Fraction, _Algebraic)):
        return True
    raise TypeError(f"not a coefficient: {c!r}")


def is_zero(c) -> bool:
    """Exact zero test; for approximate values, true only for an exact 0."""
    if isinstance(c, BigComplex):
        return c.value == 0
    if isinstance(c, _Algebraic):
        return not any(c.coeffs)
    return c == 0


def conj(c):
    if isinstance(c, (int, Fraction)):
        return c
    return c.conjugate()


def root_of_unity(k: int, j: int = 1):
    """Exact ``exp(2*pi*i*j/k)``."""
    if k < 1:
        raise ValueError("root_of_unity requires k >= 1")
    j %= k
    c = [0] * (j + 1)
    c[j] = 1
    return _make_cyclotomic(k, _reduce_monic(c, cyclotomic_polynomial(k)))


def embed_complex(c, prec: int = 256) -> BigComplex:
    """Complex value of an exact coefficient at ``prec`` bits."""
    if prec < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits")
    if isinstance(c, BigComplex):
        if c.prec >= prec:
            return c
        with gmpy2.context(precision=prec):
            return BigComplex._raw(gmpy2.mpc(c.value), prec)
    work = prec + 32
    with gmpy2.context(precision=work):
        if isinstance(c, (int, Fraction)):
            c = Fraction(c)
            v = gmpy2.mpc(gmpy2.mpfr(c.numerator) / c.denominator)
        elif isinstance(c, Cyclotomic):
            two_pi = 2 * gmpy2.const_pi()
            k = c.conductor
            v = gmpy2.mpc(0)
            for i, x in enumerate(c.coeffs):
                if x:
                    ang = two_pi * i / k
                    v += (gmpy2.mpfr(x.numerator) / x.denominator) * gmpy2.mpc(
                        gmpy2.cos(ang), gmpy2.sin(ang)
                    )
        elif isinstance(c, Radical):
            alpha = gmpy2.root(gmpy2.mpfr(c.rho.numerator) / c.rho.denominator, c.n)
            v = gmpy2.mpfr(0)
            p = gmpy2.mpfr(1)
            for x in c.coeffs:
                if x:
                    v += (gmpy2.mpfr(x.numerator) / x.denominator) * p
                p *= alpha
            v = gmpy2.mpc(v)
        else:
            raise TypeError(f"not a coefficient: {c!r}")
    with gmpy2.context(precision=prec):
        return BigComplex._raw(gmpy2.mpc(v), prec)


def abs_squared_vs_one(c) -> int:
    """Sign of ``|c|**2 - 1``, decided exactly when it vanishes."""
    if isinstance(c, BigComplex):
        with gmpy2.context(precision=c.prec):
            d = gmpy2.norm(c.value) - 1
        return (d > 0) - (d < 0)
    s = c * conj(c) - 1
    if is_zero(s):
        return 0
    prec = 128
    while True:
        v = embed_complex(s, prec).real
        if abs(v) > gmpy2.mpfr(2) ** (16 - prec):
            return 1 if v > 0 else -1
        prec *= 2


# ---------------------------------------------------------------------------
# roots and powers


def rational_power(r: Fraction, t: Fraction):
    """Positive real ``r**t`` for positive rational ``r`` and rational ``t``, exactly."""
    r = Fraction(r)
    t = Fraction(t)
    if r <= 0:
        raise NotRepresentableError("rational_power needs a positive base")
    if t.denominator == 1 or r == 1:
        return r ** t.numerator if t.denominator == 1 else r
    base, e = _perfect_power_base(r)
    # r**t = base**(e*t)
    et = e * t
    whole, frac_num = divmod(et.numerator, et.denominator)
    n = et.denominator
    g = math.gcd(frac_num, n)
    frac_num //= g
    n //= g
    out = base**whole
    if frac_num == 0:
        return out
    alpha = Radical.generator(base, n)
    return alpha**frac_num * out


def polar_decompose(c):
    """Write an exact coefficient as ``r * zeta_N**a`` with ``r > 0`` rational.

    Returns ``(r, N, a)`` with ``-N/2 < a <= N/2`` or ``None`` when no such
    form exists.
    """
    if isinstance(c, (int, Fraction)):
        c = Fraction(c)
        if c == 0:
            return None
        return (c, 1, 0) if c > 0 else (-c, 2, 1)
    if isinstance(c, Cyclotomic):
        N = math.lcm(2, c.conductor)
        for a in range(-(N // 2) + 1, N // 2 + 1):
            q = c * root_of_unity(N, -a)
            if isinstance(q, Fraction) and q > 0:
                g = math.gcd(a, N)
                return q, N // g, a // g
        return None
    return None


def scalar_power(c, t):
    """Principal power ``c**t`` for exact ``c`` and rational ``t``.

    Raises :class:`NotRepresentableError` when the value leaves the supported
    exact domains.
    """
    t = Fraction(t)
    if t.denominator == 1:
        return c ** t.numerator
    if isinstance(c, Radical):
        if not any(c.coeffs[:1] + c.coeffs[2:]) and c.coeffs[1] > 0:
            # c = s * rho**(1/n) with s > 0
            return rational_power(c.coeffs[1], t) * rational_power(c.rho, t / c.n)
        raise NotRepresentableError(f"no exact form for ({format_coeff(c)})^({t})")
    pd = polar_decompose(c)
    if pd is None:
        raise NotRepresentableError(f"no exact form for ({format_coeff(c)})^({t})")
    r, N, a = pd
    rt = rational_power(r, t)
    if a == 0:
        return rt
    if isinstance(rt, Radical):
        raise NotRepresentableError(
            f"({format_coeff(c)})^({t}) mixes a real radical with a root of unity"
        )
    # zeta_N**(a*t) = zeta_(N*den)**(a*num)
    return rt * root_of_unity(N * t.denominator, a * t.numerator)


def kth_roots(c, k: int) -> list:
    """All ``k`` exact ``k``-th roots of ``c``; index 0 is the principal root.

    Root ``j`` is the principal root times ``zeta_k**j``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    principal = scalar_power(c, Fraction(1, k))
    out = []
    for j in range(k):
        w = root_of_unity(k, j)
        if isinstance(principal, Radical) and isinstance(w, Cyclotomic):
            raise NotRepresentableError(
                f"root {j} of order {k} of {format_coeff(c)} mixes a real radical with a root of unity"
            )
        out.append(principal * w)
    return out


# ---------------------------------------------------------------------------
# text form


def _fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_poly(coeffs, gen: str) -> str:
    parts = []
    for i, x in enumerate(coeffs):
        if not x:
            continue
        mono = "" if i == 0 else (gen if i == 1 else f"{gen}^{i}")
        mag = abs(x)
        if not mono:
            body = _fmt_fraction(mag)
        elif mag == 1:
            body = mono
        elif mag.denominator == 1:
            body = f"{mag.numerator}*{mono}"
        elif mag.numerator == 1:
            body = f"{mono}/{mag.denominator}"
        else:
            body = f"{mag.numerator}*{mono}/{mag.denominator}"
        if not parts:
            parts.append(("-" if x < 0 else "") + body)
        else:
            parts.append((" - " if x < 0 else " + ") + body)
    return "".join(parts) if parts else "0"


def format_coeff(c, digits: int | None = None) -> str:
    """Text form: ``p/q``, polynomials in ``zeta(k)`` or ``root(n, r)``, ``(re,im)``."""
    if isinstance(c, bool):
        c = int(c)
    if isinstance(c, (int, Fraction)):
        return _fmt_fraction(Fraction(c))
    if isinstance(c, Cyclotomic):
        return _fmt_poly(c.coeffs, f"zeta({c.conductor})")
    if isinstance(c, Radical):
        return _fmt_poly(c.coeffs, f"root({c.n}, {_fmt_fraction(c.rho)})")
    if isinstance(c, BigComplex):
        if digits is None:
            digits = max(int(c.prec * 0.30103), 17)
        return f"({_fmt_mpfr(c.real, digits)},{_fmt_mpfr(c.imag, digits)})"
    raise TypeError(f"not a coefficient: {c!r}")


def _fmt_mpfr(x, digits):
    return f"{x:.{digits}g}"
