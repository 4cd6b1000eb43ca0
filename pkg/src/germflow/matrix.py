"""Small dense square matrices over the coefficient domains."""
from __future__ import annotations

from fractions import Fraction

import gmpy2

from .coeff import BigComplex, conj, embed_complex, format_coeff, is_exact, is_zero


class SquareMatrix:
    """Immutable n x n matrix, entries stored row-major as coefficients."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and non-empty")
        self.rows = rows

    @classmethod
    def identity(cls, n: int, one=1):
        return cls([[one if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, values):
        values = list(values)
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for r in self.rows:
            yield from r

    def is_exact(self) -> bool:
        return all(is_exact(x) for x in self.entries())

    def __add__(self, other):
        return SquareMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return SquareMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return SquareMatrix([[-a for a in r] for r in self.rows])

    def scale(self, c):
        return SquareMatrix([[c * a for a in r] for r in self.rows])

    def __matmul__(self, other):
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for col in cols:
                acc = 0
                for a, b in zip(r, col):
                    if not is_zero(a) and not is_zero(b):
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return SquareMatrix(out)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = SquareMatrix.identity(self.n)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.n == other.n and all(a == b for a, b in zip(self.entries(), other.entries()))

    __hash__ = None

    def is_diagonal(self, tol=None) -> bool:
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if i != j and not _negligible(a, tol):
                    return False
        return True

    def diagonal(self) -> list:
        return [self.rows[i][i] for i in range(self.n)]

    def to_complex(self, prec: int) -> "SquareMatrix":
        return SquareMatrix([[embed_complex(a, prec) for a in r] for r in self.rows])

    def frobenius_squared(self):
        """Exact (or approximate) sum of |a_ij|**2."""
        acc = 0
        for a in self.entries():
            if isinstance(a, BigComplex):
                with gmpy2.context(precision=a.prec):
                    acc = acc + BigComplex._raw(gmpy2.mpc(gmpy2.norm(a.value)), a.prec)
            elif not is_zero(a):
                acc = acc + a * conj(a)
        return acc

    def frobenius_norm(self, prec: int = 256):
        """Real Frobenius norm as an ``mpfr`` at ``prec`` bits."""
        s = embed_complex(self.frobenius_squared(), prec)
        with gmpy2.context(precision=prec):
            return gmpy2.sqrt(abs(s.value.real))

    def inverse(self) -> "SquareMatrix":
        """Gauss-Jordan inverse; exact or partially pivoted in float mode."""
        n = self.n
        exact = self.is_exact()
        a = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            if exact:
                piv = next((r for r in range(col, n) if not is_zero(a[r][col])), None)
            else:
                cands = [(abs(_as_big(a[r][col])), r) for r in range(col, n)]
                best = max(cands, key=lambda t: t[0])
                piv = best[1] if best[0] > 0 else None
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            a[col], a[piv] = a[piv], a[col]
            p = a[col][col]
            if isinstance(p, int):
                p = Fraction(p)
            a[col] = [x / p for x in a[col]]
            for r in range(n):
                if r != col and not is_zero(a[r][col]):
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return SquareMatrix([r[n:] for r in a])

    def to_json(self):
        return [[format_coeff(a) for a in r] for r in self.rows]

    def __repr__(self):
        return f"SquareMatrix({self.to_json()})"


def _as_big(a):
    return a if isinstance(a, BigComplex) else embed_complex(a, 64)


def _negligible(a, tol) -> bool:
    if isinstance(a, BigComplex):
        return abs(a) <= (tol or 0)
    return is_zero(a)


def max_abs_diff(a: SquareMatrix, b: SquareMatrix, prec: int = 256):
    """Largest entrywise modulus of ``a - b``, evaluated at ``prec`` bits."""
    worst = gmpy2.mpfr(0)
    for x, y in zip(a.entries(), b.entries()):
        d = embed_complex(x, prec) - embed_complex(y, prec)
        worst = max(worst, abs(d))
    return worst


__all__ = ["SquareMatrix", "max_abs_diff"]
