"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A value is stored as its canonical coordinate vector of length phi(N) in the
power basis 1, zeta, ..., zeta^{phi(N)-1} of Q(zeta_N), i.e. reduced modulo
the N-th cyclotomic polynomial.  All coefficients are Fractions, so equality
is decidable and arithmetic is exact.  No floating point anywhere.

Character sums want to accumulate millions of roots of unity; for that there
is an integer fast path: keep a length-N histogram counts[k] of how many
times zeta^k occurs and reduce once at the end (reduce_counts uses a
precomputed integer reduction matrix, valid because Phi_N is monic).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cache, lru_cache

import numpy as np

__all__ = [
    "CycloScalar",
    "cyclotomic_polynomial",
    "euler_phi",
    "reduction_matrix",
    "reduce_counts",
    "cyclo_normalize",
    "zeta",
]


def euler_phi(n: int) -> int:
    count = 0
    for k in range(1, n + 1):
        if math.gcd(k, n) == 1:
            count += 1
    return count


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den monic; exact integer division (used for x^N - 1 = prod Phi_d)
    num = list(num)
    deg_d = len(den) - 1
    quot = [0] * max(1, len(num) - deg_d)
    while len(num) - 1 >= deg_d and any(num):
        shift = len(num) - 1 - deg_d
        c = num[-1]
        quot[shift] = c
        for i, dc in enumerate(den):
            num[shift + i] -= c * dc
        while len(num) > 1 and num[-1] == 0:
            num.pop()
    return quot, num


@cache
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, ascending, monic, exact integers."""
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0] = -1
    num[n] = 1
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod_int(num, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(num)


@cache
def reduction_matrix(n: int) -> np.ndarray:
    """Integer matrix R with R[k] = coordinates of zeta_n^k in the power basis.

    Shape (n, phi(n)); rows k < phi(n) are unit vectors.
    """
    phi_coeffs = cyclotomic_polynomial(n)
    deg = len(phi_coeffs) - 1
    rows = np.zeros((max(n, 2 * deg), deg), dtype=object)
    for k in range(deg):
        rows[k, k] = 1
    # x^k = x * x^{k-1}, then eliminate the x^deg term via Phi (monic)
    for k in range(deg, rows.shape[0]):
        prev = rows[k - 1]
        shifted = np.zeros(deg + 1, dtype=object)
        shifted[1:] = prev
        lead = shifted[deg]
        shifted[:deg] -= lead * np.array(phi_coeffs[:deg], dtype=object)
        rows[k] = shifted[:deg]
    return rows[:n].copy()


@cache
def _reduction_matrix_i64(n: int) -> np.ndarray:
    return reduction_matrix(n).astype(np.int64)


def reduce_counts(n: int, counts: np.ndarray) -> np.ndarray:
    """Reduce an exponent histogram (..., n) to power-basis coordinates (..., phi(n)).

    Integer inputs use a fast int64 path; object arrays (arbitrary-precision
    entries) reduce exactly through the object matrix.
    """
    counts = np.asarray(counts)
    if counts.dtype == object:
        return counts @ reduction_matrix(n)
    r = _reduction_matrix_i64(n)
    return counts.astype(np.int64) @ r


@lru_cache(maxsize=None)
def _phi_of(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


class CycloScalar:
    """An element of Q(zeta_N) in canonical power-basis form."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        self.n = n
        phi = _phi_of(n)
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != phi:
            raise ValueError(f"need {phi} coordinates for conductor {n}, got {len(cs)}")
        self.coeffs = cs

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int = 1) -> "CycloScalar":
        return cls(n, (Fraction(0),) * _phi_of(n))

    @classmethod
    def one(cls, n: int = 1) -> "CycloScalar":
        c = [Fraction(0)] * _phi_of(n)
        c[0] = Fraction(1)
        return cls(n, c)

    @classmethod
    def rational(cls, value, n: int = 1) -> "CycloScalar":
        c = [Fraction(0)] * _phi_of(n)
        c[0] = Fraction(value)
        return cls(n, c)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "CycloScalar":
        return cls.from_exponents(n, {k % n: 1})

    @classmethod
    def from_exponents(cls, n: int, terms) -> "CycloScalar":
        """Build sum_k c_k zeta_n^k from {exponent: coefficient} or a length-n array."""
        rows = reduction_matrix(n)
        phi = _phi_of(n)
        out = [Fraction(0)] * phi
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = enumerate(terms)
        for k, c in items:
            if not c:
                continue
            row = rows[k % n]
            fc = Fraction(c)
            for i in range(phi):
                if row[i]:
                    out[i] += fc * int(row[i])
        return cls(n, out)

    @classmethod
    def from_counts(cls, n: int, counts: np.ndarray) -> "CycloScalar":
        reduced = reduce_counts(n, np.asarray(counts))
        return cls(n, [int(v) for v in reduced])

    # -- conductor handling -------------------------------------------

    def lift(self, m: int) -> "CycloScalar":
        """Exact embedding Q(zeta_n) -> Q(zeta_m) for n | m."""
        if m == self.n:
            return self
        if m % self.n != 0:
            raise ValueError(f"no embedding: {self.n} does not divide {m}")
        scale = m // self.n
        terms = {k * scale: c for k, c in enumerate(self.coeffs) if c}
        return CycloScalar.from_exponents(m, terms)

    def _pair(self, other: "CycloScalar") -> tuple["CycloScalar", "CycloScalar"]:
        if self.n == other.n:
            return self, other
        m = self.n * other.n // math.gcd(self.n, other.n)
        return self.lift(m), other.lift(m)

    # -- ring operations ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycloScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return CycloScalar.rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._pair(o)
        return CycloScalar(a.n, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar(self.n, [-x for x in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._pair(o)
        phi = len(a.coeffs)
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    prod[i + j] += x * y
        rows = reduction_matrix(a.n)
        out = [Fraction(0)] * phi
        for k, c in enumerate(prod):
            if not c:
                continue
            if k < phi:
                out[k] += c
            else:
                row = rows[k] if k < a.n else None
                if row is None:
                    # beyond conductor range: reduce exponent-free via extra rows
                    row = _extended_row(a.n, k)
                for i in range(phi):
                    if row[i]:
                        out[i] += c * int(row[i])
        return CycloScalar(a.n, out)

    __rmul__ = __mul__

    def inverse(self) -> "CycloScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic scalar")
        phi_coeffs = [Fraction(c) for c in cyclotomic_polynomial(self.n)]
        inv = _poly_invert(list(self.coeffs), phi_coeffs)
        return CycloScalar(self.n, inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloScalar.one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure ------------------------------------------------------

    def conj(self) -> "CycloScalar":
        """Complex conjugation zeta -> zeta^{-1}; exact."""
        terms = {(-k) % self.n: c for k, c in enumerate(self.coeffs) if c}
        return CycloScalar.from_exponents(self.n, terms)

    def norm_sq(self) -> "CycloScalar":
        return self * self.conj()

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"not a rational number: {self}")
        return self.coeffs[0]

    def magnitude_sq(self) -> Fraction:
        """|z|^2 as an exact rational; raises if z*conj(z) is irrational."""
        return self.norm_sq().as_rational()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._pair(o)
        return a.coeffs == b.coeffs

    __hash__ = None  # values at different conductors compare equal; unhashable by design

    def __repr__(self):
        if self.is_rational():
            return f"CycloScalar({self.coeffs[0]})"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*z{self.n}^{k}" if k else f"{c}")
        return "CycloScalar(" + " + ".join(terms) + ")"

    def render(self) -> str:
        """Canonical string form (used by report rows; stable across runs)."""
        if self.is_rational():
            return str(self.coeffs[0])
        body = ",".join(str(c) for c in self.coeffs)
        return f"z{self.n}[{body}]"


@cache
def _extended_rows(n: int, upto: int) -> np.ndarray:
    phi_coeffs = cyclotomic_polynomial(n)
    deg = len(phi_coeffs) - 1
    rows = np.zeros((upto, deg), dtype=object)
    base = reduction_matrix(n)
    rows[: min(n, upto)] = base[: min(n, upto)]
    for k in range(min(n, upto), upto):
        prev = rows[k - 1]
        shifted = np.zeros(deg + 1, dtype=object)
        shifted[1:] = prev
        lead = shifted[deg]
        shifted[:deg] -= lead * np.array(phi_coeffs[:deg], dtype=object)
        rows[k] = shifted[:deg]
    return rows


def _extended_row(n: int, k: int):
    return _extended_rows(n, k + 1)[k]


def _poly_invert(a: list[Fraction], modulus: list[Fraction]) -> list[Fraction]:
    # extended Euclid in Q[x]: find u with a*u = 1 mod modulus
    def deg(p):
        for i in range(len(p) - 1, -1, -1):
            if p[i]:
                return i
        return -1

    def trim(p):
        d = deg(p)
        return p[: d + 1] if d >= 0 else []

    def poly_divmod(num, den):
        num = list(num)
        dd = deg(den)
        lead = den[dd]
        q = [Fraction(0)] * max(1, len(num))
        while deg(num) >= dd:
            dn = deg(num)
            c = num[dn] / lead
            q[dn - dd] = c
            for i in range(dd + 1):
                num[dn - dd + i] -= c * den[i]
        return trim(q), trim(num)

    r0, r1 = trim(modulus), trim(a)
    s0, s1 = [], [Fraction(1)]
    while deg(r1) > 0:
        q, r = poly_divmod(r0, r1)
        # s_{k+1} = s_{k-1} - q*s_k
        qs = [Fraction(0)] * (len(q) + len(s1))
        for i, qc in enumerate(q):
            if qc:
                for j, sc in enumerate(s1):
                    qs[i + j] += qc * sc
        s_next = [Fraction(0)] * max(len(s0), len(qs))
        for i, c in enumerate(s0):
            s_next[i] += c
        for i, c in enumerate(qs):
            s_next[i] -= c
        r0, r1 = r1, r
        s0, s1 = s1, trim(s_next)
    if deg(r1) != 0:
        raise ZeroDivisionError("element not invertible modulo cyclotomic polynomial")
    c = r1[0]
    out = [sc / c for sc in s1]
    target = len(modulus) - 1
    out = out + [Fraction(0)] * (target - len(out))
    return out[:target]


def zeta(n: int, k: int = 1) -> CycloScalar:
    return CycloScalar.zeta(n, k)


def cyclo_normalize(n: int, expr) -> CycloScalar:
    """Canonicalize a raw cyclotomic expression.

    expr may be a dict {exponent: rational coefficient}, an iterable of
    (exponent, coefficient) pairs, or a plain rational.  The result is the
    unique power-basis form at conductor n, so equality becomes decidable.
    """
    if isinstance(expr, (int, Fraction)):
        return CycloScalar.rational(expr, n)
    if isinstance(expr, CycloScalar):
        return expr.lift(n) if n != expr.n else expr
    if isinstance(expr, dict):
        return CycloScalar.from_exponents(n, expr)
    return CycloScalar.from_exponents(n, dict(expr))
