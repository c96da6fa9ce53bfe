"""Finite-field towers F_p < F_q < F_{q^n} with table-backed exact arithmetic.

Elements are packed integer codes: the code of a_0 + a_1 y + ... + a_{k-1}
y^{k-1} (coordinates over F_p w.r.t. the power basis of the defining root y)
is sum a_i p^i.  Multiplication goes through discrete-log tables once the
field is built; addition is XOR for p = 2 and a digitwise table otherwise.
Defining polynomials are the lexicographically least monic irreducible of the
right degree, so every run constructs the same tower.

Fields above the table bound (order > 2^20) fall back to polynomial-basis
arithmetic without tables; they only occur for oversized extension requests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cache, lru_cache

import numpy as np

from .cyclo import CycloScalar

__all__ = [
    "Fq",
    "FieldTower",
    "FqnElem",
    "AdditiveChar",
    "ExtField",
    "make_tower",
    "SizeBoundError",
    "TABLE_BOUND",
]

TABLE_BOUND = 2**20


class SizeBoundError(ValueError):
    """Requested field exceeds the configured size bound."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _factor(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomial arithmetic over F_p on digit lists (ascending) -----------


def _digits(code: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(code % p)
        code //= p
    return out


def _encode(digits, p: int) -> int:
    code = 0
    for d in reversed(list(digits)):
        code = code * p + int(d)
    return code


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) > df:
        c = a[-1]
        if c:
            for i in range(df + 1):
                a[len(a) - 1 - df + i] = (a[len(a) - 1 - df + i] - c * f[i]) % p
        a.pop()
    while len(a) < df:
        a.append(0)
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    k = len(f) - 1
    for d in range(1, k // 2 + 1):
        for mcode in range(p**d):
            g = _digits(mcode, p, d) + [1]
            if not _prem(f, g, p):
                return False
    return True


def _prem(a: list[int], g: list[int], p: int) -> list[int]:
    a = list(a)
    dg = len(g) - 1
    while len(a) - 1 >= dg and any(a):
        c = a[-1]
        if c:
            shift = len(a) - 1 - dg
            for i in range(dg + 1):
                a[shift + i] = (a[shift + i] - c * g[i]) % p
        a.pop()
        while len(a) > 1 and a[-1] == 0:
            a.pop()
    return a if any(a) else []


@cache
def lex_least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Monic irreducible of degree k over F_p with least packed non-leading part."""
    if k == 1:
        return (0, 1)  # x itself; fine as a degree-1 modulus (F_p)
    for mcode in range(p**k):
        f = _digits(mcode, p, k) + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


class Fq:
    """One finite field F_{p^k}, table-backed when small enough."""

    def __init__(self, p: int, k: int, max_order: int = TABLE_BOUND):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        self.p = p
        self.k = k
        self.order = p**k
        self.poly = list(lex_least_irreducible(p, k))
        self.use_tables = self.order <= max_order
        self._frob_tables: dict[int, np.ndarray] = {}
        self._pow_tables: dict[int, np.ndarray] = {}
        if self.use_tables:
            self._build_tables()

    # bootstrap multiplication, needed before tables exist
    def _raw_mul(self, a: int, b: int) -> int:
        da = _digits(a, self.p, self.k)
        db = _digits(b, self.p, self.k)
        return _encode(_pmod(_pmul(da, db, self.p), self.poly, self.p), self.p)

    def _raw_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._raw_mul(r, a)
            a = self._raw_mul(a, a)
            e >>= 1
        return r

    def _build_tables(self) -> None:
        q1 = self.order - 1
        primes = _factor(q1)
        gen = None
        for g in range(1, self.order):
            if all(self._raw_pow(g, q1 // r) != 1 for r in primes) and self._raw_pow(g, q1) == 1:
                gen = g
                break
        assert gen is not None
        self.generator = gen
        exp = np.zeros(2 * q1, dtype=np.int64)
        log = np.full(self.order, -1, dtype=np.int64)
        cur = 1
        for i in range(q1):
            exp[i] = cur
            log[cur] = i
            cur = self._raw_mul(cur, gen)
        exp[q1:] = exp[:q1]
        self.exp = exp
        self.log = log
        if self.p == 2:
            self.add_table = None
        else:
            digs = np.zeros((self.order, self.k), dtype=np.int16)
            for a in range(self.order):
                digs[a] = _digits(a, self.p, self.k)
            self.digits = digs
            powers = self.p ** np.arange(self.k, dtype=np.int64)
            self._ppow = powers
            self.neg_table = (((self.p - digs) % self.p).astype(np.int64) @ powers).astype(np.int64)
            if self.order <= 4096:
                summed = (digs[:, None, :] + digs[None, :, :]) % self.p
                self.add_table = (summed.astype(np.int64) @ powers).astype(np.int64)
            else:
                self.add_table = None  # digitwise path; Q^2 table would be too large

    # -- scalar ops ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.use_tables:
            if self.add_table is not None:
                return int(self.add_table[a, b])
            return int((((self.digits[a] + self.digits[b]) % self.p).astype(np.int64) @ self._ppow))
        da = _digits(a, self.p, self.k)
        db = _digits(b, self.p, self.k)
        return _encode([(x + y) % self.p for x, y in zip(da, db)], self.p)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.use_tables:
            return int(self.neg_table[a])
        return _encode([(-x) % self.p for x in _digits(a, self.p, self.k)], self.p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.use_tables:
            return int(self.exp[self.log[a] + self.log[b]])
        return self._raw_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        if self.use_tables:
            return int(self.exp[(self.order - 1 - self.log[a]) % (self.order - 1)])
        return self._raw_pow(a, self.order - 2)

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        if self.use_tables:
            return int(self.exp[(self.log[a] * e) % (self.order - 1)])
        return self._raw_pow(a, e % (self.order - 1) if e else 0)

    def frob(self, a: int, e: int) -> int:
        """a -> a^(p^e)."""
        return self.pow(a, pow(self.p, e, self.order - 1) if self.order > 2 else 1)

    # -- vector ops (codes as numpy arrays) ------------------------------

    def vadd(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.add_table is not None:
            return self.add_table[a, b]
        a = np.asarray(a)
        b = np.asarray(b)
        summed = (self.digits[a] + self.digits[b]) % self.p
        return summed.astype(np.int64) @ self._ppow

    def vneg(self, a):
        if self.p == 2:
            return np.asarray(a).copy()
        return self.neg_table[a]

    def vmul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        m = (a != 0) & (b != 0)
        am = np.broadcast_to(a, out.shape)[m]
        bm = np.broadcast_to(b, out.shape)[m]
        out[m] = self.exp[self.log[am] + self.log[bm]]
        return out

    def pow_table(self, e: int) -> np.ndarray:
        """Lookup table for x -> x^e (0^0 = 1, 0^e = 0 for e > 0)."""
        key = (e == 0, e % (self.order - 1) if self.order > 2 else e)
        if key not in self._pow_tables:
            t = np.zeros(self.order, dtype=np.int64)
            if e == 0:
                t[:] = 1
            else:
                idx = (np.arange(self.order - 1, dtype=np.int64) * key[1]) % (self.order - 1)
                t[self.exp[: self.order - 1]] = self.exp[idx]
            self._pow_tables[key] = t
        return self._pow_tables[key]

    def frob_table(self, e: int) -> np.ndarray:
        """Lookup table for x -> x^(p^e)."""
        if e not in self._frob_tables:
            self._frob_tables[e] = self.pow_table(pow(self.p, e, self.order - 1) if self.order > 2 else 1)
        return self._frob_tables[e]

    def vinv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero field element")
        return self.exp[(self.order - 1 - self.log[a]) % (self.order - 1)]

    def trace_to_prime_table(self) -> np.ndarray:
        """Table of Tr_{F_{p^k}/F_p}(x) as integers in [0, p)."""
        if not hasattr(self, "_trp"):
            acc = np.arange(self.order, dtype=np.int64)
            total = acc.copy()
            for _ in range(self.k - 1):
                acc = self.frob_table(1)[acc]
                total = self.vadd(total, acc)
            assert np.all(total < self.p)  # trace lands in the prime field
            self._trp = total
        return self._trp

    def __repr__(self):
        return f"Fq(p={self.p}, k={self.k})"


@cache
def _shared_fq(p: int, k: int) -> Fq:
    return Fq(p, k)


def embedding_table(small: Fq, big: Fq) -> np.ndarray:
    """Field embedding small -> big sending the small root to the least root
    of small's defining polynomial inside big; packed-code lookup table."""
    assert small.p == big.p and big.k % small.k == 0
    p = small.p
    root = None
    for r in range(big.order):
        acc = 0
        for c in reversed(small.poly):
            acc = big.add(big.mul(acc, r), c)
        if acc == 0:
            root = r
            break
    assert root is not None
    powers = [1]
    for _ in range(small.k - 1):
        powers.append(big.mul(powers[-1], root))
    table = np.zeros(small.order, dtype=np.int64)
    for a in range(small.order):
        acc = 0
        for d, rp in zip(_digits(a, p, small.k), powers):
            if d:
                term = rp
                for _ in range(d - 1):
                    term = big.add(term, rp)
                acc = big.add(acc, term)
        table[a] = acc
    return table


@dataclass(frozen=True)
class FqnElem:
    """Element of F_{q^n} inside a fixed tower, as a packed coordinate code."""

    tower: "FieldTower"
    code: int

    def _check(self, other):
        if self.tower is not other.tower:
            raise ValueError("elements from different towers")

    def __add__(self, other: "FqnElem") -> "FqnElem":
        self._check(other)
        return FqnElem(self.tower, self.tower.fqn.add(self.code, other.code))

    def __sub__(self, other: "FqnElem") -> "FqnElem":
        self._check(other)
        return FqnElem(self.tower, self.tower.fqn.sub(self.code, other.code))

    def __neg__(self) -> "FqnElem":
        return FqnElem(self.tower, self.tower.fqn.neg(self.code))

    def __mul__(self, other: "FqnElem") -> "FqnElem":
        self._check(other)
        return FqnElem(self.tower, self.tower.fqn.mul(self.code, other.code))

    def __truediv__(self, other: "FqnElem") -> "FqnElem":
        self._check(other)
        return FqnElem(self.tower, self.tower.fqn.mul(self.code, self.tower.fqn.inv(other.code)))

    def __pow__(self, e: int) -> "FqnElem":
        return FqnElem(self.tower, self.tower.fqn.pow(self.code, e))

    def inverse(self) -> "FqnElem":
        return FqnElem(self.tower, self.tower.fqn.inv(self.code))

    def frob(self, i: int = 1) -> "FqnElem":
        """q^i-power Frobenius."""
        return self.tower.frob(self, i)

    def is_zero(self) -> bool:
        return self.code == 0

    def coords(self) -> list[int]:
        """Canonical coordinate vector over F_p."""
        return _digits(self.code, self.tower.p, self.tower.fqn.k)

    def __repr__(self):
        return f"FqnElem({self.code} in F_{self.tower.q}^{self.tower.n})"


class FieldTower:
    """The tower F_p < F_q < F_{q^n}: q = p^s, Galois group generated by x -> x^q.

    Immutable after construction; tables are shared read-only.
    """

    def __init__(self, p: int, s: int, n: int, max_order: int = TABLE_BOUND):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if s < 1:
            raise ValueError("s must be >= 1")
        if n < 2:
            raise ValueError("extension degree n must be >= 2")
        if p ** (s * n) > max_order:
            raise SizeBoundError(f"|F_(q^n)| = {p**(s*n)} exceeds bound {max_order}")
        self.p = p
        self.s = s
        self.n = n
        self.q = p**s
        self.fqn = _shared_fq(p, s * n)
        self.fq = _shared_fq(p, s)
        self.emb_q = embedding_table(self.fq, self.fqn)
        sec = np.full(self.fqn.order, -1, dtype=np.int64)
        sec[self.emb_q] = np.arange(self.fq.order)
        self.sec_q = sec
        self._ext_cache: dict[int, ExtField] = {}

    # -- element constructors -------------------------------------------

    def element(self, code: int) -> FqnElem:
        return FqnElem(self, int(code))

    def zero(self) -> FqnElem:
        return FqnElem(self, 0)

    def one(self) -> FqnElem:
        return FqnElem(self, 1)

    def gen(self) -> FqnElem:
        return FqnElem(self, self.fqn.generator)

    def elements(self):
        return (FqnElem(self, c) for c in range(self.fqn.order))

    def units(self):
        return (FqnElem(self, c) for c in range(1, self.fqn.order))

    # -- Galois action and traces ----------------------------------------

    def frob(self, x: FqnElem, i: int = 1) -> FqnElem:
        """x -> x^(q^i); frob(x, n) = x."""
        return FqnElem(self, self.frob_code(x.code, i))

    def frob_code(self, code: int, i: int) -> int:
        if self.fqn.use_tables:
            return int(self.fqn.frob_table(self.s * (i % self.n))[code])
        return self.fqn.frob(code, self.s * (i % self.n))

    def rel_trace(self, x: FqnElem, d: int) -> FqnElem:
        """Trace from F_{q^n} to F_{q^d} for d | n; lands in the subfield."""
        if self.n % d != 0:
            raise ValueError(f"d = {d} does not divide n = {self.n}")
        acc = x.code
        cur = x.code
        for _ in range(self.n // d - 1):
            cur = self.frob_code(cur, d)
            acc = self.fqn.add(acc, cur)
        return FqnElem(self, acc)

    def galois_stabilizer(self, x: FqnElem) -> int:
        """Least d | n with x^(q^d) = x (the Galois orbit length of x)."""
        for d in range(1, self.n + 1):
            if self.n % d == 0 and self.frob_code(x.code, d) == x.code:
                return d
        raise AssertionError("frob(x, n) must fix x")

    def very_regular_residues(self) -> list[FqnElem]:
        """Units of F_{q^n} with full Galois orbit."""
        return [FqnElem(self, c) for c in range(1, self.fqn.order)
                if self.galois_stabilizer(FqnElem(self, c)) == self.n]

    def additive_char(self, c) -> "AdditiveChar":
        code = c.code if isinstance(c, FqnElem) else int(c)
        return AdditiveChar(self, code)

    def extension(self, m: int) -> "ExtField":
        """The extension F_{q^{nm}} with the embedding from F_{q^n}."""
        if m not in self._ext_cache:
            self._ext_cache[m] = ExtField(self, m)
        return self._ext_cache[m]

    def __repr__(self):
        return f"FieldTower(p={self.p}, s={self.s}, n={self.n})"


class ExtField:
    """F_{q^{nm}} over a tower's F_{q^n}, with embedding/section tables."""

    def __init__(self, tower: FieldTower, m: int):
        self.tower = tower
        self.m = m
        if m == 1:
            self.fq = tower.fqn
            self.embed = np.arange(tower.fqn.order, dtype=np.int64)
        else:
            self.fq = Fq(tower.p, tower.s * tower.n * m)
            self.embed = embedding_table(tower.fqn, self.fq)
        sec = np.full(self.fq.order, -1, dtype=np.int64)
        sec[self.embed] = np.arange(tower.fqn.order)
        self.section = sec

    def twist_table(self, i: int) -> np.ndarray:
        """x -> x^(q^i) on the extension."""
        return self.fq.frob_table(self.tower.s * i)

    def rel_trace_table(self) -> np.ndarray:
        """Tr_{F_{q^{nm}}/F_{q^n}} as a table of base-field codes."""
        if not hasattr(self, "_rtt"):
            acc = np.arange(self.fq.order, dtype=np.int64)
            total = acc.copy()
            for _ in range(self.m - 1):
                acc = self.twist_table(self.tower.n)[acc]
                total = self.fq.vadd(total, acc)
            down = self.section[total]
            assert np.all(down >= 0)  # trace lands in F_{q^n}
            self._rtt = down
        return self._rtt


class AdditiveChar:
    """psi_c(x) = zeta_p ^ Tr_{F_{q^n}/F_p}(c*x); nontrivial iff c != 0."""

    def __init__(self, tower: FieldTower, c_code: int):
        self.tower = tower
        self.c = c_code

    def exponent(self, x) -> int:
        """Tr(c*x) as an integer in [0, p)."""
        code = x.code if isinstance(x, FqnElem) else int(x)
        t = self.tower.fqn.trace_to_prime_table()
        return int(t[self.tower.fqn.mul(self.c, code)])

    def exponent_table(self) -> np.ndarray:
        t = self.tower.fqn.trace_to_prime_table()
        cmul = self.tower.fqn.vmul(np.full(self.tower.fqn.order, self.c, dtype=np.int64),
                                   np.arange(self.tower.fqn.order, dtype=np.int64))
        return t[cmul]

    def value(self, x) -> CycloScalar:
        return CycloScalar.zeta(self.tower.p, self.exponent(x))

    def is_nontrivial(self) -> bool:
        return self.c != 0

    def stabilizer(self) -> int:
        """Galois orbit length of psi_c (equals that of the parameter c)."""
        if self.c == 0:
            return 1
        return self.tower.galois_stabilizer(FqnElem(self.tower, self.c))

    def __repr__(self):
        return f"AdditiveChar(c={self.c})"


def make_tower(p: int, s: int, n: int, max_order: int = TABLE_BOUND) -> FieldTower:
    """Build the tower F_p < F_q < F_{q^n}, q = p^s, deterministically."""
    return FieldTower(p, s, n, max_order=max_order)
