"""Truncated rings O_E/P^L, O_A/P^L and O_D/P_D^L in equal characteristic.

O_E/P_E^L  = F_{q^n}[w]/(w^L), coefficients little-endian in w.
O_A/P_A^L  = twisted group algebra  sum_{i<n} a_i phi^i  with  phi^i a = a^{q^i} phi^i,
             a_i in O_E/P^L.
O_D/P_D^L  = sum_{k<L} c_k Pi^k  with  Pi c = phi(c) Pi,  Pi^n = w,  c_k in F_{q^n}.

Everything is an immutable tuple of packed field codes, so elements hash and
compare structurally; the groups built on top stay dictionary-friendly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..fields import FieldTower

__all__ = ["TruncE", "TruncA", "TruncD", "EUnit", "q_basis", "fpoly_mul", "fpoly_add"]


@dataclass(frozen=True)
class TruncE:
    """Element of F_{q^n}[w]/(w^level)."""

    tower: FieldTower
    level: int
    coeffs: tuple

    @classmethod
    def zero(cls, tower, level):
        return cls(tower, level, (0,) * level)

    @classmethod
    def one(cls, tower, level):
        return cls(tower, level, (1,) + (0,) * (level - 1))

    @classmethod
    def from_codes(cls, tower, level, codes):
        cs = tuple(codes)[:level]
        return cls(tower, level, cs + (0,) * (level - len(cs)))

    @classmethod
    def constant(cls, tower, level, code):
        return cls(tower, level, (code,) + (0,) * (level - 1))

    def __add__(self, other: "TruncE") -> "TruncE":
        fq = self.tower.fqn
        return TruncE(self.tower, self.level,
                      tuple(fq.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TruncE":
        fq = self.tower.fqn
        return TruncE(self.tower, self.level, tuple(fq.neg(a) for a in self.coeffs))

    def __sub__(self, other: "TruncE") -> "TruncE":
        return self + (-other)

    def __mul__(self, other: "TruncE") -> "TruncE":
        fq = self.tower.fqn
        L = self.level
        out = [0] * L
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(L - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] = fq.add(out[i + j], fq.mul(a, b))
        return TruncE(self.tower, L, tuple(out))

    def scale(self, code: int) -> "TruncE":
        fq = self.tower.fqn
        return TruncE(self.tower, self.level, tuple(fq.mul(code, c) for c in self.coeffs))

    def shift(self, k: int) -> "TruncE":
        """Multiply by w^k."""
        return TruncE(self.tower, self.level, (0,) * k + self.coeffs[: self.level - k])

    def val(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return self.level

    def is_unit(self) -> bool:
        return self.coeffs[0] != 0

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def inverse(self) -> "TruncE":
        if not self.is_unit():
            raise ZeroDivisionError("not a unit in O_E/P^L")
        fq = self.tower.fqn
        c0inv = fq.inv(self.coeffs[0])
        z = self.scale(c0inv)          # 1 + m, m topologically nilpotent
        m = TruncE(self.tower, self.level, (0,) + z.coeffs[1:])
        acc = TruncE.one(self.tower, self.level)
        term = TruncE.one(self.tower, self.level)
        for _ in range(self.level - 1):
            term = term * (-m)
            acc = acc + term
        return acc.scale(c0inv)

    def frob(self, i: int = 1) -> "TruncE":
        """Galois action phi^i, coefficientwise q^i-power."""
        t = self.tower
        return TruncE(t, self.level, tuple(t.frob_code(c, i) for c in self.coeffs))

    def trace_to_F(self) -> tuple:
        """Tr_{E/F}, as a tuple of F_q-codes (coefficientwise relative trace)."""
        t = self.tower
        out = []
        for c in self.coeffs:
            acc = c
            cur = c
            for _ in range(t.n - 1):
                cur = t.frob_code(cur, 1)
                acc = t.fqn.add(acc, cur)
            down = int(t.sec_q[acc])
            assert down >= 0
            out.append(down)
        return tuple(out)

    def reduce(self, level: int) -> "TruncE":
        return TruncE(self.tower, level, self.coeffs[:level])

    def lift(self, level: int) -> "TruncE":
        return TruncE(self.tower, level, self.coeffs + (0,) * (level - self.level))

    def residue(self) -> int:
        return self.coeffs[0]

    def __repr__(self):
        return f"TruncE{self.coeffs}"


@dataclass(frozen=True)
class EUnit:
    """Element of E^x modulo U^level: w-valuation plus a truncated unit."""

    val: int
    unit: TruncE

    def __mul__(self, other: "EUnit") -> "EUnit":
        return EUnit(self.val + other.val, self.unit * other.unit)

    def inverse(self) -> "EUnit":
        return EUnit(-self.val, self.unit.inverse())


@dataclass(frozen=True)
class TruncA:
    """Element of the twisted group algebra A = sum E.phi^i mod P_A^level."""

    tower: FieldTower
    level: int
    coeffs: tuple  # n entries, index i <-> phi^i, each a TruncE

    @classmethod
    def zero(cls, tower, level):
        z = TruncE.zero(tower, level)
        return cls(tower, level, (z,) * tower.n)

    @classmethod
    def one(cls, tower, level):
        z = TruncE.zero(tower, level)
        return cls(tower, level, (TruncE.one(tower, level),) + (z,) * (tower.n - 1))

    @classmethod
    def from_E(cls, tower, level, e: TruncE):
        z = TruncE.zero(tower, level)
        return cls(tower, level, (e,) + (z,) * (tower.n - 1))

    @classmethod
    def galois(cls, tower, level, i: int):
        """The group element phi^i viewed inside O_A."""
        z = TruncE.zero(tower, level)
        cs = [z] * tower.n
        cs[i % tower.n] = TruncE.one(tower, level)
        return cls(tower, level, tuple(cs))

    def __add__(self, other: "TruncA") -> "TruncA":
        return TruncA(self.tower, self.level,
                      tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TruncA":
        return TruncA(self.tower, self.level, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "TruncA") -> "TruncA":
        return self + (-other)

    def __mul__(self, other: "TruncA") -> "TruncA":
        n = self.tower.n
        z = TruncE.zero(self.tower, self.level)
        out = [z] * n
        for i, a in enumerate(self.coeffs):
            if not any(c for c in a.coeffs):
                continue
            for j, b in enumerate(other.coeffs):
                k = (i + j) % n
                out[k] = out[k] + a * b.frob(i)
        return TruncA(self.tower, self.level, tuple(out))

    def e_part(self) -> TruncE:
        return self.coeffs[0]

    def c_val(self) -> int:
        """Minimal w-valuation over the off-E coordinates."""
        return min((c.val() for c in self.coeffs[1:]), default=self.level)

    def val(self) -> int:
        return min(c.val() for c in self.coeffs)

    def in_P(self, m: int) -> bool:
        return all(c.val() >= m for c in self.coeffs)

    def in_unit_EU(self, m: int) -> bool:
        """Membership in O_E^x * U^m_G at the truncated level."""
        return self.coeffs[0].is_unit() and all(c.val() >= m for c in self.coeffs[1:])

    def trace(self) -> tuple:
        """tr_A as F-coefficients (Tr_{E/F} of the identity coordinate)."""
        return self.coeffs[0].trace_to_F()

    def is_one(self) -> bool:
        return self.coeffs[0].is_one() and all(c.val() >= self.level for c in self.coeffs[1:])

    def reduce(self, level: int) -> "TruncA":
        return TruncA(self.tower, level, tuple(c.reduce(level) for c in self.coeffs))

    def residue_matrix(self):
        """The action on F_{q^n} over F_q as an n x n matrix of F_q codes."""
        return _a_residue_matrix(self)

    def is_unit(self) -> bool:
        return _fq_matrix_invertible(self.tower, self.residue_matrix())

    def inverse(self) -> "TruncA":
        """Unit inverse: invert the residue, then Newton-lift."""
        t = self.tower
        res_inv = _fq_matrix_inverse_to_A(self)
        y = res_inv
        two = TruncA.one(t, self.level) + TruncA.one(t, self.level)
        for _ in range(max(1, self.level.bit_length() + 1)):
            y = y * (two - self * y)
        assert (self * y).is_one() and (y * self).is_one()
        return y

    def __repr__(self):
        return f"TruncA({self.coeffs})"


@dataclass(frozen=True)
class TruncD:
    """Element of O_D/P_D^length: sum_{k<length} c_k Pi^k, c_k in F_{q^n}."""

    tower: FieldTower
    length: int
    coeffs: tuple  # field codes, index = Pi-power

    @classmethod
    def zero(cls, tower, length):
        return cls(tower, length, (0,) * length)

    @classmethod
    def one(cls, tower, length):
        return cls(tower, length, (1,) + (0,) * (length - 1))

    @classmethod
    def from_codes(cls, tower, length, codes):
        cs = tuple(codes)[:length]
        return cls(tower, length, cs + (0,) * (length - len(cs)))

    @classmethod
    def from_E(cls, tower, length, e: TruncE):
        cs = [0] * length
        for k, c in enumerate(e.coeffs):
            if k * tower.n < length:
                cs[k * tower.n] = c
        return cls(tower, length, tuple(cs))

    @classmethod
    def pi(cls, tower, length):
        cs = [0] * length
        if length > 1:
            cs[1] = 1
        return cls(tower, length, tuple(cs))

    def __add__(self, other: "TruncD") -> "TruncD":
        fq = self.tower.fqn
        return TruncD(self.tower, self.length,
                      tuple(fq.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TruncD":
        fq = self.tower.fqn
        return TruncD(self.tower, self.length, tuple(fq.neg(a) for a in self.coeffs))

    def __sub__(self, other: "TruncD") -> "TruncD":
        return self + (-other)

    def __mul__(self, other: "TruncD") -> "TruncD":
        t = self.tower
        fq = t.fqn
        L = self.length
        out = [0] * L
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(L - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] = fq.add(out[i + j], fq.mul(a, t.frob_code(b, i)))
        return TruncD(self.tower, L, tuple(out))

    def val(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return self.length

    def is_unit(self) -> bool:
        return self.coeffs[0] != 0

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def e_component(self) -> TruncE:
        """The E-part (coefficients at Pi^{nk} = w^k)."""
        t = self.tower
        lev = (self.length + t.n - 1) // t.n
        return TruncE(t, lev, tuple(self.coeffs[k * t.n] if k * t.n < self.length else 0
                                    for k in range(lev)))

    def c_part_vals(self) -> int:
        """Minimal Pi-valuation over the off-E coordinates (C' part)."""
        vals = [i for i, c in enumerate(self.coeffs) if c and i % self.tower.n != 0]
        return min(vals) if vals else self.length

    def in_P(self, m: int) -> bool:
        return self.val() >= m

    def in_unit_EU(self, m: int) -> bool:
        """Membership in O_E^x * U^m_D at the truncated level.  Dividing by the
        unit E-part preserves C'-valuations, so no inversion is needed."""
        return self.is_unit() and self.c_part_vals() >= m

    def inverse(self) -> "TruncD":
        if not self.is_unit():
            raise ZeroDivisionError("not a unit in O_D/P^L")
        fq = self.tower.fqn
        c0inv = fq.inv(self.coeffs[0])
        z = TruncD(self.tower, self.length, tuple(fq.mul(c0inv, c) for c in self.coeffs))
        m = TruncD(self.tower, self.length, (0,) + z.coeffs[1:])
        acc = TruncD.one(self.tower, self.length)
        term = TruncD.one(self.tower, self.length)
        for _ in range(self.length - 1):
            term = term * (-m)
            acc = acc + term
        # right factor c0^{-1} twists through each Pi^i
        t = self.tower
        return TruncD(t, self.length,
                      tuple(fq.mul(c, t.frob_code(c0inv, i)) for i, c in enumerate(acc.coeffs)))

    def pi_conj(self, j: int) -> "TruncD":
        """Pi^j x Pi^{-j}: phi^j on all coefficients."""
        t = self.tower
        return TruncD(t, self.length, tuple(t.frob_code(c, j) for c in self.coeffs))

    def reduced_trace(self) -> tuple:
        """Trd_{D/F}: Tr_{E/F} of the E-part, as F-coefficients."""
        return self.e_component().trace_to_F()

    def __repr__(self):
        return f"TruncD{self.coeffs}"


# -- F_q-basis of F_{q^n} and matrix forms ---------------------------------


@lru_cache(maxsize=None)
def q_basis(tower: FieldTower):
    """(basis, expand): an F_q-basis of F_{q^n} and the coordinate table
    expand[code] = tuple of F_q-codes w.r.t. the basis."""
    fqn = tower.fqn
    q_codes = [int(c) for c in tower.emb_q]
    basis = []
    span = {0: ()}
    for cand in range(1, fqn.order):
        if len(basis) == tower.n:
            break
        if cand in span:
            continue
        basis.append(cand)
        new_span = {}
        for code, coords in span.items():
            for ci, cq in enumerate(q_codes):
                new_span[fqn.add(code, fqn.mul(cq, cand))] = coords + (ci,)
        span = new_span
    assert len(span) == fqn.order
    expand = [None] * fqn.order
    for code, coords in span.items():
        expand[code] = coords
    return basis, expand


def _a_residue_matrix(a: TruncA):
    """Matrix over F_q (codes in tower.fq) of the residue of a acting on F_{q^n}."""
    t = a.tower
    basis, expand = q_basis(t)
    fqn = t.fqn
    cols = []
    for b in basis:
        img = 0
        for i, coeff in enumerate(a.coeffs):
            c0 = coeff.coeffs[0]
            if c0:
                img = fqn.add(img, fqn.mul(c0, t.frob_code(b, i)))
        cols.append(expand[img])
    # rows indexed by basis coordinate, columns by basis element
    n = t.n
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def _fq_matrix_invertible(tower: FieldTower, mat) -> bool:
    return _fq_matrix_inverse(tower, mat) is not None


def _fq_matrix_inverse(tower: FieldTower, mat):
    """Inverse of an n x n matrix over F_q (codes of tower.fq), or None."""
    fq = tower.fq
    n = tower.n
    a = [list(row) for row in mat]
    inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        pinv = fq.inv(a[col][col])
        a[col] = [fq.mul(pinv, x) for x in a[col]]
        inv[col] = [fq.mul(pinv, x) for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [fq.sub(x, fq.mul(f, y)) for x, y in zip(a[r], a[col])]
                inv[r] = [fq.sub(x, fq.mul(f, y)) for x, y in zip(inv[r], inv[col])]
    return tuple(tuple(row) for row in inv)


def _fq_matrix_inverse_to_A(a: TruncA) -> TruncA:
    """Lift the inverse of the residue matrix back to a constant TruncA."""
    t = a.tower
    inv = _fq_matrix_inverse(t, a.residue_matrix())
    if inv is None:
        raise ZeroDivisionError("not a unit in O_A/P^L")
    return _matrix_to_A_constant(t, a.level, inv)


@lru_cache(maxsize=None)
def _a_solver(tower: FieldTower):
    """Inverse over F_q of the fixed linear map (a_i coords) -> residue matrix."""
    basis, expand = q_basis(tower)
    fqn, fq = tower.fqn, tower.fq
    n = tower.n
    rows = []
    for bj, b in enumerate(basis):
        for out_coord in range(n):
            row = []
            for i in range(n):
                fb = tower.frob_code(b, i)
                for kk in range(n):
                    row.append(expand[fqn.mul(basis[kk], fb)][out_coord])
            rows.append(row)
    # invert the n^2 x n^2 system matrix once
    nn = n * n
    a = [list(r) for r in rows]
    inv = [[1 if i == j else 0 for j in range(nn)] for i in range(nn)]
    for col in range(nn):
        piv = next(r for r in range(col, nn) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        pinv = fq.inv(a[col][col])
        a[col] = [fq.mul(pinv, v) for v in a[col]]
        inv[col] = [fq.mul(pinv, v) for v in inv[col]]
        for r in range(nn):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [fq.sub(v, fq.mul(f, w)) for v, w in zip(a[r], a[col])]
                inv[r] = [fq.sub(v, fq.mul(f, w)) for v, w in zip(inv[r], inv[col])]
    return tuple(tuple(row) for row in inv)


def _matrix_to_A_constant(tower: FieldTower, level: int, mat) -> TruncA:
    """Solve sum_i a_i phi^i = given F_q-matrix (residue level), a_i in F_{q^n}."""
    basis, _ = q_basis(tower)
    fqn, fq = tower.fqn, tower.fq
    n = tower.n
    solver = _a_solver(tower)
    rhs = [mat[out][bj] for bj in range(n) for out in range(n)]
    q_codes = [int(c) for c in tower.emb_q]
    coeffs = []
    for i in range(n):
        acc = 0
        for kk in range(n):
            v = 0
            row = solver[i * n + kk]
            for t, r in zip(rhs, row):
                if t and r:
                    v = fq.add(v, fq.mul(r, t))
            acc = fqn.add(acc, fqn.mul(q_codes[v], basis[kk]))
        coeffs.append(TruncE.constant(tower, level, acc))
    return TruncA(tower, level, tuple(coeffs))


# -- polynomial helpers over F_q (for determinants) -------------------------


def fpoly_add(tower: FieldTower, a: tuple, b: tuple) -> tuple:
    fq = tower.fq
    return tuple(fq.add(x, y) for x, y in zip(a, b))


def fpoly_mul(tower: FieldTower, a: tuple, b: tuple) -> tuple:
    fq = tower.fq
    L = len(a)
    out = [0] * L
    for i, x in enumerate(a):
        if x:
            for j in range(L - i):
                if b[j]:
                    out[i + j] = fq.add(out[i + j], fq.mul(x, b[j]))
    return tuple(out)
