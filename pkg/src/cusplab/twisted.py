"""The twisted ring R_0(B) and its unit-group machinery.

Elements are formal sums a_0 + a_1 e_1 + ... + a_n e_n over a coefficient
ring B, multiplied with the twist e_i * a = a^(q^i) * e_i and one of two
product tables on the symbols:

    chain mode (r0 = 2):   e_i e_j = e_{i+j} if i+j <= n, else 0
    top mode   (r0 > 2):   e_i e_j = e_n     if i+j  = n, else 0

B is pluggable: the base field F_{q^n}, an extension F_{q^{nm}}, or a sparse
polynomial ring (for the symbolic alpha computations).  Coefficients are held
as whatever the CoeffOps instance understands (packed codes for fields,
SparsePoly objects for the polynomial ring).

Alongside the object API there are vectorized kernels working on numpy arrays
of packed codes, shape (..., n+1); those drive the enumeration-heavy parts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import ExtField, FieldTower, FqnElem, SizeBoundError

__all__ = [
    "RingParams",
    "TwistedElem",
    "FieldCoeffs",
    "ExtCoeffs",
    "tmul",
    "tinv",
    "lang",
    "semidirect_act",
    "enumerate_group",
    "group_dim",
    "vtmul",
    "vtinv",
    "vlang",
    "unipotent_coords",
    "unipotent_ids",
]

CHAIN = "chain"
TOP = "top"


@dataclass(frozen=True)
class RingParams:
    """(q, n) plus the symbol multiplication mode."""

    tower: FieldTower
    mode: str

    def __post_init__(self):
        if self.mode not in (CHAIN, TOP):
            raise ValueError(f"mode must be 'chain' or 'top', got {self.mode!r}")

    @property
    def n(self) -> int:
        return self.tower.n

    @property
    def q(self) -> int:
        return self.tower.q

    @classmethod
    def from_r0(cls, tower: FieldTower, r0: int) -> "RingParams":
        return cls(tower, CHAIN if r0 == 2 else TOP)

    @property
    def d(self) -> int:
        """ceil((n-1)/2): split index for the subgroups H, H+."""
        return (self.n - 1 + 1) // 2 if self.n % 2 == 0 else (self.n - 1) // 2

    def __repr__(self):
        return f"RingParams(q={self.q}, n={self.n}, {self.mode})"


def _same_ring(r1, r2) -> bool:
    if r1 is r2:
        return True
    if type(r1) is not type(r2):
        return False
    fq1 = getattr(r1, "fq", None)
    fq2 = getattr(r2, "fq", None)
    return fq1 is not None and (fq1 is fq2 or fq1 == fq2)


def _sym_target(mode: str, i: int, j: int, n: int) -> int | None:
    if i == 0:
        return j
    if j == 0:
        return i
    if mode == CHAIN:
        return i + j if i + j <= n else None
    return n if i + j == n else None


class FieldCoeffs:
    """Coefficient ops for B = F_{q^n} (codes in tower.fqn)."""

    def __init__(self, tower: FieldTower):
        self.tower = tower
        self.fq = tower.fqn
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return self.fq.add(a, b)

    def neg(self, a):
        return self.fq.neg(a)

    def mul(self, a, b):
        return self.fq.mul(a, b)

    def inv(self, a):
        return self.fq.inv(a)

    def frob_q(self, a, i):
        return self.tower.frob_code(a, i)

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b


class ExtCoeffs:
    """Coefficient ops for B = F_{q^{nm}} (codes in ext.fq); q^i twists reduce i mod nm."""

    def __init__(self, ext: ExtField):
        self.ext = ext
        self.fq = ext.fq
        self.zero = 0
        self.one = 1
        self._nm = ext.tower.n * ext.m

    def add(self, a, b):
        return self.fq.add(a, b)

    def neg(self, a):
        return self.fq.neg(a)

    def mul(self, a, b):
        return self.fq.mul(a, b)

    def inv(self, a):
        return self.fq.inv(a)

    def frob_q(self, a, i):
        return self.fq.frob(a, self.ext.tower.s * (i % self._nm))

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b


class TwistedElem:
    """a_0 + a_1 e_1 + ... + a_n e_n with coefficients in a pluggable ring."""

    __slots__ = ("params", "ring", "coeffs")

    def __init__(self, params: RingParams, ring, coeffs):
        self.params = params
        self.ring = ring
        cs = tuple(coeffs)
        if len(cs) != params.n + 1:
            raise ValueError(f"need {params.n + 1} coefficients")
        self.coeffs = cs

    @classmethod
    def unit(cls, params: RingParams, ring) -> "TwistedElem":
        return cls(params, ring, (ring.one,) + (ring.zero,) * params.n)

    def _check(self, other: "TwistedElem"):
        if self.params != other.params or not _same_ring(self.ring, other.ring):
            raise ValueError("mismatched ring parameters")

    def __add__(self, other: "TwistedElem") -> "TwistedElem":
        self._check(other)
        r = self.ring
        return TwistedElem(self.params, r, [r.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "TwistedElem") -> "TwistedElem":
        self._check(other)
        r = self.ring
        return TwistedElem(self.params, r,
                           [r.add(a, r.neg(b)) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "TwistedElem":
        r = self.ring
        return TwistedElem(self.params, r, [r.neg(a) for a in self.coeffs])

    def __mul__(self, other: "TwistedElem") -> "TwistedElem":
        return tmul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TwistedElem):
            return NotImplemented
        self._check(other)
        return all(self.ring.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def is_unit(self) -> bool:
        return not self.ring.is_zero(self.coeffs[0])

    def is_unipotent(self) -> bool:
        return self.ring.eq(self.coeffs[0], self.ring.one)

    def frobenius(self) -> "TwistedElem":
        """Coefficientwise q^n power (the F_{q^n}-Frobenius of the scheme)."""
        r = self.ring
        return TwistedElem(self.params, r, [r.frob_q(a, self.params.n) for a in self.coeffs])

    def __repr__(self):
        return f"TwistedElem({list(self.coeffs)})"


def tmul(x: TwistedElem, y: TwistedElem) -> TwistedElem:
    """Product in R_0(B) per the twist and the mode table."""
    x._check(y)
    n = x.params.n
    r = x.ring
    out = [r.zero] * (n + 1)
    for i, a in enumerate(x.coeffs):
        if r.is_zero(a):
            continue
        for j, b in enumerate(y.coeffs):
            if r.is_zero(b):
                continue
            k = _sym_target(x.params.mode, i, j, n)
            if k is None:
                continue
            out[k] = r.add(out[k], r.mul(a, r.frob_q(b, i)))
    return TwistedElem(x.params, r, out)


def tinv(x: TwistedElem) -> TwistedElem:
    """Two-sided inverse of a unit: geometric series in the nilpotent part."""
    r = x.ring
    n = x.params.n
    a0 = x.coeffs[0]
    if r.is_zero(a0):
        raise ZeroDivisionError("not a unit: a_0 = 0")
    a0inv = r.inv(a0)
    # z = a0^{-1} x = 1 + w with w nilpotent, w^{n+1} = 0
    z = TwistedElem(x.params, r, [r.mul(a0inv, c) for c in x.coeffs])
    w = TwistedElem(x.params, r, (r.zero,) + z.coeffs[1:])
    minus_w = -w
    acc = TwistedElem.unit(x.params, r)
    term = TwistedElem.unit(x.params, r)
    for _ in range(n):
        term = tmul(term, minus_w)
        acc = acc + term
    # x^{-1} = z^{-1} a0^{-1}; right factor twists through each e_i
    return TwistedElem(x.params, r,
                       [r.mul(c, r.frob_q(a0inv, i)) for i, c in enumerate(acc.coeffs)])


def lang(x: TwistedElem) -> TwistedElem:
    """Lang isogeny value Fr_{q^n}(x) * x^{-1}."""
    return tmul(x.frobenius(), tinv(x))


def embed_rational(params: RingParams, ring, u: TwistedElem) -> TwistedElem:
    """Push a base-field twisted element into an extension coefficient ring."""
    if isinstance(ring, ExtCoeffs):
        emb = ring.ext.embed
        return TwistedElem(params, ring, [int(emb[c]) for c in u.coeffs])
    return u


def semidirect_act(x: TwistedElem, gamma, u: TwistedElem | None = None) -> TwistedElem:
    """Right action x . (gamma, u) = gamma^{-1} x gamma u of R^x(F_{q^n})."""
    r = x.ring
    params = x.params
    gcode = gamma.code if isinstance(gamma, FqnElem) else int(gamma)
    if isinstance(r, ExtCoeffs):
        gcode = int(r.ext.embed[gcode])
    g = TwistedElem(params, r, (gcode,) + (r.zero,) * params.n)
    out = tmul(tmul(tinv(g), x), g)
    if u is not None:
        out = tmul(out, embed_rational(params, r, u))
    return out


# -- enumeration -------------------------------------------------------

def group_dim(which: str, n: int) -> int:
    """Number of free e-coordinates of U, H, H+, or the center."""
    d = (n - 1 + 1) // 2 if n % 2 == 0 else (n - 1) // 2
    if which == "U":
        return n
    if which == "H":
        return n - d
    if which == "H+":
        if n % 2 != 0:
            raise ValueError("H+ is only used for even n")
        return n - d + 1
    if which == "center":
        return 1
    raise ValueError(f"unknown subgroup {which!r}")


def enumerate_group(which: str, params: RingParams, ext: ExtField | None = None,
                    max_size: int = 2**22):
    """All points of U, H, H+, or the center over F_{q^n} (or an extension).

    Yields TwistedElem with a_0 = 1, duplicate-free, in code order.
    """
    tower = params.tower
    n = params.n
    ring = ExtCoeffs(ext) if ext is not None and ext.m > 1 else FieldCoeffs(tower)
    order = ring.fq.order
    dim = group_dim(which, n)
    if order**dim > max_size:
        raise SizeBoundError(f"group enumeration size {order**dim} exceeds {max_size}")
    d = params.d
    if which == "U":
        free = list(range(1, n + 1))
    elif which == "H":
        free = list(range(d + 1, n + 1))
    elif which == "H+":
        free = list(range(d, n + 1))
    else:
        free = [n]
    for idx in range(order**dim):
        coeffs = [ring.zero] * (n + 1)
        coeffs[0] = ring.one
        rem = idx
        for pos in free:
            coeffs[pos] = rem % order
            rem //= order
        yield TwistedElem(params, ring, coeffs)


# -- vectorized kernels on packed-code arrays ---------------------------

def _twists(fq, s: int, n: int, nm: int) -> list[np.ndarray]:
    return [fq.frob_table(s * (i % nm)) for i in range(n + 1)]


class VectorRing:
    """Vector kernels for R_0 over one (extension) field: arrays (..., n+1)."""

    def __init__(self, params: RingParams, ext: ExtField | None = None):
        self.params = params
        self.tower = params.tower
        self.ext = ext if ext is not None else params.tower.extension(1)
        self.fq = self.ext.fq
        self.n = params.n
        nm = params.n * self.ext.m
        self.tw = _twists(self.fq, self.tower.s, params.n, nm)

    def mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        n = self.n
        mode = self.params.mode
        shape = np.broadcast(A[..., 0], B[..., 0]).shape
        C = np.zeros(shape + (n + 1,), dtype=np.int64)
        for i in range(n + 1):
            Ai = A[..., i]
            if not np.any(Ai):
                continue
            Bt = B if i == 0 else self.tw[i][B]
            for j in range(n + 1):
                k = _sym_target(mode, i, j, n)
                if k is None:
                    continue
                C[..., k] = self.fq.vadd(C[..., k], self.fq.vmul(Ai, Bt[..., j]))
        return C

    def one(self, shape=()) -> np.ndarray:
        out = np.zeros(shape + (self.n + 1,), dtype=np.int64)
        out[..., 0] = 1
        return out

    def inv_unipotent(self, A: np.ndarray) -> np.ndarray:
        W = A.copy()
        W[..., 0] = 0
        minus_w = self.fq.vneg(W)
        acc = self.one(A.shape[:-1])
        term = self.one(A.shape[:-1])
        for _ in range(self.n):
            term = self.mul(term, minus_w)
            acc = self.fq.vadd(acc, term)
        return acc

    def frobenius(self, A: np.ndarray) -> np.ndarray:
        return self.tw[self.n][A] if self.ext.m > 1 else A.copy()

    def lang(self, A: np.ndarray) -> np.ndarray:
        return self.mul(self.frobenius(A), self.inv_unipotent(A))

    def conj_by_unit(self, A: np.ndarray, gcode: int) -> np.ndarray:
        """gamma^{-1} A gamma for rational gamma in F_{q^n}^x (base code)."""
        g = int(self.ext.embed[gcode])
        out = A.copy()
        for j in range(1, self.n + 1):
            factor = self.fq.mul(self.fq.inv(g), int(self.tw[j][g]))  # gamma^{q^j - 1}
            out[..., j] = self.fq.vmul(A[..., j], np.int64(factor))
        return out


def vtmul(vr: VectorRing, A, B):
    return vr.mul(A, B)


def vtinv(vr: VectorRing, A):
    return vr.inv_unipotent(A)


def vlang(vr: VectorRing, A):
    return vr.lang(A)


def unipotent_ids(order: int, n: int) -> np.ndarray:
    return np.arange(order**n, dtype=np.int64)


def unipotent_coords(order: int, n: int, ids: np.ndarray) -> np.ndarray:
    """Decode group element ids to coefficient arrays (..., n+1) with a_0 = 1."""
    ids = np.asarray(ids, dtype=np.int64)
    out = np.zeros(ids.shape + (n + 1,), dtype=np.int64)
    out[..., 0] = 1
    rem = ids.copy()
    for j in range(1, n + 1):
        out[..., j] = rem % order
        rem //= order
    return out


def unipotent_encode(order: int, n: int, coords: np.ndarray) -> np.ndarray:
    ids = np.zeros(coords.shape[:-1], dtype=np.int64)
    for j in range(n, 0, -1):
        ids = ids * order + coords[..., j]
    return ids
