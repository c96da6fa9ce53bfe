"""Finite-group plumbing: dense id-coded unipotent groups, exponent-histogram
characters, exact inner products, and the dual of a finite abelian group via
Smith normal form on a Cayley-graph presentation.

Conventions: a "hist" value is an integer vector of length N representing
sum_k h[k] zeta_N^k; exact equality always goes through reduction mod Phi_N.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .cyclo import CycloScalar, reduce_counts
from .twisted import RingParams, VectorRing, unipotent_coords, unipotent_encode

__all__ = [
    "UGroupOps",
    "smith_normal_form",
    "abelian_dual",
    "FinGroup",
    "inner_hists",
    "hist_mat_mul",
    "hist_mat_eq",
    "hist_mat_trace",
    "hist_identity",
]


class UGroupOps:
    """U(F_{q^n}) with dense element ids 0..Q^n-1 (mixed-radix coordinates)."""

    def __init__(self, params: RingParams):
        self.params = params
        self.tower = params.tower
        self.vr = VectorRing(params)
        self.order = params.tower.fqn.order
        self.n = params.n
        self.size = self.order**self.n
        self.identity = 0

    def decode(self, ids) -> np.ndarray:
        return unipotent_coords(self.order, self.n, np.asarray(ids, dtype=np.int64))

    def encode(self, coords) -> np.ndarray:
        return unipotent_encode(self.order, self.n, coords)

    def mul(self, a, b) -> np.ndarray:
        return self.encode(self.vr.mul(self.decode(a), self.decode(b)))

    def inv(self, a) -> np.ndarray:
        return self.encode(self.vr.inv_unipotent(self.decode(a)))

    def conj(self, g, h) -> np.ndarray:
        """g h g^{-1}."""
        return self.mul(self.mul(g, h), self.inv(g))

    def coord(self, ids, j: int) -> np.ndarray:
        """The a_j coordinate of elements (1 <= j <= n)."""
        return (np.asarray(ids, dtype=np.int64) // self.order ** (j - 1)) % self.order

    def all_ids(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)

    # -- subgroups by leading-coordinate patterns --------------------------

    def subgroup_ids(self, which: str) -> np.ndarray:
        n, d = self.n, self.params.d
        if which == "U":
            return self.all_ids()
        if which == "H":
            lo = d + 1
        elif which == "H+":
            if n % 2:
                raise ValueError("H+ only for even n")
            lo = d
        elif which == "center":
            lo = n
        else:
            raise ValueError(f"unknown subgroup {which!r}")
        free = list(range(lo, n + 1))
        count = self.order ** len(free)
        ids = np.zeros(count, dtype=np.int64)
        rem = np.arange(count, dtype=np.int64)
        for j in free:
            ids += (rem % self.order) * self.order ** (j - 1)
            rem = rem // self.order
        return np.sort(ids)

    def mask_of(self, ids: np.ndarray) -> np.ndarray:
        m = np.zeros(self.size, dtype=bool)
        m[ids] = True
        return m

    def coset_reps(self, which: str) -> np.ndarray:
        """Left-coset representatives s(a_1..a_{lo-1}) of H or H+ in U."""
        n, d = self.n, self.params.d
        lo = d + 1 if which == "H" else d
        free = list(range(1, lo))
        count = self.order ** len(free)
        ids = np.zeros(count, dtype=np.int64)
        rem = np.arange(count, dtype=np.int64)
        for j in free:
            ids += (rem % self.order) * self.order ** (j - 1)
            rem = rem // self.order
        return ids


class FinGroup:
    """A finite group on arbitrary hashable element keys with a mult oracle.

    Used for the local-field quotients; elements are enumerated from
    generators by closure.
    """

    def __init__(self, mul, inv, identity, elements=None, generators=None,
                 max_size: int = 2**22, name: str = ""):
        self.mul = mul
        self.inv = inv
        self.identity = identity
        self.name = name
        if elements is not None:
            self.elements = list(elements)
        else:
            assert generators is not None
            seen = {identity}
            frontier = [identity]
            while frontier:
                nxt = []
                for w in frontier:
                    for g in generators:
                        z = mul(w, g)
                        if z not in seen:
                            if len(seen) >= max_size:
                                raise RuntimeError("group closure exceeds max_size")
                            seen.add(z)
                            nxt.append(z)
                frontier = nxt
            self.elements = sorted(seen)
        self.index = {e: i for i, e in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def spot_check(self, rng, trials: int = 50) -> bool:
        els = self.elements
        for _ in range(trials):
            a, b, c = (els[rng.randrange(len(els))] for _ in range(3))
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                return False
            if self.mul(a, self.inv(a)) != self.identity:
                return False
        return True


# -- Smith normal form over the integers --------------------------------


def smith_normal_form(relations: list[list[int]], k: int):
    """Diagonalize the lattice in Z^k spanned by the relation vectors.

    Relations are treated as COLUMNS of a k x m matrix; row operations are
    tracked in a unimodular U (column operations only recombine relations and
    need no tracking).  Returns (diag, U) with U @ L = span of diag[i]*e_i, so
    Z^k / L  ~=  prod Z/diag[i]  via  x -> (U @ x) mod diag.
    """
    ncols = max(1, len(relations))
    m = [[relations[j][i] if j < len(relations) else 0 for j in range(ncols)]
         for i in range(k)]
    u = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    t = 0
    while t < k:
        pivot = None
        best = None
        for i in range(t, k):
            for j in range(t, ncols):
                a = m[i][j]
                if a and (best is None or abs(a) < best):
                    best = abs(a)
                    pivot = (i, j)
        if pivot is None:
            break
        while True:
            pi, pj = pivot
            if pi != t:
                m[t], m[pi] = m[pi], m[t]
                u[t], u[pi] = u[pi], u[t]
            if pj != t:
                for row in m:
                    row[t], row[pj] = row[pj], row[t]
            if m[t][t] < 0:
                m[t] = [-x for x in m[t]]
                u[t] = [-x for x in u[t]]
            a = m[t][t]
            clean = True
            for i in range(t + 1, k):
                qq = m[i][t] // a
                if qq:
                    m[i] = [x - qq * y for x, y in zip(m[i], m[t])]
                    u[i] = [x - qq * y for x, y in zip(u[i], u[t])]
                if m[i][t]:
                    clean = False
            for j in range(t + 1, ncols):
                qq = m[t][j] // a
                if qq:
                    for row in m:
                        row[j] -= qq * row[t]
                if m[t][j]:
                    clean = False
            if clean:
                break
            pivot = None
            best = None
            for i in range(t, k):
                for j in range(t, ncols):
                    x = m[i][j]
                    if x and (best is None or abs(x) < best):
                        best = abs(x)
                        pivot = (i, j)
        t += 1
    diag = [m[i][i] if i < min(k, ncols) and i < t else 0 for i in range(k)]
    return diag, u


def abelian_dual(group: FinGroup, generators: list):
    """All characters of a finite abelian group.

    Returns (conductor N, value_exponents) where value_exponents is an
    integer array of shape (#characters, |group|): character c sends
    group.elements[i] to zeta_N ** value_exponents[c, i].
    """
    k = len(generators)
    vec = {group.identity: tuple([0] * k)}
    relations = []
    frontier = [group.identity]
    while frontier:
        nxt = []
        for w in frontier:
            vw = vec[w]
            for gi, g in enumerate(generators):
                z = group.mul(w, g)
                cand = tuple(vw[j] + (1 if j == gi else 0) for j in range(k))
                if z not in vec:
                    vec[z] = cand
                    nxt.append(z)
                else:
                    rel = [a - b for a, b in zip(cand, vec[z])]
                    if any(rel):
                        relations.append(rel)
        frontier = nxt
    if len(vec) != len(group):
        raise ValueError("generators do not generate the group")
    diag, u = smith_normal_form(relations, k)
    if any(d == 0 for d in diag):
        raise ValueError("relation lattice not of full rank (group not finite?)")
    n_char = 1
    for d in diag:
        n_char = n_char * d // _gcd(n_char, d)
    N = n_char  # lcm of invariant factors
    total = 1
    for d in diag:
        total *= d
    if total != len(group):
        raise AssertionError("diagonal factors do not multiply to |G|")
    # coordinates y = U @ v(e) for every element
    elems = group.elements
    prim = np.zeros((len(elems), k), dtype=np.int64)
    for i, e in enumerate(elems):
        v = vec[e]
        for j in range(k):
            prim[i, j] = sum(u[j][t] * v[t] for t in range(k))
    # characters indexed by tuples t in prod Z/diag[j]
    weights = [N // d if d else 0 for d in diag]
    idx = [0] * k
    out = np.zeros((total, len(elems)), dtype=np.int64)
    for c in range(total):
        acc = np.zeros(len(elems), dtype=np.int64)
        for j in range(k):
            if idx[j]:
                acc += idx[j] * weights[j] * prim[:, j]
        out[c] = acc % N
        for j in range(k):
            idx[j] += 1
            if idx[j] < diag[j]:
                break
            idx[j] = 0
    return N, out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# -- histogram-valued matrices and inner products -------------------------


def inner_hists(h1: np.ndarray, h2: np.ndarray, n_root: int, group_size: int) -> CycloScalar:
    """(1/|G|) sum_g chi1(g) conj(chi2(g)) for exponent-histogram characters."""
    s = np.einsum("gi,gj->ij", h1.astype(np.int64), h2.astype(np.int64))
    counts = np.zeros(n_root, dtype=np.int64)
    for i in range(n_root):
        for j in range(n_root):
            counts[(i - j) % n_root] += s[i, j]
    val = CycloScalar.from_counts(n_root, counts)
    return val * CycloScalar.rational(Fraction(1, group_size))


def hist_identity(dim: int, n_root: int) -> np.ndarray:
    m = np.zeros((dim, dim, n_root), dtype=np.int64)
    for i in range(dim):
        m[i, i, 0] = 1
    return m


def hist_mat_mul(a: np.ndarray, b: np.ndarray, n_root: int) -> np.ndarray:
    dim = a.shape[0]
    dtype = object if (a.dtype == object or b.dtype == object) else np.int64
    out = np.zeros((dim, b.shape[1], n_root), dtype=dtype)
    for t in range(n_root):
        at = a[:, :, t]
        if not at.any():
            continue
        prod = np.tensordot(at, b, axes=(1, 0))  # (dim, dim2, N)
        out += np.roll(prod, t, axis=2)
    return out


def hist_mat_eq(a: np.ndarray, b: np.ndarray, n_root: int) -> bool:
    diff = (a - b).reshape(-1, n_root)
    return not reduce_counts(n_root, diff).any()


def hist_mat_trace(a: np.ndarray, n_root: int) -> CycloScalar:
    counts = np.trace(a, axis1=0, axis2=1)
    return CycloScalar.from_counts(n_root, counts)
