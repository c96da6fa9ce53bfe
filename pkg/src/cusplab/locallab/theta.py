"""Characters of truncated E^x: enumeration, levels, primitivity, and the
trace-pairing data (y, psi_0) of the very-regular-element lemma."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..cyclo import CycloScalar
from ..fields import AdditiveChar, FieldTower
from ..groups import FinGroup, abelian_dual
from .rings import EUnit, TruncE

__all__ = [
    "ThetaChar",
    "Psi0",
    "unit_group_elements",
    "unit_group_dual",
    "list_primitive_theta",
    "very_regular",
    "very_regular_units",
    "find_y_psi0",
]


def unit_group_elements(tower: FieldTower, level: int) -> list[TruncE]:
    """All of (O_E/P^level)^x, in deterministic code order."""
    q = tower.fqn.order
    out = []
    for c0 in range(1, q):
        for rest in itertools.product(range(q), repeat=level - 1):
            out.append(TruncE(tower, level, (c0,) + rest))
    return out


def _unit_group_generators(tower: FieldTower, level: int) -> list[TruncE]:
    gens = [TruncE.constant(tower, level, tower.fqn.generator)]
    p = tower.p
    for k in range(1, level):
        for i in range(tower.fqn.k):
            coeffs = [0] * level
            coeffs[k] = p**i
            coeffs[0] = 1
            gens.append(TruncE(tower, level, tuple(coeffs)))
    return gens


def unit_group_dual(tower: FieldTower, level: int):
    """(N, characters) of (O_E/P^level)^x via the abelian-dual machinery:
    characters are exponent dicts element -> k with value zeta_N^k."""
    elements = unit_group_elements(tower, level)
    grp = FinGroup(lambda a, b: a * b, lambda a: a.inverse(),
                   TruncE.one(tower, level), elements=elements)
    n_root, tables = abelian_dual(grp, _unit_group_generators(tower, level))
    return n_root, grp, tables


@dataclass(frozen=True)
class Psi0:
    """Additive character of F of level r0: psi0(x) depends on the w^{r0-1}
    coefficient t via a nontrivial character of F_q with parameter c."""

    tower: FieldTower
    r0: int
    c: int  # code in F_q, nonzero

    def exponent_of_coeff(self, t_code_q: int) -> int:
        """Exponent of zeta_p on the w^{r0-1}-coefficient t (an F_q code)."""
        fq = self.tower.fq
        prod = fq.mul(self.c, t_code_q)
        return int(fq.trace_to_prime_table()[prod])

    def exponent_of_F(self, coeffs_q: tuple) -> int:
        """psi0 on an F-element given by F_q coefficients (level >= r0)."""
        if len(coeffs_q) < self.r0:
            raise ValueError("need coefficients up to w^{r0-1}")
        return self.exponent_of_coeff(coeffs_q[self.r0 - 1])

    def value_of_F(self, coeffs_q: tuple) -> CycloScalar:
        return CycloScalar.zeta(self.tower.p, self.exponent_of_F(coeffs_q))


class ThetaChar:
    """A character of E^x of level <= r0, truncated: a table on
    (O_E/P^{r0})^x plus the value at the uniformizer."""

    def __init__(self, tower: FieldTower, r0: int, n_root: int,
                 table: dict, varpi_value: CycloScalar | None = None):
        self.tower = tower
        self.r0 = r0
        self.n_root = n_root
        self.table = table  # TruncE -> exponent of zeta_{n_root}
        self.varpi_value = varpi_value if varpi_value is not None else CycloScalar.one()

    # -- evaluation ------------------------------------------------------

    def exponent(self, u: TruncE) -> int:
        if u.level != self.r0:
            u = u.reduce(self.r0) if u.level > self.r0 else u.lift(self.r0)
        return self.table[u]

    def value_unit(self, u: TruncE) -> CycloScalar:
        return CycloScalar.zeta(self.n_root, self.exponent(u))

    def value(self, x: EUnit) -> CycloScalar:
        return self.varpi_value**x.val * self.value_unit(x.unit)

    # -- structure ---------------------------------------------------------

    def level(self) -> int:
        """Least r >= 0 with theta trivial on U^r_E."""
        for r in range(self.r0 + 1):
            if self._trivial_on_um(r):
                return r
        raise AssertionError("character not trivial on U^{r0}")

    def _trivial_on_um(self, m: int) -> bool:
        if m == 0:
            return all(v == 0 for v in self.table.values())
        q = self.tower.fqn.order
        for u, e in self.table.items():
            if u.coeffs[0] == 1 and all(c == 0 for c in u.coeffs[1:m]):
                if e != 0:
                    return False
        return True

    def gamma_twist(self, i: int) -> "ThetaChar":
        """theta^gamma with gamma = phi^i: theta^gamma(x) = theta(gamma(x))."""
        tbl = {u: self.table[u.frob(i)] for u in self.table}
        return ThetaChar(self.tower, self.r0, self.n_root, tbl, self.varpi_value)

    def ratio_level(self, i: int) -> int:
        """Level of theta / theta^gamma for gamma = phi^i."""
        tw = self.gamma_twist(i)
        diff = {u: (self.table[u] - tw.table[u]) % self.n_root for u in self.table}
        ratio = ThetaChar(self.tower, self.r0, self.n_root, diff)
        return ratio.level()

    def is_primitive(self) -> bool:
        if self.level() != self.r0:
            return False
        return all(self.ratio_level(i) == self.r0 for i in range(1, self.tower.n))

    def top_psi(self) -> AdditiveChar:
        """The additive character psi of F_{q^n} with
        theta(1 + w^{r0-1} b) = psi(b); primitive theta gives it trivial stabilizer."""
        tower = self.tower
        p = tower.p
        scale = self.n_root // p
        exps = {}
        for b in range(tower.fqn.order):
            coeffs = [0] * self.r0
            coeffs[0] = 1
            coeffs[self.r0 - 1] = b
            e = self.exponent(TruncE(tower, self.r0, tuple(coeffs)))
            if e % scale:
                raise AssertionError("top-level values are not p-th roots of unity")
            exps[b] = (e // scale) % p
        for c in range(tower.fqn.order):
            psi = tower.additive_char(c)
            if all(psi.exponent(b) == exps[b] for b in exps):
                return psi
        raise AssertionError("no additive character matches the top level")

    def restriction_to_OF(self) -> dict:
        """Value exponents on the image of O_F^x in the truncated unit group."""
        tower = self.tower
        out = {}
        for u in self.table:
            if all(int(tower.sec_q[c]) >= 0 for c in u.coeffs):
                out[u] = self.table[u]
        return out

    def central_exponents_key(self) -> tuple:
        return tuple(sorted((u.coeffs, e) for u, e in self.restriction_to_OF().items()))

    def table_key(self) -> tuple:
        return tuple(sorted((u.coeffs, e) for u, e in self.table.items()))


def list_primitive_theta(tower: FieldTower, r0: int,
                         varpi_values: tuple | None = None,
                         sample: int | None = None, seed: int = 0) -> list[ThetaChar]:
    """All primitive characters of level r0 on the truncated unit group, each
    repeated for every configured value of theta(varpi).  With sample=k a
    seeded subsample of size <= k is returned instead of the full list."""
    import random as _random

    n_root, grp, tables = unit_group_dual(tower, r0)
    if varpi_values is None:
        varpi_values = (CycloScalar.one(),)
    out = []
    for row in tables:
        tbl = {e: int(x) for e, x in zip(grp.elements, row)}
        th = ThetaChar(tower, r0, n_root, tbl)
        if th.is_primitive():
            for w in varpi_values:
                out.append(ThetaChar(tower, r0, n_root, tbl, w))
    if sample is not None and len(out) > sample:
        rng = _random.Random(seed)
        out = [out[i] for i in sorted(rng.sample(range(len(out)), sample))]
    return out


def very_regular(x: TruncE) -> bool:
    """Unit whose residue has full Galois orbit."""
    if not x.is_unit():
        return False
    t = x.tower
    return t.galois_stabilizer(t.element(x.coeffs[0])) == t.n


def very_regular_units(tower: FieldTower, level: int) -> list[TruncE]:
    return [u for u in unit_group_elements(tower, level) if very_regular(u)]


@dataclass
class YPsi0Witness:
    y_residue: int                 # code of the very regular y mod P_E
    psi0: Psi0
    unique_y: bool


def find_y_psi0(theta: ThetaChar) -> YPsi0Witness:
    """A very regular y and level-r0 psi0 with theta(1+a) = psi0(Tr_{E/F}(y a))
    for all a in P_E^{r0-1}; search over the q-1 nontrivial psi0 and y mod P."""
    tower = theta.tower
    r0 = theta.r0
    fqn, fq = tower.fqn, tower.fq
    p = tower.p
    scale = theta.n_root // p

    def theta_top_exp(b: int) -> int:
        coeffs = [0] * r0
        coeffs[0] = 1
        coeffs[r0 - 1] = b
        e = theta.exponent(TruncE(tower, r0, tuple(coeffs)))
        assert e % scale == 0
        return (e // scale) % p

    targets = {b: theta_top_exp(b) for b in range(fqn.order)}
    hits = []
    for c in range(1, fq.order):
        psi0 = Psi0(tower, r0, c)
        for y in range(1, fqn.order):
            ok = True
            for b in range(fqn.order):
                tr = tower.rel_trace(tower.element(fqn.mul(y, b)), 1).code
                if psi0.exponent_of_coeff(int(tower.sec_q[tr])) != targets[b]:
                    ok = False
                    break
            if ok:
                hits.append((c, y))
    if not hits:
        raise AssertionError("no (y, psi0) found: contradicts the pairing lemma")
    c, y = hits[0]
    ys_for_c = [yy for (cc, yy) in hits if cc == c]
    return YPsi0Witness(y, Psi0(tower, r0, c), len(ys_for_c) == 1)
