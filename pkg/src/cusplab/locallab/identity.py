"""Character identities of the truncated constructions.

GL side: tr pi(x) collapses to the Galois-coset sum sum_gamma tr sigma(gamma x
gamma^{-1}) for very regular x (the other cosets are excluded by the
conjugation lemmas, which the scans check separately).  D side: the quotient
D^x / F^x U^N_D is finite, so the Frobenius character formula is summed
honestly over explicit coset representatives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..cyclo import CycloScalar
from ..groups import FinGroup
from .constructions import SigmaLevel, ThetaTilde
from .rings import TruncA, TruncD, TruncE
from .theta import ThetaChar, very_regular_units

__all__ = [
    "gl_character_identity",
    "d_coset_reps",
    "d_character_identity",
    "central_character_rows",
    "d_full_induction_inner",
]


@dataclass
class IdentityReport:
    side: str
    sign: int
    checked: int
    failures: list


def _object_trace(obj, x, varpi_val: int = 0) -> CycloScalar:
    if isinstance(obj, ThetaTilde):
        return obj.value(x, varpi_val)
    return obj.trace(x, varpi_val)


def gl_character_identity(theta: ThetaChar, obj) -> IdentityReport:
    """tr pi(x) = (-1)^{r0(n-1)} sum_gamma theta^gamma(x) on very regular x."""
    tower = theta.tower
    n = tower.n
    r0 = theta.r0
    sign = (-1) ** (r0 * (n - 1))
    quot = r0
    failures = []
    checked = 0
    for x in very_regular_units(tower, r0):
        lhs = CycloScalar.zero()
        rhs = CycloScalar.zero()
        for i in range(n):
            gx = x.frob(i)
            lhs = lhs + _object_trace(obj, TruncA.from_E(tower, quot, gx))
            rhs = rhs + theta.value_unit(gx)
        rhs = rhs * CycloScalar.rational(sign)
        checked += 1
        if lhs != rhs:
            failures.append((x.coeffs, lhs.render(), rhs.render()))
    return IdentityReport("gl", sign, checked, failures)


_d_coset_cache: dict = {}


def d_coset_reps(theta: ThetaChar, depth: int) -> list[TruncD]:
    """Representatives 1+c of the right cosets (O_E^x U^depth_D) \\ O_D^x,
    c supported on the C'-positions below depth; verified complete and disjoint."""
    tower = theta.tower
    n = tower.n
    quot = n * (theta.r0 - 1) + 1
    key = (id(tower), theta.r0, depth)
    if key in _d_coset_cache:
        return _d_coset_cache[key]
    q_n = tower.fqn.order
    positions = [pos for pos in range(1, depth) if pos % n != 0]
    reps = []
    for choice in itertools.product(range(q_n), repeat=len(positions)):
        cc = [0] * quot
        cc[0] = 1
        for pos, v in zip(positions, choice):
            cc[pos] = v
        reps.append(TruncD.from_codes(tower, quot, tuple(cc)))
    for i, r1 in enumerate(reps):
        r1i = r1.inverse()
        for r2 in reps[i + 1:]:
            if (r2 * r1i).in_unit_EU(depth):
                raise AssertionError("coset representatives not disjoint")
    # completeness by counting
    units_d = (q_n - 1) * q_n ** (quot - 1)
    from .constructions import d_quotient_order
    assert len(reps) * d_quotient_order(tower, theta.r0, depth) == units_d
    _d_coset_cache[key] = reps
    return reps


_d_contrib_cache: dict = {}


def _d_contributions(theta: ThetaChar, depth: int):
    """For each very regular x (mod truncation): the conjugates g x g^{-1}
    landing in K, over the full coset space.  Independent of theta's values."""
    tower = theta.tower
    key = (id(tower), theta.r0, depth)
    if key in _d_contrib_cache:
        return _d_contrib_cache[key]
    n = tower.n
    quot = n * (theta.r0 - 1) + 1
    reps = d_coset_reps(theta, depth)
    repinvs = [r.inverse() for r in reps]
    out = []
    for x in very_regular_units(tower, theta.r0):
        xd = TruncD.from_E(tower, quot, x)
        ys = []
        for rep, repinv in zip(reps, repinvs):
            base = rep * xd * repinv
            for j in range(n):
                y = base.pi_conj(j)
                if y.in_unit_EU(depth):
                    ys.append(y)
        out.append((x, ys))
    _d_contrib_cache[key] = out
    return out


def d_character_identity(theta: ThetaChar, obj) -> IdentityReport:
    """tr rho(x) = (-1)^{(r0-1)(n-1)} sum_gamma theta^gamma(x), summed honestly
    over the finite coset space K \\ D^x."""
    tower = theta.tower
    n = tower.n
    r0 = theta.r0
    sign = (-1) ** ((r0 - 1) * (n - 1))
    failures = []
    checked = 0
    for x, ys in _d_contributions(theta, obj.depth):
        lhs = CycloScalar.zero()
        for y in ys:
            lhs = lhs + _object_trace(obj, y)
        rhs = CycloScalar.zero()
        for i in range(n):
            rhs = rhs + theta.value_unit(x.frob(i))
        rhs = rhs * CycloScalar.rational(sign)
        checked += 1
        if lhs != rhs:
            failures.append((x.coeffs, lhs.render(), rhs.render()))
    return IdentityReport("d", sign, checked, failures)


def central_character_rows(theta: ThetaChar, obj, side: str) -> bool:
    """Central elements of O_F^x act by theta(x) times the identity."""
    tower = theta.tower
    r0 = theta.r0
    quot = tower.n * (r0 - 1) + 1 if side == "d" else r0
    ok = True
    for code in range(1, tower.fq.order):
        e = TruncE.constant(tower, r0, int(tower.emb_q[code]))
        x = TruncA.from_E(tower, quot, e) if side == "gl" else TruncD.from_E(tower, quot, e)
        val = _object_trace(obj, x)
        dim = 1 if isinstance(obj, ThetaTilde) else obj.dim
        if val != theta.value_unit(e) * dim:
            ok = False
    return ok


def d_full_induction_inner(theta: ThetaChar, obj) -> CycloScalar:
    """inner(chi_rho, chi_rho) over the finite quotient D^x/(w^Z U^N_D);
    needs theta(varpi) = 1 so that rho descends."""
    tower = theta.tower
    n = tower.n
    r0 = theta.r0
    assert theta.varpi_value == CycloScalar.one()
    depth = obj.depth
    quot = n * (r0 - 1) + 1
    q_n = tower.fqn.order
    reps = d_coset_reps(theta, depth)

    def chi_rho(jpow: int, u: TruncD) -> CycloScalar:
        # x = Pi^jpow u has Pi-valuation jpow; conjugates keep it, and K-elements
        # have valuation 0 mod n, so only jpow = 0 can contribute at all.
        total = CycloScalar.zero()
        if jpow % n != 0:
            return total
        for j in range(n):
            for rep in reps:
                y = (rep * u * rep.inverse()).pi_conj(j)
                if y.in_unit_EU(depth):
                    total = total + _object_trace(obj, y)
        return total

    norm = CycloScalar.zero()
    size = 0
    for jpow in range(n):
        for choice in itertools.product(range(q_n), repeat=quot):
            if choice[0] == 0:
                continue
            u = TruncD.from_codes(tower, quot, choice)
            v = chi_rho(jpow, u)
            norm = norm + v * v.conj()
            size += 1
    from fractions import Fraction
    return norm * CycloScalar.rational(Fraction(1, size))
