"""Symbolic alpha-maps, exponential sums, and point censuses on the Lang
hypersurface X = L^{-1}(Y) inside the unipotent group U.

The polynomial alpha_j is obtained by expanding

    f_j = (1 + a_j^{q^n} e_j + ... + a_d^{q^n} e_d)
        * (1 + a_{d+1} e_{d+1} + ... + a_{n-j} e_{n-j} + a_n e_n)
        * (1 + a_j e_j + ... + a_d e_d)^{-1}

inside R_0(SparsePoly) and reading off the e_n coordinate, which has the form
a_n - alpha_j(a_j, ..., a_{n-j}).  Exponential sums over extension fields
stand proxy for the cohomology statements: every assertion here is an exact
identity of cyclotomic numbers or of point counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclo import CycloScalar
from .fields import AdditiveChar, ExtField, FqnElem
from .polys import PolyCoeffs, SparsePoly
from .twisted import (CHAIN, RingParams, TwistedElem, VectorRing, tinv, tmul,
                      unipotent_coords)

__all__ = [
    "BudgetExceeded",
    "SumReport",
    "compute_alpha",
    "compute_alpha_j",
    "verify_step",
    "closed_form_alpha_d",
    "alpha_vars",
    "exp_sum",
    "purity_consistency",
    "enumerate_X",
    "count_X",
    "twisted_norm_count",
    "fixed_census",
    "zeta_fixed_set",
    "dl_trace",
    "exchange_identity",
]

DEFAULT_BUDGET = 2**26


class BudgetExceeded(RuntimeError):
    """Enumeration would exceed the configured evaluation budget."""


def _poly_ring(params: RingParams) -> PolyCoeffs:
    return PolyCoeffs(params.tower, params.n)


def _f_j(params: RingParams, j: int) -> TwistedElem:
    n, d = params.n, params.d
    ring = _poly_ring(params)

    def var(i):  # a_i, 1-indexed
        return SparsePoly.variable(params.tower, n, i - 1)

    left = [ring.zero] * (n + 1)
    left[0] = ring.one
    for i in range(j, d + 1):
        left[i] = var(i).frob_q(n)
    mid = [ring.zero] * (n + 1)
    mid[0] = ring.one
    for i in range(d + 1, n - j + 1):
        mid[i] = var(i)
    mid[n] = var(n)
    right = [ring.zero] * (n + 1)
    right[0] = ring.one
    for i in range(j, d + 1):
        right[i] = var(i)
    x1 = TwistedElem(params, ring, left)
    m = TwistedElem(params, ring, mid)
    x0 = TwistedElem(params, ring, right)
    return tmul(tmul(x1, m), tinv(x0))


def alpha_vars(params: RingParams, j: int = 1) -> list[int]:
    """0-based indices of the variables a_j, ..., a_{n-j} of alpha_j."""
    return list(range(j - 1, params.n - j))


def compute_alpha_j(params: RingParams, j: int) -> SparsePoly:
    """The polynomial alpha_j with pr_n(f_j) = a_n - alpha_j; alpha_1 = alpha."""
    n, d = params.n, params.d
    if not 1 <= j <= d:
        raise ValueError(f"j must satisfy 1 <= j <= d = {d}")
    f = _f_j(params, j)
    prn = f.coeffs[n]
    a_n = SparsePoly.variable(params.tower, n, n - 1)
    alpha = a_n - prn
    if alpha.uses_var(n - 1):
        raise AssertionError("pr_n(f_j) is not of the form a_n - alpha_j")
    bad = [i for i in alpha.support() if i not in alpha_vars(params, j)]
    if bad:
        raise AssertionError(f"alpha_{j} involves unexpected variables {bad}")
    return alpha


def compute_alpha(params: RingParams) -> SparsePoly:
    """alpha = alpha_1, in the variables a_1, ..., a_{n-1}."""
    return compute_alpha_j(params, 1)


@dataclass
class StepWitness:
    j: int
    beta: SparsePoly
    residual: SparsePoly
    beta_clean: bool          # beta_j does not involve a_{n-j}
    substitution_ok: bool     # alpha_j at a_j = a_{n-j} = 0 equals alpha_{j+1}


def verify_step(params: RingParams, j: int) -> StepWitness:
    """Decompose alpha_j = a_{n-j} a_j^{q^{n-j}} - a_j^{q^n} a_{n-j}^{q^j}
    + alpha_{j+1} + a_j * beta_j and certify the pieces."""
    n, d = params.n, params.d
    if not 1 <= j < d:
        raise ValueError(f"j must satisfy 1 <= j < d = {d}")
    tower = params.tower
    q = params.q
    aj = compute_alpha_j(params, j)
    aj1 = compute_alpha_j(params, j + 1)
    lead = (SparsePoly.monomial(tower, n, {n - j - 1: 1, j - 1: q ** (n - j)})
            - SparsePoly.monomial(tower, n, {j - 1: q ** n, n - j - 1: q ** j}))
    t = aj - lead - aj1
    beta_clean = not t.uses_var(n - j - 1)
    if not beta_clean:
        raise AssertionError(f"stray a_{n-j} monomials in alpha_{j} decomposition")
    beta = t.div_var(j - 1)
    recombined = lead + aj1 + SparsePoly.variable(tower, n, j - 1) * beta
    residual = aj - recombined
    substitution_ok = aj.subs_zero([j - 1, n - j - 1]) == aj1
    return StepWitness(j, beta, residual, beta_clean, substitution_ok)


def closed_form_alpha_d(params: RingParams) -> SparsePoly:
    """The base-case closed form of alpha_d (induction-base displays)."""
    n, d, q = params.n, params.d, params.q
    tower = params.tower
    if n % 2 == 0:
        return (SparsePoly.monomial(tower, n, {d - 1: q ** n + q ** d})
                - SparsePoly.monomial(tower, n, {d - 1: q ** d + 1}))
    base = (SparsePoly.monomial(tower, n, {d - 1: q ** (d + 1), d: 1})
            - SparsePoly.monomial(tower, n, {d - 1: q ** n, d: q ** d}))
    if params.mode == CHAIN and n == 3:
        base = base + (SparsePoly.monomial(tower, n, {0: 1 + q + q ** 2})
                       - SparsePoly.monomial(tower, n, {0: q + q ** 2 + q ** 3}))
    return base


# -- exponential sums ----------------------------------------------------


@dataclass
class SumReport:
    q: int
    n: int
    mode: str
    psi_param: int
    m: int
    nterms: int
    value: CycloScalar

    def magnitude_sq(self) -> Fraction:
        return self.value.magnitude_sq()


def exp_sum(poly: SparsePoly, psi: AdditiveChar, m: int = 1,
            var_indices: list[int] | None = None,
            budget: int = DEFAULT_BUDGET,
            params: RingParams | None = None) -> SumReport:
    """S_m = sum over x in F_{q^{nm}}^k of psi(Tr_{F_{q^{nm}}/F_{q^n}}(poly(x))); exact."""
    tower = psi.tower
    if var_indices is None:
        var_indices = poly.support()
    ext = tower.extension(m)
    k = len(var_indices)
    total = ext.fq.order ** k
    if total > budget:
        raise BudgetExceeded(f"{total} evaluation points exceed budget {budget}")
    ids = np.arange(total, dtype=np.int64)
    coords = [np.zeros(total, dtype=np.int64)] * poly.nvars
    rem = ids
    for v in var_indices:
        coords = list(coords)
        coords[v] = rem % ext.fq.order
        rem = rem // ext.fq.order
    vals = poly.eval_codes(ext, coords)
    down = ext.rel_trace_table()[vals]
    exps = psi.exponent_table()[down]
    counts = np.bincount(exps, minlength=tower.p)
    value = CycloScalar.from_counts(tower.p, counts)
    mode = params.mode if params is not None else "?"
    return SumReport(tower.q, tower.n, mode, psi.c, m, total, value)


@dataclass
class PurityReport:
    s1: SumReport
    s2: SumReport
    dim_factor: int               # D = 1 (n odd) or q^{n/2} (n even)
    eps: int | None               # sign with S1^2 = eps * D * S2, None if neither fits
    magnitude_ok: bool            # |S1|^2 == D^2 q^{n(n-1)}


def purity_consistency(params: RingParams, psi: AdditiveChar,
                       budget: int = DEFAULT_BUDGET) -> PurityReport:
    """Single-eigenvalue consequence of cohomological concentration, checked exactly."""
    n, q = params.n, params.q
    alpha = compute_alpha(params)
    v = alpha_vars(params, 1)
    s1 = exp_sum(alpha, psi, 1, v, budget, params)
    s2 = exp_sum(alpha, psi, 2, v, budget, params)
    dim_factor = 1 if n % 2 else q ** (n // 2)
    lhs = s1.value * s1.value
    rhs = s2.value * CycloScalar.rational(dim_factor)
    if lhs == rhs:
        eps = 1
    elif lhs == -rhs:
        eps = -1
    else:
        eps = None
    magnitude_ok = s1.magnitude_sq() == Fraction(dim_factor**2 * q ** (n * (n - 1)))
    return PurityReport(s1, s2, dim_factor, eps, magnitude_ok)


# -- the hypersurface X --------------------------------------------------


def enumerate_X(params: RingParams, m: int = 1, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Coefficient rows (count, n+1) of all x in U(F_{q^{nm}}) with pr_n(L(x)) = 0."""
    tower = params.tower
    ext = tower.extension(m)
    n = params.n
    total = ext.fq.order ** n
    if total > budget:
        raise BudgetExceeded(f"{total} candidate points exceed budget {budget}")
    vr = VectorRing(params, ext)
    coords = unipotent_coords(ext.fq.order, n, np.arange(total, dtype=np.int64))
    lv = vr.lang(coords)
    keep = lv[..., n] == 0
    return coords[keep]


def count_X(params: RingParams, m: int = 1, budget: int = DEFAULT_BUDGET) -> int:
    return int(enumerate_X(params, m, budget).shape[0])


def twisted_norm_count(params: RingParams, m: int = 1) -> int:
    """Independent prediction of |X(F_{q^{nm}})|: a fiber of the Lang map over
    y meets the rational points iff the twisted norm Fr^{m-1}(y)...Fr(y) y is 1,
    and then it is a full U(F_{q^n})-coset."""
    tower = params.tower
    ext = tower.extension(m)
    n = params.n
    vr = VectorRing(params, ext)
    total = ext.fq.order ** (n - 1)
    ids = np.arange(total, dtype=np.int64)
    coords = np.zeros((total, n + 1), dtype=np.int64)
    coords[:, 0] = 1
    rem = ids
    for j in range(1, n):  # a_n = 0 on Y
        coords[:, j] = rem % ext.fq.order
        rem = rem // ext.fq.order
    prod = vr.one((total,))
    power = coords
    for _ in range(m):
        prod = vr.mul(power, prod)
        power = vr.frobenius(power)
    is_one = np.all(prod == vr.one((total,)), axis=-1)
    return int(np.count_nonzero(is_one)) * tower.q ** (n * n)


def zeta_fixed_set(params: RingParams, zeta: FqnElem, m: int = 1,
                   budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Points of X(F_{q^{nm}}) fixed by conjugation by a very regular zeta."""
    xs = enumerate_X(params, m, budget)
    ext = params.tower.extension(m)
    vr = VectorRing(params, ext)
    conj = vr.conj_by_unit(xs, zeta.code)
    fixed = np.all(conj == xs, axis=-1)
    return xs[fixed]


def fixed_census(params: RingParams, zeta: FqnElem, a: FqnElem, m: int = 1,
                 budget: int = DEFAULT_BUDGET) -> int:
    """Number of fixed points of x -> zeta^{-1} x zeta (1 + a e_n) on X(F_{q^{nm}})."""
    tower = params.tower
    if tower.galois_stabilizer(zeta) != tower.n:
        raise ValueError("zeta must be very regular (trivial Galois stabilizer)")
    xs = enumerate_X(params, m, budget)
    ext = tower.extension(m)
    vr = VectorRing(params, ext)
    moved = vr.conj_by_unit(xs, zeta.code)
    u = np.zeros(params.n + 1, dtype=np.int64)
    u[0] = 1
    u[params.n] = int(ext.embed[a.code])
    moved = vr.mul(moved, u)
    return int(np.count_nonzero(np.all(moved == xs, axis=-1)))


def dl_trace(params: RingParams, zeta: FqnElem, psi: AdditiveChar, m: int = 1,
             budget: int = DEFAULT_BUDGET) -> CycloScalar:
    """(-1)^{n-1} q^{-n} sum_a psi(a) census(zeta, a): the psi-averaged Lefschetz
    number placed in degree n-1; the contract is that this equals (-1)^{n-1}."""
    tower = params.tower
    if psi.stabilizer() != tower.n:
        raise ValueError("psi must have trivial Galois stabilizer")
    p = tower.p
    counts = np.zeros(p, dtype=np.int64)
    for a_code in range(tower.fqn.order):
        c = fixed_census(params, zeta, tower.element(a_code), m, budget)
        if c:
            counts[psi.exponent(a_code)] += c
    total = CycloScalar.from_counts(p, counts)
    sign = Fraction((-1) ** (tower.n - 1), tower.q ** tower.n)
    return total * CycloScalar.rational(sign)


def exchange_identity(params: RingParams, psi: AdditiveChar) -> tuple[CycloScalar, CycloScalar]:
    """Both sides of the affine-space identification: sum of psi(alpha(x)) over
    A^{n-1}(F_{q^n}) versus the sum of psi of the a_n-coordinate of h over the
    F_{q^n}-points of f^{-1}(Y), computed through the twisted-ring model."""
    tower = params.tower
    n, d = params.n, params.d
    alpha = compute_alpha(params)
    lhs = exp_sum(alpha, psi, 1, alpha_vars(params, 1), params=params).value

    vr = VectorRing(params)
    order = tower.fqn.order
    total = order ** n
    ids = np.arange(total, dtype=np.int64)
    sx = np.zeros((total, n + 1), dtype=np.int64)
    sx[:, 0] = 1
    h = np.zeros((total, n + 1), dtype=np.int64)
    h[:, 0] = 1
    rem = ids
    for i in range(1, d + 1):
        sx[:, i] = rem % order
        rem = rem // order
    for i in range(d + 1, n + 1):
        h[:, i] = rem % order
        rem = rem // order
    fval = vr.mul(vr.mul(vr.frobenius(sx), h), vr.inv_unipotent(sx))
    on_fiber = fval[:, n] == 0
    exps = psi.exponent_table()[h[on_fiber, n]]
    counts = np.bincount(exps, minlength=tower.p)
    rhs = CycloScalar.from_counts(tower.p, counts)
    return lhs, rhs
