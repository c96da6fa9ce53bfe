"""Deep-level constructions on the truncated quotients: theta_A, theta_D, the
unique character theta-tilde, and the representation sigma obtained by pulling
the extended central representation of R^x(F_{q^n}) back through the
identification J/J_+ ~= U(F_{q^n}).

Both sides share one shape: an element x of the inducing subgroup splits
canonically as x = e * j with e the E-coordinate and j in the congruence part;
theta-tilde reads theta(e), and sigma(x) = theta(e) * A_{e-residue} * pi(iota(j)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from ..cyclo import CycloScalar
from ..fields import FieldTower
from ..groups import hist_mat_mul, hist_mat_trace
from ..reps import CentralIrrep, ExtendedRep, central_irrep, extend_to_Rx
from ..twisted import CHAIN, TOP, RingParams
from .rings import TruncA, TruncD, TruncE
from .theta import ThetaChar

__all__ = [
    "theta_A_value",
    "theta_D_value",
    "ThetaTilde",
    "build_theta_tilde",
    "SigmaLevel",
    "build_sigma_level",
    "gl_quotient_order",
    "d_quotient_order",
    "sample_K_element_gl",
    "sample_K_element_d",
    "enumerate_K_gl",
    "enumerate_K_d",
]


def theta_A_value(theta: ThetaChar, u: TruncA) -> CycloScalar:
    """theta_A on U^r_G: the value of theta at the E-coordinate."""
    return theta.value_unit(u.e_part())


def theta_D_value(theta: ThetaChar, u: TruncD) -> CycloScalar:
    return theta.value_unit(u.e_component().lift(theta.r0))


# -- theta-tilde -------------------------------------------------------------


@dataclass
class ThetaTilde:
    theta: ThetaChar
    side: str                  # "gl" or "d"
    depth: int                 # r0/2 resp. n(r0-1)/2 + 1: the U-level of the domain
    quot_level: int            # r0 resp. n(r0-1)+1
    generation_ok: bool        # E^x and 1+(C cap P^depth) generate the quotient
    quotient_order: int

    def value(self, x, varpi_val: int = 0) -> CycloScalar:
        """Value on an element of (O_E^x U^depth)/U^quot, times theta(varpi)^val."""
        if self.side == "gl":
            e = x.e_part()
        else:
            e = x.e_component().lift(self.theta.r0)
        v = self.theta.value_unit(e)
        if varpi_val:
            v = v * self.theta.varpi_value**varpi_val
        return v

    def in_domain(self, x) -> bool:
        if self.side == "gl":
            return x.in_unit_EU(self.depth)
        return x.in_unit_EU(self.depth)


def gl_quotient_order(tower: FieldTower, r0: int, depth: int) -> int:
    q, n = tower.q, tower.n
    units = (q**n - 1) * q ** (n * (r0 - 1))
    return units * q ** (n * (n - 1) * (r0 - depth))


def d_quotient_order(tower: FieldTower, r0: int, depth: int) -> int:
    """|O_E^x U^depth_D / U^N_D| with N = n(r0-1)+1: an E-unit part at level r0
    times one F_{q^n} per C'-position at or above depth."""
    q, n = tower.q, tower.n
    big_n = n * (r0 - 1) + 1
    sub = (q**n - 1) * (q**n) ** (r0 - 1)            # O_E^x mod U^{r0}_E
    c_positions = [i for i in range(depth, big_n) if i % n != 0]
    return sub * (q**n) ** len(c_positions)


def build_theta_tilde(theta: ThetaChar, side: str, generation_known=None) -> ThetaTilde:
    """The character of E^x U^depth restricting to theta and trivial on the
    congruence C-part; existence by construction, uniqueness by generation.
    generation_known short-circuits the BFS (it is theta-independent)."""
    tower = theta.tower
    r0 = theta.r0
    n = tower.n
    if side == "gl":
        if r0 % 2:
            raise ValueError("GL-side theta-tilde needs r0 even")
        depth, quot = r0 // 2, r0
    elif side == "d":
        if r0 % 2 == 0:
            raise ValueError("D-side theta-tilde needs r0 odd")
        depth, quot = n * (r0 - 1) // 2 + 1, n * (r0 - 1) + 1
    else:
        raise ValueError("side must be 'gl' or 'd'")
    if generation_known is not None:
        gen_ok, order = generation_known
    else:
        gen_ok, order = _generation_check(tower, r0, side, depth, quot)
    return ThetaTilde(theta, side, depth, quot, gen_ok, order)


def _generation_check(tower: FieldTower, r0: int, side: str, depth: int, quot: int):
    """BFS: do E^x-images and 1+(C cap P^depth) generate the whole quotient?
    If they do, any character is pinned by its values there (uniqueness)."""
    p = tower.p
    k = tower.fqn.k
    gens = []
    if side == "gl":
        one = TruncA.one(tower, quot)
        gens.append(TruncA.from_E(tower, quot, TruncE.constant(tower, quot, tower.fqn.generator)))
        for lev in range(1, quot):
            for i in range(k):
                e = [0] * quot
                e[0] = 1
                e[lev] = p**i
                gens.append(TruncA.from_E(tower, quot, TruncE(tower, quot, tuple(e))))
        for g_idx in range(1, tower.n):
            for lev in range(depth, quot):
                for i in range(k):
                    coeffs = [TruncE.zero(tower, quot) for _ in range(tower.n)]
                    coeffs[0] = TruncE.one(tower, quot)
                    cc = [0] * quot
                    cc[lev] = p**i
                    coeffs[g_idx] = TruncE(tower, quot, tuple(cc))
                    gens.append(TruncA(tower, quot, tuple(coeffs)))
        expected = gl_quotient_order(tower, r0, depth)
    else:
        one = TruncD.one(tower, quot)
        gens.append(TruncD.from_E(tower, quot, TruncE.constant(tower, (quot + tower.n - 1) // tower.n,
                                                               tower.fqn.generator)))
        e_lev = (quot + tower.n - 1) // tower.n
        for lev in range(1, e_lev):
            for i in range(k):
                e = [0] * e_lev
                e[0] = 1
                e[lev] = p**i
                gens.append(TruncD.from_E(tower, quot, TruncE(tower, e_lev, tuple(e))))
        for pos in range(depth, quot):
            if pos % tower.n == 0:
                continue
            for i in range(k):
                cc = [0] * quot
                cc[0] = 1
                cc[pos] = p**i
                gens.append(TruncD.from_codes(tower, quot, tuple(cc)))
        expected = d_quotient_order(tower, r0, depth)
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                z = w * g
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    return len(seen) == expected, len(seen)


# -- sigma -------------------------------------------------------------------


@dataclass
class SigmaLevel:
    theta: ThetaChar
    side: str
    params: RingParams
    pi: CentralIrrep
    ext: ExtendedRep
    depth: int                # the U-level of the inducing subgroup
    quot_level: int           # truncation level of the quotient model
    iso_ok: bool              # iota is a group isomorphism J/J+ -> U(F_{q^n})
    conj_ok: bool             # iota intertwines E^x-conjugation with the torus action
    descent_ok: bool          # theta x sigma_0 kills the antidiagonal kernel
    mult_ok: bool             # sigma is multiplicative on sampled pairs

    # -- the identification map ------------------------------------------

    def iota(self, j) -> int:
        """U(F_{q^n})-id of a J-element (coordinates read mod J_+)."""
        tower = self.theta.tower
        n = tower.n
        ops = self.ext.central.ops
        coords = np.zeros(n + 1, dtype=np.int64)
        coords[0] = 1
        if self.side == "gl":
            m = (self.theta.r0 - 1) // 2
            e = j.e_part()
            assert all(c == 0 for c in e.coeffs[1:self.theta.r0 - 1]) and e.coeffs[0] == 1
            coords[n] = e.coeffs[self.theta.r0 - 1]
            for i in range(1, n):
                ci = j.coeffs[i]
                assert ci.val() >= m
                coords[i] = ci.coeffs[m]
        else:
            w0 = (self.theta.r0 - 2) // 2
            e = j.e_component()
            assert e.coeffs[0] == 1 and all(c == 0 for c in e.coeffs[1:self.theta.r0 - 1])
            coords[n] = e.coeffs[self.theta.r0 - 1]
            for i in range(1, n):
                idx = w0 * n + i
                coords[i] = j.coeffs[idx] if idx < j.length else 0
        return int(ops.encode(coords))

    def decompose(self, x):
        """x = e * j with e the E-coordinate; j lands in 1 + C-part."""
        tower = self.theta.tower
        if self.side == "gl":
            e = x.e_part()
            j = TruncA.from_E(tower, self.quot_level, e.inverse()) * x
        else:
            e = x.e_component()
            j = TruncD.from_E(tower, self.quot_level, e.inverse()) * x
        return e, j

    def matrix(self, x, varpi_val: int = 0):
        """(tensor, scalar) with sigma(x) = scalar * tensor (histogram matrix)."""
        tower = self.theta.tower
        e, j = self.decompose(x)
        res = e.residue() if self.side == "gl" else e.coeffs[0]
        tensor_pow, scal_pow = self.ext.zeta_matrix(res)
        uid = self.iota(j)
        tensor = hist_mat_mul(tensor_pow, self.pi.matrix(uid), self.pi.n_root)
        scal = scal_pow * self.theta.value_unit(e.lift(self.theta.r0) if self.side == "d" else e)
        if varpi_val:
            scal = scal * self.theta.varpi_value**varpi_val
        return tensor, scal

    def trace(self, x, varpi_val: int = 0) -> CycloScalar:
        """tr sigma(x), via the monomial structure of pi when available."""
        mono = getattr(self.pi.rep, "monomial", None)
        if mono is None:
            tensor, scal = self.matrix(x, varpi_val)
            return hist_mat_trace(tensor, self.pi.n_root) * scal
        e, j = self.decompose(x)
        res = e.residue() if self.side == "gl" else e.coeffs[0]
        tensor_pow, scal_pow = self.ext.zeta_matrix(res)
        rows, exps = mono(self.iota(j))
        n_root = self.pi.n_root
        counts = np.zeros(n_root, dtype=object)
        for col in range(self.pi.dim):
            counts += np.roll(tensor_pow[col, rows[col]], int(exps[col]))
        scal = scal_pow * self.theta.value_unit(e.lift(self.theta.r0) if self.side == "d" else e)
        if varpi_val:
            scal = scal * self.theta.varpi_value**varpi_val
        return CycloScalar.from_counts(n_root, counts) * scal

    @property
    def dim(self) -> int:
        return self.pi.dim

    def in_domain(self, x) -> bool:
        return x.in_unit_EU(self.depth)


def _j_element_gl(tower, r0: int, b: int, avec) -> TruncA:
    m = (r0 - 1) // 2
    e = [0] * r0
    e[0] = 1
    e[r0 - 1] = b
    coeffs = [TruncE(tower, r0, tuple(e))]
    for i in range(1, tower.n):
        cc = [0] * r0
        cc[m] = avec[i - 1]
        coeffs.append(TruncE(tower, r0, tuple(cc)))
    return TruncA(tower, r0, tuple(coeffs))


def _j_element_d(tower, r0: int, quot: int, b: int, avec) -> TruncD:
    w0 = (r0 - 2) // 2
    cc = [0] * quot
    cc[0] = 1
    if (r0 - 1) * tower.n < quot:
        cc[(r0 - 1) * tower.n] = b
    for i in range(1, tower.n):
        cc[w0 * tower.n + i] = avec[i - 1]
    return TruncD.from_codes(tower, quot, tuple(cc))


def build_sigma_level(theta: ThetaChar, side: str, seed: int = 0,
                      mult_samples: int = 60, prebuilt=None,
                      iso_exhaustive: bool = True) -> SigmaLevel:
    """Assemble sigma on E^x U^depth from the extended central representation,
    verifying the identification, conjugation compatibility and descent.
    prebuilt = (pi, ext) reuses a central representation for the same psi."""
    tower = theta.tower
    r0 = theta.r0
    n = tower.n
    if side == "gl":
        if r0 % 2 == 0 or r0 < 3:
            raise ValueError("GL-side sigma needs odd r0 >= 3")
        depth = (r0 - 1) // 2
        quot = r0
    elif side == "d":
        if r0 % 2:
            raise ValueError("D-side sigma needs even r0")
        depth = n * (r0 - 2) // 2 + 1
        quot = n * (r0 - 1) + 1
    else:
        raise ValueError("side must be 'gl' or 'd'")
    mode = CHAIN if r0 == 2 else TOP
    params = RingParams(tower, mode)
    psi = theta.top_psi()
    if prebuilt is not None:
        pi, ext = prebuilt
        assert pi.psi.c == psi.c and pi.params == params
    else:
        pi = central_irrep(params, psi)
        ext = extend_to_Rx(pi, seed=seed)
    sig = SigmaLevel(theta, side, params, pi, ext, depth, quot,
                     iso_ok=True, conj_ok=True, descent_ok=True, mult_ok=True)

    ops = pi.ops
    q_n = tower.fqn.order
    rng = random.Random(seed + 1)

    def j_elem(b, avec):
        if side == "gl":
            return _j_element_gl(tower, r0, b, avec)
        return _j_element_d(tower, r0, quot, b, avec)

    # iota is a group homomorphism J/J+ -> U (exhaustive when small, else sampled)
    total = q_n ** (n * n)
    if iso_exhaustive and total <= 2**10:
        js = [(b, tuple(av)) for b in range(q_n)
              for av in np.ndindex(*([q_n] * (n - 1)))]
        pairs = [(x, y) for x in js for y in js]
    else:
        pairs = [((rng.randrange(q_n), tuple(rng.randrange(q_n) for _ in range(n - 1))),
                  (rng.randrange(q_n), tuple(rng.randrange(q_n) for _ in range(n - 1))))
                 for _ in range(mult_samples)]
    for (b1, a1), (b2, a2) in pairs:
        j1, j2 = j_elem(b1, a1), j_elem(b2, a2)
        lhs = sig.iota(j1 * j2)
        rhs = int(ops.mul(sig.iota(j1), sig.iota(j2)))
        if lhs != rhs:
            sig.iso_ok = False
            break

    # conjugation compatibility: iota(x^{-1} j x) = image-of-x^{-1} iota(j) image-of-x
    for _ in range(60):
        b = rng.randrange(q_n)
        avec = tuple(rng.randrange(q_n) for _ in range(n - 1))
        j = j_elem(b, avec)
        e = TruncE.constant(tower, r0, rng.randrange(1, q_n))
        if side == "gl":
            ea = TruncA.from_E(tower, quot, e)
            conj = ea.inverse() * j * ea
        else:
            ed = TruncD.from_E(tower, quot, e)
            conj = ed.inverse() * j * ed
        lhs = sig.iota(conj)
        zeta = e.coeffs[0]
        from ..reps import _conjugation_map
        cmap_inv = _conjugation_map(ops, int(tower.fqn.inv(zeta)))
        rhs = int(cmap_inv[sig.iota(j)])
        if lhs != rhs:
            sig.conj_ok = False
            break

    # descent: theta(h) * sigma_0(iota(h^{-1})) = 1 for h in U^{r0-1}_E
    scale = pi.n_root // tower.p
    for b in range(q_n):
        e = [0] * r0
        e[0] = 1
        e[r0 - 1] = b
        h = TruncE(tower, r0, tuple(e))
        hinv = h.inverse()
        if side == "gl":
            jh = TruncA.from_E(tower, quot, hinv)
        else:
            jh = TruncD.from_E(tower, quot, hinv)
        uid = sig.iota(jh)
        m = pi.matrix(uid)
        val = CycloScalar.from_counts(pi.n_root, m[0, 0]) * theta.value_unit(h)
        if val != CycloScalar.one():
            sig.descent_ok = False
            break

    # multiplicativity of sigma on sampled pairs of the inducing subgroup
    for _ in range(mult_samples):
        x = (sample_K_element_gl if side == "gl" else sample_K_element_d)(tower, r0, depth, rng)
        y = (sample_K_element_gl if side == "gl" else sample_K_element_d)(tower, r0, depth, rng)
        tx, sx = sig.matrix(x)
        ty, sy = sig.matrix(y)
        txy, sxy = sig.matrix(x * y)
        lhs = hist_mat_mul(tx, ty, pi.n_root)
        if not _scaled_eq(lhs, sx * sy, txy, sxy, pi.n_root):
            sig.mult_ok = False
            break
    return sig


def _scaled_eq(t1, s1, t2, s2, n_root) -> bool:
    for i in range(t1.shape[0]):
        for j in range(t1.shape[1]):
            if CycloScalar.from_counts(n_root, t1[i, j]) * s1 != \
               CycloScalar.from_counts(n_root, t2[i, j]) * s2:
                return False
    return True


def sample_K_element_gl(tower, r0: int, depth: int, rng) -> TruncA:
    q_n = tower.fqn.order
    e = TruncE(tower, r0, (rng.randrange(1, q_n),) + tuple(rng.randrange(q_n) for _ in range(r0 - 1)))
    coeffs = [e]
    for _ in range(1, tower.n):
        cc = [0] * r0
        for lev in range(depth, r0):
            cc[lev] = rng.randrange(q_n)
        coeffs.append(TruncE(tower, r0, tuple(cc)))
    return TruncA(tower, r0, tuple(coeffs))


def sample_K_element_d(tower, r0: int, depth: int, rng) -> TruncD:
    q_n = tower.fqn.order
    quot = tower.n * (r0 - 1) + 1
    cc = [0] * quot
    for pos in range(quot):
        if pos % tower.n == 0:
            cc[pos] = rng.randrange(q_n)
        elif pos >= depth:
            cc[pos] = rng.randrange(q_n)
    if cc[0] == 0:
        cc[0] = 1
    return TruncD.from_codes(tower, quot, tuple(cc))


def enumerate_K_gl(tower, r0: int, depth: int):
    """All of (O_E^x U^depth_G)/U^{r0}_G as e*(1+c): E-unit times C-part."""
    import itertools
    q_n = tower.fqn.order
    units = []
    for c0 in range(1, q_n):
        for rest in itertools.product(range(q_n), repeat=r0 - 1):
            units.append(TruncE(tower, r0, (c0,) + rest))
    c_levels = list(range(depth, r0))
    c_choices = itertools.product(range(q_n), repeat=len(c_levels) * (tower.n - 1))
    c_parts = []
    for choice in c_choices:
        coeffs = [TruncE.one(tower, r0)]
        it = iter(choice)
        for _ in range(1, tower.n):
            cc = [0] * r0
            for lev in c_levels:
                cc[lev] = next(it)
            coeffs.append(TruncE(tower, r0, tuple(cc)))
        c_parts.append(TruncA(tower, r0, tuple(coeffs)))
    for e in units:
        ea = TruncA.from_E(tower, r0, e)
        for cp in c_parts:
            yield ea * cp


def enumerate_K_d(tower, r0: int, depth: int):
    """All of (O_E^x U^depth_D)/U^{N}_D with N = n(r0-1)+1."""
    import itertools
    q_n = tower.fqn.order
    n = tower.n
    quot = n * (r0 - 1) + 1
    e_positions = [pos for pos in range(quot) if pos % n == 0]
    c_positions = [pos for pos in range(depth, quot) if pos % n != 0]
    for e_choice in itertools.product(range(q_n), repeat=len(e_positions)):
        if e_choice[0] == 0:
            continue
        for c_choice in itertools.product(range(q_n), repeat=len(c_positions)):
            cc = [0] * quot
            for pos, v in zip(e_positions, e_choice):
                cc[pos] = v
            for pos, v in zip(c_positions, c_choice):
                cc[pos] = v
            yield TruncD.from_codes(tower, quot, tuple(cc))
