"""Sparse multivariate polynomials over F_{q^n} with big-integer exponents.

These are the symbolic coefficients used to expand the map f inside
R_0(SparsePoly): variables a_1, ..., a_n, monomial exponents that may reach
q^n and beyond (Frobenius twists multiply exponents by q^i), coefficients
packed field codes.  Only the operations the alpha-recursion needs are
provided; there is deliberately no general division.
"""

from __future__ import annotations

from .fields import FieldTower

__all__ = ["SparsePoly", "PolyCoeffs"]


class SparsePoly:
    """Map from exponent tuples to nonzero F_{q^n} coefficient codes."""

    __slots__ = ("tower", "nvars", "terms")

    def __init__(self, tower: FieldTower, nvars: int, terms: dict | None = None):
        self.tower = tower
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, tower: FieldTower, nvars: int) -> "SparsePoly":
        return cls(tower, nvars)

    @classmethod
    def const(cls, tower: FieldTower, nvars: int, code: int) -> "SparsePoly":
        return cls(tower, nvars, {(0,) * nvars: code} if code else {})

    @classmethod
    def variable(cls, tower: FieldTower, nvars: int, idx: int, exponent: int = 1,
                 coeff: int = 1) -> "SparsePoly":
        e = [0] * nvars
        e[idx] = exponent
        return cls(tower, nvars, {tuple(e): coeff})

    @classmethod
    def monomial(cls, tower: FieldTower, nvars: int, exps: dict[int, int],
                 coeff: int = 1) -> "SparsePoly":
        e = [0] * nvars
        for idx, ex in exps.items():
            e[idx] = ex
        return cls(tower, nvars, {tuple(e): coeff})

    # -- ring ops ---------------------------------------------------------

    def _chk(self, other: "SparsePoly"):
        if self.tower is not other.tower or self.nvars != other.nvars:
            raise ValueError("mismatched polynomial rings")

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._chk(other)
        fq = self.tower.fqn
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = fq.add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return SparsePoly(self.tower, self.nvars, out)

    def __neg__(self) -> "SparsePoly":
        fq = self.tower.fqn
        return SparsePoly(self.tower, self.nvars, {e: fq.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        self._chk(other)
        fq = self.tower.fqn
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = fq.add(out.get(e, 0), fq.mul(c1, c2))
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return SparsePoly(self.tower, self.nvars, out)

    def frob_q(self, i: int) -> "SparsePoly":
        """q^i-power of the polynomial: Frobenius on coefficients, exponents * q^i.

        As a polynomial map this is never the identity for i > 0, even when
        i = n: the exponents grow.
        """
        qi = self.tower.q ** i
        fq_frob = lambda c: self.tower.frob_code(c, i)
        return SparsePoly(self.tower, self.nvars,
                          {tuple(x * qi for x in e): fq_frob(c) for e, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._chk(other)
        return self.terms == other.terms

    __hash__ = None

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def constant_code(self) -> int:
        if not self.terms:
            return 0
        [(e, c)] = list(self.terms.items())
        assert all(x == 0 for x in e)
        return c

    def uses_var(self, idx: int) -> bool:
        return any(e[idx] for e in self.terms)

    def subs_zero(self, indices) -> "SparsePoly":
        """Substitute a_i = 0 for every i in indices."""
        idxs = set(indices)
        out = {e: c for e, c in self.terms.items() if all(e[i] == 0 for i in idxs)}
        return SparsePoly(self.tower, self.nvars, out)

    def div_var(self, idx: int) -> "SparsePoly":
        """Exact division by the variable a_idx; every term must contain it."""
        out = {}
        for e, c in self.terms.items():
            if e[idx] < 1:
                raise ValueError(f"term {e} not divisible by variable {idx}")
            e2 = list(e)
            e2[idx] -= 1
            out[tuple(e2)] = c
        return SparsePoly(self.tower, self.nvars, out)

    def support(self) -> list[int]:
        """Variable indices that actually occur."""
        return [i for i in range(self.nvars) if self.uses_var(i)]

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "SparsePoly(0)"
        bits = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"a{i+1}^{x}" for i, x in enumerate(e) if x)
            bits.append(f"{c}{'*' + mono if mono else ''}")
        return "SparsePoly(" + " + ".join(bits) + ")"

    # -- evaluation ---------------------------------------------------------

    def eval_codes(self, ext, coords) -> "np.ndarray":
        """Evaluate at arrays of extension-field codes, one array per variable."""
        import numpy as np

        fq = ext.fq
        emb = ext.embed
        shape = np.broadcast(*[np.asarray(c) for c in coords]).shape if coords else ()
        acc = np.zeros(shape, dtype=np.int64)
        for e, c in self.sorted_terms():
            term = np.full(shape, int(emb[c]), dtype=np.int64)
            for idx, ex in enumerate(e):
                if ex:
                    term = fq.vmul(term, fq.pow_table(ex)[coords[idx]])
            acc = fq.vadd(acc, term)
        return acc


class PolyCoeffs:
    """Coefficient ops making SparsePoly usable as the ring B of R_0(B)."""

    def __init__(self, tower: FieldTower, nvars: int):
        self.tower = tower
        self.nvars = nvars
        self.zero = SparsePoly.zero(tower, nvars)
        self.one = SparsePoly.const(tower, nvars, 1)
        self.fq = (tower, nvars)  # ring-identity token for TwistedElem checks

    def add(self, a: SparsePoly, b: SparsePoly) -> SparsePoly:
        return a + b

    def neg(self, a: SparsePoly) -> SparsePoly:
        return -a

    def mul(self, a: SparsePoly, b: SparsePoly) -> SparsePoly:
        return a * b

    def inv(self, a: SparsePoly) -> SparsePoly:
        if not a.is_constant():
            raise ZeroDivisionError("only constants are invertible in the polynomial ring")
        return SparsePoly.const(self.tower, self.nvars, self.tower.fqn.inv(a.constant_code()))

    def frob_q(self, a: SparsePoly, i: int) -> SparsePoly:
        return a.frob_q(i)

    def is_zero(self, a: SparsePoly) -> bool:
        return a.is_zero()

    def eq(self, a: SparsePoly, b: SparsePoly) -> bool:
        return a == b
