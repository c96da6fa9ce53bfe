from fractions import Fraction

import numpy as np
import pytest

from cusplab.cyclo import CycloScalar
from cusplab.fields import make_tower
from cusplab.geometry import (BudgetExceeded, alpha_vars, closed_form_alpha_d,
                              compute_alpha, compute_alpha_j, count_X, dl_trace,
                              exchange_identity, exp_sum, fixed_census,
                              purity_consistency, twisted_norm_count,
                              verify_step, zeta_fixed_set)
from cusplab.polys import SparsePoly
from cusplab.twisted import CHAIN, TOP, RingParams


def test_alpha_n2_closed_form():
    # alpha(x) = x^{q^2+q} - x^{q+1}
    for p in (2, 3):
        t = make_tower(p, 1, 2)
        params = RingParams(t, CHAIN)
        q = t.q
        expect = (SparsePoly.monomial(t, 2, {0: q**2 + q})
                  - SparsePoly.monomial(t, 2, {0: q + 1}))
        assert compute_alpha(params) == expect


def test_alpha_n3_closed_forms():
    t = make_tower(2, 1, 3)
    q = 2
    top = compute_alpha(RingParams(t, TOP))
    expect_top = (SparsePoly.monomial(t, 3, {0: q**2, 1: 1})
                  - SparsePoly.monomial(t, 3, {0: q**3, 1: q}))
    assert top == expect_top
    chain = compute_alpha(RingParams(t, CHAIN))
    extra = (SparsePoly.monomial(t, 3, {0: 1 + q + q**2})
             - SparsePoly.monomial(t, 3, {0: q + q**2 + q**3}))
    assert chain == expect_top + extra


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3), (2, 4), (2, 5)])
@pytest.mark.parametrize("mode", [CHAIN, TOP])
def test_base_case_and_recursion(p, n, mode):
    t = make_tower(p, 1, n)
    params = RingParams(t, mode)
    assert compute_alpha_j(params, params.d) == closed_form_alpha_d(params)
    for j in range(1, params.d + 1):
        assert compute_alpha_j(params, j).subs_zero(range(n)).is_zero()
    for j in range(1, params.d):
        w = verify_step(params, j)
        assert w.residual.is_zero()
        assert w.beta_clean and w.substitution_ok
    with pytest.raises(ValueError):
        compute_alpha_j(params, params.d + 1)


def test_exp_sum_values():
    t = make_tower(2, 1, 2)
    params = RingParams(t, CHAIN)
    alpha = compute_alpha(params)
    psi = t.additive_char(t.gen().code)
    s1 = exp_sum(alpha, psi, 1, alpha_vars(params), params=params)
    assert s1.value == CycloScalar.rational(4)  # alpha vanishes on rational points
    assert s1.nterms == 4
    s_triv = exp_sum(alpha, t.additive_char(0), 1, alpha_vars(params), params=params)
    assert s_triv.value == CycloScalar.rational(4)

    t3 = make_tower(2, 1, 3)
    params3 = RingParams(t3, TOP)
    alpha3 = compute_alpha(params3)
    psi3 = t3.additive_char(t3.gen().code)
    s13 = exp_sum(alpha3, psi3, 1, alpha_vars(params3), params=params3)
    assert s13.magnitude_sq() == Fraction(64)

    with pytest.raises(BudgetExceeded):
        exp_sum(alpha3, psi3, 2, alpha_vars(params3), budget=100, params=params3)


def test_purity_consistency():
    for (p, n, mode) in [(2, 2, CHAIN), (3, 2, CHAIN), (2, 3, TOP), (2, 3, CHAIN)]:
        t = make_tower(p, 1, n)
        params = RingParams(t, mode)
        eps_seen = set()
        for z in t.very_regular_residues():
            rep = purity_consistency(params, t.additive_char(z.code))
            assert rep.magnitude_ok
            assert rep.eps is not None
            eps_seen.add(rep.eps)
        assert len(eps_seen) == 1
        assert eps_seen.pop() == (-1) ** (n - 1)


def test_spec_s2_value_at_22():
    # brute force over F_16: S_2 = -8 for trivial-stabilizer psi
    t = make_tower(2, 1, 2)
    params = RingParams(t, CHAIN)
    rep = purity_consistency(params, t.additive_char(t.gen().code))
    assert rep.s1.value == CycloScalar.rational(4)
    assert rep.s2.value == CycloScalar.rational(-8)


def test_enumerate_X_counts():
    t = make_tower(2, 1, 2)
    params = RingParams(t, CHAIN)
    assert count_X(params, 1) == 16 == twisted_norm_count(params, 1)
    assert count_X(params, 2) == twisted_norm_count(params, 2)
    t3 = make_tower(2, 1, 3)
    for mode in (CHAIN, TOP):
        params3 = RingParams(t3, mode)
        assert count_X(params3, 1) == 512 == twisted_norm_count(params3, 1)


def test_fixed_census_and_trace():
    for (p, n, mode) in [(2, 2, CHAIN), (3, 2, CHAIN), (2, 3, TOP), (2, 3, CHAIN)]:
        t = make_tower(p, 1, n)
        params = RingParams(t, mode)
        psi = t.additive_char(t.gen().code)
        for zeta in t.very_regular_residues():
            for a in range(t.fqn.order):
                c = fixed_census(params, zeta, t.element(a))
                assert c == (t.q**n if a == 0 else 0)
            fs = zeta_fixed_set(params, zeta)
            assert fs.shape[0] == t.q**n
            assert not np.any(fs[:, 1:n])
            assert dl_trace(params, zeta, psi) == CycloScalar.rational((-1) ** (n - 1))
    # zeta must be very regular
    t = make_tower(2, 1, 2)
    with pytest.raises(ValueError):
        fixed_census(RingParams(t, CHAIN), t.one(), t.zero())


def test_exchange_identity():
    for (p, n, mode) in [(2, 2, CHAIN), (3, 2, CHAIN), (2, 3, TOP), (2, 3, CHAIN)]:
        t = make_tower(p, 1, n)
        params = RingParams(t, mode)
        for c in range(1, t.fqn.order):
            lhs, rhs = exchange_identity(params, t.additive_char(c))
            assert lhs == rhs


def test_recursion_transport():
    # |S(alpha_j)| = q^n |S(alpha_{j+1})| (degree-shift shadow)
    for (p, n, mode) in [(2, 4, TOP), (2, 4, CHAIN), (2, 5, CHAIN)]:
        t = make_tower(p, 1, n)
        params = RingParams(t, mode)
        psi = t.additive_char(t.gen().code)
        for j in range(1, params.d):
            sj = exp_sum(compute_alpha_j(params, j), psi, 1, alpha_vars(params, j),
                         params=params)
            sj1 = exp_sum(compute_alpha_j(params, j + 1), psi, 1, alpha_vars(params, j + 1),
                          params=params)
            assert sj.magnitude_sq() == Fraction(t.q ** (2 * n)) * sj1.magnitude_sq()
