import random

import pytest

from cusplab.cyclo import CycloScalar
from cusplab.fields import make_tower
from cusplab.locallab.constructions import (build_sigma_level, build_theta_tilde,
                                            d_quotient_order, enumerate_K_gl,
                                            gl_quotient_order)
from cusplab.locallab.identity import (central_character_rows,
                                       d_character_identity,
                                       d_full_induction_inner,
                                       gl_character_identity)
from cusplab.locallab.rings import TruncA, TruncD, TruncE
from cusplab.locallab.scans import (annihilator_check_A, annihilator_check_D,
                                    cartan_intertwiner_scan, conj_lemma_scan_d,
                                    conj_lemma_scan_gl, conj_pairing_check,
                                    corollary_scan_gl, counterexample_check,
                                    eps_twist_check, henniart_trick_scan,
                                    intertwiner_scan_d, intertwiner_scan_gl,
                                    norm_E_over_F, nrd_D, skolem_noether_check)
from cusplab.locallab.theta import (ThetaChar, find_y_psi0, list_primitive_theta,
                                    unit_group_dual, unit_group_elements,
                                    very_regular, very_regular_units)

rng = random.Random(11)


@pytest.mark.parametrize("p,n,L", [(2, 2, 3), (3, 2, 3), (2, 3, 3)])
def test_trunc_ring_arithmetic(p, n, L):
    t = make_tower(p, 1, n)
    Q = t.fqn.order

    def rE(unit=False):
        cs = [rng.randrange(Q) for _ in range(L)]
        if unit and cs[0] == 0:
            cs[0] = 1
        return TruncE(t, L, tuple(cs))

    for _ in range(50):
        a, b, c = rE(), rE(), rE()
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert (a * b).frob(1) == a.frob(1) * b.frob(1)
        u = rE(unit=True)
        assert (u * u.inverse()).is_one()

    def rA(unit=False):
        while True:
            x = TruncA(t, L, tuple(rE() for _ in range(n)))
            if not unit or x.is_unit():
                return x

    for _ in range(20):
        x, y, z = rA(), rA(), rA()
        assert (x * y) * z == x * (y * z)
        u = rA(unit=True)
        assert (u * u.inverse()).is_one() and (u.inverse() * u).is_one()
    # gamma a = gamma(a) gamma
    g1 = TruncA.galois(t, L, 1)
    e = rE()
    assert g1 * TruncA.from_E(t, L, e) == TruncA.from_E(t, L, e.frob(1)) * g1

    length = 2 * n + 1

    def rD(unit=False):
        cs = [rng.randrange(Q) for _ in range(length)]
        if unit and cs[0] == 0:
            cs[0] = 1
        return TruncD(t, length, tuple(cs))

    Pi = TruncD.pi(t, length)
    for _ in range(30):
        x, y, z = rD(), rD(), rD()
        assert (x * y) * z == x * (y * z)
        u = rD(unit=True)
        assert (u * u.inverse()).is_one() and (u.inverse() * u).is_one()
    # Pi a Pi^{-1} = phi(a), Pi^n = w
    e = rE().reduce(2).lift((length + n - 1) // n)
    assert Pi * TruncD.from_E(t, length, e) == TruncD.from_E(t, length, e.frob(1)) * Pi
    pw = TruncD.one(t, length)
    for _ in range(n):
        pw = pw * Pi
    w_elem = TruncE(t, (length + n - 1) // n,
                    tuple(1 if k == 1 else 0 for k in range((length + n - 1) // n)))
    assert pw == TruncD.from_E(t, length, w_elem)


def test_unit_group_and_primitive_counts():
    t22 = make_tower(2, 1, 2)
    n_root, grp, tables = unit_group_dual(t22, 2)
    assert len(grp) == 12 and tables.shape[0] == 12
    assert len(list_primitive_theta(t22, 2)) == 6
    assert len(list_primitive_theta(t22, 3)) == 24
    assert len(list_primitive_theta(make_tower(3, 1, 2), 2)) == 48
    assert len(list_primitive_theta(make_tower(2, 1, 3), 2)) == 42
    for th in list_primitive_theta(t22, 2):
        assert th.level() == 2
        assert th.is_primitive()
        assert th.top_psi().stabilizer() == 2


def test_non_primitive_detected():
    t = make_tower(2, 1, 2)
    n_root, grp, tables = unit_group_dual(t, 2)
    found = None
    for row in tables:
        th = ThetaChar(t, 2, n_root, {e: int(x) for e, x in zip(grp.elements, row)})
        if th.level() == 2 and not th.is_primitive():
            found = th
            break
    assert found is not None
    # its pairing element y is Galois-fixed, not very regular
    w = find_y_psi0(found)
    assert t.galois_stabilizer(t.element(w.y_residue)) == 1


def test_find_y_psi0():
    for (p, n, r0) in [(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2)]:
        t = make_tower(p, 1, n)
        for th in list_primitive_theta(t, r0)[:4]:
            w = find_y_psi0(th)
            assert t.galois_stabilizer(t.element(w.y_residue)) == n
            assert w.unique_y


def test_very_regular_machinery():
    t = make_tower(2, 1, 2)
    vr = very_regular_units(t, 2)
    assert len(vr) == 2 * 4  # residues times lifts
    for x in vr[:4]:
        y = TruncE(t, 2, (1, rng.randrange(4)))
        assert very_regular(x * y)
    one_mod_p = TruncE(t, 2, (1, 3))
    assert not very_regular(one_mod_p)


@pytest.mark.parametrize("p,n,r0", [(2, 2, 2), (2, 2, 3), (3, 2, 2)])
def test_annihilators(p, n, r0):
    t = make_tower(p, 1, n)
    th = list_primitive_theta(t, r0)[0]
    psi0 = find_y_psi0(th).psi0
    for m in range(1, r0):
        ra = annihilator_check_A(t, r0, m, psi0)
        assert ra.inclusion_ok and ra.graded_nondegenerate and ra.two_sided_ok
    for m in range(1, n * (r0 - 1) + 1):
        rd = annihilator_check_D(t, r0, m, psi0)
        assert rd.inclusion_ok and rd.graded_nondegenerate and rd.two_sided_ok
    assert conj_pairing_check(t, r0, 1, psi0)


def test_quotient_orders():
    t = make_tower(2, 1, 2)
    assert gl_quotient_order(t, 2, 1) == 48
    assert d_quotient_order(t, 3, 3) == 192
    assert sum(1 for _ in enumerate_K_gl(t, 2, 1)) == 48


@pytest.mark.parametrize("p,n,r0", [(2, 2, 2), (3, 2, 2), (2, 2, 3), (3, 2, 3)])
def test_constructions_and_identities(p, n, r0):
    t = make_tower(p, 1, n)
    th = list_primitive_theta(t, r0)[0]
    gl_sign = (-1) ** (r0 * (n - 1))
    d_sign = (-1) ** ((r0 - 1) * (n - 1))
    if r0 % 2 == 0:
        tt = build_theta_tilde(th, "gl")
        assert tt.generation_ok
        repg = gl_character_identity(th, tt)
        sig = build_sigma_level(th, "d", seed=0)
        repd = d_character_identity(th, sig)
        assert central_character_rows(th, sig, "d")
    else:
        sig = build_sigma_level(th, "gl", seed=0)
        repg = gl_character_identity(th, sig)
        tt = build_theta_tilde(th, "d")
        assert tt.generation_ok
        repd = d_character_identity(th, tt)
        assert central_character_rows(th, tt, "d")
    assert sig.iso_ok and sig.conj_ok and sig.descent_ok and sig.mult_ok
    assert repg.sign == gl_sign and not repg.failures and repg.checked > 0
    assert repd.sign == d_sign and not repd.failures and repd.checked > 0
    # very regular traces through sigma: (-1)^{n-1} theta(x)
    side = "d" if r0 % 2 == 0 else "gl"
    target = CycloScalar.rational((-1) ** (n - 1))
    for x in very_regular_units(t, r0)[:6]:
        xx = TruncA.from_E(t, sig.quot_level, x) if side == "gl" \
            else TruncD.from_E(t, sig.quot_level, x)
        assert sig.trace(xx) == target * th.value_unit(x)


def test_sigma_parity_guards():
    t = make_tower(2, 1, 2)
    th2 = list_primitive_theta(t, 2)[0]
    th3 = list_primitive_theta(t, 3)[0]
    with pytest.raises(ValueError):
        build_sigma_level(th2, "gl")
    with pytest.raises(ValueError):
        build_sigma_level(th3, "d")
    with pytest.raises(ValueError):
        build_theta_tilde(th3, "gl")
    with pytest.raises(ValueError):
        build_theta_tilde(th2, "d")


def test_full_induction_irreducible():
    t = make_tower(2, 1, 2)
    th2 = list_primitive_theta(t, 2)[0]
    sig = build_sigma_level(th2, "d", seed=0)
    assert d_full_induction_inner(th2, sig) == CycloScalar.one()
    th3 = list_primitive_theta(t, 3)[0]
    tt = build_theta_tilde(th3, "d")
    assert d_full_induction_inner(th3, tt) == CycloScalar.one()


def test_conjugation_lemma_scans():
    t22 = make_tower(2, 1, 2)
    for m in (1, 2):
        assert conj_lemma_scan_gl(t22, m).ok
        assert conj_lemma_scan_d(t22, m).ok
    t32 = make_tower(3, 1, 2)
    assert conj_lemma_scan_gl(t32, 1).ok
    assert conj_lemma_scan_d(t32, 1).ok
    t23 = make_tower(2, 1, 3)
    assert conj_lemma_scan_gl(t23, 1).ok
    assert conj_lemma_scan_d(t23, 1).ok
    assert conj_lemma_scan_d(t23, 3).ok  # n | m branch
    assert corollary_scan_gl(t22, 1, 2).ok
    assert corollary_scan_gl(t32, 1, 2).ok


def test_intertwiner_scans():
    t = make_tower(2, 1, 2)
    for r0 in (2, 3):
        th = list_primitive_theta(t, r0)[0]
        assert intertwiner_scan_gl(t, th).ok
        assert intertwiner_scan_d(t, th).ok
        assert cartan_intertwiner_scan(t, th).ok


def test_norms_and_eps():
    t = make_tower(2, 1, 2)
    # N_{E/F} on a Teichmueller generator: product of conjugates
    e = TruncE.constant(t, 2, t.gen().code)
    nrm = norm_E_over_F(e)
    expect = t.fqn.mul(t.gen().code, t.frob_code(t.gen().code, 1))
    assert nrm[0] == int(t.sec_q[expect])
    for (p, n) in [(2, 2), (3, 2), (2, 3)]:
        tt = make_tower(p, 1, n)
        er = eps_twist_check(tt, 2)
        assert er.order_n and er.norm_kernel_ok and er.det_units_ok
        assert er.nrd_pi_ok and er.nrd_units_ok and er.consistency_ok
        sk = skolem_noether_check(tt, 2)
        assert sk.pi_conj_is_frob and sk.galois_in_OA and sk.normalizer_ok


def test_nrd_of_pi():
    for (p, n) in [(2, 2), (2, 3), (3, 2)]:
        t = make_tower(p, 1, n)
        length = 2 * n + 1
        val = nrd_D(TruncD.pi(t, length))
        minus_one = t.fq.neg(1)
        assert val[0] == 0
        assert val[1] == (minus_one if n % 2 == 0 else 1)  # (-1)^{n-1} w


def test_henniart_and_counterexample():
    hr = henniart_trick_scan(make_tower(2, 1, 2), 2)
    assert hr.ok
    assert hr.pairs_with_hypothesis > 0
    assert hr.proportional_pairs == hr.conjugate_pairs == hr.ratio_one_count > 0
    cr = counterexample_check()
    assert cr.identities_hold
    assert cr.zeta_sq_cancel
    assert cr.sums_match
    assert cr.not_conjugate
    assert cr.ok
