import random

import numpy as np
import pytest

from cusplab.fields import make_tower
from cusplab.twisted import (CHAIN, TOP, ExtCoeffs, FieldCoeffs, RingParams,
                             TwistedElem, VectorRing, enumerate_group, lang,
                             semidirect_act, tinv, tmul, unipotent_coords,
                             unipotent_encode)


def _random_elem(params, ring, rng, unit=False):
    cs = [rng.randrange(ring.fq.order) for _ in range(params.n + 1)]
    if unit and cs[0] == 0:
        cs[0] = 1
    return TwistedElem(params, ring, cs)


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (2, 4), (2, 5)])
@pytest.mark.parametrize("mode", [CHAIN, TOP])
def test_associativity_and_inverse(p, n, mode):
    t = make_tower(p, 1, n)
    params = RingParams(t, mode)
    ring = FieldCoeffs(t)
    rng = random.Random(7)
    one = TwistedElem.unit(params, ring)
    for _ in range(1000):
        x, y, z = (_random_elem(params, ring, rng) for _ in range(3))
        assert tmul(tmul(x, y), z) == tmul(x, tmul(y, z))
    for _ in range(200):
        u = _random_elem(params, ring, rng, unit=True)
        assert tmul(u, tinv(u)) == one
        assert tmul(tinv(u), u) == one


def test_symbol_products():
    t = make_tower(2, 1, 3)

    def basis(params, ring, i, a=1):
        cs = [0] * (params.n + 1)
        cs[i] = a
        return TwistedElem(params, ring, cs)

    for mode in (CHAIN, TOP):
        params = RingParams(t, mode)
        ring = FieldCoeffs(t)
        e1e1 = tmul(basis(params, ring, 1), basis(params, ring, 1))
        if mode == CHAIN:
            assert e1e1 == basis(params, ring, 2)
        else:
            assert all(c == 0 for c in e1e1.coeffs)
        # e_1 e_{n-1} = e_n in both modes
        assert tmul(basis(params, ring, 1), basis(params, ring, 2)) == basis(params, ring, 3)
        # e_1 * a = a^q e_1
        a = t.gen().code
        scalar = TwistedElem(params, ring, [a, 0, 0, 0])
        assert tmul(basis(params, ring, 1), scalar) == basis(params, ring, 1, t.frob_code(a, 1))


def test_inverse_closed_forms():
    # the three branch displays for (1 + a_d e_d)^{-1}
    t3 = make_tower(2, 1, 3)
    for acode in range(1, 8):
        top = RingParams(t3, TOP)
        ring = FieldCoeffs(t3)
        x = TwistedElem(top, ring, [1, acode, 0, 0])
        assert tinv(x) == TwistedElem(top, ring, [1, t3.fqn.neg(acode), 0, 0])
        chain = RingParams(t3, CHAIN)
        x = TwistedElem(chain, ring, [1, acode, 0, 0])
        a1q = t3.fqn.mul(acode, t3.frob_code(acode, 1))
        a1qq2 = t3.fqn.mul(a1q, t3.frob_code(acode, 2))
        assert tinv(x) == TwistedElem(chain, ring,
                                      [1, t3.fqn.neg(acode), a1q, t3.fqn.neg(a1qq2)])
    t5 = make_tower(2, 1, 5)
    chain5 = RingParams(t5, CHAIN)
    ring5 = FieldCoeffs(t5)
    d = chain5.d
    assert d == 2
    for acode in range(1, 8):
        cs = [0] * 6
        cs[0], cs[d] = 1, acode
        exp = [0] * 6
        exp[0], exp[d] = 1, t5.fqn.neg(acode)
        exp[2 * d] = t5.fqn.mul(acode, t5.frob_code(acode, d))
        assert tinv(TwistedElem(chain5, ring5, cs)) == TwistedElem(chain5, ring5, exp)


def test_lang_isogeny():
    t = make_tower(2, 1, 2)
    params = RingParams(t, CHAIN)
    ring = FieldCoeffs(t)
    one = TwistedElem.unit(params, ring)
    for g in enumerate_group("U", params):
        assert lang(g) == one
    ext = t.extension(2)
    ering = ExtCoeffs(ext)
    for b in range(16):
        lv = lang(TwistedElem(params, ering, [1, 0, b]))
        diff = ext.fq.sub(int(ext.twist_table(2)[b]), b)
        assert lv == TwistedElem(params, ering, [1, 0, diff])
    rng = random.Random(3)
    emb = ext.embed
    for _ in range(60):
        x = TwistedElem(params, ering, [1] + [rng.randrange(16) for _ in range(2)])
        u0 = [1] + [rng.randrange(4) for _ in range(2)]
        u = TwistedElem(params, ering, [int(emb[c]) for c in u0])
        assert lang(tmul(x, u)) == lang(x)


def test_semidirect_action():
    t = make_tower(2, 1, 3)
    params = RingParams(t, TOP)
    ring = FieldCoeffs(t)
    rng = random.Random(5)
    for _ in range(150):
        x = TwistedElem(params, ring, [1] + [rng.randrange(8) for _ in range(3)])
        g = rng.randrange(1, 8)
        y = semidirect_act(x, g)
        for j in range(1, 4):
            law = t.fqn.mul(x.coeffs[j], t.fqn.mul(t.fqn.inv(g), t.frob_code(g, j)))
            assert y.coeffs[j] == law
        g1, g2 = rng.randrange(1, 8), rng.randrange(1, 8)
        u1 = TwistedElem(params, ring, [1] + [rng.randrange(8) for _ in range(3)])
        u2 = TwistedElem(params, ring, [1] + [rng.randrange(8) for _ in range(3)])
        lhs = semidirect_act(semidirect_act(x, g1, u1), g2, u2)
        rhs = semidirect_act(x, t.fqn.mul(g1, g2), tmul(semidirect_act(u1, g2), u2))
        assert lhs == rhs


def test_enumerate_group_orders():
    t = make_tower(2, 1, 2)
    params = RingParams(t, CHAIN)
    assert len(list(enumerate_group("U", params))) == 16
    assert len(list(enumerate_group("center", params))) == 4
    t8 = make_tower(2, 1, 3)
    assert len(list(enumerate_group("H", RingParams(t8, TOP)))) == 64
    t4 = make_tower(2, 1, 4)
    assert len(list(enumerate_group("H+", RingParams(t4, TOP)))) == 16**3


def test_vector_kernels_match_object_api():
    t = make_tower(2, 1, 2)
    params = RingParams(t, CHAIN)
    ring = FieldCoeffs(t)
    vr = VectorRing(params)
    ids = np.arange(16)
    A = unipotent_coords(4, 2, ids)
    B = unipotent_coords(4, 2, ids[::-1])
    C = vr.mul(A, B)
    for i in range(16):
        x = TwistedElem(params, ring, list(A[i]))
        y = TwistedElem(params, ring, list(B[i]))
        assert list(tmul(x, y).coeffs) == list(C[i])
    Ainv = vr.inv_unipotent(A)
    for i in range(16):
        assert list(tinv(TwistedElem(params, ring, list(A[i]))).coeffs) == list(Ainv[i])
    assert np.all(unipotent_encode(4, 2, A) == ids)
    ext = t.extension(2)
    vre = VectorRing(params, ext)
    Ae = unipotent_coords(16, 2, np.arange(256))
    Le = vre.lang(Ae)
    ering = ExtCoeffs(ext)
    for i in range(0, 256, 37):
        assert list(lang(TwistedElem(params, ering, list(Ae[i]))).coeffs) == list(Le[i])
    for g in range(1, 4):
        Cj = vre.conj_by_unit(Ae, g)
        for i in range(0, 256, 41):
            y = semidirect_act(TwistedElem(params, ering, list(Ae[i])), g)
            assert list(y.coeffs) == list(Cj[i])


def test_frobenius_is_ring_endomorphism():
    rng = random.Random(11)
    for (p, n) in [(2, 2), (2, 3), (3, 2)]:
        t = make_tower(p, 1, n)
        ext = t.extension(2)
        for mode in (CHAIN, TOP):
            params = RingParams(t, mode)
            ering = ExtCoeffs(ext)
            for _ in range(60):
                x = TwistedElem(params, ering,
                                [rng.randrange(ext.fq.order) for _ in range(n + 1)])
                y = TwistedElem(params, ering,
                                [rng.randrange(ext.fq.order) for _ in range(n + 1)])
                assert tmul(x, y).frobenius() == tmul(x.frobenius(), y.frobenius())
