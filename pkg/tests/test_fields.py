import random

import pytest

from cusplab.cyclo import CycloScalar
from cusplab.fields import SizeBoundError, make_tower


def test_make_tower_f4():
    t = make_tower(2, 1, 2)
    # the unique irreducible quadratic over F_2
    assert t.fqn.poly == [1, 1, 1]


def test_make_tower_f9():
    t = make_tower(3, 1, 2)
    # lexicographically least irreducible quadratic over F_3 is x^2 + 1
    assert t.fqn.poly == [1, 0, 1]
    g = t.gen()
    x = g
    order = None
    for i in range(1, 10):
        if x.code == 1:
            order = i
            break
        x = x * g
    assert order == 8


def test_make_tower_preconditions():
    with pytest.raises(ValueError):
        make_tower(2, 1, 1)
    with pytest.raises(ValueError):
        make_tower(4, 1, 2)
    with pytest.raises(SizeBoundError):
        make_tower(2, 1, 25)


def test_frobenius():
    t = make_tower(2, 1, 2)
    omega = t.element(2)
    assert t.frob(omega, 1) == omega * omega
    assert t.frob(omega, 1).code == t.fqn.add(omega.code, 1)  # omega^2 = omega + 1
    rng = random.Random(1)
    for (p, n) in [(2, 3), (3, 2), (2, 4)]:
        tt = make_tower(p, 1, n)
        for _ in range(100):
            x = tt.element(rng.randrange(tt.fqn.order))
            y = tt.element(rng.randrange(tt.fqn.order))
            i = rng.randrange(2 * n)
            assert tt.frob(x * y, i) == tt.frob(x, i) * tt.frob(y, i)
            assert tt.frob(x + y, i) == tt.frob(x, i) + tt.frob(y, i)
            assert tt.frob(x, n) == x


def test_rel_trace():
    t = make_tower(2, 1, 2)
    omega = t.element(2)
    assert t.rel_trace(omega, 1).code == 1  # omega + omega^2 = 1
    assert t.rel_trace(t.zero(), 1).code == 0
    t9 = make_tower(3, 1, 2)
    assert t9.rel_trace(t9.one(), 1).code == 2  # n * 1 in F_3
    with pytest.raises(ValueError):
        make_tower(2, 1, 4).rel_trace(t.zero(), 3)


def test_galois_stabilizer_counts():
    t4 = make_tower(2, 1, 2)
    assert all(t4.galois_stabilizer(t4.element(c)) == 1 for c in range(2))
    assert len(t4.very_regular_residues()) == 2
    t9 = make_tower(3, 1, 2)
    assert len(t9.very_regular_residues()) == 6
    t8 = make_tower(2, 1, 3)
    assert len(t8.very_regular_residues()) == 6
    # Moebius-style oracle: elements in no proper subfield
    for (p, n) in [(2, 2), (3, 2), (2, 3), (2, 4)]:
        t = make_tower(p, 1, n)
        by_orbit = sum(1 for c in range(1, t.fqn.order)
                       if t.galois_stabilizer(t.element(c)) == n)
        by_subfield = sum(1 for c in range(1, t.fqn.order)
                          if not any(t.frob_code(c, d) == c
                                     for d in range(1, n) if n % d == 0))
        assert by_orbit == by_subfield == len(t.very_regular_residues())


def test_additive_char_orthogonality():
    for (p, n) in [(2, 2), (3, 2), (2, 3)]:
        t = make_tower(p, 1, n)
        for c in range(t.fqn.order):
            psi = t.additive_char(c)
            s = CycloScalar.zero(p)
            for x in t.elements():
                s = s + psi.value(x)
            assert s == CycloScalar.rational(t.fqn.order if c == 0 else 0)


def test_additive_char_stabilizer():
    t = make_tower(2, 1, 2)
    gen = t.gen()
    assert t.additive_char(gen.code).stabilizer() == 2
    assert t.additive_char(1).stabilizer() == 1


def test_extension_embedding_is_field_hom():
    t = make_tower(2, 1, 2)
    ext = t.extension(2)
    emb, fq = ext.embed, ext.fq
    for a in range(4):
        for b in range(4):
            assert emb[t.fqn.mul(a, b)] == fq.mul(int(emb[a]), int(emb[b]))
            assert emb[t.fqn.add(a, b)] == fq.add(int(emb[a]), int(emb[b]))
    # relative trace lands in the base field
    ext.rel_trace_table()


def test_coords_roundtrip():
    t = make_tower(3, 1, 2)
    for c in range(9):
        x = t.element(c)
        coords = x.coords()
        assert sum(d * 3**i for i, d in enumerate(coords)) == c
