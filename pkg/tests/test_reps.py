import itertools
import random

import numpy as np
import pytest

from cusplab.cyclo import CycloScalar, reduce_counts
from cusplab.fields import make_tower
from cusplab.groups import (FinGroup, UGroupOps, abelian_dual, hist_identity,
                            hist_mat_eq, hist_mat_mul, hist_mat_trace,
                            inner_hists, smith_normal_form)
from cusplab.reps import (InducedLinearRep, central_irrep, conj_orbit_of_char,
                          extend_to_Rx, extensions_of_center_char, lift_hist,
                          mackey_intertwining, normalizer_of_char, polarization,
                          pr_n_exponents)
from cusplab.twisted import CHAIN, TOP, RingParams

GRID = [(2, 2, CHAIN), (3, 2, CHAIN), (2, 3, TOP), (2, 3, CHAIN)]


def test_abelian_dual_z4xz2():
    mods = (4, 2)
    els = list(itertools.product(*[range(m) for m in mods]))
    grp = FinGroup(lambda a, b: tuple((x + y) % m for x, y, m in zip(a, b, mods)),
                   lambda a: tuple((-x) % m for x, m in zip(a, mods)),
                   (0, 0), elements=els)
    gens = [(1, 0), (0, 1)]
    n_root, chars = abelian_dual(grp, gens)
    assert n_root == 4 and chars.shape == (8, 8)
    assert len({tuple(r) for r in chars}) == 8
    for c in range(8):
        tbl = {e: int(chars[c, i]) for i, e in enumerate(grp.elements)}
        for a in els:
            for b in els:
                assert (tbl[a] + tbl[b]) % 4 == tbl[grp.mul(a, b)]


def test_smith_normal_form_small():
    diag, u = smith_normal_form([[2, 0], [0, 3]], 2)
    assert sorted(diag) == [2, 3]


def test_hist_matrices():
    a = np.zeros((2, 2, 4), dtype=np.int64)
    a[0, 1, 1] = 1
    a[1, 0, 0] = 1
    sq = hist_mat_mul(a, a, 4)
    expect = np.zeros((2, 2, 4), dtype=np.int64)
    expect[0, 0, 1] = 1
    expect[1, 1, 1] = 1
    assert hist_mat_eq(sq, expect, 4)
    fourth = hist_mat_mul(sq, sq, 4)
    minus = np.zeros((2, 2, 4), dtype=np.int64)
    minus[0, 0, 2] = 1
    minus[1, 1, 2] = 1
    assert hist_mat_eq(fourth, minus, 4)
    assert hist_mat_trace(sq, 4) == 2 * CycloScalar.zeta(4)


@pytest.mark.parametrize("p,n,mode", GRID)
def test_central_irrep(p, n, mode):
    t = make_tower(p, 1, n)
    params = RingParams(t, mode)
    ops = UGroupOps(params)
    psi = t.additive_char(t.gen().code)
    pi = central_irrep(params, psi, ops)
    assert pi.dim == t.q ** (n * (n - 1) // 2)
    rng = random.Random(1)
    for _ in range(30):
        a, b = rng.randrange(ops.size), rng.randrange(ops.size)
        prod = hist_mat_mul(pi.matrix(a), pi.matrix(b), pi.n_root)
        assert hist_mat_eq(prod, pi.matrix(int(ops.mul(a, b))), pi.n_root)
    chars = pi.char_exps(ops.all_ids())
    assert inner_hists(chars, chars, pi.n_root, ops.size) == CycloScalar.one()
    # Frobenius formula: coset-sum character equals the matrix trace, everywhere
    for g in range(ops.size):
        assert hist_mat_trace(pi.matrix(g), pi.n_root) == \
            CycloScalar.from_counts(pi.n_root, chars[g])
    # central character
    for a in range(t.fqn.order):
        zid = a * ops.order ** (n - 1)
        assert hist_mat_trace(pi.matrix(zid), pi.n_root) == psi.value(a) * pi.dim
    # preconditions
    with pytest.raises(ValueError):
        central_irrep(params, t.additive_char(1), ops)


@pytest.mark.parametrize("p,n,mode", GRID)
def test_normalizer_lemma(p, n, mode):
    t = make_tower(p, 1, n)
    params = RingParams(t, mode)
    ops = UGroupOps(params)
    psi = t.additive_char(t.gen().code)
    norm = np.sort(normalizer_of_char(params, psi, ops))
    target = ops.subgroup_ids("H") if n % 2 else ops.subgroup_ids("H+")
    assert np.array_equal(norm, target)


@pytest.mark.parametrize("p,n,mode", GRID)
def test_mackey_numbers(p, n, mode):
    t = make_tower(p, 1, n)
    params = RingParams(t, mode)
    ops = UGroupOps(params)
    psi = t.additive_char(t.gen().code)
    h_ids = ops.subgroup_ids("H")
    chi = pr_n_exponents(ops, psi)
    assert mackey_intertwining(ops, h_ids, chi, t.p, int(h_ids[1])) == 1
    norm = set(int(x) for x in normalizer_of_char(params, psi, ops))
    outside = next((g for g in range(ops.size) if g not in norm), None)
    if outside is not None:
        assert mackey_intertwining(ops, h_ids, chi, t.p, outside) == 0
    # Mackey decomposition of the induced character over double cosets
    ind = InducedLinearRep(ops, h_ids, ops.coset_reps("H"), chi, t.p)
    chars = ind.char_exps(ops.all_ids())
    self_inner = inner_hists(chars, chars, t.p, ops.size).as_rational()
    total = 0
    seen = set()
    h_set = set(int(x) for x in h_ids)
    for g in range(ops.size):
        if g in seen:
            continue
        # double coset H g H
        coset = set()
        for h1 in h_ids:
            gh = int(ops.mul(np.int64(h1), g))
            coset.update(int(x) for x in ops.mul(np.int64(gh), h_ids))
        seen |= coset
        total += mackey_intertwining(ops, h_ids, chi, t.p, g)
    assert self_inner == total


def test_ind_H_is_multiple_of_pi_for_even_n():
    for (p, n) in [(2, 2), (3, 2)]:
        t = make_tower(p, 1, n)
        params = RingParams(t, CHAIN)
        ops = UGroupOps(params)
        psi = t.additive_char(t.gen().code)
        pi = central_irrep(params, psi, ops)
        ind = InducedLinearRep(ops, ops.subgroup_ids("H"), ops.coset_reps("H"),
                               pr_n_exponents(ops, psi), t.p)
        ch_ind = lift_hist(ind.char_exps(ops.all_ids()), t.p, pi.n_root)
        diff = ch_ind - t.q ** (n // 2) * pi.char_exps(ops.all_ids())
        assert not reduce_counts(pi.n_root, diff.reshape(-1, pi.n_root)).any()


def test_polarization_structure():
    for (p, n) in [(2, 2), (3, 2), (2, 4)]:
        t = make_tower(p, 1, n)
        params = RingParams(t, CHAIN if n == 2 else TOP)
        psi = t.additive_char(t.gen().code)
        ops = UGroupOps(params)
        pol = polarization(params, psi, ops)
        assert len(pol.w_span) ** 2 == t.fqn.order  # |W|^2 = q^n
        # chi is multiplicative on P
        for a in pol.p_ids[: min(40, len(pol.p_ids))]:
            for b in pol.p_ids[: min(40, len(pol.p_ids))]:
                ab = int(ops.mul(int(a), int(b)))
                assert (pol.chi_exps[a] + pol.chi_exps[b]) % pol.n_root == pol.chi_exps[ab]
    # degenerate form rejected: psi with nontrivial stabilizer
    t = make_tower(2, 1, 2)
    with pytest.raises(ValueError):
        polarization(RingParams(t, CHAIN), t.additive_char(1))


def test_conj_orbit_of_characters():
    for (p, n, mode) in GRID:
        t = make_tower(p, 1, n)
        params = RingParams(t, mode)
        ops = UGroupOps(params)
        psi = t.additive_char(t.gen().code)
        exts = extensions_of_center_char(params, psi, ops)
        assert len(exts) == t.fqn.order ** (n - params.d - 1)
        for _, table in exts:
            assert conj_orbit_of_char(params, psi, table, ops) is not None


@pytest.mark.parametrize("p,n,mode", GRID)
def test_extension_to_Rx(p, n, mode):
    t = make_tower(p, 1, n)
    params = RingParams(t, mode)
    ops = UGroupOps(params)
    psi = t.additive_char(t.gen().code)
    pi = central_irrep(params, psi, ops)
    ext = extend_to_Rx(pi, seed=0)
    assert ext.homomorphism_ok
    assert ext.semidirect_ok
    assert ext.vr_traces_ok
    assert ext.scalar_on_fq_ok
    target = CycloScalar.rational((-1) ** (n - 1))
    for z in t.very_regular_residues():
        assert ext.zeta_trace(z.code) == target
