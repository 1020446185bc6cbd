import numpy as np
import pytest

from invsem import actions as ac
from invsem import congruences as cg
from invsem import core, morphisms as mo, products as pr
from invsem.core import TooLarge


def test_lsd_meet_action_carrier(catalog):
    chain2 = catalog["chain2"]
    meet = ac.validate_action(chain2, chain2, [[0, 0], [0, 1]])
    P = pr.build_lsd(chain2, chain2, meet)
    assert P.elements == ((0, 0), (0, 1), (1, 1))
    assert mo.isomorphism_search(P.sg, catalog["chain3"]) is not None


def test_rsd_group_case_is_symmetric_group(catalog):
    z3, z2 = catalog["z3"], catalog["z2"]
    invert = ac.validate_action(z2, z3, [[0, 1, 2], [0, 2, 1]])
    eps = ac.enumerate_surjective_eps(z3, z2)[0]
    R = pr.build_rsd(z3, z2, invert, eps)
    assert R.sg.order == 6
    assert R.sg.idempotents == (0,)     # a single idempotent: it is a group
    T = R.sg.table
    assert any(T[a, b] != T[b, a] for a in range(6) for b in range(6))


def test_rsd_requires_fixed_range(catalog):
    z3, z2 = catalog["z3"], catalog["z2"]
    eps = ac.enumerate_surjective_eps(z3, z2)[0]
    bad = next(a for a in ac.enumerate_actions(z2, z3) if not ac.check_AFR(a, eps)[0])
    with pytest.raises(ac.AFRViolated):
        pr.build_rsd(z3, z2, bad, eps)


def test_kernel_formulas_agree(lsd_fixtures, rsd_fixtures):
    for name, P in lsd_fixtures:
        fibers = pr.kernel_lsd(P)
        union = sorted(i for mem in fibers.values() for i in mem)
        assert union == sorted(pr.kernel_via_congruence(P).members), name
    for name, P in rsd_fixtures:
        fibers = pr.kernel_rsd(P)
        union = sorted(i for mem in fibers.values() for i in mem)
        assert union == sorted(pr.kernel_via_congruence(P).members), name


def test_kernel_fibers_are_disjoint(rsd_fixtures):
    for name, P in rsd_fixtures:
        fibers = pr.kernel_rsd(P)
        seen = [i for mem in fibers.values() for i in mem]
        assert len(seen) == len(set(seen)), name


def test_quotient_by_second_projection(rsd_fixtures):
    for name, P in rsd_fixtures[:4]:
        Q, _ = cg.quotient(pr.pi2_congruence(P))
        assert mo.isomorphism_search(Q, P.T) is not None, name


def test_unrestricted_rebuilds_as_restricted(lsd_fixtures):
    for name, P in lsd_fixtures:
        psi, rsd, ka = pr.psi_lemma21(P)
        pos = {p: j for j, p in enumerate(ka.pairs)}
        for i, (a, t) in enumerate(P.elements):
            j = pos[(a, int(P.T.rans[t]))]
            assert rsd.elements[int(psi.map[i])] == (j, t), name


def test_pfun_objectwise_laws(catalog):
    z2, chain2 = catalog["z2"], catalog["chain2"]
    pkt = pr.build_pkt(z2, chain2)
    ctx = pkt.ctx
    n = pkt.sg.order
    assert n == 6 and pkt.blocks == {0: (0, 2), 1: (2, 4)}
    for i in range(n):
        al = pkt.elements[i]
        assert pkt.eps.map[i] == ctx.eps(al)
        assert pkt.index[ctx.inv(al)] == pkt.sg.inv[i]
        for j in range(n):
            be = pkt.elements[j]
            assert pkt.index[ctx.oplus(al, be)] == pkt.sg.table[i, j]
        for t in range(chain2.order):
            assert pkt.index[ctx.act(t, al)] == pkt.action.act[t, i]


def test_pkt_satisfies_fixed_range(catalog):
    for kn, tn in [("z2", "chain2"), ("chain2", "chain3"), ("z2", "z2_zero")]:
        pkt = pr.build_pkt(catalog[kn], catalog[tn])
        assert ac.check_AFR(pkt.action, pkt.eps)[0]


def test_hwr_orders(catalog):
    cases = [("z2", "chain2", 6), ("z2", "z2", 8), ("chain2", "chain3", 14)]
    for kn, tn, expect in cases:
        K, T = catalog[kn], catalog[tn]
        assert pr.wreath_order(K, T) == expect
        hw = pr.build_hwr(K, T)
        assert hw.sg.order == expect
        # group base: the single fiber is the whole power
        if len(T.idempotents) == 1:
            fibers = pr.kernel_rsd(hw.rsd)
            (mem,) = fibers.values()
            assert len(mem) == K.order ** T.order


def test_total_and_ideal_forms_are_isomorphic(catalog):
    for kn, tn in [("z2", "chain2"), ("z2_zero", "chain2"), ("chain2", "chain2")]:
        K, T = catalog[kn], catalog[tn]
        lwr = pr.build_lwr(K, T)
        hwr = pr.build_hwr(K, T)
        psi = pr.Psi_remark(lwr, hwr)
        phi = pr.hbar_inverse(lwr, hwr)
        assert (psi.map[phi.map] == np.arange(len(hwr.elements))).all()
        assert (phi.map[psi.map] == np.arange(len(lwr.elements))).all()


def test_range_compatible_power(catalog):
    cf, chain2 = catalog["clifford4"], catalog["chain2"]
    triple = mo.make_triple(cf, chain2, [0, 1, 0, 1])
    peta = pr.build_p_eta(triple)
    assert peta.sg.order == 6
    # every member sends each point into the fiber over its range
    e_index = {int(t): i for i, t in enumerate(triple.e_in_t)}
    for i, p in enumerate(peta.members):
        al = peta.pkt.elements[int(p)]
        for x, v in zip(peta.pkt.ctx.ideals[al.domain_generator], al.values):
            assert triple.eta.map[v] == e_index[int(chain2.rans[x])]
    hwe = pr.build_hwr_eta(triple, pkt=peta.pkt)
    assert hwe.sg.order == 6
    assert hwe.peta.pkt is peta.pkt


def test_reduce_first_factor(catalog):
    z3, z2 = catalog["z3"], catalog["z2"]
    const = ac.validate_action(z2, z3, [[0, 0, 0], [0, 0, 0]])
    Ksub, kelems, sub = pr.reduce_first_factor(z3, z2, const)
    assert Ksub.order == 1 and list(kelems) == [0]
    assert sub.act.shape == (2, 1)


def test_size_caps(catalog):
    with pytest.raises(TooLarge) as e:
        pr.build_pkt(catalog["b2"], catalog["i2"])
    assert e.value.bound == pr.WREATH_CAP
    with pytest.raises(TooLarge) as e:
        pr.build_lwr(catalog["i2"], catalog["i2"])
    assert e.value.bound == pr.POWER_CAP
