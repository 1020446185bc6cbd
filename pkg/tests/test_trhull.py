import numpy as np
import pytest

from invsem import congruences as cg
from invsem import core, morphisms as mo, trhull as th
from invsem.core import TooLarge


HULL_ORDERS = {
    "trivial": (1, 1), "chain2": (2, 2), "z2": (2, 2), "chain3": (3, 3),
    "fork": (4, 3), "z3": (3, 3), "z2_zero": (3, 3), "chain4": (4, 4),
    "square4": (4, 4), "clifford4": (4, 4), "b2": (7, 5), "i2": (7, 7),
}


def test_hull_orders(catalog):
    for name, (order, inner_count) in HULL_ORDERS.items():
        h = th.enumerate_hull(catalog[name])
        assert h.sg.order == order, name
        assert len({int(i) for i in h.inner_of}) == inner_count, name
        # monoids are exactly the fixtures with no outer pairs
        has_identity = any(
            (catalog[name].table[e] == np.arange(order and catalog[name].order)).all()
            for e in catalog[name].idempotents)
        assert (order == inner_count) == has_identity, name


def test_backtracking_matches_naive(catalog):
    for name in HULL_ORDERS:
        S = catalog[name]
        if S.order > th.NAIVE_BOUND:
            continue
        fast = th.enumerate_hull(S)
        slow = th.naive_hull(S)
        assert [w.key() for w in fast.elements] == [w.key() for w in slow.elements], name


def test_hull_bounds(catalog):
    big = core.direct_product(catalog["square4"], catalog["square4"])
    with pytest.raises(TooLarge):
        th.enumerate_hull(big)
    with pytest.raises(TooLarge):
        th.naive_hull(catalog["i2"])


def test_brandt_hull_is_the_symmetric_monoid(catalog):
    h = th.enumerate_hull(catalog["b2"])
    assert mo.isomorphism_search(h.sg, catalog["i2"]) is not None


def test_pair_laws(catalog):
    for name in ["fork", "z2_zero", "b2", "i2"]:
        S = catalog[name]
        h = th.enumerate_hull(S)
        n = h.sg.order
        ident = h.elements[h.identity]
        assert (ident.left == np.arange(S.order)).all()
        assert (ident.right == np.arange(S.order)).all()
        for i, w in enumerate(h.elements):
            assert th.is_bitranslation(S, w)
            assert h.sg.inv[i] == h.index[th.inverse_bitr(w).key()]
            for j, v in enumerate(h.elements):
                assert h.sg.table[i, j] == h.index[th.compose_bitr(w, v).key()]
                # the coordinate order formula matches the table-level order
                assert th.natural_leq_bitr(w, v) == bool(h.sg.leq[i, j])


def test_inner_embedding_and_ideal(catalog):
    for name in ["chain3", "fork", "z2_zero", "b2", "i2"]:
        h = th.enumerate_hull(catalog[name])
        phi = th.canonical_pi(h)
        assert phi.injective
        assert th.inner_is_ideal(h)


def test_hull_identities(catalog):
    for name in ["chain2", "z2", "fork", "z2_zero", "b2", "i2"]:
        got = th.hull_identities(th.enumerate_hull(catalog[name]))
        assert all(got.values()), (name, got)


def test_fork_gains_exactly_the_identity(catalog):
    fork = catalog["fork"]
    h = th.enumerate_hull(fork)
    outer = set(range(4)) - {int(i) for i in h.inner_of}
    assert outer == {h.identity}
    assert h.sg.names[h.identity] == "id"


def test_every_pair_respects_every_congruence(catalog):
    for name in HULL_ORDERS:
        S = catalog[name]
        if S.order > th.NAIVE_BOUND:
            continue
        h = th.enumerate_hull(S)
        for theta in cg.enumerate_congruences(S):
            for w in h.elements:
                assert th.respects(w, theta), name


def test_downharp_sends_inner_to_inner(catalog):
    i2 = catalog["i2"]
    rees = cg.enumerate_congruences(i2)[1]
    Q, qmap = cg.quotient(rees)
    for s in range(i2.order):
        got = th.downharp(th.inner(i2, s), rees, (Q, qmap))
        assert got == th.inner(Q, int(qmap[s]))


def test_downharp_rejects_torn_pair(catalog):
    z2z = catalog["z2_zero"]
    theta = cg.is_congruence(z2z, [0, 1, 1])
    fake = th.Bitranslation(z2z, np.array([0, 1, 0]), np.array([0, 1, 0]))
    assert not th.respects(fake, theta)
    with pytest.raises(th.DoesNotRespect) as e:
        th.downharp(fake, theta)
    assert e.value.witness == 2


def test_extension_hull_membership(catalog):
    fork, b2, i2 = catalog["fork"], catalog["b2"], catalog["i2"]
    he = th.hull_of_extension(fork, cg.diagonal(fork))
    assert len(he.members) == 3          # the adjoined identity is not inner downstairs
    assert sorted(he.down) == [0, 1, 2]
    # the inner pair of s projects to the class of s
    assert np.array_equal(he.down[he.pi_member], he.qmap)
    he = th.hull_of_extension(b2, cg.diagonal(b2))
    assert len(he.members) == 5          # exactly the inner part
    assert sorted(he.members) == sorted(int(i) for i in he.hull.inner_of)
    rees = cg.enumerate_congruences(i2)[1]
    he = th.hull_of_extension(i2, rees)
    assert len(he.members) == 7          # the whole hull respects and lands inner
    assert sorted(len(c) for c in he.omega.classes()) == [1, 1, 5]


def test_projection_realizes_the_quotient(catalog):
    cases = [
        ("fork", cg.diagonal(catalog["fork"])),
        ("b2", cg.diagonal(catalog["b2"])),
        ("i2", cg.enumerate_congruences(catalog["i2"])[1]),
        ("z2_zero", cg.is_congruence(catalog["z2_zero"], [0, 1, 1])),
    ]
    for name, theta in cases:
        he = th.hull_of_extension(catalog[name], theta)
        got = th.prop35_check(he)
        assert all(got.values()), (name, got)
        assert np.array_equal(th.omega_relation_signature(he), he.omega.class_of), name


def test_shift_pairs(rsd_fixtures):
    for name, P in rsd_fixtures:
        got = th.shift_pairs_are_translations(P)
        assert all(got.values()), (name, got)
        got = th.shift_embedding_check(P)
        assert all(got.values()), (name, got)
        got = th.shift_order_and_conjugation_check(P)
        assert all(got.values()), (name, got)
