"""Pair products over an action, pointwise powers, and wreath builds.

Two pair rules share one vectorized table builder: the unrestricted one
keeps (a,t) with ran(t).a = a and multiplies as ((ran(tu).a)(t.b), tu);
the range-restricted one keeps eps(a) = ran(t) and multiplies as
(a(t.b), tu).  On the restricted carrier both rules agree, which the
builder asserts.
"""

from dataclasses import dataclass

import numpy as np

from . import actions, congruences, core, morphisms
from .actions import AFRViolated, EndoAction, EpsilonMap
from .core import FiniteSemigroup, InverseSemigroup, TooLarge

WREATH_CAP = 20000
POWER_CAP = 4096
NAME_CAP = 200


@dataclass(frozen=True, eq=False)
class LambdaSemidirectProduct:
    K: InverseSemigroup
    T: InverseSemigroup
    action: EndoAction
    elements: tuple
    index: dict
    sg: InverseSemigroup
    pi2: morphisms.Morphism


@dataclass(frozen=True, eq=False)
class FullRestrictedSemidirectProduct:
    K: InverseSemigroup
    T: InverseSemigroup
    action: EndoAction
    eps: EpsilonMap
    elements: tuple
    index: dict
    sg: InverseSemigroup
    pi2: morphisms.Morphism


def _pair_names(K, T, elements):
    if len(elements) > NAME_CAP:
        return None
    return tuple(f"({K.name_of(a)}|{T.name_of(t)})" for a, t in elements)


def _build_pair_product(K, T, action, elements, restricted):
    act = action.act
    A = np.array([a for a, _ in elements], dtype=np.int64)
    U = np.array([t for _, t in elements], dtype=np.int64)
    m = len(elements)
    index = {p: i for i, p in enumerate(elements)}
    t_new = T.table[U[:, None], U[None, :]]
    second = act[U[:, None], A[None, :]]          # t_i . a_j
    shrunk = act[T.rans[t_new], A[:, None]]       # ran(t_i t_j) . a_i
    if restricted:
        a_new = K.table[np.broadcast_to(A[:, None], (m, m)), second]
        # on the restricted carrier the shrink is a no-op
        assert np.array_equal(a_new, K.table[shrunk, second])
    else:
        a_new = K.table[shrunk, second]
    pairdex = np.full((K.order, T.order), -1, dtype=np.int64)
    pairdex[A, U] = np.arange(m)
    table = pairdex[a_new, t_new]
    assert (table >= 0).all(), "carrier not closed under the pair rule"
    sg = core.validate(table, names=_pair_names(K, T, elements))
    # the inverse of (a,t) is (t^-1 . a^-1, t^-1)
    expect = pairdex[act[T.inv[U], K.inv[A]], T.inv[U]]
    assert np.array_equal(sg.inv, expect)
    pi2 = morphisms.is_homomorphism(U, sg, T)
    assert pi2.surjective
    return index, sg, pi2


def build_lsd(K, T, action):
    """Pairs (a,t) with ran(t).a = a under the shrinking rule."""
    assert action.K is K and action.T is T
    act = action.act
    elements = tuple((a, t) for a in range(K.order) for t in range(T.order)
                     if act[T.rans[t], a] == a)
    index, sg, pi2 = _build_pair_product(K, T, action, elements, restricted=False)
    return LambdaSemidirectProduct(K, T, action, elements, index, sg, pi2)


def build_rsd(K, T, action, eps):
    """Pairs (a,t) with eps(a) = ran(t); needs the fixed-range condition."""
    assert action.K is K and action.T is T and eps.K is K and eps.T is T
    ok, w = actions.check_AFR(action, eps)
    if not ok:
        raise AFRViolated(w)
    elements = tuple((a, t) for a in range(K.order) for t in range(T.order)
                     if eps.map[a] == T.rans[t])
    index, sg, pi2 = _build_pair_product(K, T, action, elements, restricted=True)
    return FullRestrictedSemidirectProduct(K, T, action, eps, elements, index, sg, pi2)


def pi2_congruence(P):
    return congruences.congruence_from_map(P.sg, P.pi2.map)


def kernel_via_congruence(P):
    """Members of the kernel of ker(pi2), through the congruence machinery."""
    return congruences.kernel(pi2_congruence(P))


def kernel_lsd(P):
    """Fiberwise kernel of the unrestricted product: over e it is e.K x {e}."""
    act = P.action.act
    out = {}
    for e in P.T.idempotents:
        image = sorted({int(act[e, a]) for a in range(P.K.order)})
        members = tuple(P.index[(a, e)] for a in image)
        fixed = tuple(i for i, (a, t) in enumerate(P.elements)
                      if t == e and act[e, a] == a)
        assert members == fixed
        out[e] = members
    return out


def kernel_rsd(P):
    """Fiberwise kernel of the restricted product: over e it is K_e x {e}."""
    out = {}
    for e in P.T.idempotents:
        fiber = np.flatnonzero(P.eps.map == e)
        out[e] = tuple(P.index[(int(a), e)] for a in fiber)
    return out


def reduce_first_factor(K, T, action):
    """Shrink K to the union of the idempotent images; the action restricts."""
    act = action.act
    members = set()
    for e in T.idempotents:
        members.update(int(x) for x in act[e])
    Ksub, kelems = core.subsemigroup(K, members)
    pos = {int(x): i for i, x in enumerate(kelems)}
    sub = np.empty((T.order, len(kelems)), dtype=np.int64)
    for t in range(T.order):
        for i, a in enumerate(kelems):
            v = int(act[t, a])
            assert v in pos, "image union not closed under the action"
            sub[t, i] = pos[v]
    return Ksub, kelems, actions.validate_action(T, Ksub, sub)


def psi_lemma21(P):
    """(a,t) -> ((a, ran t), t): the unrestricted product, rebuilt as restricted."""
    T = P.T
    ka = actions.induced_kernel_action(P)
    rsd = build_rsd(ka.kernel, T, ka.action, ka.eps)
    pos = {p: j for j, p in enumerate(ka.pairs)}
    values = np.empty(len(P.elements), dtype=np.int64)
    for i, (a, t) in enumerate(P.elements):
        j = pos[(a, int(T.rans[t]))]
        values[i] = rsd.index[(j, t)]
    psi = morphisms.is_homomorphism(values, P.sg, rsd.sg)
    assert psi.bijective
    return psi, rsd, ka


@dataclass(frozen=True)
class PartialFunctionElement:
    domain_generator: int
    values: tuple


class PFunContext:
    """Principal-ideal bookkeeping for maps defined on T-ideals."""

    def __init__(self, K, T):
        self.K = K
        self.T = T
        self.ideals = {}
        self.pos = {}
        for e in T.idempotents:
            ideal = tuple(sorted({int(x) for x in T.table[:, e]}))
            self.ideals[e] = ideal
            self.pos[e] = {x: i for i, x in enumerate(ideal)}

    def apply(self, al, x):
        return al.values[self.pos[al.domain_generator][int(x)]]

    def oplus(self, al, be):
        """Pointwise product on the intersection of the two ideals."""
        e = int(self.T.table[al.domain_generator, be.domain_generator])
        vals = tuple(int(self.K.table[self.apply(al, x), self.apply(be, x)])
                     for x in self.ideals[e])
        return PartialFunctionElement(e, vals)

    def act(self, t, al):
        """Precompose with right multiplication by t; the ideal moves to ran(t e)."""
        Tt = self.T.table
        e2 = int(self.T.rans[Tt[t, al.domain_generator]])
        vals = tuple(self.apply(al, Tt[x, t]) for x in self.ideals[e2])
        return PartialFunctionElement(e2, vals)

    def inv(self, al):
        return PartialFunctionElement(
            al.domain_generator, tuple(int(self.K.inv[v]) for v in al.values))

    def eps(self, al):
        return al.domain_generator

    def name(self, al):
        e = al.domain_generator
        body = ",".join(f"{self.T.name_of(x)}>{self.K.name_of(v)}"
                        for x, v in zip(self.ideals[e], al.values))
        return "{" + body + "}"


@dataclass(frozen=True, eq=False)
class PointwisePower:
    K: InverseSemigroup
    T: InverseSemigroup
    ctx: PFunContext
    elements: tuple
    index: dict
    blocks: dict                # generator -> (offset, count)
    sg: InverseSemigroup
    action: EndoAction
    eps: EpsilonMap


def build_pkt(K, T, cap=WREATH_CAP):
    """Union over idempotents e of all maps Te -> K, under pointwise product."""
    ctx = PFunContext(K, T)
    nK = K.order
    gens = sorted(T.idempotents)
    length = {e: len(ctx.ideals[e]) for e in gens}
    sizes = {e: nK ** length[e] for e in gens}
    total = sum(sizes.values())
    if total > cap:
        raise TooLarge("pointwise power order", total, cap)
    blocks = {}
    off = 0
    for e in gens:
        blocks[e] = (off, sizes[e])
        off += sizes[e]
    V = {e: actions._mixed_radix(np.arange(sizes[e]), length[e], nK) for e in gens}
    wts = {e: nK ** np.arange(length[e] - 1, -1, -1) for e in gens}
    elements = []
    for e in gens:
        for row in V[e]:
            elements.append(PartialFunctionElement(e, tuple(int(v) for v in row)))
    elements = tuple(elements)
    index = {p: i for i, p in enumerate(elements)}
    table = np.empty((total, total), dtype=np.int64)
    for e in gens:
        oe, me = blocks[e]
        for f in gens:
            of, mf = blocks[f]
            g = int(T.table[e, f])
            ixe = np.array([ctx.pos[e][x] for x in ctx.ideals[g]])
            ixf = np.array([ctx.pos[f][x] for x in ctx.ideals[g]])
            Bv = V[f][:, ixf]
            step = max(1, (1 << 22) // max(1, mf * length[g]))
            for r0 in range(0, me, step):
                Av = V[e][r0:r0 + step][:, ixe]
                C = K.table[Av[:, None, :], Bv[None, :, :]]
                table[oe + r0:oe + r0 + len(Av), of:of + mf] = blocks[g][0] + C @ wts[g]
    names = None
    if total <= NAME_CAP:
        names = tuple(ctx.name(p) for p in elements)
    sg = core.validate(table, names=names)
    act = np.empty((T.order, total), dtype=np.int64)
    for t in range(T.order):
        for e in gens:
            oe, me = blocks[e]
            e2 = int(T.rans[T.table[t, e]])
            cols = np.array([ctx.pos[e][int(T.table[x, t])] for x in ctx.ideals[e2]],
                            dtype=np.int64)
            act[t, oe:oe + me] = blocks[e2][0] + V[e][:, cols] @ wts[e2]
    action = actions.validate_action(T, sg, act)
    eps_vals = np.empty(total, dtype=np.int64)
    for e in gens:
        oe, me = blocks[e]
        eps_vals[oe:oe + me] = e
    eps = actions.validate_eps(sg, T, eps_vals)
    return PointwisePower(K, T, ctx, elements, index, blocks, sg, action, eps)


@dataclass(frozen=True, eq=False)
class HoughtonWreath:
    K: InverseSemigroup
    T: InverseSemigroup
    pkt: PointwisePower
    elements: tuple             # (power index, t)
    index: dict
    sg: InverseSemigroup
    pi2: morphisms.Morphism
    rsd: FullRestrictedSemidirectProduct


def wreath_order(K, T):
    ctx = PFunContext(K, T)
    return sum(K.order ** len(ctx.ideals[int(T.rans[t])]) for t in range(T.order))


def build_hwr(K, T, cap=WREATH_CAP):
    """Pairs (map on T.ran(t), t), multiplied by pointwise-product-and-shift."""
    total = wreath_order(K, T)
    if total > cap:
        raise TooLarge("wreath order", total, cap)
    pkt = build_pkt(K, T, cap)
    elements = tuple((p, t) for p in range(len(pkt.elements)) for t in range(T.order)
                     if pkt.elements[p].domain_generator == int(T.rans[t]))
    assert len(elements) == total
    index, sg, pi2 = _build_pair_product(pkt.sg, T, pkt.action, elements, restricted=True)
    rsd = build_rsd(pkt.sg, T, pkt.action, pkt.eps)
    assert rsd.elements == elements and np.array_equal(rsd.sg.table, sg.table)
    return HoughtonWreath(K, T, pkt, elements, index, sg, pi2, rsd)


@dataclass(frozen=True, eq=False)
class RangeCompatiblePower:
    triple: morphisms.NormalExtensionTriple
    pkt: PointwisePower
    members: np.ndarray         # local index -> pkt index
    sg: InverseSemigroup
    action: EndoAction
    eps: EpsilonMap


def build_p_eta(triple, pkt=None, cap=WREATH_CAP):
    """Restrict the pointwise power to maps sending each x to the fiber of ran(x)."""
    K, T = triple.K, triple.T
    if pkt is None:
        pkt = build_pkt(K, T, cap)
    e_index = {int(t): i for i, t in enumerate(triple.e_in_t)}
    allowed = np.zeros((T.order, K.order), dtype=bool)
    for x in range(T.order):
        want = e_index[int(T.rans[x])]
        allowed[x] = triple.eta.map == want
    members = []
    for e, (oe, me) in pkt.blocks.items():
        ideal = np.array(pkt.ctx.ideals[e], dtype=np.int64)
        V = np.array([pkt.elements[oe + i].values for i in range(me)], dtype=np.int64)
        mask = allowed[ideal[:, None], V.T].all(axis=0)
        members.extend((oe + np.flatnonzero(mask)).tolist())
    sub, pelems = core.subsemigroup(pkt.sg, members)
    pos = {int(x): i for i, x in enumerate(pelems)}
    act = np.empty((T.order, len(pelems)), dtype=np.int64)
    for t in range(T.order):
        for i, p in enumerate(pelems):
            v = int(pkt.action.act[t, p])
            assert v in pos, "range-compatible power not closed under the action"
            act[t, i] = pos[v]
    action = actions.validate_action(T, sub, act)
    eps = actions.validate_eps(sub, T, pkt.eps.map[pelems])
    ok, w = actions.check_AFR(action, eps)
    assert ok, f"restricted power lost the fixed-range condition at {w}"
    return RangeCompatiblePower(triple, pkt, pelems, sub, action, eps)


@dataclass(frozen=True, eq=False)
class EtaWreath:
    triple: morphisms.NormalExtensionTriple
    peta: RangeCompatiblePower
    elements: tuple             # (local power index, t)
    index: dict
    sg: InverseSemigroup
    pi2: morphisms.Morphism
    rsd: FullRestrictedSemidirectProduct


def build_hwr_eta(triple, pkt=None, cap=WREATH_CAP):
    peta = build_p_eta(triple, pkt=pkt, cap=cap)
    rsd = build_rsd(peta.sg, triple.T, peta.action, peta.eps)
    return EtaWreath(triple, peta, rsd.elements, rsd.index, rsd.sg, rsd.pi2, rsd)


@dataclass(frozen=True, eq=False)
class LambdaWreath:
    K: InverseSemigroup
    T: InverseSemigroup
    power: InverseSemigroup
    digits: np.ndarray          # power index -> value at each T element
    weights: np.ndarray
    action: EndoAction
    lsd: LambdaSemidirectProduct

    @property
    def sg(self):
        return self.lsd.sg

    @property
    def elements(self):
        return self.lsd.elements

    @property
    def index(self):
        return self.lsd.index

    @property
    def pi2(self):
        return self.lsd.pi2


def build_lwr(K, T, cap=POWER_CAP):
    """The unrestricted pair product over the full direct power of K."""
    nK, nT = K.order, T.order
    nP = nK ** nT
    if nP > cap:
        raise TooLarge("full power order", nP, cap)
    D = actions._mixed_radix(np.arange(nP), nT, nK)
    w = nK ** np.arange(nT - 1, -1, -1)
    table = np.empty((nP, nP), dtype=np.int64)
    step = max(1, (1 << 22) // max(1, nP * nT))
    for r0 in range(0, nP, step):
        C = K.table[D[r0:r0 + step, None, :], D[None, :, :]]
        table[r0:r0 + len(C)] = C @ w
    inv = K.inv[D] @ w
    kid = np.zeros(nK, dtype=bool)
    kid[list(K.idempotents)] = True
    idems = tuple(int(i) for i in np.flatnonzero(kid[D].all(axis=1)))
    power = InverseSemigroup(FiniteSemigroup(nP, table), inv, idems)
    if nP <= 300:
        checked = core.validate(table)
        assert np.array_equal(checked.inv, inv) and checked.idempotents == idems
    act = np.empty((nT, nP), dtype=np.int64)
    for t in range(nT):
        act[t] = D[:, T.table[:, t]] @ w
    paction = actions.validate_action(T, power, act)
    total = wreath_order(K, T)
    if total > cap:
        raise TooLarge("wreath order", total, cap)
    lsd = build_lsd(power, T, paction)
    assert lsd.sg.order == total
    return LambdaWreath(K, T, power, D, w, paction, lsd)


def Psi_remark(lwr, hwr):
    """Restrict each total map to the ideal of ran(t); bijective morphism."""
    assert lwr.K is hwr.K and lwr.T is hwr.T
    T = lwr.T
    ctx = hwr.pkt.ctx
    values = np.empty(len(lwr.elements), dtype=np.int64)
    for i, (f, t) in enumerate(lwr.elements):
        e = int(T.rans[t])
        pfe = PartialFunctionElement(e, tuple(int(lwr.digits[f, x]) for x in ctx.ideals[e]))
        values[i] = hwr.index[(hwr.pkt.index[pfe], t)]
    psi = morphisms.is_homomorphism(values, lwr.sg, hwr.sg)
    assert psi.bijective
    return psi


def hbar_inverse(lwr, hwr):
    """Extend each ideal map to a total one along x -> x.ran(t)."""
    T = lwr.T
    ctx = hwr.pkt.ctx
    values = np.empty(len(hwr.elements), dtype=np.int64)
    for i, (p, t) in enumerate(hwr.elements):
        pfe = hwr.pkt.elements[p]
        e = int(T.rans[t])
        digits = np.array([ctx.apply(pfe, T.table[x, e]) for x in range(T.order)],
                          dtype=np.int64)
        values[i] = lwr.index[(int(digits @ lwr.weights), t)]
    phi = morphisms.is_homomorphism(values, hwr.sg, lwr.sg)
    assert phi.bijective
    return phi
