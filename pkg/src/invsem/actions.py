"""Actions by endomorphisms, fixed-range conditions, strong semilattices.

The central predicate is check_AFR: a surjective idempotent-valued map
eps on K matches the action when e.a = a holds exactly for eps(a) <= e.
Everything downstream of the restricted pair product relies on it.
"""

from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from . import congruences, core, morphisms
from .core import InverseSemigroup, TooLarge

ENDO_BOUND = 7
NAIVE_ACTION_BOUND = 400_000


class NotEndomorphism(Exception):
    def __init__(self, t, a, b):
        self.witness = (t, a, b)
        super().__init__(f"{t} does not preserve the product at ({a},{b})")


class NotActionHom(Exception):
    def __init__(self, t, u, a):
        self.witness = (t, u, a)
        super().__init__(f"({t}*{u}).{a} differs from {t}.({u}.{a})")


class AFRViolated(Exception):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"fixed-range condition fails at {witness}")


@dataclass(frozen=True, eq=False)
class EndoAction:
    T: InverseSemigroup
    K: InverseSemigroup
    act: np.ndarray             # act[t, a] = t.a


@dataclass(frozen=True, eq=False)
class EpsilonMap:
    K: InverseSemigroup
    T: InverseSemigroup
    map: np.ndarray             # K index -> idempotent of T


def validate_action(T, K, act):
    act = np.asarray(act, dtype=np.int64)
    if act.shape != (T.order, K.order):
        raise ValueError(f"action must be |T| x |K| = {T.order} x {K.order}")
    if len(act.ravel()) and (act.min() < 0 or act.max() >= K.order):
        raise ValueError("action values out of range")
    Kt = K.table
    step = max(1, (1 << 22) // max(1, K.order * K.order))
    for t0 in range(0, T.order, step):
        blk = act[t0:t0 + step]
        lhs = blk[:, Kt]
        rhs = Kt[blk[:, :, None], blk[:, None, :]]
        if not np.array_equal(lhs, rhs):
            t, a, b = np.argwhere(lhs != rhs)[0]
            raise NotEndomorphism(int(t) + t0, int(a), int(b))
    lhs = act[T.table]
    rhs = act[:, act]
    if not np.array_equal(lhs, rhs):
        t, u, a = np.argwhere(lhs != rhs)[0]
        raise NotActionHom(int(t), int(u), int(a))
    return EndoAction(T, K, act)


def validate_eps(K, T, values):
    values = np.asarray(values, dtype=np.int64)
    if values.shape != (K.order,):
        raise ValueError("eps must assign every element of K")
    idem = set(T.idempotents)
    for a, v in enumerate(values.tolist()):
        if v not in idem:
            raise ValueError(f"eps({a}) = {v} is not an idempotent")
    ok = values[K.table] == T.table[values[:, None], values[None, :]]
    if not ok.all():
        a, b = np.argwhere(~ok)[0]
        raise morphisms.NotMultiplicative(int(a), int(b))
    if set(values.tolist()) != idem:
        raise congruences.NotSurjective("eps misses some idempotent of T")
    return EpsilonMap(K, T, values)


def check_AFR(action, eps):
    """e.a = a iff eps(a) <= e, over all idempotents e and elements a.

    Returns (True, None) or (False, (a, e)) with the least witness.
    """
    T, K, A = action.T, action.K, action.act
    idems = list(T.idempotents)
    fixed = A[np.array(idems)] == np.arange(K.order)[None, :]   # [i, a]: e_i.a = a
    below = T.leq[np.ix_(eps.map, np.array(idems))]             # [a, i]: eps(a) <= e_i
    for a in range(K.order):
        for i, e in enumerate(idems):
            if bool(fixed[i, a]) != bool(below[a, i]):
                return False, (a, int(e))
    return True, None


def check_AE7_AE8(action, eps):
    """eps fixes its own class, and eps of t.a is ran(t eps(a))."""
    T, K, A = action.T, action.K, action.act
    n = K.order
    own = A[eps.map, np.arange(n)]
    for a in range(n):
        if own[a] != a:
            return False, ("fix-own-class", a)
    lhs = eps.map[A]
    rhs = T.rans[T.table[:, eps.map]]
    if not np.array_equal(lhs, rhs):
        t, a = np.argwhere(lhs != rhs)[0]
        return False, ("range-transport", int(t), int(a))
    return True, None


def check_modified(action, decomp):
    """Classwise form: e fixes its fiber, and t maps fiber(e) into fiber(ran(te))."""
    T, K, A = action.T, action.K, action.act
    eta = decomp.eta
    embed = decomp.embed
    assert embed is not None, "decomposition must embed its semilattice into T"
    e_of = embed[eta.map]               # K element -> its class idempotent in T
    n = K.order
    for a in range(n):
        if A[e_of[a], a] != a:
            return False, ("class-fix", a)
    inv_embed = {int(t): i for i, t in enumerate(embed)}
    lhs = eta.map[A]
    target = T.rans[T.table[:, e_of]]
    for t in range(T.order):
        for a in range(n):
            if lhs[t, a] != inv_embed[int(target[t, a])]:
                return False, ("class-transport", t, a)
    return True, None


@dataclass(frozen=True, eq=False)
class StrongSemilattice:
    K: InverseSemigroup
    eps: EpsilonMap
    classes: dict               # idempotent of T -> members of the fiber
    maps: dict                  # (e, f) with f <= e -> fiber(e) -> fiber(f), by position


def strong_semilattice(action, eps):
    """Structure maps a -> f.a between fibers, with the three gluing laws checked."""
    ok, w = check_AFR(action, eps)
    if not ok:
        raise AFRViolated(w)
    T, K, A = action.T, action.K, action.act
    idems = sorted(set(eps.map.tolist()))
    classes = {e: np.flatnonzero(eps.map == e) for e in idems}
    maps = {}
    for e in idems:
        for f in idems:
            if not T.leq[f, e]:
                continue
            img = A[f, classes[e]]
            assert (eps.map[img] == f).all()
            maps[(e, f)] = img
    pos = {e: {int(a): i for i, a in enumerate(classes[e])} for e in idems}
    # identity on each fiber
    for e in idems:
        assert np.array_equal(maps[(e, e)], classes[e])
    # transitivity down chains
    for e in idems:
        for f in idems:
            if not T.leq[f, e]:
                continue
            for g in idems:
                if not T.leq[g, f]:
                    continue
                step = np.array([maps[(f, g)][pos[f][int(x)]] for x in maps[(e, f)]])
                assert np.array_equal(step, maps[(e, g)])
    # products factor through the meet fiber
    for e in idems:
        for f in idems:
            ef = int(T.table[e, f])
            for i, a in enumerate(classes[e]):
                for j, b in enumerate(classes[f]):
                    glued = K.table[maps[(e, ef)][i], maps[(f, ef)][j]]
                    assert glued == K.table[a, b]
    return StrongSemilattice(K, eps, classes, maps)


def rebuild_from_structure(ssl):
    """Recompute the product table from the structure maps alone."""
    K = ssl.K
    T = ssl.eps.T
    n = K.order
    pos = {e: {int(a): i for i, a in enumerate(c)} for e, c in ssl.classes.items()}
    out = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        e = int(ssl.eps.map[a])
        for b in range(n):
            f = int(ssl.eps.map[b])
            ef = int(T.table[e, f])
            x = ssl.maps[(e, ef)][pos[e][a]]
            y = ssl.maps[(f, ef)][pos[f][b]]
            out[a, b] = K.table[x, y]
    return out


@dataclass(frozen=True, eq=False)
class KernelAction:
    product: object
    kernel: InverseSemigroup
    product_indices: np.ndarray     # kernel element -> index in the ambient product
    pairs: tuple                    # kernel element -> (a, t) pair
    action: EndoAction
    eps: EpsilonMap


def induced_kernel_action(P):
    """Restrict the ambient action to the kernel of the second projection.

    The kernel is found through the congruence machinery, not through the
    fiber formulas, so the two can be compared independently.
    """
    T = P.T
    theta = congruences.congruence_from_map(P.sg, P.pi2.map)
    members = congruences.kernel(theta)
    Ksub, kelems = core.subsemigroup(P.sg, members.members)
    pairs = tuple(P.elements[int(i)] for i in kelems)
    pos = {p: j for j, p in enumerate(pairs)}
    act = np.empty((T.order, len(pairs)), dtype=np.int64)
    for t in range(T.order):
        for j, (a, e) in enumerate(pairs):
            target = (int(P.action.act[t, a]), int(T.rans[T.table[t, e]]))
            assert target in pos, "kernel is not closed under the induced action"
            act[t, j] = pos[target]
    action = validate_action(T, Ksub, act)
    eps = validate_eps(Ksub, T, np.array([e for (_, e) in pairs], dtype=np.int64))
    return KernelAction(P, Ksub, kelems, pairs, action, eps)


def _mixed_radix(idx, width, base):
    digits = np.empty((len(idx), width), dtype=np.int64)
    rest = idx.copy()
    for j in range(width - 1, -1, -1):
        digits[:, j] = rest % base
        rest //= base
    return digits


def enumerate_endomorphisms(K, bound=ENDO_BOUND):
    """All product-preserving self-maps, in lexicographic order."""
    n = K.order
    if n > bound:
        raise TooLarge("endomorphism enumeration", n, bound)
    total = n ** n
    Kt = K.table
    step = max(1, (1 << 22) // max(1, n * n))
    keep = []
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total))
        M = _mixed_radix(idx, n, n)
        good = (M[:, Kt] == Kt[M[:, :, None], M[:, None, :]]).all(axis=(1, 2))
        keep.append(M[good])
    return np.concatenate(keep, axis=0)


def _product_generators(T):
    """Greedy generating set under products alone (no inverses)."""
    n = T.order
    gens = []
    known = set()
    for t in range(n):
        if t in known:
            continue
        gens.append(t)
        known = set(gens)
        frontier = list(known)
        while frontier:
            fresh = set()
            for a in frontier:
                for b in list(known):
                    fresh.add(int(T.table[a, b]))
                    fresh.add(int(T.table[b, a]))
            fresh -= known
            known |= fresh
            frontier = list(fresh)
    return gens


def enumerate_actions(T, K):
    """All actions of T on K by endomorphisms, deterministically ordered."""
    endos = enumerate_endomorphisms(K)
    key = {e.tobytes(): i for i, e in enumerate(endos)}

    def comp(i, j):
        # (i after j), because (tu).a = t.(u.a)
        return key[endos[i][endos[j]].tobytes()]

    gens = _product_generators(T)
    n = T.order
    out = []
    for choice in iproduct(range(len(endos)), repeat=len(gens)):
        assigned = {}
        ok = True
        pending = list(zip(gens, choice))
        pairqueue = []
        for t, ei in pending:
            assigned[t] = ei
        for x in assigned:
            for y in assigned:
                pairqueue.append((x, y))
        while pairqueue and ok:
            x, y = pairqueue.pop()
            z = int(T.table[x, y])
            val = comp(assigned[x], assigned[y])
            if z in assigned:
                if assigned[z] != val:
                    ok = False
            else:
                assigned[z] = val
                for w in list(assigned):
                    pairqueue.append((z, w))
                    pairqueue.append((w, z))
        if not ok or len(assigned) != n:
            continue
        act = np.stack([endos[assigned[t]] for t in range(n)])
        out.append(validate_action(T, K, act))
    return out


def enumerate_actions_naive(T, K, bound=NAIVE_ACTION_BOUND):
    """Filter every |T| x |K| table; the dumb oracle for the clever one."""
    m, n = T.order, K.order
    total = n ** (m * n)
    if total > bound:
        raise TooLarge("naive action enumeration", total, bound)
    Kt = K.table
    out = []
    step = max(1, (1 << 21) // max(1, m * n * n))
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total))
        M = _mixed_radix(idx, m * n, n).reshape(len(idx), m, n)
        endo = (M[:, :, Kt] == Kt[M[:, :, :, None], M[:, :, None, :]]).all(axis=(1, 2, 3))
        M = M[endo]
        if not len(M):
            continue
        b_idx = np.arange(len(M))[:, None, None, None]
        t_idx = np.arange(m)[None, :, None, None]
        rhs = M[b_idx, t_idx, M[:, None, :, :]]   # rhs[i,t,u,a] = t.(u.a)
        lhs = M[:, T.table, :]                    # lhs[i,t,u,a] = (tu).a
        M = M[(lhs == rhs).all(axis=(1, 2, 3))]
        out.extend(validate_action(T, K, a) for a in M)
    return out


def enumerate_surjective_eps(K, T):
    """Every surjective idempotent-valued multiplicative map K -> E(T)."""
    E, elems = core.idempotent_semilattice(T)
    nE, nK = E.order, K.order
    total = nE ** nK
    out = []
    step = max(1, (1 << 22) // max(1, nK * nK))
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total))
        M = _mixed_radix(idx, nK, nE)
        hom = (M[:, K.table] == E.table[M[:, :, None], M[:, None, :]]).all(axis=(1, 2))
        surj = (M[:, :, None] == np.arange(nE)[None, None, :]).any(axis=1).all(axis=1)
        for row in M[hom & surj]:
            out.append(validate_eps(K, T, elems[row]))
    return out
