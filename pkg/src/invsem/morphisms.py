"""Homomorphisms, isomorphism search, and extension problems.

An extension problem is a kernel semigroup K, a quotient T, and a
surjection from K onto the idempotents of T.  A candidate answer is a
semigroup with a congruence; `solves` decides whether it realizes the
problem and returns the witnessing pair of isomorphisms.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import congruences, core
from .core import InverseSemigroup, TooLarge

ISO_BOUND = 12


class NotMultiplicative(Exception):
    def __init__(self, a, b):
        self.witness = (a, b)
        super().__init__(f"map breaks the product at ({a},{b})")


class NotInjective(Exception):
    def __init__(self, a, b):
        self.witness = (a, b)
        super().__init__(f"{a} and {b} share an image")


@dataclass(frozen=True, eq=False)
class Morphism:
    source: InverseSemigroup
    target: InverseSemigroup
    map: np.ndarray
    injective: bool
    surjective: bool

    def __call__(self, a):
        return int(self.map[a])

    @property
    def bijective(self):
        return self.injective and self.surjective


def is_homomorphism(values, S, S2):
    m = np.asarray(values, dtype=np.int64)
    if m.shape != (S.order,):
        raise ValueError(f"map must assign all {S.order} elements")
    if len(m) and (m.min() < 0 or m.max() >= S2.order):
        raise ValueError("map values out of range")
    ok = m[S.table] == S2.table[m[:, None], m[None, :]]
    if not ok.all():
        a, b = np.argwhere(~ok)[0]
        raise NotMultiplicative(int(a), int(b))
    inj = len(set(m.tolist())) == S.order
    surj = len(set(m.tolist())) == S2.order
    return Morphism(S, S2, m, inj, surj)


def identity_morphism(S):
    return Morphism(S, S, np.arange(S.order), True, True)


def _profiles(S):
    n = S.order
    idem = np.zeros(n, dtype=np.int64)
    idem[list(S.idempotents)] = 1
    below = S.leq.sum(axis=1)
    above = S.leq.sum(axis=0)
    selfinv = (S.inv == np.arange(n)).astype(np.int64)
    dom_fib = np.bincount(S.doms, minlength=n)
    ran_fib = np.bincount(S.rans, minlength=n)
    base = list(zip(idem, below, above, selfinv, dom_fib[S.doms], ran_fib[S.rans]))
    # one refinement round: fingerprint each row/column of the table by profiles
    ids = {p: i for i, p in enumerate(sorted(set(base)))}
    lab = np.array([ids[p] for p in base])
    out = []
    for a in range(n):
        row = np.bincount(lab[S.table[a]], minlength=len(ids))
        col = np.bincount(lab[S.table[:, a]], minlength=len(ids))
        out.append(base[a] + (tuple(row), tuple(col)))
    return out


def _iso_search(S, S2, allowed=None, find_all=False):
    """Backtracking isomorphism search; yields maps when find_all, else first."""
    n = S.order
    results = []
    if S2.order != n:
        return results if find_all else None
    p1, p2 = _profiles(S), _profiles(S2)
    if sorted(p1) != sorted(p2):
        return results if find_all else None
    cand = []
    for a in range(n):
        row = [b for b in range(n) if p1[a] == p2[b]
               and (allowed is None or allowed[a][b])]
        if not row:
            return results if find_all else None
        cand.append(row)
    order = sorted(range(n), key=lambda a: len(cand[a]))
    T1, T2 = S.table, S2.table
    m = np.full(n, -1, dtype=np.int64)
    used = [False] * n

    def assign(a, b, trail):
        # propagate products with everything already assigned
        if m[a] != -1:
            return m[a] == b
        if used[b] or (allowed is not None and not allowed[a][b]) or p1[a] != p2[b]:
            return False
        m[a] = b
        used[b] = True
        trail.append((a, b))
        for x in np.flatnonzero(m != -1):
            for u, v in ((a, int(x)), (int(x), a)):
                if not assign(int(T1[u, v]), int(T2[m[u], m[v]]), trail):
                    return False
        return True

    def undo(trail, mark):
        while len(trail) > mark:
            a, b = trail.pop()
            m[a] = -1
            used[b] = False

    def dfs(i, trail):
        if i == n:
            results.append(m.copy())
            return not find_all
        a = order[i]
        if m[a] != -1:
            return dfs(i + 1, trail)
        for b in cand[a]:
            mark = len(trail)
            if assign(a, b, trail) and dfs(i + 1, trail):
                return True
            undo(trail, mark)
        return False

    dfs(0, [])
    if find_all:
        return results
    return results[0] if results else None


def isomorphism_search(S, S2, bound=ISO_BOUND):
    """First isomorphism found, as a Morphism, or None."""
    n = max(S.order, S2.order)
    if n > bound:
        raise TooLarge("isomorphism search", n, bound)
    m = _iso_search(S, S2)
    if m is None:
        return None
    return is_homomorphism(m, S, S2)


def all_isomorphisms(S, S2):
    return _iso_search(S, S2, find_all=True)


@dataclass(frozen=True, eq=False)
class NormalExtensionTriple:
    K: InverseSemigroup
    T: InverseSemigroup
    eta: Morphism               # K -> E(T) as a semilattice
    e_in_t: np.ndarray          # semilattice index -> T index

    @property
    def E(self):
        return self.eta.target

    @cached_property
    def eta_in_t(self):
        return self.e_in_t[self.eta.map]


def make_triple(K, T, eta_values_in_t):
    """Package K --eta--> E(T) <= T; eta must be onto the idempotents."""
    E, elems = core.idempotent_semilattice(T)
    pos = {int(t): i for i, t in enumerate(elems)}
    vals = []
    for a, v in enumerate(np.asarray(eta_values_in_t, dtype=np.int64)):
        if int(v) not in pos:
            raise ValueError(f"eta({a}) = {v} is not an idempotent of the codomain")
        vals.append(pos[int(v)])
    eta = is_homomorphism(vals, K, E)
    if not eta.surjective:
        raise congruences.NotSurjective("eta misses part of the idempotent semilattice")
    return NormalExtensionTriple(K, T, eta, elems)


@dataclass(frozen=True, eq=False)
class ExtensionSolution:
    S: InverseSemigroup
    theta: congruences.Congruence

    @cached_property
    def kernel_sub(self):
        members = congruences.kernel(self.theta)
        return core.subsemigroup(self.S, members.members)

    @cached_property
    def quotient(self):
        return congruences.quotient(self.theta)

    @cached_property
    def induced_triple(self):
        """The extension problem this pair answers tautologically."""
        Ksub, kelems = self.kernel_sub
        Q, qmap = self.quotient
        EQ, eelems = core.idempotent_semilattice(Q)
        pos = {int(q): i for i, q in enumerate(eelems)}
        vals = [pos[int(qmap[x])] for x in kelems]
        eta = is_homomorphism(vals, Ksub, EQ)
        assert eta.surjective
        return NormalExtensionTriple(Ksub, Q, eta, eelems)


def solves(triple, solution, bound=64):
    """Does (S, theta) realize the extension problem?  Returns (bool, witness).

    A yes needs isomorphisms beta: T -> S/theta and chi: K -> Ker theta
    with the class of chi(a) equal to beta(eta(a)) for every a.
    """
    K, T = triple.K, triple.T
    if max(K.order, T.order, solution.S.order) > bound:
        raise TooLarge("solution check", solution.S.order, bound)
    Q, qmap = solution.quotient
    if Q.order != T.order:
        return False, "quotient-order-mismatch"
    Ksub, kelems = solution.kernel_sub
    if Ksub.order != K.order:
        return False, "kernel-order-mismatch"
    eta_t = triple.eta_in_t
    kernel_class = qmap[kelems]
    for beta in all_isomorphisms(T, Q):
        required = beta[eta_t]          # K-element -> forced class in Q
        allowed = [[bool(kernel_class[p] == required[a]) for p in range(K.order)]
                   for a in range(K.order)]
        chi = _iso_search(K, Ksub, allowed=allowed)
        if chi is not None:
            return True, {"beta": beta, "chi": chi}
    return False, "no-compatible-isomorphism-pair"


def solution_embedding(phi, sol, sol2, iso=False):
    """Is phi an embedding (or isomorphism) of one solution into another?

    Means: phi injective (raise NotInjective otherwise), phi maps the
    kernel into (onto, when iso) the kernel, and relatedness is both
    preserved and reflected.
    """
    if not isinstance(phi, Morphism):
        phi = is_homomorphism(phi, sol.S, sol2.S)
    assert phi.source is sol.S and phi.target is sol2.S
    if not phi.injective:
        m = phi.map
        seen = {}
        for a, v in enumerate(m.tolist()):
            if v in seen:
                raise NotInjective(seen[v], a)
            seen[v] = a
    if iso and not phi.surjective:
        return False
    k1 = congruences.kernel(sol.theta).members
    k2 = congruences.kernel(sol2.theta).members
    image_k = {int(phi.map[a]) for a in k1}
    if iso:
        if image_k != set(k2):
            return False
    elif not image_k <= set(k2):
        return False
    c1 = congruences._canon(sol.theta.class_of)
    c2 = congruences._canon(sol2.theta.class_of[phi.map])
    return bool(np.array_equal(c1, c2))
