"""Finite inverse semigroups as dense Cayley tables.

Elements are indices 0..n-1, multiplication is an n x n numpy array,
and every derived map (inverse, domain/range idempotents, natural
partial order) is an array as well, so that law checking stays inside
vectorized numpy.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np


class NotAssociative(Exception):
    def __init__(self, a, b, c):
        self.witness = (a, b, c)
        super().__init__(f"({a}*{b})*{c} != {a}*({b}*{c})")


class NotRegular(Exception):
    def __init__(self, a):
        self.witness = a
        super().__init__(f"element {a} has no inverse partner")


class IdempotentsDontCommute(Exception):
    def __init__(self, e, f):
        self.witness = (e, f)
        super().__init__(f"idempotents {e} and {f} do not commute")


class TooLarge(Exception):
    def __init__(self, what, size, bound):
        self.what = what
        self.size = size
        self.bound = bound
        super().__init__(f"{what}: size {size} exceeds bound {bound}")


@dataclass(frozen=True, eq=False)
class FiniteSemigroup:
    order: int
    table: np.ndarray
    names: tuple | None = None


@dataclass(frozen=True, eq=False)
class InverseSemigroup:
    base: FiniteSemigroup
    inv: np.ndarray
    idempotents: tuple

    @property
    def order(self):
        return self.base.order

    @property
    def table(self):
        return self.base.table

    @property
    def names(self):
        return self.base.names

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv_of(self, a):
        return int(self.inv[a])

    def dom(self, a):
        return int(self.table[self.inv[a], a])

    def ran(self, a):
        return int(self.table[a, self.inv[a]])

    @cached_property
    def doms(self):
        n = self.order
        return self.table[self.inv, np.arange(n)]

    @cached_property
    def rans(self):
        n = self.order
        return self.table[np.arange(n), self.inv]

    @cached_property
    def leq(self):
        # leq[a, b] iff a = (a a^-1) b
        n = self.order
        return self.table[self.rans] == np.arange(n)[:, None]

    def natural_leq(self, a, b):
        return bool(self.leq[a, b])

    def is_idempotent(self, a):
        return bool(self.table[a, a] == a)

    def name_of(self, a):
        if self.names is not None:
            return self.names[a]
        return str(a)

    def __repr__(self):
        return f"InverseSemigroup(order={self.order})"


@dataclass(frozen=True, eq=False)
class ElementSet:
    parent: InverseSemigroup
    members: frozenset

    def __contains__(self, a):
        return a in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        if isinstance(other, ElementSet):
            return self.parent is other.parent and self.members == other.members
        return self.members == frozenset(other)

    def __hash__(self):
        return hash((id(self.parent), self.members))


def _assoc_witness(T):
    """Least (a,b,c) with (ab)c != a(bc), or None."""
    n = len(T)
    step = max(1, (1 << 24) // max(1, n * n))
    for i0 in range(0, n, step):
        blk = T[i0:i0 + step]
        left = T[blk]          # left[a,b,c] = (ab)c
        right = blk[:, T]      # right[a,b,c] = a(bc)
        if not np.array_equal(left, right):
            a, b, c = np.argwhere(left != right)[0]
            return (int(a) + i0, int(b), int(c))
    return None


def validate(table, names=None):
    """Check a Cayley table and enrich it into an InverseSemigroup.

    The inverse map is computed, never supplied: for each element we scan
    for the unique x with axa = a and xax = x.
    """
    if isinstance(table, FiniteSemigroup):
        base = table
    else:
        arr = np.ascontiguousarray(np.asarray(table, dtype=np.int64))
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValueError(f"table must be a nonempty square array, got shape {arr.shape}")
        base = FiniteSemigroup(arr.shape[0], arr, tuple(names) if names is not None else None)
    T = base.table
    n = base.order
    if T.min() < 0 or T.max() >= n:
        raise ValueError("table entries must lie in [0, n)")
    w = _assoc_witness(T)
    if w is not None:
        raise NotAssociative(*w)
    ar = np.arange(n)
    idem = np.flatnonzero(T[ar, ar] == ar)
    sub = T[np.ix_(idem, idem)]
    bad = np.argwhere(sub != sub.T)
    if len(bad):
        i, j = bad[0]
        raise IdempotentsDontCommute(int(idem[i]), int(idem[j]))
    inv = np.empty(n, dtype=np.int64)
    for a in range(n):
        axa = T[T[a], a]
        xax = T[T[:, a], ar]
        cand = np.flatnonzero((axa == a) & (xax == ar))
        if len(cand) == 0:
            raise NotRegular(a)
        assert len(cand) == 1, f"non-unique inverse for {a} despite commuting idempotents"
        inv[a] = cand[0]
    return InverseSemigroup(base, inv, tuple(int(e) for e in idem))


def dom(S, a):
    return S.dom(a)


def ran(S, a):
    return S.ran(a)


def natural_leq(S, a, b):
    return S.natural_leq(a, b)


def principal_left_ideal(S, t):
    """St = {xt : x in S}, a principal left ideal (contains t)."""
    return ElementSet(S, frozenset(int(x) for x in S.table[:, t]))


def generated_subsemigroup(S, gens):
    """Least subset closed under product and inverse containing gens."""
    seed = set(int(g) for g in gens)
    if not seed:
        raise ValueError("gens must be nonempty")
    T = S.table
    members = seed | {int(S.inv[g]) for g in seed}
    frontier = sorted(members)
    while frontier:
        current = sorted(members)
        fresh = set()
        for a in frontier:
            fresh.update(int(x) for x in T[a, current])
            fresh.update(int(x) for x in T[current, a])
        fresh -= members
        # generators closed under inverse, so the closure is too; keep it explicit
        fresh |= {int(S.inv[a]) for a in fresh} - members
        members |= fresh
        frontier = sorted(fresh)
    return ElementSet(S, frozenset(members))


def subsemigroup(S, members):
    """Reindex a product-closed subset as its own InverseSemigroup.

    Returns (sub, elems) where elems[i] is the S-index of sub's element i.
    """
    elems = np.array(sorted(set(int(x) for x in members)), dtype=np.int64)
    pos = {int(x): i for i, x in enumerate(elems)}
    sub_table = S.table[np.ix_(elems, elems)]
    bad = set(int(x) for x in sub_table.ravel()) - set(pos)
    if bad:
        raise ValueError(f"subset not closed under product, e.g. produces {sorted(bad)[0]}")
    reidx = np.vectorize(pos.__getitem__, otypes=[np.int64])
    names = None
    if S.names is not None:
        names = tuple(S.names[int(x)] for x in elems)
    sub = validate(reidx(sub_table), names=names)
    return sub, elems


def is_semilattice(S):
    return len(S.idempotents) == S.order and np.array_equal(S.table, S.table.T)


def idempotent_semilattice(S):
    """E(S) as its own semilattice, with the element list into S."""
    E, elems = subsemigroup(S, S.idempotents)
    assert is_semilattice(E)
    return E, elems


def direct_product(S, S2):
    n1, n2 = S.order, S2.order
    T = (S.table[:, None, :, None] * n2 + S2.table[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    names = None
    if S.names is not None and S2.names is not None:
        names = tuple(f"({a},{b})" for a in S.names for b in S2.names)
    return validate(T, names=names)


def as_dict(S):
    """JSON-ready instance dict (0-based, bit-exact)."""
    d = {"order": S.order, "table": S.table.tolist()}
    if S.names is not None:
        d["names"] = list(S.names)
    d["inv"] = S.inv.tolist()
    d["idempotents"] = list(S.idempotents)
    return d


def from_dict(d):
    if "order" not in d or "table" not in d:
        raise ValueError("instance JSON needs 'order' and 'table'")
    S = validate(d["table"], names=d.get("names"))
    if S.order != d["order"]:
        raise ValueError(f"declared order {d['order']} does not match table size {S.order}")
    return S
