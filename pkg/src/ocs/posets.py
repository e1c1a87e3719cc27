"""Generic finite posets.

Elements are integer indices ``0..n_elems-1``.  The order relation is stored
as a bit-packed reachability table: ``leq[a]`` is an int whose bit ``b`` is
set iff a <= b.  Mobius recursion, chain enumeration, and interval extraction
are then quadratic table scans, which comfortably covers every poset this
package ever builds (a few hundred elements).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DomainError, InputError

__all__ = [
    "Poset",
    "from_covers",
    "mobius",
    "lower_interval",
    "induced_subposet",
    "direct_product",
    "proper_part",
    "connected_components",
    "is_isomorphic",
    "chain_poset",
    "boolean_lattice",
    "poset_to_json",
    "poset_from_json",
]


@dataclass
class Poset:
    n_elems: int
    hasse: tuple[tuple[int, ...], ...]  # hasse[a] = sorted upper covers of a
    leq: tuple[int, ...]  # bitmask reachability, reflexive
    rank: tuple[int, ...] | None = None
    _mobius_memo: dict = field(default_factory=dict, repr=False, compare=False)

    def is_leq(self, a: int, b: int) -> bool:
        return bool(self.leq[a] >> b & 1)

    def is_less(self, a: int, b: int) -> bool:
        return a != b and bool(self.leq[a] >> b & 1)

    def down_set(self, b: int) -> list[int]:
        return [x for x in range(self.n_elems) if self.leq[x] >> b & 1]

    def up_set(self, a: int) -> list[int]:
        m = self.leq[a]
        return [x for x in range(self.n_elems) if m >> x & 1]

    def minimal_elements(self) -> list[int]:
        has_lower = [False] * self.n_elems
        for a in range(self.n_elems):
            for b in self.hasse[a]:
                has_lower[b] = True
        return [x for x in range(self.n_elems) if not has_lower[x]]

    def maximal_elements(self) -> list[int]:
        return [x for x in range(self.n_elems) if not self.hasse[x]]

    def bottom(self) -> int:
        mins = self.minimal_elements()
        if len(mins) != 1:
            raise DomainError("poset has no unique minimum")
        return mins[0]

    def top(self) -> int:
        maxs = self.maximal_elements()
        if len(maxs) != 1:
            raise DomainError("poset has no unique maximum")
        return maxs[0]

    def height(self) -> tuple[int, ...]:
        """Longest-chain-from-below label per element (minimal elements at 0)."""
        order = _topo_order(self.n_elems, self.hasse)
        h = [0] * self.n_elems
        for a in order:
            for b in self.hasse[a]:
                if h[a] + 1 > h[b]:
                    h[b] = h[a] + 1
        return tuple(h)

    def __repr__(self):
        return f"Poset(n_elems={self.n_elems})"


def _topo_order(n: int, hasse) -> list[int]:
    indeg = [0] * n
    for a in range(n):
        for b in hasse[a]:
            indeg[b] += 1
    stack = [x for x in range(n) if indeg[x] == 0]
    out = []
    while stack:
        a = stack.pop()
        out.append(a)
        for b in hasse[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                stack.append(b)
    if len(out) != n:
        raise InputError("cover relation contains a cycle")
    return out


def _closure_from_hasse(n: int, hasse) -> tuple[int, ...]:
    # Process in reverse topological order so each element's reachability
    # set is final when its predecessors consume it.
    order = _topo_order(n, hasse)
    leq = [1 << a for a in range(n)]
    for a in reversed(order):
        m = leq[a]
        for b in hasse[a]:
            m |= leq[b]
        leq[a] = m
    return tuple(leq)


def _hasse_from_leq(n: int, leq) -> tuple[tuple[int, ...], ...]:
    hasse = []
    for a in range(n):
        ups = [b for b in range(n) if b != a and leq[a] >> b & 1]
        covers = []
        for b in ups:
            if not any(c != b and leq[c] >> b & 1 for c in ups):
                covers.append(b)
        hasse.append(tuple(sorted(covers)))
    return tuple(hasse)


def from_covers(n: int, covers, rank=None) -> Poset:
    """Build a poset from its Hasse diagram.

    Args:
        n: number of elements.
        covers: iterable of (a, b) pairs meaning a is covered by b.
        rank: optional rank labels.

    Raises:
        InputError: on a cycle, an out-of-range index, a duplicate cover, or
            a cover already implied by transitivity (the list must be the
            minimal Hasse diagram).
    """
    pairs = [tuple(c) for c in covers]
    seen = set()
    adj = [[] for _ in range(n)]
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise InputError(f"cover ({a},{b}) out of range")
        if a == b:
            raise InputError(f"cover ({a},{b}) is a self-loop")
        if (a, b) in seen:
            raise InputError(f"duplicate cover ({a},{b})")
        seen.add((a, b))
        adj[a].append(b)
    hasse = tuple(tuple(sorted(u)) for u in adj)
    leq = _closure_from_hasse(n, hasse)
    for a, b in pairs:
        # (a,b) is redundant iff some c strictly between a and b exists.
        between = leq[a] & ~(1 << a) & ~(1 << b)
        for c in range(n):
            if between >> c & 1 and leq[c] >> b & 1:
                raise InputError(f"cover ({a},{b}) is implied by transitivity via {c}")
    if rank is not None:
        rank = tuple(rank)
        if len(rank) != n:
            raise InputError("rank label list has wrong length")
    return Poset(n_elems=n, hasse=hasse, leq=leq, rank=rank)


def mobius(p: Poset, a: int, b: int):
    """Mobius function mu(a, b), memoized on the poset.

    Raises:
        InputError: if a is not <= b.
    """
    if not p.is_leq(a, b):
        raise InputError(f"mobius requires comparable pair, got {a} !<= {b}")
    memo = p._mobius_memo
    key = (a, b)
    if key in memo:
        return memo[key]
    if a == b:
        memo[key] = 1
        return 1
    # mu(a,b) = -sum_{a <= c < b} mu(a,c); iterate c in the half-open interval.
    total = 0
    m = p.leq[a]
    for c in range(p.n_elems):
        if c != b and (m >> c & 1) and p.is_leq(c, b):
            total += mobius(p, a, c)
    memo[key] = -total
    return -total


def induced_subposet(p: Poset, elements) -> tuple[Poset, tuple[int, ...]]:
    """Induced subposet on a subset, recomputing the Hasse diagram.

    Returns (subposet, sorted tuple of original indices); new index i
    corresponds to original index ``elements_sorted[i]``.
    """
    elems = tuple(sorted(set(elements)))
    pos = {e: i for i, e in enumerate(elems)}
    k = len(elems)
    mask = 0
    for e in elems:
        mask |= 1 << e
    leq = []
    for e in elems:
        m = p.leq[e] & mask
        packed = 0
        mm = m
        while mm:
            low = mm & -mm
            packed |= 1 << pos[low.bit_length() - 1]
            mm ^= low
        leq.append(packed)
    hasse = _hasse_from_leq(k, leq)
    rank = tuple(p.rank[e] for e in elems) if p.rank is not None else None
    return Poset(n_elems=k, hasse=hasse, leq=tuple(leq), rank=rank), elems


def lower_interval(p: Poset, b: int) -> tuple[Poset, tuple[int, ...]]:
    """The induced subposet on {x : x <= b}.

    A down-closed subset inherits its Hasse diagram by restriction, so no
    cover recomputation is needed.

    Returns (interval, sorted tuple of original indices).
    """
    if not (0 <= b < p.n_elems):
        raise InputError("interval top out of range")
    elems = tuple(x for x in range(p.n_elems) if p.leq[x] >> b & 1)
    pos = {e: i for i, e in enumerate(elems)}
    mask = 0
    for e in elems:
        mask |= 1 << e
    hasse = tuple(
        tuple(pos[u] for u in p.hasse[e] if u in pos) for e in elems
    )
    leq = []
    for e in elems:
        m = p.leq[e] & mask
        packed = 0
        mm = m
        while mm:
            low = mm & -mm
            packed |= 1 << pos[low.bit_length() - 1]
            mm ^= low
        leq.append(packed)
    rank = tuple(p.rank[e] for e in elems) if p.rank is not None else None
    return Poset(n_elems=len(elems), hasse=hasse, leq=tuple(leq), rank=rank), elems


def direct_product(p: Poset, q: Poset) -> Poset:
    """Componentwise-order product; element (i, j) gets index i*|q| + j."""
    nq = q.n_elems
    n = p.n_elems * nq
    covers = []
    for i in range(p.n_elems):
        for j in range(nq):
            a = i * nq + j
            for i2 in p.hasse[i]:
                covers.append((a, i2 * nq + j))
            for j2 in q.hasse[j]:
                covers.append((a, i * nq + j2))
    leq = []
    for i in range(p.n_elems):
        pm = p.leq[i]
        for j in range(nq):
            qm = q.leq[j]
            m = 0
            pp = pm
            while pp:
                low = pp & -pp
                i2 = low.bit_length() - 1
                m |= qm << (i2 * nq)
                pp ^= low
            leq.append(m)
    hasse = [[] for _ in range(n)]
    for a, b in covers:
        hasse[a].append(b)
    rank = None
    if p.rank is not None and q.rank is not None:
        rank = tuple(p.rank[i] + q.rank[j] for i in range(p.n_elems) for j in range(nq))
    return Poset(
        n_elems=n,
        hasse=tuple(tuple(sorted(u)) for u in hasse),
        leq=tuple(leq),
        rank=rank,
    )


def connected_components(p: Poset) -> list[list[int]]:
    """Components of the comparability graph, each sorted ascending."""
    parent = list(range(p.n_elems))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(p.n_elems):
        for b in p.hasse[a]:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for x in range(p.n_elems):
        groups.setdefault(find(x), []).append(x)
    return sorted(groups.values())


def proper_part(p: Poset) -> Poset:
    """Remove the unique minimum and unique maximum of every connected
    component.

    Raises:
        DomainError: if some component lacks a unique minimal or unique
            maximal element.
    """
    has_lower = [False] * p.n_elems
    for a in range(p.n_elems):
        for b in p.hasse[a]:
            has_lower[b] = True
    drop = set()
    for comp in connected_components(p):
        mins = [x for x in comp if not has_lower[x]]
        maxs = [x for x in comp if not p.hasse[x]]
        if len(mins) != 1:
            raise DomainError("component lacks a unique minimum")
        if len(maxs) != 1:
            raise DomainError("component lacks a unique maximum")
        drop.add(mins[0])
        drop.add(maxs[0])
    keep = [x for x in range(p.n_elems) if x not in drop]
    sub, _ = induced_subposet(p, keep)
    return sub


def _refine_invariants(p: Poset) -> tuple[int, ...]:
    """Per-element invariant labels, stable under isomorphism, computed by
    iterated neighborhood refinement over the Hasse diagram."""
    down_hasse = [[] for _ in range(p.n_elems)]
    for a in range(p.n_elems):
        for b in p.hasse[a]:
            down_hasse[b].append(a)
    height = p.height()
    below = []
    above = []
    for x in range(p.n_elems):
        above.append(bin(p.leq[x]).count("1") - 1)
        below.append(sum(1 for y in range(p.n_elems) if p.leq[y] >> x & 1) - 1)
    labels = [
        (height[x], below[x], above[x], len(p.hasse[x]), len(down_hasse[x]))
        for x in range(p.n_elems)
    ]
    canon = {lab: i for i, lab in enumerate(sorted(set(labels)))}
    cur = [canon[lab] for lab in labels]
    for _ in range(p.n_elems):
        nxt_labels = [
            (
                cur[x],
                tuple(sorted(cur[y] for y in p.hasse[x])),
                tuple(sorted(cur[y] for y in down_hasse[x])),
            )
            for x in range(p.n_elems)
        ]
        canon = {lab: i for i, lab in enumerate(sorted(set(nxt_labels)))}
        nxt = [canon[lab] for lab in nxt_labels]
        if nxt == cur:
            break
        cur = nxt
    return tuple(cur)


def is_isomorphic(p: Poset, q: Poset):
    """Search for an order-isomorphism.

    Returns:
        A tuple ``f`` with ``f[i]`` the q-index of p-element i, or None.

    Backtracking over cover-compatible assignments with invariant-class
    pruning; intended for posets up to a couple hundred elements.
    """
    n = p.n_elems
    if q.n_elems != n:
        return None
    if sum(len(u) for u in p.hasse) != sum(len(u) for u in q.hasse):
        return None
    ip = _refine_invariants(p)
    iq = _refine_invariants(q)
    if sorted(ip) != sorted(iq):
        return None
    by_class: dict[int, list[int]] = {}
    for y, c in enumerate(iq):
        by_class.setdefault(c, []).append(y)
    # Assign the most constrained elements first.
    order = sorted(range(n), key=lambda x: (len(by_class[ip[x]]), x))
    f = [-1] * n
    used = [False] * n
    pleq, qleq = p.leq, q.leq

    def ok(x: int, y: int, depth: int) -> bool:
        for x2 in order[:depth]:
            y2 = f[x2]
            if (pleq[x] >> x2 & 1) != (qleq[y] >> y2 & 1):
                return False
            if (pleq[x2] >> x & 1) != (qleq[y2] >> y & 1):
                return False
        return True

    def rec(k: int) -> bool:
        if k == n:
            return True
        x = order[k]
        for y in by_class[ip[x]]:
            if used[y]:
                continue
            if ok(x, y, k):
                f[x] = y
                used[y] = True
                if rec(k + 1):
                    return True
                used[y] = False
                f[x] = -1
        return False

    if rec(0):
        return tuple(f)
    return None


def chain_poset(k: int) -> Poset:
    """The k-element chain 0 < 1 < ... < k-1."""
    return from_covers(k, [(i, i + 1) for i in range(k - 1)], rank=tuple(range(k)))


def boolean_lattice(k: int) -> Poset:
    """Subsets of a k-set ordered by inclusion; element index = subset bitmask."""
    covers = []
    for s in range(1 << k):
        for i in range(k):
            if not s >> i & 1:
                covers.append((s, s | 1 << i))
    rank = tuple(bin(s).count("1") for s in range(1 << k))
    return from_covers(1 << k, covers, rank=rank)


# JSON I/O -------------------------------------------------------------------

def poset_to_json(p: Poset) -> dict:
    covers = [[a, b] for a in range(p.n_elems) for b in p.hasse[a]]
    obj = {"n": p.n_elems, "covers": covers}
    if p.rank is not None:
        obj["rank"] = list(p.rank)
    return obj


def poset_from_json(obj) -> Poset:
    if not isinstance(obj, dict):
        raise InputError("poset descriptor must be an object")
    known = {"n", "covers", "rank", "dowling"}
    extra = set(obj) - known
    if extra:
        raise InputError(f"unknown poset descriptor fields: {sorted(extra)}")
    n = obj.get("n")
    covers = obj.get("covers")
    if not isinstance(n, int) or not isinstance(covers, list):
        raise InputError("poset descriptor needs integer 'n' and list 'covers'")
    return from_covers(n, covers, rank=obj.get("rank"))


def canonical_poset_bytes(p: Poset) -> bytes:
    """Deterministic serialization used for content-hash cache keys."""
    return json.dumps(poset_to_json(p), sort_keys=True, separators=(",", ":")).encode()
