"""Dowling-style posets of partial colored partitions.

An element over ground set {0,...,n-1} is a partition of a subset into
blocks, each block carrying a coloring into the group G (taken up to a
global right translation per block), together with a coloring of the
remaining "zero block" Z into the G-set S.  A point coloring hitting a
G-orbit of S exactly once is allowed only when that orbit lies in the
distinguished invariant subset T.

Covers come in two kinds: merging two blocks with a relative twist g, and
absorbing one block into the zero block along a point s of S.  Rank is
n minus the number of blocks.

Canonical form: within a block, the minimal element carries the group
identity; blocks are sorted by minimal element; the canonical string joins
blocks as comma-separated ``g:e`` entries with a final ``Z{e:s,...}``
segment, e.g. ``0:0,1:1|Z{2:0}``.  Poset element order is breadth-first by
rank, lexicographic by canonical string within a rank.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import CapExceeded, InputError
from .groups import (
    GroupTable,
    GSetSpec,
    WreathElement,
    cyclic_group,
    gset_from_json,
    group_from_json,
    orbits_and_stabilizers,
    subgroup_table,
)
from .posets import Poset, from_covers

__all__ = [
    "DowlingElement",
    "DowlingSpec",
    "IntervalFactor",
    "bottom_element",
    "element_rank",
    "element_to_string",
    "parse_element",
    "validate_element",
    "covers_of",
    "enumerate_levels",
    "build_poset",
    "count_elements_species",
    "factor_interval",
    "wreath_act",
    "spec_partition",
    "spec_single_point",
    "spec_from_json",
    "spec_to_json",
]

DEFAULT_CAP = 10000


@dataclass(frozen=True)
class DowlingElement:
    # blocks: tuple of blocks; a block is a tuple of (element, color) pairs
    # sorted by element, with the minimal element colored by the identity.
    blocks: tuple[tuple[tuple[int, int], ...], ...]
    # zero: tuple of (element, s-point) pairs sorted by element.
    zero: tuple[tuple[int, int], ...]

    def support_check(self, n: int) -> bool:
        seen = [x for b in self.blocks for x, _ in b] + [x for x, _ in self.zero]
        return sorted(seen) == list(range(n))


@dataclass(frozen=True)
class DowlingSpec:
    group: GroupTable
    gset: GSetSpec
    n: int
    name: str = ""

    def __post_init__(self):
        if self.n < 0:
            raise InputError("ground set size must be nonnegative")
        if self.gset.group is not self.group and self.gset.group != self.group:
            raise InputError("gset must act under the same group")

    def orbit_info(self):
        """[(orbit id, frozenset points, rep, stabilizer elems, in_T)] sorted by rep."""
        out = []
        for i, (orbit, rep, stab) in enumerate(orbits_and_stabilizers(self.gset)):
            out.append((i, orbit, rep, stab, rep in self.gset.t_subset))
        return out


def spec_partition(n: int, name: str = "") -> DowlingSpec:
    """The partition lattice Q_n as the trivial-group, empty-S case."""
    g = cyclic_group(1)
    gs = GSetSpec(group=g, size=0, action=((),), t_subset=frozenset())
    return DowlingSpec(group=g, gset=gs, n=n, name=name)


def spec_single_point(group: GroupTable, n: int, in_t: bool, name: str = "") -> DowlingSpec:
    """S a single G-fixed point, optionally in T (the classical lattice case
    when in_t is true)."""
    gs = GSetSpec(
        group=group,
        size=1,
        action=tuple((0,) for _ in range(group.order)),
        t_subset=frozenset({0} if in_t else ()),
    )
    return DowlingSpec(group=group, gset=gs, n=n, name=name)


def bottom_element(spec: DowlingSpec) -> DowlingElement:
    e = spec.group.identity
    return DowlingElement(
        blocks=tuple(((x, e),) for x in range(spec.n)),
        zero=(),
    )


def element_rank(spec: DowlingSpec, elem: DowlingElement) -> int:
    return spec.n - len(elem.blocks)


def _canonical_block(spec: DowlingSpec, entries) -> tuple[tuple[int, int], ...]:
    """Sort by element and right-translate so the minimal element carries
    the identity."""
    entries = sorted(entries)
    g0 = entries[0][1]
    ginv = spec.group.inv[g0]
    mul = spec.group.mul
    return tuple((x, mul[c][ginv]) for x, c in entries)


def _zero_valid(spec: DowlingSpec, zero) -> bool:
    counts: dict[int, int] = {}
    orbit_id = _orbit_ids(spec)
    for _, s in zero:
        o = orbit_id[s]
        counts[o] = counts.get(o, 0) + 1
    in_t = _orbit_in_t(spec)
    return all(c != 1 or in_t[o] for o, c in counts.items())


_ORBIT_CACHE: dict[GSetSpec, tuple[tuple[int, ...], tuple[bool, ...]]] = {}


def _orbit_tables(spec: DowlingSpec):
    hit = _ORBIT_CACHE.get(spec.gset)
    if hit is None:
        ids = [0] * spec.gset.size
        in_t = []
        for i, (orbit, rep, _stab) in enumerate(orbits_and_stabilizers(spec.gset)):
            for pt in orbit:
                ids[pt] = i
            in_t.append(rep in spec.gset.t_subset)
        hit = (tuple(ids), tuple(in_t))
        _ORBIT_CACHE[spec.gset] = hit
    return hit


def _orbit_ids(spec: DowlingSpec):
    return _orbit_tables(spec)[0]


def _orbit_in_t(spec: DowlingSpec):
    return _orbit_tables(spec)[1]


def validate_element(spec: DowlingSpec, elem: DowlingElement) -> None:
    """Raise InputError unless elem is a valid canonical element."""
    if not elem.support_check(spec.n):
        raise InputError("blocks and zero block must partition the ground set")
    for b in elem.blocks:
        if list(b) != sorted(b):
            raise InputError("block entries must be sorted by element")
        if b[0][1] != spec.group.identity:
            raise InputError("block coloring not canonical at its minimal element")
        for _, c in b:
            if not (0 <= c < spec.group.order):
                raise InputError("block color out of range")
    if list(elem.blocks) != sorted(elem.blocks, key=lambda b: b[0][0]):
        raise InputError("blocks must be sorted by minimal element")
    if list(elem.zero) != sorted(elem.zero):
        raise InputError("zero entries must be sorted by element")
    for _, s in elem.zero:
        if not (0 <= s < spec.gset.size):
            raise InputError("zero color out of range")
    if not _zero_valid(spec, elem.zero):
        raise InputError("zero coloring violates the distinguished-subset restriction")


def element_to_string(elem: DowlingElement) -> str:
    segs = [",".join(f"{c}:{x}" for x, c in b) for b in elem.blocks]
    segs.append("Z{" + ",".join(f"{x}:{s}" for x, s in elem.zero) + "}")
    return "|".join(segs)


_Z_RE = re.compile(r"^Z\{(.*)\}$")
_PAIR_RE = re.compile(r"^(\d+):(\d+)$")


def parse_element(spec: DowlingSpec, text: str) -> DowlingElement:
    """Parse the canonical string format; the block colorings are
    re-canonicalized, everything else must be exact."""
    segs = text.split("|")
    m = _Z_RE.match(segs[-1])
    if m is None:
        raise InputError("element string must end with a Z{...} segment")
    zero = []
    if m.group(1):
        for part in m.group(1).split(","):
            pm = _PAIR_RE.match(part)
            if pm is None:
                raise InputError(f"bad zero entry {part!r}")
            zero.append((int(pm.group(1)), int(pm.group(2))))
    blocks = []
    for seg in segs[:-1]:
        entries = []
        for part in seg.split(","):
            pm = _PAIR_RE.match(part)
            if pm is None:
                raise InputError(f"bad block entry {part!r}")
            c, x = int(pm.group(1)), int(pm.group(2))
            if not (0 <= c < spec.group.order):
                raise InputError("block color out of range")
            entries.append((x, c))
        if not entries:
            raise InputError("empty block segment")
        blocks.append(_canonical_block(spec, entries))
    blocks.sort(key=lambda b: b[0][0])
    elem = DowlingElement(blocks=tuple(blocks), zero=tuple(sorted(zero)))
    validate_element(spec, elem)
    return elem


def covers_of(spec: DowlingSpec, elem: DowlingElement) -> list[DowlingElement]:
    """All covers of elem, canonical, sorted by canonical string.

    Merge moves supply |G| candidates per unordered block pair (the relative
    twist applied to the larger-min block); color moves supply |S| candidates
    per block, silently dropping those whose zero coloring would be invalid.
    """
    G = spec.group
    mul = G.mul
    out = set()
    blocks = elem.blocks
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            a, b = blocks[i], blocks[j]
            if a[0][0] > b[0][0]:
                a, b = b, a
            for g in range(G.order):
                merged = tuple(sorted(a + tuple((x, mul[c][g]) for x, c in b)))
                rest = blocks[:i] + blocks[i + 1 : j] + blocks[j + 1 :]
                new_blocks = tuple(sorted(rest + (merged,), key=lambda bl: bl[0][0]))
                out.add(DowlingElement(blocks=new_blocks, zero=elem.zero))
    action = spec.gset.action
    for i, b in enumerate(blocks):
        rest = blocks[:i] + blocks[i + 1 :]
        for s in range(spec.gset.size):
            zero = tuple(sorted(elem.zero + tuple((x, action[c][s]) for x, c in b)))
            if _zero_valid(spec, zero):
                out.add(DowlingElement(blocks=rest, zero=zero))
    return sorted(out, key=element_to_string)


def enumerate_levels(spec: DowlingSpec, cap: int = DEFAULT_CAP) -> list[list[DowlingElement]]:
    """Breadth-first rank levels from the bottom element.

    Raises:
        CapExceeded: when more than cap elements appear; carries the count
            of elements found so far.
    """
    levels = [[bottom_element(spec)]]
    total = 1
    while True:
        nxt = set()
        for e in levels[-1]:
            nxt.update(covers_of(spec, e))
        if not nxt:
            return levels
        total += len(nxt)
        if total > cap:
            raise CapExceeded(
                f"element cap {cap} exceeded while enumerating rank {len(levels)}",
                partial_count=total,
            )
        levels.append(sorted(nxt, key=element_to_string))


def build_poset(spec: DowlingSpec, cap: int = DEFAULT_CAP) -> tuple[Poset, list[DowlingElement]]:
    """Materialize the poset: breadth-first closure under covers_of.

    Returns (poset, elements) with elements[i] the canonical element at
    poset index i; indices go rank by rank, lexicographic by canonical
    string within a rank; poset rank labels are n - #blocks.
    """
    levels = enumerate_levels(spec, cap=cap)
    elements: list[DowlingElement] = [e for level in levels for e in level]
    index = {e: i for i, e in enumerate(elements)}
    covers = []
    for level in levels[:-1]:
        for e in level:
            i = index[e]
            for c in covers_of(spec, e):
                covers.append((i, index[c]))
    rank = tuple(element_rank(spec, e) for e in elements)
    return from_covers(len(elements), covers, rank=rank), elements


def count_elements_species(spec: DowlingSpec) -> int:
    """|D_n^T(G,S)| by generating-function algebra, no enumeration.

    In the weighted convention (tau^n coefficient = count / (w^n n!), with
    w = |G|), the poset's element species factors as exp over block sizes
    times one zero-block factor per orbit of S; the orbit factor's degree-1
    term is present exactly when the orbit lies in T.
    """
    n, w = spec.n, spec.group.order
    N = n + 1

    def mul_trunc(f, g):
        h = [Fraction(0)] * N
        for i, fi in enumerate(f):
            if fi:
                for j in range(N - i):
                    if g[j]:
                        h[i + j] += fi * g[j]
        return h

    def exp_trunc(a):
        assert a[0] == 0
        h = [Fraction(0)] * N
        h[0] = Fraction(1)
        term = h[:]
        for k in range(1, N):
            term = mul_trunc(term, a)
            for i in range(N):
                h[i] += term[i] / factorial(k)
        return h

    block_arg = [Fraction(0)] * N
    for m in range(1, N):
        block_arg[m] = Fraction(1, w * factorial(m))
    f = exp_trunc(block_arg)
    for _i, _orbit, rep, stab, in_t in spec.orbit_info():
        c = len(stab)
        orb = [Fraction(0)] * N
        orb[0] = Fraction(1)
        if n >= 1 and in_t:
            orb[1] = Fraction(1, c)
        for k in range(2, N):
            orb[k] = Fraction(1, c**k * factorial(k))
        f = mul_trunc(f, orb)
    total = f[n] * w**n * factorial(n)
    assert total.denominator == 1 and total >= 0
    return int(total)


@dataclass(frozen=True)
class IntervalFactor:
    kind: str  # "partition" or "orbit"
    ground: tuple[int, ...]  # original ground-set labels
    spec: DowlingSpec
    orbit_rep: int | None = None


def factor_interval(spec: DowlingSpec, elem: DowlingElement) -> list[IntervalFactor]:
    """Factor the lower interval below elem.

    One partition-lattice factor per block (on the block's elements) and one
    single-point factor per G-orbit of S (on the zero elements colored into
    that orbit, with the stabilizer of the orbit representative re-extracted
    as a standalone group).  The direct product of the factors' posets is
    isomorphic to the lower interval below elem.
    """
    validate_element(spec, elem)
    factors = []
    for b in elem.blocks:
        ground = tuple(x for x, _ in b)
        factors.append(
            IntervalFactor(
                kind="partition",
                ground=ground,
                spec=spec_partition(len(ground)),
            )
        )
    orbit_id = _orbit_ids(spec)
    for i, _orbit, rep, stab, in_t in spec.orbit_info():
        ground = tuple(x for x, s in elem.zero if orbit_id[s] == i)
        stab_group, _ = subgroup_table(spec.group, stab)
        factors.append(
            IntervalFactor(
                kind="orbit",
                ground=ground,
                spec=spec_single_point(stab_group, len(ground), in_t),
                orbit_rep=rep,
            )
        )
    return factors


def wreath_act(spec: DowlingSpec, w: WreathElement, elem: DowlingElement) -> DowlingElement:
    """Act by a wreath element: positions move by w.perm and the attached
    group elements multiply colors on the left; zero colors move through the
    G-action on S.  The result is re-canonicalized."""
    if w.n != spec.n:
        raise InputError("wreath element length must match the ground set")
    validate_element(spec, elem)
    mul = spec.group.mul
    action = spec.gset.action
    blocks = []
    for b in elem.blocks:
        entries = [(w.perm[x], mul[w.colors[x]][c]) for x, c in b]
        blocks.append(_canonical_block(spec, entries))
    blocks.sort(key=lambda bl: bl[0][0])
    zero = tuple(sorted((w.perm[x], action[w.colors[x]][s]) for x, s in elem.zero))
    return DowlingElement(blocks=tuple(blocks), zero=zero)


# JSON descriptors -----------------------------------------------------------

def spec_from_json(obj, n: int | None = None, name: str = "") -> DowlingSpec:
    """Parse {"group": {...}, "gset": {"size":..,"action":..,"T":..}} plus an
    optional "n"; an explicit n argument overrides the file."""
    if not isinstance(obj, dict):
        raise InputError("dowling spec must be an object")
    extra = set(obj) - {"group", "gset", "n", "name"}
    if extra:
        raise InputError(f"unknown dowling spec fields: {sorted(extra)}")
    group = group_from_json(obj.get("group"))
    gset = gset_from_json(group, obj.get("gset"))
    if n is None:
        n = obj.get("n")
    if not isinstance(n, int):
        raise InputError("dowling spec needs a ground set size n")
    return DowlingSpec(group=group, gset=gset, n=n, name=name or obj.get("name", ""))


def spec_to_json(spec: DowlingSpec) -> dict:
    group = {"kind": "table", "mul": [list(r) for r in spec.group.mul]}
    return {
        "group": group,
        "gset": {
            "size": spec.gset.size,
            "action": [list(r) for r in spec.gset.action],
            "T": sorted(spec.gset.t_subset),
        },
        "n": spec.n,
    }
