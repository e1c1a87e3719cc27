"""Symmetric-group characters and multiplicity-stability checks.

Characters are computed by the Murnaghan-Nakayama rule on beta-numbers,
class functions are decomposed against them with exact rational inner
products, and Whitney homology characters of a poset with a symmetric-group
action are extracted through Lefschetz numbers on lower intervals (refusing
whenever interval homology is not concentrated in its expected degree, so a
character is never fabricated from an alternating sum).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .dowling import DowlingSpec, element_rank, wreath_act
from .errors import DomainError, InputError
from .groups import WreathElement
from .homology import interval_degree_table, lefschetz_character
from .posets import Poset, induced_subposet

__all__ = [
    "check_partition",
    "partitions_of",
    "conjugacy_class_size",
    "mn_character",
    "character_table",
    "ClassFunction",
    "decompose",
    "pad_partition",
    "strip_top_row",
    "cycle_type_permutation",
    "sym_class_poset_perms",
    "whitney_character",
    "stable_multiplicity_check",
]


def check_partition(lam) -> tuple[int, ...]:
    lam = tuple(int(a) for a in lam)
    if any(a <= 0 for a in lam):
        raise InputError(f"partition parts must be positive: {lam}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise InputError(f"partition parts must be weakly decreasing: {lam}")
    return lam


@lru_cache(maxsize=None)
def partitions_of(m: int) -> tuple[tuple[int, ...], ...]:
    """All partitions of m, in reverse lexicographic order."""
    if m < 0:
        raise InputError("partition size must be >= 0")

    def gen(rest, largest):
        if rest == 0:
            yield ()
            return
        for part in range(min(rest, largest), 0, -1):
            for tail in gen(rest - part, part):
                yield (part,) + tail

    return tuple(gen(m, m))


def _z_order(mu: tuple[int, ...]) -> int:
    """Centralizer order z_mu = prod k^{m_k} m_k!."""
    z = 1
    counts: dict[int, int] = {}
    for part in mu:
        counts[part] = counts.get(part, 0) + 1
    for k, mk in counts.items():
        z *= k**mk * factorial(mk)
    return z


def conjugacy_class_size(mu) -> int:
    mu = check_partition(mu)
    return factorial(sum(mu)) // _z_order(mu)


@lru_cache(maxsize=None)
def mn_character(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    """Irreducible character value chi^lam on the class mu, by recursive
    border-strip removal on beta-numbers."""
    lam = check_partition(lam)
    mu = check_partition(mu)
    if sum(lam) != sum(mu):
        raise InputError(f"partition sizes differ: |{lam}| != |{mu}|")
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    k = len(lam)
    beta = [lam[i] + (k - 1 - i) for i in range(k)]
    bset = set(beta)
    total = 0
    for b in beta:
        c = b - r
        if c < 0 or c in bset:
            continue
        height = sum(1 for x in bset if c < x < b)
        newbeta = sorted((bset - {b}) | {c}, reverse=True)
        newlam = tuple(
            newbeta[i] - (k - 1 - i) for i in range(k) if newbeta[i] - (k - 1 - i) > 0
        )
        total += (-1) ** height * mn_character(newlam, rest)
    return total


@lru_cache(maxsize=None)
def character_table(m: int):
    """{lam: {mu: chi^lam(mu)}} over all partitions of m."""
    parts = partitions_of(m)
    return {lam: {mu: mn_character(lam, mu) for mu in parts} for lam in parts}


@dataclass(frozen=True)
class ClassFunction:
    """An exact class function on the degree-m symmetric group, stored by
    conjugacy class (cycle type partition)."""

    m: int
    values: tuple[tuple[tuple[int, ...], Fraction], ...]

    def __post_init__(self):
        expected = set(partitions_of(self.m))
        got = [mu for mu, _ in self.values]
        if len(got) != len(set(got)):
            raise InputError("duplicate conjugacy class in class function")
        if set(got) != expected:
            raise InputError(
                f"class function must be defined on all partitions of {self.m}"
            )

    @staticmethod
    def from_dict(m: int, values: dict) -> "ClassFunction":
        items = tuple(
            sorted((check_partition(mu), Fraction(v)) for mu, v in values.items())
        )
        return ClassFunction(m=m, values=items)

    def value(self, mu) -> Fraction:
        mu = check_partition(mu)
        for cls, v in self.values:
            if cls == mu:
                return v
        raise InputError(f"{mu} is not a partition of {self.m}")


def decompose(cf: ClassFunction) -> dict[tuple[int, ...], int]:
    """Multiplicities of cf against the irreducible characters.

    Raises:
        DomainError: if any multiplicity is not an integer (the input was
            not a virtual character).
    """
    m = cf.m
    table = character_table(m)
    order = factorial(m)
    vals = dict(cf.values)
    out: dict[tuple[int, ...], int] = {}
    for lam, row in table.items():
        inner = sum(
            Fraction(conjugacy_class_size(mu)) * vals[mu] * row[mu]
            for mu in vals
        )
        mult = inner / order
        if mult.denominator != 1:
            raise DomainError(
                f"non-integer multiplicity {mult} at {lam}: not a virtual character"
            )
        if mult:
            out[lam] = int(mult)
    # characters form a basis of class functions, so this must reconstruct
    for mu in vals:
        assert sum(c * table[lam][mu] for lam, c in out.items()) == vals[mu]
    return out


def pad_partition(lam, m: int) -> tuple[int, ...]:
    """Prepend a top row so the result is a partition of m."""
    lam = check_partition(lam)
    top = m - sum(lam)
    if lam and top < lam[0]:
        raise InputError(f"m={m} too small to pad {lam}: top row {top} < {lam[0]}")
    if top < 0:
        raise InputError(f"m={m} smaller than |{lam}|")
    return ((top,) + lam) if top > 0 else lam


def strip_top_row(lam) -> tuple[int, ...]:
    lam = check_partition(lam)
    return lam[1:]


def cycle_type_permutation(mu) -> tuple[int, ...]:
    """The permutation of {0..m-1} with consecutive cycles of sizes mu."""
    mu = check_partition(mu)
    perm = []
    start = 0
    for part in mu:
        perm.extend(list(range(start + 1, start + part)) + [start])
        start += part
    return tuple(perm)


def sym_class_poset_perms(spec: DowlingSpec, elements) -> dict:
    """For each cycle type of the degree-n symmetric group, the induced
    permutation of the poset's elements (restricting the wreath action to
    identity colors)."""
    n = spec.n
    ident = (spec.group.identity,) * n
    index = {e: i for i, e in enumerate(elements)}
    out = {}
    for mu in partitions_of(n):
        sigma = cycle_type_permutation(mu)
        w = WreathElement(colors=ident, perm=sigma)
        out[mu] = tuple(index[wreath_act(spec, w, e)] for e in elements)
    return out


def _open_interval_action(p: Poset, x: int, perm) -> tuple[Poset, tuple[int, ...]]:
    bottom = p.bottom()
    inside = [y for y in p.down_set(x) if y != x and y != bottom]
    sub, elems = induced_subposet(p, inside)
    local = {e: i for i, e in enumerate(elems)}
    return sub, tuple(local[perm[e]] for e in elems)


def whitney_character(
    p: Poset, class_perms: dict, r: int, m: int
) -> ClassFunction:
    """Character of the symmetric-group action on the rank-r Whitney
    homology of p.

    Only elements fixed by a permutation contribute (the action permutes
    the interval summands); a fixed element contributes the trace on the
    concentrated interval homology, recovered from the Lefschetz number of
    the restricted action on the open interval.

    Raises:
        DomainError: if some rank-r lower interval has homology spread over
            several degrees, where a single Lefschetz number cannot be
            attributed to one of them.
    """
    if p.rank is None:
        raise InputError("whitney character needs a ranked poset")
    bottom = p.bottom()
    level = [x for x in range(p.n_elems) if p.rank[x] == r]
    for x in level:
        if x == bottom:
            continue
        table = interval_degree_table(p, x)
        if set(table) - {r}:
            raise DomainError(
                "lower-interval homology is not concentrated; character refused"
            )
    sign = (-1) ** r
    values = {}
    for mu, perm in class_perms.items():
        total = 0
        for x in level:
            if perm[x] != x:
                continue
            if x == bottom:
                total += 1
                continue
            sub, sub_perm = _open_interval_action(p, x, perm)
            total += sign * lefschetz_character(sub, sub_perm)
        values[mu] = Fraction(total)
    return ClassFunction.from_dict(m, values)


def stable_multiplicity_check(
    chars: dict[int, ClassFunction],
    degree: int | None = None,
    epsilon: Fraction | None = None,
) -> dict:
    """Decompose a window of characters, rename each irreducible by its
    top-row-stripped partition, and report whether the named multiplicity
    pattern is constant across the window.

    When `degree` and `epsilon` are given, also checks the size bound
    |name| <= degree/epsilon on every name that occurs.
    """
    if not chars:
        raise InputError("empty character window")
    named: dict[int, dict[tuple[int, ...], int]] = {}
    for n in sorted(chars):
        mult = decompose(chars[n])
        names: dict[tuple[int, ...], int] = {}
        for lam, c in mult.items():
            names[strip_top_row(lam)] = names.get(strip_top_row(lam), 0) + c
        named[n] = names
    ns = sorted(named)
    base = named[ns[0]]
    stable = True
    first_violation = None
    for n in ns[1:]:
        if named[n] != base:
            stable = False
            first_violation = n
            break
    report = {
        "window": ns,
        "stable": stable,
        "names": {n: dict(sorted(named[n].items())) for n in ns},
        "first_violation": first_violation,
    }
    if degree is not None and epsilon:
        bound = Fraction(degree) / epsilon
        oversized = sorted(
            {name for names in named.values() for name in names if sum(name) > bound}
        )
        report["size_bound"] = bound
        report["size_bound_ok"] = not oversized
        report["oversized_names"] = oversized
    return report


def whitney_rank_character_of_spec(spec: DowlingSpec, p: Poset, elements, r: int):
    """Convenience wrapper: symmetric-group Whitney character of a built
    Dowling-type poset at rank r."""
    perms = sym_class_poset_perms(spec, elements)
    return whitney_character(p, perms, r, spec.n)
