"""Order complexes and exact rational homology of finite posets.

Everything here is integer arithmetic: boundary matrices have entries in
{-1, 0, 1} and ranks are computed by sparse fraction-free elimination, so the
reported Betti numbers are exact rational-coefficient ranks.

Conventions, fixed globally:
  * The order complex carries an empty face in dimension -1 (reduced chain
    complex), so the empty poset has reduced Betti table {-1: 1}.
  * Whitney homology buckets the interval below x at (rank x, k) where the
    interval contributes reduced homology in dimension k-2 of the proper
    part of the interval.  The one-element interval below the bottom is the
    degenerate case: it contributes 1 at k = 0.
"""

from __future__ import annotations

from math import gcd

from .errors import DomainError, InputError
from .posets import Poset, lower_interval, mobius, proper_part

__all__ = [
    "order_complex_chains",
    "reduced_homology",
    "reduced_euler_characteristic",
    "interval_degree_table",
    "whitney_homology",
    "lefschetz_character",
    "sparse_rank",
]


def order_complex_chains(p: Poset) -> list[list[tuple[int, ...]]]:
    """All chains of the poset, grouped by dimension.

    Returns ``chains`` with ``chains[k]`` the dimension-k simplices, i.e. the
    (k+1)-element chains, each a tuple in increasing poset order.  Bases are
    in lexicographic order of index tuples.
    """
    n = p.n_elems
    ups = [sorted(y for y in range(n) if y != x and p.leq[x] >> y & 1) for x in range(n)]
    out: list[list[tuple[int, ...]]] = []

    def extend(chain: tuple[int, ...]):
        k = len(chain) - 1
        while len(out) <= k:
            out.append([])
        out[k].append(chain)
        for y in ups[chain[-1]]:
            extend(chain + (y,))

    for x in range(n):
        extend((x,))
    return out


def _boundary_matrices(chains: list[list[tuple[int, ...]]]):
    """Boundary maps of the reduced order complex.

    Returns a list ``bnd`` where ``bnd[k]`` maps dimension-k chains to
    dimension-(k-1) chains, as a list of {row: coeff} columns; ``bnd[0]`` is
    the augmentation onto the empty face (a single row, index 0).
    Asserts d(d(c)) = 0 for every chain.
    """
    index = [{c: i for i, c in enumerate(level)} for level in chains]
    bnd: list[list[dict[int, int]]] = []
    if not chains:
        return bnd
    bnd.append([{0: 1} for _ in chains[0]])
    for k in range(1, len(chains)):
        idx = index[k - 1]
        cols = []
        for c in chains[k]:
            col: dict[int, int] = {}
            sign = 1
            for i in range(len(c)):
                face = c[:i] + c[i + 1 :]
                col[idx[face]] = sign
                sign = -sign
            cols.append(col)
        bnd.append(cols)
    # d^2 = 0, verified symbolically on every basis chain.
    for k in range(1, len(bnd)):
        lower = bnd[k - 1]
        for col in bnd[k]:
            acc: dict[int, int] = {}
            for r, v in col.items():
                for r2, v2 in lower[r].items():
                    acc[r2] = acc.get(r2, 0) + v * v2
            if any(acc.values()):
                raise AssertionError("boundary of boundary is nonzero")
    return bnd


def sparse_rank(columns: list[dict[int, int]]) -> int:
    """Exact rank of an integer matrix given as columns {row: value}.

    Fraction-free sparse elimination: pivots preferring unit entries and low
    fill (Markowitz-style score), eliminating column against column with
    cross-multiplication and content (gcd) stripping.  No floating point.
    """
    cols: dict[int, dict[int, int]] = {
        j: dict(col) for j, col in enumerate(columns) if col
    }
    # row -> set of live column ids containing it
    row_index: dict[int, set[int]] = {}
    for j, col in cols.items():
        for r in col:
            row_index.setdefault(r, set()).add(j)
    rank = 0
    while cols:
        # Pivot selection: among unit entries if any exist, minimize
        # (len(col)-1)*(len(row)-1); otherwise take a smallest-magnitude entry.
        best = None
        best_score = None
        best_unit = False
        for j, col in cols.items():
            cl = len(col)
            for r, v in col.items():
                unit = v == 1 or v == -1
                score = (cl - 1) * (len(row_index[r]) - 1)
                if best is None or (unit, -score) > (best_unit, -(best_score)):
                    best, best_score, best_unit = (r, j), score, unit
            if best_unit and best_score == 0:
                break
        r, j = best
        pivot_col = cols.pop(j)
        pv = pivot_col[r]
        for rr in pivot_col:
            row_index[rr].discard(j)
        rank += 1
        touched = [jj for jj in row_index.get(r, ()) if jj in cols]
        for jj in touched:
            col = cols[jj]
            v = col[r]
            # col := col * pv - pivot_col * v, then strip integer content.
            g = 0
            for rr in set(col) | set(pivot_col):
                nv = col.get(rr, 0) * pv - pivot_col.get(rr, 0) * v
                if nv:
                    col[rr] = nv
                    row_index.setdefault(rr, set()).add(jj)
                    g = gcd(g, nv)
                elif rr in col:
                    del col[rr]
                    row_index[rr].discard(jj)
            if not col:
                del cols[jj]
            elif g > 1:
                for rr in col:
                    col[rr] //= g
        row_index.pop(r, None)
    return rank


def reduced_homology(p: Poset) -> dict[int, int]:
    """Reduced Betti numbers of the order complex of p (rational ranks).

    The caller is expected to pass the poset whose order complex is wanted
    (for interval homology, apply proper_part first).  The empty poset
    returns {-1: 1}.
    """
    if p.n_elems == 0:
        return {-1: 1}
    chains = order_complex_chains(p)
    bnd = _boundary_matrices(chains)
    ranks = [sparse_rank(cols) for cols in bnd]
    ranks.append(0)
    betti: dict[int, int] = {}
    # dim C_{-1} = 1; rank of the (empty) map into C_{-2} is 0.
    b_neg = 1 - ranks[0]
    if b_neg:
        betti[-1] = b_neg
    for k in range(len(chains)):
        b = len(chains[k]) - ranks[k] - ranks[k + 1]
        if b:
            betti[k] = b
    return betti


def reduced_euler_characteristic(p: Poset) -> int:
    """Euler characteristic of the reduced order complex, via chain counts."""
    if p.n_elems == 0:
        return -1
    chains = order_complex_chains(p)
    total = -1
    sign = 1
    for level in chains:
        total += sign * len(level)
        sign = -sign
    return total


def interval_degree_table(p: Poset, x: int) -> dict[int, int]:
    """Whitney degrees contributed by the interval below x.

    Returns {k: rank} where the interval contributes H-tilde_{k-2} of the
    proper part of the interval; the one-element interval contributes
    {0: 1} by the degenerate convention.
    """
    interval, _ = lower_interval(p, x)
    if interval.n_elems == 1:
        return {0: 1}
    betti = reduced_homology(proper_part(interval))
    return {deg + 2: rank for deg, rank in betti.items()}


def whitney_homology(p: Poset) -> dict[tuple[int, int], int]:
    """Whitney homology table {(rank r, degree k): rank}.

    Sums interval_degree_table over all x, bucketed by rank of x (the
    poset's rank labels when present, longest-chain height otherwise).
    When all contributions at some rank r land at degree k = r, the total
    there is cross-checked against the signless Whitney number
    sum |mu(bottom, x)| over rank-r elements.
    """
    bottom = p.bottom()
    rk = p.rank if p.rank is not None else p.height()
    table: dict[tuple[int, int], int] = {}
    for x in range(p.n_elems):
        for k, rank in interval_degree_table(p, x).items():
            key = (rk[x], k)
            table[key] = table.get(key, 0) + rank
    # Cross-check concentrated ranks against Mobius.
    ranks_seen = {r for r, _ in table}
    for r in ranks_seen:
        degs = {k for (rr, k) in table if rr == r}
        if degs == {r}:
            w = sum(abs(mobius(p, bottom, x)) for x in range(p.n_elems) if rk[x] == r)
            if table[(r, r)] != w:
                raise AssertionError(
                    f"whitney bucket ({r},{r}) = {table[(r, r)]} "
                    f"disagrees with signless Whitney number {w}"
                )
    return table


def _check_automorphism(p: Poset, perm) -> tuple[int, ...]:
    f = tuple(perm)
    n = p.n_elems
    if len(f) != n or sorted(f) != list(range(n)):
        raise InputError("permutation is not a bijection on poset elements")
    for a in range(n):
        m = p.leq[a]
        fm = 0
        mm = m
        while mm:
            low = mm & -mm
            fm |= 1 << f[low.bit_length() - 1]
            mm ^= low
        if fm != p.leq[f[a]]:
            raise InputError("permutation is not order-preserving")
    return f


def lefschetz_character(p: Poset, perm) -> int:
    """Reduced Lefschetz number of an order automorphism.

    The trace of the induced map on reduced chains: the empty face gives -1,
    and a setwise-fixed k-chain contributes the sign of the permutation it
    induces.  An order automorphism fixing a chain setwise fixes it pointwise
    (it preserves the chain's total order), so that sign is always +1 and the
    alternating sum reduces to the Euler characteristic of the fixed
    subposet's reduced order complex, which is how it is computed.  Under
    homology concentrated in degree m, the character of the action on that
    homology equals (-1)^m times this number.
    """
    f = _check_automorphism(p, perm)
    fixed = [x for x in range(p.n_elems) if f[x] == x]
    if not fixed:
        return -1
    sub_leq = p.leq
    total = -1
    ups = {
        x: [y for y in fixed if y != x and sub_leq[x] >> y & 1] for x in fixed
    }

    def walk(last: int, dim: int):
        nonlocal total
        total += -1 if dim % 2 else 1
        for y in ups[last]:
            walk(y, dim + 1)

    for x in fixed:
        walk(x, 0)
    return total
