from fractions import Fraction

import pytest

from ocs.errors import DomainError
from ocs.homology import (
    interval_degree_table,
    lefschetz_character,
    order_complex_chains,
    reduced_euler_characteristic,
    reduced_homology,
    sparse_rank,
    whitney_homology,
)
from ocs.posets import (
    Poset,
    boolean_lattice,
    chain_poset,
    from_covers,
    mobius,
    proper_part,
)


def crown4():
    # 2 minima under 2 maxima: order complex is a 4-cycle (a circle)
    return from_covers(4, [[0, 2], [0, 3], [1, 2], [1, 3]])


def empty_poset():
    return from_covers(0, [])


def antichain(k):
    return from_covers(k, [])


def dense_rank(rows):
    """Fraction Gaussian elimination oracle for small dense matrices."""
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c]
        m[rank] = [v * inv for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def test_sparse_rank_matches_dense_oracle():
    rows = [
        [1, 2, 3, 0],
        [2, 4, 6, 0],
        [0, 1, 1, 1],
        [1, 0, 5, -7],
    ]
    cols = [
        {r: rows[r][c] for r in range(4) if rows[r][c]} for c in range(4)
    ]
    assert sparse_rank(cols) == dense_rank(rows) == 3


def test_sparse_rank_empty_and_zero():
    assert sparse_rank([]) == 0
    assert sparse_rank([{}, {}]) == 0


def test_order_complex_chains_of_boolean():
    b = boolean_lattice(2)
    chains = order_complex_chains(b)
    assert len(chains[0]) == 4
    assert len(chains[1]) == 5  # 4 cover pairs plus 0<3
    assert len(chains[2]) == 2  # two maximal chains


def test_reduced_homology_empty():
    assert reduced_homology(empty_poset()) == {-1: 1}


def test_reduced_homology_point_and_antichain():
    assert reduced_homology(chain_poset(1)) == {}
    assert reduced_homology(antichain(2)) == {0: 1}
    assert reduced_homology(antichain(5)) == {0: 4}


def test_reduced_homology_chain_is_contractible():
    assert reduced_homology(chain_poset(4)) == {}


def test_reduced_homology_circle():
    assert reduced_homology(crown4()) == {1: 1}


def test_proper_part_of_boolean_3_is_circle():
    pp = proper_part(boolean_lattice(3))
    assert reduced_homology(pp) == {1: 1}


def test_reduced_euler_characteristic():
    assert reduced_euler_characteristic(empty_poset()) == -1
    assert reduced_euler_characteristic(chain_poset(3)) == 0
    assert reduced_euler_characteristic(crown4()) == -1  # a circle
    assert reduced_euler_characteristic(antichain(3)) == 2


def test_euler_characteristic_equals_mobius_on_boolean_lattices():
    # Philip Hall at small scale
    for k in range(2, 5):
        b = boolean_lattice(k)
        pp = proper_part(b)
        assert reduced_euler_characteristic(pp) == mobius(b, 0, b.n_elems - 1)


def test_interval_degree_table_buckets():
    b = boolean_lattice(3)
    assert interval_degree_table(b, 0) == {0: 1}
    atom = 0b001
    assert interval_degree_table(b, atom) == {1: 1}
    assert interval_degree_table(b, 0b111) == {3: 1}


def test_whitney_homology_boolean():
    for k in range(1, 5):
        b = boolean_lattice(k)
        wh = whitney_homology(b)
        # binomial pattern: rank r bucket has C(k, r) intervals each giving 1
        from math import comb

        assert wh == {(r, r): comb(k, r) for r in range(k + 1)}


def test_whitney_homology_requires_bottom():
    with pytest.raises(DomainError):
        whitney_homology(antichain(2))


def test_lefschetz_identity_is_euler():
    p = crown4()
    ident = tuple(range(4))
    assert lefschetz_character(p, ident) == reduced_euler_characteristic(p)


def test_lefschetz_free_action_on_circle():
    p = crown4()
    # rotate the crown: swaps the two minima and the two maxima
    rot = (1, 0, 3, 2)
    assert lefschetz_character(p, rot) == -1 + 0  # no fixed points: chi of empty


def test_lefschetz_reflection_on_circle():
    p = crown4()
    # swap maxima only: fixed subposet is the 2-antichain of minima
    refl = (0, 1, 3, 2)
    assert lefschetz_character(p, refl) == 1


def test_lefschetz_rejects_non_automorphism():
    p = chain_poset(2)
    with pytest.raises(Exception):
        lefschetz_character(p, (1, 0))
