import pytest
from hypothesis import given, settings, strategies as st

from ocs.dowling import (
    DowlingSpec,
    bottom_element,
    build_poset,
    count_elements_species,
    covers_of,
    element_rank,
    element_to_string,
    enumerate_levels,
    factor_interval,
    parse_element,
    spec_from_json,
    spec_partition,
    spec_single_point,
    spec_to_json,
    validate_element,
    wreath_act,
)
from ocs.errors import CapExceeded, InputError
from ocs.groups import GSetSpec, WreathElement, all_wreath_elements, cyclic_group, wreath_compose
from ocs.posets import is_isomorphic, lower_interval, mobius


def spec_dowling(k, n):
    """Classical Dowling spec: cyclic group, one fixed color, T = S."""
    return spec_single_point(cyclic_group(k), n, in_t=True)


def spec_toric(n, t_points):
    z2 = cyclic_group(2)
    gs = GSetSpec(
        group=z2,
        size=2,
        action=((0, 1), (0, 1)),
        t_subset=frozenset(t_points),
    )
    return DowlingSpec(group=z2, gset=gs, n=n)


def strings(spec, cap=10000):
    return [
        element_to_string(e)
        for level in enumerate_levels(spec, cap)
        for e in level
    ]


def test_partition_poset_q3_strings():
    assert strings(spec_partition(3)) == [
        "0:0|0:1|0:2|Z{}",
        "0:0,0:1|0:2|Z{}",
        "0:0,0:2|0:1|Z{}",
        "0:0|0:1,0:2|Z{}",
        "0:0,0:1,0:2|Z{}",
    ]


def test_dowling_z2_n2_strings():
    assert strings(spec_dowling(2, 2)) == [
        "0:0|0:1|Z{}",
        "0:0,0:1|Z{}",
        "0:0,1:1|Z{}",
        "0:0|Z{1:0}",
        "0:1|Z{0:0}",
        "Z{0:0,1:0}",
    ]


def test_zero_spec_has_single_empty_element():
    assert strings(spec_partition(0)) == ["Z{}"]


def test_element_rank_counts_merges():
    spec = spec_dowling(2, 3)
    bot = bottom_element(spec)
    assert element_rank(spec, bot) == 0
    top = parse_element(spec, "Z{0:0,1:0,2:0}")
    assert element_rank(spec, top) == 3


def test_parse_roundtrip_and_canonicalization():
    spec = spec_dowling(3, 3)
    e = parse_element(spec, "0:0,2:2|Z{1:0}")
    assert element_to_string(e) == "0:0,2:2|Z{1:0}"
    # a non-identity leading color is re-translated to canonical form
    f = parse_element(spec, "1:0,0:2|Z{1:0}")
    assert element_to_string(f) == "0:0,2:2|Z{1:0}"


def test_parse_rejects_malformed():
    spec = spec_dowling(2, 2)
    for bad in ["", "0:0|0:1", "0:0|Z{9:0}", "0:0|Z{1:7}", "5:1|Z{0:0}", "0:0,0:0|Z{}"]:
        with pytest.raises(InputError):
            parse_element(spec, bad)


def test_t_restriction_blocks_singleton_zero():
    # with the color outside T a singleton zero block is not allowed
    spec = spec_single_point(cyclic_group(2), 2, in_t=False)
    with pytest.raises(InputError):
        parse_element(spec, "0:0|Z{1:0}")
    # but two zero points are fine
    parse_element(spec, "Z{0:0,1:0}")


def test_covers_of_bottom_counts():
    # from the discrete partition: one merge per pair per group element,
    # plus one zero-coloring per point per allowed color
    spec = spec_dowling(2, 3)
    cov = covers_of(spec, bottom_element(spec))
    assert len(cov) == 3 * 2 + 3 * 1


def test_cap_exceeded_carries_partial_count():
    spec = spec_dowling(3, 4)
    with pytest.raises(CapExceeded) as exc:
        enumerate_levels(spec, cap=100)
    assert exc.value.partial_count is not None and exc.value.partial_count > 100


def test_counts_match_species_small_grid():
    z1, z2, z3 = cyclic_group(1), cyclic_group(2), cyclic_group(3)
    specs = [
        spec_partition(4),
        spec_dowling(2, 4),
        spec_dowling(3, 3),
        spec_single_point(z2, 3, in_t=False),
        spec_toric(3, [0]),
        spec_toric(3, [0, 1]),
        spec_toric(3, []),
    ]
    for spec in specs:
        assert sum(len(l) for l in enumerate_levels(spec)) == count_elements_species(spec)


def test_frozen_counts():
    assert count_elements_species(spec_partition(3)) == 5
    assert count_elements_species(spec_partition(5)) == 52
    assert count_elements_species(spec_dowling(2, 2)) == 6
    assert count_elements_species(spec_dowling(2, 4)) == 116
    assert count_elements_species(spec_dowling(3, 4)) == 214
    assert count_elements_species(spec_toric(4, [0, 1])) == 257


def test_build_poset_ranks_are_bfs_levels():
    spec = spec_dowling(2, 3)
    p, elems = build_poset(spec)
    assert p.rank is not None
    assert all(element_rank(spec, e) == p.rank[i] for i, e in enumerate(elems))
    assert p.bottom() == 0


def test_single_color_full_t_is_partition_lattice_shifted():
    # the Dowling poset of the trivial group on one in-T color matches the
    # partition lattice on one more point
    for n in range(0, 5):
        spec = spec_single_point(cyclic_group(1), n, in_t=True)
        p, _ = build_poset(spec)
        q, _ = build_poset(spec_partition(n + 1))
        assert p.n_elems == q.n_elems
        assert is_isomorphic(p, q) is not None


def test_mobius_of_dowling_lattice_top():
    # |mu| of D_n(Z2) equals the falling product 1*3*5*...*(2n-1)
    spec = spec_dowling(2, 3)
    p, _ = build_poset(spec)
    assert abs(mobius(p, p.bottom(), p.top())) == 1 * 3 * 5


def test_interval_factorization_shapes():
    spec = spec_toric(3, [0])
    e = parse_element(spec, "0:0,0:2|Z{1:0}")
    kinds = sorted(f.kind for f in factor_interval(spec, e))
    assert kinds == ["orbit", "orbit", "partition"]
    # ground sets partition the support
    grounds = sorted(x for f in factor_interval(spec, e) for x in f.ground)
    assert grounds == [0, 1, 2]


def test_interval_factorization_is_isomorphic_spot():
    from ocs.posets import chain_poset, direct_product

    spec = spec_dowling(2, 3)
    p, elems = build_poset(spec)
    for idx, e in enumerate(elems):
        interval, _ = lower_interval(p, idx)
        prod = chain_poset(1)
        for f in factor_interval(spec, e):
            prod = direct_product(prod, build_poset(f.spec)[0])
        assert is_isomorphic(interval, prod) is not None


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_wreath_action_is_a_group_action(data):
    spec = spec_dowling(2, 3)
    _, elems = build_poset(spec)
    e = data.draw(st.sampled_from(elems))
    ws = list(all_wreath_elements(spec.group, 3))
    w1 = data.draw(st.sampled_from(ws))
    w2 = data.draw(st.sampled_from(ws))
    a = wreath_act(spec, w2, wreath_act(spec, w1, e))
    b = wreath_act(spec, wreath_compose(spec.group, w2, w1), e)
    assert a == b


def test_wreath_action_preserves_order():
    for spec in [spec_dowling(2, 3), spec_toric(2, [0])]:
        p, elems = build_poset(spec)
        index = {e: i for i, e in enumerate(elems)}
        for w in all_wreath_elements(spec.group, spec.n):
            img = [index[wreath_act(spec, w, e)] for e in elems]
            for a in range(p.n_elems):
                for b in p.hasse[a]:
                    assert p.is_leq(img[a], img[b])


def test_wreath_orbit_of_twisted_pair():
    # the twisted and untwisted 2-blocks lie in one wreath orbit: conjugating
    # by a color on one point flips the twist
    spec = spec_dowling(2, 2)
    e = parse_element(spec, "0:0,1:1|Z{}")
    orbit = set()
    for w in all_wreath_elements(spec.group, 2):
        orbit.add(element_to_string(wreath_act(spec, w, e)))
    assert orbit == {"0:0,0:1|Z{}", "0:0,1:1|Z{}"}


def test_spec_json_roundtrip():
    spec = spec_toric(3, [0])
    obj = spec_to_json(spec)
    back = spec_from_json(obj)
    assert back.n == 3 and back.gset.t_subset == frozenset({0})
    assert back.group.mul == spec.group.mul
    with pytest.raises(InputError):
        spec_from_json({"group": {"kind": "cyclic", "order": 2}})
    with pytest.raises(InputError):
        spec_from_json({**obj, "surprise": 1})


def test_validate_element_catches_foreign_support():
    spec = spec_dowling(2, 2)
    good = parse_element(spec, "0:0,0:1|Z{}")
    bad_spec = spec_dowling(2, 3)
    with pytest.raises(InputError):
        validate_element(spec, parse_element(bad_spec, "0:0,0:1,0:2|Z{}"))
