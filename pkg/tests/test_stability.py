from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ocs.errors import DomainError, InputError
from ocs.groups import cyclic_group
from ocs.series import SpaceInput
from ocs.stability import (
    LIMIT,
    bottom_step,
    classify_step,
    iterate_report,
    locus_from_space,
    point_norm,
    point_xy,
    quotient_series,
    remove_point,
    taxicab_extrema,
    verify_generator_bound,
)

TRIV = cyclic_group(1)


def space(betti, name="", i_acyclic=True):
    return SpaceInput(
        betti=tuple(betti), group=TRIV, orbit_data=(), i_acyclic=i_acyclic, name=name
    )


R2 = space([0, 0, 1], "R2")
R3 = space([0, 0, 0, 1], "R3")


def test_locus_families_follow_nonzero_betti():
    loc = locus_from_space(space([1, 0, 2]))
    assert [f.degree for f in loc.families] == [0, 2]
    assert loc.limit_present


def test_point_geometry():
    assert point_xy(("family", 2, 1)) == (0, 2)
    assert point_xy(("family", 3, 2)) == (Fraction(1, 2), Fraction(3, 2))
    assert point_xy(LIMIT) == (1, 0)
    assert point_norm(("family", 2, 4)) == Fraction(5, 4)


def test_extrema_r2():
    ext = taxicab_extrema(locus_from_space(R2), 2)
    (m1, att1, pts1), (m2, att2, pts2) = ext
    assert m1 == 2 and att1 and pts1 == [("family", 2, 1)]
    assert m2 == Fraction(3, 2) and att2


def test_extrema_d1_tie_includes_limit():
    ext = taxicab_extrema(locus_from_space(space([1, 1])), 1)
    norm, attained, pts = ext[0]
    assert norm == 1 and attained
    assert LIMIT in pts and ("family_tail", 1, 1) in pts


def test_primary_steps_d1_to_d5():
    # the full-homology walkthrough table
    expect = {
        1: ("bounded", ("family", 1, 1), Fraction(1)),
        2: ("absolute", ("family", 2, 1), Fraction(1, 2)),
        3: ("absolute", ("family", 3, 1), Fraction(1)),
        4: ("absolute", ("family", 4, 1), Fraction(1)),
        5: ("absolute", ("family", 5, 1), Fraction(1)),
    }
    for d, (cls, pt, eps) in expect.items():
        step = iterate_report(space([1] * (d + 1)), "left", 1).steps[0]
        assert (step.classification, step.point, step.epsilon) == (cls, pt, eps)


def test_bounds_2j_and_j():
    s2 = iterate_report(R2, "left", 1).steps[0]
    assert [s2.bound(j) for j in (1, 2, 3)] == [2, 4, 6]
    s3 = iterate_report(R3, "left", 1).steps[0]
    assert [s3.bound(j) for j in (1, 2, 3)] == [1, 2, 3]
    # relation bound shifts by m * norm
    assert s2.bound(1, m=1) == 6


def test_bound_requires_absolute():
    step = iterate_report(space([1, 1]), "left", 1).steps[0]
    with pytest.raises(DomainError):
        step.bound(1)


def test_secondary_and_tertiary_steps():
    rep = iterate_report(space([1] * 6), "left", 3)
    pts = [(s.point, s.classification, s.epsilon) for s in rep.steps]
    assert pts[0] == (("family", 5, 1), "absolute", 1)
    assert pts[1] == (("family", 4, 1), "absolute", 1)
    assert pts[2] == (("family", 3, 1), "bounded", 1)
    rep4 = iterate_report(space([1] * 5), "left", 2)
    assert rep4.steps[1].point == ("family", 3, 1)
    assert rep4.steps[1].epsilon == Fraction(1, 2)


def test_left_tie_picks_leftmost():
    rep = iterate_report(space([1] * 4), "left", 2)
    tie_step = rep.steps[1]
    assert tie_step.point == ("family", 2, 1)
    assert tie_step.classification == "bounded"
    assert tie_step.slope == Fraction(0)  # -1 + epsilon with epsilon 1


def test_right_tie_goes_to_limit_and_terminates():
    rep = iterate_report(space([1, 1]), "right", 5)
    assert len(rep.steps) == 1
    step = rep.steps[0]
    assert step.point == LIMIT and step.classification == "truncated"
    assert step.terminal and step.slope == Fraction(-2)


def test_degenerate_unique_limit_max():
    rep = iterate_report(space([1]), "left", 3)
    step = rep.steps[0]
    assert step.point == LIMIT and step.epsilon == 0
    assert not step.epsilon_attained and step.terminal


def test_absolute_separation_invariant():
    # every other locus point sits at norm <= M - epsilon
    for betti in [[0, 0, 1], [0, 0, 0, 1], [1, 1, 1], [0, 1, 0, 2]]:
        loc = locus_from_space(space(betti))
        step = classify_step(loc, "left")
        if step.classification != "absolute" or not step.epsilon:
            continue
        for f in loc.families:
            for n in range(1, 60):
                if not f.allows(n):
                    continue
                pt = ("family", f.degree, n)
                if pt == step.point:
                    continue
                assert point_norm(pt) <= step.norm - step.epsilon
        if step.point != LIMIT:
            assert point_norm(LIMIT) <= step.norm - step.epsilon


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=6))
def test_classify_step_total_on_random_spaces(betti):
    if not any(betti):
        betti = betti + [1]
    loc = locus_from_space(space(betti))
    for variant in ("left", "right"):
        step = classify_step(loc, variant)
        assert step.classification in {"absolute", "bounded", "truncated"}
        assert step.norm == point_norm(step.point)
        if step.classification == "absolute" and step.epsilon:
            assert step.epsilon > 0


def test_bottom_sweep_full3():
    rep = iterate_report(space([1] * 4), "bottom", 4)
    assert [s.point for s in rep.steps] == [
        ("family", 0, 1),
        ("family", 1, 1),
        ("family", 2, 1),
        ("family", 3, 1),
    ]
    assert rep.steps[0].classification == "absolute"
    assert rep.steps[0].epsilon == Fraction(1, 2)
    assert [s.slope for s in rep.steps] == [0, -2, -4, -6]


def test_bottom_r2_slope():
    step = iterate_report(R2, "bottom", 1).steps[0]
    assert step.point == ("family", 2, 1)
    assert step.classification == "bounded" and step.slope == Fraction(-2)


def test_bottom_exhausts_corners():
    rep = iterate_report(R2, "bottom", 3)
    assert len(rep.steps) == 2  # after both corners nothing remains
    with pytest.raises(DomainError):
        bottom_step(remove_point(remove_point(locus_from_space(R2),
                                              ("family", 2, 1)),
                                 ("family", 2, 2)))


def test_remove_point_bookkeeping():
    loc = locus_from_space(R2)
    loc2 = remove_point(loc, ("family", 2, 1))
    assert not loc2.family(2).allows(1)
    with pytest.raises(DomainError):
        remove_point(loc2, ("family", 2, 1))
    loc3 = remove_point(loc2, LIMIT)
    assert not loc3.limit_present


def test_iterate_report_validity_tag():
    rep = iterate_report(space([0, 0, 1], i_acyclic=False), "left", 1)
    assert rep.validity == "first-page only"
    assert iterate_report(R2, "left", 1).validity == "homology"


def test_variant_validation():
    with pytest.raises(InputError):
        iterate_report(R2, "sideways", 1)
    with pytest.raises(InputError):
        iterate_report(R2, "left", 0)


def test_quotient_vanishing_r2_r3():
    for sp, dmax in [(R2, 2), (R3, 1)]:
        rep = iterate_report(sp, "left", 1)
        for j in (1, 2, 3):
            ok, info = verify_generator_bound(sp, rep, 0, j, 8)
            assert ok, info
            assert info["bound"] == Fraction(j) / rep.steps[0].epsilon


def test_quotient_diagonal_inhabited_inside_bound():
    # the bound is tight for the plane: at k = 2j the diagonal is nonzero
    q = quotient_series(R2, [("family", 2, 1)], 8)
    for j in (1, 2, 3):
        k = 2 * j
        diag = 2 * k - j
        total = sum(
            c for (n, p, qq), c in q.coeffs.items() if n == k and p + qq == diag
        )
        assert total != 0


def test_quotient_of_everything_is_one():
    pts = [("family", 2, n) for n in range(1, 7)]
    assert quotient_series(R2, pts, 6).is_one()


def test_quotient_rejects_limit_point():
    with pytest.raises(InputError):
        quotient_series(R2, [LIMIT], 4)


def test_verify_requires_absolute_step():
    rep = iterate_report(space([1, 1]), "left", 1)
    with pytest.raises(DomainError):
        verify_generator_bound(space([1, 1]), rep, 0, 1, 6)
