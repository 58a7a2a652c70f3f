from fractions import Fraction
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartancover.errors import DimensionMismatch, NegativeGenus, NonIntegralGenus, ParseError
from cartancover.parabolic import (
    BranchPoint,
    RamifiedCoverData,
    RamifiedSheet,
    check_pardeg_conservation,
    degree_direct_image,
    local_flags,
    merge_fiber_filtration,
    parabolic_degree,
    parse_weight,
    pushforward_parabolic,
    riemann_hurwitz_genus,
    tameness_check,
)
from cartancover.randgen import random_ramified_cover_data

F = Fraction


def simple_data(g_x, degree, profiles_per_point, weights_per_point=None, components=None):
    components = components or (degree,)
    points = []
    for i, profiles in enumerate(profiles_per_point):
        weights = (
            weights_per_point[i] if weights_per_point else [F(0)] * len(profiles)
        )
        points.append(
            BranchPoint(
                tuple(RamifiedSheet(b, w, 0) for b, w in zip(profiles, weights))
            )
        )
    return RamifiedCoverData(g_x, degree, components, tuple(points))


P1_DOUBLE = simple_data(0, 2, [(2,), (2,)])


# --- weights ----------------------------------------------------------------


def test_parse_weight_forms():
    assert parse_weight("1/2") == F(1, 2)
    assert parse_weight(0) == 0
    assert parse_weight("2/6") == F(1, 3)
    with pytest.raises(ParseError):
        parse_weight("3/2")
    with pytest.raises(ParseError):
        parse_weight(1)
    with pytest.raises(ParseError):
        parse_weight(0.5)


# --- local flags --------------------------------------------------------------


def test_local_flags_unramified_sheet():
    flag = local_flags(1, F(0))
    assert flag.jump_weights() == (F(0),)
    assert flag.steps[0].dimension == 1


def test_local_flags_double_sheet():
    flag = local_flags(2, F(0))
    assert flag.jump_weights() == (F(0), F(1, 2))
    assert [s.dimension for s in flag.steps] == [2, 1]
    assert [s.basis_indices for s in flag.steps] == [(0, 1), (1,)]


def test_local_flags_weighted_double_sheet():
    assert local_flags(2, F(1, 2)).jump_weights() == (F(1, 4), F(3, 4))


def test_local_flags_weighted_triple_sheet():
    assert local_flags(3, F(1, 2)).jump_weights() == (F(1, 6), F(1, 2), F(5, 6))


def test_local_flags_invariants_exhaustive():
    weights = sorted(
        {F(a, b) for b in range(1, 13) for a in range(b)} | {F(0)}
    )
    for b in range(1, 13):
        for lam in weights:
            flag = local_flags(b, lam)
            ws = flag.jump_weights()
            assert len(ws) == b
            assert all(F(0) <= w < 1 for w in ws)
            assert all(ws[i] < ws[i + 1] for i in range(b - 1))
            assert [s.dimension for s in flag.steps] == [b - l for l in range(b)]
            assert flag.steps[0].basis_indices == tuple(range(b))
            assert flag.steps[-1].dimension == 1


# --- merging -------------------------------------------------------------------


def test_merge_two_unramified_zero_weights():
    filt = merge_fiber_filtration((), [F(0), F(0)], 2)
    assert filt.jumps == ((F(0), 2),)


def test_merge_single_double_sheet():
    filt = merge_fiber_filtration([local_flags(2, F(0))], (), 2)
    assert filt.jumps == ((F(1, 2), 1), (F(0), 1))


def test_merge_two_double_sheets_distinct_weights():
    filt = merge_fiber_filtration(
        [local_flags(2, F(0)), local_flags(2, F(1, 2))], (), 4
    )
    assert filt.jumps == ((F(3, 4), 1), (F(1, 2), 1), (F(1, 4), 1), (F(0), 1))


def test_merge_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        merge_fiber_filtration([local_flags(2, F(0))], (), 3)


def test_merge_is_permutation_invariant():
    rng = Random(6)
    for _ in range(20):
        flags = [
            local_flags(rng.randint(1, 4), F(rng.randrange(4), 4) / 2)
            for _ in range(rng.randint(1, 4))
        ]
        extra = [F(rng.randrange(3), 3) for _ in range(rng.randint(0, 3))]
        d = sum(f.multiplicity for f in flags) + len(extra)
        reference = merge_fiber_filtration(flags, extra, d)
        shuffled = flags[:]
        rng.shuffle(shuffled)
        extra_shuffled = extra[:]
        rng.shuffle(extra_shuffled)
        assert merge_fiber_filtration(shuffled, extra_shuffled, d) == reference
        assert reference.total_dimension() == d


# --- genus and degree -------------------------------------------------------------


def test_genus_unramified_double_cover_of_elliptic_base():
    data = simple_data(1, 2, [])
    assert riemann_hurwitz_genus(data).per_component == (1,)


def test_genus_p1_double_cover_two_branch_points():
    assert riemann_hurwitz_genus(P1_DOUBLE).per_component == (0,)


def test_genus_parity_failure():
    data = simple_data(0, 2, [(2,)])
    with pytest.raises(NonIntegralGenus):
        riemann_hurwitz_genus(data)


def test_genus_rejects_impossible_cover():
    # a connected unramified double cover of genus zero cannot exist
    data = simple_data(0, 2, [])
    with pytest.raises(NegativeGenus):
        riemann_hurwitz_genus(data)


def test_degree_trivial_cover():
    data = simple_data(1, 1, [])
    assert degree_direct_image(data, 5) == 5


def test_degree_worked_p1_example():
    assert degree_direct_image(P1_DOUBLE, 0) == -1


def test_degree_unramified_double_cover_genus_one():
    data = simple_data(1, 2, [])
    assert degree_direct_image(data, 0) == 0


def test_degree_disconnected_cover():
    # two disjoint copies of the base: chi doubles, no ramification
    data = RamifiedCoverData(1, 2, (1, 1), ())
    assert riemann_hurwitz_genus(data).per_component == (1, 1)
    assert degree_direct_image(data, 3) == 3


# --- pushforward ---------------------------------------------------------------------


def test_pushforward_trivial_cover_echoes_line_bundle():
    data = simple_data(1, 1, [])
    result = pushforward_parabolic(data, 7)
    assert result.degree == 7 and result.rank == 1
    assert result.points == ()


def test_pushforward_worked_p1_example():
    result = pushforward_parabolic(P1_DOUBLE, 0)
    assert result.degree == -1
    assert [p.filtration.jumps for p in result.points] == [
        ((F(1, 2), 1), (F(0), 1)),
        ((F(1, 2), 1), (F(0), 1)),
    ]
    assert parabolic_degree(result) == 0


def test_pushforward_with_weighted_sheet():
    data = simple_data(0, 2, [(2,), (2,)], [[F(1, 2)], [F(0)]])
    result = pushforward_parabolic(data, 0)
    assert result.points[0].filtration.jumps == ((F(3, 4), 1), (F(1, 4), 1))
    assert parabolic_degree(result) == F(1, 2)


def test_pushforward_omits_weightless_unramified_points():
    data = RamifiedCoverData(1, 2, (2,), (), ((F(0), F(0)), (F(1, 3), F(0))))
    result = pushforward_parabolic(data, 0)
    assert [p.label for p in result.points] == ["u1"]
    assert result.points[0].filtration.jumps == ((F(1, 3), 1), (F(0), 1))


def test_parabolic_degree_parabolic_free():
    data = simple_data(1, 1, [])
    assert parabolic_degree(pushforward_parabolic(data, 3)) == 3


def test_parabolic_degree_single_point_sums_to_zero():
    from cartancover.parabolic import ParabolicBundleData, ParabolicPoint, WeightedFiltration

    bundle = ParabolicBundleData(
        -1,
        2,
        (ParabolicPoint("b0", WeightedFiltration(((F(3, 4), 1), (F(1, 4), 1)))),),
    )
    assert parabolic_degree(bundle) == 0


# --- conservation ----------------------------------------------------------------------


def test_conservation_unramified_weightless():
    data = simple_data(1, 2, [])
    report = check_pardeg_conservation(data, 4)
    assert report.upstairs == report.downstairs == 4


def test_conservation_worked_p1_example():
    report = check_pardeg_conservation(P1_DOUBLE, 0)
    assert report.upstairs == report.downstairs == 0


def test_conservation_randomized():
    rng = Random(31415)
    for _ in range(60):
        data, line_degree = random_ramified_cover_data(rng)
        report = check_pardeg_conservation(data, line_degree)
        assert report.equal, (data, line_degree)


@settings(max_examples=40)
@given(
    st.integers(min_value=1, max_value=5),
    st.fractions(min_value=0, max_value=F(11, 12), max_denominator=12),
    st.integers(min_value=-3, max_value=3),
)
def test_conservation_single_component_single_point(b, lam, line_degree):
    # one branch point of full multiplicity, padded to even parity
    profiles = (b, b) if b > 1 else (1,)
    data = simple_data(0, sum(profiles), [profiles], [[lam] * len(profiles)])
    try:
        riemann_hurwitz_genus(data)
    except (NonIntegralGenus, NegativeGenus):
        return
    report = check_pardeg_conservation(data, line_degree)
    assert report.equal


# --- tameness ----------------------------------------------------------------------------


def test_tameness_examples():
    assert tameness_check([F(1, 2)], 3) == (True,)
    assert tameness_check([F(1, 3)], 3) == (False,)
    assert tameness_check([F(2, 6)], 2) == (True,)
    assert tameness_check([F(0)], 5) == (True,)


def test_tameness_requires_prime():
    with pytest.raises(ParseError):
        tameness_check([F(1, 2)], 4)
