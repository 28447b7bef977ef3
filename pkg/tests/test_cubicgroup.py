import itertools

import pytest

from samples import (
    INFINITY,
    MORDELL_17,
    MORDELL_17_GENERATORS,
    NORMAL_FORMS,
    balanced_triples,
    chart_samples,
    congruent_number_points,
    group_map,
    moved,
)
from sglab.cubicgroup import (
    CubicKind,
    build_group_map,
    chord_tangent_add,
    chord_tangent_neg,
    classify_cubic,
    find_singular_point,
    group_sum_is_zero,
    is_inflection,
    rho,
    third_point,
)
from sglab.curves import Curve
from sglab.cycfield import CycNum, zeta
from sglab.errors import ChartConstructionError, ComponentBalanceError, DomainError
from sglab.projgeom import ProjPoint, collinear
from sglab.sgcore import fermat_config

SMOOTH = NORMAL_FORMS[CubicKind.SMOOTH]


@pytest.mark.parametrize("kind", list(CubicKind))
def test_classification_of_normal_forms(kind):
    assert classify_cubic(NORMAL_FORMS[kind]) is kind


@pytest.mark.parametrize("kind", list(CubicKind))
def test_classification_is_projectively_invariant(kind):
    c, _ = moved(NORMAL_FORMS[kind], seed=11)
    assert classify_cubic(c) is kind


def test_group_of_each_kind():
    assert CubicKind.THREE_LINES.group == "multiplicative"
    assert CubicKind.CONIC_LINE_SECANT.group == "multiplicative"
    assert CubicKind.NODAL.group == "multiplicative"
    assert CubicKind.CONCURRENT_LINES.group == "additive"
    assert CubicKind.CONIC_LINE_TANGENT.group == "additive"
    assert CubicKind.CUSPIDAL.group == "additive"
    assert CubicKind.SMOOTH.group == "chord-tangent"


def test_coordinate_line_charts():
    gm = group_map(CubicKind.THREE_LINES)
    w = zeta(7)
    e = rho(gm, ProjPoint([0, w, 1]))
    assert e.value == w and e.component_index == 0
    assert rho(gm, ProjPoint([2, 0, 1])).value == CycNum.rational(-1) / 2
    assert rho(gm, ProjPoint([3, 1, 0])).value == 3
    # a_r = [0 : -w^r : 1] has value -w^r on the first line
    for r in range(7):
        assert rho(gm, ProjPoint([0, -(w**r), 1])).value == -(w**r)


def test_product_one_on_unit_triple():
    gm = group_map(CubicKind.THREE_LINES)
    p, q, r = ProjPoint([0, 1, 1]), ProjPoint([1, 0, 1]), ProjPoint([-1, 1, 0])
    vals = [rho(gm, v).value for v in (p, q, r)]
    assert vals[0] * vals[1] * vals[2] == 1
    assert group_sum_is_zero(gm, p, q, r)


def test_conic_chart_parameter():
    gm = group_map(CubicKind.CONIC_LINE_SECANT)
    conic = next(j for j, (c, _) in enumerate(gm.cubic.component_list()) if c.degree == 2)
    for t, u in [(2, 3), (1, 5), (-4, 7)]:
        assert rho(gm, ProjPoint([t * u, t * t, u * u])).value == CycNum.rational(t) / u
        assert rho(gm, ProjPoint([t * u, t * t, u * u])).component_index == conic


def test_nodal_chart_excludes_tangent_directions():
    gm = group_map(CubicKind.NODAL)
    # y^2 z = x^3 + x^2 z has branches y = +-x at the node [0:0:1]
    with pytest.raises(DomainError):
        rho(gm, ProjPoint([0, 0, 1]))
    for v in (CycNum.rational(2), CycNum.rational(-3), CycNum.rational(5, 7)):
        p = gm.point(v)
        assert rho(gm, p).value == v


def test_smooth_identity_and_third_root():
    gm = build_group_map(SMOOTH)
    assert gm.identity_point == INFINITY
    assert gm.is_identity(rho(gm, INFINITY))
    assert is_inflection(SMOOTH, INFINITY)
    assert chord_tangent_add(SMOOTH, INFINITY, ProjPoint([0, 0, 1]), ProjPoint([1, 0, 1])) == ProjPoint([-1, 0, 1])
    assert group_sum_is_zero(gm, ProjPoint([0, 0, 1]), ProjPoint([1, 0, 1]), ProjPoint([-1, 0, 1]))
    assert third_point(SMOOTH, ProjPoint([0, 0, 1]), ProjPoint([1, 0, 1])) == ProjPoint([-1, 0, 1])


def test_component_balance_error():
    gm = group_map(CubicKind.THREE_LINES)
    with pytest.raises(ComponentBalanceError):
        group_sum_is_zero(gm, ProjPoint([0, 1, 1]), ProjPoint([0, 2, 1]), ProjPoint([1, 0, 1]))
    with pytest.raises(ComponentBalanceError):
        group_sum_is_zero(gm, ProjPoint([0, 1, 1]), ProjPoint([0, 0, 1]), ProjPoint([1, 0, 1]))


def test_off_curve_rejected():
    gm = group_map(CubicKind.CUSPIDAL)
    with pytest.raises(DomainError):
        rho(gm, ProjPoint([1, 2, 1]))
    with pytest.raises(DomainError):
        chord_tangent_add(SMOOTH, INFINITY, ProjPoint([1, 1, 1]), INFINITY)


def test_smooth_without_flex_needs_base_point():
    # the flexes of 3 x^3 + 4 y^3 + 5 z^3 need cube roots of 3/4, 4/5 and 5/3
    c = Curve(3, {(3, 0, 0): 3, (0, 3, 0): 4, (0, 0, 3): 5})
    with pytest.raises(ChartConstructionError):
        build_group_map(c)
    with pytest.raises(ChartConstructionError):
        build_group_map(SMOOTH, base_point=ProjPoint([0, 0, 1]))


def test_singular_point_found():
    for kind in (CubicKind.NODAL, CubicKind.CUSPIDAL):
        c, t = moved(NORMAL_FORMS[kind], seed=4)
        assert find_singular_point(c) == t(ProjPoint([0, 0, 1]))


@pytest.mark.parametrize("kind", [k for k in CubicKind if k is not CubicKind.SMOOTH])
@pytest.mark.parametrize("seed", [None, 7])
def test_collinear_iff_sum_zero_small(kind, seed):
    gm = group_map(kind, seed)
    pts = chart_samples(gm, 8)
    checked = 0
    for p, q, r in balanced_triples(gm, pts):
        assert group_sum_is_zero(gm, p, q, r) == collinear(p, q, r)
        checked += 1
    assert checked > 0


@pytest.mark.parametrize("kind", [k for k in CubicKind if k is not CubicKind.SMOOTH])
def test_chart_inverse_round_trip(kind):
    gm = group_map(kind, seed=3)
    for p in chart_samples(gm, 10):
        e = rho(gm, p)
        assert gm.point(e.value, e.component_index) == p


def test_fermat_points_sum_rule_on_xyz():
    n = 5
    config = fermat_config(n)
    gm = group_map(CubicKind.THREE_LINES)
    a, b, c = config.points[:n], config.points[n:2 * n], config.points[2 * n:]
    for r, s, t in itertools.product(range(n), repeat=3):
        assert group_sum_is_zero(gm, a[r], b[s], c[t]) == collinear(a[r], b[s], c[t])


def test_chord_tangent_axioms_small():
    p, *torsion = congruent_number_points()
    pts = [p, chord_tangent_add(SMOOTH, INFINITY, p, p)] + torsion
    for q in pts:
        assert chord_tangent_add(SMOOTH, INFINITY, q, INFINITY) == q
        assert chord_tangent_add(SMOOTH, INFINITY, q, chord_tangent_neg(SMOOTH, INFINITY, q)) == INFINITY
    for q, r in itertools.combinations(pts, 2):
        assert chord_tangent_add(SMOOTH, INFINITY, q, r) == chord_tangent_add(SMOOTH, INFINITY, r, q)
    g1, g2 = MORDELL_17_GENERATORS
    lhs = chord_tangent_add(MORDELL_17, INFINITY, chord_tangent_add(MORDELL_17, INFINITY, g1, g2), g1)
    rhs = chord_tangent_add(MORDELL_17, INFINITY, g1, chord_tangent_add(MORDELL_17, INFINITY, g2, g1))
    assert lhs == rhs


def test_describe_lists_charts():
    text = "\n".join(group_map(CubicKind.THREE_LINES).describe())
    assert "y/z" in text and "-z/x" in text and "x/y" in text
