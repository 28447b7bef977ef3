import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sglab import linalg
from sglab.cycfield import CycNum, zeta
from sglab.errors import DegenerateError
from sglab.projgeom import (
    COORDINATE_LINES,
    ProjLine,
    ProjPoint,
    ProjTransform,
    apply,
    collinear,
    concurrent,
    join,
    meet,
    transform_mapping_lines,
    transform_mapping_points,
)
from sglab.sgcore import random_transform

small = st.integers(-4, 4)


@st.composite
def points(draw, order=5):
    w = zeta(order)
    coords = [draw(small) + draw(small) * w for _ in range(3)]
    if not any(coords):
        coords[2] = CycNum.one(order)
    return ProjPoint(coords)


@st.composite
def transforms(draw, order=5):
    seed = draw(st.integers(0, 10_000))
    return random_transform(order, random.Random(seed))


def test_canonical_scale():
    p = ProjPoint([0, 2, 4])
    assert p.coords == (0, 1, 2)
    assert p == ProjPoint([0, -1, -2])
    assert hash(p) == hash(ProjPoint([0, 3, 6]))
    with pytest.raises(DegenerateError):
        ProjPoint([0, 0, 0])


def test_collinear_examples():
    assert collinear(ProjPoint([0, 1, 1]), ProjPoint([0, 2, 1]), ProjPoint([0, 0, 1]))
    assert not collinear(ProjPoint([1, 0, 0]), ProjPoint([0, 1, 0]), ProjPoint([0, 0, 1]))
    # one point on each coordinate line with chart values 1, 1, 1
    assert collinear(ProjPoint([0, 1, 1]), ProjPoint([1, 0, 1]), ProjPoint([-1, 1, 0]))
    p = ProjPoint([1, 2, 3])
    assert collinear(p, p, ProjPoint([0, 0, 1]))


def test_join_examples():
    assert join(ProjPoint([0, 0, 1]), ProjPoint([0, 1, 0])) == ProjLine([1, 0, 0])
    # cross product (1,0,1) x (0,1,1) = (-1,-1,1), canonical (1,1,-1)
    l = join(ProjPoint([1, 0, 1]), ProjPoint([0, 1, 1]))
    assert l == ProjLine([1, 1, -1])
    assert l.contains(ProjPoint([1, 0, 1])) and l.contains(ProjPoint([0, 1, 1]))
    with pytest.raises(DegenerateError):
        join(ProjPoint([1, 1, 1]), ProjPoint([2, 2, 2]))


def test_meet_and_concurrency():
    assert meet(ProjLine([1, 0, 0]), ProjLine([0, 1, 0])) == ProjPoint([0, 0, 1])
    assert not concurrent(COORDINATE_LINES)
    assert concurrent([ProjLine([1, 0, 0]), ProjLine([0, 1, 0]), ProjLine([1, -1, 0])])


def test_identity_and_diagonal():
    p = ProjPoint([3, zeta(3), 1])
    assert apply(ProjTransform.identity(), p) == p
    l1, l2 = zeta(5) * 2, CycNum.rational(3)
    t = ProjTransform.diagonal(l2.inverse(), l1, 1)
    y = zeta(5) + 1
    assert apply(t, ProjPoint([0, y, 1])) == ProjPoint([0, l1 * y, 1])


def test_singular_matrix_rejected():
    with pytest.raises(DegenerateError):
        ProjTransform([[1, 2, 3], [2, 4, 6], [0, 0, 1]])


def test_mapping_lines_identity_on_coordinate_frame():
    t = transform_mapping_lines(COORDINATE_LINES)
    assert t.normalized().matrix == ProjTransform.identity().matrix


def test_mapping_lines_sends_frame_to_coordinate_lines():
    src = [ProjLine([1, 2, 3]), ProjLine([zeta(3), 0, 1]), ProjLine([1, -1, 5])]
    t = transform_mapping_lines(src)
    for l, target in zip(src, COORDINATE_LINES):
        assert t.apply_line(l) == target
        p, q = l.points()
        assert target.contains(t(p)) and target.contains(t(q))


def test_mapping_lines_rejects_concurrent():
    with pytest.raises(DegenerateError):
        transform_mapping_lines([ProjLine([1, 0, 0]), ProjLine([0, 1, 0]), ProjLine([1, 1, 0])])


def test_mapping_points_frame():
    src = [ProjPoint([1, 2, 0]), ProjPoint([0, 1, 1]), ProjPoint([1, 0, 3]), ProjPoint([1, 1, 1])]
    dst = [ProjPoint([1, 0, 0]), ProjPoint([0, 1, 0]), ProjPoint([0, 0, 1]), ProjPoint([1, 1, 1])]
    t = transform_mapping_points(src, dst)
    assert [t(p) for p in src] == dst


@settings(max_examples=60, deadline=None)
@given(points(), points())
def test_join_contains_both(p, q):
    if p == q:
        return
    l = join(p, q)
    assert l.contains(p) and l.contains(q)
    assert join(q, p) == l


@settings(max_examples=200, deadline=None)
@given(transforms(), points(), points(), points())
def test_collinearity_is_projectively_invariant(t, p, q, r):
    assert collinear(p, q, r) == collinear(t(p), t(q), t(r))


@settings(max_examples=80, deadline=None)
@given(transforms(), points(), points())
def test_collinear_triples_stay_collinear(t, p, q):
    if p == q:
        return
    r = ProjPoint([a + 2 * b for a, b in zip(p.coords, q.coords)])
    assert collinear(p, q, r)
    assert collinear(t(p), t(q), t(r))


@settings(max_examples=60, deadline=None)
@given(transforms(), points())
def test_inverse_round_trip_and_idempotence(t, p):
    assert apply(t, apply(t.inverse(), p)) == p
    assert ProjPoint(p.coords) == p
    assert ProjPoint(p.coords).coords == p.coords


@settings(max_examples=40, deadline=None)
@given(transforms(), transforms(), points())
def test_composition(s, t, p):
    assert (s @ t)(p) == s(t(p))
    m = linalg.matmul(s.matrix, t.matrix)
    assert (s @ t)(p) == ProjTransform(m)(p)
