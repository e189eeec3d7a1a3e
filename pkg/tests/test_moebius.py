import math
import random

import pytest
from hypothesis import given, strategies as st

from conftest import MARKOFF_PAIR, hyperbolic_pair, hyperbolic_with, isometries, plane_points
from holonomy.errors import InvalidInput, IsIdentity, NotHyperbolic, SharedFixedPoint
from holonomy.moebius import (
    EPS_BDY,
    INFINITY,
    BoundaryPoint,
    FermiCoord,
    Geodesic,
    I,
    Isometry,
    Kind,
    PlanePoint,
    apply,
    apply_boundary,
    axes_crossing,
    axis,
    classify,
    commutator,
    cross_ratio,
    cyclic_order,
    distance,
    elliptic_fixed_point,
    fermi_distance,
    fermi_to_plane,
    fixed_points,
    foot_of_perpendicular,
    hyperbolic_fixed_points,
    intersect,
    parabolic_fixed_point,
    perpendicular_offset,
    side,
    toward_boundary,
)

DIAG = Isometry(2.0, 0.0, 0.0, 0.5)
SHIFT = Isometry.translation(1.0)
ZERO = BoundaryPoint(0.0, 1.0)


# -- construction ---------------------------------------------------------


def test_determinant_normalised():
    m = Isometry(2.0, 0.0, 0.0, 2.0)
    assert m.a == pytest.approx(1.0) and m.d == pytest.approx(1.0)
    m = Isometry(3.0, 1.0, 2.0, 5.0)
    assert m.a * m.d - m.b * m.c == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("entries", [(1, 0, 0, -1), (0, 0, 0, 0), (math.nan, 0, 0, 1), (math.inf, 0, 0, 1)])
def test_rejects_bad_matrices(entries):
    with pytest.raises(InvalidInput):
        Isometry(*entries)


def test_equality_up_to_sign():
    assert -DIAG == DIAG
    assert (-DIAG).isclose(DIAG)
    assert not SHIFT.isclose(DIAG)


def test_plane_point_height():
    with pytest.raises(InvalidInput):
        PlanePoint(0.0, 0.0)
    with pytest.raises(InvalidInput):
        PlanePoint(0.0, 1e-13)


def test_geodesic_needs_distinct_ends():
    with pytest.raises(InvalidInput):
        Geodesic(ZERO, BoundaryPoint(1e-12, 1.0))


# -- classify ---------------------------------------------------------------


def test_classify_identity():
    assert classify(Isometry.identity()).kind is Kind.IDENTITY


def test_classify_diagonal():
    c = classify(DIAG)
    assert c.kind is Kind.HYPERBOLIC
    assert c.value == pytest.approx(2 * math.acosh(5 / 4))
    assert c.value == pytest.approx(2 * math.log(2))


def test_classify_rotation():
    t = math.pi / 3
    c = classify(Isometry(math.cos(t), -math.sin(t), math.sin(t), math.cos(t)))
    assert c.kind is Kind.ELLIPTIC
    assert 0 < c.value < 2 * math.pi


def test_classify_parabolic_sign():
    assert classify(SHIFT).kind is Kind.PARABOLIC
    assert classify(SHIFT).value == -classify(SHIFT.inverse()).value


def test_rotation_angle_recovered():
    for angle in (0.3, 1.0, 2.5, 4.0):
        c = classify(Isometry.rotation(angle, PlanePoint(0.5, 2.0)))
        assert c.value == pytest.approx(angle, abs=1e-9)


# -- action ---------------------------------------------------------------


def test_apply_examples():
    assert apply(Isometry.identity(), I) == I
    q = apply(SHIFT, I)
    assert (q.x, q.h) == pytest.approx((1.0, 1.0))
    q = apply(DIAG, I)
    assert (q.x, q.h) == pytest.approx((0.0, 4.0))


def test_apply_boundary_examples():
    assert apply_boundary(Isometry.identity(), INFINITY).isclose(INFINITY)
    assert apply_boundary(SHIFT, INFINITY).isclose(INFINITY)
    assert apply_boundary(DIAG, ZERO).isclose(ZERO)


@given(isometries(), plane_points())
def test_action_is_a_homomorphism(m, p):
    n = Isometry.rotation(0.7) @ Isometry.dilation(1.5)
    lhs = apply(m @ n, p)
    rhs = apply(m, apply(n, p))
    assert distance(lhs, rhs) < 1e-9


@given(isometries(), st.floats(-50, 50))
def test_apply_boundary_inverse_roundtrip(m, x):
    b = BoundaryPoint.from_value(x)
    back = apply_boundary(m.inverse(), apply_boundary(m, b))
    assert back.isclose(b, EPS_BDY)


@given(isometries(), plane_points(), plane_points())
def test_isometries_preserve_distance(m, p, q):
    d = distance(p, q)
    assert distance(apply(m, p), apply(m, q)) == pytest.approx(d, rel=1e-8, abs=1e-8)


# -- fixed points and axes ----------------------------------------------------


def test_fixed_points_examples():
    r, a = fixed_points(DIAG)
    assert r.isclose(ZERO) and a.isclose(INFINITY)
    p = fixed_points(Isometry.rotation(math.pi / 3))
    assert (p.x, p.h) == pytest.approx((0.0, 1.0))
    assert fixed_points(SHIFT).isclose(INFINITY)
    with pytest.raises(IsIdentity):
        fixed_points(Isometry.identity())


def test_axis_examples():
    ax = axis(DIAG)
    assert ax.start.isclose(ZERO) and ax.end.isclose(INFINITY)
    moved = axis(SHIFT @ SHIFT @ SHIFT @ DIAG @ Isometry.translation(-3.0))
    assert moved.start.isclose(BoundaryPoint.from_value(3.0)) and moved.end.isclose(INFINITY)
    with pytest.raises(NotHyperbolic):
        axis(Isometry.rotation(1.0))


@given(isometries())
def test_hyperbolic_fixed_points_are_fixed(c):
    m = c @ DIAG @ c.inverse()
    r, a = hyperbolic_fixed_points(m)
    assert apply_boundary(m, r).isclose(r, 1e-8)
    assert apply_boundary(m, a).isclose(a, 1e-8)
    # forward iterates of a generic boundary point approach the attractor
    x = apply_boundary(c, BoundaryPoint.from_value(1.0))
    for _ in range(60):
        x = apply_boundary(m, x)
    assert x.isclose(a, 1e-6)


@given(isometries(), st.floats(0.1, 6.0))
def test_elliptic_fixed_point_is_fixed(c, angle):
    m = c @ Isometry.rotation(angle) @ c.inverse()
    p = elliptic_fixed_point(m)
    assert distance(apply(m, p), p) < 1e-7


@given(isometries())
def test_parabolic_fixed_point_is_fixed(c):
    m = c @ SHIFT @ c.inverse()
    b = parabolic_fixed_point(m)
    assert apply_boundary(m, b).isclose(b, 1e-8)


# -- metric -----------------------------------------------------------------


def test_distance_examples():
    assert distance(I, I) == 0.0
    assert distance(I, PlanePoint(0.0, math.e)) == pytest.approx(1.0)
    assert distance(I, PlanePoint(1.0, 1.0)) == pytest.approx(math.acosh(1.5))


@given(plane_points(), plane_points(), plane_points())
def test_distance_is_a_metric(p, q, r):
    assert distance(p, q) == distance(q, p)
    assert distance(p, r) <= distance(p, q) + distance(q, r) + 1e-12


def test_fermi_examples():
    assert fermi_distance(FermiCoord(0, 0), FermiCoord(2.5, 0)) == pytest.approx(2.5)
    assert fermi_distance(FermiCoord(0, 1), FermiCoord(0, 1)) == 0.0
    c1, s1 = math.cosh(1), math.sinh(1)
    want = math.acosh(c1 * c1 * c1 - s1 * s1)
    got = fermi_distance(FermiCoord(0, 1), FermiCoord(1, 1))
    assert got == pytest.approx(want, rel=1e-12)
    # frozen cross-check through the plane embedding
    assert got == pytest.approx(1.4717208827259037, rel=1e-12)
    embedded = distance(fermi_to_plane(FermiCoord(0, 1)), fermi_to_plane(FermiCoord(1, 1)))
    assert embedded == pytest.approx(want, rel=1e-9)


def test_fermi_agrees_with_plane_distance():
    rng = random.Random(5)
    worst = 0.0
    for _ in range(10_000):
        f1 = FermiCoord(rng.uniform(-3, 3), rng.uniform(-3, 3))
        f2 = FermiCoord(rng.uniform(-3, 3), rng.uniform(-3, 3))
        d = distance(fermi_to_plane(f1), fermi_to_plane(f2))
        worst = max(worst, abs(d - fermi_distance(f1, f2)))
    assert worst < 1e-9 * 10  # distances reach ~12; absolute error scales with them


# -- commutators and cross-ratios -------------------------------------------


def test_commutator_examples():
    assert commutator(DIAG, Isometry.dilation(3.0)).is_identity()
    assert commutator(SHIFT, Isometry(1, 0, 1, 1)).trace == pytest.approx(3.0)
    assert commutator(*MARKOFF_PAIR).trace == pytest.approx(-2.0)


def test_commutator_trace_ignores_lift():
    rng = random.Random(1)
    for _ in range(100):
        g, h = hyperbolic_pair(rng)
        assert commutator(-g, h).trace == pytest.approx(commutator(g, h).trace, abs=1e-9)


@pytest.mark.parametrize("t", [1.5, 3.0, 10.0, 0.5, 0.1, -2.0])
def test_cross_ratio_normalised(t):
    h = hyperbolic_with(1.0, t)
    assert cross_ratio(DIAG, h) == pytest.approx(t, rel=1e-9)


def test_cross_ratio_shared_point():
    with pytest.raises(SharedFixedPoint):
        cross_ratio(DIAG, hyperbolic_with(0.0, 5.0))


def test_cross_ratio_of_normalised_character():
    from holonomy.charvar import CharacterTriple, realize

    g, h = realize(CharacterTriple(3.0, 3.0, 8.0))
    c = cross_ratio(g, h)
    assert c > 0 and abs(c - 1) > 1e-6
    assert not axes_crossing(g, h)


def test_axes_crossing_examples():
    assert axes_crossing(*MARKOFF_PAIR)
    shifted = Isometry.translation(3.0) @ DIAG @ Isometry.translation(-3.0)
    assert not axes_crossing(DIAG, shifted)
    assert not axes_crossing(Isometry.rotation(1.0), DIAG)


def test_axes_crossing_matches_commutator_trace():
    rng = random.Random(2)
    checked = 0
    while checked < 3000:
        g, h = hyperbolic_pair(rng)
        t = commutator(g, h).trace
        if abs(t - 2.0) < 1e-6:
            continue
        assert axes_crossing(g, h) == (t < 2.0)
        checked += 1


# -- axis arrangements for crossing pairs --------------------------------------


def _crossing_samples(rng, lo, hi, n):
    out = []
    while len(out) < n:
        g, h = hyperbolic_pair(rng)
        if lo < commutator(g, h).trace < hi:
            out.append((g, h))
    return out


def _same_side(line, p, q):
    return side(line, p) * side(line, q) > 0


def test_commutator_axis_order_below_minus_two():
    rng = random.Random(3)
    for g, h in _crossing_samples(rng, -1e9, -2.05, 300):
        c = commutator(g, h)
        rg, ag = hyperbolic_fixed_points(g)
        rh, ah = hyperbolic_fixed_points(h)
        rc, ac = hyperbolic_fixed_points(c)
        pts = [ah, rc, ac, ag, rh, rg]
        order = cyclic_order(pts)
        k = order.index(0)
        rotated = order[k:] + order[:k]
        assert rotated in ([0, 1, 2, 3, 4, 5], [0, 5, 4, 3, 2, 1])
        assert intersect(axis(c), axis(g)) is None
        assert intersect(axis(c), axis(h)) is None


def _quadrant_witness(g, h):
    """Points deep inside the quadrant cut off by the arc from a_g to a_h."""
    centre = intersect(axis(g), axis(h))
    ag, ah = hyperbolic_fixed_points(g)[1], hyperbolic_fixed_points(h)[1]
    return toward_boundary(ah, 3.0, centre), toward_boundary(ag, 3.0, centre)


def test_parabolic_commutator_lies_between_attractors():
    from conftest import realized_pair

    rng = random.Random(4)
    for _ in range(100):
        x, y = rng.uniform(2.2, 8), rng.uniform(2.2, 8)
        disc = x * x * y * y - 4 * (x * x + y * y)
        if disc < 0:
            continue
        z = 0.5 * (x * y + math.sqrt(disc))
        g, h = realized_pair((x, y, z), rng)
        if not axes_crossing(g, h):
            continue
        fp = parabolic_fixed_point(commutator(g, h))
        near_ah, near_ag = _quadrant_witness(g, h)
        centre = intersect(axis(g), axis(h))
        probe = toward_boundary(fp, 3.0, centre)
        assert _same_side(axis(g), probe, near_ah)
        assert _same_side(axis(h), probe, near_ag)


def test_elliptic_commutator_lies_in_attractor_quadrant():
    rng = random.Random(6)
    for g, h in _crossing_samples(rng, -1.99, 1.99, 300):
        fp = elliptic_fixed_point(commutator(g, h))
        near_ah, near_ag = _quadrant_witness(g, h)
        assert _same_side(axis(g), fp, near_ah)
        assert _same_side(axis(h), fp, near_ag)


# -- geodesic helpers ---------------------------------------------------------


@given(isometries(), st.floats(-2, 2))
def test_perpendicular_offset_distance(c, d):
    line = Geodesic(apply_boundary(c, ZERO), apply_boundary(c, INFINITY))
    foot = foot_of_perpendicular(line, I)
    q = perpendicular_offset(line, foot, d)
    assert distance(foot, q) == pytest.approx(abs(d), abs=1e-8)
    back = foot_of_perpendicular(line, q)
    assert distance(back, foot) < 1e-7
