"""The geodesic pentagon spanned by an orbit of a basepoint, and its checks.

Vertices are ``p, [g^-1, h^-1] p, h p, g h p, h^-1 g h p`` in traversal order.
Side pairings: ``g`` sends ``v1 -> v4`` and ``v2 -> v3``, ``h`` sends
``v4 -> v3`` and ``v0 -> v2``.

The pentagons that matter are often long and thin (edges of length 30 or
more, angles far below 1e-8), which double precision cannot resolve. So
vertices are computed, and every predicate evaluated, in a private 40-digit
mpmath context; floats are only what the outside world sees.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

from ._exact import act, mp
from .cover import commutator_twist
from .errors import InvalidInput, NotSimple, NumericOverflow, TwistAngleMismatch
from .moebius import TAU, Isometry, PlanePoint

EPS_DEG = 1e-8
EPS_COLLINEAR = 1e-24
EPS_ON_SEGMENT = 1e-20
EPS_FOLD = 1e-24
MISMATCH_TOL = 1e-4



class Orientation(enum.Enum):
    LEFT = "Left"
    RIGHT = "Right"


def _to_exact(p: PlanePoint):
    return mp.mpc(p.x, p.h)


_act = act


@dataclass(frozen=True)
class Pentagon:
    vertices: tuple[PlanePoint, PlanePoint, PlanePoint, PlanePoint, PlanePoint]
    exact: tuple = field(default=(), compare=False, repr=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.vertices) != 5:
            raise ValueError("a pentagon has five vertices")
        if not self.exact:
            object.__setattr__(self, "exact", tuple(_to_exact(v) for v in self.vertices))

    @classmethod
    def from_exact(cls, zs) -> Pentagon:
        try:
            pts = tuple(PlanePoint(float(z.real), float(z.imag)) for z in zs)
        except InvalidInput as exc:
            raise NumericOverflow(f"vertex outside double range: {exc}") from None
        return cls(pts, tuple(zs))

    def edges(self) -> list[tuple[PlanePoint, PlanePoint]]:
        v = self.vertices
        return [(v[k], v[(k + 1) % 5]) for k in range(5)]

    def mapped(self, m: Isometry) -> Pentagon:
        return Pentagon.from_exact([_act(m, z) for z in self.exact])


@dataclass(frozen=True)
class PentagonReport:
    simple: bool
    degenerate: bool
    angle_sum: float | None
    signed_area: float | None
    orientation: Orientation | None


def build_pentagon_exact(g: Isometry, h: Isometry, z) -> tuple:
    """The five vertices for an extended-precision basepoint ``z``."""
    hp = _act(h, z)
    ghp = _act(g, hp)
    back = _act(h.inverse(), ghp)
    return (z, _act(g.inverse(), back), hp, ghp, back)


def build_pentagon(g: Isometry, h: Isometry, p: PlanePoint) -> Pentagon:
    return Pentagon.from_exact(build_pentagon_exact(g, h, _to_exact(p)))


# -- geometry over either number system ---------------------------------------


class _Num:
    """Elementary functions for one number system (floats or the mp context)."""

    def __init__(self, asinh, sqrt, arg, pi, zero) -> None:
        self.asinh, self.sqrt, self.arg = asinh, sqrt, arg
        self.pi, self.tau, self.zero = pi, 2 * pi, zero


FLOAT = _Num(math.asinh, math.sqrt, cmath.phase, math.pi, 0.0)
EXACT = _Num(mp.asinh, mp.sqrt, mp.arg, mp.pi, mp.mpf(0))


def _dist(N, a, b):
    return 2 * N.asinh(abs(a - b) / (2 * N.sqrt(a.imag * b.imag)))


def _dir(N, a, b):
    w = (b - a.real) / a.imag
    return N.arg((w - 1j) / (w + 1j)) + N.pi / 2


def _hyperboloid(z):
    x, y = z.real, z.imag
    r2 = x * x + y * y
    return ((1 + r2) / (2 * y), x / y, (r2 - 1) / (2 * y))


def _orientation(N, a, b, c):
    """Scale-free orientation of triangle ``abc``; positive when anticlockwise."""
    p, q, r = _hyperboloid(a), _hyperboloid(b), _hyperboloid(c)
    det = (
        p[0] * (q[1] * r[2] - q[2] * r[1])
        - p[1] * (q[0] * r[2] - q[2] * r[0])
        + p[2] * (q[0] * r[1] - q[1] * r[0])
    )
    norm = N.sqrt(sum(t * t for t in p) * sum(t * t for t in q) * sum(t * t for t in r))
    return det / norm


def _turns(N, zs) -> list:
    """Angle at each vertex swept anticlockwise from outgoing to incoming edge."""
    out = []
    for k in range(5):
        back = _dir(N, zs[k], zs[k - 1])
        fwd = _dir(N, zs[k], zs[(k + 1) % 5])
        out.append((back - fwd) % N.tau)
    return out


def _triangle_area(N, a, b, c):
    def corner(x, y, z):
        t = (_dir(N, x, y) - _dir(N, x, z)) % N.tau
        return min(t, N.tau - t)

    s = _orientation(N, a, b, c)
    area = N.pi - corner(a, b, c) - corner(b, c, a) - corner(c, a, b)
    area = max(area, N.zero)
    return area if s > 0 else -area


def _signed_area(N, zs):
    return sum(_triangle_area(N, zs[0], zs[k], zs[k + 1]) for k in range(1, 4))


def _interior(N, zs) -> list:
    turns = _turns(N, zs)
    if _signed_area(N, zs) < 0:
        return [N.tau - t for t in turns]
    return turns


class _Uncertain(Exception):
    pass


def _sign(N, o, margin) -> int:
    if abs(o) <= margin:
        if N is FLOAT:
            # thin pentagons make small orientations meaningless as distances
            raise _Uncertain
        return 0
    return 1 if o > 0 else -1


def _on_segment(N, a, b, q) -> bool:
    excess = _dist(N, a, q) + _dist(N, q, b) - _dist(N, a, b)
    return excess <= EPS_ON_SEGMENT


def _segments_meet(N, a, b, c, d, margin) -> bool:
    o1, o2 = _sign(N, _orientation(N, a, b, c), margin), _sign(N, _orientation(N, a, b, d), margin)
    o3, o4 = _sign(N, _orientation(N, c, d, a), margin), _sign(N, _orientation(N, c, d, b), margin)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and _on_segment(N, a, b, c))
        or (o2 == 0 and _on_segment(N, a, b, d))
        or (o3 == 0 and _on_segment(N, c, d, a))
        or (o4 == 0 and _on_segment(N, c, d, b))
    )


def _simple(N, zs, margin) -> bool:
    for k in range(5):
        d = _dist(N, zs[k], zs[(k + 1) % 5])
        if N is FLOAT and abs(d - EPS_DEG) <= margin:
            raise _Uncertain
        if d <= EPS_DEG:
            return False
    # adjacent edges may only meet at their common vertex: no folds
    for t in _turns(N, zs):
        if t <= margin or t >= N.tau - margin:
            if N is FLOAT:
                raise _Uncertain
            return False
    for i in range(5):
        for j in range(i + 2, 5):
            if i == 0 and j == 4:
                continue
            if _segments_meet(N, zs[i], zs[(i + 1) % 5], zs[j], zs[(j + 1) % 5], margin):
                return False
    return True


@dataclass(frozen=True)
class _Analysis:
    simple: bool
    degenerate: bool
    num: _Num
    zs: list


def _analyse(P: Pentagon) -> _Analysis:
    cached = P._cache.get("analysis")
    if cached is not None:
        return cached
    z0 = P.exact[0]
    exact = [(z - z0.real) / z0.imag for z in P.exact]
    degenerate = any(_dist(EXACT, exact[k], exact[(k + 1) % 5]) <= EPS_DEG for k in range(5))
    result = None
    if not degenerate:
        floats = [complex(float(z.real), float(z.imag)) for z in exact]
        # hyperbolic size of one rounding step at each vertex
        delta = max(2.3e-16 * (abs(z) + 1.0) / z.imag for z in floats)
        if delta < 1e-11:
            P._cache["float"] = True
            try:
                ok = _simple(FLOAT, floats, max(1e-9, 1e4 * delta))
                result = _Analysis(ok, False, FLOAT, floats)
            except (_Uncertain, ZeroDivisionError, OverflowError, ValueError):
                result = None
    if result is None:
        ok = (not degenerate) and _simple(EXACT, exact, EPS_FOLD)
        result = _Analysis(ok, degenerate, EXACT, exact)
    P._cache["analysis"] = result
    return result


def is_degenerate(P: Pentagon) -> bool:
    return _analyse(P).degenerate


def is_simple(P: Pentagon) -> bool:
    return _analyse(P).simple


def segments_meet(a: PlanePoint, b: PlanePoint, c: PlanePoint, d: PlanePoint) -> bool:
    """Whether closed geodesic segments ``ab`` and ``cd`` share a point."""
    zs = [mp.mpc(v.x, v.h) for v in (a, b, c, d)]
    return _segments_meet(EXACT, *zs, EPS_COLLINEAR)


def _require_simple(P: Pentagon, what: str) -> _Analysis:
    an = _analyse(P)
    if not an.simple:
        raise NotSimple(f"{what} needs a simple pentagon")
    return an


def signed_area(P: Pentagon) -> float:
    """Hyperbolic area, positive when the traversal is anticlockwise."""
    an = _require_simple(P, "signed area")
    return float(_signed_area(an.num, an.zs))


def interior_angles(P: Pentagon) -> list[float]:
    an = _require_simple(P, "interior angles")
    return [float(t) for t in _interior(an.num, an.zs)]


def angle_sum(P: Pentagon) -> float:
    an = _require_simple(P, "angle sum")
    return float(sum(_interior(an.num, an.zs)))


def report(P: Pentagon) -> PentagonReport:
    an = _analyse(P)
    if not an.simple:
        return PentagonReport(False, an.degenerate, None, None, None)
    area = _signed_area(an.num, an.zs)
    side = Orientation.LEFT if area > 0 else Orientation.RIGHT
    return PentagonReport(
        True, False, float(sum(_interior(an.num, an.zs))), float(area), side
    )


def corner_angle(g: Isometry, h: Isometry, p: PlanePoint) -> tuple[float, Orientation]:
    """Corner angle ``3 pi - |twist|`` and the side on which ``e0`` bounds the disc."""
    P = build_pentagon(g, h, p)
    if not is_simple(P):
        raise NotSimple("the pentagon at this basepoint is not simple")
    twist = commutator_twist(g, h, p)
    theta = 3.0 * math.pi - abs(twist)
    measured = angle_sum(P)
    if abs(theta - measured) > MISMATCH_TOL:
        raise TwistAngleMismatch(
            f"twist gives {theta} but the interior angles sum to {measured}"
        )
    side = Orientation.LEFT if twist > 0 else Orientation.RIGHT
    return theta, side


def identification_error(g: Isometry, h: Isometry, P: Pentagon) -> float:
    """Largest distance between a paired vertex and the image of its partner."""
    v = P.exact
    pairs = ((g, 1, 4), (g, 2, 3), (h, 4, 3), (h, 0, 2))
    return float(max(_dist(EXACT, _act(m, v[i]), v[j]) for m, i, j in pairs))


def check_identifications(
    g: Isometry, h: Isometry, P: Pentagon, tol: float = 1e-9
) -> bool:
    return identification_error(g, h, P) <= tol
