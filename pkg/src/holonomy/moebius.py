"""PSL(2,R) arithmetic on the upper half-plane and its circle at infinity.

Points of the plane are :class:`PlanePoint`; points at infinity are homogeneous
:class:`BoundaryPoint` pairs, so infinity is never a special case. Matrices are
kept at determinant one and compared up to a global sign.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import (
    InvalidInput,
    IsIdentity,
    NotHyperbolic,
    NumericOverflow,
    SharedFixedPoint,
)

EPS_TR = 1e-9
EPS_DET = 1e-12
EPS_BDY = 1e-10
EPS_POS = 1e-12

TAU = 2.0 * math.pi


def wrap_angle(t: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    r = math.fmod(t, TAU)
    if r <= -math.pi:
        r += TAU
    elif r > math.pi:
        r -= TAU
    return r


@dataclass(frozen=True, eq=False)
class Isometry:
    """Matrix ``[[a, b], [c, d]]`` acting by ``z -> (az + b) / (cz + d)``.

    Any positive-determinant matrix is accepted and rescaled to determinant one.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        entries = (self.a, self.b, self.c, self.d)
        if not all(math.isfinite(float(e)) for e in entries):
            raise InvalidInput(f"non-finite matrix entries {entries}")
        det = self.a * self.d - self.b * self.c
        if not det > 0.0:
            raise InvalidInput(f"determinant {det!r} is not positive")
        # the rounding in a computed determinant grows with the entries
        if abs(det - 1.0) > EPS_DET * max(1.0, abs(self.a * self.d), abs(self.b * self.c)):
            s = math.sqrt(det)
            for name, value in zip("abcd", entries):
                object.__setattr__(self, name, float(value) / s)
        else:
            for name, value in zip("abcd", entries):
                object.__setattr__(self, name, float(value))

    @classmethod
    def from_rows(cls, rows) -> Isometry:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> Isometry:
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def translation(cls, t: float) -> Isometry:
        return cls(1.0, t, 0.0, 1.0)

    @classmethod
    def dilation(cls, k: float) -> Isometry:
        """``z -> k z`` for ``k > 0``."""
        s = math.sqrt(k)
        return cls(s, 0.0, 0.0, 1.0 / s)

    @classmethod
    def rotation(cls, angle: float, center: PlanePoint | None = None) -> Isometry:
        """Anticlockwise rotation by ``angle`` about ``center`` (default ``i``)."""
        half = 0.5 * angle
        r = cls(math.cos(half), math.sin(half), -math.sin(half), math.cos(half))
        if center is None:
            return r
        n = normalizer(center)
        return n.inverse() @ r @ n

    @classmethod
    def half_turn(cls, center: PlanePoint) -> Isometry:
        return cls.rotation(math.pi, center)

    @property
    def rows(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((self.a, self.b), (self.c, self.d))

    @property
    def trace(self) -> float:
        return self.a + self.d

    @classmethod
    def _unchecked(cls, a: float, b: float, c: float, d: float) -> Isometry:
        # for exact rearrangements of an already valid matrix: renormalising
        # again would only add rounding noise
        m = object.__new__(cls)
        for name, value in zip("abcd", (a, b, c, d)):
            object.__setattr__(m, name, value)
        return m

    def inverse(self) -> Isometry:
        return Isometry._unchecked(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> Isometry:
        return Isometry._unchecked(-self.a, -self.b, -self.c, -self.d)

    def __matmul__(self, other: Isometry) -> Isometry:
        try:
            return Isometry(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        except InvalidInput as exc:
            # both factors were valid, so a bad product is lost precision
            raise NumericOverflow(f"product lost its determinant: {exc}") from None

    def canonical(self) -> tuple[float, float, float, float]:
        """Entries with the first nonzero entry made positive."""
        e = (self.a, self.b, self.c, self.d)
        for v in e:
            if v != 0.0:
                return e if v > 0 else tuple(-x for x in e)
        return e

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Isometry):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def isclose(self, other: Isometry, tol: float = 1e-9) -> bool:
        """Equality in PSL(2,R), relative to the size of the entries."""
        mine = (self.a, self.b, self.c, self.d)
        theirs = (other.a, other.b, other.c, other.d)
        scale = max(1.0, *map(abs, mine), *map(abs, theirs))
        plus = max(abs(x - y) for x, y in zip(mine, theirs))
        minus = max(abs(x + y) for x, y in zip(mine, theirs))
        return min(plus, minus) <= tol * scale

    def is_identity(self, tol: float = EPS_TR) -> bool:
        return self.isclose(Isometry.identity(), tol)

    def __repr__(self) -> str:
        return f"Isometry([[{self.a!r}, {self.b!r}], [{self.c!r}, {self.d!r}]])"


@dataclass(frozen=True)
class PlanePoint:
    """Point ``x + i h`` of the upper half-plane."""

    x: float
    h: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.h)):
            raise InvalidInput(f"non-finite point ({self.x}, {self.h})")
        if not self.h > EPS_POS:
            raise InvalidInput(f"height {self.h!r} is not positive")

    @classmethod
    def from_complex(cls, z: complex) -> PlanePoint:
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.x, self.h)


I = PlanePoint(0.0, 1.0)


@dataclass(frozen=True)
class BoundaryPoint:
    """Homogeneous point ``(u, v)`` of the real projective line (value ``u/v``).

    Stored with ``u^2 + v^2 = 1`` and ``v > 0`` (or ``v == 0``, ``u == 1``).
    """

    u: float
    v: float

    def __post_init__(self) -> None:
        u, v = float(self.u), float(self.v)
        n = math.hypot(u, v)
        if not math.isfinite(n) or n == 0.0:
            raise InvalidInput(f"invalid homogeneous point ({u}, {v})")
        u, v = u / n, v / n
        if v < 0.0 or (v == 0.0 and u < 0.0):
            u, v = -u, -v
        object.__setattr__(self, "u", u + 0.0)
        object.__setattr__(self, "v", v + 0.0)

    @classmethod
    def from_value(cls, x: float) -> BoundaryPoint:
        if math.isinf(x):
            return cls(1.0, 0.0)
        return cls(x, 1.0)

    @property
    def value(self) -> float:
        return math.inf if self.v == 0.0 else self.u / self.v

    @property
    def angle(self) -> float:
        """Order-preserving coordinate on the circle, in [0, 2 pi)."""
        t = 2.0 * math.atan2(self.u, self.v)
        return t % TAU

    def distance(self, other: BoundaryPoint) -> float:
        """Projective distance: |sin| of the angle between representatives."""
        return abs(self.u * other.v - self.v * other.u)

    def isclose(self, other: BoundaryPoint, tol: float = EPS_BDY) -> bool:
        return self.distance(other) <= tol


INFINITY = BoundaryPoint(1.0, 0.0)


@dataclass(frozen=True)
class Geodesic:
    """Oriented complete geodesic from ``start`` to ``end`` (both at infinity)."""

    start: BoundaryPoint
    end: BoundaryPoint

    def __post_init__(self) -> None:
        if self.start.distance(self.end) <= EPS_BDY:
            raise InvalidInput("geodesic endpoints coincide")

    def reversed(self) -> Geodesic:
        return Geodesic(self.end, self.start)


class Kind(enum.Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class IsometryClass:
    """Trichotomy label plus its invariant.

    ``value`` is the rotation angle in (0, 2 pi) for elliptics, the direction
    sign (+1 anticlockwise, -1 clockwise) for parabolics, the translation
    length for hyperbolics and 0 for the identity.
    """

    kind: Kind
    value: float = 0.0


@dataclass(frozen=True)
class FermiCoord:
    """Signed distance along a reference line and signed height above it."""

    x: float
    h: float


# -- action ---------------------------------------------------------------


def apply(m: Isometry, p: PlanePoint) -> PlanePoint:
    z = p.z
    den = m.c * z + m.d
    mod2 = den.real * den.real + den.imag * den.imag
    num = m.a * z + m.b
    x = (num * den.conjugate()).real / mod2
    h = p.h / mod2
    if not (math.isfinite(x) and math.isfinite(h)) or mod2 == 0.0:
        raise NumericOverflow(f"image of {p} under {m} is not representable")
    if h <= EPS_POS:
        raise NumericOverflow(f"image of {p} under {m} underflows the half-plane")
    return PlanePoint(x, h)


def apply_boundary(m: Isometry, b: BoundaryPoint) -> BoundaryPoint:
    return BoundaryPoint(m.a * b.u + m.b * b.v, m.c * b.u + m.d * b.v)


def normalizer(p: PlanePoint) -> Isometry:
    """The affine map ``z -> (z - x) / h`` sending ``p`` to ``i``."""
    s = math.sqrt(p.h)
    return Isometry(1.0 / s, -p.x / s, 0.0, s)


def jacobian(m: Isometry, p: PlanePoint) -> complex:
    """``c z + d``; the derivative of ``m`` at ``p`` is its inverse square."""
    return m.c * p.z + m.d


# -- classification and fixed points ---------------------------------------


def classify(m: Isometry) -> IsometryClass:
    if m.is_identity():
        return IsometryClass(Kind.IDENTITY)
    t = abs(m.trace)
    if t < 2.0 - EPS_TR:
        return IsometryClass(Kind.ELLIPTIC, elliptic_angle(m))
    if t > 2.0 + EPS_TR:
        return IsometryClass(Kind.HYPERBOLIC, 2.0 * math.acosh(t / 2.0))
    return IsometryClass(Kind.PARABOLIC, parabolic_direction(m))


def _eigenvector(m: Isometry, lam: float) -> BoundaryPoint:
    first = (m.b, lam - m.a)
    second = (lam - m.d, m.c)
    best = first if math.hypot(*first) >= math.hypot(*second) else second
    return BoundaryPoint(*best)


def hyperbolic_fixed_points(m: Isometry) -> tuple[BoundaryPoint, BoundaryPoint]:
    """(repulsive, attractive) fixed points of a hyperbolic isometry."""
    t = m.trace
    if abs(t) <= 2.0 + EPS_TR:
        raise NotHyperbolic(f"trace {t} is not hyperbolic")
    root = math.sqrt(t * t - 4.0)
    big = 0.5 * (t + math.copysign(root, t))
    small = 1.0 / big
    return _eigenvector(m, small), _eigenvector(m, big)


def parabolic_fixed_point(m: Isometry) -> BoundaryPoint:
    lam = math.copysign(1.0, m.trace)
    return _eigenvector(m, lam)


def elliptic_fixed_point(m: Isometry) -> PlanePoint:
    t = m.trace
    disc = max(4.0 - t * t, 0.0)
    return PlanePoint((m.a - m.d) / (2.0 * m.c), math.sqrt(disc) / (2.0 * abs(m.c)))


def elliptic_angle(m: Isometry) -> float:
    """Anticlockwise rotation angle in (0, 2 pi) about the fixed point."""
    p = elliptic_fixed_point(m)
    return (-2.0 * cmath.phase(jacobian(m, p))) % TAU


def parabolic_direction(m: Isometry) -> int:
    """+1 when ``m`` turns tangent vectors anticlockwise, -1 otherwise."""
    # Conjugate so the fixed point is infinity: then m is z -> z + s and the
    # sign of s decides, computed here without forming the conjugate.
    fp = parabolic_fixed_point(m)
    # translation amount in a frame where fp -> infinity (rotation about i)
    ang = math.atan2(fp.v, fp.u)
    r = Isometry(math.cos(ang), math.sin(ang), -math.sin(ang), math.cos(ang))
    n = r @ m @ r.inverse()
    s = n.b / n.d if n.d != 0.0 else n.b
    return 1 if s > 0 else -1


def fixed_points(m: Isometry):
    """Fixed-point data keyed by type.

    Hyperbolic: ``(repulsive, attractive)`` boundary points. Parabolic: one
    boundary point. Elliptic: the interior fixed point.
    """
    cls = classify(m)
    if cls.kind is Kind.IDENTITY:
        raise IsIdentity("the identity fixes everything")
    if cls.kind is Kind.HYPERBOLIC:
        return hyperbolic_fixed_points(m)
    if cls.kind is Kind.PARABOLIC:
        return parabolic_fixed_point(m)
    return elliptic_fixed_point(m)


def axis(m: Isometry) -> Geodesic:
    if classify(m).kind is not Kind.HYPERBOLIC:
        raise NotHyperbolic("only hyperbolic isometries have an axis")
    r, a = hyperbolic_fixed_points(m)
    return Geodesic(r, a)


# -- metric -----------------------------------------------------------------


def distance(p: PlanePoint, q: PlanePoint) -> float:
    dz = abs(p.z - q.z)
    return 2.0 * math.asinh(dz / (2.0 * math.sqrt(p.h * q.h)))


def fermi_distance(p1: FermiCoord, p2: FermiCoord) -> float:
    # cosh d - 1 rewritten as a sum of squares, which keeps short distances exact
    half = (
        math.cosh(p1.h) * math.cosh(p2.h) * math.sinh(0.5 * (p2.x - p1.x)) ** 2
        + math.sinh(0.5 * (p2.h - p1.h)) ** 2
    )
    return 2.0 * math.asinh(math.sqrt(half))


def fermi_to_plane(f: FermiCoord) -> PlanePoint:
    """Embed Fermi coordinates about the upward imaginary axis based at ``i``.

    Positive height lies to the left of the axis (negative real part).
    """
    r = math.exp(f.x)
    return PlanePoint(-r * math.tanh(f.h), r / math.cosh(f.h))


# -- pairs ------------------------------------------------------------------


def commutator(g: Isometry, h: Isometry) -> Isometry:
    return g @ h @ g.inverse() @ h.inverse()


def _det(p: BoundaryPoint, q: BoundaryPoint) -> float:
    return p.u * q.v - p.v * q.u


def cross_ratio(g: Isometry, h: Isometry) -> float:
    """``(r_g - a_h)(a_g - r_h) / ((r_g - r_h)(a_g - a_h))`` in homogeneous form."""
    rg, ag = hyperbolic_fixed_points(g)
    rh, ah = hyperbolic_fixed_points(h)
    pts = (rg, ag, rh, ah)
    for i in range(4):
        for j in range(i + 1, 4):
            if pts[i].distance(pts[j]) <= EPS_BDY:
                raise SharedFixedPoint("fixed points are not pairwise distinct")
    den = _det(rg, rh) * _det(ag, ah)
    return _det(rg, ah) * _det(ag, rh) / den


def separates(a: BoundaryPoint, b: BoundaryPoint, c: BoundaryPoint, d: BoundaryPoint) -> bool:
    """True iff the pair {c, d} lies on both arcs cut out by {a, b}."""
    ta, tb = sorted((a.angle, b.angle))
    inside_c = ta < c.angle < tb
    inside_d = ta < d.angle < tb
    return inside_c != inside_d


def cyclic_order(points) -> list[int]:
    """Indices of ``points`` sorted by position on the circle at infinity."""
    return sorted(range(len(points)), key=lambda k: points[k].angle)


def axes_crossing(g: Isometry, h: Isometry) -> bool:
    if classify(g).kind is not Kind.HYPERBOLIC or classify(h).kind is not Kind.HYPERBOLIC:
        return False
    rg, ag = hyperbolic_fixed_points(g)
    rh, ah = hyperbolic_fixed_points(h)
    for p in (rg, ag):
        for q in (rh, ah):
            if p.distance(q) <= EPS_BDY:
                return False
    return separates(rg, ag, rh, ah)


# -- geodesic helpers ---------------------------------------------------------


def straightener(gamma: Geodesic) -> Isometry:
    """An isometry sending ``gamma`` to the upward imaginary axis (0 -> inf)."""
    s, e = gamma.start, gamma.end
    # z -> (v_s z - u_s) / (v_e z - u_e) sends s -> 0 and e -> inf
    det = _det(s, e)
    m = (s.v, -s.u, e.v, -e.u)
    if det < 0:
        m = (-s.v, s.u, e.v, -e.u)
    return Isometry(*m)


def side(gamma: Geodesic, p: PlanePoint) -> float:
    """Positive when ``p`` lies left of ``gamma``, negative when right."""
    w = apply(straightener(gamma), p)
    return -w.x / w.h


def foot_of_perpendicular(gamma: Geodesic, p: PlanePoint) -> PlanePoint:
    t = straightener(gamma)
    w = apply(t, p)
    return apply(t.inverse(), PlanePoint(0.0, abs(w.z)))


def perpendicular_offset(gamma: Geodesic, foot: PlanePoint, d: float) -> PlanePoint:
    """Point at signed distance ``d`` from ``foot`` (on ``gamma``), left positive."""
    t = straightener(gamma)
    w = apply(t, foot)
    r = w.h
    return apply(t.inverse(), PlanePoint(-r * math.tanh(d), r / math.cosh(d)))


def intersect(g1: Geodesic, g2: Geodesic) -> PlanePoint | None:
    """Crossing point of two geodesics, or ``None`` when they do not cross."""
    if not separates(g1.start, g1.end, g2.start, g2.end):
        return None
    t = straightener(g1)
    s3 = apply_boundary(t, g2.start)
    s4 = apply_boundary(t, g2.end)
    prod = -(s3.u * s4.u) / (s3.v * s4.v)
    return apply(t.inverse(), PlanePoint(0.0, math.sqrt(prod)))


def toward_boundary(xi: BoundaryPoint, s: float, origin: PlanePoint = I) -> PlanePoint:
    """Point at distance ``s`` from ``origin`` along the ray towards ``xi``."""
    n = normalizer(origin)
    b = apply_boundary(n, xi)
    ang = math.atan2(b.v, b.u)
    r = Isometry(math.cos(ang), math.sin(ang), -math.sin(ang), math.cos(ang))
    back = n.inverse() @ r.inverse()
    return apply(back, PlanePoint(0.0, math.exp(s)))


def direction(p: PlanePoint, q: PlanePoint) -> float:
    """Euclidean angle of the unit tangent at ``p`` of the geodesic to ``q``."""
    w = complex((q.x - p.x) / p.h, q.h / p.h)
    return cmath.phase((w - 1j) / (w + 1j)) + 0.5 * math.pi


def to_hyperboloid(p: PlanePoint) -> tuple[float, float, float]:
    x, y = p.x, p.h
    r2 = x * x + y * y
    return ((1.0 + r2) / (2.0 * y), x / y, (r2 - 1.0) / (2.0 * y))


def orientation(p: PlanePoint, q: PlanePoint, r: PlanePoint) -> float:
    """Scale-free orientation of the geodesic triangle ``pqr``.

    Positive for anticlockwise, negative for clockwise, ~0 when the three
    points lie on one geodesic.
    """
    a, b, c = to_hyperboloid(p), to_hyperboloid(q), to_hyperboloid(r)
    det = (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )
    scale = math.hypot(*a) * math.hypot(*b) * math.hypot(*c)
    return det / scale


def exp_point(p: PlanePoint, angle: float, dist: float) -> PlanePoint:
    """Point at distance ``dist`` from ``p`` leaving in Euclidean direction ``angle``."""
    n = normalizer(p)
    turn = Isometry.rotation(angle - 0.5 * math.pi)
    return apply(n.inverse() @ turn, PlanePoint(0.0, math.exp(dist)))
