"""Lifts to the universal cover of PSL(2,R) and their twists.

A lift of ``M`` is tracked as ``M`` together with a continuous branch of
``arg(cz + d)`` on the half-plane. The principal branch is already continuous
for a single matrix, and for a word the branches add up along the orbit of the
evaluation point. Since the commutator of two lifts does not depend on which
lifts are chosen, summing principal branches gives the canonical commutator
lift exactly, with no interval guesswork.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from ._exact import act, mp
from .errors import AmbiguousNearBoundary
from .moebius import (
    I,
    TAU,
    Isometry,
    Kind,
    PlanePoint,
    apply,
    axis,
    classify,
    commutator,
    elliptic_fixed_point,
    foot_of_perpendicular,
    jacobian,
    parabolic_fixed_point,
    toward_boundary,
    wrap_angle,
)

EPS_TW = 1e-7


class RegionKind(enum.Enum):
    CENTER = "Z"
    HYP = "Hyp"
    PAR_PLUS = "Par+"
    PAR_MINUS = "Par-"
    ELL = "Ell"


@dataclass(frozen=True)
class CoverRegion:
    kind: RegionKind
    n: int

    def __post_init__(self) -> None:
        if self.kind is RegionKind.ELL and self.n == 0:
            raise ValueError("Ell(0) is empty")

    def __str__(self) -> str:
        return f"{self.kind.value}({self.n})"

    @classmethod
    def parse(cls, text: str) -> CoverRegion:
        name, _, rest = text.partition("(")
        return cls(RegionKind(name), int(rest.rstrip(")")))

    @property
    def interval(self) -> tuple[float, float]:
        """Open interval of twist values taken by lifts in this region.

        A central element has the single value ``2 pi n``; the degenerate
        interval ``(2 pi n, 2 pi n)`` is returned for it.
        """
        n = self.n
        pi = math.pi
        if self.kind is RegionKind.CENTER:
            return (2 * n * pi, 2 * n * pi)
        if self.kind is RegionKind.HYP:
            return ((2 * n - 1) * pi, (2 * n + 1) * pi)
        if self.kind is RegionKind.PAR_PLUS:
            return (2 * n * pi, (2 * n + 1) * pi)
        if self.kind is RegionKind.PAR_MINUS:
            return ((2 * n - 1) * pi, 2 * n * pi)
        if n > 0:
            return ((2 * n - 2) * pi, 2 * n * pi)
        return (2 * n * pi, (2 * n + 2) * pi)


IDENTITY_REGION = CoverRegion(RegionKind.CENTER, 0)

ALLOWED_COMMUTATOR_REGIONS = frozenset(
    {
        IDENTITY_REGION,
        CoverRegion(RegionKind.HYP, -1),
        CoverRegion(RegionKind.HYP, 0),
        CoverRegion(RegionKind.HYP, 1),
        CoverRegion(RegionKind.ELL, -1),
        CoverRegion(RegionKind.ELL, 1),
        CoverRegion(RegionKind.PAR_PLUS, 0),
        CoverRegion(RegionKind.PAR_MINUS, 0),
        CoverRegion(RegionKind.PAR_PLUS, -1),
        CoverRegion(RegionKind.PAR_MINUS, 1),
    }
)


def _transport_term(m: Isometry, p: PlanePoint) -> float:
    """Frame rotation of parallel transport from ``p`` to ``m(p)``, plus pi.

    Returned as ``pi - 2 arg(q' + i)`` where ``q'`` is ``m(p)`` seen from ``p``
    normalised to ``i``; the argument always lies in (0, pi).
    """
    q = apply(m, p)
    qn = complex((q.x - p.x) / p.h, q.h / p.h)
    return math.pi - 2.0 * cmath.phase(qn + 1j)


def _branch(m: Isometry, p: PlanePoint) -> float:
    return cmath.phase(jacobian(m, p))


def twist_mod_2pi(m: Isometry, p: PlanePoint) -> float:
    """Twist of ``m`` at ``p`` reduced to (-pi, pi]."""
    return wrap_angle(_transport_term(m, p) - 2.0 * _branch(m, p))


def word_twist(factors: list[Isometry], p: PlanePoint) -> float:
    """Real twist at ``p`` of the product of principal lifts of ``factors``.

    ``factors`` is read left to right as a matrix product, so the last factor
    acts first. Evaluated in extended precision: thin configurations lose
    several digits in floats.
    """
    z0 = mp.mpc(p.x, p.h)
    z = z0
    branch = mp.mpf(0)
    for f in reversed(factors):
        branch += mp.arg(f.c * z + f.d)
        z = act(f, z)
    qn = (z - p.x) / p.h
    return float(mp.pi - 2 * mp.arg(qn + 1j) - 2 * branch)


def commutator_lift_twist(g: Isometry, h: Isometry, p: PlanePoint) -> float:
    """Real twist of the canonical lift of ``[g, h] = g h g^-1 h^-1`` at ``p``."""
    return word_twist([g, h, g.inverse(), h.inverse()], p)


def commutator_twist(g: Isometry, h: Isometry, p: PlanePoint) -> float:
    """Real twist of the canonical lift of ``[g^-1, h^-1]`` at ``p``."""
    return commutator_lift_twist(g.inverse(), h.inverse(), p)


def probe_point(m: Isometry) -> PlanePoint:
    """Deterministic evaluation point adapted to the type of ``m``."""
    kind = classify(m).kind
    if kind is Kind.ELLIPTIC:
        return elliptic_fixed_point(m)
    if kind is Kind.HYPERBOLIC:
        return foot_of_perpendicular(axis(m), I)
    if kind is Kind.PARABOLIC:
        return toward_boundary(parabolic_fixed_point(m), 1.0)
    return I


def region_of_twist(kind: Kind, twist: float) -> CoverRegion:
    """Region of a lift of a ``kind`` element whose twist somewhere is ``twist``."""
    if kind is Kind.IDENTITY:
        return CoverRegion(RegionKind.CENTER, round(twist / TAU))
    if kind is Kind.HYPERBOLIC:
        return CoverRegion(RegionKind.HYP, round(twist / TAU))
    if kind is Kind.PARABOLIC:
        n = round(twist / TAU)
        sign = RegionKind.PAR_PLUS if twist - n * TAU > 0 else RegionKind.PAR_MINUS
        return CoverRegion(sign, n)
    n = math.ceil(twist / TAU) if twist > 0 else math.floor(twist / TAU)
    return CoverRegion(RegionKind.ELL, n)


def classify_commutator(g: Isometry, h: Isometry) -> CoverRegion:
    """Region of the canonical lift of ``[g, h]``."""
    c = commutator(g, h)
    kind = classify(c).kind
    p = probe_point(c)
    return region_of_twist(kind, commutator_lift_twist(g, h, p))


def lift_into_region(residue: float, region: CoverRegion, eps: float = EPS_TW) -> float:
    """Unique real lift of a twist residue inside ``region``'s interval."""
    lo, hi = region.interval
    if region.kind is RegionKind.CENTER:
        return lo
    k = math.ceil((lo - residue) / TAU)
    value = residue + k * TAU
    if value - lo < eps or hi - value < eps:
        raise AmbiguousNearBoundary(
            f"twist residue {residue} is within {eps} of an end of {region}"
        )
    return value
