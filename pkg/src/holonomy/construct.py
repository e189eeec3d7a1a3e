"""Basepoint selection: turn a non-virtually-abelian pair into a simple pentagon.

Dispatch is on the commutator trace. Each case picks a basis (tracked as a
:class:`MoveWord`) and a basepoint, builds the pentagon and verifies it before
returning.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

from .charvar import (
    CONJUGATE,
    INVERT_G,
    SWAP_XY,
    BasisMove,
    MoveWord,
    apply_word,
    character_of,
    in_V,
    markoff_normalize,
)
from .cover import CoverRegion, classify_commutator, commutator_twist
from ._exact import act, mp
from .errors import (
    ConstructionFailed,
    HolonomyError,
    InvalidInput,
    NumericOverflow,
    SharedFixedPoint,
)
from .moebius import (
    EPS_TR,
    TAU,
    BoundaryPoint,
    I,
    Isometry,
    Kind,
    PlanePoint,
    Geodesic,
    apply,
    apply_boundary,
    axis,
    classify,
    commutator,
    cross_ratio,
    direction,
    distance,
    elliptic_fixed_point,
    exp_point,
    foot_of_perpendicular,
    hyperbolic_fixed_points,
    intersect,
    parabolic_fixed_point,
    perpendicular_offset,
    toward_boundary,
)
from .pentagon import (
    Orientation,
    Pentagon,
    angle_sum,
    build_pentagon,
    build_pentagon_exact,
    check_identifications,
    is_simple,
    signed_area,
)

log = logging.getLogger(__name__)

VERIFY_TOL = 1e-6
CUSP_SAMPLES = 50
HALVINGS = 60
DIRECTIONS = 72
RECENTRE_DEPTH = 6


class CaseTag(enum.Enum):
    HYP_NEG = "HypNeg"
    PAR_NEG = "ParNeg"
    ELLIPTIC = "Elliptic"
    REDUCIBLE = "ReducibleNonAbelian"
    HYP_POS_I = "HypPos(i)"
    HYP_POS_II = "HypPos(ii)"
    HYP_POS_III = "HypPos(iii)"


@dataclass(frozen=True)
class ConstructOptions:
    offset: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class NotHolonomy:
    reason: str  # "Abelian" or "VirtuallyAbelian"


@dataclass(frozen=True)
class ConstructionResult:
    case_tag: CaseTag
    word: MoveWord
    g_eff: Isometry
    h_eff: Isometry
    basepoint: PlanePoint
    pentagon: Pentagon
    corner_angle: float
    corner_order: float
    orientation: Orientation
    commutator_region: CoverRegion
    twist: float
    signed_area: float
    angle_sum: float


def _attempt(
    tag: CaseTag, word: MoveWord, g: Isometry, h: Isometry, p: PlanePoint
) -> ConstructionResult | None:
    """Build and verify; ``None`` when the pentagon at ``p`` is not usable."""
    try:
        P = build_pentagon(g, h, p)
        if not is_simple(P):
            return None
        twist = commutator_twist(g, h, p)
        area = signed_area(P)
        total = angle_sum(P)
    except (ArithmeticError, HolonomyError) as exc:
        log.debug("basepoint %s rejected: %s", p, exc)
        return None
    theta = 3.0 * math.pi - abs(twist)
    if not 0.0 < theta < 3.0 * math.pi:
        return None
    if abs(theta - total) > VERIFY_TOL or abs(abs(area) + theta - 3.0 * math.pi) > VERIFY_TOL:
        log.debug("angle/twist mismatch at %s: %s vs %s", p, theta, total)
        return None
    if not check_identifications(g, h, P):
        return None
    return ConstructionResult(
        case_tag=tag,
        word=word,
        g_eff=g,
        h_eff=h,
        basepoint=p,
        pentagon=P,
        corner_angle=theta,
        corner_order=theta / TAU - 0.5,
        orientation=Orientation.LEFT if twist > 0 else Orientation.RIGHT,
        commutator_region=classify_commutator(g, h),
        twist=twist,
        signed_area=area,
        angle_sum=total,
    )


def case_hyp_neg(g: Isometry, h: Isometry, offset: float = 0.0) -> ConstructionResult:
    line = axis(commutator(g.inverse(), h.inverse()))
    p = foot_of_perpendicular(line, I)
    if offset:
        p = perpendicular_offset(line, p, offset)
    res = _attempt(CaseTag.HYP_NEG, MoveWord(), g, h, p)
    if res is None:
        raise ConstructionFailed(f"offset {offset} leaves no simple pentagon")
    return res


def cusp_basepoints(g: Isometry, h: Isometry, count: int = CUSP_SAMPLES):
    cusp = parabolic_fixed_point(commutator(g.inverse(), h.inverse()))
    for s in range(1, count + 1):
        yield s, toward_boundary(cusp, float(s))


def case_par_neg(g: Isometry, h: Isometry) -> ConstructionResult:
    for s, p in cusp_basepoints(g, h):
        res = _attempt(CaseTag.PAR_NEG, MoveWord(), g, h, p)
        if res is not None:
            log.debug("cusp sample %d accepted", s)
            return res
    raise ConstructionFailed("no simple pentagon along the ray to the cusp")


def _longest_run(flags: list[bool]) -> tuple[int, int] | None:
    """(start, length) of the longest cyclic run of ``True``."""
    n = len(flags)
    if all(flags):
        return 0, n
    best = None
    start = next(k for k in range(n) if not flags[k]) + 1
    k = 0
    while k < n:
        i = (start + k) % n
        if flags[i]:
            length = 0
            while length < n and flags[(i + length) % n]:
                length += 1
            if best is None or length > best[1]:
                best = (i, length)
            k += length
        else:
            k += 1
    return best


def case_elliptic(g: Isometry, h: Isometry) -> ConstructionResult:
    r = elliptic_fixed_point(commutator(g.inverse(), h.inverse()))
    eps0 = 0.1 * distance(r, apply(h, r))
    base = direction(r, apply(h, r))
    angles = [base + TAU * k / DIRECTIONS for k in range(DIRECTIONS)]
    for i in range(HALVINGS + 1):
        eps = eps0 * 0.5**i
        points = [exp_point(r, a, eps) for a in angles]
        flags = [is_simple(build_pentagon(g, h, q)) for q in points]
        run = _longest_run(flags)
        if run is None:
            continue
        start, length = run
        mid = (start + length // 2) % DIRECTIONS
        res = _attempt(CaseTag.ELLIPTIC, MoveWord(), g, h, points[mid])
        if res is not None:
            return res
    raise ConstructionFailed("no simple pentagon near the elliptic fixed point")


def _frame(at_infinity: BoundaryPoint, at_zero: BoundaryPoint) -> Isometry:
    """An isometry sending ``at_infinity`` to infinity and ``at_zero`` to 0."""
    u1, v1, u0, v0 = at_infinity.u, at_infinity.v, at_zero.u, at_zero.v
    if u1 * v0 - u0 * v1 < 0:
        u0, v0 = -u0, -v0
    return Isometry(u1, u0, v1, v0).inverse()


def _attracting(m: Isometry, pt: BoundaryPoint) -> bool:
    return hyperbolic_fixed_points(m)[1].isclose(pt, 1e-6)


def case_reducible(g: Isometry, h: Isometry) -> ConstructionResult:
    word = MoveWord()
    kg, kh = classify(g).kind, classify(h).kind
    if kg is Kind.HYPERBOLIC and kh is Kind.PARABOLIC:
        word += SWAP_XY
        g, h = h, g
        kg, kh = kh, kg
    invert_h = MoveWord((BasisMove.INVERT_H,))
    if kg is Kind.PARABOLIC:
        shared = parabolic_fixed_point(g)
        if not _attracting(h, shared):
            word += invert_h
            h = h.inverse()
        other = hyperbolic_fixed_points(h)[0]
        c = _frame(shared, other)
        t = c @ g @ c.inverse()
        shift = t.b / t.d
        if shift < 0:
            word += INVERT_G
            g = g.inverse()
            shift = -shift
        c = Isometry.dilation(1.0 / shift) @ c
        p = apply(c.inverse(), PlanePoint(0.5, 1.0))
        tag = CaseTag.REDUCIBLE
    else:
        rg, ag = hyperbolic_fixed_points(g)
        rh, ah = hyperbolic_fixed_points(h)
        shared = ag if ag.isclose(ah, 1e-6) or ag.isclose(rh, 1e-6) else rg
        if not _attracting(g, shared):
            word += INVERT_G
            g = g.inverse()
        if not _attracting(h, shared):
            word += invert_h
            h = h.inverse()
        c = _frame(shared, hyperbolic_fixed_points(g)[0])
        t = c @ h @ c.inverse()
        if t.b / t.d < 0:
            word += SWAP_XY
            g, h = h, g
            c = _frame(shared, hyperbolic_fixed_points(g)[0])
            t = c @ h @ c.inverse()
        e = t.a / t.d
        c = Isometry.dilation(e / (t.b / t.d)) @ c
        p = apply(c.inverse(), PlanePoint(e / (1.0 - e), 1.0))
        tag = CaseTag.REDUCIBLE
    res = _attempt(tag, word, g, h, p)
    if res is None:
        raise ConstructionFailed("normal-form basepoint did not give a simple pentagon")
    return res


def _positive(m: Isometry) -> Isometry:
    return -m if m.trace < 0 else m


def _axis_order(g: Isometry, h: Isometry) -> tuple[str, ...]:
    try:
        crossing = cross_ratio(g, h) > 1.0
    except SharedFixedPoint:
        crossing = False
    return ("i", "ii", "iii") if crossing else ("ii", "iii", "i")


def _moved(m: Isometry, line: Geodesic) -> Geodesic:
    return Geodesic(apply_boundary(m, line.start), apply_boundary(m, line.end))


def _candidate_exact(name: str, g: Isometry, h: Isometry):
    """``(tag, p)`` with ``p`` kept in extended precision, or ``None``.

    Conjugate axes are taken as images of axes rather than axes of products,
    which keeps large pairs from losing their determinant.
    """
    gi, hi = g.inverse(), h.inverse()
    if name == "i":
        first = axis(g @ h)
        r = intersect(first, _moved(gi, first))
        movers, tag = (gi, hi), CaseTag.HYP_POS_I
    elif name == "ii":
        r = intersect(axis(g), _moved(hi, axis(g)))
        movers, tag = (hi,), CaseTag.HYP_POS_II
    else:
        r = intersect(axis(h), _moved(gi, axis(h)))
        movers, tag = (h, gi, hi), CaseTag.HYP_POS_III
    if r is None:
        return None
    z = mp.mpc(r.x, r.h)
    for m in movers:
        z = act(m, z)
    return tag, z


def _plane(z) -> PlanePoint:
    try:
        return PlanePoint(float(z.real), float(z.imag))
    except InvalidInput as exc:
        raise NumericOverflow(str(exc)) from None


def _candidate(name: str, g: Isometry, h: Isometry) -> tuple[CaseTag, PlanePoint] | None:
    found = _candidate_exact(name, g, h)
    if found is None:
        return None
    return found[0], _plane(found[1])


def hyp_pos_candidates(g: Isometry, h: Isometry):
    """Candidate ``(tag, p)`` basepoints for a pair with all traces above 2.

    The arrangement picked out by the cross ratio goes first; the others
    follow as fallbacks. Candidates whose construction underflows are skipped.
    """
    for name in _axis_order(g, h):
        try:
            found = _candidate(name, g, h)
        except (ArithmeticError, HolonomyError) as exc:
            log.debug("candidate %s skipped: %s", name, exc)
            continue
        if found is not None:
            yield found


def _depth(zs) -> float:
    """How far the lowest of ``zs`` sits below height one, in log units."""
    return -min(mp.log(z.imag) for z in zs)


def recentring_word(g: Isometry, h: Isometry, zs, depth: int = RECENTRE_DEPTH) -> str:
    """Reduced word ``w`` in ``g, h`` that lifts the image of ``zs`` highest.

    Only the lowest point matters, since heights are bounded below but not
    above. Letters are ``g, G, h, H`` with capitals for inverses; the empty
    word wins ties, and otherwise words are compared by length then spelling.
    """
    letters = {"g": g, "G": g.inverse(), "h": h, "H": h.inverse()}
    inverse = {"g": "G", "G": "g", "h": "H", "H": "h"}
    best, best_score = "", _depth(zs)
    layer = [("", list(zs))]
    for _ in range(depth):
        nxt = []
        for word, pts in layer:
            for c in "gGhH":
                if word and inverse[c] == word[0]:
                    continue
                moved = [act(letters[c], z) for z in pts]
                nxt.append((c + word, moved))
                score = _depth(moved)
                if score < best_score - 1e-9:
                    best, best_score = c + word, score
        layer = nxt
    return best


def _recentred(word: MoveWord, g: Isometry, h: Isometry):
    """Retry the candidates after conjugating the basis by a group element.

    Conjugating by ``w`` moves axes, basepoint and pentagon by ``w`` and keeps
    the character, so each recipe is unchanged; only the pentagon's position
    changes, which matters when it sits too close to the boundary for floats.
    """
    g2, h2 = _positive_pair(apply_word(word, g, h))
    for name in _axis_order(g2, h2):
        try:
            found = _candidate_exact(name, g2, h2)
            if found is None:
                continue
            tag, z = found
            P = build_pentagon_exact(g2, h2, z)
            w = recentring_word(g2, h2, P)
        except (ArithmeticError, HolonomyError) as exc:
            log.debug("recentring %s skipped: %s", name, exc)
            continue
        if not w:
            continue
        conj = MoveWord()
        for c in w:
            conj += CONJUGATE[c]
        full = word + conj
        try:
            g3, h3 = _positive_pair(apply_word(full, g, h))
            p = _candidate(name, g3, h3)
        except (ArithmeticError, HolonomyError) as exc:
            log.debug("recentred candidate %s skipped: %s", name, exc)
            continue
        if p is None:
            continue
        res = _attempt(tag, full, g3, h3, p[1])
        if res is not None:
            log.debug("recentred by %s", w)
            return res
    return None


def _positive_pair(pair: tuple[Isometry, Isometry]) -> tuple[Isometry, Isometry]:
    return _positive(pair[0]), _positive(pair[1])


def case_hyp_pos(g: Isometry, h: Isometry) -> ConstructionResult:
    _, word = markoff_normalize(character_of(g, h))
    g2, h2 = _positive_pair(apply_word(word, g, h))
    for tag, p in hyp_pos_candidates(g2, h2):
        res = _attempt(tag, word, g2, h2, p)
        if res is not None:
            return res
    res = _recentred(word, g, h)
    if res is not None:
        return res
    raise ConstructionFailed("none of the axis-intersection basepoints worked")


def construct(
    g: Isometry, h: Isometry, opts: ConstructOptions | None = None
) -> ConstructionResult | NotHolonomy:
    opts = opts or ConstructOptions()
    c = commutator(g, h)
    if c.is_identity():
        return NotHolonomy("Abelian")
    if in_V(character_of(g, h)):
        return NotHolonomy("VirtuallyAbelian")
    t = c.trace
    if t < -2.0 - EPS_TR:
        return case_hyp_neg(g, h, opts.offset)
    if t <= -2.0 + EPS_TR:
        return case_par_neg(g, h)
    if t < 2.0 - EPS_TR:
        return case_elliptic(g, h)
    if t <= 2.0 + EPS_TR:
        return case_reducible(g, h)
    return case_hyp_pos(g, h)
