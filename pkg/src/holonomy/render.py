"""Deterministic SVG pictures of a construction and of its developing map.

Everything is emitted by hand with fixed six-decimal formatting and a fixed
element order, so identical inputs give byte-identical documents.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from xml.sax.saxutils import quoteattr

from ._exact import act, mp
from .errors import DepthTooLarge, HolonomyError
from .moebius import (
    BoundaryPoint,
    Isometry,
    Kind,
    PlanePoint,
    axis,
    classify,
    commutator,
)
from .pentagon import Pentagon

MAX_DEPTH = 8
FLATTEN_PX = 0.25
LETTERS = "gGhH"
INVERSE_LETTER = {"g": "G", "G": "g", "h": "H", "H": "h"}


class Model(enum.Enum):
    HALF_PLANE = "halfplane"
    DISC = "disc"


DEFAULT_VIEWPORTS = {
    Model.HALF_PLANE: (-4.0, 4.0, 0.0, 4.0),
    Model.DISC: (-1.05, 1.05, -1.05, 1.05),
}

DEFAULT_STYLE = {
    "frame": {"fill": "none", "stroke": "#888888", "stroke-width": "1"},
    "edge": {"fill": "none", "stroke": "#1f3b73", "stroke-width": "1.5"},
    "boundary": {"fill": "none", "stroke": "#1f3b73", "stroke-width": "4"},
    "axis": {
        "fill": "none",
        "stroke": "#b03a2e",
        "stroke-width": "1",
        "stroke-dasharray": "6 4",
    },
    "tile": {"fill": "none", "stroke": "#5d6d7e", "stroke-width": "0.75"},
    "vertex": {"fill": "#000000", "r": "3"},
    "label": {"font-family": "sans-serif", "font-size": "14"},
}


@dataclass(frozen=True)
class Scene:
    model: Model = Model.HALF_PLANE
    viewport: tuple[float, float, float, float] | None = None
    style: dict = field(default_factory=dict)
    depth: int = 0
    width: int = 1000
    height: int = 1000

    def __post_init__(self) -> None:
        if not 0 <= self.depth <= MAX_DEPTH:
            raise DepthTooLarge(f"depth {self.depth} is outside 0..{MAX_DEPTH}")
        if self.viewport is None:
            object.__setattr__(self, "viewport", DEFAULT_VIEWPORTS[self.model])

    def style_for(self, role: str) -> dict:
        merged = dict(DEFAULT_STYLE[role])
        merged.update(self.style.get(role, {}))
        return merged

    @property
    def scale(self) -> float:
        x0, x1, y0, y1 = self.viewport
        return min(self.width / (x1 - x0), self.height / (y1 - y0))

    def to_pixels(self, w: complex) -> tuple[float, float]:
        x0, _, y0, _ = self.viewport
        s = self.scale
        return (w.real - x0) * s, self.height - (w.imag - y0) * s

    def contains(self, w: complex) -> bool:
        x0, x1, y0, y1 = self.viewport
        return x0 <= w.real <= x1 and y0 <= w.imag <= y1


# -- model coordinates ------------------------------------------------------


def cayley(z: complex) -> complex:
    """Half-plane to disc: ``w = (z - i) / (z + i)``."""
    return (z - 1j) / (z + 1j)


def to_model(p: PlanePoint, model: Model) -> complex:
    z = complex(p.x, p.h)
    return cayley(z) if model is Model.DISC else z


def _boundary_to_model(b: BoundaryPoint, model: Model) -> complex | None:
    """Model position of a point at infinity; ``None`` for the half-plane's ``oo``."""
    if b.v == 0.0:
        return 1.0 + 0j if model is Model.DISC else None
    x = b.u / b.v
    return cayley(complex(x, 0.0)) if model is Model.DISC else complex(x, 0.0)


def _circle_through(a: complex, b: complex, c: complex):
    """Centre and radius of the circle through three points, or ``None`` if collinear."""
    d = 2.0 * (a.real * (b.imag - c.imag) + b.real * (c.imag - a.imag) + c.real * (a.imag - b.imag))
    scale = max(abs(a - b), abs(b - c), abs(c - a)) ** 2
    if abs(d) <= 1e-12 * scale:
        return None
    na, nb, nc = abs(a) ** 2, abs(b) ** 2, abs(c) ** 2
    ux = (na * (b.imag - c.imag) + nb * (c.imag - a.imag) + nc * (a.imag - b.imag)) / d
    uy = (na * (c.real - b.real) + nb * (a.real - c.real) + nc * (b.real - a.real)) / d
    centre = complex(ux, uy)
    return centre, abs(a - centre)


def _mirror(w: complex, model: Model) -> complex | None:
    """A third point on the geodesic circle through ``w``: its reflection in the boundary."""
    if model is Model.HALF_PLANE:
        return w.conjugate()
    if abs(w) < 1e-12:
        return None
    return w / abs(w) ** 2


def _geodesic_circle(a: complex, b: complex, model: Model):
    if model is Model.HALF_PLANE and abs(a.real - b.real) <= 1e-12 * max(1.0, abs(a), abs(b)):
        return None
    third = _mirror(a, model) if abs(a) >= abs(b) else _mirror(b, model)
    if third is None:
        return None
    return _circle_through(a, b, third)


# -- svg primitives -----------------------------------------------------------


def fmt(v: float) -> str:
    if not math.isfinite(v):
        raise ValueError(f"non-finite coordinate {v}")
    text = f"{v:.6f}"
    return "0.000000" if text == "-0.000000" else text


def _attrs(style: dict, extra: dict | None = None) -> str:
    merged = dict(style)
    if extra:
        merged.update(extra)
    return "".join(f" {k}={quoteattr(str(merged[k]))}" for k in sorted(merged))


def _arc_path(a: complex, b: complex, model: Model, scene: Scene) -> str:
    """Path data for the geodesic arc from ``a`` to ``b`` (model coordinates)."""
    sx, sy = scene.to_pixels(a)
    ex, ey = scene.to_pixels(b)
    start = f"M {fmt(sx)} {fmt(sy)}"
    circle = _geodesic_circle(a, b, model)
    if circle is not None:
        centre, radius = circle
        r_px = radius * scene.scale
        chord = math.hypot(ex - sx, ey - sy)
        sagitta = chord * chord / (8.0 * r_px) if r_px > 0 else math.inf
        if sagitta > FLATTEN_PX and math.isfinite(r_px):
            cx, cy = scene.to_pixels(centre)
            cross = (ex - sx) * (cy - sy) - (ey - sy) * (cx - sx)
            sweep = 1 if cross > 0 else 0
            return f"{start} A {fmt(r_px)} {fmt(r_px)} 0 0 {sweep} {fmt(ex)} {fmt(ey)}"
    return f"{start} L {fmt(ex)} {fmt(ey)}"


def _full_geodesic(start: BoundaryPoint, end: BoundaryPoint, scene: Scene) -> str:
    model = scene.model
    a, b = _boundary_to_model(start, model), _boundary_to_model(end, model)
    if a is None or b is None:
        foot = b if a is None else a
        top = complex(foot.real, scene.viewport[3])
        pts = (top, foot) if a is None else (foot, top)
        (sx, sy), (ex, ey) = scene.to_pixels(pts[0]), scene.to_pixels(pts[1])
        return f"M {fmt(sx)} {fmt(sy)} L {fmt(ex)} {fmt(ey)}"
    (sx, sy), (ex, ey) = scene.to_pixels(a), scene.to_pixels(b)
    start = f"M {fmt(sx)} {fmt(sy)}"
    if model is Model.HALF_PLANE:
        # a semicircle, drawn over the top
        r_px = 0.5 * abs(ex - sx)
        sweep = 0 if sx < ex else 1
        return f"{start} A {fmt(r_px)} {fmt(r_px)} 0 0 {sweep} {fmt(ex)} {fmt(ey)}"
    mid = a + b
    if abs(mid) <= 1e-12:
        return f"{start} L {fmt(ex)} {fmt(ey)}"
    # circle orthogonal to the unit circle through two of its points
    centre = 2.0 * mid / abs(mid) ** 2
    r_px = abs(a - centre) * scene.scale
    cx, cy = scene.to_pixels(centre)
    cross = (ex - sx) * (cy - sy) - (ey - sy) * (cx - sx)
    sweep = 1 if cross > 0 else 0
    return f"{start} A {fmt(r_px)} {fmt(r_px)} 0 0 {sweep} {fmt(ex)} {fmt(ey)}"


def _frame(scene: Scene) -> str:
    style = _attrs(scene.style_for("frame"))
    if scene.model is Model.DISC:
        cx, cy = scene.to_pixels(0j)
        return f'<circle cx="{fmt(cx)}" cy="{fmt(cy)}" r="{fmt(scene.scale)}"{style}/>'
    x0, x1 = scene.viewport[0], scene.viewport[1]
    (sx, sy), (ex, ey) = scene.to_pixels(complex(x0, 0)), scene.to_pixels(complex(x1, 0))
    return f'<path d="M {fmt(sx)} {fmt(sy)} L {fmt(ex)} {fmt(ey)}"{style}/>'


def _document(scene: Scene, body: list[str]) -> str:
    w, h = scene.width, scene.height
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        _frame(scene),
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


# -- pictures -----------------------------------------------------------------


def _model_vertices(P: Pentagon, model: Model) -> list[complex]:
    return [to_model(v, model) for v in P.vertices]


def _pentagon_group(P: Pentagon, scene: Scene, labelled: bool) -> list[str]:
    pts = _model_vertices(P, scene.model)
    out = ['<g id="pentagon">']
    for k in range(5):
        role = "boundary" if k == 0 else "edge"
        d = _arc_path(pts[k], pts[(k + 1) % 5], scene.model, scene)
        out.append(f'<path class="edge e{k}" d="{d}"{_attrs(scene.style_for(role))}/>')
    if labelled:
        vstyle, lstyle = scene.style_for("vertex"), scene.style_for("label")
        for k, w in enumerate(pts):
            x, y = scene.to_pixels(w)
            out.append(f'<circle class="vertex" cx="{fmt(x)}" cy="{fmt(y)}"{_attrs(vstyle)}/>')
            out.append(
                f'<text x="{fmt(x + 6)}" y="{fmt(y - 6)}"{_attrs(lstyle)}>v{k}</text>'
            )
    out.append("</g>")
    return out


def _axes(result, scene: Scene) -> list[str]:
    g, h = result.g_eff, result.h_eff
    named = (
        ("g", g),
        ("h", h),
        ("commutator", commutator(g.inverse(), h.inverse())),
    )
    out = ['<g id="axes">']
    style = scene.style_for("axis")
    for name, m in named:
        if classify(m).kind is not Kind.HYPERBOLIC:
            continue
        line = axis(m)
        d = _full_geodesic(line.start, line.end, scene)
        out.append(f'<path class="axis axis-{name}" d="{d}"{_attrs(style)}/>')
    out.append("</g>")
    return out


def render_pentagon(result, scene: Scene | None = None) -> str:
    """The pentagon with dashed axes, a thick boundary edge and vertex labels."""
    scene = scene or Scene()
    body = _axes(result, scene) + _pentagon_group(result.pentagon, scene, True)
    return _document(scene, body)


def reduced_words(depth: int) -> list[str]:
    """Reduced words in ``g, G, h, H`` up to ``depth``, by length then spelling."""
    if depth > MAX_DEPTH:
        raise DepthTooLarge(f"depth {depth} exceeds {MAX_DEPTH}")
    words, layer = [""], [""]
    for _ in range(depth):
        layer = [
            w + c for w in layer for c in LETTERS if not (w and INVERSE_LETTER[c] == w[-1])
        ]
        words.extend(layer)
    return words


def word_matrix(word: str, g: Isometry, h: Isometry) -> Isometry:
    letters = {"g": g, "G": g.inverse(), "h": h, "H": h.inverse()}
    m = Isometry.identity()
    for c in word:
        m = m @ letters[c]
    return m


def developing_tiles(result, scene: Scene | None = None) -> list[tuple[str, Pentagon]]:
    """Images ``w(P)`` of the pentagon over reduced words ``w``, culled to the viewport.

    Images are computed letter by letter in extended precision, sharing work
    along word prefixes; a tile that leaves the representable half-plane is
    dropped like one outside the viewport.
    """
    scene = scene or Scene()
    g, h = result.g_eff, result.h_eff
    letters = {"g": g, "G": g.inverse(), "h": h, "H": h.inverse()}
    exact = {"": tuple(result.pentagon.exact)}
    tiles = []
    for word in reduced_words(scene.depth):
        if word:
            # w = u c acts as u(c(P)); extend from the suffix so images
            # of the shorter word are reused
            head, rest = word[0], word[1:]
            exact[word] = tuple(act(letters[head], z) for z in exact[rest])
        try:
            P = Pentagon.from_exact(exact[word]) if word else result.pentagon
        except HolonomyError:
            continue
        if any(scene.contains(w) for w in _model_vertices(P, scene.model)):
            tiles.append((word, P))
    return tiles


def render_developing(result, scene: Scene | None = None) -> tuple[str, int]:
    """Part of the developing map; returns the document and its tile count."""
    scene = scene or Scene()
    if scene.depth > MAX_DEPTH:
        raise DepthTooLarge(f"depth {scene.depth} exceeds {MAX_DEPTH}")
    tiles = developing_tiles(result, scene)
    body = ['<g id="tiles">']
    style = _attrs(scene.style_for("tile"))
    for word, P in tiles:
        if not word:
            continue
        pts = _model_vertices(P, scene.model)
        d = " ".join(
            _arc_path(pts[k], pts[(k + 1) % 5], scene.model, scene) for k in range(5)
        )
        body.append(f'<path class="tile" data-word="{word}" d="{d}"{style}/>')
    body.append("</g>")
    body += _pentagon_group(result.pentagon, scene, True)
    return _document(scene, body), len(tiles)


def _klein(z):
    x, y = z.real, z.imag
    r2 = x * x + y * y
    t = 1 + r2
    return 2 * x / t, (r2 - 1) / t


def _from_klein(a, b) -> PlanePoint:
    n = mp.sqrt(1 - a * a - b * b)
    t, a, b = 1 / n, a / n, b / n
    h = 1 / (t - b)
    return PlanePoint(float(a * h), float(h))


def contains(P: Pentagon, q: PlanePoint) -> bool:
    """Point location by crossing number in the Klein model, where geodesic
    polygons are straight-sided."""
    poly = [_klein(z) for z in P.exact]
    qx, qy = _klein(mp.mpc(q.x, q.h))
    inside = False
    for k in range(5):
        (ax, ay), (bx, by) = poly[k], poly[(k + 1) % 5]
        if (ay > qy) != (by > qy):
            x = ax + (qy - ay) * (bx - ax) / (by - ay)
            if x > qx:
                inside = not inside
    return inside


def interior_sample(P: Pentagon) -> list[PlanePoint]:
    """Centroids (in the Klein model) of vertex triangles that fall inside ``P``."""
    poly = [_klein(z) for z in P.exact]
    out = []
    for i in range(5):
        for j in range(i + 1, 5):
            for k in range(j + 1, 5):
                a = (poly[i][0] + poly[j][0] + poly[k][0]) / 3
                b = (poly[i][1] + poly[j][1] + poly[k][1]) / 3
                try:
                    q = _from_klein(a, b)
                except HolonomyError:
                    continue
                if contains(P, q):
                    out.append(q)
    return out
