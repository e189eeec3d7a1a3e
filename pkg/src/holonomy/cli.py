"""Command-line entry point: ``holonomy classify|normalize|construct|render|selftest``.

Input is one JSON document (``--in`` or standard input) validated against
``input.schema.json``. Exit codes: 0 success, 2 mathematical rejection of a
valid input, 3 invalid input, 4 internal numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from importlib import resources

import jsonschema

from .charvar import (
    CharacterTriple,
    character_of,
    classify_pair,
    in_V,
    is_reducible,
    kappa,
    kappa_regime,
    markoff_descent,
    realize,
)
from .construct import ConstructionResult, ConstructOptions, NotHolonomy, construct
from .cover import classify_commutator
from .errors import DepthTooLarge, HolonomyError, InV, InvalidInput, KappaTooSmall
from .moebius import Isometry, PlanePoint, commutator
from .render import Model, Scene, render_developing, render_pentagon

log = logging.getLogger("holonomy")

EXIT_OK = 0
EXIT_REJECTED = 2
EXIT_INVALID = 3
EXIT_INTERNAL = 4

DET_TOL = 1e-6


class UsageError(Exception):
    """Bad command line or input document."""


class Rejected(Exception):
    """A valid input the mathematics turns down; carries the JSON reason."""

    def __init__(self, report: dict) -> None:
        super().__init__(report.get("reason", ""))
        self.report = report


@dataclass
class Request:
    g: Isometry | None
    h: Isometry | None
    triple: CharacterTriple | None
    offset: float
    depth: int
    model: Model
    seed: int
    realize: bool
    style: dict


def _schema() -> dict:
    text = resources.files("holonomy").joinpath("input.schema.json").read_text("utf-8")
    return json.loads(text)


def _reject_constant(name: str):
    raise ValueError(f"{name} is not a JSON number")


def _load(raw: bytes) -> dict:
    try:
        doc = json.loads(raw.decode("utf-8"), parse_constant=_reject_constant)
    except (UnicodeDecodeError, ValueError, RecursionError) as exc:
        raise UsageError(f"malformed JSON: {exc}") from None
    try:
        jsonschema.validate(doc, _schema())
    except jsonschema.ValidationError as exc:
        raise UsageError(f"input does not match the schema: {exc.message}") from None
    return doc


def _matrix(rows) -> Isometry:
    (a, b), (c, d) = rows
    vals = [float(v) for v in (a, b, c, d)]
    if not all(math.isfinite(v) for v in vals):
        raise InvalidInput("matrix entries must be finite")
    m = Isometry(*vals)
    det = m.a * m.d - m.b * m.c
    if not abs(det - 1.0) <= DET_TOL:
        raise InvalidInput(f"matrix does not normalise to determinant one ({det})")
    return m


def _request(doc: dict, args: argparse.Namespace) -> Request:
    opts = doc.get("options", {})
    g = h = triple = None
    if "g" in doc:
        g, h = _matrix(doc["g"]), _matrix(doc["h"])
    else:
        t = doc["triple"]
        triple = CharacterTriple(float(t["x"]), float(t["y"]), float(t["z"]))
        if not all(math.isfinite(c) for c in triple):
            raise InvalidInput("triple entries must be finite")

    def pick(flag, key, default):
        value = getattr(args, flag, None)
        return value if value is not None else opts.get(key, default)

    offset = float(pick("offset", "offset", 0.0))
    if not math.isfinite(offset):
        raise InvalidInput("offset must be finite")
    return Request(
        g=g,
        h=h,
        triple=triple,
        offset=offset,
        depth=int(pick("depth", "depth", 0)),
        model=Model(pick("model", "model", "halfplane")),
        seed=int(pick("seed", "seed", 0)),
        realize=bool(args.realize or opts.get("realize", False)),
        style=opts.get("style", {}),
    )


def _pair(req: Request) -> tuple[Isometry, Isometry]:
    if req.g is not None:
        return req.g, req.h
    if not req.realize:
        raise UsageError("this command needs matrices; pass --realize to build them from the triple")
    return realize(req.triple)


def _rows(m: Isometry) -> list[list[float]]:
    return [[m.a, m.b], [m.c, m.d]]


def _triple(t: CharacterTriple) -> list[float]:
    return [t.x, t.y, t.z]


# -- commands -----------------------------------------------------------------


def cmd_classify(req: Request) -> dict:
    if req.g is None and not req.realize:
        t = req.triple
        k = kappa(t)
        if in_V(t):
            case = "VirtuallyAbelianNonAbelian"
        elif is_reducible(t):
            case = "ReducibleNonAbelian"
        else:
            case = kappa_regime(k).value
        return {
            "kappa": k,
            "case": case,
            "commutator_region": None,
            "in_V": in_V(t),
            "reducible": is_reducible(t),
            "abelian": None,
        }
    g, h = _pair(req)
    t = character_of(g, h)
    cls = classify_pair(g, h)
    return {
        "kappa": commutator(g, h).trace,
        "case": cls.tag,
        "commutator_region": str(classify_commutator(g, h)),
        "in_V": in_V(t),
        "reducible": is_reducible(t),
        "abelian": commutator(g, h).is_identity(),
    }


def cmd_normalize(req: Request) -> dict:
    t = req.triple if req.triple is not None else character_of(req.g, req.h)
    try:
        out, word, steps = markoff_descent(t)
    except InV:
        raise Rejected({"reason": "in V"}) from None
    except KappaTooSmall:
        raise Rejected({"reason": "kappa ≤ 2", "kappa": kappa(t)}) from None
    return {
        "input_triple": _triple(t),
        "output_triple": _triple(out),
        "kappa": kappa(out),
        "word": word.to_json(),
        "iterations": steps,
    }


def _construct(req: Request) -> ConstructionResult:
    g, h = _pair(req)
    res = construct(g, h, ConstructOptions(offset=req.offset, seed=req.seed))
    if isinstance(res, NotHolonomy):
        raise Rejected({"reason": res.reason})
    return res


def cmd_construct(req: Request) -> dict:
    res = _construct(req)
    return {
        "case": res.case_tag.value,
        "theta": res.corner_angle,
        "corner_order": res.corner_order,
        "orientation": res.orientation.value,
        "commutator_region": str(res.commutator_region),
        "twist": res.twist,
        "signed_area": res.signed_area,
        "angle_sum": res.angle_sum,
        "basepoint": [res.basepoint.x, res.basepoint.h],
        "vertices": [[v.x, v.h] for v in res.pentagon.vertices],
        "word": res.word.to_json(),
        "g_eff": _rows(res.g_eff),
        "h_eff": _rows(res.h_eff),
        "seed": req.seed,
        "verified": True,
    }


def cmd_render(req: Request) -> tuple[str, int]:
    scene = Scene(model=req.model, depth=req.depth, style=req.style)
    res = _construct(req)
    if req.depth == 0:
        return render_pentagon(res, scene), 1
    return render_developing(res, scene)


def _selftest_cases():
    """Fixtures with known answers; each yields ``(name, passed)``."""
    ok = Isometry(2.0, 1.0, 1.0, 1.0)
    markoff = (Isometry(1.0, 1.0, 1.0, 2.0), Isometry(1.0, -1.0, -1.0, 2.0))
    yield "classify (3,3,3)", classify_pair(*markoff).tag == "AtMinus2"
    yield "abelian pair", isinstance(construct(ok, ok @ ok), NotHolonomy)
    half_i = Isometry.rotation(math.pi)
    half_2i = Isometry.rotation(math.pi, PlanePoint(0.0, 2.0))
    v = construct(half_i, half_2i)
    yield "virtually abelian pair", isinstance(v, NotHolonomy) and v.reason == "VirtuallyAbelian"
    r = construct(*markoff)
    yield "(3,3,3) cusp", isinstance(r, ConstructionResult) and r.case_tag.value == "ParNeg"
    for src, want in (((0, 1, 3), (3, 3, 8)), ((-3, -3, -3), (3, 3, 12)), ((2, 2, 3), (3, 4, 10))):
        out, _, _ = markoff_descent(CharacterTriple(*map(float, src)))
        yield f"normalize {src}", sorted(out) == sorted(map(float, want))
    for t in ((3.0, 3.0, 4.0), (2.0, 2.0, 3.0), (3.0, 3.0, 6.5)):
        res = construct(*realize(CharacterTriple(*t)))
        yield f"construct {t}", isinstance(res, ConstructionResult)


def cmd_selftest(_req: Request | None = None) -> dict:
    results = []
    for name, passed in _selftest_cases():
        results.append({"name": name, "passed": bool(passed)})
    failed = [r["name"] for r in results if not r["passed"]]
    return {"passed": len(results) - len(failed), "failed": failed, "cases": results}


# -- plumbing -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--in", dest="infile", metavar="FILE", help="input JSON (default: stdin)")
    common.add_argument("--out", metavar="FILE", help="output file (default: stdout)")
    common.add_argument("--depth", type=int, help="maximum word length for render (0..8)")
    common.add_argument("--model", choices=[m.value for m in Model])
    common.add_argument("--offset", type=float, help="HypNeg basepoint offset from the axis")
    common.add_argument("--seed", type=int)
    common.add_argument(
        "--realize", action="store_true", help="build matrices from a triple input"
    )
    parser = _Parser(prog="holonomy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("classify", "normalize", "construct", "render", "selftest"):
        sub.add_parser(name, parents=[common])
    return parser


def _configure_logging() -> None:
    level = os.environ.get("HOLONOMY_LOG", "").upper()
    if not level:
        return
    value = logging.getLevelName(level)
    if not isinstance(value, int):
        value = logging.DEBUG if level.isdigit() and int(level) > 0 else logging.WARNING
    logging.basicConfig(stream=sys.stderr, level=value, format="%(levelname)s %(name)s: %(message)s")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_input(path: str | None, stdin) -> bytes:
    if path:
        try:
            with open(path, "rb") as fh:
                return fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc}") from None
    return stdin.buffer.read() if hasattr(stdin, "buffer") else stdin.read().encode()


def run(argv: list[str] | None = None, stdin=None) -> int:
    stdin = stdin or sys.stdin
    _configure_logging()
    out = None
    try:
        args = build_parser().parse_args(argv)
        out = args.out
        if args.command == "selftest":
            report = cmd_selftest()
            _emit(json.dumps(report, indent=2) + "\n", out)
            return EXIT_OK if not report["failed"] else EXIT_INTERNAL
        req = _request(_load(_read_input(args.infile, stdin)), args)
        if args.command == "render":
            svg, tiles = cmd_render(req)
            _emit(svg, out)
            print(f"tiles: {tiles}", file=sys.stderr)
            return EXIT_OK
        handler = {"classify": cmd_classify, "normalize": cmd_normalize, "construct": cmd_construct}
        report = handler[args.command](req)
        _emit(json.dumps(report, indent=2, ensure_ascii=False) + "\n", out)
        return EXIT_OK
    except Rejected as exc:
        _emit(json.dumps(exc.report, ensure_ascii=False) + "\n", out)
        return EXIT_REJECTED
    except (UsageError, InvalidInput, DepthTooLarge, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (HolonomyError, ArithmeticError) as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # never let a traceback escape the command line
        log.debug("unexpected failure", exc_info=True)
        print(f"internal failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
