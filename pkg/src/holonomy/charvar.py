"""Character triples ``(tr g, tr h, tr gh)`` and the moves between them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from ._exact import mp
from .errors import InV, InvalidInput, IterationCap, KappaTooSmall, NumericOverflow
from .moebius import EPS_TR, Isometry, commutator

ITERATION_CAP = 10**6


@dataclass(frozen=True)
class CharacterTriple:
    x: float
    y: float
    z: float

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __getitem__(self, k: int) -> float:
        return (self.x, self.y, self.z)[k]

    def isclose(self, other: CharacterTriple, tol: float = 1e-9) -> bool:
        return all(
            abs(a - b) <= tol * max(1.0, abs(a), abs(b)) for a, b in zip(self, other)
        )


def kappa(t: CharacterTriple) -> float:
    x, y, z = t
    return x * x + y * y + z * z - x * y * z - 2.0


def character_of(g: Isometry, h: Isometry) -> CharacterTriple:
    return CharacterTriple(g.trace, h.trace, (g @ h).trace)


def in_character_variety(t: CharacterTriple) -> bool:
    return kappa(t) >= 2.0 - EPS_TR or max(abs(c) for c in t) >= 2.0 - EPS_TR


def in_V(t: CharacterTriple) -> bool:
    zeros = [abs(c) <= EPS_TR for c in t]
    if sum(zeros) != 2:
        return False
    third = next(c for c, small in zip(t, zeros) if not small)
    return abs(third) > 2.0 + EPS_TR


def is_reducible(t: CharacterTriple) -> bool:
    return abs(kappa(t) - 2.0) <= EPS_TR


# -- moves --------------------------------------------------------------------


class BasisMove(enum.Enum):
    """Elementary automorphisms of the free group on ``g, h``.

    The three ``NEG_*`` moves change the SL(2,R) lift only: they negate the
    matrix of ``g``, of ``h``, or of both, which flips the sign of two traces.
    """

    INVERT_H = "InvertH"
    SWAP_GH = "SwapGH"
    MULT_RIGHT = "MultRight"
    NEG_XY = "NegXY"
    NEG_XZ = "NegXZ"
    NEG_YZ = "NegYZ"

    @property
    def is_sign_change(self) -> bool:
        return self.name.startswith("NEG")

    def on_triple(self, t: CharacterTriple) -> CharacterTriple:
        x, y, z = t
        if self is BasisMove.INVERT_H:
            return CharacterTriple(x, y, x * y - z)
        if self is BasisMove.SWAP_GH:
            return CharacterTriple(y, x, z)
        if self is BasisMove.MULT_RIGHT:
            return CharacterTriple(x, z, x * z - y)
        if self is BasisMove.NEG_XY:
            return CharacterTriple(-x, -y, z)
        if self is BasisMove.NEG_XZ:
            return CharacterTriple(-x, y, -z)
        return CharacterTriple(x, -y, -z)

    def on_pair(self, g: Isometry, h: Isometry) -> tuple[Isometry, Isometry]:
        if self is BasisMove.INVERT_H:
            return g, h.inverse()
        if self is BasisMove.SWAP_GH:
            return h, g
        if self is BasisMove.MULT_RIGHT:
            return g, g @ h
        if self is BasisMove.NEG_XY:
            return -g, -h
        if self is BasisMove.NEG_XZ:
            return -g, h
        return g, -h


@dataclass(frozen=True)
class MoveWord:
    """Moves applied left to right."""

    moves: tuple[BasisMove, ...] = ()

    def __add__(self, other: MoveWord) -> MoveWord:
        return MoveWord(self.moves + other.moves)

    def __len__(self) -> int:
        return len(self.moves)

    @property
    def sign_changes(self) -> tuple[BasisMove, ...]:
        return tuple(m for m in self.moves if m.is_sign_change)

    def on_triple(self, t: CharacterTriple) -> CharacterTriple:
        for m in self.moves:
            t = m.on_triple(t)
        return t

    def to_json(self) -> list[str]:
        return [m.value for m in self.moves]

    @classmethod
    def from_json(cls, names) -> MoveWord:
        return cls(tuple(BasisMove(n) for n in names))


def _mul(p, q):
    return (
        p[0] * q[0] + p[1] * q[2],
        p[0] * q[1] + p[1] * q[3],
        p[2] * q[0] + p[3] * q[2],
        p[2] * q[1] + p[3] * q[3],
    )


def _inv(p):
    return (p[3], -p[1], -p[2], p[0])


def _neg(p):
    return tuple(-e for e in p)


_ON_ENTRIES = {
    BasisMove.INVERT_H: lambda g, h: (g, _inv(h)),
    BasisMove.SWAP_GH: lambda g, h: (h, g),
    BasisMove.MULT_RIGHT: lambda g, h: (g, _mul(g, h)),
    BasisMove.NEG_XY: lambda g, h: (_neg(g), _neg(h)),
    BasisMove.NEG_XZ: lambda g, h: (_neg(g), h),
    BasisMove.NEG_YZ: lambda g, h: (g, _neg(h)),
}


def apply_word(w: MoveWord, g: Isometry, h: Isometry) -> tuple[Isometry, Isometry]:
    """Replay ``w`` on a pair; products are formed in extended precision.

    Long words (recentring conjugations run past a hundred moves) would
    otherwise lose most of the digits of large matrices.
    """
    if not w.moves:
        return g, h
    eg = tuple(mp.mpf(e) for e in (g.a, g.b, g.c, g.d))
    eh = tuple(mp.mpf(e) for e in (h.a, h.b, h.c, h.d))
    for m in w.moves:
        eg, eh = _ON_ENTRIES[m](eg, eh)
    try:
        return Isometry(*map(float, eg)), Isometry(*map(float, eh))
    except InvalidInput as exc:
        raise NumericOverflow(f"replayed pair is not representable: {exc}") from None


_M = BasisMove

# Triple-level operations compiled to elementary moves.
SWAP_XY = MoveWord((_M.SWAP_GH,))
SWAP_YZ = MoveWord((_M.MULT_RIGHT, _M.INVERT_H))
SWAP_XZ = SWAP_XY + SWAP_YZ + SWAP_XY
INVERT_G = MoveWord((_M.SWAP_GH, _M.INVERT_H, _M.SWAP_GH))

MARKOFF = {
    0: SWAP_XZ + MoveWord((_M.INVERT_H,)) + SWAP_XZ,
    1: SWAP_YZ + MoveWord((_M.INVERT_H,)) + SWAP_YZ,
    2: MoveWord((_M.INVERT_H,)),
}

SIGN_PAIR = {
    frozenset((0, 1)): _M.NEG_XY,
    frozenset((0, 2)): _M.NEG_XZ,
    frozenset((1, 2)): _M.NEG_YZ,
}

# Right multiplication of the second generator by the first: (g, h) -> (g, h g).
RIGHT_MULT = MoveWord((_M.INVERT_H,)) + INVERT_G + MoveWord((_M.MULT_RIGHT, _M.INVERT_H)) + INVERT_G

# Inner automorphisms: CONJUGATE[l] sends (g, h) to (l g l^-1, l h l^-1), with
# l in "g", "G" (g^-1), "h", "H" (h^-1) read off the current pair. Applying
# CONJUGATE[l1] then CONJUGATE[l2] conjugates by l1 l2. Characters are fixed.
_CONJ_G = MoveWord((_M.MULT_RIGHT,)) + INVERT_G + RIGHT_MULT + INVERT_G
CONJUGATE = {
    "g": _CONJ_G,
    "G": INVERT_G + _CONJ_G + INVERT_G,
    "h": SWAP_XY + _CONJ_G + SWAP_XY,
    "H": SWAP_XY + INVERT_G + _CONJ_G + INVERT_G + SWAP_XY,
}

# Word moving coordinate k into the x slot; each word is its own inverse on
# triples.
TO_FRONT = {0: MoveWord(), 1: SWAP_XY, 2: SWAP_XZ}


def markoff_normalize(t: CharacterTriple) -> tuple[CharacterTriple, MoveWord]:
    out, word, _ = markoff_descent(t)
    return out, word


def markoff_descent(t: CharacterTriple) -> tuple[CharacterTriple, MoveWord, int]:
    """Greedy descent to a triple with every coordinate greater than 2.

    Each step orders coordinates by absolute value, fixes signs so the two
    larger ones are non-negative, and replaces the smallest ``s`` by
    ``m l - s``. Replaying the returned word on ``t`` gives the output exactly.
    Also returns the number of substitutions made.
    """
    k = kappa(t)
    if in_V(t):
        raise InV(f"{t} lies in the virtually abelian set")
    if not k > 2.0 + EPS_TR:
        raise KappaTooSmall(f"kappa {k} does not exceed 2")
    moves: list[BasisMove] = []
    cur = t
    for step in range(ITERATION_CAP):
        order = sorted(range(3), key=lambda i: abs(cur[i]))
        s, m, l = order
        negative = [i for i in (m, l) if cur[i] < 0]
        if len(negative) == 2:
            flip = SIGN_PAIR[frozenset((m, l))]
        elif negative:
            flip = SIGN_PAIR[frozenset((s, negative[0]))]
        else:
            flip = None
        if flip is not None:
            moves.append(flip)
            cur = flip.on_triple(cur)
        if cur[s] > 2.0 + EPS_TR:
            return cur, MoveWord(tuple(moves)), step
        word = MARKOFF[s]
        moves.extend(word.moves)
        cur = word.on_triple(cur)
        if not all(math.isfinite(c) for c in cur):
            break
    raise IterationCap(f"normalization of {t} did not terminate")


# -- realization ------------------------------------------------------------


def _realize_front(x: float, y: float, z: float) -> tuple[Isometry, Isometry]:
    # g = [[x, -1], [1, 0]], h = [[p, q], [r, y - p]] with tr(gh) = z and
    # det h = 1; q and -r are the roots of T^2 - (z - xp) T + 1 - p(y - p).
    a2 = x * x - 4.0
    b1 = 4.0 * y - 2.0 * x * z
    c0 = z * z - 4.0
    if a2 > 1e-12:
        p = -b1 / (2.0 * a2)
        dmin = c0 - b1 * b1 / (4.0 * a2)
        p += math.sqrt(max(0.0, (1.0 - dmin) / a2))
    elif a2 < -1e-12:
        p = -b1 / (2.0 * a2)
    else:
        p = (1.0 - c0) / b1 if abs(b1) > 1e-12 else 0.0
    disc = a2 * p * p + b1 * p + c0
    scale = max(1.0, abs(a2 * p * p), abs(b1 * p), abs(c0))
    if disc < -1e-9 * scale:
        raise InvalidInput(f"({x}, {y}, {z}) is not the character of a real pair")
    root = math.sqrt(max(disc, 0.0))
    s = z - x * p
    q = 0.5 * (s + root)
    r = -0.5 * (s - root)
    return Isometry(x, -1.0, 1.0, 0.0), Isometry(p, q, r, y - p)


def realize(t: CharacterTriple) -> tuple[Isometry, Isometry]:
    """A pair of SL(2,R) matrices whose character is ``t``."""
    if not all(math.isfinite(c) for c in t):
        raise InvalidInput(f"non-finite triple {t}")
    if not in_character_variety(t):
        raise InvalidInput(f"{t} is not the character of a real pair")
    big = max(range(3), key=lambda i: abs(t[i]))
    if abs(t[big]) > 2.0 + 1e-6:
        front = big
    else:
        front = min(range(3), key=lambda i: abs(t[i]))
    word = TO_FRONT[front]
    g, h = _realize_front(*word.on_triple(t))
    return apply_word(word, g, h)


# -- pair classification ----------------------------------------------------


class PairKind(enum.Enum):
    ABELIAN = "Abelian"
    VIRTUALLY_ABELIAN = "VirtuallyAbelianNonAbelian"
    REDUCIBLE = "ReducibleNonAbelian"
    GENERIC = "Generic"


class Regime(enum.Enum):
    BELOW_MINUS_2 = "BelowMinus2"
    AT_MINUS_2 = "AtMinus2"
    BETWEEN = "Between"
    ABOVE_2 = "Above2"


@dataclass(frozen=True)
class PairClass:
    kind: PairKind
    regime: Regime | None = None

    @property
    def tag(self) -> str:
        """The regime for generic pairs, otherwise the kind."""
        return self.kind.value if self.regime is None else self.regime.value

    def __str__(self) -> str:
        if self.regime is None:
            return self.kind.value
        return f"{self.kind.value}({self.regime.value})"


def kappa_regime(k: float) -> Regime:
    if k < -2.0 - EPS_TR:
        return Regime.BELOW_MINUS_2
    if k <= -2.0 + EPS_TR:
        return Regime.AT_MINUS_2
    if k < 2.0:
        return Regime.BETWEEN
    return Regime.ABOVE_2


def classify_pair(g: Isometry, h: Isometry) -> PairClass:
    if commutator(g, h).is_identity():
        return PairClass(PairKind.ABELIAN)
    t = character_of(g, h)
    if in_V(t):
        return PairClass(PairKind.VIRTUALLY_ABELIAN)
    if is_reducible(t):
        return PairClass(PairKind.REDUCIBLE)
    return PairClass(PairKind.GENERIC, kappa_regime(kappa(t)))
