"""Holonomy of hyperbolic one-holed tori with a single corner point.

Decides whether a pair of isometries of the hyperbolic plane is the holonomy
of such a surface and, when it is, builds a verified geodesic pentagon that
serves as a fundamental domain.
"""

from .charvar import CharacterTriple, MoveWord, character_of, kappa, markoff_normalize, realize
from .construct import ConstructionResult, ConstructOptions, NotHolonomy, construct
from .cover import CoverRegion, classify_commutator, commutator_twist
from .moebius import Isometry, PlanePoint
from .pentagon import Pentagon, build_pentagon, is_simple

__all__ = [
    "CharacterTriple",
    "ConstructOptions",
    "ConstructionResult",
    "CoverRegion",
    "Isometry",
    "MoveWord",
    "NotHolonomy",
    "Pentagon",
    "PlanePoint",
    "build_pentagon",
    "character_of",
    "classify_commutator",
    "commutator_twist",
    "construct",
    "is_simple",
    "kappa",
    "markoff_normalize",
    "realize",
]

__version__ = "0.1.0"
