from .residue import ResidueField, first_irreducible, is_irreducible
from .scalar import INF, PadicScalar, vp
from .ring import TowerElement, TowerRing, make_tower

__all__ = [
    "INF",
    "PadicScalar",
    "ResidueField",
    "TowerElement",
    "TowerRing",
    "first_irreducible",
    "is_irreducible",
    "make_tower",
    "vp",
]
