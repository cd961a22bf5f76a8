"""Column-unital Yang-Baxter operators, their chain complexes, and homology over Q[y]."""

from .ring import QLAURENT, QY, LaurentPoly, parse_poly
from .ybop import (
    YBOperator,
    build_homflypt,
    build_homflypt_inverse,
    build_jones,
    kauffman_fixture,
    verify_ybe,
)
from .chain import boundary
from .smith import PolyMatrix, snf
from .homology import compute_homology, h2_formula, h3_conjecture, pw_conjecture

__all__ = [
    "QLAURENT",
    "QY",
    "LaurentPoly",
    "parse_poly",
    "YBOperator",
    "build_homflypt",
    "build_homflypt_inverse",
    "build_jones",
    "kauffman_fixture",
    "verify_ybe",
    "boundary",
    "PolyMatrix",
    "snf",
    "compute_homology",
    "h2_formula",
    "h3_conjecture",
    "pw_conjecture",
]
