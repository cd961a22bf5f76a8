"""
The Yang-Baxter chain complex C_n = V^{(x)n} of a column-unital operator.

Face maps slide the i-th strand to an edge, applying R at every crossing,
and then delete the edge factor:

* ``face_left(i)`` applies R at positions i-1, i-2, ..., 1 and drops the first factor;
* ``face_right(i)`` applies R at positions i, i+1, ..., n-1 and drops the last factor.

The boundary is ``sum_i (-1)^(i+1) (face_left(i) - face_right(i))``.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Sequence

from .ring import LaurentPoly, format_poly, lp_divrem, parse_poly
from .smith import PolyMatrix
from .tensor import PositionOutOfRange, TensorVector, apply_at, drop_first, drop_last, encode
from .ybop import YBOperator, build_homflypt

__all__ = [
    "CONVENTION",
    "InvalidN",
    "CacheFormatError",
    "face_left",
    "face_right",
    "boundary",
    "boundary_column",
    "boundary_on",
    "verify_square_zero",
    "check_divisibility",
    "boundary3_vanishing_suite",
    "VanishingReport",
    "BoundaryCache",
    "default_cache",
]

CONVENTION = "sign=(-1)^{i+1};faces=derived-v1"
CACHE_ENV = "YBHOM_CACHE"


class InvalidN(ValueError):
    pass


class CacheFormatError(ValueError):
    pass


def _basis(R: YBOperator, t: Sequence[int]) -> TensorVector:
    return TensorVector.basis(R.m, t, R.var)


def face_left(R: YBOperator, i: int, n: int, t: Sequence[int]) -> TensorVector:
    """d^l_{i,n}: move strand i to the far left, then delete it."""
    if len(t) != n:
        raise PositionOutOfRange(f"tuple of length {len(t)} for n={n}")
    if not 1 <= i <= n:
        raise PositionOutOfRange(f"face index {i} not in 1..{n}")
    v = _basis(R, t)
    for pos in range(i - 1, 0, -1):
        v = apply_at(R, pos, v)
    return drop_first(v)


def face_right(R: YBOperator, i: int, n: int, t: Sequence[int]) -> TensorVector:
    """d^r_{i,n}: move strand i to the far right, then delete it."""
    if len(t) != n:
        raise PositionOutOfRange(f"tuple of length {len(t)} for n={n}")
    if not 1 <= i <= n:
        raise PositionOutOfRange(f"face index {i} not in 1..{n}")
    v = _basis(R, t)
    for pos in range(i, n):
        v = apply_at(R, pos, v)
    return drop_last(v)


def boundary_on(R: YBOperator, t: Sequence[int]) -> TensorVector:
    """Boundary of a single basis tuple, as a vector in C_{n-1}."""
    n = len(t)
    if n < 1:
        raise InvalidN("boundary needs n >= 1")
    acc = TensorVector(R.m, n - 1, var=R.var)
    for i in range(1, n + 1):
        term = face_left(R, i, n, t) - face_right(R, i, n, t)
        acc = acc + term if i % 2 == 1 else acc - term
    return acc


def boundary_column(R: YBOperator, t: Sequence[int]) -> dict[int, LaurentPoly]:
    """Column of the boundary matrix at basis tuple ``t`` (row index -> entry)."""
    v = boundary_on(R, t)
    return {encode(s, R.m): c for s, c in v.terms.items()}


def boundary(R: YBOperator, n: int, cache: "BoundaryCache | None" = None) -> PolyMatrix:
    """Sparse m^{n-1} x m^n matrix of the boundary map C_n -> C_{n-1}."""
    if not isinstance(n, int) or n < 1:
        raise InvalidN(f"n must be >= 1, got {n!r}")
    if cache is not None:
        hit = cache.load(R, n)
        if hit is not None:
            return hit
    m = R.m
    cols = [boundary_column(R, t) for t in product(range(1, m + 1), repeat=n)]
    M = PolyMatrix.from_columns(m ** (n - 1), cols, var=R.var)
    if cache is not None:
        cache.store(R, n, M)
    return M


def verify_square_zero(R: YBOperator, n: int, cache: "BoundaryCache | None" = None) -> bool:
    """True iff boundary(n-1) . boundary(n) == 0."""
    if n < 2:
        raise InvalidN("square-zero check needs n >= 2")
    return boundary(R, n - 1, cache).matmul(boundary(R, n, cache)).is_zero()


def check_divisibility(R: YBOperator, n: int, cache: "BoundaryCache | None" = None) -> bool:
    """True iff every entry of boundary(R, n) is divisible by 1 - y^2."""
    f = LaurentPoly.one(R.var) - LaurentPoly.monomial(1, 2, R.var)
    for _, _, p in boundary(R, n, cache).triplets():
        if lp_divrem(p, f)[1].coeffs:
            return False
    return True


@dataclass
class VanishingReport:
    m: int
    checked: list[tuple[int, int, int]] = field(default_factory=list)
    nonvanishing: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.nonvanishing


def boundary3_vanishing_suite(m: int, R: YBOperator | None = None) -> VanishingReport:
    """
    Check that the degree-3 boundary vanishes on every (m, a, b), every
    (a, b, 1), and every triple whose first letter is maximal or whose last
    letter is minimal.
    """
    if m < 2:
        raise ValueError("vanishing suite needs m >= 2")
    R = R or build_homflypt(m)
    rep = VanishingReport(m)
    for t in product(range(1, m + 1), repeat=3):
        if t[0] == m or t[2] == 1 or t[0] >= max(t) or t[2] <= min(t):
            rep.checked.append(t)
            if not boundary_on(R, t).is_zero():
                rep.nonvanishing.append(t)
    return rep


# -- cache -------------------------------------------------------------------------

class BoundaryCache:
    """
    Directory of boundary matrices in a sparse triplet text format::

        # ybhom-boundary v1
        operator=R_(3) m=3 n=4 var=y rows=27 cols=81
        convention=sign=(-1)^{i+1};faces=derived-v1
        <row> <col> <polynomial>
        ...

    Only operators carrying a name are cached; the name is part of the key.
    """

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    def path(self, R: YBOperator, n: int) -> Path:
        tag = hashlib.sha256(f"{R.name}|{R.m}|{R.var}|{CONVENTION}".encode()).hexdigest()[:12]
        return self.root / f"boundary_m{R.m}_n{n}_{tag}.txt"

    def load(self, R: YBOperator, n: int) -> PolyMatrix | None:
        if not R.name:
            return None
        p = self.path(R, n)
        if not p.exists():
            return None
        return read_boundary(p.read_text(), expect=(R.name, R.m, n, R.var))

    def store(self, R: YBOperator, n: int, M: PolyMatrix) -> None:
        if not R.name:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        p = self.path(R, n)
        tmp = p.with_suffix(".tmp")
        tmp.write_text(write_boundary(M, R.name, R.m, n))
        tmp.replace(p)


def default_cache() -> BoundaryCache | None:
    root = os.environ.get(CACHE_ENV)
    return BoundaryCache(root) if root else None


def write_boundary(M: PolyMatrix, name: str, m: int, n: int) -> str:
    lines = [
        "# ybhom-boundary v1",
        f"operator={name} m={m} n={n} var={M.var} rows={M.nrows} cols={M.ncols}",
        f"convention={CONVENTION}",
    ]
    for r, c, p in sorted(M.triplets(), key=lambda x: (x[1], x[0])):
        lines.append(f"{r} {c} {format_poly(p)}")
    return "\n".join(lines) + "\n"


def read_boundary(text: str, expect: tuple | None = None) -> PolyMatrix:
    lines = text.splitlines()
    if len(lines) < 3 or lines[0].strip() != "# ybhom-boundary v1":
        raise CacheFormatError("missing boundary header")
    meta = dict(tok.split("=", 1) for tok in lines[1].split())
    conv = lines[2].split("=", 1)[1] if "=" in lines[2] else ""
    if conv != CONVENTION:
        raise CacheFormatError(f"convention {conv!r} does not match {CONVENTION!r}")
    if expect is not None:
        name, m, n, var = expect
        if (meta.get("operator"), int(meta["m"]), int(meta["n"]), meta["var"]) != (name, m, n, var):
            raise CacheFormatError(f"cache header {meta} does not match {expect}")
    var = meta["var"]
    cols: list[dict[int, LaurentPoly]] = [{} for _ in range(int(meta["cols"]))]
    for line in lines[3:]:
        if not line.strip():
            continue
        r, c, poly = line.split(" ", 2)
        cols[int(c)][int(r)] = parse_poly(poly, var)
    return PolyMatrix.from_columns(int(meta["rows"]), cols, var=var)
