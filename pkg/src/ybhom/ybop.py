"""
Yang-Baxter operators on V (x) V with V free on letters 1..m.

An operator is stored as its coefficient table: for each input pair (a, b)
the list of ((c, d), R^{ab}_{cd}) with nonzero coefficients. The matrix view
has outputs as rows and inputs as columns, both in leftmost-major order.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from typing import Iterable, Mapping, Sequence

from .ring import (
    LaurentPoly,
    RationalLike,
    lp_eval,
    lp_eval_even,
    parse_poly,
    format_poly,
    to_rational,
)
from .tensor import DimensionMismatch, TensorVector, apply_at, decode, encode

__all__ = [
    "InvalidM",
    "ZeroColumnSum",
    "FixtureIntegrityError",
    "YBOperator",
    "YBEReport",
    "build_homflypt",
    "build_homflypt_inverse",
    "build_jones",
    "build_identity",
    "kauffman_fixture",
    "KAUFFMAN_SHA256",
    "verify_ybe",
    "verify_inverse",
    "column_sums",
    "column_normalize_at",
    "choose_normalization_point",
    "specialize",
    "ybe_sides",
    "symmetry_swap",
    "DEFAULT_POINTS",
]

DEFAULT_POINTS = (2, 3, 5)


class InvalidM(ValueError):
    pass


class ZeroColumnSum(ZeroDivisionError):
    def __init__(self, column: tuple[int, int], point):
        super().__init__(f"column {column} sums to zero at {point}")
        self.column = column
        self.point = point


class FixtureIntegrityError(RuntimeError):
    pass


Pair = tuple[int, int]


class YBOperator:
    """Linear map on V (x) V given by its coefficient table."""

    __slots__ = ("m", "var", "entries", "name")

    def __init__(self, m: int, entries: Mapping[Pair, Iterable[tuple[Pair, LaurentPoly]]], var: str = "y", name: str = ""):
        if m < 1:
            raise InvalidM(f"m must be >= 1, got {m}")
        table: dict[Pair, tuple[tuple[Pair, LaurentPoly], ...]] = {}
        for (a, b), col in entries.items():
            if not (1 <= a <= m and 1 <= b <= m):
                raise InvalidM(f"input pair {(a, b)} outside 1..{m}")
            acc: dict[Pair, LaurentPoly] = {}
            for (c, d), r in col:
                if not (1 <= c <= m and 1 <= d <= m):
                    raise InvalidM(f"output pair {(c, d)} outside 1..{m}")
                if r.coeffs and r.var != var:
                    raise ValueError(f"entry in variable {r.var!r}, operator in {var!r}")
                acc[(c, d)] = acc[(c, d)] + r if (c, d) in acc else r
            kept = tuple(sorted((cd, r) for cd, r in acc.items() if r.coeffs))
            if kept:
                table[(a, b)] = kept
        self.m = m
        self.var = var
        self.entries = table
        self.name = name

    # -- matrix view ----------------------------------------------------------

    @property
    def size(self) -> int:
        return self.m * self.m

    def entry(self, out: Pair, inp: Pair) -> LaurentPoly:
        for cd, r in self.entries.get(tuple(inp), ()):
            if cd == tuple(out):
                return r
        return LaurentPoly.zero(self.var)

    def matrix(self) -> list[list[LaurentPoly]]:
        """Dense m^2 x m^2 matrix, rows = outputs, columns = inputs."""
        N = self.size
        zero = LaurentPoly.zero(self.var)
        M = [[zero] * N for _ in range(N)]
        for (a, b), col in self.entries.items():
            j = encode((a, b), self.m)
            for (c, d), r in col:
                M[encode((c, d), self.m)][j] = r
        return M

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[LaurentPoly]], var: str = "y", name: str = "") -> YBOperator:
        N = len(rows)
        m = round(N ** 0.5)
        if m * m != N or any(len(r) != N for r in rows):
            raise DimensionMismatch(f"matrix must be m^2 x m^2, got {N} rows")
        entries: dict[Pair, list] = {}
        for i, row in enumerate(rows):
            out = decode(i, m, 2)
            for j, r in enumerate(row):
                if r.coeffs:
                    entries.setdefault(decode(j, m, 2), []).append((out, r))
        return cls(m, entries, var, name)

    def __call__(self, v: TensorVector) -> TensorVector:
        return apply_at(self, 1, v)

    def __eq__(self, other):
        if not isinstance(other, YBOperator):
            return NotImplemented
        return self.m == other.m and self.entries == other.entries and (
            self.var == other.var or not self.entries
        )

    def __hash__(self):
        return hash((self.m, self.var, tuple(sorted(self.entries.items()))))

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<YBOperator{label} m={self.m} var={self.var} nnz={sum(map(len, self.entries.values()))}>"

    def entry_values(self) -> set[LaurentPoly]:
        return {r for col in self.entries.values() for _, r in col}

    def is_even(self) -> bool:
        return all(e % 2 == 0 for r in self.entry_values() for e in r.terms)

    def matmul(self, other: YBOperator) -> YBOperator:
        """Composition self o other."""
        if self.m != other.m:
            raise DimensionMismatch(f"m={self.m} vs m={other.m}")
        entries = {}
        for ab, col in other.entries.items():
            acc: dict[Pair, LaurentPoly] = {}
            for cd, r in col:
                for ef, s in self.entries.get(cd, ()):
                    term = s * r
                    acc[ef] = acc[ef] + term if ef in acc else term
            entries[ab] = list(acc.items())
        return YBOperator(self.m, entries, self.var)

    # -- text format ------------------------------------------------------------

    def dumps(self) -> str:
        """One matrix row per line, entries separated by ``;``."""
        lines = [f"# m={self.m} var={self.var}"]
        for row in self.matrix():
            lines.append("; ".join(format_poly(r) for r in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, var: str | None = None, name: str = "") -> YBOperator:
        header_var = None
        rows = []
        for line in text.splitlines():
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                for tok in s[1:].split():
                    if tok.startswith("var="):
                        header_var = tok[4:]
                continue
            rows.append(s.split(";"))
        v = var or header_var or "y"
        parsed = [[parse_poly(x, v) for x in row] for row in rows]
        return cls.from_matrix(parsed, var=v, name=name)


@dataclass
class YBEReport:
    holds: bool
    failing_triples: list[tuple[tuple[int, int, int], TensorVector, TensorVector]] = field(default_factory=list)
    checked: int = 0

    def summary(self) -> str:
        if self.holds:
            return f"YBE holds on all {self.checked} basis triples"
        t, _, _ = self.failing_triples[0]
        return f"YBE fails on {len(self.failing_triples)} of {self.checked} basis triples (first: {t})"


def _check_m(m: int):
    if not isinstance(m, int) or m < 1:
        raise InvalidM(f"m must be a positive integer, got {m!r}")


def build_homflypt(m: int) -> YBOperator:
    """
    Column-unital operator R_(m) in the variable y.

    R(a, b) = (b, a) for a >= b, and R(a, b) = (1 - y^2)(a, b) + y^2 (b, a) for a < b.
    """
    _check_m(m)
    one = LaurentPoly.one("y")
    ysq = LaurentPoly.monomial(1, 2, "y")
    entries = {}
    for a, b in product(range(1, m + 1), repeat=2):
        if a >= b:
            entries[(a, b)] = [((b, a), one)]
        else:
            entries[(a, b)] = [((a, b), one - ysq), ((b, a), ysq)]
    return YBOperator(m, entries, "y", name=f"R_({m})")


def build_homflypt_inverse(m: int) -> YBOperator:
    _check_m(m)
    one = LaurentPoly.one("y")
    yinv = LaurentPoly.monomial(1, -2, "y")
    entries = {}
    for a, b in product(range(1, m + 1), repeat=2):
        if a <= b:
            entries[(a, b)] = [((b, a), one)]
        else:
            entries[(a, b)] = [((a, b), one - yinv), ((b, a), yinv)]
    return YBOperator(m, entries, "y", name=f"R_({m})^-1")


def build_jones(m: int) -> YBOperator:
    """Jones' operator in the variable q: -q on (a,a), swap for a != b, plus q^-1 - q on (a,b) for a < b."""
    _check_m(m)
    q = LaurentPoly.gen("q")
    one = LaurentPoly.one("q")
    diag = -q
    off = q**-1 - q
    entries = {}
    for a, b in product(range(1, m + 1), repeat=2):
        if a == b:
            entries[(a, b)] = [((a, a), diag)]
        elif a < b:
            entries[(a, b)] = [((b, a), one), ((a, b), off)]
        else:
            entries[(a, b)] = [((b, a), one)]
    return YBOperator(m, entries, "q", name=f"Jones_({m})")


def build_identity(m: int, var: str = "y") -> YBOperator:
    _check_m(m)
    one = LaurentPoly.one(var)
    return YBOperator(m, {(a, b): [((a, b), one)] for a, b in product(range(1, m + 1), repeat=2)}, var, name=f"Id_({m})")


KAUFFMAN_SHA256 = "7a1266531f9d04c52c56550ab16aecc4b067dcd5aa8f477d20c233a68a7c6b0c"


def kauffman_fixture() -> YBOperator:
    """The 16 x 16 Kauffman-type operator (m = 4) shipped as a data file."""
    raw = resources.files("ybhom.data").joinpath("kauffman_m4.txt").read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != KAUFFMAN_SHA256:
        raise FixtureIntegrityError(f"kauffman_m4.txt hash {digest} does not match the pinned value")
    return YBOperator.loads(raw.decode("utf-8"), name="Kauffman_(4)")


# -- checks -------------------------------------------------------------------------

def ybe_sides(R: YBOperator, triple: Sequence[int]) -> tuple[TensorVector, TensorVector]:
    """Both sides of the YBE on one basis triple: (R.I)(I.R)(R.I) and (I.R)(R.I)(I.R)."""
    v = TensorVector.basis(R.m, triple, R.var)
    lhs = apply_at(R, 1, apply_at(R, 2, apply_at(R, 1, v)))
    rhs = apply_at(R, 2, apply_at(R, 1, apply_at(R, 2, v)))
    return lhs, rhs


def verify_ybe(R: YBOperator) -> YBEReport:
    failing = []
    count = 0
    for t in product(range(1, R.m + 1), repeat=3):
        lhs, rhs = ybe_sides(R, t)
        count += 1
        if lhs != rhs:
            failing.append((t, lhs, rhs))
    return YBEReport(holds=not failing, failing_triples=failing, checked=count)


def verify_inverse(A: YBOperator, B: YBOperator) -> bool:
    if A.m != B.m:
        raise DimensionMismatch(f"m={A.m} vs m={B.m}")
    if A.var != B.var and A.entries and B.entries:
        raise DimensionMismatch(f"variables {A.var!r} and {B.var!r} differ")
    ident = build_identity(A.m, A.var)
    return A.matmul(B) == ident and B.matmul(A) == ident


def column_sums(R: YBOperator) -> dict[Pair, LaurentPoly]:
    zero = LaurentPoly.zero(R.var)
    out = {}
    for ab in product(range(1, R.m + 1), repeat=2):
        s = zero
        for _, r in R.entries.get(ab, ()):
            s = s + r
        out[ab] = s
    return out


def specialize(R: YBOperator, value: RationalLike | None = None, *, square: RationalLike | None = None) -> YBOperator:
    """
    Evaluate every entry exactly, either at ``var = value`` or, for operators in
    even powers only, at ``var^2 = square``. Entries become constants.
    """
    if (value is None) == (square is None):
        raise ValueError("give exactly one of value= or square=")
    if value is not None:
        x = to_rational(value)
        ev = lambda r: lp_eval(r, x)  # noqa: E731
    else:
        x = to_rational(square)
        ev = lambda r: lp_eval_even(r, x)  # noqa: E731
    entries = {
        ab: [(cd, LaurentPoly.constant(ev(r), R.var)) for cd, r in col]
        for ab, col in R.entries.items()
    }
    return YBOperator(R.m, entries, R.var, name=f"{R.name}@{x}" if R.name else "")


def column_normalize_at(R: YBOperator, point: RationalLike) -> YBOperator:
    """Specialize at ``point`` and divide each column by its (nonzero) sum."""
    x = to_rational(point)
    entries = {}
    for ab in product(range(1, R.m + 1), repeat=2):
        col = [(cd, lp_eval(r, x)) for cd, r in R.entries.get(ab, ())]
        s = sum((v for _, v in col), Fraction(0))
        if s == 0:
            raise ZeroColumnSum(ab, x)
        entries[ab] = [(cd, LaurentPoly.constant(v / s, R.var)) for cd, v in col]
    return YBOperator(R.m, entries, R.var, name=f"{R.name}/colsum@{x}" if R.name else "")


def choose_normalization_point(R: YBOperator, points: Iterable[RationalLike] = DEFAULT_POINTS) -> Fraction:
    """First point at which every column sum of R is nonzero."""
    sums = column_sums(R)
    tried = []
    for p in points:
        x = to_rational(p)
        tried.append(x)
        if x == 0:
            continue
        if all(lp_eval(s, x) != 0 for s in sums.values()):
            return x
    raise ZeroColumnSum((0, 0), tried)


def symmetry_swap(v: TensorVector, a: int, c: int) -> TensorVector:
    """Swap letters a and c in every basis tuple, then reverse each tuple."""
    swap = {a: c, c: a}
    return v.map_basis(lambda t: tuple(swap.get(x, x) for x in reversed(t)))
