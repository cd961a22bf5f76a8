"""
Homology H_n = ker d_n / im d_{n+1} of the Yang-Baxter chain complex over a PID.

Two routes are available and must agree:

``cokernel`` (default)
    C_{n-1} is free, so ker d_n is a direct summand of C_n. Hence the torsion
    of H_n is the non-unit invariant factors of d_{n+1}, and the free rank is
    m^n - rank d_n - rank d_{n+1}.
``quotient``
    Build a saturated kernel basis of d_n, write the columns of d_{n+1} in it,
    and take the Smith form of that presentation.

Closed forms and conjectured formulas for R_(m) are provided as oracles.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .chain import CONVENTION, BoundaryCache, boundary
from .ring import QY, EuclideanRing, LaurentPoly, format_poly
from .smith import PolyMatrix, kernel_basis, quotient_presentation, snf
from .tensor import encode
from .ybop import InvalidM, YBOperator, build_homflypt
from .chain import InvalidN

__all__ = [
    "ChainBroken",
    "HomologyResult",
    "ExpectedResult",
    "Comparison",
    "compute_homology",
    "kernel_dimension",
    "h2_formula",
    "h3_conjecture",
    "pw_conjecture",
    "pw_sequences",
    "ker3_rank_formula",
    "table_value",
    "REFERENCE_TABLE",
    "expectation",
    "h2_explicit_basis",
    "h2_relation_matrix",
    "verify_h2_basis",
    "compare",
    "TORSION_1",
    "TORSION_2",
]

PROVENANCES = ("Thm5.1", "Table", "ConjPW", "ConjH3", "Corollary")

_y = LaurentPoly.gen("y")
TORSION_1 = _y**2 - 1
TORSION_2 = _y**4 - 1

# (x, y, z) triples for m = 3..7, rows H_2 and H_3
REFERENCE_TABLE: dict[tuple[int, int], tuple[int, int, int]] = {
    (3, 2): (4, 3, 2), (4, 2): (7, 6, 3), (5, 2): (11, 10, 4), (6, 2): (16, 15, 5), (7, 2): (22, 21, 6),
    (3, 3): (4, 12, 6), (4, 3): (8, 35, 12), (5, 3): (15, 76, 20), (6, 3): (26, 140, 30), (7, 3): (42, 232, 42),
}


class ChainBroken(RuntimeError):
    pass


def _summary(free: int, torsion: Sequence[LaurentPoly]) -> tuple[int, int, int] | None:
    c = Counter(torsion)
    if set(c) - {TORSION_1, TORSION_2}:
        return None
    return (free, c[TORSION_1], c[TORSION_2])


def _sorted_torsion(ts) -> list[LaurentPoly]:
    return sorted(ts, key=lambda p: p.sort_key())


@dataclass
class HomologyResult:
    m: int
    n: int
    ring: str
    free_rank: int
    torsion: list[LaurentPoly]
    kernel_dim: int
    image_rank: int
    method: str = "cokernel"
    wall_time_ms: int = 0

    @property
    def summary(self) -> tuple[int, int, int] | None:
        return _summary(self.free_rank, self.torsion)

    @property
    def unexpected_torsion(self) -> list[LaurentPoly]:
        """Torsion factors other than y^2 - 1 and y^4 - 1."""
        return [p for p in self.torsion if p not in (TORSION_1, TORSION_2)]

    def describe(self) -> str:
        s = self.summary
        if s is not None:
            return f"H_{self.n}(m={self.m}) = {s}"
        parts = [f"k^{self.free_rank}"] + [f"k/({p.pretty()})" for p in self.torsion]
        return f"H_{self.n}(m={self.m}) = " + " + ".join(parts)

    def to_json(self, expected: "ExpectedResult | None" = None, match: bool | None = None) -> dict:
        s = self.summary
        return {
            "m": self.m,
            "n": self.n,
            "ring": self.ring,
            "free_rank": self.free_rank,
            "torsion": [format_poly(p) for p in self.torsion],
            "summary": list(s) if s is not None else None,
            "expected": expected.to_json() if expected is not None else None,
            "match": match,
            "convention": CONVENTION,
            "wall_time_ms": self.wall_time_ms,
        }


@dataclass
class ExpectedResult:
    m: int
    n: int
    free_rank: int
    n_torsion_1: int
    n_torsion_2: int
    provenance: str

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def summary(self) -> tuple[int, int, int]:
        return (self.free_rank, self.n_torsion_1, self.n_torsion_2)

    @property
    def torsion(self) -> list[LaurentPoly]:
        return [TORSION_1] * self.n_torsion_1 + [TORSION_2] * self.n_torsion_2

    def to_json(self) -> dict:
        return {"provenance": self.provenance, "summary": list(self.summary)}


@dataclass
class Comparison:
    match: bool
    differences: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.match

    @property
    def exit_code(self) -> int:
        return 0 if self.match else 2


# -- computation ---------------------------------------------------------------------

def _boundary(R: YBOperator, n: int, cache) -> PolyMatrix:
    return boundary(R, n, cache)


def compute_homology(
    R: YBOperator,
    n: int,
    *,
    ring: EuclideanRing = QY,
    method: str = "cokernel",
    cache: BoundaryCache | None = None,
    check_chain: bool = True,
) -> HomologyResult:
    """Decompose H_n(R) into a free part and canonical torsion factors."""
    if not isinstance(n, int) or n < 1:
        raise InvalidN(f"n must be >= 1, got {n!r}")
    t0 = time.perf_counter()
    d_n = _boundary(R, n, cache)
    d_next = _boundary(R, n + 1, cache)
    if check_chain and not d_n.matmul(d_next).is_zero():
        raise ChainBroken(f"boundary({n}) . boundary({n + 1}) != 0 for {R!r}")
    dim = R.m**n
    if method == "cokernel":
        rank_n = snf(d_n, ring=ring).rank
        top = snf(d_next, ring=ring)
        kernel_dim = dim - rank_n
        image_rank = top.rank
        torsion = top.torsion()
    elif method == "quotient":
        kb = kernel_basis(d_n, ring=ring)
        pres = quotient_presentation(kb, d_next.columns())
        kernel_dim = len(kb)
        image_rank = pres.rank
        torsion = pres.torsion()
    else:
        raise ValueError(f"unknown method {method!r}")
    ms = int(round((time.perf_counter() - t0) * 1000))
    return HomologyResult(
        m=R.m,
        n=n,
        ring=ring.tag,
        free_rank=kernel_dim - image_rank,
        torsion=_sorted_torsion(torsion),
        kernel_dim=kernel_dim,
        image_rank=image_rank,
        method=method,
        wall_time_ms=ms,
    )


def kernel_dimension(R: YBOperator, n: int, ring: EuclideanRing = QY, cache: BoundaryCache | None = None) -> int:
    """Rank of ker d_n, i.e. m^n - rank d_n."""
    return R.m**n - snf(_boundary(R, n, cache), ring=ring).rank


# -- closed forms --------------------------------------------------------------------

def _check_m(m: int):
    if not isinstance(m, int) or m < 1:
        raise InvalidM(f"m must be a positive integer, got {m!r}")


def h2_formula(m: int) -> ExpectedResult:
    """H_2(R_(m)) = k^{1 + C(m,2)} + (k/(1-y^2))^{C(m,2)} + (k/(1-y^4))^{m-1}."""
    _check_m(m)
    c = comb(m, 2)
    return ExpectedResult(m, 2, 1 + c, c, m - 1, "Thm5.1")


def h3_conjecture(m: int) -> ExpectedResult:
    _check_m(m)
    free, r1 = m * (8 - 3 * m + m * m), (m * m - 1) * (5 * m - 6)
    assert free % 6 == 0 and r1 % 6 == 0
    return ExpectedResult(m, 3, free // 6, r1 // 6, m * (m - 1), "ConjH3")


def pw_sequences(n: int) -> tuple[dict[int, int], dict[int, int]]:
    """
    The sequences (a_k) and (s_k) of the m = 2 conjecture, for k <= n.

    s_k is the sum of the first k + 1 Fibonacci numbers (s_0 = 1, s_-1 = 0);
    a_1 = 0 and 2^k = 2 + a_{k-1} + s_{k-3} + a_k + s_{k-2}.
    """
    fib = [0, 1, 1]
    while len(fib) < n + 3:
        fib.append(fib[-1] + fib[-2])
    s = {k: sum(fib[1: k + 2]) for k in range(-1, n + 1)}
    s[-2] = 0
    a = {1: 0}
    for k in range(2, n + 1):
        a[k] = 2**k - 2 - a[k - 1] - s[k - 3] - s[k - 2]
    return a, s


def pw_conjecture(n: int) -> ExpectedResult:
    """Conjectured H_n(R_(2)) = (2, a_n, s_{n-2})."""
    if not isinstance(n, int) or n < 2:
        raise InvalidN(f"the m=2 conjecture needs n >= 2, got {n!r}")
    a, s = pw_sequences(n)
    return ExpectedResult(2, n, 2, a[n], s[n - 2], "ConjPW")


def ker3_rank_formula(m: int) -> int:
    _check_m(m)
    num = (m + 1) * (2 * m * m - 3 * m + 2)
    value = num // 2
    assert num % 2 == 0 and value == m**3 - comb(m, 2) - (m - 1)
    return value


def table_value(m: int, n: int) -> ExpectedResult | None:
    t = REFERENCE_TABLE.get((m, n))
    if t is None:
        return None
    return ExpectedResult(m, n, *t, "Table")


def expectation(kind: str, m: int, n: int) -> ExpectedResult | None:
    """Oracle for ``--expect``: thm, table, conj-pw, conj-h3 (None when it does not apply)."""
    if kind in (None, "none"):
        return None
    if kind == "thm":
        return h2_formula(m) if n == 2 else None
    if kind == "table":
        return table_value(m, n)
    if kind == "conj-pw":
        return pw_conjecture(n) if m == 2 and n >= 2 else None
    if kind == "conj-h3":
        return h3_conjecture(m) if n == 3 else None
    raise ValueError(f"unknown expectation {kind!r}")


def compare(actual: HomologyResult, expected: ExpectedResult) -> Comparison:
    diffs = []
    if (actual.m, actual.n) != (expected.m, expected.n):
        diffs.append(f"(m, n) = {(actual.m, actual.n)} but expectation is for {(expected.m, expected.n)}")
    if actual.free_rank != expected.free_rank:
        diffs.append(f"free rank {actual.free_rank} != {expected.free_rank}")
    got, want = Counter(actual.torsion), Counter(expected.torsion)
    if got != want:
        for p in sorted(set(got) | set(want), key=lambda p: p.sort_key()):
            if got[p] != want[p]:
                diffs.append(f"torsion {p.pretty()}: {got[p]} != {want[p]}")
    return Comparison(not diffs, diffs)


# -- explicit H_2 basis ------------------------------------------------------------------

def h2_explicit_basis(m: int) -> tuple[list[dict], list[dict], list[dict]]:
    """
    Basis of C_2 in three groups: X0 spans the free part, X1 elements are
    killed by 1 - y^2 and X2 elements by 1 - y^4 in H_2(R_(m)).
    Vectors are sparse maps from the encoded basis index of C_2.
    """
    if not isinstance(m, int) or m < 2:
        raise InvalidM(f"the explicit basis needs m >= 2, got {m!r}")
    one = LaurentPoly.one("y")
    ysq = LaurentPoly.monomial(1, 2, "y")
    e = lambda a, b: encode((a, b), m)  # noqa: E731

    def vec(*terms):
        out: dict[int, LaurentPoly] = {}
        for k, c in terms:
            out[k] = out[k] + c if k in out else c
        return {k: c for k, c in out.items() if c.coeffs}

    X0 = [vec((e(1, 1), one))] + [vec((e(j, i), one)) for i in range(1, m + 1) for j in range(i + 1, m + 1)]
    X1 = [
        vec((e(i, j), one), (e(i, i), -one), (e(j, i), ysq), (e(i, i), -ysq))
        for i in range(1, m + 1)
        for j in range(i + 1, m + 1)
    ]
    X2 = [vec((e(j, j), one), (e(1, 1), -one)) for j in range(2, m + 1)]
    return X0, X1, X2


def _inverse_unimodular(B: PolyMatrix) -> PolyMatrix:
    res = snf(B, with_transforms=True)
    if res.rank != B.nrows or res.torsion():
        raise ValueError("matrix is not unimodular")
    # U B V = I  =>  B^-1 = V U
    return res.V.matmul(res.U)


def h2_relation_matrix(m: int) -> tuple[PolyMatrix, list[int]]:
    """
    Image of the degree-3 boundary written in the explicit basis, plus the
    group label (0, 1, 2) of each basis row.
    """
    X0, X1, X2 = h2_explicit_basis(m)
    B = PolyMatrix.from_columns(m * m, X0 + X1 + X2)
    A = _inverse_unimodular(B).matmul(boundary(build_homflypt(m), 3))
    labels = [0] * len(X0) + [1] * len(X1) + [2] * len(X2)
    return A, labels


def verify_h2_basis(m: int) -> bool:
    """
    Check the explicit basis realizes the decomposition: rows of X0 vanish,
    rows of X1 / X2 are divisible by 1 - y^2 / 1 - y^4, and the relation
    matrix has exactly those invariant factors (so the image is the direct
    sum of the ideals).
    """
    A, labels = h2_relation_matrix(m)
    ideal = {1: 1 - _y**2, 2: 1 - _y**4}
    for i, j, p in A.triplets():
        if labels[i] == 0:
            return False
        if not QY.divides(ideal[labels[i]], p):
            return False
    want = Counter(QY.canonical(ideal[g]) for g in labels if g)
    return Counter(snf(A).invariant_factors) == want
