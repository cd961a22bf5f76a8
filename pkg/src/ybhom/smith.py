"""
Sparse exact linear algebra over the Euclidean rings Q[y] and Q[y, y^-1].

``snf`` computes invariant factors by pivoted elimination. Optional
transforms satisfy ``U * M * V == diag(d_1, ..., d_r, 0, ...)`` exactly, with
U and V unimodular. Kernel bases are read off V, so they are saturated.

Two preprocessing steps are applied before elimination and undone
afterwards; both leave the invariant factors unchanged:

* if every exponent in M is a multiple of g > 1, work in y^g;
* divide M by the gcd of its entries (the factors scale back by it).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd as igcd
from typing import Iterable, Mapping, Sequence

from .ring import QY, EuclideanRing, LaurentPoly, RingError, VariableMismatch

__all__ = [
    "UnsupportedRing",
    "NotInSpan",
    "PolyMatrix",
    "SNFResult",
    "KernelBasis",
    "snf",
    "invariant_factors",
    "kernel_basis",
    "coords_in_basis",
    "quotient_presentation",
    "minors_gcd_factors",
]

Vector = dict[int, LaurentPoly]


class UnsupportedRing(RingError):
    pass


class NotInSpan(RingError):
    pass


class PolyMatrix:
    """Sparse matrix of LaurentPoly, stored column-wise."""

    __slots__ = ("nrows", "ncols", "var", "_cols")

    def __init__(self, nrows: int, ncols: int, var: str = "y"):
        self.nrows = nrows
        self.ncols = ncols
        self.var = var
        self._cols: list[Vector] = [{} for _ in range(ncols)]

    @classmethod
    def from_columns(cls, nrows: int, cols: Sequence[Mapping[int, LaurentPoly]], var: str = "y") -> PolyMatrix:
        M = cls(nrows, len(cols), var)
        for j, col in enumerate(cols):
            for i, p in col.items():
                M[i, j] = p
        return M

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], var: str = "y") -> PolyMatrix:
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        M = cls(nrows, ncols, var)
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for j, p in enumerate(row):
                if not isinstance(p, LaurentPoly):
                    p = LaurentPoly.constant(p, var)
                M[i, j] = p
        return M

    @classmethod
    def from_triplets(cls, nrows: int, ncols: int, triplets: Iterable[tuple[int, int, LaurentPoly]], var: str = "y") -> PolyMatrix:
        M = cls(nrows, ncols, var)
        for i, j, p in triplets:
            M[i, j] = M[i, j] + p
        return M

    @classmethod
    def identity(cls, n: int, var: str = "y") -> PolyMatrix:
        M = cls(n, n, var)
        one = LaurentPoly.one(var)
        for i in range(n):
            M._cols[i][i] = one
        return M

    @classmethod
    def diagonal(cls, nrows: int, ncols: int, diag: Sequence[LaurentPoly], var: str = "y") -> PolyMatrix:
        M = cls(nrows, ncols, var)
        for k, d in enumerate(diag):
            M[k, k] = d
        return M

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, key: tuple[int, int]) -> LaurentPoly:
        i, j = key
        p = self._cols[j].get(i)
        return p if p is not None else LaurentPoly.zero(self.var)

    def __setitem__(self, key: tuple[int, int], p: LaurentPoly):
        i, j = key
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"({i}, {j}) outside {self.shape}")
        if p.coeffs:
            if p.var != self.var:
                raise VariableMismatch(f"{p.var!r} vs {self.var!r}")
            self._cols[j][i] = p
        else:
            self._cols[j].pop(i, None)

    def column(self, j: int) -> Vector:
        return dict(self._cols[j])

    def columns(self) -> list[Vector]:
        return [dict(c) for c in self._cols]

    def rows(self) -> list[Vector]:
        out: list[Vector] = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self._cols):
            for i, p in col.items():
                out[i][j] = p
        return out

    def triplets(self) -> list[tuple[int, int, LaurentPoly]]:
        return [(i, j, p) for j, col in enumerate(self._cols) for i, p in sorted(col.items())]

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def is_zero(self) -> bool:
        return all(not c for c in self._cols)

    def to_dense(self) -> list[list[LaurentPoly]]:
        zero = LaurentPoly.zero(self.var)
        out = [[zero] * self.ncols for _ in range(self.nrows)]
        for i, j, p in self.triplets():
            out[i][j] = p
        return out

    def transpose(self) -> PolyMatrix:
        T = PolyMatrix(self.ncols, self.nrows, self.var)
        for i, j, p in self.triplets():
            T._cols[i][j] = p
        return T

    def apply(self, v: Mapping[int, LaurentPoly]) -> Vector:
        """Matrix-vector product with a sparse vector."""
        out: Vector = {}
        for j, c in v.items():
            if not c.coeffs:
                continue
            for i, p in self._cols[j].items():
                t = p * c
                out[i] = out[i] + t if i in out else t
        return {i: p for i, p in out.items() if p.coeffs}

    def matmul(self, other: PolyMatrix) -> PolyMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} x {other.shape}")
        P = PolyMatrix(self.nrows, other.ncols, self.var)
        P._cols = [self.apply(col) for col in other._cols]
        return P

    __matmul__ = matmul

    def map(self, f) -> PolyMatrix:
        M = PolyMatrix(self.nrows, self.ncols, self.var)
        for j, col in enumerate(self._cols):
            for i, p in col.items():
                q = f(p)
                if q.coeffs:
                    M._cols[j][i] = q
        return M

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> PolyMatrix:
        rpos = {r: k for k, r in enumerate(rows)}
        M = PolyMatrix(len(rows), len(cols), self.var)
        for k, j in enumerate(cols):
            for i, p in self._cols[j].items():
                if i in rpos:
                    M._cols[k][rpos[i]] = p
        return M

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    def __repr__(self):
        return f"<PolyMatrix {self.nrows}x{self.ncols} nnz={self.nnz}>"


@dataclass
class SNFResult:
    invariant_factors: list[LaurentPoly]
    rank: int
    shape: tuple[int, int]
    ring: str = QY.tag
    U: PolyMatrix | None = None
    V: PolyMatrix | None = None
    V_inv: PolyMatrix | None = field(default=None, repr=False)

    def torsion(self) -> list[LaurentPoly]:
        """Non-unit invariant factors."""
        return [d for d in self.invariant_factors if not _is_unit_tag(d, self.ring)]

    @property
    def cokernel_free_rank(self) -> int:
        return self.shape[0] - self.rank

    def diagonal(self) -> PolyMatrix:
        var = self.invariant_factors[0].var if self.invariant_factors else "y"
        return PolyMatrix.diagonal(self.shape[0], self.shape[1], self.invariant_factors, var)


def _is_unit_tag(p: LaurentPoly, tag: str) -> bool:
    if tag == QY.tag:
        return p.val == 0 and len(p.coeffs) == 1
    return len(p.coeffs) == 1


@dataclass
class KernelBasis:
    """Free basis of ker M, with what is needed to solve for coordinates."""

    vectors: list[Vector]
    ambient_dim: int
    rank: int
    var: str = "y"
    ring: EuclideanRing = QY
    _V_inv: PolyMatrix | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.vectors)

    def matrix(self) -> PolyMatrix:
        return PolyMatrix.from_columns(self.ambient_dim, self.vectors, self.var)


# -- elimination engine --------------------------------------------------------------

class _Elim:
    def __init__(self, M: PolyMatrix, ring: EuclideanRing, transforms: bool):
        self.ring = ring
        self.var = M.var
        self.nrows, self.ncols = M.shape
        self.rows: dict[int, dict[int, LaurentPoly]] = {}
        self.colidx: dict[int, set[int]] = {}
        for j, col in enumerate(M._cols):
            for i, p in col.items():
                self.rows.setdefault(i, {})[j] = p
                self.colidx.setdefault(j, set()).add(i)
        self.transforms = transforms
        if transforms:
            one = LaurentPoly.one(self.var)
            self.U = {i: {i: one} for i in range(self.nrows)}  # row-wise
            self.V = {j: {j: one} for j in range(self.ncols)}  # column-wise
            self.Vi = {j: {j: one} for j in range(self.ncols)}  # row-wise
        self.pivots: list[tuple[int, int, LaurentPoly]] = []

    # elementary operations -----------------------------------------------------

    def _set(self, i: int, j: int, p: LaurentPoly):
        row = self.rows.setdefault(i, {})
        if p.coeffs:
            row[j] = p
            self.colidx.setdefault(j, set()).add(i)
        else:
            if row.pop(j, None) is not None:
                s = self.colidx[j]
                s.discard(i)
                if not s:
                    del self.colidx[j]
            if not row:
                del self.rows[i]

    def row_axpy(self, k: int, i: int, c: LaurentPoly):
        """row_k += c * row_i."""
        rk = self.rows.get(k, {})
        for j, p in list(self.rows[i].items()):
            t = c * p
            old = rk.get(j)
            self._set(k, j, old + t if old is not None else t)
            rk = self.rows.get(k, {})
        if self.transforms:
            _axpy(self.U, k, i, c)

    def col_axpy(self, l: int, j: int, c: LaurentPoly):
        """col_l += c * col_j."""
        for k in list(self.colidx.get(j, ())):
            t = c * self.rows[k][j]
            old = self.rows[k].get(l)
            self._set(k, l, old + t if old is not None else t)
        if self.transforms:
            _axpy(self.V, l, j, c)
            _axpy(self.Vi, j, l, -c)

    # pivoting --------------------------------------------------------------------

    def choose_pivot(self) -> tuple[int, int]:
        measure = self.ring.measure
        colidx = self.colidx
        best = None
        best_key = None
        for i, row in self.rows.items():
            rl = len(row) - 1
            for j, p in row.items():
                key = (measure(p), rl * (len(colidx[j]) - 1), p.bitsize(), i, j)
                if best_key is None or key < best_key:
                    best_key, best = key, (i, j)
                    if key[0] == 0 and key[1] == 0:
                        # unit with nothing else in its row or column
                        return best
        return best

    def run(self):
        ring = self.ring
        while self.rows:
            i, j = self.choose_pivot()
            p = self.rows[i][j]
            clean = True
            for k in sorted(self.colidx[j] - {i}):
                q, r = ring.divrem(self.rows[k][j], p)
                if q.coeffs:
                    self.row_axpy(k, i, -q)
                if r.coeffs:
                    clean = False
            if not clean:
                continue
            # column j now holds only the pivot; clear row i with column ops
            for l in sorted(set(self.rows[i]) - {j}):
                q, r = ring.divrem(self.rows[i][l], p)
                if r.coeffs:
                    clean = False
                if q.coeffs and self.transforms:
                    self.col_axpy(l, j, -q)
                elif q.coeffs:
                    # only row i is touched because column j is otherwise empty
                    self._set(i, l, r)
            if not clean:
                continue
            self.pivots.append((i, j, p))
            self._set(i, j, LaurentPoly.zero(self.var))


def _axpy(rows: dict[int, dict[int, LaurentPoly]], k: int, i: int, c: LaurentPoly):
    src = rows.get(i)
    if not src:
        return
    dst = rows.setdefault(k, {})
    for j, p in src.items():
        t = c * p
        old = dst.get(j)
        v = old + t if old is not None else t
        if v.coeffs:
            dst[j] = v
        else:
            dst.pop(j, None)


def _exponent_gcd(M: PolyMatrix) -> int:
    g = 0
    for _, _, p in M.triplets():
        for e in p.terms:
            g = igcd(g, e)
            if g == 1:
                return 1
    return g


def _content(M: PolyMatrix, ring: EuclideanRing) -> LaurentPoly | None:
    g = None
    for p in {p for _, _, p in M.triplets()}:
        g = p if g is None else ring.gcd(g, p)
        if ring.is_unit(g):
            return None
    return None if g is None else ring.canonical(g)


def snf(M: PolyMatrix, with_transforms: bool = False, ring: EuclideanRing = QY) -> SNFResult:
    """
    Smith normal form over ``ring`` (QY or QLAURENT).

    >>> y = LaurentPoly.gen()
    >>> snf(PolyMatrix.from_dense([[y, 1], [0, y]])).invariant_factors
    [LaurentPoly('1'), LaurentPoly('1*y^2')]
    """
    if not isinstance(ring, EuclideanRing):
        raise UnsupportedRing(f"{ring!r} is not a supported Euclidean ring")
    for _, _, p in M.triplets():
        ring.check(p)
    var = M.var
    g = _exponent_gcd(M)
    work = M if g <= 1 else M.map(lambda p: p.compress_power(g))
    content = _content(work, ring)
    if content is not None:
        work = work.map(lambda p: ring.exact_div(p, content))

    E = _Elim(work, ring, with_transforms)
    E.run()

    pivots = E.pivots
    r = len(pivots)
    diag = [p for _, _, p in pivots]
    # unit pivots first; they never need a divisibility fix-up
    order = sorted(range(r), key=lambda k: (not ring.is_unit(diag[k]), ring.measure(diag[k]), k))
    prow = [pivots[k][0] for k in order]
    pcol = [pivots[k][1] for k in order]
    diag = [diag[k] for k in order]

    U = V = Vi = None
    if with_transforms:
        row_order = prow + [i for i in range(E.nrows) if i not in set(prow)]
        col_order = pcol + [j for j in range(E.ncols) if j not in set(pcol)]
        U = {k: dict(E.U.get(i, {})) for k, i in enumerate(row_order)}
        V = {k: dict(E.V.get(j, {})) for k, j in enumerate(col_order)}
        Vi = {k: dict(E.Vi.get(j, {})) for k, j in enumerate(col_order)}

    # enforce d_k | d_{k+1}
    first = next((k for k, d in enumerate(diag) if not ring.is_unit(d)), r)
    for k in range(first, r):
        for l in range(k + 1, r):
            a, b = diag[k], diag[l]
            if ring.divides(a, b):
                continue
            h, s, t = ring.xgcd(a, b)
            bh = ring.exact_div(b, h)
            ah = ring.exact_div(a, h)
            diag[k], diag[l] = h, a * bh
            if with_transforms:
                # rows: [k; l] <- [[s, t], [-b/h, a/h]] [k; l]
                rk, rl = U.get(k, {}), U.get(l, {})
                U[k] = _lincomb(s, rk, t, rl)
                U[l] = _lincomb(-bh, rk, ah, rl)
                # cols: [k, l] <- [k, l] [[1, -t b/h], [1, s a/h]]
                x, z = -(t * bh), s * ah
                ck, cl = V.get(k, {}), V.get(l, {})
                V[k] = _lincomb(LaurentPoly.one(var), ck, LaurentPoly.one(var), cl)
                V[l] = _lincomb(x, ck, z, cl)
                # inverse of [[1, x], [1, z]] is [[z, -x], [-1, 1]]
                ik, il = Vi.get(k, {}), Vi.get(l, {})
                Vi[k] = _lincomb(z, ik, -x, il)
                Vi[l] = _lincomb(-LaurentPoly.one(var), ik, LaurentPoly.one(var), il)

    # canonical associates; fold the unit into U
    for k in range(r):
        d = diag[k]
        cd = ring.canonical(d)
        if cd != d and with_transforms:
            u_inv = ring.exact_div(cd, d)
            U[k] = {j: u_inv * p for j, p in U.get(k, {}).items()}
        diag[k] = cd

    if content is not None:
        diag = [d * content for d in diag]
    if g > 1:
        diag = [d.substitute_power(g) for d in diag]

    res = SNFResult(invariant_factors=diag, rank=r, shape=M.shape, ring=ring.tag)
    if with_transforms:
        expand = (lambda p: p.substitute_power(g)) if g > 1 else (lambda p: p)
        res.U = _from_rowdict(U, M.nrows, M.nrows, var, expand)
        res.V = _from_coldict(V, M.ncols, M.ncols, var, expand)
        res.V_inv = _from_rowdict(Vi, M.ncols, M.ncols, var, expand)
    return res


def _lincomb(a: LaurentPoly, x: Vector, b: LaurentPoly, z: Vector) -> Vector:
    out: Vector = {}
    if a.coeffs:
        for j, p in x.items():
            out[j] = a * p
    if b.coeffs:
        for j, p in z.items():
            t = b * p
            out[j] = out[j] + t if j in out else t
    return {j: p for j, p in out.items() if p.coeffs}


def _from_rowdict(rows, nrows, ncols, var, f) -> PolyMatrix:
    M = PolyMatrix(nrows, ncols, var)
    for i, row in rows.items():
        for j, p in row.items():
            M._cols[j][i] = f(p)
    return M


def _from_coldict(cols, nrows, ncols, var, f) -> PolyMatrix:
    M = PolyMatrix(nrows, ncols, var)
    for j, col in cols.items():
        M._cols[j] = {i: f(p) for i, p in col.items()}
    return M


def invariant_factors(M: PolyMatrix, ring: EuclideanRing = QY) -> list[LaurentPoly]:
    return snf(M, False, ring).invariant_factors


def kernel_basis(M: PolyMatrix, ring: EuclideanRing = QY) -> KernelBasis:
    """Saturated basis of {v : M v = 0}: the last ncols - rank columns of V."""
    res = snf(M, with_transforms=True, ring=ring)
    vecs = [res.V.column(j) for j in range(res.rank, M.ncols)]
    return KernelBasis(vecs, M.ncols, res.rank, M.var, ring, res.V_inv)


def coords_in_basis(B: KernelBasis, w: Mapping[int, LaurentPoly]) -> list[LaurentPoly]:
    """Coordinates c with sum_k c_k B_k = w; raises NotInSpan otherwise."""
    if B._V_inv is None:
        raise NotInSpan("kernel basis was built without transforms")
    full = B._V_inv.apply(w)
    for k in range(B.rank):
        if k in full:
            raise NotInSpan(f"vector has a component outside the kernel (slot {k})")
    zero = LaurentPoly.zero(B.var)
    coords = [full.get(B.rank + k, zero) for k in range(len(B.vectors))]
    # re-multiply: exact arithmetic makes any mismatch a logic error
    back: Vector = {}
    for c, v in zip(coords, B.vectors):
        if c.coeffs:
            for i, p in v.items():
                t = c * p
                back[i] = back[i] + t if i in back else t
    back = {i: p for i, p in back.items() if p.coeffs}
    if back != {i: p for i, p in w.items() if p.coeffs}:
        raise NotInSpan("coordinates do not reproduce the vector")
    return coords


def quotient_presentation(kernel: KernelBasis, image: Iterable[Mapping[int, LaurentPoly]]) -> SNFResult:
    """SNF of the image columns written in the kernel basis: presents ker / im."""
    cols = []
    for w in image:
        c = coords_in_basis(kernel, w)
        cols.append({k: p for k, p in enumerate(c) if p.coeffs})
    P = PolyMatrix.from_columns(len(kernel.vectors), cols, kernel.var)
    return snf(P, with_transforms=False, ring=kernel.ring)


# -- brute-force oracle ----------------------------------------------------------------

def _det(rows: list[list[LaurentPoly]], var: str) -> LaurentPoly:
    # fraction-free cofactor expansion; only used on tiny minors
    n = len(rows)
    if n == 0:
        return LaurentPoly.one(var)
    if n == 1:
        return rows[0][0]
    total = LaurentPoly.zero(var)
    for j in range(n):
        a = rows[0][j]
        if not a.coeffs:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        t = a * _det(minor, var)
        total = total + t if j % 2 == 0 else total - t
    return total


def minors_gcd_factors(M: PolyMatrix, ring: EuclideanRing = QY) -> list[LaurentPoly]:
    """
    Invariant factors from determinantal divisors: D_k = gcd of all k x k
    minors and d_k = D_k / D_{k-1}. Exponential; for small test matrices only.
    """
    from itertools import combinations

    A = M.to_dense()
    var = M.var
    out = []
    prev = LaurentPoly.one(var)
    for k in range(1, min(M.shape) + 1):
        g = None
        for rs in combinations(range(M.nrows), k):
            for cs in combinations(range(M.ncols), k):
                d = _det([[A[i][j] for j in cs] for i in rs], var)
                if d.coeffs:
                    g = d if g is None else ring.gcd(g, d)
        if g is None:
            break
        g = ring.canonical(g)
        out.append(ring.canonical(ring.exact_div(g, prev)))
        prev = g
    return out
