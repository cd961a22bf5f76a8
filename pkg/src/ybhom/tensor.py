"""Basis bookkeeping for V^{(x)n} on letters 1..m and sparse coefficient vectors."""

from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Iterator, Mapping

from .ring import LaurentPoly, VariableMismatch

if TYPE_CHECKING:
    from .ybop import YBOperator

__all__ = [
    "OutOfRange",
    "PositionOutOfRange",
    "DimensionMismatch",
    "EmptyTensor",
    "encode",
    "decode",
    "all_tuples",
    "TensorVector",
    "apply_at",
    "drop_first",
    "drop_last",
]


class OutOfRange(IndexError):
    pass


class PositionOutOfRange(IndexError):
    pass


class DimensionMismatch(ValueError):
    pass


class EmptyTensor(ValueError):
    pass


def encode(letters: Iterable[int], m: int) -> int:
    """
    Mixed-radix index of a basis tuple, leftmost letter most significant.

    >>> encode((1, 2, 3), 3)
    5
    """
    idx = 0
    for a in letters:
        if not 1 <= a <= m:
            raise OutOfRange(f"letter {a} outside 1..{m}")
        idx = idx * m + (a - 1)
    return idx


def decode(index: int, m: int, n: int) -> tuple[int, ...]:
    if m < 1 or n < 0 or not 0 <= index < m**n:
        raise OutOfRange(f"index {index} outside [0, {m}^{n})")
    out = [0] * n
    for k in range(n - 1, -1, -1):
        index, r = divmod(index, m)
        out[k] = r + 1
    return tuple(out)


def all_tuples(m: int, n: int) -> Iterator[tuple[int, ...]]:
    """Basis tuples of V^{(x)n} in index order."""
    from itertools import product

    return product(range(1, m + 1), repeat=n)


class TensorVector:
    """Sparse element of V^{(x)n}: basis tuple -> nonzero LaurentPoly."""

    __slots__ = ("m", "n", "var", "_terms")

    def __init__(self, m: int, n: int, terms: Mapping[tuple[int, ...], LaurentPoly] | None = None, var: str = "y"):
        self.m = m
        self.n = n
        self.var = var
        clean: dict[tuple[int, ...], LaurentPoly] = {}
        for t, c in (terms or {}).items():
            t = tuple(t)
            if len(t) != n or not all(1 <= a <= m for a in t):
                raise OutOfRange(f"basis tuple {t} not in X^{n} for m={m}")
            if c.var != var and c.coeffs:
                raise VariableMismatch(f"{c.var!r} vs {var!r}")
            if c.coeffs:
                clean[t] = c
        self._terms = clean

    @classmethod
    def basis(cls, m: int, letters: Iterable[int], var: str = "y") -> TensorVector:
        t = tuple(letters)
        return cls(m, len(t), {t: LaurentPoly.one(var)}, var)

    @classmethod
    def _trusted(cls, m: int, n: int, terms: dict, var: str) -> TensorVector:
        v = cls.__new__(cls)
        v.m, v.n, v.var = m, n, var
        v._terms = {t: c for t, c in terms.items() if c.coeffs}
        return v

    @property
    def terms(self) -> dict[tuple[int, ...], LaurentPoly]:
        return dict(self._terms)

    @property
    def coeffs(self) -> dict[int, LaurentPoly]:
        """Index-keyed view (the encoded basis)."""
        return {encode(t, self.m): c for t, c in self._terms.items()}

    def items(self):
        return sorted(self._terms.items())

    def __getitem__(self, t) -> LaurentPoly:
        return self._terms.get(tuple(t), LaurentPoly.zero(self.var))

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _same_space(self, other: TensorVector):
        if (self.m, self.n) != (other.m, other.n):
            raise DimensionMismatch(f"({self.m},{self.n}) vs ({other.m},{other.n})")

    def __add__(self, other: TensorVector) -> TensorVector:
        self._same_space(other)
        out = dict(self._terms)
        for t, c in other._terms.items():
            out[t] = out[t] + c if t in out else c
        return TensorVector._trusted(self.m, self.n, out, self.var)

    def __neg__(self) -> TensorVector:
        return TensorVector._trusted(self.m, self.n, {t: -c for t, c in self._terms.items()}, self.var)

    def __sub__(self, other: TensorVector) -> TensorVector:
        return self + (-other)

    def __rmul__(self, k) -> TensorVector:
        return TensorVector._trusted(self.m, self.n, {t: k * c for t, c in self._terms.items()}, self.var)

    def __eq__(self, other):
        if not isinstance(other, TensorVector):
            return NotImplemented
        return (self.m, self.n) == (other.m, other.n) and self._terms == other._terms

    def __hash__(self):
        return hash((self.m, self.n, frozenset(self._terms.items())))

    def map_basis(self, f) -> TensorVector:
        """Linear extension of a map on basis tuples (f returns a tuple)."""
        out: dict = {}
        n = None
        for t, c in self._terms.items():
            s = f(t)
            n = len(s)
            out[s] = out[s] + c if s in out else c
        return TensorVector._trusted(self.m, self.n if n is None else n, out, self.var)

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"({c})*({','.join(map(str, t))})" for t, c in self.items())

    __repr__ = __str__


def apply_at(R: "YBOperator", i: int, v: TensorVector) -> TensorVector:
    """Apply R to tensor factors (i, i+1), 1-based; identity elsewhere."""
    if R.m != v.m:
        raise DimensionMismatch(f"operator on m={R.m}, vector on m={v.m}")
    if not 1 <= i <= v.n - 1:
        raise PositionOutOfRange(f"position {i} not in 1..{v.n - 1}")
    if v._terms and R.var != v.var:
        raise VariableMismatch(f"{R.var!r} vs {v.var!r}")
    j = i - 1
    out: dict = {}
    table = R.entries
    for t, c in v._terms.items():
        for (p, q), r in table.get((t[j], t[j + 1]), ()):
            s = t[:j] + (p, q) + t[j + 2:]
            term = r * c
            out[s] = out[s] + term if s in out else term
    return TensorVector._trusted(v.m, v.n, out, R.var if v._terms else v.var)


def drop_first(v: TensorVector) -> TensorVector:
    if v.n < 1:
        raise EmptyTensor("cannot drop a factor from V^0")
    w = v.map_basis(lambda t: t[1:])
    w.n = v.n - 1
    return w


def drop_last(v: TensorVector) -> TensorVector:
    if v.n < 1:
        raise EmptyTensor("cannot drop a factor from V^0")
    w = v.map_basis(lambda t: t[:-1])
    w.n = v.n - 1
    return w
