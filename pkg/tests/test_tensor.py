from itertools import product

import pytest

from ybhom.ring import LaurentPoly
from ybhom.tensor import (
    DimensionMismatch,
    EmptyTensor,
    OutOfRange,
    PositionOutOfRange,
    TensorVector,
    apply_at,
    decode,
    drop_first,
    drop_last,
    encode,
)
from ybhom.ybop import build_homflypt, build_homflypt_inverse

y = LaurentPoly.gen("y")
one = LaurentPoly.one()


def vec(m, *terms):
    return TensorVector(m, len(terms[0][1]), {t: c for c, t in terms})


@pytest.mark.parametrize("t, idx", [((1, 1), 0), ((1, 2), 1), ((2, 1), 2), ((2, 2), 3)])
def test_encode_m2(t, idx):
    assert encode(t, 2) == idx
    assert decode(idx, 2, 2) == t


def test_encode_mixed_radix():
    assert encode((2,), 3) == 1
    assert encode((1, 2, 3), 3) == 5


def test_encode_out_of_range():
    with pytest.raises(OutOfRange):
        encode((0, 1), 2)
    with pytest.raises(OutOfRange):
        decode(9, 3, 2)


@pytest.mark.parametrize("m, n", [(m, n) for m in range(1, 5) for n in range(0, 5)])
def test_encode_decode_bijection(m, n):
    seen = set()
    for t in product(range(1, m + 1), repeat=n):
        i = encode(t, m)
        assert decode(i, m, n) == t
        seen.add(i)
    assert seen == set(range(m**n))


def test_apply_at_homflypt_m2():
    R = build_homflypt(2)
    v = apply_at(R, 1, TensorVector.basis(2, (1, 2)))
    assert v == vec(2, (1 - y**2, (1, 2)), (y**2, (2, 1)))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_apply_at_fixes_repeated_letters(m):
    R = build_homflypt(m)
    for a, c in product(range(1, m + 1), repeat=2):
        v = TensorVector.basis(m, (a, a, c))
        assert apply_at(R, 1, v) == v


def test_apply_at_second_position_m3():
    R3 = build_homflypt(3)
    v = apply_at(R3, 2, TensorVector.basis(3, (2, 1, 3)))
    assert v == vec(3, (1 - y**2, (2, 1, 3)), (y**2, (2, 3, 1)))
    with pytest.raises(DimensionMismatch):
        apply_at(build_homflypt(2), 2, TensorVector.basis(3, (2, 1, 3)))


def test_apply_at_position_range():
    R = build_homflypt(2)
    with pytest.raises(PositionOutOfRange):
        apply_at(R, 2, TensorVector.basis(2, (1, 2)))
    with pytest.raises(PositionOutOfRange):
        apply_at(R, 0, TensorVector.basis(2, (1, 2)))


def test_drop_first_and_last():
    assert drop_first(TensorVector.basis(3, (1, 2, 3))) == TensorVector.basis(3, (2, 3))
    v = vec(2, (1 - y**2, (1, 2)), (y**2, (2, 1)))
    assert drop_last(v) == vec(2, (1 - y**2, (1,)), (y**2, (2,)))
    with pytest.raises(EmptyTensor):
        drop_first(TensorVector(2, 0))


def test_drop_first_adds_colliding_coefficients():
    p, q = 3 * y, 1 - y**4
    v = vec(3, (p, (1, 2)), (q, (3, 2)))
    assert drop_first(v) == vec(3, (p + q, (2,)))
    # cancellation removes the term entirely
    w = vec(3, (p, (1, 2)), (-p, (3, 2)))
    assert drop_first(w).is_zero()


def test_far_commutativity_m2_n4():
    R = build_homflypt(2)
    for t in product((1, 2), repeat=4):
        v = TensorVector.basis(2, t)
        assert apply_at(R, 1, apply_at(R, 3, v)) == apply_at(R, 3, apply_at(R, 1, v))


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_apply_then_inverse_is_identity(m):
    R, Ri = build_homflypt(m), build_homflypt_inverse(m)
    for t in product(range(1, m + 1), repeat=3):
        v = TensorVector.basis(m, t)
        for i in (1, 2):
            assert apply_at(Ri, i, apply_at(R, i, v)) == v


def test_vector_text_form():
    v = vec(2, (1 - y**2, (1, 2)), (y**2, (2, 1)))
    assert str(v) == "(1 - 1*y^2)*(1,2) + (1*y^2)*(2,1)"
    assert v.coeffs == {1: 1 - y**2, 2: y**2}
