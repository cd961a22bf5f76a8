import hashlib
from fractions import Fraction
from importlib import resources
from itertools import combinations, product

import pytest

from ybhom.ring import LaurentPoly, lp_eval
from ybhom.tensor import encode
from ybhom.ybop import (
    KAUFFMAN_SHA256,
    InvalidM,
    YBOperator,
    ZeroColumnSum,
    build_homflypt,
    build_homflypt_inverse,
    build_identity,
    build_jones,
    choose_normalization_point,
    column_normalize_at,
    column_sums,
    kauffman_fixture,
    specialize,
    symmetry_swap,
    verify_inverse,
    verify_ybe,
    ybe_sides,
)

y = LaurentPoly.gen("y")
q = LaurentPoly.gen("q")
Z = LaurentPoly.zero()
I = LaurentPoly.one()


def test_homflypt_m2_matrix_matches_display():
    expected = [
        [I, Z, Z, Z],
        [Z, 1 - y**2, I, Z],
        [Z, y**2, Z, Z],
        [Z, Z, Z, I],
    ]
    assert build_homflypt(2).matrix() == expected


def test_homflypt_inverse_m2_matrix_matches_display():
    expected = [
        [I, Z, Z, Z],
        [Z, Z, y**-2, Z],
        [Z, I, 1 - y**-2, Z],
        [Z, Z, Z, I],
    ]
    assert build_homflypt_inverse(2).matrix() == expected


def test_m1_is_identity():
    assert build_homflypt(1).matrix() == [[I]]
    assert build_jones(1).matrix() == [[-q]]


@pytest.mark.parametrize("m", range(1, 6))
def test_diagonal_pairs_fixed(m):
    R = build_homflypt(m)
    for a in range(1, m + 1):
        assert R.entries[(a, a)] == (((a, a), I),)
        assert build_homflypt_inverse(m).entries[(a, a)] == (((a, a), I),)


def test_invalid_m():
    for f in (build_homflypt, build_homflypt_inverse, build_jones):
        with pytest.raises(InvalidM):
            f(0)


def test_jones_m2_column():
    J = build_jones(2)
    assert J.entry((1, 2), (1, 2)) == q**-1 - q
    assert J.entry((2, 1), (1, 2)) == 1
    assert J.entry((1, 1), (1, 1)) == -q


@pytest.mark.parametrize("m", [1, 2, 3])
def test_jones_satisfies_ybe(m):
    assert verify_ybe(build_jones(m)).holds


@pytest.mark.parametrize("m", range(1, 6))
def test_homflypt_satisfies_ybe(m):
    rep = verify_ybe(build_homflypt(m))
    assert rep.holds and rep.checked == m**3 and rep.failing_triples == []


def test_identity_satisfies_ybe_and_inverse():
    Id = build_identity(3)
    assert verify_ybe(Id).holds
    assert verify_inverse(Id, Id)


@pytest.mark.parametrize("m", range(1, 6))
def test_inverse_pairs(m):
    assert verify_inverse(build_homflypt(m), build_homflypt_inverse(m))


def test_homflypt_is_not_an_involution():
    R = build_homflypt(2)
    sq = R.matmul(R)
    # R^2 (1,2) = ((1-y^2)^2 + y^2)(1,2) + (1-y^2)y^2 (2,1)
    assert sq.entry((1, 2), (1, 2)) == (1 - y**2) ** 2 + y**2
    assert not verify_inverse(R, R)


@pytest.mark.parametrize("m", range(1, 8))
def test_column_unital(m):
    assert all(s == 1 for s in column_sums(build_homflypt(m)).values())


def test_jones_column_sums():
    s = column_sums(build_jones(2))
    assert s[(1, 1)] == -q
    assert s[(1, 2)] == 1 + q**-1 - q
    assert s[(2, 1)] == 1


# -- specialization and normalization -----------------------------------------------------


def _values(R):
    return {r.coeff(0) for r in R.entry_values()}


def test_specialize_at_ysq_one_is_a_swap():
    S = specialize(build_homflypt(2), square=1)
    assert S.entries[(1, 2)] == (((2, 1), I),)
    assert _values(S) == {1}


def test_specialize_at_ysq_minus_two():
    assert _values(specialize(build_homflypt(2), square=-2)) == {1, -2, 3}


def test_specialize_jones_at_q_one():
    S = specialize(build_jones(2), 1)
    # q^-1 - q vanishes, so only -1 and 1 remain as stored entries
    assert _values(S) == {-1, 1}
    assert S.entry((1, 2), (1, 2)).is_zero()


def test_specialize_odd_exponent_rejected():
    from ybhom.ring import OddExponentPresent

    with pytest.raises(OddExponentPresent):
        specialize(build_jones(2), square=2)


def _jones_ysq(point):
    return 1 / lp_eval(1 + q**-1 - q, point)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("point", [2, 3, 5])
def test_jones_normalizes_to_homflypt(m, point):
    N = column_normalize_at(build_jones(m), point)
    H = specialize(build_homflypt(m), square=_jones_ysq(point))
    assert N.matrix() == [[p.with_var("q") for p in row] for row in H.matrix()]


def test_jones_normalized_entry_is_ysq():
    N = column_normalize_at(build_jones(2), 2)
    assert _jones_ysq(2) == -2
    assert N.entry((2, 1), (1, 2)) == LaurentPoly.constant(-2, "q")


def test_normalize_column_unital_operator_is_specialization():
    R = build_homflypt(3)
    assert column_normalize_at(R, 3).matrix() == specialize(R, 3).matrix()


def test_zero_column_sum_reported():
    J = build_jones(2)
    # 1 + q^-1 - q has roots (1 +- sqrt 5)/2, so use the diagonal column instead:
    # -q vanishes only at 0, which the evaluation rejects first; build a custom one
    R = YBOperator(1, {(1, 1): [((1, 1), q - 1)]}, "q")
    with pytest.raises(ZeroColumnSum) as err:
        column_normalize_at(R, 1)
    assert err.value.column == (1, 1)
    assert choose_normalization_point(J) == 2


# -- Kauffman fixture ------------------------------------------------------------------------


def test_fixture_hash_pinned():
    raw = resources.files("ybhom.data").joinpath("kauffman_m4.txt").read_bytes()
    assert hashlib.sha256(raw).hexdigest() == KAUFFMAN_SHA256


def test_fixture_entries():
    K = kauffman_fixture()
    assert K.m == 4 and K.var == "q"
    M = K.matrix()
    assert M[0][0] == q
    assert M[encode((1, 4), 4)][encode((1, 4), 4)] == q - 2 * q**-1 + q**-3
    assert M[3][6] == q**-2 - 1 and M[3][12] == q**-1
    assert sum(1 for row in M for p in row if not p.is_zero()) == 25


def test_fixture_roundtrip_text():
    K = kauffman_fixture()
    assert YBOperator.loads(K.dumps()) == K


def test_fixture_satisfies_ybe():
    assert verify_ybe(kauffman_fixture()).holds


def test_fixture_column_sums_nonzero_at_two():
    sums = column_sums(kauffman_fixture())
    assert all(lp_eval(s, 2) != 0 for s in sums.values())
    assert choose_normalization_point(kauffman_fixture()) == 2


def test_normalized_fixture_fails_ybe():
    K = column_normalize_at(kauffman_fixture(), 2)
    assert all(s == 1 for s in column_sums(K).values())
    rep = verify_ybe(K)
    assert not rep.holds
    t, lhs, rhs = rep.failing_triples[0]
    assert lhs != rhs
    assert rep.failing_triples == sorted(rep.failing_triples, key=lambda f: encode(f[0], 4))


# -- symmetry of the YBE sides ---------------------------------------------------------------------


@pytest.mark.parametrize("m", [3, 4, 5])
def test_symmetry_swap_maps_lhs_to_rhs(m):
    R = build_homflypt(m)
    for a, b, c in combinations(range(1, m + 1), 3):
        lhs, rhs = ybe_sides(R, (a, b, c))
        assert symmetry_swap(lhs, a, c) == rhs


def test_operator_text_roundtrip():
    R = build_homflypt(3)
    assert YBOperator.loads(R.dumps()) == R
    assert YBOperator.loads(build_jones(2).dumps()) == build_jones(2)


def test_matrix_roundtrip():
    for R in (build_homflypt(3), build_jones(3), build_homflypt_inverse(2)):
        assert YBOperator.from_matrix(R.matrix(), R.var) == R


def test_specialize_requires_one_assignment():
    with pytest.raises(ValueError):
        specialize(build_homflypt(2))
    with pytest.raises(ValueError):
        specialize(build_homflypt(2), 2, square=Fraction(4))


def test_verify_ybe_on_all_pairs_product():
    # a non-solution: the m=2 operator sending every pair to (1,1)
    R = YBOperator(2, {ab: [((1, 1), I)] for ab in product((1, 2), repeat=2)})
    # constant maps do satisfy it, so perturb one column
    R2 = YBOperator(2, {**{ab: [((1, 1), I)] for ab in product((1, 2), repeat=2)}, (2, 2): [((2, 1), I)]})
    assert verify_ybe(R).holds
    assert not verify_ybe(R2).holds
