import pytest

from ybhom.chain import InvalidN, boundary
from ybhom.homology import (
    REFERENCE_TABLE,
    TORSION_1,
    TORSION_2,
    ChainBroken,
    ExpectedResult,
    compare,
    compute_homology,
    expectation,
    h2_formula,
    h3_conjecture,
    kernel_dimension,
    ker3_rank_formula,
    pw_conjecture,
    pw_sequences,
    table_value,
    verify_h2_basis,
)
from ybhom.ring import QLAURENT, LaurentPoly
from ybhom.smith import snf
from ybhom.ybop import InvalidM, build_homflypt, column_normalize_at, kauffman_fixture

y = LaurentPoly.gen("y")


# -- computed examples ------------------------------------------------------------------------


def test_h2_m2():
    res = compute_homology(build_homflypt(2), 2)
    assert res.summary == (2, 1, 1)
    assert res.torsion == [TORSION_1, TORSION_2]
    assert res.describe() == "H_2(m=2) = (2, 1, 1)"


def test_h3_m2():
    assert compute_homology(build_homflypt(2), 3).summary == (2, 2, 2)


def test_h2_m1_is_free():
    res = compute_homology(build_homflypt(1), 2)
    assert res.summary == (1, 0, 0)
    assert res.torsion == []


@pytest.mark.parametrize("m", range(1, 6))
def test_h1_is_free_of_rank_m(m):
    res = compute_homology(build_homflypt(m), 1)
    assert (res.free_rank, res.torsion) == (m, [])


@pytest.mark.parametrize("m", range(2, 6))
def test_h2_matches_closed_form(m):
    res = compute_homology(build_homflypt(m), 2)
    assert compare(res, h2_formula(m)).match


@pytest.mark.parametrize("m, n", [(m, n) for m in (2, 3, 4) for n in (2, 3)])
def test_routes_agree(m, n):
    R = build_homflypt(m)
    a = compute_homology(R, n, method="cokernel")
    b = compute_homology(R, n, method="quotient")
    assert (a.free_rank, a.torsion, a.kernel_dim) == (b.free_rank, b.torsion, b.kernel_dim)


@pytest.mark.parametrize("m, n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_laurent_ring_agrees(m, n):
    R = build_homflypt(m)
    assert compute_homology(R, n, ring=QLAURENT).summary == compute_homology(R, n).summary


@pytest.mark.parametrize("m, n", [(m, n) for m in (2, 3, 4) for n in (1, 2, 3, 4)])
def test_rank_nullity(m, n):
    R = build_homflypt(m)
    rank = snf(boundary(R, n)).rank
    assert kernel_dimension(R, n) + rank == m**n


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_ker3_dimension(m):
    assert kernel_dimension(build_homflypt(m), 3) == ker3_rank_formula(m)


def test_broken_chain_detected():
    K = column_normalize_at(kauffman_fixture(), 2)
    with pytest.raises(ChainBroken):
        compute_homology(K, 2)


def test_invalid_inputs():
    with pytest.raises(InvalidN):
        compute_homology(build_homflypt(2), 0)
    with pytest.raises(ValueError):
        compute_homology(build_homflypt(2), 2, method="guess")


def test_json_shape():
    res = compute_homology(build_homflypt(2), 2)
    exp = h2_formula(2)
    out = res.to_json(exp, True)
    assert out["torsion"] == ["-1 + 1*y^2", "-1 + 1*y^4"]
    assert out["summary"] == [2, 1, 1]
    assert out["expected"] == {"provenance": "Thm5.1", "summary": [2, 1, 1]}
    assert out["match"] is True
    assert set(out) == {"m", "n", "ring", "free_rank", "torsion", "summary",
                        "expected", "match", "convention", "wall_time_ms"}


# -- closed forms -------------------------------------------------------------------------------


@pytest.mark.parametrize("m, summary", [(1, (1, 0, 0)), (2, (2, 1, 1)), (3, (4, 3, 2)), (7, (22, 21, 6))])
def test_h2_formula_values(m, summary):
    assert h2_formula(m).summary == summary


@pytest.mark.parametrize("m, summary", [(1, (1, 0, 0)), (2, (2, 2, 2)), (3, (4, 12, 6)), (7, (42, 232, 42))])
def test_h3_conjecture_values(m, summary):
    assert h3_conjecture(m).summary == summary


@pytest.mark.parametrize("m, value", [(1, 1), (2, 6), (3, 22), (4, 55), (5, 111)])
def test_ker3_formula_values(m, value):
    assert ker3_rank_formula(m) == value


@pytest.mark.parametrize("m", range(3, 8))
def test_formulas_reproduce_table(m):
    assert h2_formula(m).summary == REFERENCE_TABLE[(m, 2)]
    assert h3_conjecture(m).summary == REFERENCE_TABLE[(m, 3)]


def test_formula_rejects_bad_m():
    with pytest.raises(InvalidM):
        h2_formula(0)
    with pytest.raises(InvalidM):
        h3_conjecture(-1)


@pytest.mark.parametrize(
    "n, summary",
    [(2, (2, 1, 1)), (3, (2, 2, 2)), (4, (2, 6, 4)), (5, (2, 13, 7)), (6, (2, 30, 12)), (11, (2, 1221, 143))],
)
def test_pw_values(n, summary):
    assert pw_conjecture(n).summary == summary


@pytest.mark.parametrize("n", range(2, 30))
def test_pw_ranks_add_up(n):
    # free parts of consecutive degrees plus both torsion counts fill C_n
    a, s = pw_sequences(n)
    assert 2**n == 2 + a[n - 1] + s[n - 3] + a[n] + s[n - 2]


def test_pw_fibonacci_partial_sums():
    _, s = pw_sequences(8)
    assert [s[k] for k in range(-1, 8)] == [0, 1, 2, 4, 7, 12, 20, 33, 54]


def test_pw_requires_n2():
    with pytest.raises(InvalidN):
        pw_conjecture(1)


def test_expectation_dispatch():
    assert expectation("thm", 3, 2).provenance == "Thm5.1"
    assert expectation("thm", 3, 3) is None
    assert expectation("table", 4, 3).summary == (8, 35, 12)
    assert expectation("table", 8, 3) is None
    assert expectation("conj-pw", 3, 4) is None
    assert expectation("conj-h3", 5, 3).provenance == "ConjH3"
    assert expectation("none", 2, 2) is None
    with pytest.raises(ValueError):
        expectation("oracle", 2, 2)
    assert table_value(3, 4) is None


def test_compare_reports_differences():
    res = compute_homology(build_homflypt(2), 2)
    good = ExpectedResult(2, 2, 2, 1, 1, "Table")
    bad = ExpectedResult(2, 2, 3, 0, 1, "Table")
    assert compare(res, good).match and compare(res, good).exit_code == 0
    cmp = compare(res, bad)
    assert not cmp.match and cmp.exit_code == 2
    assert len(cmp.differences) == 2


def test_unexpected_torsion_listed():
    res = compute_homology(build_homflypt(2), 2)
    assert res.unexpected_torsion == []
    res.torsion.append(y - 3)
    assert res.summary is None and res.unexpected_torsion == [y - 3]
    assert "k/(" in res.describe()


def test_expected_provenance_validated():
    with pytest.raises(ValueError):
        ExpectedResult(2, 2, 2, 1, 1, "Guess")


@pytest.mark.parametrize("m", [2, 3, 4])
def test_explicit_h2_basis(m):
    assert verify_h2_basis(m)
