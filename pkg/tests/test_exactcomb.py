import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from zonelab.exactcomb import (
    binomial_polynomial,
    check_even_d_conjecture,
    combinatorics_report,
    euler_poincare_polynomial,
    euler_poincare_polynomial_by_recursion,
    face_polynomials,
    geometric_face_count_s2,
    known_factorizations,
    quintic_cubic_factor_report,
    verify_largest_root_is_d,
    verify_paper_factorizations,
    write_report_csv,
    write_report_json,
)
from zonelab.polynomial import RationalPolynomial as P

X = P.x()


def _general_position_faces_s2(n):
    # n great circles in general position: every pair meets in 2 points
    v = 2 * math.comb(n, 2)
    e = 2 * n * (n - 1)
    return v, e, 2 - v + e


@given(st.integers(0, 40), st.integers(0, 8))
def test_binomial_polynomial(n, k):
    assert binomial_polynomial(k)(n) == math.comb(n, k)


def test_planar_base_case():
    fv = face_polynomials(3)
    for n in range(2, 12):
        v, e, f = _general_position_faces_s2(n)
        assert fv[0](n) == v and fv[1](n) == e and fv[2](n) == f
    assert fv[-1] == P([1]) and fv[3] == P([1])


@pytest.mark.parametrize("d", range(4, 21))
def test_simplicial_facet_relation(d):
    fv = face_polynomials(d)
    assert 2 * fv[d - 2] == d * fv[d - 1]


def test_simplicial_relation_fails_in_the_plane():
    # on S^2 the true face count n^2 - n + 2 is not (2/3) of the edge count
    fv = face_polynomials(3)
    assert 2 * fv[1] != 3 * fv[2]


@pytest.mark.parametrize("d", range(4, 9))
def test_recursion_in_n(d):
    fv, prev = face_polynomials(d), face_polynomials(d - 1)
    for i in range(1, d - 1):
        for n in range(d, d + 6):
            assert fv[i](n) == Fraction(n, d - i - 1) * prev[i](n - 1)


def test_vertices_are_pairs_of_points_per_d_minus_1_spheres():
    for d in range(3, 9):
        for n in range(d, d + 5):
            assert face_polynomials(d)[0](n) == 2 * math.comb(n, d - 1)


@pytest.mark.parametrize("d", range(3, 11))
def test_fast_path_matches_recursion(d):
    assert euler_poincare_polynomial(d) == euler_poincare_polynomial_by_recursion(d)


def test_small_dimension_polynomials():
    assert euler_poincare_polynomial(3) == X ** 2 - X - 6
    assert str(euler_poincare_polynomial(3)) == "n^2 - n - 6"
    assert all(verify_paper_factorizations().values())
    assert set(known_factorizations()) == {3, 4, 5, 6}
    with pytest.raises(ValueError):
        euler_poincare_polynomial(2)


@pytest.mark.parametrize("d", [5, 7, 9, 11])
def test_odd_d_has_root_d_times_irreducible_factor(d):
    n = sympy.Symbol("n")
    p = sum(sympy.Rational(c.numerator, c.denominator) * n ** i for i, c in enumerate(euler_poincare_polynomial(d).coefficients))
    factors = sympy.factor_list(p)[1]
    degs = sorted(sympy.degree(f, n) for f, _ in factors)
    assert degs == [1, d - 2]
    assert p.subs(n, d) == 0


def test_quintic_cubic_factor():
    r = quintic_cubic_factor_report()
    assert r["real_roots"] == 1 and r["real_roots_below_5"] == 1
    lo, hi = r["isolating_interval"]
    assert hi - lo <= Fraction(1, 10 ** 9)
    root = np.roots([1, -1, -2, -8]).real[np.abs(np.roots([1, -1, -2, -8]).imag) < 1e-9][0]
    assert float(lo) <= root <= float(hi)


def test_largest_root_small_sweep():
    rows = verify_largest_root_is_d(15)
    assert [r["d"] for r in rows] == list(range(3, 16))
    assert all(r["passed"] for r in rows)
    with pytest.raises(ValueError):
        verify_largest_root_is_d(2)


def test_even_conjecture_small_and_errors():
    assert all(check_even_d_conjecture(d) for d in (6, 8, 10, 12))
    with pytest.raises(ValueError):
        check_even_d_conjecture(7)
    with pytest.raises(ValueError):
        check_even_d_conjecture(4)


@pytest.mark.parametrize("n", [3, 4, 7, 12])
def test_geometric_counts(n, rng):
    assert geometric_face_count_s2(n, rng) == _general_position_faces_s2(n)


def test_geometric_count_range():
    with pytest.raises(ValueError):
        geometric_face_count_s2(2)
    with pytest.raises(ValueError):
        geometric_face_count_s2(13)


def test_reports(tmp_path):
    rows = combinatorics_report(8)
    assert [r["d"] for r in rows] == list(range(3, 9))
    assert rows[3]["even_conjecture"] is True and rows[0]["even_conjecture"] == "n/a"
    assert rows[0]["p_coefficients"] == ["-6", "-1", "1"]
    write_report_json(rows, tmp_path / "r.json", {"seed": 0})
    write_report_csv(rows, tmp_path / "r.csv")
    assert "largest_root_is_d" in (tmp_path / "r.csv").read_text().splitlines()[0]
    assert '"seed": 0' in (tmp_path / "r.json").read_text()
