import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zonelab.polynomial import (
    RationalPolynomial as P,
    cauchy_bound,
    isolate_real_roots,
    sturm_real_roots,
    sturm_sequence,
)

X = P.x()
small_ints = st.integers(-6, 6)
polys = st.lists(st.integers(-20, 20), min_size=1, max_size=7).map(P)
roots = st.lists(st.fractions(min_value=-8, max_value=8, max_denominator=5), min_size=1, max_size=6)


def test_construction_and_printing():
    p = P([-6, -1, 1])
    assert str(p) == "n^2 - n - 6"
    assert p.degree == 2 and p.leading == 1
    assert P().degree < 0 and P().is_zero()
    assert P([1, 0, 0]).degree == 0
    with pytest.raises(TypeError):
        P([0.5])
    assert P.from_roots([3, -2]) == p
    assert P.constant(5)(Fraction(7)) == 5


def test_arithmetic_identities():
    p = X ** 3 - 2 * X + 1
    q = X - 1
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    assert rem.is_zero()
    assert p.exact_div(q) == X ** 2 + X - 1
    with pytest.raises(ArithmeticError):
        (p + 1).exact_div(q)
    with pytest.raises(ZeroDivisionError):
        divmod(p, P())
    assert (p - p).is_zero()
    assert p.derivative() == 3 * X ** 2 - 2
    assert p.shift(1) == p.compose(X + 1)
    assert p.monic() == p
    assert (2 * p).monic() == p


@given(polys, polys)
def test_division_algorithm(a, b):
    if b.is_zero():
        return
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(polys, small_ints)
def test_shift_matches_evaluation(p, h):
    for x in range(-3, 4):
        assert p.shift(h)(x) == p(x + h)


def test_interpolation_exact():
    pts = [0, 1, 2, 3]
    p = P.interpolate(pts, [Fraction(x ** 3 - 1, 3) for x in pts])
    assert p == (X ** 3 - 1).scale(Fraction(1, 3))


@given(roots)
def test_sturm_counts_distinct_roots(rs):
    p = P.from_roots(rs)
    assert sturm_real_roots(p) == len(set(rs))
    lo = min(rs) - 1
    hi = max(rs)
    assert sturm_real_roots(p, (lo, hi)) == len(set(rs))
    assert sturm_real_roots(p, (hi, hi + 10)) == 0


@given(roots)
def test_gcd_and_squarefree(rs):
    p = P.from_roots(rs + rs[:1])
    sf = p.squarefree()
    assert sf.monic() == P.from_roots(sorted(set(rs)))
    g = p.gcd(p.derivative())
    assert (p.exact_div(g)).monic() == sf.monic()


def test_sturm_irreducible_quadratic():
    p = X ** 2 + 1
    assert sturm_real_roots(p) == 0
    assert len(sturm_sequence(p)) >= 2
    with pytest.raises(ValueError):
        sturm_real_roots(P())
    with pytest.raises(ValueError):
        sturm_real_roots(X, (1, 1))


def test_cauchy_bound_and_isolation():
    p = (X - 5) * (X ** 3 - X ** 2 - 2 * X - 8)
    B = cauchy_bound(p)
    ivs = isolate_real_roots(p, Fraction(1, 10 ** 6))
    assert len(ivs) == 2
    for lo, hi in ivs:
        assert -B <= lo < hi <= B
        assert hi - lo <= Fraction(1, 10 ** 6)
        assert sturm_real_roots(p, (lo, hi)) == 1
    assert any(lo < 5 <= hi for lo, hi in ivs)


def test_sign_evaluation_at_infinity():
    p = -(X ** 3) + X
    assert sturm_real_roots(p, (-math.inf, 0)) == 2  # -1 and 0
    assert sturm_real_roots(p, (0, math.inf)) == 1
