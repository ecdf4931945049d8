"""Exact univariate polynomials over Q and Sturm-sequence root counting.

Coefficients are stored low degree first as :class:`fractions.Fraction`.
Root counting works on integer multiples of the polynomial (a primitive
pseudo-remainder sequence), which keeps coefficient growth manageable up to
degree ~100 while every decision stays exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

__all__ = [
    "RationalPolynomial",
    "cauchy_bound",
    "sturm_real_roots",
    "sturm_sequence",
    "isolate_real_roots",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating-point coefficients are not accepted; pass int, Fraction or str")
    return Fraction(x)


class RationalPolynomial:
    """Immutable polynomial with exact rational coefficients (index = degree)."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable = ()):
        c = [_frac(x) for x in coefficients]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, value) -> "RationalPolynomial":
        return cls([value])

    @classmethod
    def x(cls) -> "RationalPolynomial":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "RationalPolynomial":
        p = cls([lead])
        for r in roots:
            p = p * cls([-_frac(r), 1])
        return p

    @classmethod
    def interpolate(cls, xs: Sequence, ys: Sequence) -> "RationalPolynomial":
        """The unique polynomial of degree < len(xs) through the given points (Newton form)."""
        xs = [_frac(x) for x in xs]
        coef = [_frac(y) for y in ys]
        if len(xs) != len(coef):
            raise ValueError("xs and ys differ in length")
        n = len(xs)
        for j in range(1, n):
            for i in range(n - 1, j - 1, -1):
                coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
        p = cls([coef[-1]]) if coef else cls()
        for i in range(n - 2, -1, -1):
            p = p * cls([-xs[i], 1]) + cls([coef[i]])
        return p

    # -- basic accessors --------------------------------------------------
    @property
    def coefficients(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._c) - 1

    @property
    def leading(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    def __getitem__(self, i):
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    def __iter__(self):
        return iter(self._c)

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalPolynomial([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self._c), len(other._c))
        return RationalPolynomial([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial([-a for a in self._c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._c or not other._c:
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a:
                for j, b in enumerate(other._c):
                    out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = RationalPolynomial([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        dq = len(rem) - len(other._c)
        if dq < 0:
            return RationalPolynomial(), self
        quo = [Fraction(0)] * (dq + 1)
        lead = other.leading
        for k in range(dq, -1, -1):
            q = rem[k + len(other._c) - 1] / lead
            quo[k] = q
            if q:
                for j, b in enumerate(other._c):
                    rem[k + j] -= q * b
        return RationalPolynomial(quo), RationalPolynomial(rem[: len(other._c) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "RationalPolynomial":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    def scale(self, c) -> "RationalPolynomial":
        c = _frac(c)
        return RationalPolynomial([a * c for a in self._c])

    def monic(self) -> "RationalPolynomial":
        if not self._c:
            raise ZeroDivisionError("zero polynomial has no monic form")
        return self.scale(1 / self.leading)

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial([i * a for i, a in enumerate(self._c)][1:])

    def shift(self, h) -> "RationalPolynomial":
        """p(x + h), by repeated synthetic division (exact Taylor shift)."""
        h = _frac(h)
        c = list(self._c)
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] += h * c[j + 1]
        return RationalPolynomial(c)

    def compose(self, other) -> "RationalPolynomial":
        """p(q(x)) by Horner's scheme."""
        other = self._coerce(other)
        out = RationalPolynomial()
        for a in reversed(self._c):
            out = out * other + RationalPolynomial([a])
        return out

    def __call__(self, x):
        """Exact evaluation at an int/Fraction (Horner)."""
        x = _frac(x)
        acc = Fraction(0)
        for a in reversed(self._c):
            acc = acc * x + a
        return acc

    def gcd(self, other) -> "RationalPolynomial":
        """Monic greatest common divisor (zero if both are zero).

        Runs Euclid on primitive integer multiples, which avoids the
        coefficient blow-up of the remainder sequence over Q.
        """
        other = self._coerce(other)
        if not self:
            return other.monic() if other else other
        if not other:
            return self.monic()
        a, b = self.integer_coefficients(), other.integer_coefficients()
        if len(a) < len(b):
            a, b = b, a
        while b:
            a, b = b, _ipoly_pos_prem(a, b)
        return RationalPolynomial(a).monic()

    def squarefree(self) -> "RationalPolynomial":
        """p / gcd(p, p'), made monic: same distinct roots, all simple."""
        if self.degree <= 0:
            return self.monic() if self else self
        g = self.gcd(self.derivative())
        return self.exact_div(g).monic()

    # -- integer view -----------------------------------------------------
    def integer_coefficients(self) -> list[int]:
        """Coefficients of the primitive integer polynomial with positive leading term."""
        if not self._c:
            return []
        den = reduce(math.lcm, (a.denominator for a in self._c), 1)
        ints = [int(a * den) for a in self._c]
        g = reduce(math.gcd, ints, 0)
        ints = [v // g for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        return ints

    # -- comparison / display ---------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return f"RationalPolynomial({[str(a) for a in self._c]})"

    def __str__(self):
        if not self._c:
            return "0"
        terms = []
        for i in range(len(self._c) - 1, -1, -1):
            a = self._c[i]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = -a if a < 0 else a
            if i == 0:
                body = str(mag)
            else:
                coef = "" if mag == 1 else f"{mag}*"
                body = f"{coef}n" + (f"^{i}" if i > 1 else "")
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


# --------------------------------------------------------------------------
# integer-polynomial helpers (lists of int, low degree first)


def _ipoly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _ipoly_primitive(a: list[int]) -> list[int]:
    """Divide by the positive content (signs untouched)."""
    g = reduce(math.gcd, a, 0)
    return [v // g for v in a] if g > 1 else a


def _ipoly_pos_prem(a: list[int], b: list[int]) -> list[int]:
    """Remainder of ``|lc(b)|^k * a`` divided by ``b``: a positive multiple of ``a mod b``."""
    a = list(a)
    lb = b[-1]
    sb = 1 if lb > 0 else -1
    alb = abs(lb)
    nb = len(b)
    while len(a) >= nb:
        lead = a[-1]
        shift = len(a) - nb
        # alb * a - sb * lead * x^shift * b  kills the leading term
        a = [alb * v for v in a]
        f = sb * lead
        for j in range(nb):
            a[shift + j] -= f * b[j]
        a.pop()
        _ipoly_trim(a)
    return _ipoly_primitive(a) if a else a


def _ipoly_derivative(a: list[int]) -> list[int]:
    return [i * a[i] for i in range(1, len(a))]


def _ipoly_sign_at(a: list[int], x: Fraction) -> int:
    """Sign of a(x) computed with integers only."""
    u, v = x.numerator, x.denominator
    deg = len(a) - 1
    acc = 0
    upow = 1
    vpow = v ** deg
    for i, c in enumerate(a):
        if c:
            acc += c * upow * vpow
        upow *= u
        if i < deg:
            vpow //= v
    return (acc > 0) - (acc < 0)


def _ipoly_sign_at_inf(a: list[int], positive: bool) -> int:
    s = 1 if a[-1] > 0 else -1
    if not positive and (len(a) - 1) % 2 == 1:
        s = -s
    return s


# --------------------------------------------------------------------------
# Sturm machinery


def sturm_sequence(p: RationalPolynomial) -> list[list[int]]:
    """Sturm sequence of the square-free part of ``p`` as integer polynomials.

    Each element is a positive multiple of the classical Sturm polynomial, so
    sign variations are unchanged.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no Sturm sequence")
    sq = p.squarefree()
    s0 = sq.integer_coefficients()
    s1 = _ipoly_primitive(_ipoly_derivative(s0))
    seq = [s0]
    if s1:
        seq.append(s1)
    while len(seq) >= 2 and len(seq[-1]) > 1:
        r = _ipoly_pos_prem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-v for v in r])
    return seq


def _variations(signs: Iterable[int]) -> int:
    count = 0
    last = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def _variations_at(seq, x) -> int:
    if x == math.inf:
        return _variations(_ipoly_sign_at_inf(a, True) for a in seq)
    if x == -math.inf:
        return _variations(_ipoly_sign_at_inf(a, False) for a in seq)
    x = _frac(x)
    return _variations(_ipoly_sign_at(a, x) for a in seq)


def sturm_real_roots(p: RationalPolynomial, interval=None, *, sequence=None) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval ``(lo, hi]``.

    ``interval`` defaults to the whole real line; endpoints may be ints,
    Fractions, decimal strings or +-``math.inf``.
    """
    lo, hi = interval if interval is not None else (-math.inf, math.inf)
    lo = lo if lo in (math.inf, -math.inf) else _frac(lo)
    hi = hi if hi in (math.inf, -math.inf) else _frac(hi)
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi}]")
    if p.degree <= 0:
        if p.is_zero():
            raise ValueError("the zero polynomial has infinitely many roots")
        return 0
    seq = sequence if sequence is not None else sturm_sequence(p)
    return _variations_at(seq, lo) - _variations_at(seq, hi)


def cauchy_bound(p: RationalPolynomial) -> Fraction:
    """1 + max |a_i / a_lead|: every complex root has modulus below this."""
    if p.degree < 1:
        raise ValueError("bound is defined for non-constant polynomials")
    lead = abs(p.leading)
    return 1 + max(abs(a) / lead for a in p.coefficients[:-1])


def isolate_real_roots(p: RationalPolynomial, width=Fraction(1, 10 ** 6)) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals ``(lo, hi]`` each holding exactly one distinct real root, of width <= ``width``."""
    if p.degree < 1:
        return []
    width = _frac(width)
    seq = sturm_sequence(p)
    B = cauchy_bound(p)
    out = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        k = _variations_at(seq, lo) - _variations_at(seq, hi)
        if k == 0:
            continue
        if k == 1 and hi - lo <= width:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    return sorted(out)
