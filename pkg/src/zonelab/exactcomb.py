"""Face counts of great-sphere arrangements and the Euler-Poincare polynomial p(d, n).

For ``n`` great spheres in general position on ``S^{d-1}``, ``f_{i,d}(n)`` is
the number of ``i``-dimensional faces of the induced cell decomposition,
given by the recursion

    f_{0,d}(n)   = 2 C(n, d-1)
    f_{i,d}(n)   = n / (d-i-1) * f_{i,d-1}(n-1)          (1 <= i <= d-2)
    f_{d-1,d}(n) = (2/d) f_{d-2,d}(n)                      (d >= 4)

with the planar base case ``f_{0,3} = n(n-1)``, ``f_{1,3} = 2n(n-1)``,
``f_{2,3} = n^2 - n + 2`` and the conventions ``f_{-1,d} = f_{d,d} = 1``.
The last rule counts facets as if every cell were a simplex; ``p(d, n)`` is
the alternating sum ``sum_i (-1)^i f_{i,d}(n)`` with that simplicial facet
count, made monic.  Its roots are the ``n`` for which an all-simplicial
arrangement could exist.

Everything here is exact (``fractions.Fraction`` / Python integers).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from .polynomial import RationalPolynomial, cauchy_bound, isolate_real_roots, sturm_real_roots

__all__ = [
    "FaceVector",
    "binomial_polynomial",
    "check_even_d_conjecture",
    "combinatorics_report",
    "euler_poincare_polynomial",
    "even_conjecture_polynomial",
    "face_polynomials",
    "geometric_face_count_s2",
    "known_factorizations",
    "sturm_real_roots",
    "verify_largest_root_is_d",
    "verify_paper_factorizations",
    "write_report_csv",
    "write_report_json",
]

X = RationalPolynomial.x()


def binomial_polynomial(k: int) -> RationalPolynomial:
    """C(n, k) as a polynomial in n."""
    p = RationalPolynomial([1])
    for j in range(k):
        p = p * RationalPolynomial([-j, 1])
    return p.scale(Fraction(1, math.factorial(k)))


@dataclass(frozen=True)
class FaceVector:
    d: int
    entries: dict  # i -> RationalPolynomial, i = -1..d

    def __getitem__(self, i: int) -> RationalPolynomial:
        return self.entries[i]

    def evaluate(self, n: int) -> dict:
        return {i: p(n) for i, p in self.entries.items()}


@lru_cache(maxsize=None)
def _faces(d: int) -> tuple:
    """(f_{0,d}, ..., f_{d-1,d}) via the recursion, compositions done exactly."""
    if d == 3:
        f0 = X * (X - 1)
        return (f0, f0.scale(2), X * X - X + 2)
    prev = _faces(d - 1)
    out = [binomial_polynomial(d - 1).scale(2)]
    for i in range(1, d - 1):
        out.append((X * prev[i].shift(-1)).scale(Fraction(1, d - i - 1)))
    out.append(out[d - 2].scale(Fraction(2, d)))
    return tuple(out)


def face_polynomials(d: int) -> FaceVector:
    """The face-count polynomials f_{i,d}(n), i = -1..d."""
    d = int(d)
    if d < 3:
        raise ValueError(f"d must be >= 3, got {d}")
    entries = {-1: RationalPolynomial([1])}
    for i, p in enumerate(_faces(d)):
        entries[i] = p
    entries[d] = RationalPolynomial([1])
    return FaceVector(d=d, entries=entries)


# --------------------------------------------------------------------------
# fast exact evaluation (used for large d)


@lru_cache(maxsize=None)
def _top(D: int, m: int) -> Fraction:
    """f_{D-1,D} evaluated at the integer m (the last entry of the D-vector)."""
    if D == 3:
        return Fraction(m * m - m + 2)
    return Fraction(2, D) * m * _top(D - 1, m - 1)


def _binom_at(m: int, k: int) -> Fraction:
    """C(n, k) as a polynomial in n, evaluated at the integer m."""
    num = 1
    for j in range(k):
        num *= m - j
    return Fraction(num, math.factorial(k))


def _face_at(i: int, d: int, m: int) -> Fraction:
    """f_{i,d}(m) by unrolling the recursion down to the last entry of dimension i+1."""
    if i == -1 or i == d:
        return Fraction(1)
    if i == 0:
        return 2 * _binom_at(m, d - 1)
    if i == d - 1:
        return _top(d, m) if d > 3 else Fraction(m * m - m + 2)
    k = d - i - 1  # steps down to dimension i + 1
    if i == 1:
        # the chain stops at the planar base case: f_{1,d}(m) = C(m, d-3) f_{1,3}(m - d + 3) / (d - 2)
        k = d - 3
        r = m - k
        return _binom_at(m, k) * 2 * r * (r - 1) / (d - 2)
    return _binom_at(m, k) * _top(i + 1, m - k)


def _alternating_sum_at(d: int, m: int) -> Fraction:
    total = Fraction(0)
    for i in range(-1, d + 1):
        if i == d - 1:
            # simplicial facet count 2 f_{d-2,d} / d (identical to f_{d-1,d} for d >= 4)
            v = Fraction(2, d) * _face_at(d - 2, d, m)
        else:
            v = _face_at(i, d, m)
        total += v if i % 2 == 0 else -v
    return total


def _alternating_sum_polynomial(d: int) -> RationalPolynomial:
    xs = list(range(d + 1))  # degree is at most d - 1 < d + 1 points
    return RationalPolynomial.interpolate(xs, [_alternating_sum_at(d, m) for m in xs])


@lru_cache(maxsize=None)
def euler_poincare_polynomial(d: int) -> RationalPolynomial:
    """Monic p(d, n) from the alternating face-count sum."""
    d = int(d)
    if d < 3:
        raise ValueError(f"d must be >= 3, got {d}")
    s = _alternating_sum_polynomial(d)
    if s.is_zero():
        raise ArithmeticError(f"alternating sum vanishes identically for d={d}")
    if s.degree != d - 1:
        raise ArithmeticError(f"alternating sum for d={d} has degree {s.degree}, expected {d - 1}")
    return s.monic()


def euler_poincare_polynomial_by_recursion(d: int) -> RationalPolynomial:
    """Same polynomial, assembled from :func:`face_polynomials` (slow, for cross-checks)."""
    fv = face_polynomials(d)
    s = RationalPolynomial()
    for i in range(-1, d + 1):
        p = fv[d - 2].scale(Fraction(2, d)) if i == d - 1 else fv[i]
        s = s + (p if i % 2 == 0 else -p)
    return s.monic()


# --------------------------------------------------------------------------
# checks against the published factorizations


def known_factorizations() -> dict:
    return {
        3: RationalPolynomial.from_roots([3, -2]),
        4: (X - 4) * (X + 1) * X,
        5: (X - 5) * (X ** 3 - X ** 2 - 2 * X - 8),
        6: (X - 6) * (X - 2) * (X - 1) ** 2 * X,
    }


def verify_paper_factorizations() -> dict:
    """d -> whether p(d, n) equals the published factorization, coefficient by coefficient."""
    return {d: euler_poincare_polynomial(d) == q for d, q in known_factorizations().items() if d >= 4}


def quintic_cubic_factor_report() -> dict:
    """Real-root structure of the cubic factor of p(5, n)."""
    cubic = X ** 3 - X ** 2 - 2 * X - 8
    n_real = sturm_real_roots(cubic)
    below5 = sturm_real_roots(cubic, (-cauchy_bound(cubic), 5))
    (lo, hi), = isolate_real_roots(cubic, Fraction(1, 10 ** 9))
    return {"real_roots": n_real, "real_roots_below_5": below5, "isolating_interval": (lo, hi)}


def verify_largest_root_is_d(d_max: int, d_min: int = 3) -> list[dict]:
    """For each d: p(d, d) == 0 and p has no real root in (d, Cauchy bound]."""
    if d_max < 3:
        raise ValueError("d_max must be >= 3")
    rows = []
    for d in range(max(3, d_min), d_max + 1):
        p = euler_poincare_polynomial(d)
        root = p(d) == 0
        B = max(cauchy_bound(p), Fraction(d + 1))
        beyond = sturm_real_roots(p, (d, B))
        rows.append({"d": d, "p_d_is_zero": root, "roots_above_d": beyond, "bound": B, "passed": root and beyond == 0})
    return rows


def even_conjecture_polynomial(d: int) -> RationalPolynomial:
    """(n - d)(n - d + 5) * prod_{i=0}^{d-4} (n - i)."""
    return RationalPolynomial.from_roots([d, d - 5] + list(range(d - 3)))


def check_even_d_conjecture(d: int) -> bool:
    d = int(d)
    if d % 2 or d < 6:
        raise ValueError(f"the conjecture concerns even d >= 6, got {d}")
    return euler_poincare_polynomial(d) == even_conjecture_polynomial(d)


# --------------------------------------------------------------------------
# geometric cross-check on S^2


def geometric_face_count_s2(n: int, rng=None, tol: float = 1e-10, max_resample: int = 100) -> tuple[int, int, int]:
    """(v, e, f) of ``n`` random great circles on S^2, counted from actual geometry.

    Vertices are the distinct pairwise intersection points; each circle is cut
    into as many arcs as it carries vertices; Euler's formula then gives f.
    """
    if not 3 <= n <= 12:
        raise ValueError("desk-scale check supports 3 <= n <= 12")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    for _ in range(max_resample):
        poles = rng.standard_normal((n, 3))
        poles /= np.linalg.norm(poles, axis=1)[:, None]
        pts = []
        for i in range(n):
            for j in range(i + 1, n):
                c = np.cross(poles[i], poles[j])
                c /= np.linalg.norm(c)
                pts.extend((c, -c))
        pts = np.array(pts)
        on = np.abs(pts @ poles.T) <= tol  # incidence: vertex on circle
        if (on.sum(axis=1) != 2).any():
            continue  # a triple point: not in general position
        # distinct vertices (coincident points would also be triple points, but check anyway)
        diff = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
        if (diff[np.triu_indices(len(pts), 1)] <= tol).any():
            continue
        v = len(pts)
        e = int(on.sum())  # a circle with k >= 1 vertices is cut into k arcs
        f = e + 2 - v
        return v, e, f
    raise RuntimeError("could not draw a general-position arrangement")


# --------------------------------------------------------------------------
# reports


def combinatorics_report(d_max: int, even_conjecture: bool = True, d_min: int = 3) -> list[dict]:
    rows = []
    for r in verify_largest_root_is_d(d_max, d_min):
        d = r["d"]
        p = euler_poincare_polynomial(d)
        row = {
            "d": d,
            "p_coefficients": [str(c) for c in p.coefficients],
            "largest_root_is_d": bool(r["passed"]),
            "even_conjecture": (check_even_d_conjecture(d) if (even_conjecture and d % 2 == 0 and d >= 6) else "n/a"),
        }
        rows.append(row)
    return rows


def write_report_json(rows: list[dict], path, header: dict | None = None) -> None:
    doc = dict(header or {})
    doc["rows"] = rows
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def write_report_csv(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["d", "degree", "largest_root_is_d", "even_conjecture", "p_coefficients"])
        for r in rows:
            w.writerow([r["d"], len(r["p_coefficients"]) - 1, r["largest_root_is_d"], r["even_conjecture"], " ".join(r["p_coefficients"])])
