"""Geometry on the unit sphere S^{d-1}: points, zones, measures and constants.

Points are plain float arrays of shape ``(d,)`` (or ``(k, d)`` for batches)
normalized to unit length.  A zone is stored as its pole (the unit normal of
the central great sphere) and its spherical half-width ``t``; a point ``x``
belongs to the closed zone iff ``|<pole, x>| <= sin t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import betainc, gammaln

NORM_SLACK = 4.5e-16  # two ulps at 1.0

__all__ = [
    "Arrangement",
    "Constants",
    "Zone",
    "cap_measure_fraction",
    "constants",
    "kappa",
    "sample_uniform",
    "spherical_distance",
    "unit_vector",
    "zone_contains",
    "zone_measure_fraction",
]


def unit_vector(coords) -> np.ndarray:
    """Return ``coords`` scaled to unit length as a float array."""
    v = np.asarray(coords, dtype=float)
    if v.ndim != 1 or v.shape[0] < 2:
        raise ValueError(f"expected a 1-d coordinate vector with d >= 2, got shape {v.shape}")
    norm = np.linalg.norm(v)
    if not np.isfinite(norm) or norm == 0.0:
        raise ValueError("cannot normalize a zero or non-finite vector")
    # already-unit input is returned bit for bit, so normalizing is idempotent
    return v.copy() if abs(norm - 1.0) <= NORM_SLACK else v / norm


def _check_same_dim(p: np.ndarray, q: np.ndarray) -> None:
    if p.shape[-1] != q.shape[-1]:
        raise ValueError(f"dimension mismatch: {p.shape[-1]} vs {q.shape[-1]}")


def spherical_distance(p, q) -> float | np.ndarray:
    """Arc length between unit vectors ``p`` and ``q`` (broadcasts over leading axes).

    Uses ``2 atan2(|p - q|, |p + q|)``, which equals ``arccos <p, q>`` but keeps
    full relative precision for nearly equal or nearly antipodal points.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    _check_same_dim(p, q)
    diff = np.linalg.norm(p - q, axis=-1)
    summ = np.linalg.norm(p + q, axis=-1)
    out = 2.0 * np.arctan2(diff, summ)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class Zone:
    """Closed parallel domain of half-width ``half_width`` around the great sphere ``pole^⊥``."""

    pole: np.ndarray
    half_width: float

    def __post_init__(self):
        pole = unit_vector(self.pole)
        pole.setflags(write=False)
        object.__setattr__(self, "pole", pole)
        hw = float(self.half_width)
        if not 0.0 < hw < math.pi / 2:
            raise ValueError(f"half_width must lie in (0, pi/2), got {hw!r}")
        object.__setattr__(self, "half_width", hw)

    @property
    def dim(self) -> int:
        return self.pole.shape[0]

    @property
    def width(self) -> float:
        return 2.0 * self.half_width

    def contains(self, p, mode: str = "closed"):
        return zone_contains(self, p, mode)

    def __eq__(self, other):
        if not isinstance(other, Zone):
            return NotImplemented
        return self.half_width == other.half_width and np.array_equal(self.pole, other.pole)

    def __repr__(self):
        return f"Zone(pole={self.pole.tolist()}, half_width={self.half_width!r})"


def zone_contains(zone: Zone, p, mode: str = "closed"):
    """Membership of ``p`` (one point or a ``(k, d)`` batch) in ``zone``.

    ``closed`` tests ``|<pole, p>| <= sin t``; ``open`` uses the strict inequality.
    Points exactly on the boundary are inside for closed and outside for open;
    no tolerance band is applied here.
    """
    p = np.asarray(p, dtype=float)
    _check_same_dim(zone.pole, p)
    h = math.sin(zone.half_width)
    a = np.abs(p @ zone.pole)
    if mode == "closed":
        out = a <= h
    elif mode == "open":
        out = a < h
    else:
        raise ValueError(f"mode must be 'closed' or 'open', got {mode!r}")
    return bool(out) if np.ndim(out) == 0 else out


class Arrangement:
    """An ordered list of zones on S^{dim-1}, stored as pole and half-width arrays.

    The arrays are read-only; build a new arrangement to change anything.
    """

    __slots__ = ("dim", "poles", "half_widths")

    def __init__(self, dim: int, poles=None, half_widths=None):
        dim = int(dim)
        if dim < 3:
            raise ValueError(f"arrangements need dim >= 3, got {dim}")
        if poles is None:
            poles = np.empty((0, dim))
        poles = np.array(poles, dtype=float).reshape(-1, dim)
        n = poles.shape[0]
        if half_widths is None:
            half_widths = np.empty(0)
        hw = np.broadcast_to(np.asarray(half_widths, dtype=float), (n,)).copy()
        norms = np.linalg.norm(poles, axis=1)
        if n and (np.any(norms == 0) or not np.all(np.isfinite(poles))):
            raise ValueError("poles must be finite and nonzero")
        if n:
            poles = poles / np.where(np.abs(norms - 1.0) <= NORM_SLACK, 1.0, norms)[:, None]
        if n and not np.all((hw > 0) & (hw < math.pi / 2)):
            raise ValueError("every half_width must lie in (0, pi/2)")
        poles.setflags(write=False)
        hw.setflags(write=False)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "half_widths", hw)

    def __setattr__(self, name, value):
        raise AttributeError("Arrangement is immutable")

    @classmethod
    def from_zones(cls, zones, dim: int | None = None) -> "Arrangement":
        zones = list(zones)
        if dim is None:
            if not zones:
                raise ValueError("dim is required for an empty arrangement")
            dim = zones[0].dim
        if any(z.dim != dim for z in zones):
            raise ValueError("all zones must share the arrangement dimension")
        poles = np.array([z.pole for z in zones]).reshape(-1, dim)
        return cls(dim, poles, [z.half_width for z in zones])

    @property
    def n(self) -> int:
        return self.poles.shape[0]

    def __len__(self):
        return self.n

    @property
    def zones(self) -> list[Zone]:
        return [Zone(u, t) for u, t in zip(self.poles, self.half_widths)]

    @property
    def sines(self) -> np.ndarray:
        return np.sin(self.half_widths)

    def depth(self, points, mode: str = "closed", tol: float = 0.0) -> np.ndarray:
        """Number of zones containing each point of a ``(k, d)`` batch.

        ``tol`` widens (closed) or narrows (open) every zone's slab by that much in
        the ``|<pole, x>|`` coordinate; the exact engines use it for tie handling.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.dim:
            raise ValueError(f"dimension mismatch: {pts.shape[1]} vs {self.dim}")
        if self.n == 0:
            return np.zeros(pts.shape[0], dtype=np.int64)
        h = self.sines
        out = np.empty(pts.shape[0], dtype=np.int64)
        step = max(1, 4_000_000 // max(self.n, 1))
        for s in range(0, pts.shape[0], step):
            a = np.abs(pts[s:s + step] @ self.poles.T)
            if mode == "closed":
                out[s:s + step] = np.count_nonzero(a <= h + tol, axis=1)
            elif mode == "open":
                out[s:s + step] = np.count_nonzero(a < h - tol, axis=1)
            else:
                raise ValueError(f"mode must be 'closed' or 'open', got {mode!r}")
        return out

    def with_half_widths(self, half_widths) -> "Arrangement":
        return Arrangement(self.dim, self.poles, half_widths)

    def __eq__(self, other):
        if not isinstance(other, Arrangement):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.poles, other.poles)
            and np.array_equal(self.half_widths, other.half_widths)
        )

    def __repr__(self):
        return f"Arrangement(dim={self.dim}, n={self.n})"


def sample_uniform(d: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Uniform point(s) on S^{d-1} by normalizing standard Gaussian vectors."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    shape = (d,) if size is None else (int(size), d)
    x = rng.standard_normal(shape)
    norm = np.linalg.norm(x, axis=-1, keepdims=True)
    # a zero Gaussian vector has probability zero; redraw defensively
    while np.any(norm == 0.0):
        bad = (norm == 0.0).reshape(-1)
        x.reshape(-1, d)[bad] = rng.standard_normal((int(bad.sum()), d))
        norm = np.linalg.norm(x, axis=-1, keepdims=True)
    return x / norm


def kappa(d: int) -> float:
    """Volume of the d-dimensional unit ball, computed through log-gamma."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    return math.exp(0.5 * d * math.log(math.pi) - gammaln(0.5 * d + 1.0))


def cap_measure_fraction(d: int, theta: float) -> float:
    """Normalized surface measure of a cap of angular radius ``theta`` on S^{d-1}."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    theta = float(theta)
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    if theta > math.pi / 2:
        return 1.0 - cap_measure_fraction(d, math.pi - theta)
    s2 = math.sin(theta) ** 2
    return 0.5 * float(betainc(0.5 * (d - 1), 0.5, s2))


def zone_measure_fraction(d: int, t: float) -> float:
    """Normalized surface measure of a zone of half-width ``t`` on S^{d-1}.

    Equal to ``1 - 2 cap(pi/2 - t)``; evaluated through the complementary
    incomplete beta so that small ``t`` keeps full precision.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    t = float(t)
    if not 0.0 <= t <= math.pi / 2:
        raise ValueError(f"t must lie in [0, pi/2], got {t!r}")
    return float(betainc(0.5, 0.5 * (d - 1), math.sin(t) ** 2))


@dataclass(frozen=True)
class Constants:
    """Dimension-dependent constants used by the multiplicity and covering bounds.

    ``m_d`` scales the zone half-width, ``c_d`` bounds the size of a saturated
    net at spacing ``alpha/2`` by ``c_d alpha^{-(d-1)}``, and ``C_star_d`` bounds
    the probability that a fixed point lies in an inflated random zone by
    ``C_star_d alpha``.  ``A_d`` is solved lazily.
    """

    d: int
    m_d: float
    kappa_d: float
    kappa_dm1: float
    c_d: float
    C_star_d: float
    epsilon: float = 1.0

    @cached_property
    def A_d(self) -> float:
        from .montecarlo import solve_A_d

        return solve_A_d(self.d)

    @property
    def B_d(self) -> float:
        # any B_d > max(e C*_d, d - 1) works; one unit above the threshold
        return max(math.e * self.C_star_d, self.d - 1) + 1.0

    @property
    def bgw_ratio(self) -> float:
        """``kappa_{d-1} / (d kappa_d)``, which must exceed ``1/sqrt(2 pi d)``."""
        return self.kappa_dm1 / (self.d * self.kappa_d)

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "m_d": self.m_d,
            "kappa_d": self.kappa_d,
            "kappa_dm1": self.kappa_dm1,
            "c_d": self.c_d,
            "C_star_d": self.C_star_d,
            "epsilon": self.epsilon,
        }


def constants(d: int) -> Constants:
    d = int(d)
    if d < 3:
        raise ValueError(f"d must be >= 3, got {d}")
    kd = kappa(d)
    kdm1 = kappa(d - 1)
    m_d = math.sqrt(2.0 * math.pi * d) + 1.0
    c_d = 2.0 * 2.0 ** ((d - 1) / 2.0) * d * kd / kdm1
    c_star = 4.0 * (m_d + 1.0) * (d - 1) * kdm1 / (d * kd)
    out = Constants(d=d, m_d=m_d, kappa_d=kd, kappa_dm1=kdm1, c_d=c_d, C_star_d=c_star)
    if not out.bgw_ratio > 1.0 / math.sqrt(2.0 * math.pi * d):
        raise ArithmeticError(f"kappa ratio inequality fails for d={d}")
    return out
