"""Saturated point sets (maximal omega-packings) on S^{d-1}.

A net is grown by random sequential insertion: uniform candidates are kept
iff they are at spherical distance >= omega from every kept point.  To avoid
drawing billions of doomed candidates near saturation, candidates are drawn
uniformly from a shrinking superset of the still-insertable region, made of
gnomonic cube-face cells that are not yet inside a single cap of radius
omega.  Conditioning on that superset does not change the law of the accepted
points.  Construction stops when no cell survives (the set is then provably
maximal) or after ``rejection_budget`` consecutive rejected candidates.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from . import _kernels as K
from .sphere import cap_measure_fraction, kappa, spherical_distance

log = logging.getLogger(__name__)

DEFAULT_REJECTION_BUDGET = 10_000
MAX_LEVEL0_CELLS = 300_000_000
LEVEL0_REFINE = 1

__all__ = [
    "SaturatedNet",
    "build_saturated_net",
    "lemma1_window",
    "load_net",
    "nearest_net_distance",
    "save_net",
]


@dataclass(frozen=True, eq=False)
class SaturatedNet:
    dim: int
    omega: float
    points: np.ndarray
    saturation_rejections: int
    rng_seed: int | None = None
    exhausted: bool = False  # no insertable cell survived: maximality is certain
    candidates: int = field(default=0, compare=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, self.dim)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if not 0.0 < self.omega <= math.pi / 2:
            raise ValueError(f"omega must lie in (0, pi/2], got {self.omega!r}")

    @property
    def m(self) -> int:
        return self.points.shape[0]

    def __len__(self):
        return self.m

    @property
    def probabilistic(self) -> bool:
        """True when maximality rests on the rejection count alone."""
        return not self.exhausted

    @cached_property
    def tree(self) -> cKDTree:
        return cKDTree(self.points)

    @cached_property
    def buckets(self) -> tuple:
        """Points grouped by gnomonic cube-face cell, about 16 per group (see :func:`group_points`)."""
        return group_points(self.points, 16)

    @cached_property
    def coarse_buckets(self) -> tuple:
        """As :attr:`buckets`, about 256 points per group."""
        return group_points(self.points, 256)

    def min_pair_distance(self) -> float:
        if self.m < 2:
            return math.pi
        dist, _ = self.tree.query(self.points, k=2)
        chord = float(dist[:, 1].min())
        return 2.0 * math.asin(min(1.0, chord / 2.0))

    def verify_packing(self) -> bool:
        """Exhaustive (grid-accelerated) check that all pairwise distances are >= omega."""
        return _packing_violations(self.points, self.omega) == 0

    def __eq__(self, other):
        if not isinstance(other, SaturatedNet):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.omega == other.omega
            and np.array_equal(self.points, other.points)
        )


def group_points(x: np.ndarray, per_group: int, return_order: bool = False) -> tuple:
    """Group unit vectors by gnomonic cube-face cell, about ``per_group`` per cell.

    Returns ``(points, starts, centres, radii)``: group ``b`` is
    ``points[starts[b]:starts[b+1]]``, all within angle ``radii[b]`` of the
    unit vector ``centres[b]``.  With ``return_order`` the permutation
    (``points = x[order]``) is appended.
    """
    m, d = x.shape
    N = max(1, int(round((m / float(per_group) / (2 * d)) ** (1.0 / (d - 1)))))
    a = np.argmax(np.abs(x), axis=1)
    s = x[np.arange(m), a]
    key = (2 * a + (s < 0)).astype(np.int64)
    for k in range(d):
        ck = np.where(a == k, 0.0, x[:, k] / np.abs(s))
        key = key * N + np.clip(((ck + 1.0) * 0.5 * N).astype(np.int64), 0, N - 1)
    order = np.argsort(key, kind="stable")
    pts = np.ascontiguousarray(x[order])
    ks = key[order]
    starts = np.concatenate([[0], np.flatnonzero(np.diff(ks)) + 1, [m]]).astype(np.int64)
    sums = np.add.reduceat(pts, starts[:-1], axis=0)
    centres = np.ascontiguousarray(sums / np.linalg.norm(sums, axis=1, keepdims=True))
    owner = np.repeat(np.arange(len(centres)), np.diff(starts))
    radii = np.zeros(len(centres))
    np.maximum.at(radii, owner, spherical_distance(pts, centres[owner]))
    if return_order:
        return pts, starts, centres, radii + 1e-12, order
    return pts, starts, centres, radii + 1e-12


class _HashGrid:
    """Ambient cube grid (side = twice the chord threshold) over a growable point buffer."""

    def __init__(self, d: int, omega: float, capacity: int):
        self.d = d
        self.R = 2.0 * math.sin(omega / 2.0)
        self.inv_s = 1.0 / (2.0 * self.R)
        self.G = int(math.floor(2.0 * self.inv_s)) + 4
        if self.G ** d >= 2 ** 62:
            raise ValueError(f"omega={omega} is too small for hashing in dimension {d}")
        self.cosw = math.cos(omega)
        self.sinw = math.sin(omega)
        self.npts = 0
        capacity = max(int(capacity), 16)
        size = 1 << int(2 * capacity - 1).bit_length()
        self.pts = np.empty((capacity, d))
        self.nxt = np.full(capacity, K.EMPTY, dtype=np.int64)
        self.keys = np.full(size, K.EMPTY, dtype=np.int64)
        self.heads = np.full(size, K.EMPTY, dtype=np.int64)


def _packing_violations(points: np.ndarray, omega: float) -> int:
    pts = np.ascontiguousarray(points, dtype=float)
    if pts.shape[0] < 2:
        return 0
    grid = _HashGrid(pts.shape[1], omega, pts.shape[0])
    grid.pts[: pts.shape[0]] = pts
    grid.npts = pts.shape[0]
    K.hash_rebuild(grid.pts, grid.npts, grid.keys, grid.heads, grid.nxt, grid.inv_s, grid.G)
    return int(K.min_pair_dot_violations(grid.pts, grid.keys, grid.heads, grid.nxt, grid.inv_s, grid.G, grid.cosw, grid.R))


def _packing_capacity(d: int, omega: float) -> int:
    # caps of radius omega/2 around net points are disjoint
    return int(math.floor(1.0 / cap_measure_fraction(d, omega / 2.0))) + 1


def _as_seed(rng) -> int:
    if isinstance(rng, (int, np.integer)):
        return int(rng)
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(2 ** 63))
    raise TypeError("rng must be an int seed or a numpy Generator")


def build_saturated_net(
    d: int,
    omega: float,
    rng,
    rejection_budget: int = DEFAULT_REJECTION_BUDGET,
    max_level: int | None = None,
) -> SaturatedNet:
    """Grow an omega-separated point set on S^{d-1} until it is saturated.

    ``rng`` is an integer seed or a ``numpy.random.Generator`` (one seed is drawn
    from it); the seed actually used is recorded on the result.
    """
    d = int(d)
    omega = float(omega)
    if d < 3:
        raise ValueError(f"d must be >= 3, got {d}")
    if not 0.0 < omega <= math.pi / 2:
        raise ValueError(f"omega must lie in (0, pi/2], got {omega!r}")
    if rejection_budget < 1:
        raise ValueError("rejection_budget must be >= 1")
    seed = _as_seed(rng)
    gen = np.random.default_rng(seed)

    N = int(math.ceil(LEVEL0_REFINE * 2.0 * math.sqrt(d - 1) / (0.999 * omega)))
    ncell = 2 * d * N ** (d - 1)
    if ncell > MAX_LEVEL0_CELLS:
        raise ValueError(f"omega={omega} needs {ncell} cells in dimension {d}; too fine for this builder")
    deepest = 0
    while 2 * d * (N << (deepest + 1)) ** (d - 1) < 2 ** 62 and deepest < 40:
        deepest += 1
    max_level = deepest if max_level is None else min(int(max_level), deepest)

    grid = _HashGrid(d, omega, _packing_capacity(d, omega))
    killed = np.zeros(ncell, dtype=np.uint8)
    active = np.arange(ncell, dtype=np.int64)
    level = 0
    streak = 0
    candidates = 0
    exhausted = False
    while True:
        if active.size == 0:
            exhausted = True
            break
        ndarts = max(active.size, 1024)
        npts, streak, ncand, nacc, stop = K.throw_darts(
            active, N, d, ndarts, int(gen.integers(2 ** 62)), level == 0, killed,
            grid.pts, grid.npts, grid.keys, grid.heads, grid.nxt, grid.inv_s, grid.G,
            grid.cosw, grid.sinw, grid.R, streak, int(rejection_budget),
        )
        grid.npts = npts
        candidates += ncand
        if stop == 1:
            break
        if stop == 2:
            raise RuntimeError("net exceeded the packing bound; this indicates a distance bug")
        before = active.size
        if level == 0:
            active = np.flatnonzero(killed == 0).astype(np.int64)
        else:
            active = K.cell_scan(active, N, d, 1, grid.pts, grid.npts, grid.cosw)
        log.debug("level %d: %d -> %d cells, %d points, %d/%d accepted", level, before, active.size, npts, nacc, ncand)
        if active.size > 0.5 * before and level < max_level:
            # too little progress at this resolution: halve the cells
            active = K.cell_scan(active, N, d, 2, grid.pts, grid.npts, grid.cosw)
            N *= 2
            level += 1
            if level == 1:
                del killed
                killed = np.zeros(1, dtype=np.uint8)

    points = grid.pts[: grid.npts].copy()
    net = SaturatedNet(
        dim=d,
        omega=omega,
        points=points,
        saturation_rejections=int(streak),
        rng_seed=seed,
        exhausted=exhausted,
        candidates=int(candidates),
    )
    if _packing_violations(points, omega):
        raise RuntimeError("packing invariant violated after construction")
    return net


def lemma1_window(d: int, omega: float, epsilon: float = 1.0) -> tuple[float, float]:
    """Lower and upper bounds on the size of a saturated omega-set on S^{d-1}."""
    if d < 3:
        raise ValueError(f"d must be >= 3, got {d}")
    if not 0.0 < omega < math.pi / 2:
        raise ValueError(f"omega must lie in (0, pi/2), got {omega!r}")
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    ratio = d * kappa(d) / kappa(d - 1)
    scale = omega ** (-(d - 1))
    lower = ratio * scale / (1.0 + epsilon)
    upper = (1.0 + epsilon) * 8.0 ** ((d - 1) / 2.0) * ratio * scale
    return lower, upper


def nearest_net_distance(net: SaturatedNet, p):
    """Spherical distance from ``p`` (one point or a batch) to the closest net point."""
    if net.m == 0:
        raise ValueError("empty net")
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != net.dim:
        raise ValueError(f"dimension mismatch: {p.shape[-1]} vs {net.dim}")
    _, idx = net.tree.query(p)
    return spherical_distance(p, net.points[idx])


_HEADER = re.compile(r"#\s*d=(\d+)\s+omega=(\S+)\s+seed=(\S+)\s+rejections=(\d+)(?:\s+exhausted=(\d))?")


def save_net(net: SaturatedNet, path) -> None:
    header = (
        f"# d={net.dim} omega={net.omega!r} seed={net.rng_seed} "
        f"rejections={net.saturation_rejections} exhausted={int(net.exhausted)}"
    )
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in net.points:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def load_net(path) -> SaturatedNet:
    text = Path(path).read_text().splitlines()
    if not text:
        raise ValueError(f"{path}: empty net file")
    m = _HEADER.match(text[0])
    if not m:
        raise ValueError(f"{path}: bad net header {text[0]!r}")
    d = int(m.group(1))
    omega = float(m.group(2))
    seed = None if m.group(3) == "None" else int(m.group(3))
    rows = [line for line in text[1:] if line.strip()]
    pts = np.array([[float(v) for v in line.split(",")] for line in rows]).reshape(-1, d)
    net = SaturatedNet(
        dim=d,
        omega=omega,
        points=pts,
        saturation_rejections=int(m.group(4)),
        rng_seed=seed,
        exhausted=bool(int(m.group(5) or 0)),
    )
    if not net.verify_packing():
        raise ValueError(f"{path}: points violate the omega-packing condition")
    return net
