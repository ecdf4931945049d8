"""Zone constructions and the engines that certify their multiplicity and coverage.

Two families of engines:

* exact on S^2: closed depth is upper semicontinuous and constant on the open
  faces of the arrangement of the 2n boundary circles, so its maximum is
  attained at a vertex (pairwise circle intersection), on a vertex-free circle
  or anywhere if there are no circles.  Coverage fails iff some boundary arc
  has uncovered points just outside its zone; arc midpoints decide that.
* net based, any dimension: if every point of the sphere is within ``omega``
  of a net point, the true depth anywhere is at most the depth of the zones
  inflated by ``omega`` at some net point, and the zones cover the sphere as
  soon as the zones deflated by ``omega`` cover the net.

All boundary comparisons in the exact engines use the tie tolerance
``TIE_TOL`` in the ``|<pole, x>|`` coordinate.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import _kernels as K
from .nets import SaturatedNet, group_points
from .sphere import Arrangement, sample_uniform

TIE_TOL = 1e-10
TANGENT_DISC = 1e-20
PROBE_COUNT = 100_000
PERTURBATION = 1e-7
BUCKET_SIZE = 16  # candidate points per spatial bucket in the exact engines

__all__ = [
    "CoverageCertificate",
    "DepthCertificate",
    "coverage_certificate",
    "exact_coverage_s2",
    "exact_max_multiplicity_s2",
    "fejes_toth_configuration",
    "find_multiplicity3_width",
    "find_tilted_five_witness",
    "interior_multiplicity_probe_s2",
    "load_arrangement",
    "net_depth_bounds",
    "net_multiplicity_upper_bound",
    "orthogonal_zones",
    "pole_plus_equator",
    "sampled_lower_bound",
    "save_arrangement",
    "tilted_five_zones",
]


# --------------------------------------------------------------------------
# certificates


def _vec(w):
    return None if w is None else [float(v) for v in w]


@dataclass(frozen=True)
class DepthCertificate:
    """A bound on the maximum closed depth.

    ``exact_s2`` is the exact value, ``net_upper_bound`` an upper bound valid
    when the net's covering radius is at most ``net_omega <= inflation``, and
    ``sampled_lower_bound`` a lower bound attained at ``witness``.
    """

    kind: str
    value: int
    witness: tuple | None
    net_omega: float = 0.0
    inflation: float = 0.0
    degenerate: bool = False

    def to_dict(self) -> dict:
        out = asdict(self)
        out["witness"] = _vec(self.witness)
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "DepthCertificate":
        w = doc.get("witness")
        return cls(
            kind=doc["kind"],
            value=int(doc["value"]),
            witness=None if w is None else tuple(float(v) for v in w),
            net_omega=float(doc.get("net_omega", 0.0)),
            inflation=float(doc.get("inflation", 0.0)),
            degenerate=bool(doc.get("degenerate", False)),
        )


@dataclass(frozen=True)
class CoverageCertificate:
    """Whether the closed zones cover the sphere.

    ``covered`` is ``None`` when no engine could decide.  A ``False`` outcome
    always carries a witness lying outside every closed zone.
    """

    covered: bool | None
    kind: str
    deflation: float = 0.0
    witness: tuple | None = None
    degenerate: bool = False

    def to_dict(self) -> dict:
        out = asdict(self)
        out["witness"] = _vec(self.witness)
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "CoverageCertificate":
        w = doc.get("witness")
        return cls(
            covered=doc["covered"],
            kind=doc["kind"],
            deflation=float(doc.get("deflation", 0.0)),
            witness=None if w is None else tuple(float(v) for v in w),
            degenerate=bool(doc.get("degenerate", False)),
        )


# --------------------------------------------------------------------------
# constructions


def fejes_toth_configuration(d: int, n: int, half_width: float) -> Arrangement:
    """``n`` zones whose central circles share the axis through (0,0,+-1), equally rotated."""
    if d != 3:
        raise ValueError("the Fejes Toth configuration is implemented for d = 3 only")
    if n < 1:
        raise ValueError("n must be >= 1")
    k = np.arange(n)
    poles = np.stack([np.cos(k * np.pi / n), np.sin(k * np.pi / n), np.zeros(n)], axis=1)
    return Arrangement(3, poles, half_width)


def orthogonal_zones(d: int, half_width: float) -> Arrangement:
    """``d`` zones with the coordinate vectors as poles."""
    if d < 3:
        raise ValueError("d must be >= 3")
    return Arrangement(d, np.eye(d), half_width)


def _meridians() -> np.ndarray:
    k = np.arange(3)
    return np.stack([np.cos(k * np.pi / 3), np.sin(k * np.pi / 3), np.zeros(3)], axis=1)


def pole_plus_equator(half_width: float) -> Arrangement:
    """Three meridian zones through (0,0,+-1) plus the equatorial zone."""
    poles = np.vstack([_meridians(), [0.0, 0.0, 1.0]])
    return Arrangement(3, poles, half_width)


def tilted_five_zones(half_width: float, tilt: float) -> Arrangement:
    """The meridian zones plus two copies of the equatorial zone tilted by +-tilt about the y-axis.

    The y-axis lies on the central circle of the first meridian zone, halfway
    between two of the six holes that open up in the four-zone configuration
    just below its coverage threshold.  Tilting about it lifts one copy and
    lowers the other over every hole, so each hole is covered by exactly one
    copy.  (Tilting about the x-axis, which points into a hole, moves both
    copies the same way there and never helps.)
    """
    s, c = math.sin(tilt), math.cos(tilt)
    poles = np.vstack([_meridians(), [-s, 0.0, c], [s, 0.0, c]])
    return Arrangement(3, poles, half_width)


# --------------------------------------------------------------------------
# exact engines on S^2


def _require_s2(arr: Arrangement) -> None:
    if arr.dim != 3:
        raise ValueError(f"exact engines need dim = 3, got {arr.dim}")


def _circles(arr: Arrangement):
    """Boundary circles as planes <a, x> = c, with the owning zone index."""
    h = arr.sines
    a = np.vstack([arr.poles, arr.poles])
    c = np.concatenate([h, -h])
    owner = np.concatenate([np.arange(arr.n), np.arange(arr.n)])
    return a, c, owner


def _circle_point(a, c) -> np.ndarray:
    """One point on each circle <a, x> = c (a unit, |c| < 1)."""
    # a unit vector orthogonal to a, from the coordinate axis least aligned with a
    e = np.zeros_like(a)
    e[np.arange(len(a)), np.argmin(np.abs(a), axis=1)] = 1.0
    v = e - (e * a).sum(axis=1, keepdims=True) * a
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return c[:, None] * a + np.sqrt(1.0 - c * c)[:, None] * v


def _intersections(a, c, owner, flags: list, pairs_per_chunk: int = 500_000):
    """Pairwise intersection points of the circles, in chunks.

    Yields ``(points, j, k)`` where circles ``j`` and ``k`` meet at each point.
    Appends ``True`` to ``flags`` when coincident or tangent circles are met.
    """
    m = len(c)
    jj, kk = np.triu_indices(m, 1)
    keep = owner[jj] != owner[kk]  # the two circles of one zone are parallel
    jj, kk = jj[keep], kk[keep]
    for s in range(0, len(jj), pairs_per_chunk):
        j, k = jj[s:s + pairs_per_chunk], kk[s:s + pairs_per_chunk]
        aj, ak, cj, ck = a[j], a[k], c[j], c[k]
        g = (aj * ak).sum(axis=1)
        det = 1.0 - g * g
        par = det < 1e-14
        if par.any():
            # parallel planes: identical circles iff the offsets agree
            if (np.abs(cj[par] - np.sign(g[par]) * ck[par]) <= TIE_TOL).any():
                flags.append(True)
            ok = ~par
            j, k, aj, ak, cj, ck, g, det = j[ok], k[ok], aj[ok], ak[ok], cj[ok], ck[ok], g[ok], det[ok]
        alpha = (cj - g * ck) / det
        beta = (ck - g * cj) / det
        disc = 1.0 - (alpha * cj + beta * ck)
        if (np.abs(disc) < TANGENT_DISC).any():
            flags.append(True)
        hit = disc >= -TANGENT_DISC
        base = alpha[hit, None] * aj[hit] + beta[hit, None] * ak[hit]
        off = np.sqrt(np.maximum(disc[hit], 0.0) / det[hit])[:, None] * np.cross(aj[hit], ak[hit])
        pts = np.vstack([base + off, base - off])
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        jh, kh = j[hit], k[hit]
        yield pts, np.concatenate([jh, jh]), np.concatenate([kh, kh])


def exact_max_multiplicity_s2(arr: Arrangement) -> DepthCertificate:
    """Exact maximum closed depth on S^2.

    Candidates, in this order: the point (0,0,1), one point per boundary
    circle, then every pairwise circle intersection.  The witness is the first
    candidate attaining the maximum.
    """
    _require_s2(arr)
    north = np.array([0.0, 0.0, 1.0])
    if arr.n == 0:
        return DepthCertificate("exact_s2", 0, tuple(north))
    a, c, owner = _circles(arr)
    poles = np.ascontiguousarray(arr.poles)
    bounds = arr.sines + TIE_TOL
    best, witness = -1, None

    def consider(pts):
        nonlocal best, witness
        if len(pts) == 0:
            return
        if len(pts) * arr.n < 1_000_000:
            g = np.ascontiguousarray(pts)
            v, i = K.max_depth(g, poles, bounds)
        else:
            g, starts, centres, radii, order = group_points(pts, BUCKET_SIZE, return_order=True)
            v, i = K.bucketed_first_max_depth(g, order, starts, centres, radii, poles, bounds)
        if v > best:
            best, witness = int(v), g[i]

    consider(north[None, :])
    consider(_circle_point(a, c))
    flags: list = []
    for pts, _, _ in _intersections(a, c, owner, flags):
        consider(pts)
    degenerate = bool(flags)
    return DepthCertificate("exact_s2", best, tuple(float(v) for v in witness), degenerate=degenerate)


def _tangent_normals(a, c, x):
    """Unit tangent vectors at ``x`` pointing to increasing <a, x> (across circle <a,x>=c)."""
    g = a - (a * x).sum(axis=1, keepdims=True) * x
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def exact_coverage_s2(arr: Arrangement) -> CoverageCertificate:
    """Decide coverage of S^2 by the closed zones.

    If the uncovered set is nonempty its boundary contains an arc of some
    boundary circle; along such an arc (between consecutive crossings) the
    arc is strictly outside every other zone, so the arc midpoint pushed a
    little outward is an uncovered point.  Otherwise every arc midpoint is
    inside another zone and the zones cover.
    """
    _require_s2(arr)
    if arr.n == 0:
        return CoverageCertificate(False, "exact_s2", 0.0, (0.0, 0.0, 1.0))
    a, c, owner = _circles(arr)
    m = len(c)
    # angular parameter of every crossing on every circle
    p0 = _circle_point(a, c)
    centre = c[:, None] * a
    e1 = p0 - centre
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(a, e1)
    flags: list = []
    circ, ang = [], []
    for pts, j, k in _intersections(a, c, owner, flags):
        for idx in (j, k):
            rel = pts - centre[idx]
            circ.append(idx.astype(np.int32))
            ang.append(np.arctan2((rel * e2[idx]).sum(axis=1), (rel * e1[idx]).sum(axis=1)))
    degenerate = bool(flags)
    circ = np.concatenate(circ) if circ else np.empty(0, np.int32)
    ang = np.concatenate(ang) if ang else np.empty(0)
    order = np.lexsort((ang, circ))
    circ, ang = circ[order], ang[order]
    del order
    # arc midpoints: between consecutive crossings, wrapping around each circle;
    # a circle without crossings gets a single probe point
    counts = np.bincount(circ, minlength=m)
    first = np.concatenate([[0], np.cumsum(counts)[:-1]])
    nxt = np.arange(1, len(ang) + 1)
    last = first + counts - 1
    has = counts > 0
    nxt[last[has]] = first[has]
    wrap = np.zeros(len(ang))
    wrap[last[has]] = 2 * np.pi
    mid = 0.5 * (ang + ang[nxt] + wrap)
    del nxt, wrap, ang
    lonely = np.flatnonzero(~has)
    circ = np.concatenate([circ, lonely.astype(np.int32)])
    mid = np.concatenate([mid, np.zeros(len(lonely))])

    h = arr.sines
    poles = np.ascontiguousarray(arr.poles)
    block = 1_000_000
    for s in range(0, len(mid), block):
        ci, th = circ[s:s + block], mid[s:s + block]
        r = np.sqrt(np.maximum(0.0, 1.0 - c[ci] ** 2))
        pts = centre[ci] + r[:, None] * (np.cos(th)[:, None] * e1[ci] + np.sin(th)[:, None] * e2[ci])
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        # where does each arc midpoint sit relative to the zones other than its own?
        g, starts, centres, radii, order = group_points(pts, BUCKET_SIZE, return_order=True)
        cls = np.empty(len(pts), dtype=np.int8)
        cls[order] = K.classify_outside(g, owner[ci[order]], starts, centres, radii, poles, h, TIE_TOL)
        degenerate |= bool((cls == 1).any())
        for q in np.flatnonzero(cls == 2):
            i, x = ci[q], pts[q]
            dots = np.abs(poles @ x) - h
            dots[owner[i]] = np.inf
            margin = dots.min()
            outward = _tangent_normals(a[i:i + 1], c[i:i + 1], x)[0] * np.sign(c[i])
            for eps in (min(1e-6, 0.5 * margin), 1e-9, 0.25 * margin):
                w = x + eps * outward
                w /= np.linalg.norm(w)
                if arr.depth(w[None, :], "closed")[0] == 0:
                    return CoverageCertificate(False, "exact_s2", 0.0, tuple(float(v) for v in w), degenerate)
            degenerate = True
    return CoverageCertificate(True, "exact_s2", 0.0, None, degenerate)


def interior_multiplicity_probe_s2(arr: Arrangement, samples: int, rng) -> int:
    """Lower bound on the maximum open depth on S^2.

    Probes each circle crossing pushed by ``PERTURBATION`` into the four
    quadrants it separates, plus ``samples`` uniform points.
    """
    _require_s2(arr)
    if arr.n == 0:
        return 0
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    a, c, owner = _circles(arr)
    best = 0
    for pts, j, k in _intersections(a, c, owner, []):
        nj = _tangent_normals(a[j], c[j], pts)
        nk = _tangent_normals(a[k], c[k], pts)
        for sj in (-1.0, 1.0):
            for sk in (-1.0, 1.0):
                q = pts + PERTURBATION * (sj * nj + sk * nk)
                q /= np.linalg.norm(q, axis=1, keepdims=True)
                if len(q):
                    best = max(best, int(arr.depth(q, "open").max()))
    base = np.vstack([[0.0, 0.0, 1.0], _circle_point(a, c)])
    best = max(best, int(arr.depth(base, "open").max()))
    if samples > 0:
        x = sample_uniform(3, rng, int(samples))
        best = max(best, int(arr.depth(x, "open").max()))
    return best


# --------------------------------------------------------------------------
# threshold searches for the four- and five-zone constructions


def _bisect(pred, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Shrink [lo, hi] with pred(lo) false and pred(hi) true to width <= tol."""
    if pred(lo) or not pred(hi):
        raise ValueError(f"bisection bracket [{lo}, {hi}] does not straddle the threshold")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def _threshold_pair(build, t_min: float, t_max: float, tol: float):
    """(coverage threshold, multiplicity-4 onset) brackets for a one-parameter family."""
    cov = _bisect(lambda t: bool(exact_coverage_s2(build(t)).covered), t_min, t_max, tol)
    mult = _bisect(lambda t: exact_max_multiplicity_s2(build(t)).value >= 4, t_min, t_max, tol)
    return cov, mult


def find_multiplicity3_width(tol: float = 1e-10) -> tuple[float, float]:
    """Interval of half-widths where the four-zone configuration covers with multiplicity 3.

    ``t_lo`` is the covered end of the coverage bracket and ``t_hi`` the
    multiplicity-3 end of the multiplicity-4 bracket; both brackets have width
    at most ``tol``.
    """
    (c_lo, c_hi), (m_lo, m_hi) = _threshold_pair(pole_plus_equator, 1e-3, math.pi / 2 - 1e-6, tol)
    if not c_hi < m_lo:
        raise ArithmeticError(f"no multiplicity-3 covering: coverage from {c_hi}, multiplicity 4 from {m_hi}")
    return c_hi, m_lo


def find_tilted_five_witness(tilts=None, tol: float = 1e-10) -> dict:
    """Search tilts for a half-width at which the five tilted zones cover with multiplicity 3.

    For each tilt the coverage threshold and the multiplicity-4 onset are
    bisected; the first tilt with a nonempty gap is returned with the gap and
    the midpoint half-width, verified with both exact engines.
    """
    if tilts is None:
        tilts = np.round(np.linspace(0.01, 0.2, 20), 6)
    for tau in tilts:
        tau = float(tau)
        try:
            (_, c_hi), (m_lo, _) = _threshold_pair(lambda t: tilted_five_zones(t, tau), 1e-3, math.pi / 2 - 1e-6, tol)
        except ValueError:
            continue
        if c_hi < m_lo:
            t = 0.5 * (c_hi + m_lo)
            arr = tilted_five_zones(t, tau)
            cov = exact_coverage_s2(arr)
            mult = exact_max_multiplicity_s2(arr)
            if cov.covered and mult.value == 3:
                return {"tilt": tau, "half_width": t, "t_lo": c_hi, "t_hi": m_lo, "coverage": cov, "multiplicity": mult}
    raise ArithmeticError("no tilt in the search grid gives a multiplicity-3 covering")


# --------------------------------------------------------------------------
# sampled and net-based certificates (any dimension)


def sampled_lower_bound(arr: Arrangement, points) -> DepthCertificate:
    """Max closed depth over the given points: an unconditional lower bound."""
    pts = np.ascontiguousarray(np.atleast_2d(points), dtype=float)
    if pts.shape[1] != arr.dim:
        raise ValueError(f"dimension mismatch: {pts.shape[1]} vs {arr.dim}")
    if arr.n == 0 or len(pts) == 0:
        w = tuple(float(v) for v in pts[0]) if len(pts) else None
        return DepthCertificate("sampled_lower_bound", 0, w)
    best, i = K.max_depth(pts, np.ascontiguousarray(arr.poles), np.ascontiguousarray(arr.sines))
    return DepthCertificate("sampled_lower_bound", int(best), tuple(float(v) for v in pts[i]))


def _check_dims(arr: Arrangement, net: SaturatedNet) -> None:
    if arr.dim != net.dim:
        raise ValueError(f"dimension mismatch: arrangement {arr.dim} vs net {net.dim}")
    if net.m == 0:
        raise ValueError("empty net")


def net_depth_bounds(arr: Arrangement, net: SaturatedNet, inflation: float | None = None):
    """(upper, lower) depth certificates from one pass over the net.

    The upper bound counts zones inflated by ``inflation`` at every net point;
    the lower bound is the plain closed depth at the best net point.
    """
    _check_dims(arr, net)
    inflation = net.omega if inflation is None else float(inflation)
    if inflation < net.omega:
        raise ValueError(f"inflation {inflation} is below the net spacing {net.omega}")
    if arr.n == 0:
        w = tuple(float(v) for v in net.points[0])
        return (DepthCertificate("net_upper_bound", 0, w, net.omega, inflation),
                DepthCertificate("sampled_lower_bound", 0, w))
    pts, starts, centres, radii = net.buckets
    hi, ihi, lo, ilo = K.bucketed_max_depth(
        pts, starts, centres, radii, np.ascontiguousarray(arr.poles),
        np.ascontiguousarray(arr.half_widths), inflation, 0.0,
    )
    upper = DepthCertificate("net_upper_bound", int(hi), tuple(float(v) for v in pts[ihi]), net.omega, inflation)
    lower = DepthCertificate("sampled_lower_bound", int(lo), tuple(float(v) for v in pts[ilo]))
    return upper, lower


def net_multiplicity_upper_bound(arr: Arrangement, net: SaturatedNet, inflation: float | None = None) -> DepthCertificate:
    """Max over net points of the depth of the zones inflated by ``inflation``."""
    return net_depth_bounds(arr, net, inflation)[0]


def _tangent_basis(q: np.ndarray) -> np.ndarray:
    """Orthonormal basis of q's tangent space, as the rows of a (d-1, d) array."""
    d = len(q)
    m = np.linalg.qr(np.column_stack([q, np.eye(d)]))[0]
    return m[:, 1:d].T


def _refine_cap(q, radius, poles, widths, max_cells: int, min_half: float):
    """Certify that the cap B(q, radius) is covered, by adaptive gnomonic cells.

    Returns ``(True, None)``, ``(False, witness)`` or ``(None, None)`` if the
    cell budget runs out.  A chart cell of half-side ``s`` lies within
    spherical distance ``2 asin(s sqrt(d-1) / 2)`` of its projected centre
    (central projection onto the sphere is 1-Lipschitz in chord length).
    """
    d = len(q)
    E = _tangent_basis(q)
    T = math.tan(radius)
    sines = np.sin(widths)
    centres = np.zeros((1, d - 1))
    half = T
    used = 0
    offsets = np.array(np.meshgrid(*[[-0.5, 0.5]] * (d - 1), indexing="ij")).reshape(d - 1, -1).T
    while len(centres):
        used += len(centres)
        if used > max_cells or half < min_half:
            return None, None
        # drop cells missing the chart disk |y| <= T
        near = np.linalg.norm(np.maximum(np.abs(centres) - half, 0.0), axis=1)
        centres = centres[near <= T]
        if not len(centres):
            break
        x = q + centres @ E
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        a = np.abs(x @ poles.T)
        bare = np.flatnonzero((a <= sines).sum(axis=1) == 0)
        if len(bare):
            return False, x[bare[0]]
        rho = 2.0 * math.asin(min(1.0, half * math.sqrt(d - 1) / 2.0))
        ok = widths > rho
        safe = np.where(ok, np.sin(np.maximum(widths - rho, 0.0)), -1.0)
        done = (a <= safe).any(axis=1)
        centres = centres[~done]
        half *= 0.5
        centres = (centres[:, None, :] + offsets[None, :, :] * 2 * half).reshape(-1, d - 1)
    return True, None


def coverage_certificate(
    arr: Arrangement,
    net: SaturatedNet,
    rng=None,
    probes: int = PROBE_COUNT,
    max_cells: int = 200_000,
) -> CoverageCertificate:
    """Certify coverage from a net whose covering radius is at most ``net.omega``.

    1. every net point in a zone deflated by omega -> covered (``net_certified``);
    2. a uniform probe outside every closed zone -> not covered (``sampled_counterexample``);
    3. the caps around the net points that failed step 1 are refined locally
       until each piece lies in one zone (covered) or a bare point appears;
    4. on S^2 with at most ``exact_limit`` zones, the exact engine decides;
    otherwise ``covered=None`` (``indeterminate``).
    """
    _check_dims(arr, net)
    omega = net.omega
    if arr.n == 0:
        return CoverageCertificate(False, "sampled_counterexample", omega, tuple(float(v) for v in net.points[0]))
    if np.any(arr.half_widths <= omega):
        raise ValueError(f"deflation by {omega} empties a zone; use a finer net")
    poles = np.ascontiguousarray(arr.poles)
    pts, starts, centres, radii = net.coarse_buckets
    failing = K.bucketed_uncovered(pts, starts, centres, radii, poles, np.ascontiguousarray(arr.half_widths - omega))
    if len(failing) == 0:
        return CoverageCertificate(True, "net_certified", omega)

    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    x = np.ascontiguousarray(sample_uniform(arr.dim, rng, int(probes))) if probes > 0 else np.empty((0, arr.dim))
    j = K.first_uncovered(x, poles, np.ascontiguousarray(arr.sines)) if len(x) else -1
    if j >= 0:
        return CoverageCertificate(False, "sampled_counterexample", omega, tuple(float(v) for v in x[j]))

    undecided = False
    for idx in failing:
        q = pts[idx]
        # only zones that can meet the cap matter
        near = np.abs(poles @ q) <= np.sin(np.minimum(arr.half_widths + omega, math.pi / 2))
        ok, w = _refine_cap(q, omega, poles[near], arr.half_widths[near], max_cells, 1e-12)
        if ok is False:
            return CoverageCertificate(False, "sampled_counterexample", omega, tuple(float(v) for v in w))
        if ok is None:
            undecided = True
    if not undecided:
        return CoverageCertificate(True, "net_certified", omega)
    if arr.dim == 3 and arr.n <= EXACT_COVERAGE_LIMIT:
        return exact_coverage_s2(arr)
    return CoverageCertificate(None, "indeterminate", omega)


EXACT_COVERAGE_LIMIT = 2000


# --------------------------------------------------------------------------
# file formats

_HEADER = re.compile(r"#\s*d=(\d+)\s+n=(\d+)\s*$")


def save_arrangement(arr: Arrangement, path) -> None:
    lines = [f"# d={arr.dim} n={arr.n}"]
    for u, t in zip(arr.poles, arr.half_widths):
        lines.append(" ".join(f"{v:.17g}" for v in (*u, t)))
    Path(path).write_text("\n".join(lines) + "\n")


def load_arrangement(path) -> Arrangement:
    text = Path(path).read_text().splitlines()
    if not text:
        raise ValueError(f"{path}: empty arrangement file")
    m = _HEADER.match(text[0].strip())
    if not m:
        raise ValueError(f"{path}: bad header {text[0]!r}")
    d, n = int(m.group(1)), int(m.group(2))
    rows = [line.split() for line in text[1:] if line.strip() and not line.lstrip().startswith("#")]
    if len(rows) != n:
        raise ValueError(f"{path}: header says n={n} but found {len(rows)} zones")
    try:
        data = np.array([[float(v) for v in r] for r in rows]).reshape(n, -1) if n else np.empty((0, d + 1))
    except ValueError as exc:
        raise ValueError(f"{path}: unreadable number ({exc})") from None
    if data.shape[1] != d + 1:
        raise ValueError(f"{path}: each line needs {d + 1} numbers")
    return Arrangement(d, data[:, :d], data[:, d])


def certificates_json(depth: DepthCertificate | None, coverage: CoverageCertificate | None, header: dict | None = None) -> str:
    doc = {"schema_version": 1}
    doc.update(header or {})
    if depth is not None:
        doc["depth"] = depth.to_dict()
    if coverage is not None:
        doc["coverage"] = coverage.to_dict()
    return json.dumps(doc, indent=2, sort_keys=True)
