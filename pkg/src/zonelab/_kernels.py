"""Compiled inner loops for net construction and depth counting.

Two spatial structures are used:

* an ambient hash grid of cubes; a ball query of radius ``R`` visits every
  cube meeting the box ``x +- R``, so with cube side ``2R`` that is between
  1 and ``2^d`` cubes,
* gnomonic cube-face cells: face ``f`` (axis ``f // 2``, sign ``+1`` for even
  ``f``) is the square ``[-1, 1]^{d-1}`` of central-projection coordinates,
  split into ``N^{d-1}`` equal cells.  Cell edges are great-sphere arcs, so a
  cell is geodesically convex and lies inside a cap iff its corners do.
"""

import math

import numpy as np
from numba import njit

EMPTY = -1


# --------------------------------------------------------------------------
# ambient hash grid


@njit(cache=True, inline="always")
def _mix(key, mask):
    return ((key * np.int64(-7046029254386353131)) >> np.int64(17)) & mask


@njit(cache=True, inline="always")
def _slot(keys, key):
    mask = np.int64(keys.shape[0] - 1)
    h = _mix(key, mask)
    while True:
        k = keys[h]
        if k == key or k == EMPTY:
            return h
        h = (h + 1) & mask


@njit(cache=True, inline="always")
def _cube(v, inv_s):
    return np.int64(math.floor((v + 1.0) * inv_s)) + 1


@njit(cache=True)
def _hash_insert(idx, pts, keys, heads, nxt, inv_s, G):
    key = np.int64(0)
    mult = np.int64(1)
    for i in range(pts.shape[1]):
        key += _cube(pts[idx, i], inv_s) * mult
        mult *= G
    s = _slot(keys, key)
    keys[s] = key
    nxt[idx] = heads[s]
    heads[s] = idx


@njit(cache=True)
def hash_rebuild(pts, npts, keys, heads, nxt, inv_s, G):
    keys[:] = EMPTY
    heads[:] = EMPTY
    for i in range(npts):
        _hash_insert(i, pts, keys, heads, nxt, inv_s, G)


@njit(cache=True, inline="always")
def _box_start(x, R, inv_s, G, lo, span, cur):
    """Set up an odometer over the cubes meeting ``x +- R``; returns the first key."""
    key = np.int64(0)
    mult = np.int64(1)
    for i in range(x.shape[0]):
        lo[i] = _cube(x[i] - R, inv_s)
        span[i] = _cube(x[i] + R, inv_s) - lo[i] + 1
        cur[i] = 0
        key += lo[i] * mult
        mult *= G
    return key


@njit(cache=True, inline="always")
def _box_next(key, G, span, cur):
    """Advance the odometer; returns the next key or -1 when done."""
    mult = np.int64(1)
    for i in range(span.shape[0]):
        if cur[i] + 1 < span[i]:
            cur[i] += 1
            return key + mult
        key -= cur[i] * mult
        cur[i] = 0
        mult *= G
    return np.int64(-1)


@njit(cache=True)
def _query(x, R, thr, pts, keys, heads, nxt, inv_s, G, out, first):
    """Stored points q with <q, x> > thr, searched in the cubes meeting ``x +- R``.

    ``R`` must bound the chord length corresponding to ``thr``.  With ``first``
    the search stops at the first hit; returns the number of hits written to
    ``out`` (capped at its size).
    """
    d = x.shape[0]
    lo = np.empty(d, np.int64)
    span = np.empty(d, np.int64)
    cur = np.empty(d, np.int64)
    key = _box_start(x, R, inv_s, G, lo, span, cur)
    cnt = 0
    while key >= 0:
        s = _slot(keys, key)
        if keys[s] != EMPTY:
            p = heads[s]
            while p != EMPTY:
                dot = 0.0
                for i in range(d):
                    dot += pts[p, i] * x[i]
                if dot > thr:
                    if cnt < out.shape[0]:
                        out[cnt] = p
                    cnt += 1
                    if first:
                        return cnt
                p = nxt[p]
        key = _box_next(key, G, span, cur)
    return min(cnt, out.shape[0])


@njit(cache=True)
def min_pair_dot_violations(pts, keys, heads, nxt, inv_s, G, cosw, R):
    """Count stored pairs (i < j) with <p_i, p_j> > cosw."""
    out = np.empty(pts.shape[0], np.int64)
    bad = 0
    for j in range(pts.shape[0]):
        cnt = _query(pts[j], R, cosw, pts, keys, heads, nxt, inv_s, G, out, False)
        for t in range(cnt):
            if out[t] < j:
                bad += 1
    return bad


@njit(cache=True)
def _grid_size(npts):
    return np.int64(1) << np.int64(math.ceil(math.log2(2 * npts + 2)))


# --------------------------------------------------------------------------
# gnomonic face cells


@njit(cache=True, inline="always")
def _decode(cell, N, d, idx):
    """Face index of ``cell``; fills ``idx`` with its d-1 grid indices."""
    per_face = N ** (d - 1)
    f = cell // per_face
    rem = cell - f * per_face
    for k in range(d - 1):
        idx[k] = rem % N
        rem //= N
    return f


@njit(cache=True, inline="always")
def _lift(f, c, d, out):
    """Central projection of face coordinates ``c`` back onto the sphere."""
    a = f // 2
    sgn = 1.0 if f % 2 == 0 else -1.0
    k = 0
    nrm = 1.0
    for i in range(d):
        if i == a:
            out[i] = sgn
        else:
            out[i] = c[k]
            nrm += c[k] * c[k]
            k += 1
    nrm = math.sqrt(nrm)
    for i in range(d):
        out[i] /= nrm
    return nrm


@njit(cache=True)
def _lattice(f, idx, N, d, steps, lat, c):
    """Lift the ``(steps+1)^(d-1)`` lattice of sub-corners of cell ``idx`` (grid N)."""
    h = 2.0 / N / steps
    nlat = (steps + 1) ** (d - 1)
    for t in range(nlat):
        r = t
        for k in range(d - 1):
            c[k] = -1.0 + idx[k] * (2.0 / N) + (r % (steps + 1)) * h
            r //= steps + 1
        _lift(f, c, d, lat[t])


@njit(cache=True)
def _corner_table(steps, d):
    """Lattice index of every corner of every sub-cell of a cell split ``steps`` ways per axis."""
    nsub = steps ** (d - 1)
    ncorner = 1 << (d - 1)
    tab = np.empty((nsub, ncorner), np.int64)
    for sub in range(nsub):
        for m in range(ncorner):
            t = 0
            mult = 1
            r = sub
            for k in range(d - 1):
                t += ((r % steps) + ((m >> k) & 1)) * mult
                r //= steps
                mult *= steps + 1
            tab[sub, m] = t
    return tab


@njit(cache=True)
def _csr_grid(pts, npts, inv_s, G):
    """Points sorted by cube, plus an open-addressing table cube -> (start, count)."""
    d = pts.shape[1]
    key = np.empty(npts, np.int64)
    for j in range(npts):
        kk = np.int64(0)
        mult = np.int64(1)
        for i in range(d):
            kk += _cube(pts[j, i], inv_s) * mult
            mult *= G
        key[j] = kk
    order = np.argsort(key)
    spts = np.empty((npts, d))
    for j in range(npts):
        spts[j] = pts[order[j]]
    size = _grid_size(npts)
    tkeys = np.full(size, EMPTY, np.int64)
    tstart = np.zeros(size, np.int64)
    tcount = np.zeros(size, np.int64)
    for j in range(npts):
        kk = key[order[j]]
        sl = _slot(tkeys, kk)
        if tkeys[sl] == EMPTY:
            tkeys[sl] = kk
            tstart[sl] = j
        tcount[sl] += 1
    return spts, tkeys, tstart, tcount


@njit(cache=True)
def _query_csr(x, R, thr, spts, tkeys, tstart, tcount, inv_s, G, lo, span, cur, out):
    d = x.shape[0]
    key = _box_start(x, R, inv_s, G, lo, span, cur)
    cnt = 0
    while key >= 0:
        sl = _slot(tkeys, key)
        if tkeys[sl] != EMPTY:
            for p in range(tstart[sl], tstart[sl] + tcount[sl]):
                dot = 0.0
                for i in range(d):
                    dot += spts[p, i] * x[i]
                if dot > thr:
                    if cnt < out.shape[0]:
                        out[cnt] = p
                    cnt += 1
        key = _box_next(key, G, span, cur)
    return min(cnt, out.shape[0])


@njit(cache=True)
def cell_scan(active, N, d, steps, pts, npts, cosw):
    """Split each active cell into ``steps^(d-1)`` sub-cells; return the live ones (grid ``N*steps``).

    A sub-cell is dead when one stored point is within omega of all its
    corners.  Any such point is within omega + (parent radius) of the parent
    centre, so candidates are gathered once per parent, from a private
    cube-sorted copy of the points whose cube side is twice that distance.
    """
    omega = math.acos(cosw)
    # the gnomonic chart does not expand lengths: a cell of side h has angular diameter <= h sqrt(d-1)
    rad = 0.5 * (2.0 / N) * math.sqrt(d - 1.0)
    ang = omega + rad + 1e-9
    R = 2.0 * math.sin(min(ang, math.pi) / 2.0)
    thr = math.cos(ang) if ang < math.pi else -2.0
    inv_s = 1.0 / (2.0 * R)
    G = np.int64(math.floor(2.0 * inv_s)) + 4
    spts, tkeys, tstart, tcount = _csr_grid(pts, npts, inv_s, G)

    idx = np.empty(d - 1, np.int64)
    c = np.empty(d - 1)
    centre = np.empty(d)
    lo = np.empty(d, np.int64)
    span = np.empty(d, np.int64)
    cur = np.empty(d, np.int64)
    nlat = (steps + 1) ** (d - 1)
    lat = np.empty((nlat, d))
    near = np.empty(4096, np.int64)
    inside = np.empty((4096, nlat), np.bool_)
    tab = _corner_table(steps, d)
    ncorner = tab.shape[1]
    nsub = steps ** (d - 1)
    N2 = N * steps
    per_face2 = N2 ** (d - 1)
    out = np.empty(active.shape[0] * nsub, np.int64)
    m = 0
    for j in range(active.shape[0]):
        f = _decode(active[j], N, d, idx)
        _lattice(f, idx, N, d, steps, lat, c)
        for k in range(d - 1):
            c[k] = -1.0 + (idx[k] + 0.5) * (2.0 / N)
        _lift(f, c, d, centre)
        nnear = _query_csr(centre, R, thr, spts, tkeys, tstart, tcount, inv_s, G, lo, span, cur, near)
        if nnear == near.shape[0]:
            nnear = 0  # pathological crowding: keep every sub-cell (conservative)
        for q in range(nnear):
            p = near[q]
            for t in range(nlat):
                dot = 0.0
                for i in range(d):
                    dot += spts[p, i] * lat[t, i]
                inside[q, t] = dot > cosw
        for b in range(nsub):
            covered = False
            for q in range(nnear):
                ok = True
                for mm in range(ncorner):
                    if not inside[q, tab[b, mm]]:
                        ok = False
                        break
                if ok:
                    covered = True
                    break
            if not covered:
                child = f * per_face2
                mult = np.int64(1)
                r = b
                for k in range(d - 1):
                    child += (idx[k] * steps + (r % steps)) * mult
                    r //= steps
                    mult *= N2
                out[m] = child
                m += 1
    return out[:m]


@njit(cache=True)
def _kill_level0(p, N, d, killed, cosw, sinw):
    """Mark every grid-``N`` cell whose corners all lie in the open cap around ``p``."""
    h = 2.0 / N
    C = cosw * cosw
    lo = np.empty(d - 1, np.int64)
    hi = np.empty(d - 1, np.int64)
    q = np.empty(d - 1)
    v = np.empty(d - 1, np.int64)
    per_face = N ** (d - 1)
    for f in range(2 * d):
        a = f // 2
        sgn = 1.0 if f % 2 == 0 else -1.0
        pa = sgn * p[a]
        if pa <= 0.0:
            continue
        k = 0
        for i in range(d):
            if i != a:
                q[k] = p[i]
                k += 1
        denom = pa * pa - sinw * sinw
        if denom <= 1e-12 and 2.0 * sinw * math.sqrt(d) < 1.0:
            # the cap stays below x_a <= 2 sin(omega) < 1/sqrt(d) <= x_a on this face
            continue
        empty = False
        for k in range(d - 1):
            if denom > 1e-12:
                c0 = pa * q[k] / denom
                gamma = C * sinw * sinw / denom
                half = math.sqrt(gamma * (1.0 + q[k] * q[k] / denom) / C) + 1e-12
                blo = c0 - half
                bhi = c0 + half
            else:
                blo = -1.0
                bhi = 1.0
            l = int(math.ceil((blo + 1.0) / h - 1e-9))
            u = int(math.floor((bhi + 1.0) / h + 1e-9)) - 1
            if l < 0:
                l = 0
            if u > N - 1:
                u = N - 1
            if l > u:
                empty = True
                break
            lo[k] = l
            hi[k] = u
        if empty:
            continue
        nv = 1
        for k in range(d - 1):
            nv *= hi[k] - lo[k] + 2
        inside = np.empty(nv, np.bool_)
        for t in range(nv):
            r = t
            dot = pa
            nrm = 1.0
            for k in range(d - 1):
                span = hi[k] - lo[k] + 2
                vk = lo[k] + r % span
                r //= span
                ck = -1.0 + vk * h
                dot += q[k] * ck
                nrm += ck * ck
            inside[t] = dot > cosw * math.sqrt(nrm)
        ncell = 1
        for k in range(d - 1):
            ncell *= hi[k] - lo[k] + 1
        for t in range(ncell):
            r = t
            for k in range(d - 1):
                span = hi[k] - lo[k] + 1
                v[k] = r % span
                r //= span
            cell = f * per_face
            mult = np.int64(1)
            for k in range(d - 1):
                cell += (lo[k] + v[k]) * mult
                mult *= N
            if killed[cell]:
                continue
            ok = True
            for m in range(1 << (d - 1)):
                tv = 0
                vm = 1
                for k in range(d - 1):
                    tv += (v[k] + ((m >> k) & 1)) * vm
                    vm *= hi[k] - lo[k] + 2
                if not inside[tv]:
                    ok = False
                    break
            if ok:
                killed[cell] = 1


@njit(cache=True)
def throw_darts(
    active, N, d, ndarts, seed, level0, killed,
    pts, npts, keys, heads, nxt, inv_s, G, cosw, sinw, R,
    streak, budget,
):
    """Random sequential insertion with candidates drawn uniformly from ``active`` cells.

    A dart is a uniform point of the union of the active cells with respect to
    surface measure: pick a cell uniformly, a uniform point of its coordinate
    square, and keep it with probability equal to the gnomonic area density
    ``(1 + |c|^2)^{-d/2}`` (at most 1).  Each kept dart is a candidate; it is
    inserted iff no stored point is within ``omega`` of it.

    Returns ``(npts, streak, candidates, accepted, stopped)`` where ``stopped``
    is 1 when the rejection budget was reached and 2 when storage is full.
    """
    np.random.seed(seed)
    idx = np.empty(d - 1, np.int64)
    c = np.empty(d - 1)
    x = np.empty(d)
    hit = np.empty(1, np.int64)
    h = 2.0 / N
    cap = pts.shape[0]
    ncand = 0
    nacc = 0
    nact = active.shape[0]
    for _ in range(ndarts):
        cell = active[int(np.random.random() * nact)]
        if level0 and killed[cell]:
            continue
        f = _decode(cell, N, d, idx)
        r2 = 0.0
        for k in range(d - 1):
            c[k] = -1.0 + (idx[k] + np.random.random()) * h
            r2 += c[k] * c[k]
        if np.random.random() >= (1.0 + r2) ** (-0.5 * d):
            continue
        _lift(f, c, d, x)
        ncand += 1
        if _query(x, R, cosw, pts, keys, heads, nxt, inv_s, G, hit, True) > 0:
            streak += 1
            if streak >= budget:
                return npts, streak, ncand, nacc, 1
            continue
        for i in range(d):
            pts[npts, i] = x[i]
        _hash_insert(npts, pts, keys, heads, nxt, inv_s, G)
        npts += 1
        nacc += 1
        streak = 0
        if level0:
            _kill_level0(x, N, d, killed, cosw, sinw)
        if npts >= cap:
            return npts, streak, ncand, nacc, 2
    return npts, streak, ncand, nacc, 0


# --------------------------------------------------------------------------
# depth counting


@njit(cache=True, nogil=True)
def count_depth(points, poles, bounds):
    """For each point, the number of zones with ``|<pole, x>| <= bound``."""
    m, d = points.shape
    n = poles.shape[0]
    out = np.zeros(m, np.int64)
    for j in range(m):
        cnt = 0
        for i in range(n):
            dot = 0.0
            for k in range(d):
                dot += poles[i, k] * points[j, k]
            if abs(dot) <= bounds[i]:
                cnt += 1
        out[j] = cnt
    return out


@njit(cache=True, nogil=True)
def first_uncovered(points, poles, bounds):
    """Index of the first point lying in no slab ``|<pole, x>| <= bound``, or -1.

    Points are expected in a spatially coherent order; the most recent covering
    zones are tried first.
    """
    m, d = points.shape
    n = poles.shape[0]
    ncache = 8
    cache = np.full(ncache, -1, np.int64)
    head = 0
    for j in range(m):
        hit = False
        for s in range(ncache):
            i = cache[s]
            if i < 0:
                continue
            dot = 0.0
            for k in range(d):
                dot += poles[i, k] * points[j, k]
            if abs(dot) <= bounds[i]:
                hit = True
                break
        if hit:
            continue
        for i in range(n):
            dot = 0.0
            for k in range(d):
                dot += poles[i, k] * points[j, k]
            if abs(dot) <= bounds[i]:
                cache[head] = i
                head = (head + 1) % ncache
                hit = True
                break
        if not hit:
            return j
    return -1


@njit(cache=True, nogil=True)
def max_depth(points, poles, bounds):
    """(max depth, index of the first point attaining it) over a batch of points."""
    m, d = points.shape
    n = poles.shape[0]
    best = -1
    arg = -1
    for j in range(m):
        cnt = 0
        for i in range(n):
            dot = 0.0
            for k in range(d):
                dot += poles[i, k] * points[j, k]
            if abs(dot) <= bounds[i]:
                cnt += 1
        if cnt > best:
            best = cnt
            arg = j
    return best, arg


@njit(cache=True, nogil=True)
def bucketed_max_depth(points, starts, centres, radii, poles, widths, infl_hi, infl_lo):
    """Max depth over bucketed points for zones widened by ``infl_hi`` and by ``infl_lo``.

    Points ``starts[b]:starts[b+1]`` lie within angle ``radii[b]`` of the unit
    vector ``centres[b]``; only zones that can reach that cap are tested.
    Returns ``(best_hi, arg_hi, best_lo, arg_lo)``.
    """
    nb = centres.shape[0]
    d = points.shape[1]
    n = poles.shape[0]
    half_pi = 0.5 * math.pi
    b_hi = np.empty(n)
    b_lo = np.empty(n)
    for i in range(n):
        t = widths[i] + infl_hi
        b_hi[i] = 2.0 if t >= half_pi else math.sin(t)
        t = widths[i] + infl_lo
        b_lo[i] = 2.0 if t >= half_pi else math.sin(t)
    sw = np.empty(n)
    cw = np.empty(n)
    for i in range(n):
        t = widths[i] + infl_hi
        sw[i] = math.sin(t) if t < half_pi else 1.0
        cw[i] = math.cos(t) if t < half_pi else 0.0
    cand = np.empty(n, np.int64)
    best_hi, arg_hi, best_lo, arg_lo = -1, -1, -1, -1
    for b in range(nb):
        sr = math.sin(radii[b])
        cr = math.cos(radii[b])
        nc = 0
        for i in range(n):
            # sin(w + r) if w + r < pi/2, else the zone can reach the whole cap
            if cw[i] * cr - sw[i] * sr <= 0.0:
                cand[nc] = i
                nc += 1
                continue
            dot = 0.0
            for k in range(d):
                dot += poles[i, k] * centres[b, k]
            if abs(dot) <= sw[i] * cr + cw[i] * sr + 1e-12:
                cand[nc] = i
                nc += 1
        for j in range(starts[b], starts[b + 1]):
            hi = 0
            lo = 0
            for s in range(nc):
                i = cand[s]
                dot = 0.0
                for k in range(d):
                    dot += poles[i, k] * points[j, k]
                a = abs(dot)
                if a <= b_hi[i]:
                    hi += 1
                    if a <= b_lo[i]:
                        lo += 1
            if hi > best_hi:
                best_hi = hi
                arg_hi = j
            if lo > best_lo:
                best_lo = lo
                arg_lo = j
    return best_hi, arg_hi, best_lo, arg_lo


@njit(cache=True, nogil=True)
def bucketed_uncovered(points, starts, centres, radii, poles, widths):
    """Indices of bucketed points lying in no zone of the given half-widths.

    Same bucket layout as :func:`bucketed_max_depth`; only zones reaching a
    bucket's cap are tried, most recent hit first.
    """
    nb = centres.shape[0]
    d = points.shape[1]
    n = poles.shape[0]
    half_pi = 0.5 * math.pi
    sw = np.empty(n)
    cw = np.empty(n)
    for i in range(n):
        t = widths[i]
        sw[i] = math.sin(t) if t < half_pi else 1.0
        cw[i] = math.cos(t) if t < half_pi else 0.0
    cand = np.empty(n, np.int64)
    out = np.empty(points.shape[0], np.int64)
    nout = 0
    for b in range(nb):
        sr = math.sin(radii[b])
        cr = math.cos(radii[b])
        nc = 0
        for i in range(n):
            if cw[i] * cr - sw[i] * sr <= 0.0:
                cand[nc] = i
                nc += 1
                continue
            dot = 0.0
            for k in range(d):
                dot += poles[i, k] * centres[b, k]
            if abs(dot) <= sw[i] * cr + cw[i] * sr + 1e-12:
                cand[nc] = i
                nc += 1
        last = 0
        for j in range(starts[b], starts[b + 1]):
            hit = False
            for s0 in range(nc):
                s = (last + s0) % nc
                i = cand[s]
                dot = 0.0
                for k in range(d):
                    dot += poles[i, k] * points[j, k]
                if abs(dot) <= sw[i]:
                    hit = True
                    last = s
                    break
            if not hit:
                out[nout] = j
                nout += 1
    return out[:nout]


@njit(cache=True, nogil=True)
def _reaching(poles, centre, r, sw, cw, cand):
    """Zones (given sin/cos of their angular bound) that can reach the cap B(centre, r)."""
    n, d = poles.shape
    sr = math.sin(r)
    cr = math.cos(r)
    nc = 0
    for i in range(n):
        if cw[i] * cr - sw[i] * sr <= 0.0:
            cand[nc] = i
            nc += 1
            continue
        dot = 0.0
        for k in range(d):
            dot += poles[i, k] * centre[k]
        if abs(dot) <= sw[i] * cr + cw[i] * sr + 1e-12:
            cand[nc] = i
            nc += 1
    return nc


@njit(cache=True, nogil=True)
def bucketed_first_max_depth(points, order, starts, centres, radii, poles, bounds):
    """Max of #{i : |<u_i, x>| <= bounds[i]} over bucketed points.

    Returns ``(best, j)`` where ``j`` is the bucketed index whose original
    index ``order[j]`` is smallest among the points attaining ``best``.
    """
    n = poles.shape[0]
    d = points.shape[1]
    sw = np.empty(n)
    cw = np.empty(n)
    for i in range(n):
        b = bounds[i]
        if b >= 1.0:
            sw[i] = 1.0
            cw[i] = 0.0
        else:
            sw[i] = b
            cw[i] = math.sqrt(1.0 - b * b)
    cand = np.empty(n, np.int64)
    best = -1
    arg = -1
    for g in range(centres.shape[0]):
        nc = _reaching(poles, centres[g], radii[g], sw, cw, cand)
        if nc < best:
            continue
        for j in range(starts[g], starts[g + 1]):
            cnt = 0
            for s in range(nc):
                i = cand[s]
                dot = 0.0
                for k in range(d):
                    dot += poles[i, k] * points[j, k]
                if abs(dot) <= bounds[i]:
                    cnt += 1
            if cnt > best or (cnt == best and order[j] < order[arg]):
                best = cnt
                arg = j
    return best, arg


@njit(cache=True, nogil=True)
def classify_outside(points, owner, starts, centres, radii, poles, sines, tol):
    """For each bucketed point, its position relative to the zones other than ``owner``.

    0: strictly inside some other zone (by more than ``tol``), 1: within
    ``tol`` of some other zone's boundary and inside none, 2: outside all
    other zones by more than ``tol``.
    """
    n = poles.shape[0]
    d = points.shape[1]
    sw = np.empty(n)
    cw = np.empty(n)
    for i in range(n):
        b = sines[i] + tol
        if b >= 1.0:
            sw[i] = 1.0
            cw[i] = 0.0
        else:
            sw[i] = b
            cw[i] = math.sqrt(1.0 - b * b)
    cand = np.empty(n, np.int64)
    out = np.empty(points.shape[0], np.int8)
    for g in range(centres.shape[0]):
        nc = _reaching(poles, centres[g], radii[g], sw, cw, cand)
        for j in range(starts[g], starts[g + 1]):
            cls = 2
            for s in range(nc):
                i = cand[s]
                if i == owner[j]:
                    continue
                dot = 0.0
                for k in range(d):
                    dot += poles[i, k] * points[j, k]
                m = abs(dot) - sines[i]
                if m < -tol:
                    cls = 0
                    break
                if m <= tol:
                    cls = 1
            out[j] = cls
    return out
