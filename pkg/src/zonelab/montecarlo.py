"""Random zone arrangements: coverage and multiplicity statistics, and the probability bound.

Each trial draws ``n`` independent uniform poles, gives every zone the
half-width ``m_d alpha(n)`` and certifies

* coverage, from a saturated net (zones deflated by the net spacing must
  cover the net, see :func:`zonelab.arrangements.coverage_certificate`),
* an upper bound on the maximum multiplicity, from a net (zones inflated by
  the net spacing, evaluated at the net points) or, on S^2 with moderate
  ``n``, the exact engine.

Nets do not depend on the arrangement, so each experiment builds them once
(seeded from the master seed) and reuses them across trials.  Per-trial random
streams come from ``SeedSequence([master_seed, trial])``, so results do not
depend on the number of worker threads.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .arrangements import (
    coverage_certificate,
    exact_coverage_s2,
    exact_max_multiplicity_s2,
    net_depth_bounds,
    sampled_lower_bound,
)
from .nets import SaturatedNet, build_saturated_net, load_net, save_net
from .sphere import Arrangement, constants, sample_uniform

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
ALPHA_KINDS = ("log_over_n", "one_over_n", "power_law")
K_RULES = ("A_d_log_n", "B_d_log_over_loglog", "constant")

# coarsest spacing we can afford for coverage nets, and the spacing of the
# (coarser) nets used for multiplicity bounds
COVER_NET_FLOOR = {3: 0.002, 4: 0.03}
MULT_NET_FLOOR = {3: 0.005, 4: 0.03}
EXACT_S2_MAX_N = 2000
NET_SEED_TAG = 0x6E6574  # distinguishes net seeds from trial seeds

__all__ = [
    "A_d_residual",
    "ExperimentParams",
    "TrialOutcome",
    "binomial_upper_bound",
    "log_multiplicity_bound_expression",
    "multiplicity_bound_expression",
    "random_arrangement",
    "run_corollary_experiment",
    "run_experiment",
    "run_theorem3_experiment",
    "solve_A_d",
    "theorem3_bound_onset",
    "trial_seed",
    "write_summary_csv",
    "write_summary_json",
]


# --------------------------------------------------------------------------
# constants and bounds


def solve_A_d(d: int) -> float:
    """Root x* > e C*_d of x (ln x - ln C*_d - 1) = d, by bisection."""
    c_star = constants(d).C_star_d
    lc = math.log(c_star)

    def g(x):
        return x * (math.log(x) - lc - 1.0) - d

    lo = math.e * c_star
    hi = lo + d + 10.0
    if not (g(lo) < 0.0 < g(hi)):
        raise ArithmeticError(f"A_d bracket [{lo}, {hi}] does not contain the root for d={d}")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return lo if abs(g(lo)) <= abs(g(hi)) else hi


def A_d_residual(d: int, x: float | None = None) -> float:
    """``x ln(C*_d / x) + d + x``: the defining equation in log form (zero at A_d)."""
    x = solve_A_d(d) if x is None else float(x)
    return x * math.log(constants(d).C_star_d / x) + d + x


def binomial_upper_bound(n: int, k: int) -> float:
    """``k (1 + ln n - ln k)``, an upper bound on ln C(n, k) from C(n, k) <= (e n / k)^k."""
    n, k = int(n), int(k)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    return k * (1.0 + math.log(n) - math.log(k))


def log_multiplicity_bound_expression(d: int, n: int, alpha: float, k: float) -> float:
    """Natural log of ``c_d alpha^{-(d-1)} (e C*_d n alpha / k)^k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if k > n:
        warnings.warn(f"k={k} exceeds n={n}; the bound is vacuous there", stacklevel=2)
    c = constants(d)
    return math.log(c.c_d) - (d - 1) * math.log(alpha) + k * (1.0 + math.log(c.C_star_d * n * alpha / k))


def multiplicity_bound_expression(d: int, n: int, alpha: float, k: float) -> float:
    """Upper bound on P(some point lies in more than k zones), evaluated through logs."""
    v = log_multiplicity_bound_expression(d, n, alpha, k)
    return math.exp(v) if v < 700.0 else math.inf


def theorem3_bound_onset(d: int, n_values) -> dict:
    """Where the bound with alpha = ln n / n and k = A_d ln n drops below 1 for good."""
    A = solve_A_d(d)
    n_values = sorted(int(n) for n in n_values)
    rows = []
    for n in n_values:
        alpha = math.log(n) / n
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # small n: k > n, reported as a vacuous (positive) bound
            v = log_multiplicity_bound_expression(d, n, alpha, A * math.log(n))
        rows.append({"n": n, "log10_bound": v / math.log(10)})
    onset = None
    for i, r in enumerate(rows):
        tail = rows[i:]
        below = all(t["log10_bound"] < 0 for t in tail)
        decreasing = all(a["log10_bound"] > b["log10_bound"] for a, b in zip(tail, tail[1:]))
        if below and decreasing:
            onset = r["n"]
            break
    return {"d": d, "A_d": A, "rows": rows, "n0": onset}


# --------------------------------------------------------------------------
# parameters and outcomes


@dataclass(frozen=True)
class ExperimentParams:
    d: int
    n: int
    alpha_kind: str = "log_over_n"
    delta: float | None = None
    k_rule: str = "A_d_log_n"
    k_const: int | None = None
    trials: int = 10
    master_seed: int = 0
    net_omega: float | None = None
    mult_net_omega: float | None = None
    probes: int = 100_000

    def __post_init__(self):
        if self.d < 3:
            raise ValueError(f"d must be >= 3, got {self.d}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.alpha_kind not in ALPHA_KINDS:
            raise ValueError(f"alpha_kind must be one of {ALPHA_KINDS}")
        if self.alpha_kind == "power_law" and (self.delta is None or self.delta <= 0):
            raise ValueError("power_law needs delta > 0")
        if self.k_rule not in K_RULES:
            raise ValueError(f"k_rule must be one of {K_RULES}")
        if self.k_rule == "constant" and (self.k_const is None or self.k_const < 1):
            raise ValueError("constant k_rule needs k_const >= 1")
        if self.k_rule == "B_d_log_over_loglog" and math.log(math.log(self.n)) <= 0:
            raise ValueError("ln ln n must be positive (n >= 16)")
        a = self.alpha
        if not 0.0 < a <= 1.0:
            raise ValueError(f"alpha(n) = {a} is outside (0, 1]")
        if not self.half_width < math.pi / 2:
            raise ValueError(f"m_d alpha(n) = {self.half_width} is not below pi/2; increase n")

    @property
    def alpha(self) -> float:
        n = self.n
        if self.alpha_kind == "log_over_n":
            return math.log(n) / n
        if self.alpha_kind == "one_over_n":
            return 1.0 / n
        return n ** -(1.0 + self.delta)

    @property
    def half_width(self) -> float:
        return constants(self.d).m_d * self.alpha

    @property
    def k_bound(self) -> float:
        c = constants(self.d)
        if self.k_rule == "A_d_log_n":
            return c.A_d * math.log(self.n)
        if self.k_rule == "B_d_log_over_loglog":
            return c.B_d * math.log(self.n) / math.log(math.log(self.n))
        return float(self.k_const)

    @property
    def cover_omega(self) -> float | None:
        """Spacing of the coverage net, or None when zones are too thin to deflate."""
        if self.net_omega is not None:
            return float(self.net_omega)
        if self.d not in COVER_NET_FLOOR:
            return None
        w = max(COVER_NET_FLOOR[self.d], min(self.half_width / 2.0, 0.01))
        return w if w < self.half_width else None

    @property
    def mult_omega(self) -> float | None:
        """Spacing of the multiplicity net (None: no net in this dimension)."""
        if self.mult_net_omega is not None:
            return float(self.mult_net_omega)
        if self.net_omega is not None:
            return float(self.net_omega)
        if self.d not in MULT_NET_FLOOR:
            return None
        return max(MULT_NET_FLOOR[self.d], min(0.01, 2.0 * self.half_width))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    seed: int
    covered: bool | None
    coverage_kind: str
    max_multiplicity_upper: int | None
    max_multiplicity_lower: int
    multiplicity_kind: str

    def __post_init__(self):
        if self.max_multiplicity_upper is not None and self.max_multiplicity_lower > self.max_multiplicity_upper:
            raise ArithmeticError(f"trial {self.trial}: lower bound exceeds upper bound")

    def to_dict(self) -> dict:
        return asdict(self)


def trial_seed(master_seed: int, index: int) -> int:
    """Deterministic 63-bit seed for one trial."""
    state = np.random.SeedSequence([int(master_seed), int(index)]).generate_state(2, np.uint32)
    return (int(state[0]) << 31) ^ int(state[1])


def random_arrangement(d: int, n: int, half_width: float, rng) -> Arrangement:
    """``n`` zones of the given half-width with independent uniform poles."""
    if not 0.0 < half_width < math.pi / 2:
        raise ValueError(f"half_width must lie in (0, pi/2), got {half_width}")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    if n == 0:
        return Arrangement(d)
    return Arrangement(d, sample_uniform(d, rng, int(n)), half_width)


# --------------------------------------------------------------------------
# nets


_NET_CACHE: dict = {}


def experiment_net(d: int, omega: float, master_seed: int, cache_dir=None) -> SaturatedNet:
    """The net used by an experiment: built once per (d, omega, seed), optionally cached on disk."""
    seed = trial_seed(master_seed, NET_SEED_TAG + d)
    key = (d, float(omega), seed)
    if key in _NET_CACHE:
        return _NET_CACHE[key]
    cache_dir = cache_dir or os.environ.get("ZONELAB_NET_CACHE")
    path = Path(cache_dir) / f"net_d{d}_w{omega!r}_s{seed}.txt" if cache_dir else None
    net = None
    if path is not None and path.exists():
        try:
            net = load_net(path)
        except ValueError:
            log.warning("ignoring unreadable cached net %s", path)
    if net is None:
        t0 = time.perf_counter()
        net = build_saturated_net(d, omega, seed)
        log.info("net d=%d omega=%g: %d points in %.1fs", d, omega, net.m, time.perf_counter() - t0)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            save_net(net, path)
    _NET_CACHE[key] = net
    return net


# --------------------------------------------------------------------------
# trials


def _run_trial(params: ExperimentParams, index: int, cover_net, mult_net, exact: bool) -> TrialOutcome:
    seed = trial_seed(params.master_seed, index)
    rng = np.random.default_rng(seed)
    arr = random_arrangement(params.d, params.n, params.half_width, rng)
    probe_rng = np.random.default_rng(rng.integers(2 ** 63))

    if exact:
        cert = exact_max_multiplicity_s2(arr)
        upper = lower = cert.value
        mkind = "exact_s2"
    elif mult_net is not None:
        up, lo = net_depth_bounds(arr, mult_net)
        upper, lower, mkind = up.value, lo.value, "net_upper_bound"
    else:
        lo = sampled_lower_bound(arr, sample_uniform(params.d, probe_rng, params.probes))
        upper, lower, mkind = None, lo.value, "sampled_lower_bound"

    if cover_net is not None:
        cov = coverage_certificate(arr, cover_net, probe_rng, probes=params.probes)
    elif exact:
        cov = exact_coverage_s2(arr)
    else:
        # zones too thin for a net certificate: only a counterexample can decide
        x = sample_uniform(params.d, probe_rng, params.probes)
        bare = np.flatnonzero(arr.depth(x) == 0)
        cov = None if len(bare) == 0 else bare
    if cov is None:
        covered, ckind = None, "indeterminate"
    elif isinstance(cov, np.ndarray):
        covered, ckind = False, "sampled_counterexample"
    else:
        covered, ckind = cov.covered, cov.kind
    return TrialOutcome(index, seed, covered, ckind, upper, lower, mkind)


def run_experiment(params: ExperimentParams, threads: int | None = None, cache_dir=None, exact: bool | None = None) -> dict:
    """Run all trials and summarize; the summary does not depend on ``threads``."""
    t0 = time.perf_counter()
    if exact is None:
        exact = params.d == 3 and params.n <= EXACT_S2_MAX_N
    cw = params.cover_omega
    mw = None if exact else params.mult_omega
    cover_net = experiment_net(params.d, cw, params.master_seed, cache_dir) if cw is not None else None
    mult_net = None
    if mw is not None:
        mult_net = cover_net if (cover_net is not None and mw == cw) else experiment_net(params.d, mw, params.master_seed, cache_dir)
    if mult_net is not None and mult_net.omega >= math.pi / 2 - params.half_width:
        raise ValueError("inflated zones would exceed a hemisphere; pick a finer multiplicity net")

    threads = threads or os.cpu_count() or 1
    run = lambda i: _run_trial(params, i, cover_net, mult_net, exact)  # noqa: E731
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, range(params.trials)))
    else:
        outcomes = [run(i) for i in range(params.trials)]
    return _summarize(params, outcomes, cover_net, mult_net, exact, time.perf_counter() - t0)


def run_theorem3_experiment(params: ExperimentParams, threads: int | None = None, cache_dir=None) -> dict:
    """Half-width m_d ln n / n: coverage and multiplicity <= A_d ln n, trial by trial."""
    if params.alpha_kind != "log_over_n":
        raise ValueError("the theorem-3 experiment uses alpha(n) = ln n / n")
    if params.cover_omega is None:
        raise ValueError("no coverage net: net spacing must be below the half-width")
    return run_experiment(params, threads, cache_dir, exact=False)


def run_corollary_experiment(params: ExperimentParams, threads: int | None = None, cache_dir=None) -> dict:
    """alpha(n) = n^-(1+delta) or 1/n: empirical max multiplicity against k(n)."""
    if params.alpha_kind not in ("power_law", "one_over_n"):
        raise ValueError("corollary experiments use alpha_kind power_law or one_over_n")
    return run_experiment(params, threads, cache_dir)


def _net_info(net):
    if net is None:
        return None
    return {"omega": net.omega, "points": net.m, "seed": net.rng_seed, "exhausted": net.exhausted, "probabilistic": net.probabilistic}


def _summarize(params, outcomes, cover_net, mult_net, exact, wall) -> dict:
    c = constants(params.d)
    k = params.k_bound
    covered = sum(1 for o in outcomes if o.covered is True)
    ok = sum(1 for o in outcomes if o.max_multiplicity_upper is not None and o.max_multiplicity_upper <= k)
    hist: dict[str, int] = {}
    for o in outcomes:
        v = o.max_multiplicity_upper if o.max_multiplicity_upper is not None else o.max_multiplicity_lower
        hist[str(v)] = hist.get(str(v), 0) + 1
    notes = []
    if params.d >= 5 or (mult_net is None and not exact):
        notes.append("multiplicity from sampled lower bounds only; no net in this dimension")
    for net in {id(n): n for n in (cover_net, mult_net) if n is not None}.values():
        if net.probabilistic:
            notes.append(f"probabilistic net (omega={net.omega}): saturation declared after {net.saturation_rejections} rejections")
    log_bound = None
    if 0 < params.alpha < 1 and k >= 1:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            log_bound = log_multiplicity_bound_expression(params.d, params.n, params.alpha, k) / math.log(10)
    return {
        "schema_version": SCHEMA_VERSION,
        "zonelab_version": __version__,
        "params": params.to_dict(),
        "alpha": params.alpha,
        "half_width": params.half_width,
        "k_bound": k,
        "multiplicity_engine": "exact_s2" if exact else ("net_upper_bound" if mult_net is not None else "sampled_lower_bound"),
        "cover_net": _net_info(cover_net),
        "multiplicity_net": _net_info(mult_net),
        "per_trial": [o.to_dict() for o in outcomes],
        "covered_fraction": covered / len(outcomes),
        "multiplicity_ok_fraction": ok / len(outcomes),
        "max_multiplicity_histogram": dict(sorted(hist.items(), key=lambda kv: int(kv[0]))),
        "log10_probability_bound": log_bound,
        "A_d": c.A_d,
        "B_d": c.B_d,
        "C_star_d": c.C_star_d,
        "c_d": c.c_d,
        "notes": notes,
        "wall_time_seconds": wall,
    }


def write_summary_json(summary: dict, path) -> None:
    Path(path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


CSV_COLUMNS = ("trial", "seed", "covered", "coverage_kind", "max_multiplicity_upper", "max_multiplicity_lower", "multiplicity_kind")


def write_summary_csv(summary: dict, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for row in summary["per_trial"]:
            w.writerow({k: ("" if row[k] is None else row[k]) for k in CSV_COLUMNS})
