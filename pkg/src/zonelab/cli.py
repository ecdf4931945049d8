"""``zonelab`` command line: construct and verify arrangements, run experiments, emit reports.

Exit codes: 0 success, 1 usage error, 2 unreadable input, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

from . import __version__
from . import arrangements as A
from . import exactcomb as E
from . import montecarlo as M
from .nets import build_saturated_net

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("ZONELAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"ZONELAB_SEED must be an integer, got {raw!r}") from None


def _header(args, **extra) -> dict:
    params = {k: v for k, v in vars(args).items() if k not in ("func",) and not callable(v)}
    out = {"schema_version": 1, "zonelab_version": __version__, "command": args.command, "seed": args.seed, "parameters": params}
    out.update(extra)
    return out


def _emit(text: str, path) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n")


# --------------------------------------------------------------------------
# construct


def cmd_construct(args) -> int:
    kind = args.kind
    note = ""
    if kind == "fejes-toth":
        if args.n is None:
            raise UsageError("fejes-toth needs --n")
        t = args.half_width if args.half_width is not None else math.pi / (2 * args.n)
        arr = A.fejes_toth_configuration(3, args.n, t)
    elif kind == "orthogonal":
        if args.half_width is None:
            raise UsageError("orthogonal needs --half-width")
        arr = A.orthogonal_zones(args.d or 3, args.half_width)
    elif kind == "pole-equator":
        t = args.half_width
        if t is None:
            lo, hi = A.find_multiplicity3_width()
            t = 0.5 * (lo + hi)
            note = f" (multiplicity-3 interval [{lo:.12f}, {hi:.12f}])"
        arr = A.pole_plus_equator(t)
    elif kind == "tilted-five":
        t, tilt = args.half_width, args.tilt
        if t is None or tilt is None:
            w = A.find_tilted_five_witness() if tilt is None else A.find_tilted_five_witness([tilt])
            t, tilt = w["half_width"], w["tilt"]
            note = f" (tilt {tilt}, interval [{w['t_lo']:.12f}, {w['t_hi']:.12f}])"
        arr = A.tilted_five_zones(t, tilt)
    elif kind == "random":
        if args.d is None or args.n is None:
            raise UsageError("random needs --d and --n")
        if args.half_width is not None:
            t = args.half_width
        else:
            alpha_kind = args.alpha.replace("-", "_")
            if alpha_kind == "power_law" and args.delta is None:
                raise UsageError("--alpha power-law needs --delta")
            try:
                p = M.ExperimentParams(d=args.d, n=args.n, alpha_kind=alpha_kind, delta=args.delta, trials=1)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            t = p.half_width
        arr = M.random_arrangement(args.d, args.n, t, args.seed)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown kind {kind}")
    out = args.output or f"{kind}.txt"
    A.save_arrangement(arr, out)
    t0 = float(arr.half_widths[0]) if arr.n else float("nan")
    print(f"wrote {out}: {kind}, d={arr.dim}, n={arr.n}, half_width={t0!r}{note}")
    return EXIT_OK


# --------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    try:
        arr = A.load_arrangement(args.arrangement)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from None
    exact = args.exact_s2 or (arr.dim == 3 and args.net_omega is None)
    if exact and arr.dim != 3:
        raise UsageError("--exact-s2 needs a d=3 arrangement")
    extra = {}
    if exact:
        depth = A.exact_max_multiplicity_s2(arr)
        cov = A.exact_coverage_s2(arr)
    else:
        omega = args.net_omega if args.net_omega is not None else 0.05
        if not 0 < omega < math.pi / 2:
            raise UsageError("--net-omega must lie in (0, pi/2)")
        if arr.n and omega >= float(arr.half_widths.min()):
            raise UsageError(f"--net-omega {omega} must be below the smallest half-width {arr.half_widths.min()}")
        net = build_saturated_net(arr.dim, omega, args.seed)
        extra["net"] = {"omega": omega, "points": net.m, "exhausted": net.exhausted, "probabilistic": net.probabilistic}
        if arr.n == 0:
            depth = A.DepthCertificate("net_upper_bound", 0, tuple(net.points[0]), omega, omega)
        else:
            depth = A.net_depth_bounds(arr, net)[0]
        cov = A.coverage_certificate(arr, net, args.seed)
    doc = _header(args, **extra)
    doc["depth"] = depth.to_dict()
    doc["coverage"] = cov.to_dict()
    _emit(json.dumps(doc, indent=2, sort_keys=True), args.output)
    if args.output:
        print(f"covered={cov.covered} multiplicity({depth.kind})={depth.value}" + (f" witness={list(cov.witness)}" if cov.witness else ""))
    return EXIT_OK


# --------------------------------------------------------------------------
# experiment


def cmd_experiment(args) -> int:
    which = args.which
    kw = dict(d=args.d, n=args.n, trials=args.trials, master_seed=args.seed, net_omega=args.net_omega, probes=args.probes)
    try:
        if which == "theorem3":
            p = M.ExperimentParams(alpha_kind="log_over_n", k_rule="A_d_log_n", **kw)
        elif which == "corollary-i":
            if args.delta is None:
                raise UsageError("corollary-i needs --delta")
            p = M.ExperimentParams(alpha_kind="power_law", delta=args.delta, k_rule="constant", k_const=args.k or args.d, **kw)
        else:
            p = M.ExperimentParams(alpha_kind="one_over_n", k_rule="B_d_log_over_loglog", **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if which == "theorem3":
        summary = M.run_theorem3_experiment(p, threads=args.threads, cache_dir=args.net_cache)
    else:
        summary = M.run_corollary_experiment(p, threads=args.threads, cache_dir=args.net_cache)
    summary["header"] = _header(args)
    prefix = Path(args.output or f"{which}_d{args.d}_n{args.n}_s{args.seed}")
    prefix.parent.mkdir(parents=True, exist_ok=True)
    M.write_summary_json(summary, prefix.with_suffix(".json"))
    M.write_summary_csv(summary, prefix.with_suffix(".csv"))
    print(
        f"{which}: d={p.d} n={p.n} trials={p.trials} half_width={p.half_width:.6g} k={summary['k_bound']:.6g} "
        f"covered_fraction={summary['covered_fraction']:.3f} multiplicity_ok_fraction={summary['multiplicity_ok_fraction']:.3f} "
        f"histogram={summary['max_multiplicity_histogram']} -> {prefix}.json/.csv"
    )
    return EXIT_OK


# --------------------------------------------------------------------------
# combinatorics


def cmd_combinatorics(args) -> int:
    if args.d_max < 3:
        raise UsageError("--d-max must be >= 3")
    d_min = max(3, args.d_min)
    if d_min > args.d_max:
        raise UsageError("--d-min exceeds --d-max")
    rows = E.combinatorics_report(args.d_max, args.even_conjecture, d_min)
    if args.format == "csv":
        if args.output is None:
            raise UsageError("--format csv needs --output")
        E.write_report_csv(rows, args.output)
    else:
        doc = _header(args)
        doc["rows"] = rows
        _emit(json.dumps(doc, indent=2), args.output)
    if args.output:
        bad = [r["d"] for r in rows if not r["largest_root_is_d"]]
        conj = [r["d"] for r in rows if r["even_conjecture"] is False]
        print(f"d={d_min}..{args.d_max}: largest root = d fails for {bad or 'none'}; even conjecture fails for {conj or 'none'}")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zonelab", description="Zone arrangements on spheres: constructions, certificates, experiments.")
    p.add_argument("--version", action="version", version=f"zonelab {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(q):
        q.add_argument("--seed", type=int, default=None, help="master seed (default: $ZONELAB_SEED or 0)")
        q.add_argument("-o", "--output", default=None, help="output path ('-' for stdout where applicable)")

    c = sub.add_parser("construct", help="write an arrangement file")
    c.add_argument("kind", choices=["fejes-toth", "orthogonal", "pole-equator", "tilted-five", "random"])
    c.add_argument("--d", type=int, default=None)
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--half-width", type=float, default=None)
    c.add_argument("--tilt", type=float, default=None)
    c.add_argument("--alpha", choices=["log-over-n", "one-over-n", "power-law"], default="log-over-n")
    c.add_argument("--delta", type=float, default=None)
    common(c)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="certify multiplicity and coverage of an arrangement file")
    v.add_argument("arrangement")
    v.add_argument("--net-omega", type=float, default=None, help="net spacing for net certificates")
    v.add_argument("--exact-s2", action="store_true", help="use the exact engines (d=3 only; default for d=3)")
    common(v)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="Monte Carlo experiments on random arrangements")
    e.add_argument("which", choices=["theorem3", "corollary-i", "corollary-ii"])
    e.add_argument("--d", type=int, default=3)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--trials", type=int, default=10)
    e.add_argument("--delta", type=float, default=None)
    e.add_argument("--k", type=int, default=None, help="multiplicity threshold for corollary-i (default d)")
    e.add_argument("--net-omega", type=float, default=None)
    e.add_argument("--net-cache", default=None, help="directory for cached nets (default: $ZONELAB_NET_CACHE)")
    e.add_argument("--probes", type=int, default=M.ExperimentParams.probes)
    e.add_argument("--threads", type=int, default=None)
    common(e)
    e.set_defaults(func=cmd_experiment)

    k = sub.add_parser("combinatorics", help="face-count polynomials and their roots")
    k.add_argument("--d-max", type=int, required=True)
    k.add_argument("--d-min", type=int, default=3)
    k.add_argument("--even-conjecture", action="store_true")
    k.add_argument("--format", choices=["json", "csv"], default="json")
    common(k)
    k.set_defaults(func=cmd_combinatorics)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.seed is None:
            args.seed = _default_seed()
        if getattr(args, "threads", None) is not None and args.threads < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"zonelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"zonelab: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ArithmeticError, RuntimeError, AssertionError) as exc:
        print(f"zonelab: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
