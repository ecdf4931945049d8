"""The small explicit arrangements on S^2 and their exact certificates.

    python scripts/constructions.py
"""

import math

from zonelab import arrangements as A


def show(name, arr):
    depth = A.exact_max_multiplicity_s2(arr)
    cov = A.exact_coverage_s2(arr)
    print(f"{name:<34s} covered={str(cov.covered):<5s} multiplicity={depth.value}")


def main():
    show("Fejes Toth, n=5, t=pi/10", A.fejes_toth_configuration(3, 5, math.pi / 10))
    t = math.asin(1 / math.sqrt(3))
    show("orthogonal, t = asin(1/sqrt3) - 1e-9", A.orthogonal_zones(3, t - 1e-9))
    show("orthogonal, t = asin(1/sqrt3) + 1e-9", A.orthogonal_zones(3, t + 1e-9))

    lo, hi = A.find_multiplicity3_width()
    print(f"\n4 zones (3 meridians + equator): multiplicity-3 covering for t in [{lo:.12f}, {hi:.12f}]")
    print(f"  analytic: asin(1/sqrt5) = {math.asin(1 / math.sqrt(5)):.12f}, asin(sqrt(3/7)) = {math.asin(math.sqrt(3 / 7)):.12f}")
    show("  midpoint", A.pole_plus_equator(0.5 * (lo + hi)))
    print(f"  interior multiplicity at t=0.3: {A.interior_multiplicity_probe_s2(A.pole_plus_equator(0.3), 100_000, 0)}")

    w = A.find_tilted_five_witness()
    print(f"\n5 zones (equator doubled, tilted by +-{w['tilt']}): t = {w['half_width']:.12f}"
          f" in [{w['t_lo']:.12f}, {w['t_hi']:.12f}]")
    show("  witness", A.tilted_five_zones(w["half_width"], w["tilt"]))
    print(f"\n{'tilt':>8s} {'coverage from':>16s} {'multiplicity 4 from':>20s}")
    for tilt in (0.005, 0.01, 0.02, 0.05, 0.1):
        r = A.find_tilted_five_witness([tilt])
        print(f"{tilt:8.3f} {r['t_lo']:16.10f} {r['t_hi']:20.10f}")


if __name__ == "__main__":
    main()
