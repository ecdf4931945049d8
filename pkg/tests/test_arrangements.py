import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from zonelab import arrangements as A
from zonelab.nets import SaturatedNet
from zonelab.sphere import Arrangement, sample_uniform

S3 = math.asin(1 / math.sqrt(3))
NORTH = (0.0, 0.0, 1.0)


def random_arr(seed, n, t, d=3):
    rng = np.random.default_rng(seed)
    return Arrangement(d, sample_uniform(d, rng, n), t)


# --------------------------------------------------------------------------
# constructions


def test_fejes_toth_poles():
    arr = A.fejes_toth_configuration(3, 4, 0.2)
    assert np.allclose(arr.poles[1], [math.cos(math.pi / 4), math.sin(math.pi / 4), 0])
    assert np.allclose(arr.poles[:, 2], 0)
    with pytest.raises(ValueError):
        A.fejes_toth_configuration(4, 3, 0.1)
    with pytest.raises(ValueError):
        A.fejes_toth_configuration(3, 0, 0.1)


def test_orthogonal_and_four_five_zone_poles():
    assert np.array_equal(A.orthogonal_zones(5, 0.1).poles, np.eye(5))
    pe = A.pole_plus_equator(0.5)
    assert pe.n == 4 and np.allclose(pe.poles[3], [0, 0, 1])
    five = A.tilted_five_zones(0.5, 0.1)
    assert five.n == 5
    assert np.allclose(five.poles[:4][:3], pe.poles[:3])
    # the two copies make angle 2 * tilt and are mirror images
    assert math.acos(five.poles[3] @ five.poles[4]) == pytest.approx(0.2)
    assert np.allclose(five.poles[3] * [-1, 1, 1], five.poles[4])
    with pytest.raises(ValueError):
        A.orthogonal_zones(2, 0.1)


# --------------------------------------------------------------------------
# exact multiplicity


def test_exact_multiplicity_examples():
    assert A.exact_max_multiplicity_s2(Arrangement(3)).value == 0
    ft = A.exact_max_multiplicity_s2(A.fejes_toth_configuration(3, 5, 0.3))
    assert ft.kind == "exact_s2" and ft.value == 5 and ft.witness == NORTH
    assert A.exact_max_multiplicity_s2(A.orthogonal_zones(3, 0.3)).value == 2
    with pytest.raises(ValueError):
        A.exact_max_multiplicity_s2(A.orthogonal_zones(4, 0.3))


@pytest.mark.parametrize("n", [1, 2, 3, 6, 9])
@pytest.mark.parametrize("t", [1e-3, 0.2, 1.5])
def test_fejes_toth_multiplicity_is_n(n, t):
    assert A.exact_max_multiplicity_s2(A.fejes_toth_configuration(3, n, t)).value == n


def test_orthogonal_multiplicity_analytic():
    # a point in all three closed zones needs max |x_i| <= sin t, possible iff sin t >= 1/sqrt 3
    assert A.exact_max_multiplicity_s2(A.orthogonal_zones(3, S3 - 1e-6)).value == 2
    assert A.exact_max_multiplicity_s2(A.orthogonal_zones(3, S3 + 1e-6)).value == 3


def test_witness_lies_in_that_many_zones():
    arr = random_arr(3, 30, 0.25)
    cert = A.exact_max_multiplicity_s2(arr)
    assert arr.depth(np.array([cert.witness]), tol=A.TIE_TOL)[0] == cert.value


def test_degenerate_duplicate_zone_flagged():
    arr = Arrangement(3, [[0, 0, 1], [0, 0, 1], [1, 0, 0]], 0.2)
    cert = A.exact_max_multiplicity_s2(arr)
    assert cert.degenerate and cert.value == 3


@pytest.mark.parametrize("seed", range(6))
def test_brute_force_never_exceeds_exact(seed, rng):
    arr = random_arr(seed, 5 + 7 * seed, 0.15 + 0.05 * seed)
    exact = A.exact_max_multiplicity_s2(arr).value
    x = sample_uniform(3, rng, 200_000)
    assert arr.depth(x).max() <= exact


# --------------------------------------------------------------------------
# exact coverage


def test_exact_coverage_examples():
    assert A.exact_coverage_s2(A.fejes_toth_configuration(3, 3, math.pi / 6 + 1e-9)).covered is True
    one = A.exact_coverage_s2(Arrangement(3, [[1, 0, 0]], math.pi / 2 - 1e-6))
    assert one.covered is False
    assert Arrangement(3, [[1, 0, 0]], math.pi / 2 - 1e-6).depth(np.array([one.witness]))[0] == 0
    empty = A.exact_coverage_s2(Arrangement(3))
    assert empty.covered is False and empty.witness == NORTH


def test_orthogonal_threshold_flip():
    assert A.exact_coverage_s2(A.orthogonal_zones(3, S3 + 1e-9)).covered is True
    below = A.exact_coverage_s2(A.orthogonal_zones(3, S3 - 1e-9))
    assert below.covered is False
    w = np.abs(below.witness)
    assert np.allclose(w, 1 / math.sqrt(3), atol=1e-6)
    assert A.orthogonal_zones(3, S3 - 1e-9).depth(np.array([below.witness]))[0] == 0


def test_orthogonal_threshold_against_grid_oracle():
    # the point farthest from all three coordinate planes maximizes min |x_i|
    g = np.linspace(-1, 1, 401)
    x, y = np.meshgrid(g, g)
    z2 = 1 - x ** 2 - y ** 2
    ok = z2 >= 0
    m = np.minimum(np.minimum(np.abs(x[ok]), np.abs(y[ok])), np.sqrt(z2[ok]))
    assert m.max() <= 1 / math.sqrt(3) + 1e-12
    assert m.max() == pytest.approx(1 / math.sqrt(3), abs=5e-3)


@pytest.mark.parametrize("seed", range(8))
def test_exact_coverage_against_sampling(seed, rng):
    n = 10 + 3 * seed
    arr = random_arr(100 + seed, n, 1.6 / n + 0.05)
    cov = A.exact_coverage_s2(arr)
    bare = arr.depth(sample_uniform(3, rng, 100_000)) == 0
    if bare.any():
        assert cov.covered is False
    if cov.covered is False:
        assert arr.depth(np.array([cov.witness]))[0] == 0


# --------------------------------------------------------------------------
# interior probe


def test_interior_probe_examples():
    assert A.interior_multiplicity_probe_s2(A.orthogonal_zones(3, 0.3), 10_000, 0) == 2
    assert A.interior_multiplicity_probe_s2(A.fejes_toth_configuration(3, 4, 0.2), 1000, 0) == 4
    assert A.interior_multiplicity_probe_s2(Arrangement(3), 100, 0) == 0


@pytest.mark.parametrize("t", [0.1, 0.4, S3 - 1e-6])
def test_orthogonal_interior_at_most_two(t):
    assert A.interior_multiplicity_probe_s2(A.orthogonal_zones(3, t), 20_000, 1) <= 2


def test_interior_probe_below_closed_exact():
    for seed in range(4):
        arr = random_arr(seed, 20, 0.3)
        assert A.interior_multiplicity_probe_s2(arr, 5000, seed) <= A.exact_max_multiplicity_s2(arr).value


# --------------------------------------------------------------------------
# four- and five-zone constructions

T_COVER = math.asin(1 / math.sqrt(5))
T_FOUR = math.asin(math.sqrt(3 / 7))


def test_pole_plus_equator_limits():
    thin = A.pole_plus_equator(0.01)
    assert A.exact_coverage_s2(thin).covered is False
    cert = A.exact_max_multiplicity_s2(thin)
    assert cert.value == 3 and abs(cert.witness[2]) == pytest.approx(1.0)
    assert A.exact_max_multiplicity_s2(A.pole_plus_equator(math.pi / 2 - 1e-3)).value == 4


def test_multiplicity3_interval_matches_analytic_thresholds():
    # coverage: the last uncovered points sit where two meridian boundaries meet
    # the equatorial boundary, at |z| = sin t = 1/sqrt(5); multiplicity 4 starts
    # where the three meridian boundaries cross the equatorial zone, sin^2 t = 3/7
    lo, hi = A.find_multiplicity3_width()
    assert lo < hi
    assert lo == pytest.approx(T_COVER, abs=1e-9)
    assert hi == pytest.approx(T_FOUR, abs=1e-9)
    assert A.exact_coverage_s2(A.pole_plus_equator(lo - 1e-6)).covered is False
    assert A.exact_max_multiplicity_s2(A.pole_plus_equator(hi + 1e-6)).value >= 4
    mid = A.pole_plus_equator(0.5 * (lo + hi))
    assert A.exact_coverage_s2(mid).covered is True
    assert A.exact_max_multiplicity_s2(mid).value == 3


def test_tilted_five_witness():
    w = A.find_tilted_five_witness()
    arr = A.tilted_five_zones(w["half_width"], w["tilt"])
    assert w["t_lo"] < w["half_width"] < w["t_hi"]
    assert A.exact_coverage_s2(arr).covered is True
    assert A.exact_max_multiplicity_s2(arr).value == 3
    # the covering is genuinely by five zones: dropping either tilted copy opens a hole
    for drop in (3, 4):
        keep = [i for i in range(5) if i != drop]
        sub = Arrangement(3, arr.poles[keep], arr.half_widths[keep])
        assert A.exact_coverage_s2(sub).covered is False


def test_untilted_copies_stack():
    lo, hi = A.find_multiplicity3_width()
    arr = A.tilted_five_zones(0.5 * (lo + hi), 0.0)
    cert = A.exact_max_multiplicity_s2(arr)
    assert cert.value >= 4 and cert.degenerate


@given(st.floats(0.005, 0.2), st.floats(0.3, 0.6), st.floats(1e-4, 0.05))
def test_tilted_coverage_monotone_in_width(tilt, t, dt):
    if A.exact_coverage_s2(A.tilted_five_zones(t, tilt)).covered:
        assert A.exact_coverage_s2(A.tilted_five_zones(t + dt, tilt)).covered


# --------------------------------------------------------------------------
# net certificates


def test_net_bound_examples(net3_coarse):
    one = Arrangement(3, [[0, 0, 1]], 0.2)
    up = A.net_multiplicity_upper_bound(one, net3_coarse)
    assert up.kind == "net_upper_bound" and up.value in (0, 1)
    assert up.net_omega == up.inflation == net3_coarse.omega
    ft = A.fejes_toth_configuration(3, 5, 0.1)
    assert A.net_multiplicity_upper_bound(ft, net3_coarse).value >= 5
    with pytest.raises(ValueError):
        A.net_multiplicity_upper_bound(ft, net3_coarse, inflation=0.001)


def test_net_bounds_bracket_exact(net3_coarse):
    for seed in range(5):
        arr = random_arr(seed, 100, 0.02)
        exact = A.exact_max_multiplicity_s2(arr).value
        up, lo = A.net_depth_bounds(arr, net3_coarse)
        assert lo.value <= exact <= up.value
        assert arr.depth(np.array([lo.witness]))[0] == lo.value


def test_bucketed_bound_matches_brute(net3_coarse):
    arr = random_arr(11, 300, 0.05)
    up, lo = A.net_depth_bounds(arr, net3_coarse, inflation=0.02)
    inflated = arr.with_half_widths(arr.half_widths + 0.02)
    assert up.value == inflated.depth(net3_coarse.points).max()
    assert lo.value == arr.depth(net3_coarse.points).max()


def test_sampled_lower_bound_is_attained(rng):
    arr = random_arr(1, 40, 0.3)
    x = sample_uniform(3, rng, 1000)
    cert = A.sampled_lower_bound(arr, x)
    assert cert.value == arr.depth(x).max()
    assert arr.depth(np.array([cert.witness]))[0] == cert.value


def test_net_bounds_in_d4(net4_coarse, rng):
    arr = random_arr(2, 50, 0.3, d=4)
    up, lo = A.net_depth_bounds(arr, net4_coarse)
    sampled = arr.depth(sample_uniform(4, rng, 50_000)).max()
    assert sampled <= up.value
    assert lo.value <= up.value


def test_coverage_certificate_examples(net3_fine):
    cov = A.coverage_certificate(A.orthogonal_zones(3, S3 + 0.01), net3_fine, 0)
    assert cov.covered is True and cov.kind == "net_certified" and cov.deflation == net3_fine.omega
    one = A.coverage_certificate(Arrangement(3, [[0, 0, 1]], 0.1), net3_fine, 0)
    assert one.covered is False and one.kind == "sampled_counterexample"
    assert Arrangement(3, [[0, 0, 1]], 0.1).depth(np.array([one.witness]))[0] == 0
    with pytest.raises(ValueError):
        A.coverage_certificate(A.orthogonal_zones(3, 0.004), net3_fine)


def test_coverage_certificate_refines_near_threshold(net3_fine):
    # deflated zones miss net points near (1,1,1)/sqrt3; local refinement decides
    up = A.coverage_certificate(A.orthogonal_zones(3, S3 + 1e-6), net3_fine, 0, probes=0)
    assert up.covered is True
    down = A.coverage_certificate(A.orthogonal_zones(3, S3 - 1e-6), net3_fine, 0, probes=0)
    assert down.covered is False
    assert A.orthogonal_zones(3, S3 - 1e-6).depth(np.array([down.witness]))[0] == 0


def test_coverage_certificate_indeterminate_path(net3_fine):
    # with no refinement budget and too many zones for the exact engine the answer is unknown
    old = A.EXACT_COVERAGE_LIMIT
    try:
        A.EXACT_COVERAGE_LIMIT = 0
        cov = A.coverage_certificate(A.orthogonal_zones(3, S3 + 1e-6), net3_fine, 0, probes=0, max_cells=1)
    finally:
        A.EXACT_COVERAGE_LIMIT = old
    assert cov.covered is None and cov.kind == "indeterminate"
    # with the exact fallback available it is decided on S^2
    cov = A.coverage_certificate(A.orthogonal_zones(3, S3 + 1e-6), net3_fine, 0, probes=0, max_cells=1)
    assert cov.covered is True and cov.kind == "exact_s2"


def test_coverage_certificate_in_d4(net4_coarse):
    cov = A.coverage_certificate(A.orthogonal_zones(4, 0.8), net4_coarse, 0)
    # max_i |x_i| >= 1/2 on S^3, so half-width asin(1/2) + margin covers
    assert cov.covered is True
    bare = A.coverage_certificate(A.orthogonal_zones(4, 0.45), net4_coarse, 0)
    assert bare.covered is False


@pytest.mark.parametrize("seed", range(6))
def test_net_and_exact_coverage_agree(seed, net3_fine):
    n = 40
    arr = random_arr(200 + seed, n, 0.12 + 0.01 * seed)
    a = A.coverage_certificate(arr, net3_fine, seed)
    b = A.exact_coverage_s2(arr)
    assert a.covered is not None
    assert a.covered == b.covered


# --------------------------------------------------------------------------
# invariances


@given(st.integers(0, 10_000), st.integers(1, 25), st.floats(0.05, 0.6))
def test_pole_negation_invariance(seed, n, t):
    arr = random_arr(seed, n, t)
    flip = np.where(np.random.default_rng(seed + 1).random(n) < 0.5, -1.0, 1.0)
    neg = Arrangement(3, arr.poles * flip[:, None], t)
    assert A.exact_max_multiplicity_s2(arr).value == A.exact_max_multiplicity_s2(neg).value
    assert A.exact_coverage_s2(arr).covered == A.exact_coverage_s2(neg).covered


@given(st.integers(0, 10_000), st.integers(1, 25), st.floats(0.05, 0.6))
def test_rotation_invariance(seed, n, t):
    arr = random_arr(seed, n, t)
    R = Rotation.random(random_state=seed).as_matrix()
    rot = Arrangement(3, arr.poles @ R.T, t)
    assert A.exact_max_multiplicity_s2(arr).value == A.exact_max_multiplicity_s2(rot).value


@given(st.integers(0, 10_000), st.integers(1, 25), st.floats(0.05, 0.6), st.floats(1e-3, 0.3))
def test_monotone_in_half_width(seed, n, t, dt):
    arr = random_arr(seed, n, t)
    wider = arr.with_half_widths(min(t + dt, 1.5))
    assert A.exact_max_multiplicity_s2(wider).value >= A.exact_max_multiplicity_s2(arr).value
    if A.exact_coverage_s2(arr).covered:
        assert A.exact_coverage_s2(wider).covered


# --------------------------------------------------------------------------
# files and serialization


@given(st.integers(0, 10_000), st.integers(0, 30), st.integers(3, 6))
def test_arrangement_file_roundtrip(tmp_path_factory, seed, n, d):
    rng = np.random.default_rng(seed)
    arr = Arrangement(d, sample_uniform(d, rng, n).reshape(n, d), rng.uniform(0.01, 1.5, n))
    path = tmp_path_factory.mktemp("arr") / "a.txt"
    A.save_arrangement(arr, path)
    assert path.read_text().splitlines()[0] == f"# d={d} n={n}"
    assert A.load_arrangement(path) == arr


def test_load_arrangement_errors(tmp_path):
    p = tmp_path / "x.txt"
    for text in ["", "# d=3\n", "# d=3 n=2\n0 0 1 0.1\n", "# d=3 n=1\n0 0 1\n", "# d=3 n=1\n0 0 a 0.1\n", "# d=3 n=1\n0 0 1 3.0\n"]:
        p.write_text(text)
        with pytest.raises(ValueError):
            A.load_arrangement(p)


def test_certificate_json_roundtrip():
    d = A.DepthCertificate("net_upper_bound", 7, (0.0, 1.0, 0.0), 0.01, 0.02)
    c = A.CoverageCertificate(False, "sampled_counterexample", 0.01, (1.0, 0.0, 0.0))
    assert A.DepthCertificate.from_dict(json.loads(json.dumps(d.to_dict()))) == d
    assert A.CoverageCertificate.from_dict(json.loads(json.dumps(c.to_dict()))) == c
    doc = json.loads(A.certificates_json(d, c, {"seed": 3}))
    assert doc["schema_version"] == 1 and doc["depth"]["value"] == 7 and doc["coverage"]["covered"] is False
    assert set(doc["depth"]) >= {"kind", "value", "witness", "net_omega", "inflation"}
    assert set(doc["coverage"]) >= {"covered", "kind", "deflation", "witness"}


def test_dimension_mismatch(net3_coarse):
    with pytest.raises(ValueError):
        A.net_multiplicity_upper_bound(A.orthogonal_zones(4, 0.3), net3_coarse)
    with pytest.raises(ValueError):
        A.sampled_lower_bound(A.orthogonal_zones(4, 0.3), np.eye(3))
    empty_net = SaturatedNet(3, 0.1, np.empty((0, 3)), 0)
    with pytest.raises(ValueError):
        A.coverage_certificate(A.orthogonal_zones(3, 0.3), empty_net)


@pytest.mark.parametrize("seed", range(3))
def test_bucketed_exact_engine_matches_plain_scan(seed):
    from zonelab import _kernels as K

    arr = random_arr(300 + seed, 300, 0.08)
    a, c, owner = A._circles(arr)
    pts = np.vstack([[0.0, 0.0, 1.0], A._circle_point(a, c)] + [p for p, _, _ in A._intersections(a, c, owner, [])])
    best, i = K.max_depth(pts, np.ascontiguousarray(arr.poles), arr.sines + A.TIE_TOL)
    cert = A.exact_max_multiplicity_s2(arr)
    assert cert.value == best
    assert np.allclose(cert.witness, pts[i])
