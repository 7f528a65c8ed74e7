import math

import numpy as np
import pytest
from scipy import stats

from hetnet_sim.config import ConfigError, ScenarioConfig
from hetnet_sim.scenario import build_snapshot, place_macros, sample_ppp

from oracles import hex_points


def test_full_scale_lattice_has_33_sites():
    assert len(place_macros(ScenarioConfig())) == 33


def test_center_anchor_small_area_is_single_site():
    cfg = ScenarioConfig(area_side_m=600.0, macro_spacing_m=1000.0, hex_anchor="center")
    pts = place_macros(cfg)
    assert pts.tolist() == [[300.0, 300.0]]


@pytest.mark.parametrize("side", [2000.0, 3500.0, 5000.0, 777.0])
@pytest.mark.parametrize("anchor", ["corner", "center"])
def test_lattice_matches_enumeration(side, anchor):
    cfg = ScenarioConfig(area_side_m=side, hex_anchor=anchor)
    origin = (0.0, 0.0) if anchor == "corner" else (side / 2, side / 2)
    expected = sorted(hex_points(side, 1000.0, *origin), key=lambda p: (p[1], p[0]))
    got = place_macros(cfg)
    assert len(got) == len(expected)
    np.testing.assert_allclose(got, np.array(expected).reshape(-1, 2), atol=1e-9)


def test_desk_lattice_count():
    assert len(place_macros(ScenarioConfig(area_side_m=2000.0))) == len(hex_points(2000.0, 1000.0, 0, 0)) == 8


@pytest.mark.parametrize("d", [1000.0, 400.0, 333.3])
def test_hex_nearest_neighbour_distance(d):
    pts = place_macros(ScenarioConfig(macro_spacing_m=d, area_side_m=3000.0))
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(dist, np.inf)
    np.testing.assert_allclose(dist.min(axis=1), d, atol=1e-9)


def test_ppp_null_process(rng):
    assert sample_ppp(0.0, 5000.0, rng).shape == (0, 2)


@pytest.mark.parametrize("mean", [200, 5000])
def test_ppp_mean_count(mean, rng):
    side = 5000.0
    counts = [len(sample_ppp(mean / side**2, side, rng)) for _ in range(1000)]
    assert abs(np.mean(counts) - mean) <= 3 * math.sqrt(mean) / math.sqrt(1000)


def test_ppp_uniformity_chi_square(rng):
    side = 1000.0
    pts = []
    while sum(len(p) for p in pts) < 100_000:
        pts.append(sample_ppp(1e-2, side, rng))
    pts = np.vstack(pts)[:100_000]
    hist, _, _ = np.histogram2d(pts[:, 0], pts[:, 1], bins=5, range=[[0, side], [0, side]])
    assert stats.chisquare(hist.ravel()).pvalue > 0.01


def test_snapshot_containment_and_ids():
    cfg = ScenarioConfig(area_side_m=2000.0)
    snap = build_snapshot(cfg, np.random.default_rng(4))
    for arr in (snap.macro_positions, snap.femto_positions, snap.user_positions):
        assert np.all((arr >= 0) & (arr <= cfg.area_side_m))
    ids = [s.id for s in snap.stations]
    assert ids == list(range(snap.n_bs))
    assert len(set(ids)) == len(ids)


def test_snapshot_deterministic():
    cfg = ScenarioConfig(area_side_m=2000.0, n_fragments=4)
    a = build_snapshot(cfg, np.random.default_rng(99))
    b = build_snapshot(cfg, np.random.default_rng(99))
    c = build_snapshot(cfg, np.random.default_rng(100))
    assert a.equals(b)
    assert not a.equals(c)


def test_snapshot_macros_only():
    cfg = ScenarioConfig(femto_intensity_per_m2=0.0, user_intensity_per_m2=0.0)
    snap = build_snapshot(cfg, np.random.default_rng(0))
    assert snap.n_macros == 33 and snap.n_femtos == 0 and snap.n_users == 0


def test_station_views_consistent():
    cfg = ScenarioConfig(area_side_m=2000.0, n_fragments=10)
    snap = build_snapshot(cfg, np.random.default_rng(1))
    for st in snap.stations:
        if st.tier == "macro":
            assert st.prb_set == frozenset(range(100))
            assert math.isclose(st.tx_power_w, 19.952623149688797)
        else:
            assert len(st.prb_set) == 10
            assert math.isclose(st.tx_power_w, 0.1)
    for user in snap.users:
        if user.subscriber_of is not None:
            assert user.id in snap.station(user.subscriber_of).csg


@pytest.mark.parametrize(
    "changes",
    [{"area_side_m": 0.0}, {"area_side_m": -5.0}, {"n_fragments": 3}, {"noise_power_w": -1e-12}, {"csg_size": -1}],
)
def test_invalid_config_rejected(changes):
    with pytest.raises(ConfigError):
        ScenarioConfig(**changes)
