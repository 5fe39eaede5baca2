"""Tests for the Gaussian pointer model, detector binning and frame IO."""

import numpy as np
import pytest

from lgweak.pointer import (
    CountsGrid,
    DetectorGrid,
    GridTooSmall,
    MixtureAmplitude,
    PointerConfig,
    derive_seed,
    detector_for,
    exact_moments,
    pixel_probabilities,
    postselected_amplitude,
    read_counts,
    sample_frame,
    write_counts,
)
from lgweak.qubit import (
    PostSelectionSingular,
    expectation,
    observable_from_angle,
    sequential_weak_value,
    state_from_angle,
    weak_value,
)

PI = np.pi

PRE = state_from_angle(0.233 * PI)
POST = state_from_angle(0.867 * PI)
OBS_B = observable_from_angle(0.1 * PI)
OBS_C = observable_from_angle(0.0)


def _grid_moments(pix: np.ndarray, grid: DetectorGrid) -> tuple:
    xc, yc = grid.x_centers(), grid.y_centers()
    mx = float((pix.sum(axis=1) * xc).sum())
    my = float((pix.sum(axis=0) * yc).sum())
    mxy = float((pix * np.outer(xc, yc)).sum())
    return mx, my, mxy


# ---------------------------------------------------------------------------
# configuration and amplitude plumbing
# ---------------------------------------------------------------------------


def test_pointer_config_validation():
    with pytest.raises(ValueError):
        PointerConfig(sigma=0.0, g_x=0.1, g_y=0.1)
    with pytest.raises(ValueError):
        PointerConfig(sigma=1.0, g_x=-0.1, g_y=0.1)
    with pytest.raises(ValueError):
        PointerConfig(sigma=1.0, g_x=0.1, g_y=0.1, order="sideways")
    cfg = PointerConfig(sigma=2.0, g_x=0.5, g_y=0.25)
    assert cfg.weakness_x == pytest.approx(0.25)
    assert cfg.weakness_y == pytest.approx(0.125)


def test_mixture_amplitude_requires_2x2():
    with pytest.raises(ValueError):
        MixtureAmplitude(np.ones((2, 3)), 0.1, 0.1, 1.0)


def test_single_branch_shifts_exactly():
    """Pre/post aligned with both observables leaves one branch: means = g."""
    h = state_from_angle(0.0)
    obs = observable_from_angle(0.0)
    cfg = PointerConfig(sigma=1.0, g_x=0.3, g_y=0.7)
    amp = postselected_amplitude(h, obs, obs, h, cfg)
    m = exact_moments(amp)
    assert m.prob == pytest.approx(1.0, abs=1e-14)
    assert m.mean_x == pytest.approx(0.3, abs=1e-14)
    assert m.mean_y == pytest.approx(0.7, abs=1e-14)
    assert m.mean_xy == pytest.approx(0.21, abs=1e-14)


def test_zero_coupling_probability_is_transition_probability():
    cfg = PointerConfig(sigma=1.0, g_x=0.0, g_y=0.0)
    amp = postselected_amplitude(PRE, OBS_B, OBS_C, POST, cfg)
    m = exact_moments(amp)
    assert m.prob == pytest.approx(abs(np.vdot(POST.vector, PRE.vector)) ** 2, abs=1e-14)
    assert m.mean_x == pytest.approx(0.0, abs=1e-14)
    assert m.mean_y == pytest.approx(0.0, abs=1e-14)
    assert m.mean_xy == pytest.approx(0.0, abs=1e-14)


def test_port_probabilities_sum_to_one():
    """Post-selecting on both analyzer ports exhausts the ensemble exactly."""
    cfg = PointerConfig(sigma=1.0, g_x=0.1, g_y=0.1)
    p_d = postselected_amplitude(PRE, OBS_B, OBS_C, POST, cfg).postselection_probability()
    p_perp = postselected_amplitude(
        PRE, OBS_B, OBS_C, POST.orthogonal(), cfg
    ).postselection_probability()
    assert p_d + p_perp == pytest.approx(1.0, abs=1e-14)


def test_orthogonal_postselection_zero_coupling_raises():
    cfg = PointerConfig(sigma=1.0, g_x=0.0, g_y=0.0)
    with pytest.raises(PostSelectionSingular):
        postselected_amplitude(PRE, OBS_B, OBS_C, PRE.orthogonal(), cfg)


def test_orthogonal_postselection_finite_coupling_survives():
    """The weak disturbance opens the forbidden transition at O(g^2/sigma^2)."""
    cfg = PointerConfig(sigma=1.0, g_x=0.1, g_y=0.1)
    amp = postselected_amplitude(PRE, OBS_B, OBS_C, PRE.orthogonal(), cfg)
    prob = amp.postselection_probability()
    assert 0.0 < prob < 0.01


# ---------------------------------------------------------------------------
# exact moments against weak-value theory
# ---------------------------------------------------------------------------


def test_weak_limit_recovers_postselected_values():
    """At g/sigma = 1e-4 the normalized means reproduce the weak values."""
    g = 1e-4
    cfg = PointerConfig(sigma=1.0, g_x=g, g_y=g)
    amp = postselected_amplitude(PRE, OBS_B, OBS_C, POST, cfg)
    m = exact_moments(amp)
    wv_b = weak_value(OBS_B, PRE, POST).real
    wv_c = weak_value(OBS_C, PRE, POST).real
    swv = sequential_weak_value(OBS_C, OBS_B, PRE, POST).real
    assert m.mean_x / g == pytest.approx(wv_b, abs=1e-6)
    assert m.mean_y / g == pytest.approx(wv_c, abs=1e-6)
    # E[xy]/gxgy tends to (sequential + product of singles) / 2
    assert m.mean_xy / g**2 == pytest.approx((swv + wv_b * wv_c) / 2.0, abs=1e-5)


def test_weak_limit_without_postselection_gives_expectations():
    g = 1e-4
    cfg = PointerConfig(sigma=1.0, g_x=g, g_y=g)
    amp = postselected_amplitude(PRE, OBS_B, OBS_C, PRE, cfg)
    m = exact_moments(amp)
    assert m.mean_x / g == pytest.approx(expectation(OBS_B, PRE), abs=1e-6)
    assert m.mean_y / g == pytest.approx(expectation(OBS_C, PRE), abs=1e-6)


def test_coupling_order_enters_xy_at_leading_order():
    """Each coupling order reads out its own operator ordering in E[xy].

    The two orderings differ by g_x g_y (swv_cb - swv_bc) / 2 in the raw xy
    moment, while the single-axis means agree to O(g^3).
    """
    g = 1e-3
    mb = exact_moments(
        postselected_amplitude(PRE, OBS_B, OBS_C, POST, PointerConfig(1.0, g, g, "b_first"))
    )
    mc = exact_moments(
        postselected_amplitude(PRE, OBS_B, OBS_C, POST, PointerConfig(1.0, g, g, "c_first"))
    )
    swv_cb = sequential_weak_value(OBS_C, OBS_B, PRE, POST).real
    swv_bc = sequential_weak_value(OBS_B, OBS_C, PRE, POST).real
    assert (mb.mean_xy - mc.mean_xy) / g**2 == pytest.approx(
        (swv_cb - swv_bc) / 2.0, abs=1e-4
    )
    assert abs(mb.mean_x - mc.mean_x) < 10.0 * g**3
    assert abs(mb.mean_y - mc.mean_y) < 10.0 * g**3


def test_single_axis_order_difference_is_cubic():
    diffs = []
    for g in (0.2, 0.1, 0.05):
        mb = exact_moments(
            postselected_amplitude(PRE, OBS_B, OBS_C, POST, PointerConfig(1.0, g, g, "b_first"))
        )
        mc = exact_moments(
            postselected_amplitude(PRE, OBS_B, OBS_C, POST, PointerConfig(1.0, g, g, "c_first"))
        )
        diffs.append(abs(mb.mean_x - mc.mean_x))
    # halving g should cut the difference by about 8; allow a loose window
    assert diffs[0] / diffs[1] == pytest.approx(8.0, rel=0.25)
    assert diffs[1] / diffs[2] == pytest.approx(8.0, rel=0.25)


# ---------------------------------------------------------------------------
# detector grid and pixel probabilities
# ---------------------------------------------------------------------------


def test_grid_geometry():
    grid = DetectorGrid(4, 4, 0.5)
    assert np.allclose(grid.x_edges(), [-1.0, -0.5, 0.0, 0.5, 1.0])
    assert np.allclose(grid.x_centers(), [-0.75, -0.25, 0.25, 0.75])
    off = DetectorGrid(2, 2, 1.0, origin=(10.0, -3.0))
    assert np.allclose(off.x_centers(), [9.5, 10.5])
    assert np.allclose(off.y_centers(), [-3.5, -2.5])
    with pytest.raises(ValueError):
        DetectorGrid(0, 4, 0.5)
    with pytest.raises(ValueError):
        DetectorGrid(4, 4, -1.0)


def test_detector_for_span():
    grid = detector_for(2.0, pixels=32, span_sigmas=12.0)
    assert grid.n_x == grid.n_y == 32
    assert grid.x_edges()[-1] == pytest.approx(12.0)  # 6 sigma of 2.0


def test_pixel_probabilities_normalized_and_symmetric():
    """Zero coupling leaves a centered Gaussian: symmetric pixel matrix."""
    cfg = PointerConfig(sigma=1.0, g_x=0.0, g_y=0.0)
    amp = postselected_amplitude(PRE, OBS_B, OBS_C, POST, cfg)
    grid = detector_for(1.0, pixels=32)
    pix = pixel_probabilities(amp, grid)
    assert pix.shape == (32, 32)
    assert pix.sum() == pytest.approx(1.0, abs=1e-6)
    assert np.allclose(pix, pix[::-1, :], atol=1e-15)
    assert np.allclose(pix, pix[:, ::-1], atol=1e-15)
    assert np.allclose(pix, pix.T, atol=1e-15)


def test_pixel_moments_match_exact_moments():
    # Gaussian pixel sums are spectrally accurate in the pitch, so the
    # residual is the truncation mass outside the grid, not discretization.
    cfg = PointerConfig(sigma=1.0, g_x=0.1, g_y=0.1)
    amp = postselected_amplitude(PRE, OBS_B, OBS_C, POST, cfg)
    exact = exact_moments(amp)

    pix12 = pixel_probabilities(amp, detector_for(1.0, pixels=32, span_sigmas=12.0))
    mx, my, mxy = _grid_moments(pix12, detector_for(1.0, pixels=32, span_sigmas=12.0))
    assert mx == pytest.approx(exact.mean_x, abs=5e-7)
    assert my == pytest.approx(exact.mean_y, abs=5e-7)
    assert mxy == pytest.approx(exact.mean_xy, abs=5e-7)

    # widening the span to 16 sigma kills the truncation residual
    grid16 = detector_for(1.0, pixels=64, span_sigmas=16.0)
    mx16, my16, mxy16 = _grid_moments(pixel_probabilities(amp, grid16), grid16)
    assert mx16 == pytest.approx(exact.mean_x, abs=1e-12)
    assert my16 == pytest.approx(exact.mean_y, abs=1e-12)
    assert mxy16 == pytest.approx(exact.mean_xy, abs=1e-12)


def test_pixel_probabilities_span_guard():
    cfg = PointerConfig(sigma=1.0, g_x=0.1, g_y=0.1)
    amp = postselected_amplitude(PRE, OBS_B, OBS_C, POST, cfg)
    with pytest.raises(GridTooSmall):
        pixel_probabilities(amp, DetectorGrid(8, 8, 1.0))  # spans only +-4 sigma


def test_pixel_probabilities_out_of_grid_guard():
    """A strongly displaced branch pushes mass past the grid edge."""
    h = state_from_angle(0.0)
    obs = observable_from_angle(0.0)
    amp = postselected_amplitude(h, obs, obs, h, PointerConfig(1.0, 3.0, 0.0))
    grid = DetectorGrid(32, 32, 10.2 / 32)  # spans +-5.1 sigma, clears the span guard
    with pytest.raises(GridTooSmall, match="out-of-grid"):
        pixel_probabilities(amp, grid)


# ---------------------------------------------------------------------------
# photon counting
# ---------------------------------------------------------------------------


def _reference_pixels():
    cfg = PointerConfig(sigma=1.0, g_x=0.1, g_y=0.1)
    amp = postselected_amplitude(PRE, OBS_B, OBS_C, POST, cfg)
    grid = detector_for(1.0, pixels=32)
    return pixel_probabilities(amp, grid), grid


def test_sample_frame_deterministic_and_conserving():
    pix, grid = _reference_pixels()
    f1 = sample_frame(pix, 10_000, seed=123, grid=grid)
    f2 = sample_frame(pix, 10_000, seed=123, grid=grid)
    f3 = sample_frame(pix, 10_000, seed=124, grid=grid)
    assert np.array_equal(f1.counts, f2.counts)
    assert not np.array_equal(f1.counts, f3.counts)
    assert f1.counts.sum() == 10_000
    assert f1.total == 10_000
    assert f1.dark is None
    assert np.array_equal(f1.observed(), f1.counts)


def test_sample_frame_dark_counts_kept_separate():
    pix, grid = _reference_pixels()
    frame = sample_frame(pix, 5_000, dark_rate=0.2, seed=9, grid=grid)
    assert frame.dark is not None
    assert frame.counts.sum() == 5_000  # signal conservation unaffected by dark
    assert frame.dark.min() >= 0
    # mean dark level should be near rate * pixels
    assert frame.dark.sum() == pytest.approx(0.2 * 32 * 32, rel=0.5)
    assert np.array_equal(frame.observed(), frame.counts + frame.dark)


def test_sample_frame_input_validation():
    pix, grid = _reference_pixels()
    with pytest.raises(ValueError):
        sample_frame(pix, 0, grid=grid)
    with pytest.raises(ValueError):
        sample_frame(pix, 100, dark_rate=-1.0, grid=grid)


def test_counts_grid_validation():
    grid = DetectorGrid(2, 2, 1.0)
    with pytest.raises(ValueError):
        CountsGrid(np.array([[1, 2], [3, 4]]), total=11, grid=grid, seed=0)
    with pytest.raises(ValueError):
        CountsGrid(np.array([[1, -2], [3, 4]]), total=6, grid=grid, seed=0)
    with pytest.raises(ValueError):
        CountsGrid(np.ones((3, 2), dtype=int), total=6, grid=grid, seed=0)


def test_counts_roundtrip(tmp_path):
    pix, grid = _reference_pixels()
    frame = sample_frame(pix, 20_000, dark_rate=0.1, seed=77, grid=grid)
    sidecar = write_counts(
        frame, tmp_path / "frame.csv", header={"alpha_pi": 0.233, "label": "demo"}
    )
    assert sidecar == tmp_path / "frame.json"

    loaded, meta = read_counts(tmp_path / "frame.csv")
    assert np.array_equal(loaded.counts, frame.counts)
    assert np.array_equal(loaded.dark, frame.dark)
    assert loaded.total == frame.total
    assert loaded.seed == 77
    assert loaded.grid == frame.grid
    assert meta["alpha_pi"] == 0.233
    assert meta["label"] == "demo"
    assert meta["n_photons"] == 20_000


def test_counts_roundtrip_without_dark(tmp_path):
    pix, grid = _reference_pixels()
    frame = sample_frame(pix, 1_000, seed=5, grid=grid)
    write_counts(frame, tmp_path / "plain.csv")
    loaded, meta = read_counts(tmp_path / "plain.csv")
    assert loaded.dark is None
    assert "dark_csv" not in meta
    assert np.array_equal(loaded.counts, frame.counts)


# ---------------------------------------------------------------------------
# seed derivation
# ---------------------------------------------------------------------------


def test_derive_seed_is_deterministic_and_spread():
    assert derive_seed(7, 0) == derive_seed(7, 0)
    children = {derive_seed(7, i) for i in range(100)}
    assert len(children) == 100
    assert derive_seed(7, 0) != derive_seed(8, 0)


def test_derived_streams_are_independent():
    """Sibling seeds must spawn decorrelated generators and distinct frames."""
    pix, grid = _reference_pixels()
    a = sample_frame(pix, 50_000, seed=derive_seed(3, 0), grid=grid)
    b = sample_frame(pix, 50_000, seed=derive_seed(3, 1), grid=grid)
    assert not np.array_equal(a.counts, b.counts)

    u0 = np.random.default_rng(derive_seed(3, 0)).uniform(size=4096)
    u1 = np.random.default_rng(derive_seed(3, 1)).uniform(size=4096)
    corr = np.corrcoef(u0, u1)[0, 1]
    assert abs(corr) < 0.06  # ~4 standard errors for 4096 iid pairs
