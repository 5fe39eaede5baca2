"""Run orchestration: configs, theory reports, violation sweeps, Monte Carlo.

Angles cross this boundary in units of pi (0.233 means 0.233 pi radians) and
are converted to radians immediately; everything below works in radians.
Distances are in units of the pointer width, i.e. sigma = 1.

A full simulated experiment mirrors the optical bench: one run post-selects
back onto the preparation and reads the three weak averages; a second photon
stream splits between the two analyzer ports (binomial with the exact
port probability, pointer corrections included), and each port frame yields
its conditional value.  `compose_b4` then assembles the inequality.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .estimators import (
    MIN_COUNTS,
    B4Estimate,
    InsufficientCounts,
    ZeroCoupling,
    compose_b4,
    grid_moments,
    postselected_weak_value,
    weak_averages,
)
from .inequalities import (
    VIOLATION_TOL,
    anomaly_threshold,
    b4_closed_form,
    b4_value,
    correlators_b4,
)
from .pointer import (
    DetectorGrid,
    PointerConfig,
    derive_seed,
    pixel_probabilities,
    postselected_amplitude,
    sample_frame,
    write_counts,
)
from .qubit import observable_from_angle, state_from_angle

SIGMA = 1.0


@dataclass(frozen=True)
class RunConfig:
    """One simulated configuration; angles in pi units."""

    alpha_pi: float = 0.233
    gamma_pi: float = 0.1
    delta_pi: float = 0.867
    photons: int = 1_000_000
    g_over_sigma: float = 0.1
    pixels: int = 32
    pitch_over_sigma: float = 12.0 / 32.0
    dark_rate: float = 0.0
    seed: int = 7

    def __post_init__(self):
        if self.photons < 1:
            raise ValueError(f"photons must be >= 1, got {self.photons}")
        if self.pixels < 8:
            raise ValueError(f"pixels must be >= 8, got {self.pixels}")
        if self.g_over_sigma <= 0.0:
            raise ZeroCoupling(
                f"g_over_sigma must be positive, got {self.g_over_sigma}"
            )
        if self.g_over_sigma > 0.5:
            raise ValueError(
                f"g_over_sigma must be <= 0.5 for the weak regime, got {self.g_over_sigma}"
            )
        if self.pitch_over_sigma <= 0:
            raise ValueError("pitch_over_sigma must be positive")
        if self.dark_rate < 0:
            raise ValueError("dark_rate must be non-negative")


_INT_FIELDS = {"photons", "pixels", "seed"}


def config_to_ini(cfg: RunConfig) -> str:
    """Flat key = value serialization, one field per line."""
    lines = [f"{f.name} = {getattr(cfg, f.name)}" for f in fields(cfg)]
    return "\n".join(lines) + "\n"


def config_from_ini(text: str) -> RunConfig:
    """Parse the flat key = value format; unknown keys are an error."""
    known = {f.name for f in fields(RunConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in known:
            raise ValueError(f"line {lineno}: unknown config key {key!r}")
        try:
            values[key] = int(val) if key in _INT_FIELDS else float(val)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad value for {key!r}: {val.strip()!r}") from exc
    return RunConfig(**values)


def load_config(path) -> RunConfig:
    return config_from_ini(Path(path).read_text())


def save_config(cfg: RunConfig, path) -> None:
    Path(path).write_text(config_to_ini(cfg))


# ---------------------------------------------------------------------------
# closed-form theory


def theory_report(alpha_pi: float, gamma_pi: float, delta_pi: float) -> dict:
    """Exact correlators, B4 verdict, conditional values and threshold."""
    alpha, gamma, delta = (x * np.pi for x in (alpha_pi, gamma_pi, delta_pi))
    corr = correlators_b4(alpha, gamma, delta)
    verdict = b4_value(corr)
    threshold = anomaly_threshold(corr.exp_b, corr.corr_bc, corr.exp_c, corr.p_d_minus)
    return {
        "angles": {"alpha_pi": alpha_pi, "gamma_pi": gamma_pi, "delta_pi": delta_pi},
        "correlators": asdict(corr),
        "b4": {
            "value": verdict.value,
            "lower_bound": verdict.lower_bound,
            "upper_bound": verdict.upper_bound,
            "classification": verdict.classification,
        },
        "conditional_values": {
            "plus_port": corr.wv_c_plus,
            "minus_port": corr.wv_c_minus,
            "plus_anomalous": abs(corr.wv_c_plus) > 1.0 + 1e-12,
            "minus_anomalous": abs(corr.wv_c_minus) > 1.0 + 1e-12,
        },
        "anomaly_threshold": threshold,
    }


# ---------------------------------------------------------------------------
# violation sweep


@dataclass(frozen=True)
class SweepSpec:
    """Map B4 over (alpha, delta) at fixed gamma; ranges in pi units."""

    gamma_pi: float
    alpha_range: tuple = (0.0, 1.0, 101)
    delta_range: tuple = (0.0, 1.0, 101)

    def __post_init__(self):
        for name, rng in (("alpha_range", self.alpha_range), ("delta_range", self.delta_range)):
            start, stop, steps = rng
            if not 0.0 <= start <= stop <= 1.0:
                raise ValueError(f"{name} must satisfy 0 <= start <= stop <= 1, got {rng}")
            if int(steps) < 2:
                raise ValueError(f"{name} needs at least 2 steps, got {steps}")

    def alphas_pi(self) -> np.ndarray:
        start, stop, steps = self.alpha_range
        return np.linspace(start, stop, int(steps))

    def deltas_pi(self) -> np.ndarray:
        start, stop, steps = self.delta_range
        return np.linspace(start, stop, int(steps))


def classify_b4(b4) -> np.ndarray:
    """Vectorized {neg, none, pos} classification against the +-2 bounds."""
    b4 = np.asarray(b4)
    out = np.full(b4.shape, "none", dtype=object)
    out[b4 > 2.0 + VIOLATION_TOL] = "pos"
    out[b4 < -2.0 - VIOLATION_TOL] = "neg"
    return out


def sweep_b4(spec: SweepSpec) -> dict:
    """Evaluate the closed-form B4 on the grid.

    Returns arrays keyed alphas_pi, deltas_pi, b4 (len(alphas) x len(deltas))
    and the matching class matrix.
    """
    alphas = spec.alphas_pi()
    deltas = spec.deltas_pi()
    b4 = b4_closed_form(
        alphas[:, None] * np.pi, spec.gamma_pi * np.pi, deltas[None, :] * np.pi
    )
    return {
        "alphas_pi": alphas,
        "deltas_pi": deltas,
        "b4": b4,
        "classes": classify_b4(b4),
    }


def sweep_rows(result: dict):
    """Flatten a sweep into (alpha_pi, delta_pi, b4, class) rows, alpha-major."""
    for i, a in enumerate(result["alphas_pi"]):
        for j, d in enumerate(result["deltas_pi"]):
            yield float(a), float(d), float(result["b4"][i, j]), str(result["classes"][i, j])


def write_sweep_csv(result: dict, path) -> dict:
    """Write the sweep CSV; returns a summary of the extremal values.

    Floats are written with full repr precision so a re-parse reproduces the
    classification bit for bit.
    """
    lines = ["alpha_pi,delta_pi,b4,class"]
    for a, d, v, cls in sweep_rows(result):
        lines.append(f"{a!r},{d!r},{v!r},{cls}")
    Path(path).write_text("\n".join(lines) + "\n")
    return sweep_summary(result)


def sweep_summary(result: dict) -> dict:
    b4 = result["b4"]
    i_max, j_max = np.unravel_index(np.argmax(b4), b4.shape)
    i_min, j_min = np.unravel_index(np.argmin(b4), b4.shape)
    return {
        "max": {
            "b4": float(b4[i_max, j_max]),
            "alpha_pi": float(result["alphas_pi"][i_max]),
            "delta_pi": float(result["deltas_pi"][j_max]),
        },
        "min": {
            "b4": float(b4[i_min, j_min]),
            "alpha_pi": float(result["alphas_pi"][i_min]),
            "delta_pi": float(result["deltas_pi"][j_min]),
        },
    }


# ---------------------------------------------------------------------------
# Monte Carlo experiment


@dataclass(frozen=True)
class SimulationResult:
    config: RunConfig
    frames: dict  # run name -> CountsGrid
    estimate: B4Estimate
    report: dict


def run_simulation(cfg: RunConfig) -> SimulationResult:
    """Simulate the three post-selection runs and estimate B4.

    Stream 1 (run_a): post-selection back onto the preparation; photons that
    pass (binomial with the exact probability) land on the detector and give
    i_b, i_c, i_bc.  Stream 2 (run_d / run_dperp): the analyzer splits the
    photons between its two ports; each port frame gives the conditional
    value of the middle observable.  Seeds for the sub-tasks derive from
    cfg.seed through `derive_seed`.
    """
    alpha = cfg.alpha_pi * np.pi
    gamma = cfg.gamma_pi * np.pi
    delta = cfg.delta_pi * np.pi
    g = cfg.g_over_sigma * SIGMA
    pcfg = PointerConfig(sigma=SIGMA, g_x=g, g_y=g)
    grid = DetectorGrid(cfg.pixels, cfg.pixels, cfg.pitch_over_sigma * SIGMA)

    psi_a = state_from_angle(alpha)
    obs_b = observable_from_angle(gamma)
    obs_c = observable_from_angle(0.0)
    psi_d = state_from_angle(delta)
    psi_d_perp = psi_d.orthogonal()

    amp_a = postselected_amplitude(psi_a, obs_b, obs_c, psi_a, pcfg)
    amp_d = postselected_amplitude(psi_a, obs_b, obs_c, psi_d, pcfg)
    amp_dperp = postselected_amplitude(psi_a, obs_b, obs_c, psi_d_perp, pcfg)

    # exact acceptance probabilities; the two analyzer ports are exhaustive
    p_accept_a = amp_a.postselection_probability()
    p_port_d = amp_d.postselection_probability()

    rng = np.random.default_rng(derive_seed(cfg.seed, 0))
    n_a = int(rng.binomial(cfg.photons, p_accept_a))
    n_d = int(rng.binomial(cfg.photons, p_port_d))
    n_dperp = cfg.photons - n_d
    for name, n_run in (("run_a", n_a), ("run_d", n_d), ("run_dperp", n_dperp)):
        if n_run < MIN_COUNTS:
            raise InsufficientCounts(
                f"{name} collects only {n_run} photons (< {MIN_COUNTS}); "
                "increase --photons or move the analyzer off the singular angle"
            )

    frames = {}
    for index, (name, amp, n_photons) in enumerate(
        [("run_a", amp_a, n_a), ("run_d", amp_d, n_d), ("run_dperp", amp_dperp, n_dperp)],
        start=1,
    ):
        pix = pixel_probabilities(amp, grid)
        frames[name] = sample_frame(
            pix, n_photons, dark_rate=cfg.dark_rate, seed=derive_seed(cfg.seed, index), grid=grid
        )

    run_a = weak_averages(grid_moments(frames["run_a"]), g, g)
    run_d = postselected_weak_value(frames["run_d"], g)
    run_dperp = postselected_weak_value(frames["run_dperp"], g)
    p_hat = n_d / cfg.photons
    estimate = compose_b4(run_a, run_d, run_dperp, p_hat, n_d, n_dperp)

    report = build_report(cfg, estimate)
    return SimulationResult(config=cfg, frames=frames, estimate=estimate, report=report)


def build_report(cfg: RunConfig, est: B4Estimate) -> dict:
    """JSON-ready report; deterministic for a fixed config and seed."""
    theory = theory_report(cfg.alpha_pi, cfg.gamma_pi, cfg.delta_pi)
    return {
        "angles": {
            "alpha_pi": cfg.alpha_pi,
            "gamma_pi": cfg.gamma_pi,
            "delta_pi": cfg.delta_pi,
        },
        "g_over_sigma": cfg.g_over_sigma,
        "sigma": SIGMA,
        "photons_per_run": cfg.photons,
        "dark_rate": cfg.dark_rate,
        "seed": cfg.seed,
        "runs": {
            "run_a": {
                "i_b": est.run_a.i_b,
                "se_b": est.run_a.se_b,
                "i_c": est.run_a.i_c,
                "se_c": est.run_a.se_c,
                "i_bc": est.run_a.i_bc,
                "se_bc": est.run_a.se_bc,
            },
            "run_d": {
                "value": est.run_d.value,
                "se": est.run_d.se,
                "anomalous": est.run_d.anomalous,
                "n": est.n_d,
            },
            "run_dperp": {
                "value": est.run_dperp.value,
                "se": est.run_dperp.se,
                "anomalous": est.run_dperp.anomalous,
                "n": est.n_dperp,
            },
        },
        "p_plus": est.p_plus,
        "se_p_plus": est.se_p,
        "b4": {
            "value": est.value,
            "se": est.se,
            "lower_bound": est.verdict.lower_bound,
            "upper_bound": est.verdict.upper_bound,
            "classification": est.verdict.classification,
        },
        "theory": theory,
    }


def write_report(report: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_frames(result: SimulationResult, out_dir) -> list:
    """Write the three frames as CSV + sidecar next to the report."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = result.config
    written = []
    for name, frame in result.frames.items():
        post = {"run_a": "preparation", "run_d": "analyzer_plus", "run_dperp": "analyzer_minus"}[name]
        csv_path = out_dir / f"{name}.csv"
        write_counts(
            frame,
            csv_path,
            header={
                "run": name,
                "post_selection": post,
                "angles": {
                    "alpha_pi": cfg.alpha_pi,
                    "gamma_pi": cfg.gamma_pi,
                    "delta_pi": cfg.delta_pi,
                },
                "g_x": cfg.g_over_sigma * SIGMA,
                "g_y": cfg.g_over_sigma * SIGMA,
                "sigma": SIGMA,
                "dark_rate": cfg.dark_rate,
            },
        )
        written.append(csv_path)
    return written
