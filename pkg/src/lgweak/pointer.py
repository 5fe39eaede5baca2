"""Gaussian pointer forward model for two sequential weak couplings.

A photon carries two transverse pointer coordinates (x, y), each prepared in
a Gaussian amplitude f(u) = (2 pi sigma^2)^(-1/4) exp(-u^2 / 4 sigma^2), so
the measured intensity has standard deviation sigma.  Two impulsive
couplings shift x by g_x * b on the b eigenbranch of the early observable
and y by g_y * c on the c branch of the H/V observable.  Projecting the
polarization onto a post-selected state leaves the pointer in a four-branch
superposition

    psi(x, y) = sum_bc A_bc f(x - b g_x) f(y - c g_y)

whose moments are exact Gaussian-overlap sums: two displaced unit-norm
amplitudes overlap to exp(-(shift difference)^2 / 8 sigma^2) and their
density concentrates at the midpoint of the two shifts.  Everything below is
closed form; Monte Carlo only enters through `sample_frame`.

Seed policy: every stochastic routine takes an integer seed and builds its
own `numpy.random.default_rng`.  Parallel tasks must derive per-task seeds
with `derive_seed(base, index)`, which feeds both numbers to
`numpy.random.SeedSequence`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.special import ndtr

from .qubit import (
    SINGULAR_CUTOFF,
    DichotomicObservable,
    PostSelectionSingular,
    QubitState,
)

EIGENVALUES = (+1.0, -1.0)

# Out-of-grid probability mass above this aborts pixel integration.
MAX_OUT_OF_GRID = 1e-4

# The grid must span at least this many sigma on each side of the origin.
SPAN_GUARD_SIGMAS = 5.0


class GridTooSmall(ValueError):
    """Detector grid does not cover enough of the pointer distribution."""


def derive_seed(base_seed: int, task_index: int) -> int:
    """Independent child seed for task ``task_index`` of a base seed.

    Mixing function: both integers are fed as entropy to
    numpy.random.SeedSequence and the first generated word is returned.
    """
    return int(np.random.SeedSequence([int(base_seed), int(task_index)]).generate_state(1)[0])


@dataclass(frozen=True)
class PointerConfig:
    """Coupling geometry: pointer width sigma and the two shift strengths."""

    sigma: float
    g_x: float
    g_y: float
    order: str = "b_first"  # which coupling acts first: "b_first" | "c_first"

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.g_x < 0 or self.g_y < 0:
            raise ValueError("couplings must be non-negative")
        if self.order not in ("b_first", "c_first"):
            raise ValueError(f"order must be 'b_first' or 'c_first', got {self.order!r}")

    @property
    def weakness_x(self) -> float:
        return self.g_x / self.sigma

    @property
    def weakness_y(self) -> float:
        return self.g_y / self.sigma


@dataclass(frozen=True, eq=False)
class MixtureAmplitude:
    """Post-selected four-branch pointer amplitude.

    ``coeffs[i, j]`` multiplies the branch shifted by (b_i g_x, c_j g_y)
    with eigenvalue order (+1, -1) on both axes.
    """

    coeffs: np.ndarray  # (2, 2) complex
    g_x: float
    g_y: float
    sigma: float

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=complex)
        if arr.shape != (2, 2):
            raise ValueError(f"coeffs must be 2x2, got shape {arr.shape}")
        object.__setattr__(self, "coeffs", arr)

    @property
    def shift_x(self) -> np.ndarray:
        return self.g_x * np.array(EIGENVALUES)

    @property
    def shift_y(self) -> np.ndarray:
        return self.g_y * np.array(EIGENVALUES)

    def overlap_x(self) -> np.ndarray:
        return _overlap(self.shift_x, self.sigma)

    def overlap_y(self) -> np.ndarray:
        return _overlap(self.shift_y, self.sigma)

    def postselection_probability(self) -> float:
        """Total norm of the post-selected amplitude.

        Equals |<post|pre>|^2 in the g -> 0 limit and picks up the Gaussian
        overlap attenuation at finite coupling.
        """
        m = np.einsum(
            "bc,BC,bB,cC->",
            self.coeffs,
            self.coeffs.conj(),
            self.overlap_x(),
            self.overlap_y(),
        )
        return float(m.real)


def _overlap(shifts: np.ndarray, sigma: float) -> np.ndarray:
    """Overlap matrix of unit-norm Gaussian amplitudes displaced by `shifts`."""
    d = shifts[:, None] - shifts[None, :]
    return np.exp(-(d**2) / (8.0 * sigma**2))


def postselected_amplitude(
    pre: QubitState,
    obs_b: DichotomicObservable,
    obs_c: DichotomicObservable,
    post: QubitState,
    cfg: PointerConfig,
    cutoff: float = SINGULAR_CUTOFF,
) -> MixtureAmplitude:
    """Branch coefficients A_bc = <post| (second projector)(first projector) |pre>.

    The projector of the first-coupled observable stands rightmost; with the
    default order the early observable couples first.
    """
    coeffs = np.empty((2, 2), dtype=complex)
    for i, b in enumerate((+1, -1)):
        for j, c in enumerate((+1, -1)):
            pb = obs_b.projector(b)
            pc = obs_c.projector(c)
            op = pc @ pb if cfg.order == "b_first" else pb @ pc
            coeffs[i, j] = np.vdot(post.vector, op @ pre.vector)
    amp = MixtureAmplitude(coeffs, cfg.g_x, cfg.g_y, cfg.sigma)
    prob = amp.postselection_probability()
    if prob <= cutoff:
        raise PostSelectionSingular(
            f"post-selection probability {prob:.3e} below cutoff {cutoff:.1e}"
        )
    return amp


class PointerMoments(NamedTuple):
    mean_x: float
    mean_y: float
    mean_xy: float
    prob: float


def exact_moments(amp: MixtureAmplitude) -> PointerMoments:
    """Closed-form pointer moments of the normalized post-selected density.

    Each interference term (bc, b'c') contributes its overlap factor times
    the midpoint of the two shifts:

        <x>  = sum A A'* L_x L_y * (b + b') g_x / 2   / prob
        <xy> = sum A A'* L_x L_y * (b + b') g_x / 2 * (c + c') g_y / 2 / prob

    mean_xy is the raw E[xy], not the covariance, to match the pointer
    readout relation <xy> ~ g_x g_y (corr + <B><C>) / 2.
    """
    a = amp.coeffs
    lx = amp.overlap_x()
    ly = amp.overlap_y()
    mid_x = 0.5 * (amp.shift_x[:, None] + amp.shift_x[None, :])
    mid_y = 0.5 * (amp.shift_y[:, None] + amp.shift_y[None, :])
    m = np.einsum("bc,BC,bB,cC->bcBC", a, a.conj(), lx, ly)
    prob = float(m.sum().real)
    mean_x = float(np.einsum("bcBC,bB->", m, mid_x).real) / prob
    mean_y = float(np.einsum("bcBC,cC->", m, mid_y).real) / prob
    mean_xy = float(np.einsum("bcBC,bB,cC->", m, mid_x, mid_y).real) / prob
    return PointerMoments(mean_x, mean_y, mean_xy, prob)


# ---------------------------------------------------------------------------
# detector


@dataclass(frozen=True)
class DetectorGrid:
    """Square-pixel photon-counting array centered on ``origin``."""

    n_x: int
    n_y: int
    pitch: float
    origin: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError("grid needs at least one pixel per axis")
        if self.pitch <= 0:
            raise ValueError(f"pitch must be positive, got {self.pitch}")

    def x_edges(self) -> np.ndarray:
        return self.origin[0] + (np.arange(self.n_x + 1) - self.n_x / 2.0) * self.pitch

    def y_edges(self) -> np.ndarray:
        return self.origin[1] + (np.arange(self.n_y + 1) - self.n_y / 2.0) * self.pitch

    def x_centers(self) -> np.ndarray:
        return self.origin[0] + (np.arange(self.n_x) - (self.n_x - 1) / 2.0) * self.pitch

    def y_centers(self) -> np.ndarray:
        return self.origin[1] + (np.arange(self.n_y) - (self.n_y - 1) / 2.0) * self.pitch


def detector_for(sigma: float, pixels: int = 32, span_sigmas: float = 12.0) -> DetectorGrid:
    """Grid of ``pixels``^2 square pixels spanning +-span_sigmas/2 * sigma."""
    return DetectorGrid(pixels, pixels, span_sigmas * sigma / pixels)


def pixel_probabilities(
    amp: MixtureAmplitude,
    grid: DetectorGrid,
    guard_sigmas: float = SPAN_GUARD_SIGMAS,
    max_out_of_grid: float = MAX_OUT_OF_GRID,
) -> np.ndarray:
    """Per-pixel detection probabilities of the normalized pointer density.

    Each interference term is a displaced Gaussian, so pixel masses are
    differences of normal CDFs; no quadrature.  Returns an (n_x, n_y) matrix
    (axis 0 = x, axis 1 = y) summing to 1 minus the out-of-grid mass.

    Raises GridTooSmall when the grid span is below the guard or more than
    ``max_out_of_grid`` probability falls outside the grid.
    """
    sigma = amp.sigma
    ex, ey = grid.x_edges(), grid.y_edges()
    if ex[0] > -guard_sigmas * sigma or ex[-1] < guard_sigmas * sigma:
        raise GridTooSmall(
            f"x span [{ex[0]:.3g}, {ex[-1]:.3g}] below +-{guard_sigmas} sigma guard"
        )
    if ey[0] > -guard_sigmas * sigma or ey[-1] < guard_sigmas * sigma:
        raise GridTooSmall(
            f"y span [{ey[0]:.3g}, {ey[-1]:.3g}] below +-{guard_sigmas} sigma guard"
        )

    a = amp.coeffs
    mid_x = 0.5 * (amp.shift_x[:, None] + amp.shift_x[None, :])
    mid_y = 0.5 * (amp.shift_y[:, None] + amp.shift_y[None, :])
    # (2, 2, n) pixel masses of the per-term Gaussians
    cdf_x = ndtr((ex[None, None, :] - mid_x[..., None]) / sigma)
    cdf_y = ndtr((ey[None, None, :] - mid_y[..., None]) / sigma)
    px = np.diff(cdf_x, axis=-1)
    py = np.diff(cdf_y, axis=-1)
    w = np.einsum("bc,BC,bB,cC->bcBC", a, a.conj(), amp.overlap_x(), amp.overlap_y())
    prob = float(w.sum().real)
    pix = np.einsum("bcBC,bBi,cCj->ij", w, px, py).real / prob

    out_of_grid = 1.0 - pix.sum()
    if out_of_grid > max_out_of_grid:
        raise GridTooSmall(f"out-of-grid probability {out_of_grid:.3e} > {max_out_of_grid:.1e}")
    if pix.min() < -1e-12:
        raise FloatingPointError(f"pixel probability {pix.min():.3e} below 0")
    return np.clip(pix, 0.0, None)


# ---------------------------------------------------------------------------
# photon counting


@dataclass(frozen=True, eq=False)
class CountsGrid:
    """One detector frame: integer counts plus the geometry that binned them.

    ``counts`` holds the N heralded photon counts (sums to ``total``
    exactly); Poisson dark counts, when enabled, are kept in the separate
    ``dark`` matrix because a real readout cannot subtract them per pixel.
    """

    counts: np.ndarray
    total: int
    grid: DetectorGrid
    seed: int
    dark: np.ndarray | None = None

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.shape != (self.grid.n_x, self.grid.n_y):
            raise ValueError(
                f"counts shape {counts.shape} does not match grid "
                f"({self.grid.n_x}, {self.grid.n_y})"
            )
        if counts.min() < 0:
            raise ValueError("negative counts")
        if int(counts.sum()) != int(self.total):
            raise ValueError(f"counts sum {counts.sum()} != total {self.total}")
        object.__setattr__(self, "counts", counts.astype(np.int64))
        if self.dark is not None:
            dark = np.asarray(self.dark)
            if dark.shape != counts.shape or dark.min() < 0:
                raise ValueError("dark matrix must match counts shape and be non-negative")
            object.__setattr__(self, "dark", dark.astype(np.int64))

    def observed(self) -> np.ndarray:
        """What the detector reports: signal plus dark counts."""
        if self.dark is None:
            return self.counts
        return self.counts + self.dark


def sample_frame(
    pixels: np.ndarray,
    n_photons: int,
    dark_rate: float = 0.0,
    seed: int = 0,
    grid: DetectorGrid | None = None,
) -> CountsGrid:
    """Multinomial frame of ``n_photons`` over the pixel probabilities.

    The probabilities are renormalized by the in-grid mass, i.e. photons are
    conditioned on landing inside the grid (the guard keeps that mass within
    1e-4 of 1).  ``dark_rate`` is the Poisson mean dark count per pixel per
    frame.  ``grid`` carries the geometry into the CountsGrid; when omitted
    a unit-pitch grid of matching shape is attached.
    """
    pixels = np.asarray(pixels, dtype=float)
    if n_photons < 1:
        raise ValueError(f"need at least one photon, got {n_photons}")
    if dark_rate < 0:
        raise ValueError(f"dark_rate must be non-negative, got {dark_rate}")
    if grid is None:
        grid = DetectorGrid(pixels.shape[0], pixels.shape[1], 1.0)
    rng = np.random.default_rng(seed)
    p = pixels.ravel() / pixels.sum()
    counts = rng.multinomial(int(n_photons), p).reshape(pixels.shape)
    dark = rng.poisson(dark_rate, size=pixels.shape) if dark_rate > 0 else None
    return CountsGrid(counts=counts, total=int(n_photons), grid=grid, seed=int(seed), dark=dark)


# ---------------------------------------------------------------------------
# interchange format: counts CSV + JSON sidecar


def _sidecar_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".json")


def write_counts(frame: CountsGrid, csv_path, header: dict | None = None) -> Path:
    """Write a frame as an integer CSV plus a JSON sidecar of run metadata.

    The CSV holds n_x rows of n_y comma-separated integers (axis 0 = x).
    The sidecar records seed, photon number, geometry and any extra header
    entries (angles, couplings, ...) passed by the caller.  Returns the
    sidecar path.
    """
    csv_path = Path(csv_path)
    np.savetxt(csv_path, frame.counts, fmt="%d", delimiter=",")
    meta = {
        "seed": frame.seed,
        "n_photons": frame.total,
        "geometry": {
            "n_x": frame.grid.n_x,
            "n_y": frame.grid.n_y,
            "pitch": frame.grid.pitch,
            "origin": list(frame.grid.origin),
            "axes": "row index = x pixel, column index = y pixel",
        },
    }
    if frame.dark is not None:
        dark_path = csv_path.with_name(csv_path.stem + ".dark.csv")
        np.savetxt(dark_path, frame.dark, fmt="%d", delimiter=",")
        meta["dark_csv"] = dark_path.name
    meta.update(header or {})
    sidecar = _sidecar_path(csv_path)
    with open(sidecar, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return sidecar


def read_counts(csv_path) -> tuple:
    """Load a frame written by `write_counts`; returns (CountsGrid, metadata)."""
    csv_path = Path(csv_path)
    counts = np.loadtxt(csv_path, dtype=np.int64, delimiter=",", ndmin=2)
    with open(_sidecar_path(csv_path)) as fh:
        meta = json.load(fh)
    geom = meta["geometry"]
    grid = DetectorGrid(
        int(geom["n_x"]), int(geom["n_y"]), float(geom["pitch"]), tuple(geom["origin"])
    )
    dark = None
    if "dark_csv" in meta:
        dark = np.loadtxt(csv_path.with_name(meta["dark_csv"]), dtype=np.int64,
                          delimiter=",", ndmin=2)
    frame = CountsGrid(
        counts=counts,
        total=int(counts.sum()),
        grid=grid,
        seed=int(meta.get("seed", 0)),
        dark=dark,
    )
    return frame, meta
