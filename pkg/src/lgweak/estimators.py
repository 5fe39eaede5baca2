"""Estimation chain from detector counts back to inequality values.

grid_moments      pixel-center first and second moments with plug-in
                  standard errors
weak_averages     inversion of the pointer readout relations
                  <x> = g_x <B>, <y> = g_y <C>,
                  <xy> = g_x g_y (<BC> + <B><C>) / 2
postselected_weak_value
                  conditional value from one analyzer-port frame
compose_b4        four-measurement quantity from the three frames
bootstrap_se      multinomial resampling cross-check of any plug-in se

Error propagation is first order (delta method); the bootstrap is the
independent cross-check, not the default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .inequalities import LGVerdict, _verdict
from .pointer import CountsGrid

MIN_COUNTS = 100
MIN_RESAMPLES = 50


class InsufficientCounts(ValueError):
    """Too few photons for a meaningful moment estimate."""


class ZeroCoupling(ValueError):
    """Readout inversion requires strictly positive couplings."""


@dataclass(frozen=True)
class MomentEstimate:
    mean_x: float
    mean_y: float
    mean_xy: float
    se_x: float
    se_y: float
    se_xy: float
    n_effective: int


def grid_moments(frame: CountsGrid) -> MomentEstimate:
    """Sample moments of the observed counts, pixels at their centers.

    mean_xy is the raw E[xy] to match the pointer readout relation, not the
    covariance.  Standard errors are plug-in: sd of the per-photon statistic
    over sqrt(N).
    """
    counts = frame.observed().astype(float)
    n = float(counts.sum())
    if n < MIN_COUNTS:
        raise InsufficientCounts(f"{int(n)} counts < minimum {MIN_COUNTS}")
    xc = frame.grid.x_centers()
    yc = frame.grid.y_centers()
    wx = counts.sum(axis=1)
    wy = counts.sum(axis=0)
    xyc = xc[:, None] * yc[None, :]

    mean_x = float(wx @ xc) / n
    mean_y = float(wy @ yc) / n
    mean_xy = float((counts * xyc).sum()) / n
    var_x = max(float(wx @ xc**2) / n - mean_x**2, 0.0)
    var_y = max(float(wy @ yc**2) / n - mean_y**2, 0.0)
    var_xy = max(float((counts * xyc**2).sum()) / n - mean_xy**2, 0.0)
    return MomentEstimate(
        mean_x=mean_x,
        mean_y=mean_y,
        mean_xy=mean_xy,
        se_x=float(np.sqrt(var_x / n)),
        se_y=float(np.sqrt(var_y / n)),
        se_xy=float(np.sqrt(var_xy / n)),
        n_effective=int(n),
    )


@dataclass(frozen=True)
class WeakAverageEstimate:
    i_b: float
    i_c: float
    i_bc: float
    se_b: float
    se_c: float
    se_bc: float


def weak_averages(m: MomentEstimate, g_x: float, g_y: float) -> WeakAverageEstimate:
    """Invert the weak-readout relations for the preparation-port frame.

    i_b = mean_x / g_x, i_c = mean_y / g_y,
    i_bc = 2 mean_xy / (g_x g_y) - i_b i_c.

    Errors are propagated to first order; the product term contributes
    (i_c se_b)^2 + (i_b se_c)^2 on top of the mean_xy term.
    """
    if g_x <= 0 or g_y <= 0:
        raise ZeroCoupling(f"couplings must be positive, got g_x={g_x}, g_y={g_y}")
    i_b = m.mean_x / g_x
    i_c = m.mean_y / g_y
    se_b = m.se_x / g_x
    se_c = m.se_y / g_y
    i_bc = 2.0 * m.mean_xy / (g_x * g_y) - i_b * i_c
    se_bc = float(
        np.sqrt((2.0 * m.se_xy / (g_x * g_y)) ** 2 + (i_c * se_b) ** 2 + (i_b * se_c) ** 2)
    )
    return WeakAverageEstimate(i_b=i_b, i_c=i_c, i_bc=i_bc, se_b=se_b, se_c=se_c, se_bc=se_bc)


@dataclass(frozen=True)
class PostselectedValue:
    """Conditional weak value with its error and anomaly verdict."""

    value: float
    se: float
    anomalous: bool


def postselected_weak_value(frame_d: CountsGrid, g_y: float) -> PostselectedValue:
    """Conditional value of the middle observable from one analyzer-port frame.

    value = mean_y / g_y; anomalous when it sits outside [-1, 1] by more
    than two standard errors.
    """
    if g_y <= 0:
        raise ZeroCoupling(f"coupling must be positive, got g_y={g_y}")
    m = grid_moments(frame_d)
    value = m.mean_y / g_y
    se = m.se_y / g_y
    return PostselectedValue(value=value, se=se, anomalous=bool(abs(value) > 1.0 + 2.0 * se))


@dataclass(frozen=True)
class B4Estimate:
    """Estimated four-measurement quantity with its provenance."""

    value: float
    se: float
    verdict: LGVerdict
    run_a: WeakAverageEstimate
    run_d: PostselectedValue
    run_dperp: PostselectedValue
    p_plus: float
    se_p: float
    n_d: int
    n_dperp: int

    def recompute(self) -> float:
        """Re-derive the value from the stored components."""
        p = self.p_plus
        corr_cd = p * self.run_d.value - (1.0 - p) * self.run_dperp.value
        exp_d = 2.0 * p - 1.0
        return self.run_a.i_b + self.run_a.i_bc + corr_cd - exp_d


def compose_b4(
    run_a: WeakAverageEstimate,
    run_d: PostselectedValue,
    run_dperp: PostselectedValue,
    p_plus: float,
    n_d: int,
    n_dperp: int,
) -> B4Estimate:
    """Assemble B4 from the three post-selection runs.

    value = i_b + i_bc + [p v+ - (1-p) v-] - (2p - 1).

    The runs are treated as independent experiments; p_plus is the
    plus-port fraction n_d / (n_d + n_dperp) with binomial standard error.
    """
    if not 0.0 <= p_plus <= 1.0:
        raise ValueError(f"p_plus must be a probability, got {p_plus}")
    if n_d < 0 or n_dperp < 0 or n_d + n_dperp == 0:
        raise ValueError("port counts must be non-negative and not both zero")
    n_ports = n_d + n_dperp
    se_p = float(np.sqrt(max(p_plus * (1.0 - p_plus), 0.0) / n_ports))
    p = p_plus
    corr_cd = p * run_d.value - (1.0 - p) * run_dperp.value
    value = run_a.i_b + run_a.i_bc + corr_cd - (2.0 * p - 1.0)
    dvalue_dp = run_d.value + run_dperp.value - 2.0
    se = float(
        np.sqrt(
            run_a.se_b**2
            + run_a.se_bc**2
            + (p * run_d.se) ** 2
            + ((1.0 - p) * run_dperp.se) ** 2
            + (dvalue_dp * se_p) ** 2
        )
    )
    return B4Estimate(
        value=value,
        se=se,
        verdict=_verdict(value, -2.0, 2.0),
        run_a=run_a,
        run_d=run_d,
        run_dperp=run_dperp,
        p_plus=p_plus,
        se_p=se_p,
        n_d=int(n_d),
        n_dperp=int(n_dperp),
    )


def bootstrap_se(
    frame: CountsGrid,
    statistic,
    resamples: int = 200,
    seed: int = 0,
) -> float:
    """Multinomial-resampling standard error of ``statistic(frame)``.

    ``statistic`` is any callable CountsGrid -> float (e.g.
    ``lambda f: grid_moments(f).mean_x``).  Resampled frames redraw the
    observed counts, darks folded in, so the bootstrap sees exactly what the
    plug-in estimator sees.
    """
    if resamples < MIN_RESAMPLES:
        raise ValueError(f"resamples must be >= {MIN_RESAMPLES}, got {resamples}")
    observed = frame.observed()
    n = int(observed.sum())
    if n < MIN_COUNTS:
        raise InsufficientCounts(f"{n} counts < minimum {MIN_COUNTS}")
    rng = np.random.default_rng(seed)
    p = observed.ravel() / n
    values = np.empty(resamples)
    for k in range(resamples):
        counts = rng.multinomial(n, p).reshape(observed.shape)
        resampled = CountsGrid(counts=counts, total=n, grid=frame.grid, seed=frame.seed)
        values[k] = statistic(resampled)
    return float(values.std(ddof=1))
