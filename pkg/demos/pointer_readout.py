"""How the Gaussian pointer trades disturbance for information.

Three short numerical studies on the reference configuration:

1. moment readout vs coupling strength: the inverted estimates converge to
   the ideal weak values with bias scaling as (g/sigma)^2;
2. the post-selection probability pulled away from |<post|pre>|^2 by the
   measurement back-action;
3. what the detector actually sees: marginal intensity profiles of the
   plus-port frame, where the anomalous mean sits far outside the +-g
   window spanned by the eigenvalue shifts.

Run:  python demos/pointer_readout.py
"""

import numpy as np

from lgweak import (
    MomentEstimate,
    PointerConfig,
    correlators_b4,
    detector_for,
    exact_moments,
    observable_from_angle,
    pixel_probabilities,
    postselected_amplitude,
    state_from_angle,
    transition_prob,
    weak_averages,
)

PI = np.pi

ALPHA, GAMMA, DELTA = 0.233 * PI, 0.1 * PI, 0.867 * PI


def exact_estimates(post, g: float):
    """Noise-free estimator output at coupling g (bias only, no statistics)."""
    pre = state_from_angle(ALPHA)
    amp = postselected_amplitude(
        pre, observable_from_angle(GAMMA), observable_from_angle(0.0),
        post, PointerConfig(sigma=1.0, g_x=g, g_y=g),
    )
    m = exact_moments(amp)
    est = weak_averages(
        MomentEstimate(m.mean_x, m.mean_y, m.mean_xy, 0.0, 0.0, 0.0, 10**9), g, g
    )
    return est, m


def main() -> None:
    corr = correlators_b4(ALPHA, GAMMA, DELTA)
    pre = state_from_angle(ALPHA)
    post_a = pre
    post_d = state_from_angle(DELTA)

    print("1. estimator bias vs coupling (post-selection on the preparation)")
    print(f"   targets: <B> = {corr.exp_b:+.6f}, <C> = {corr.exp_c:+.6f}, "
          f"<BC> = {corr.corr_bc:+.6f}")
    print("   g/sigma    bias(i_b)    bias(i_c)    bias(i_bc)")
    for g in (0.4, 0.2, 0.1, 0.05, 0.025):
        est, _ = exact_estimates(post_a, g)
        print(f"   {g:7.3f}   {est.i_b - corr.exp_b:+.2e}   "
              f"{est.i_c - corr.exp_c:+.2e}   {est.i_bc - corr.corr_bc:+.2e}")
    print("   each halving of g cuts the bias by ~4: quadratic convergence")

    print("\n2. post-selection probability vs back-action")
    p0 = transition_prob(pre, post_d)
    print(f"   ideal |<post|pre>|^2 = {p0:.6f}")
    for g in (0.05, 0.1, 0.2, 0.4):
        _, m = exact_estimates(post_d, g)
        print(f"   g/sigma = {g:5.3f}:  P(port) = {m.prob:.6f}   "
              f"(shift {m.prob - p0:+.2e})")

    print("\n3. plus-port pointer profile at g/sigma = 0.1")
    g = 0.1
    amp = postselected_amplitude(
        pre, observable_from_angle(GAMMA), observable_from_angle(0.0),
        post_d, PointerConfig(sigma=1.0, g_x=g, g_y=g),
    )
    grid = detector_for(1.0, pixels=32)
    pix = pixel_probabilities(amp, grid)
    m = exact_moments(amp)
    print(f"   conditional value {corr.wv_c_plus:+.4f} -> mean y "
          f"displacement {m.mean_y:+.4f} = {m.mean_y / g:+.4f} g")
    print("   y marginal (each bar ~ probability):")
    marginal = pix.sum(axis=0)
    peak = marginal.max()
    for y, p in zip(grid.y_centers(), marginal):
        if p < 0.005:
            continue
        bar = "#" * max(1, int(round(40 * p / peak)))
        marker = "  <- eigenvalue shifts +-g" if abs(abs(y) - g) < grid.pitch / 2 else ""
        print(f"   y = {y:+6.3f}  {bar}{marker}")
    print("   the whole profile is one slightly displaced Gaussian: the")
    print("   anomalous value lives in a shift, not a resolvable peak")


if __name__ == "__main__":
    main()
