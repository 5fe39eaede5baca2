"""Map of four-measurement violations over (preparation, analyzer) angles.

Prints a coarse character map of the B4 landscape at a chosen early-observable
axis: '+' where B4 > 2, '-' where B4 < -2, '.' elsewhere.  With matplotlib
installed, also writes a filled-contour PNG next to this script.

Run:  python demos/violation_map.py [gamma_over_pi]
"""

import sys
from pathlib import Path

import numpy as np

from lgweak import SweepSpec, sweep_b4, sweep_summary

GLYPH = {"pos": "+", "neg": "-", "none": "."}


def ascii_map(result: dict, step: int = 2) -> str:
    cells = result["classes"][::step, ::step]
    return "\n".join("".join(GLYPH[c] for c in row) for row in cells)


def main() -> None:
    gamma_pi = float(sys.argv[1]) if len(sys.argv) > 1 else 0.1
    spec = SweepSpec(gamma_pi=gamma_pi, alpha_range=(0.0, 1.0, 61), delta_range=(0.0, 1.0, 61))
    result = sweep_b4(spec)

    print(f"B4 classification at early axis {gamma_pi}pi "
          "(rows: alpha 0 -> 1 pi, cols: delta 0 -> 1 pi)")
    print(ascii_map(result))

    summary = sweep_summary(result)
    for label in ("max", "min"):
        s = summary[label]
        print(f"{label}: B4 = {s['b4']:+.4f} at alpha = {s['alpha_pi']:.3f}pi, "
              f"delta = {s['delta_pi']:.3f}pi")
    frac = {
        "pos": float((result["classes"] == "pos").mean()),
        "neg": float((result["classes"] == "neg").mean()),
    }
    print(f"violating area fraction: {frac['pos']:.1%} positive, {frac['neg']:.1%} negative")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping the PNG")
        return

    fig, ax = plt.subplots(figsize=(6, 5))
    mesh = ax.pcolormesh(
        result["deltas_pi"], result["alphas_pi"], result["b4"],
        cmap="RdBu_r", vmin=-3, vmax=3, shading="auto",
    )
    ax.contour(result["deltas_pi"], result["alphas_pi"], result["b4"],
               levels=[-2.0, 2.0], colors="k", linewidths=1.0)
    ax.set_xlabel("analyzer angle / pi")
    ax.set_ylabel("preparation angle / pi")
    ax.set_title(f"B4 at early axis {gamma_pi}pi (contours at +-2)")
    fig.colorbar(mesh, ax=ax, label="B4")
    out = Path(__file__).with_name(f"violation_map_gamma{gamma_pi}.png")
    fig.savefig(out, dpi=150, bbox_inches="tight")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
