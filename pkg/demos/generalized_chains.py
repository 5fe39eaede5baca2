"""Longer measurement chains: bounds, enumeration and quantum values.

For the n-measurement chain quantity (nearest-neighbour correlators minus
the endpoint correlator) this script compares the closed-form macrorealist
bounds with brute-force enumeration over deterministic outcome assignments,
then evaluates the quantum value of equally spaced measurement axes and
shows how the violation persists and grows with n.

Run:  python demos/generalized_chains.py
"""

import time

import numpy as np

from lgweak import (
    CorrelatorChain,
    bn_bounds,
    bn_value,
    macrorealist_bounds_bruteforce,
)

PI = np.pi


def quantum_chain(n: int, step: float) -> CorrelatorChain:
    """Chain of projective measurements at equally spaced axes."""
    return CorrelatorChain(
        n=n,
        nearest=tuple(np.cos(2.0 * step) for _ in range(n - 1)),
        endpoint=float(np.cos(2.0 * (n - 1) * step)),
    )


def main() -> None:
    print("macrorealist bounds: closed form vs exhaustive enumeration")
    print("   n   closed form      enumerated      time")
    total = 0.0
    for n in range(3, 17):
        t0 = time.perf_counter()
        brute = macrorealist_bounds_bruteforce(n)
        dt = time.perf_counter() - t0
        total += dt
        closed = bn_bounds(n)
        tag = "ok" if brute == closed else "MISMATCH"
        print(f"  {n:2d}   [{closed[0]:+3.0f}, {closed[1]:+3.0f}]   "
              f"[{brute[0]:+3.0f}, {brute[1]:+3.0f}]   {1e3 * dt:6.2f} ms   {tag}")
    print(f"  total enumeration time {total:.3f} s")
    print("  note the parity structure: the lower bound is -n for odd n")
    print("  but only -(n-2) for even n")

    print("\nquantum chains at optimal spacing pi/(2n): value n cos(pi/n)")
    print("   n    bound    quantum    margin")
    for n in range(3, 11):
        chain = quantum_chain(n, PI / (2.0 * n))
        verdict = bn_value(chain)
        print(f"  {n:2d}   {verdict.upper_bound:+5.0f}   {verdict.value:+8.4f}   "
              f"{verdict.value - verdict.upper_bound:+.4f}  ({verdict.classification})")
    print("  the absolute margin shrinks, but a violation survives at every n")

    print("\nspacing matters: the five-measurement chain across spacings")
    for step_pi in (0.05, 0.1, 0.15, 0.2, 0.25):
        verdict = bn_value(quantum_chain(5, step_pi * PI))
        print(f"  spacing {step_pi:.2f}pi: B5 = {verdict.value:+8.4f}  "
              f"({verdict.classification})")


if __name__ == "__main__":
    main()
