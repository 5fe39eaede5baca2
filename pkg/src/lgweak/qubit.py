"""Exact linear algebra for polarization qubits.

States and observables live in the {H, V} basis with Z = diag(1, -1), so the
horizontal/vertical analyzer observable is literally diag(1, -1).  Angle-based
constructors describe linear polarization and produce real amplitudes; the
rest of the module accepts complex ones.

Conditional (post-selected) quantities:

    weak_value             <post|O|pre> / <post|pre>
    sequential_weak_value  <post|LATE EARLY|pre> / <post|pre>

Both diverge as pre and post become orthogonal, so every conditional routine
checks the transition probability against a cutoff and raises
PostSelectionSingular instead of returning huge numbers; downstream
compositions divide by these probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Transition probabilities at or below this are treated as an orthogonal
# pre/post pair.
SINGULAR_CUTOFF = 1e-10


class PostSelectionSingular(ValueError):
    """Pre- and post-selection are numerically orthogonal."""


@dataclass(frozen=True)
class QubitState:
    """Pure polarization state amp_h |H> + amp_v |V>, unit norm."""

    amp_h: complex
    amp_v: complex

    def __post_init__(self):
        norm = abs(self.amp_h) ** 2 + abs(self.amp_v) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state must be normalized, got |amp|^2 = {norm}")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.amp_h, self.amp_v], dtype=complex)

    def orthogonal(self) -> "QubitState":
        """The state orthogonal to this one.

        For a real state (cos t, sin t) this is (sin t, -cos t), the
        convention used for the rejected port of a polarizing splitter.
        """
        return QubitState(complex(np.conj(self.amp_v)), -complex(np.conj(self.amp_h)))


@dataclass(frozen=True)
class DichotomicObservable:
    """Two-outcome (+1 / -1) observable for a linear-polarization axis.

    The +1 eigenvector is the linear polarization state at ``axis_angle``;
    the matrix is cos(2t) Z + sin(2t) X.
    """

    axis_angle: float

    @property
    def matrix(self) -> np.ndarray:
        c = np.cos(2.0 * self.axis_angle)
        s = np.sin(2.0 * self.axis_angle)
        return np.array([[c, s], [s, -c]], dtype=complex)

    def projector(self, outcome: int) -> np.ndarray:
        """Eigenprojector (1 + outcome * O) / 2 for outcome +1 or -1."""
        if outcome not in (+1, -1):
            raise ValueError("outcome must be +1 or -1")
        return 0.5 * (np.eye(2, dtype=complex) + outcome * self.matrix)


def state_from_angle(theta: float) -> QubitState:
    """Linear polarization state (cos theta, sin theta)."""
    return QubitState(float(np.cos(theta)), float(np.sin(theta)))


def observable_from_angle(theta: float) -> DichotomicObservable:
    """Dichotomic observable whose +1 axis is the polarization angle theta."""
    return DichotomicObservable(float(theta))


def expectation(obs: DichotomicObservable, psi: QubitState) -> float:
    """<psi|O|psi>; real for Hermitian O, equals cos 2(psi_angle - axis_angle)."""
    v = psi.vector
    return float(np.vdot(v, obs.matrix @ v).real)


def transition_prob(pre: QubitState, post: QubitState) -> float:
    """|<post|pre>|^2."""
    return float(abs(np.vdot(post.vector, pre.vector)) ** 2)


def weak_value(
    obs: DichotomicObservable,
    pre: QubitState,
    post: QubitState,
    cutoff: float = SINGULAR_CUTOFF,
) -> complex:
    """Conditional value <post|O|pre> / <post|pre>.

    The real part is what an ideal weak pointer reads out; it can lie far
    outside the eigenvalue range [-1, 1] (an anomalous value) even though
    every projective outcome is +-1.

    Raises PostSelectionSingular when |<post|pre>|^2 <= cutoff.
    """
    overlap = np.vdot(post.vector, pre.vector)
    if abs(overlap) ** 2 <= cutoff:
        raise PostSelectionSingular(
            f"transition probability {abs(overlap)**2:.3e} below cutoff {cutoff:.1e}"
        )
    return complex(np.vdot(post.vector, obs.matrix @ pre.vector) / overlap)


def sequential_weak_value(
    late: DichotomicObservable,
    early: DichotomicObservable,
    pre: QubitState,
    post: QubitState,
    cutoff: float = SINGULAR_CUTOFF,
) -> complex:
    """Conditional value of an ordered product, <post|LATE EARLY|pre> / <post|pre>.

    The earlier-measured operator acts first, i.e. stands rightmost.  With
    post = pre the real part is the two-time correlator of the pair of weak
    measurements; for real states it is symmetric under order exchange.
    """
    overlap = np.vdot(post.vector, pre.vector)
    if abs(overlap) ** 2 <= cutoff:
        raise PostSelectionSingular(
            f"transition probability {abs(overlap)**2:.3e} below cutoff {cutoff:.1e}"
        )
    num = np.vdot(post.vector, late.matrix @ early.matrix @ pre.vector)
    return complex(num / overlap)
