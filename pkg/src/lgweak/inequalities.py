"""Leggett-Garg inequalities for dichotomic measurement chains.

Three-measurement form      -3 <= B3 = <B> + <BC> - <C>            <= 1
Four-measurement form       |B4| = |<B> + <BC> + <CD> - <D>|       <= 2
n-measurement generalization    B_n = sum of nearest-neighbour
                                correlators minus the endpoint correlator,
                                bounded by [-n or -(n-2), n-2]

plus the post-selected rewrites of B3 and B4 in terms of conditional
(weak) values, the brute-force macrorealist bound enumeration, and the
threshold that links anomalous conditional values to violations.

The quantum inputs come from :mod:`lgweak.qubit`: a preparation at angle
alpha, an early observable at angle gamma, the H/V observable in the middle,
and a final projective analyzer at angle delta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qubit import (
    SINGULAR_CUTOFF,
    PostSelectionSingular,
    expectation,
    observable_from_angle,
    sequential_weak_value,
    state_from_angle,
    transition_prob,
    weak_value,
)

# A value must clear the macrorealist bound by more than this to count as a
# violation, so boundary configurations classify as "no-violation".
VIOLATION_TOL = 1e-9

IDENTITY_TOL = 1e-10


class ChainTooShort(ValueError):
    """A Leggett-Garg chain needs at least three measurements."""


class EnumerationTooLarge(ValueError):
    """Brute-force enumeration refused beyond 2^20 assignments."""


class LengthMismatch(ValueError):
    """Post-selected term lists do not match the chain length."""


@dataclass(frozen=True)
class LGVerdict:
    value: float
    lower_bound: float
    upper_bound: float
    classification: str  # "negative-violation" | "no-violation" | "positive-violation"


def _classify(value: float, lower: float, upper: float) -> str:
    if value > upper + VIOLATION_TOL:
        return "positive-violation"
    if value < lower - VIOLATION_TOL:
        return "negative-violation"
    return "no-violation"


def _verdict(value: float, lower: float, upper: float) -> LGVerdict:
    return LGVerdict(float(value), float(lower), float(upper), _classify(value, lower, upper))


# ---------------------------------------------------------------------------
# three measurements


def b3_value(exp_b: float, exp_c: float, corr_bc: float) -> LGVerdict:
    """Three-measurement quantity <B> + <BC> - <C> against bounds (-3, 1)."""
    return _verdict(exp_b + corr_bc - exp_c, -3.0, 1.0)


def b3_postselected_form(exp_b_ps_plus: float, p_c_plus: float) -> float:
    """Post-selected rewrite 1 + 2 p (v - 1).

    ``exp_b_ps_plus`` is the early-measurement value conditioned on the later
    outcome +1, ``p_c_plus`` that outcome's probability.  Exceeds 1 exactly
    when the conditional value does, so here any anomalous value is a
    violation.
    """
    if not 0.0 <= p_c_plus <= 1.0:
        raise ValueError(f"p_c_plus must be a probability, got {p_c_plus}")
    return 1.0 + 2.0 * p_c_plus * (exp_b_ps_plus - 1.0)


# ---------------------------------------------------------------------------
# four measurements


@dataclass(frozen=True)
class CorrelatorSet:
    """Everything the four-measurement test needs at one configuration.

    exp_b, exp_c, exp_d    first moments of the three measured observables
    corr_bc                two-time correlator of the weakly measured pair
    p_d_plus, p_d_minus    final analyzer outcome probabilities
    wv_c_plus, wv_c_minus  middle-measurement values conditioned on the
                           analyzer outcome (real parts of weak values)
    """

    exp_b: float
    exp_c: float
    corr_bc: float
    exp_d: float
    p_d_plus: float
    p_d_minus: float
    wv_c_plus: float
    wv_c_minus: float

    def validate(self, tol: float = IDENTITY_TOL) -> None:
        """Check the probability identities the composition relies on."""
        if not -tol <= self.p_d_plus <= 1.0 + tol or not -tol <= self.p_d_minus <= 1.0 + tol:
            raise ValueError("outcome probabilities must lie in [0, 1]")
        if abs(self.p_d_plus + self.p_d_minus - 1.0) > tol:
            raise ValueError("analyzer outcome probabilities must sum to 1")
        if abs(self.exp_d - (self.p_d_plus - self.p_d_minus)) > tol:
            raise ValueError("exp_d must equal p_d_plus - p_d_minus")
        aggregated = self.p_d_plus * self.wv_c_plus + self.p_d_minus * self.wv_c_minus
        if abs(aggregated - self.exp_c) > tol:
            raise ValueError(
                "conditional values must aggregate to exp_c "
                f"({aggregated} vs {self.exp_c})"
            )


def correlators_b4(
    alpha: float,
    gamma: float,
    delta: float,
    cutoff: float = SINGULAR_CUTOFF,
) -> CorrelatorSet:
    """Build the four-measurement correlator set for one angle triple.

    Preparation at ``alpha``, early observable axis ``gamma``, middle
    observable H/V, final analyzer at ``delta``; all in radians.

    Raises PostSelectionSingular when either analyzer port is orthogonal to
    the preparation, since the conditional values for that port diverge.
    """
    psi_a = state_from_angle(alpha)
    obs_b = observable_from_angle(gamma)
    obs_c = observable_from_angle(0.0)
    psi_d = state_from_angle(delta)
    psi_d_perp = psi_d.orthogonal()

    p_plus = transition_prob(psi_a, psi_d)
    p_minus = transition_prob(psi_a, psi_d_perp)
    if p_plus <= cutoff or p_minus <= cutoff:
        raise PostSelectionSingular(
            "analyzer port orthogonal to the preparation "
            f"(p_plus={p_plus:.3e}, p_minus={p_minus:.3e})"
        )

    return CorrelatorSet(
        exp_b=expectation(obs_b, psi_a),
        exp_c=expectation(obs_c, psi_a),
        corr_bc=sequential_weak_value(obs_c, obs_b, psi_a, psi_a).real,
        exp_d=p_plus - p_minus,
        p_d_plus=p_plus,
        p_d_minus=p_minus,
        wv_c_plus=weak_value(obs_c, psi_a, psi_d, cutoff).real,
        wv_c_minus=weak_value(obs_c, psi_a, psi_d_perp, cutoff).real,
    )


def b4_value(corr: CorrelatorSet) -> LGVerdict:
    """Four-measurement quantity <B> + <BC> + <CD> - <D> against bounds (-2, 2).

    The sequential correlator <CD> is composed from the analyzer statistics:
    p_plus * wv_plus - p_minus * wv_minus.
    """
    corr.validate()
    corr_cd = corr.p_d_plus * corr.wv_c_plus - corr.p_d_minus * corr.wv_c_minus
    value = corr.exp_b + corr.corr_bc + corr_cd - corr.exp_d
    return _verdict(value, -2.0, 2.0)


def b4_postselected_form(corr: CorrelatorSet) -> float:
    """Post-selected rewrite <B> + <BC> + p+(v+ - 1) - p-(v- - 1).

    Identical to ``b4_value`` whenever the set's probability identities hold;
    kept as an independent code path for cross-validation.
    """
    corr.validate()
    return (
        corr.exp_b
        + corr.corr_bc
        + corr.p_d_plus * (corr.wv_c_plus - 1.0)
        - corr.p_d_minus * (corr.wv_c_minus - 1.0)
    )


def b4_closed_form(alpha, gamma, delta):
    """B4 for the qubit family in closed angular form.

    cos 2(alpha-gamma) + cos 2 gamma + cos 2 delta - cos 2(delta-alpha).
    Accepts arrays and is finite at analyzer-singular angles where the
    correlator composition is undefined; elsewhere the two agree.
    """
    return (
        np.cos(2.0 * (alpha - gamma))
        + np.cos(2.0 * gamma)
        + np.cos(2.0 * delta)
        - np.cos(2.0 * (delta - alpha))
    )


def anomaly_threshold(
    exp_b: float,
    corr_bc: float,
    exp_c: float,
    p_d_minus: float,
    cutoff: float = SINGULAR_CUTOFF,
) -> float:
    """Threshold tying positive violations to the minus-port conditional value.

    Returns t = (3 - M) / (2 p_minus) with M = exp_b + corr_bc + exp_c.
    The exact identity B4 = M - 1 + 2 p_minus (1 - v_minus) makes its meaning

        B4 > 2  iff  1 - v_minus > t,

    i.e. a positive violation demands the minus-port value to sit below 1 by
    more than t.  Since regular values keep 1 - v_minus <= 2, any t > 2
    forces an anomalous (below -1) conditional value.  The mirrored statement
    for negative violations is obtained by negating exp_b and corr_bc and
    using the plus port.
    """
    if p_d_minus <= cutoff:
        raise PostSelectionSingular(
            f"minus-port probability {p_d_minus:.3e} below cutoff {cutoff:.1e}"
        )
    m = exp_b + corr_bc + exp_c
    return (3.0 - m) / (2.0 * p_d_minus)


# ---------------------------------------------------------------------------
# n measurements


@dataclass(frozen=True)
class CorrelatorChain:
    """Correlators of an n-measurement chain with the first outcome fixed +1.

    ``nearest`` holds the n-1 nearest-neighbour correlators <I_m I_{m+1}>,
    ``endpoint`` the correlator <I_1 I_n> between first and last.  Because
    the first measurement is the preparation (deterministically +1),
    <I_1 I_2> is just <I_2> and the endpoint is <I_n>.
    """

    n: int
    nearest: tuple
    endpoint: float

    def __post_init__(self):
        if self.n < 3:
            raise ChainTooShort(f"need n >= 3 measurements, got {self.n}")
        object.__setattr__(self, "nearest", tuple(float(v) for v in self.nearest))
        if len(self.nearest) != self.n - 1:
            raise LengthMismatch(
                f"chain of n={self.n} needs {self.n - 1} nearest correlators, "
                f"got {len(self.nearest)}"
            )
        for v in (*self.nearest, self.endpoint):
            if not -1.0 - 1e-12 <= v <= 1.0 + 1e-12:
                raise ValueError(f"correlator {v} outside [-1, 1]")


def bn_bounds(n: int) -> tuple:
    """Macrorealist bounds (lower, upper) for the n-measurement quantity.

    Upper bound n-2 for every n; lower bound -n for odd n and -(n-2) for
    even n.
    """
    if n < 3:
        raise ChainTooShort(f"need n >= 3 measurements, got {n}")
    upper = float(n - 2)
    lower = -float(n) if n % 2 else -float(n - 2)
    return lower, upper


def bn_value(chain: CorrelatorChain) -> LGVerdict:
    """Sum of nearest-neighbour correlators minus the endpoint correlator."""
    value = float(sum(chain.nearest)) - chain.endpoint
    lower, upper = bn_bounds(chain.n)
    return _verdict(value, lower, upper)


def bn_postselected_decomposition(
    chain: CorrelatorChain,
    p_plus: float,
    ps_terms_plus: Sequence[float],
    ps_terms_minus: Sequence[float],
) -> float:
    """Two-branch rewrite of B_n conditioned on the final outcome.

    Each term list carries the n-2 conditional nearest-neighbour correlators
    followed by the conditional value of measurement n-1, all conditioned on
    the final outcome (+1 list, -1 list):

        B_n = p+ (sum corr+ + single+ - 1) + p- (sum corr- - single- + 1)
    """
    expected = chain.n - 1  # n-2 correlators plus one single-measurement value
    if len(ps_terms_plus) != expected or len(ps_terms_minus) != expected:
        raise LengthMismatch(
            f"need {expected} conditional terms per branch for n={chain.n}, "
            f"got {len(ps_terms_plus)} and {len(ps_terms_minus)}"
        )
    if not 0.0 <= p_plus <= 1.0:
        raise ValueError(f"p_plus must be a probability, got {p_plus}")
    p_minus = 1.0 - p_plus
    plus = list(map(float, ps_terms_plus))
    minus = list(map(float, ps_terms_minus))
    branch_plus = sum(plus[:-1]) + plus[-1] - 1.0
    branch_minus = sum(minus[:-1]) - minus[-1] + 1.0
    return p_plus * branch_plus + p_minus * branch_minus


def macrorealist_bounds_bruteforce(n: int, fix_first: bool = True) -> tuple:
    """Extrema of B_n over all deterministic +-1 outcome assignments.

    A macrorealist model is a probability mixture of deterministic outcome
    assignments, and B_n is linear in the correlators, so its extrema over
    all such models are attained at the deterministic vertices; enumerating
    them is exhaustive.  With ``fix_first`` the first outcome is pinned to +1
    (the preparation), which cannot change the extrema because flipping every
    outcome leaves all correlators unchanged.

    Returns (lower, upper).  Raises EnumerationTooLarge above n = 20.
    """
    if n < 3:
        raise ChainTooShort(f"need n >= 3 measurements, got {n}")
    if n > 20:
        raise EnumerationTooLarge(f"2^{n} assignments is past the n = 20 guard")
    m = n - 1 if fix_first else n
    codes = np.arange(2**m, dtype=np.int64)
    signs = 1 - 2 * ((codes[:, None] >> np.arange(m)) & 1).astype(np.int8)
    if fix_first:
        signs = np.hstack([np.ones((signs.shape[0], 1), dtype=np.int8), signs])
    nearest_sum = (signs[:, :-1] * signs[:, 1:]).sum(axis=1, dtype=np.int64)
    values = nearest_sum - (signs[:, 0] * signs[:, -1]).astype(np.int64)
    return float(values.min()), float(values.max())
