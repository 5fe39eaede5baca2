"""Leggett-Garg tests on a polarization qubit via weak measurements.

The package follows the experiment it models: :mod:`lgweak.qubit` holds the
exact two-level algebra (states, dichotomic observables, weak values),
:mod:`lgweak.inequalities` the macrorealist inequalities and their
post-selected rewrites, :mod:`lgweak.pointer` the Gaussian-pointer forward
model down to photon counts on a pixel array, :mod:`lgweak.estimators` the
inversion from counts back to inequality values, and
:mod:`lgweak.experiment` ties them into reproducible simulated runs.
"""

from .estimators import (
    B4Estimate,
    InsufficientCounts,
    MomentEstimate,
    PostselectedValue,
    WeakAverageEstimate,
    ZeroCoupling,
    bootstrap_se,
    compose_b4,
    grid_moments,
    postselected_weak_value,
    weak_averages,
)
from .experiment import (
    RunConfig,
    SimulationResult,
    SweepSpec,
    load_config,
    run_simulation,
    save_config,
    sweep_b4,
    sweep_summary,
    theory_report,
    write_frames,
    write_report,
    write_sweep_csv,
)
from .inequalities import (
    ChainTooShort,
    CorrelatorChain,
    CorrelatorSet,
    EnumerationTooLarge,
    LengthMismatch,
    LGVerdict,
    anomaly_threshold,
    b3_postselected_form,
    b3_value,
    b4_closed_form,
    b4_postselected_form,
    b4_value,
    bn_bounds,
    bn_postselected_decomposition,
    bn_value,
    correlators_b4,
    macrorealist_bounds_bruteforce,
)
from .pointer import (
    CountsGrid,
    DetectorGrid,
    GridTooSmall,
    MixtureAmplitude,
    PointerConfig,
    PointerMoments,
    derive_seed,
    detector_for,
    exact_moments,
    pixel_probabilities,
    postselected_amplitude,
    read_counts,
    sample_frame,
    write_counts,
)
from .qubit import (
    DichotomicObservable,
    PostSelectionSingular,
    QubitState,
    expectation,
    observable_from_angle,
    sequential_weak_value,
    state_from_angle,
    transition_prob,
    weak_value,
)

__version__ = "0.1.0"

__all__ = [
    "B4Estimate",
    "ChainTooShort",
    "CorrelatorChain",
    "CorrelatorSet",
    "CountsGrid",
    "DetectorGrid",
    "DichotomicObservable",
    "EnumerationTooLarge",
    "GridTooSmall",
    "InsufficientCounts",
    "LGVerdict",
    "LengthMismatch",
    "MixtureAmplitude",
    "MomentEstimate",
    "PointerConfig",
    "PointerMoments",
    "PostSelectionSingular",
    "PostselectedValue",
    "QubitState",
    "RunConfig",
    "SimulationResult",
    "SweepSpec",
    "WeakAverageEstimate",
    "ZeroCoupling",
    "anomaly_threshold",
    "b3_postselected_form",
    "b3_value",
    "b4_closed_form",
    "b4_postselected_form",
    "b4_value",
    "bn_bounds",
    "bn_postselected_decomposition",
    "bn_value",
    "bootstrap_se",
    "compose_b4",
    "correlators_b4",
    "derive_seed",
    "detector_for",
    "exact_moments",
    "expectation",
    "grid_moments",
    "load_config",
    "macrorealist_bounds_bruteforce",
    "observable_from_angle",
    "pixel_probabilities",
    "postselected_amplitude",
    "postselected_weak_value",
    "read_counts",
    "run_simulation",
    "sample_frame",
    "save_config",
    "sequential_weak_value",
    "state_from_angle",
    "sweep_b4",
    "sweep_summary",
    "theory_report",
    "transition_prob",
    "weak_averages",
    "weak_value",
    "write_counts",
    "write_frames",
    "write_report",
    "write_sweep_csv",
]
