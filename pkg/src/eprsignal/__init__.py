"""EPR signaling simulator and quadraticity certifiers for functional
observables on quantum states."""

from .hilbert import (
    BlochPoint,
    bloch_inverse,
    bloch_map,
    bloch_state,
    gram_schmidt,
    haar_unitary,
    inner,
    partial_trace_a,
    random_pure,
    tensor,
)
from .nosignal import (
    Certificate,
    ChordWitness,
    SubspaceMeasureRecord,
    affinity_scan,
    basis_independence,
    chord_intersection,
    extremal_decomposition,
    gleason_certify,
    orthoadditivity_check,
    subspace_measure,
)
from .observables import (
    CountingObservable,
    FunctionalObservable,
    combine,
    custom,
    ensemble_average,
    polarization_reconstruct,
    power,
    quadratic,
    quadraticity_residual,
)
from .signaling import (
    ChannelReport,
    Scenario,
    SignalReport,
    channel_capacity,
    exact_gap,
    monte_carlo_report,
    random_scenario,
    sample_sequence,
)
from .states import (
    DensityMatrix,
    Ensemble,
    EntangledState,
    PureState,
    build_entangled,
    conditional_ensemble,
    density_equal,
    ensemble_density,
    rebase_alice,
)

__version__ = "0.1.0"

__all__ = [
    "BlochPoint",
    "Certificate",
    "ChannelReport",
    "ChordWitness",
    "CountingObservable",
    "DensityMatrix",
    "Ensemble",
    "EntangledState",
    "FunctionalObservable",
    "PureState",
    "Scenario",
    "SignalReport",
    "SubspaceMeasureRecord",
    "affinity_scan",
    "basis_independence",
    "bloch_inverse",
    "bloch_map",
    "bloch_state",
    "build_entangled",
    "channel_capacity",
    "chord_intersection",
    "combine",
    "conditional_ensemble",
    "custom",
    "density_equal",
    "ensemble_average",
    "ensemble_density",
    "exact_gap",
    "extremal_decomposition",
    "gleason_certify",
    "gram_schmidt",
    "haar_unitary",
    "inner",
    "monte_carlo_report",
    "orthoadditivity_check",
    "partial_trace_a",
    "polarization_reconstruct",
    "power",
    "quadratic",
    "quadraticity_residual",
    "random_pure",
    "random_scenario",
    "rebase_alice",
    "sample_sequence",
    "subspace_measure",
    "tensor",
]
