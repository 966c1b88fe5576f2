"""Secret-key analysis of entanglement distributed through noisy quantum repeaters."""

from noisyrep.bell_algebra import (
    BellDiagonalDist,
    BellIndex,
    compose,
    convolve,
    swap_oracle,
)
from noisyrep.chain import (
    ChainState,
    RepeaterModel,
    ShieldParams,
    bb84_state,
    chain_state,
    shield_repeater,
    shield_repeater_asymptotic,
    shield_repeater_orthogonal,
    single_repeater_state,
    trivial_repeater,
)
from noisyrep.operator_spectra import (
    SpectralOperator,
    overlap,
    projector_asym,
    projector_sym,
    tensor_power,
    trace_norm_combo,
)
from noisyrep.secrecy import (
    KeyRateReport,
    UntwistResult,
    binary_entropy,
    fidelity,
    measurement_dist,
    oneway_rate,
    precondition_entangled,
    qber_threshold,
    twoway_condition,
    untwist,
)

__version__ = "0.1.0"
