"""twistfft — interferometric Fourier-transform circuits on twisted light.

Synthesizes optical circuits that realize the d-dimensional discrete
Fourier transform (d a power of two) on orbital-angular-momentum modes,
simulates them exactly as linear operators over a finite mode space, and
verifies them against a directly constructed reference matrix.  Four
hardware variants trade encoding (OAM ladder vs. path fan, with or without
a polarization-folded return pass) against element count, and a simple
per-element loss model quantifies how route-dependent attenuation
degrades the transform.
"""

from .analysis import (
    FidelityCurve,
    ParallelReport,
    ScalingRow,
    ScalingTable,
    SubspaceReport,
    VerificationCheck,
    VerificationReport,
    dft_oracle,
    expected_operator_matrix,
    global_phase_alignment,
    loss_sweep,
    normalized_fidelity,
    parallel_dataset_check,
    phase_aligned_distance,
    scaling_table,
    subspace_phase_check,
    verify_netlist,
)
from .blocks import (
    SorterBuild,
    SwapBuild,
    build_cz_array,
    build_f_squared_perm,
    build_path_fourier,
    build_sorter,
    build_swap,
    complete_permutation,
    cz_stages,
    exchanger_action,
    f_squared_permutation,
    fold_back,
    grouped_sorter_stages,
    holo_bs_action,
    inverted_stages,
    path_fourier_stages,
    sorter_stages,
)
from .counts import (
    basic_bs_total,
    basic_dove_total,
    basic_hologram_total,
    basic_mirror_total,
    basic_phase_total,
    path_bs_total,
    path_fourier_bs_count,
    pol_bs_total,
    pol_path_bs_total,
    pol_path_pbs_total,
    pol_pbs_total,
    recursive_design_bs,
    semi_brute_force_bs,
    sorter_bs_count,
    swap_bs_count,
    traditional_path_bs,
)
from .elements import (
    BACKWARD,
    FORWARD,
    BeamSplitter,
    DovePrism,
    Element,
    Exchanger,
    HalfWavePlate,
    HoloBeamSplitter,
    Hologram,
    LossModel,
    Mirror,
    PathPermutation,
    PhaseShifter,
    PolarizingBeamSplitter,
    SorterContract,
    SwapBlock,
    backward_action,
    element_from_record,
    element_to_record,
    lossy_action,
    primitive_action,
)
from .errors import (
    BasisEscapeError,
    BasisMismatchError,
    ClosureOverflowError,
    ContractDomainError,
    NetlistFormatError,
    NormalizationError,
    SchemeParameterError,
    TwistFFTError,
)
from .modespace import (
    POLARIZATIONS,
    Mode,
    ModeBasis,
    ModeOperator,
    PureState,
    apply,
    state_from_json,
    state_to_json,
)
from .netlist import (
    NETLIST_VERSION,
    Netlist,
    Stage,
    netlist_from_document,
    netlist_from_json,
    netlist_to_document,
    netlist_to_json,
    operator_of,
    reachable_oam_closure,
    stage_frontiers,
)
from .synthesis import (
    VARIANTS,
    CountReport,
    CountRow,
    SchemeConfig,
    brute_force_optimal_split,
    build_basic_scheme,
    build_path_enhanced_scheme,
    build_pol_enhanced_scheme,
    build_pol_path_enhanced_scheme,
    build_scheme,
    choose_factorization,
    count_closed_form,
    structural_counts,
)

__version__ = "1.0.0"

__all__ = [
    "POLARIZATIONS",
    "FORWARD",
    "BACKWARD",
    "NETLIST_VERSION",
    "VARIANTS",
    "__version__",
    # mode space
    "Mode",
    "ModeBasis",
    "PureState",
    "ModeOperator",
    "apply",
    "state_from_json",
    "state_to_json",
    # errors
    "TwistFFTError",
    "BasisMismatchError",
    "NormalizationError",
    "ContractDomainError",
    "BasisEscapeError",
    "ClosureOverflowError",
    "SchemeParameterError",
    "NetlistFormatError",
    # elements
    "Element",
    "LossModel",
    "DovePrism",
    "Hologram",
    "PhaseShifter",
    "Mirror",
    "BeamSplitter",
    "PolarizingBeamSplitter",
    "HalfWavePlate",
    "PathPermutation",
    "Exchanger",
    "HoloBeamSplitter",
    "SwapBlock",
    "SorterContract",
    "primitive_action",
    "backward_action",
    "lossy_action",
    "element_to_record",
    "element_from_record",
    # netlist
    "Stage",
    "Netlist",
    "operator_of",
    "stage_frontiers",
    "reachable_oam_closure",
    "netlist_to_document",
    "netlist_from_document",
    "netlist_to_json",
    "netlist_from_json",
    # blocks
    "exchanger_action",
    "holo_bs_action",
    "sorter_stages",
    "grouped_sorter_stages",
    "build_sorter",
    "SorterBuild",
    "build_swap",
    "SwapBuild",
    "path_fourier_stages",
    "build_path_fourier",
    "cz_stages",
    "build_cz_array",
    "f_squared_permutation",
    "build_f_squared_perm",
    "complete_permutation",
    "fold_back",
    "inverted_stages",
    # counts
    "sorter_bs_count",
    "path_fourier_bs_count",
    "swap_bs_count",
    "basic_bs_total",
    "pol_bs_total",
    "pol_pbs_total",
    "path_bs_total",
    "pol_path_bs_total",
    "pol_path_pbs_total",
    "basic_dove_total",
    "basic_hologram_total",
    "basic_phase_total",
    "basic_mirror_total",
    "semi_brute_force_bs",
    "recursive_design_bs",
    "traditional_path_bs",
    # synthesis
    "SchemeConfig",
    "choose_factorization",
    "brute_force_optimal_split",
    "build_scheme",
    "build_basic_scheme",
    "build_pol_enhanced_scheme",
    "build_path_enhanced_scheme",
    "build_pol_path_enhanced_scheme",
    "CountRow",
    "CountReport",
    "count_closed_form",
    "structural_counts",
    # analysis
    "dft_oracle",
    "global_phase_alignment",
    "phase_aligned_distance",
    "expected_operator_matrix",
    "VerificationCheck",
    "VerificationReport",
    "verify_netlist",
    "SubspaceReport",
    "subspace_phase_check",
    "ParallelReport",
    "parallel_dataset_check",
    "normalized_fidelity",
    "FidelityCurve",
    "loss_sweep",
    "ScalingRow",
    "ScalingTable",
    "scaling_table",
]
