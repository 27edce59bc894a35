"""Simulation and spectral analysis of 1D discrete-time topological quantum walks."""

from .core import (
    CoinField,
    CoinParams,
    Geometry,
    WalkerState,
    WireLeakError,
    apply_coin,
    apply_step,
    coin_matrix,
    evolve,
    fold_angle,
    overlap,
    position_distribution,
)
from .spectral import (
    SpectralResult,
    TwoSegmentScenario,
    build_unitary,
    diagonalize,
    gap_state_filter,
    inverse_participation_ratio,
    localization_length_fit,
    pair_splitting,
    sweep_parameter,
)
from .analytic import (
    AnalyticBandSolution,
    AnalyticGapSolution,
    InterfaceState,
    InterfaceStateSpec,
    approx_gap_energy,
    band_eigenvector,
    decompose_initial,
    eigenstate_residual,
    gap_eigenvector,
    gap_quartet,
    interface_state,
    k0_rate,
    localization_length,
    rabi_gap_prediction,
    seam_channel_pair,
    solve_band,
    solve_gap,
    symmetry_apply,
    symmetry_matrix,
    tail_probability,
    wire_half_length,
    wire_spectrum,
)
from .experiments import (
    RabiAnalysis,
    run_cycle_spectrum,
    run_defect_scan,
    run_disorder_rabi,
    run_gap_scaling,
    run_interface_evolution,
    run_rabi_transport,
    run_wire_dynamics,
)

__version__ = "0.1.0"
