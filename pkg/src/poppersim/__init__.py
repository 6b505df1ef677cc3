"""Discrete (spin-1) and continuous (Gaussian EPR pair) simulations of Popper's experiment."""

from .continuous import (
    ContinuousConfig,
    GridSpec,
    SlitAperture,
    SpreadReport,
    WavefunctionGrid2D,
    apply_slit,
    build_epr_gaussian,
    free_evolve,
    momentum_marginal,
    position_marginal,
    run_popper_continuous,
)
from .discrete import (
    DiscreteConfig,
    DiscreteReport,
    build_state,
    decompose_x_basis,
    run_coincidence,
    run_unconditional,
)
from .errors import ConfigError, NullSelectionError, NumericalError, ResolutionError
from .quantum import (
    HermitianObservable,
    OutcomeDistribution,
    PureState,
    eigenbasis,
    post_select,
    sample_counts,
    subsystem_probabilities,
    tensor_product,
)
from .spin1 import SpinAxis, spin1_observable, z_to_x_overlaps
from .sweep import SweepGrid, run_sweep

__version__ = "0.1.0"
