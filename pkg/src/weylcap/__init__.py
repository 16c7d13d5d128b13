"""Easy-to-evaluate bounds on the Holevo capacity of discrete Weyl channels."""
from .bounds import (
    BoundReport,
    DSet,
    Witness,
    coincidence_test,
    count_dsets,
    depolarizing_capacity,
    dset_from_sorted,
    is_achievable,
    lower_bound,
    shannon_entropy,
    upper_bound,
    zeta,
)
from .channel import (
    ChannelDistribution,
    TransitionMatrix,
    apply_channel,
    channel_from_spec,
    depolarizing_channel,
    depolarizing_like_one,
    depolarizing_like_two,
    sample_random_channel,
    transition_matrix,
)
from .oracle import (
    OptimizerConfig,
    OracleResult,
    bloch_grid_entropy_min,
    bloch_grid_search,
    min_output_entropy,
    von_neumann_entropy,
)
from .weyl import (
    WeylIndex,
    WeylSpectrum,
    weyl_eigenbasis,
    weyl_eigenvalues,
    weyl_operator,
    weyl_order,
    weyl_power,
)

__version__ = "0.1.0"
