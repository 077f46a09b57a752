"""One- and two-particle discrete quantum walks on beam-splitter pyramids.

Bosonic, fermionic and anyonic two-particle walks are obtained from a single
network by injecting polarization-entangled photon pairs with a tunable
exchange phase.
"""

__version__ = "0.1.0"

from .distributions import PairDistribution, WalkDistribution
from .errors import BudgetExceededError, InvalidInputError, InvalidSpecError, SchemaError, WalkError
from .imperfections import (
    PolarizedCouplerModel,
    entangled_with_imperfections,
    polarization_independence_report,
    polarization_similarity,
    polarized_network,
    ratio_from_tilt,
    ratio_sweep,
)
from .lattice import PositionAxis, port_to_coin_state, port_to_position, regroup_pair, regroup_single
from .metrics import max_abs_difference, similarity
from .network import (
    BALANCED,
    CoinState,
    CouplerSpec,
    ModeUnitary,
    NetworkSpec,
    build_network_unitary,
    central_rails,
    coupler_matrix,
    single_particle_distribution,
    verify_unitarity,
)
from .oracle import (
    boson_pair_oracle,
    fermion_pair_oracle,
    path_amplitude_table,
    single_particle_path_oracle,
)
from .two_particle import (
    BOSON,
    FERMION,
    ExchangePhase,
    PairAmplitudes,
    anyon_sweep,
    pair_amplitudes,
    pair_distribution,
    separable_product_distribution,
)
