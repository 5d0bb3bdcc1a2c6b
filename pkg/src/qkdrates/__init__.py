"""Secret-key rates for practical QKD links with two-way post-processing.

Models a weak-coherent-pulse link with fiber loss, detector inefficiency,
dark counts, and multiphoton tagging; computes asymptotic one-way and
two-way-augmented secret-key rates for the four-state, six-state, and
decoy-pulse protocols; and provides per-distance intensity optimization,
distance sweeps, maximum-distance and bound-distance searches, and
feasibility-region curves.
"""
from .bstep import (
    DEFAULT_MAX_ROUNDS,
    BStepOutcome,
    BStepTrajectory,
    bstep,
    iterate_bsteps,
)
from .decoy import (
    DEFAULT_DECOY,
    DecoyBounds,
    DecoyObservations,
    DecoyParams,
    DecoyPoint,
    decoy_bounds,
    decoy_point,
    decoy_rate,
    simulated_yields,
)
from .enumeration import PairAtom, enumerate_bstep, max_deviation, pair_atoms
from .link import (
    DEFAULT_LINK,
    DeadLinkError,
    LinkObservables,
    LinkParams,
    channel_transmission,
    link_observables,
    multiphoton_fraction,
)
from .optimize import (
    COARSE_GRID_POINTS,
    DISTANCE_CAP_KM,
    DISTANCE_RESOLUTION_KM,
    MU_INTERVAL,
    BoundKind,
    RegionPoint,
    SweepRow,
    bound_distance,
    max_distance,
    optimize_mu,
    rate_sweep,
    region_curves,
    standard_rate,
)
from .rates import (
    POSITIVE_RATE_FLOOR,
    Feasibility,
    binary_entropy,
    classify_feasibility,
    css_key_fraction,
    entanglement_boundary,
    purification_boundary,
    rate_bcss,
    rate_css,
)
from .states import (
    PairState,
    Protocol,
    StateModelError,
    initial_pair_state,
    observed_qber,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # link
    "DeadLinkError",
    "LinkParams",
    "LinkObservables",
    "DEFAULT_LINK",
    "channel_transmission",
    "multiphoton_fraction",
    "link_observables",
    # states
    "StateModelError",
    "Protocol",
    "PairState",
    "initial_pair_state",
    "observed_qber",
    # bstep
    "DEFAULT_MAX_ROUNDS",
    "BStepOutcome",
    "BStepTrajectory",
    "bstep",
    "iterate_bsteps",
    # rates
    "POSITIVE_RATE_FLOOR",
    "Feasibility",
    "binary_entropy",
    "css_key_fraction",
    "rate_css",
    "rate_bcss",
    "entanglement_boundary",
    "purification_boundary",
    "classify_feasibility",
    # enumeration
    "PairAtom",
    "pair_atoms",
    "enumerate_bstep",
    "max_deviation",
    # decoy
    "DecoyParams",
    "DecoyObservations",
    "DecoyBounds",
    "DecoyPoint",
    "DEFAULT_DECOY",
    "simulated_yields",
    "decoy_bounds",
    "decoy_point",
    "decoy_rate",
    # optimize
    "MU_INTERVAL",
    "COARSE_GRID_POINTS",
    "DISTANCE_RESOLUTION_KM",
    "DISTANCE_CAP_KM",
    "BoundKind",
    "SweepRow",
    "RegionPoint",
    "standard_rate",
    "optimize_mu",
    "rate_sweep",
    "max_distance",
    "bound_distance",
    "region_curves",
]
