"""Rate regions of the discrete memoryless cognitive interference channel
with a relay link between the destinations."""

__version__ = "0.1.0"

from .bounds import (
    ChannelClassError,
    CollapseDiagnostic,
    InnerBoundVector,
    OuterBoundVector,
    RatePolytope,
    SemidetBoundVector,
    THEOREMS,
    bounds_to_polytope,
    decode_forward_collapse,
    eval_inner_bound,
    eval_outer_bound,
    eval_semidet_bound,
    relay_bc_specialize,
)
from .channel_model import (
    AlphabetSpec,
    ChannelDataError,
    ChannelLaw,
    ChannelValidationError,
    ClassificationReport,
    classify_channel,
    classify_degraded,
    classify_semideterministic,
    dumps_channel,
    extract_y1_law,
    load_channel,
    loads_channel,
    save_channel,
    validate_channel,
)
from .condition_checkers import (
    ConditionVerdict,
    check_high_gain,
    check_more_capable,
    more_capable_decomposition_residual,
    semidet_collapse_deviation,
)
from .distributions import (
    AuxCardinalities,
    InnerFactorization,
    OuterWitness,
    attach_channel,
    build_inner_joint,
    build_outer_joint,
    params_to_factorization,
    params_to_outer_witness,
    sample_witness,
    verify_markov,
)
from .info_measures import (
    JointPmf,
    MeasureConsistencyError,
    VARIABLES,
    conditional_entropy,
    conditional_mutual_information,
    entropy,
    marginalize,
)
from .oracle import GridSpec, GridTooLargeError, compare_to_oracle, oracle_frontier
from .region_builder import (
    Frontier,
    RatePoint,
    SearchConfig,
    compute_frontier,
    frontier_gap,
    maximize_direction,
    pareto_filter,
    polytope_support,
    require_theorem_applies,
    upper_concave_envelope,
)
