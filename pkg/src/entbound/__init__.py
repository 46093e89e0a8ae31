"""Analytical lower bounds on bipartite concurrence from separability criteria."""
from .bounds import (
    BoundReport,
    best_bound,
    caf_bound,
    cm_bound,
    lurs_bound,
    schmidt_inequality_check,
    upper_estimate,
)
from .criteria import bloch, cm_value, lurs_value, variance
from .loo import (
    LOOPair,
    LOOSet,
    gellmann,
    isotropic_pair,
    lemma1_pair,
    random_orthogonal,
    rotate,
    standard_loos,
)
from .optimizer import OptimizerConfig, optimize_loos
from .qstate import (
    BipartiteDims,
    DensityMatrix,
    PureState,
    make_family,
    mix,
    partial_trace_a,
    partial_trace_b,
    pure_concurrence,
    pure_state,
    schmidt,
    validate_density,
)
from .rearrange import ccnr_value, partial_transpose, ppt_value, realign, trace_norm

__version__ = "0.1.0"
