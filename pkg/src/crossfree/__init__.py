"""crossfree: a laboratory for k-cross-free set families.

Certify the (weak) k-cross-free property with explicit witnesses, verify a
chain of counting bounds on weakly k-cross-free families block by block,
and compute exact extremal family sizes on small ground sets.
"""

from .certify import CertReport, CrossingGraph, Witness, build_crossing_graph, certify, find_k_pairwise
from .core import (
    Family,
    FamilyFormatError,
    GroundMismatchError,
    GroundSet,
    RegionProfile,
    Subset,
    complement,
    is_antichain,
    is_chain,
    is_crossing,
    is_weakly_crossing,
    parse_family,
    regions,
    serialize_family,
)
from .extremal import (
    ExtremalResult,
    SearchSpace,
    bounds_sweep,
    capoyleas_pach_bound,
    interval_universe,
    make_space,
    max_cross_free,
)
from .generators import gen_laminar, gen_random_crossfree
from .pipeline import (
    BoundsReport,
    HypothesisError,
    PipelineReport,
    Schedule,
    blocks,
    chain_cover,
    count_nice_tuples,
    enumerate_good_tuples,
    ext_binom,
    log_star,
    lomonosov_report,
    normalize_weakly,
    representatives,
    run_pipeline,
    schedule,
    strip_small,
    verify_claims,
)

__version__ = "0.1.0"
