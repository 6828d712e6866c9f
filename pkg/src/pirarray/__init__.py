"""PIR array codes: constructions, exact k-PIR verification and rate bounds."""

from .bounds import (
    best_upper_bound,
    compare_section42,
    lp_check_theorem7,
    modified_construction_rate,
    ub_large_s,
    ub_small_s,
)
from .constructions import (
    be_multiplicities,
    construct_be,
    construct_modified,
    construct_small_s,
    intro_example_code,
    small_s_params,
)
from .gf import in_span, rank, row_reduce
from .matching import BipartiteGraph, Matching, is_perfect, max_matching
from .model import (
    ArrayCode,
    Server,
    Witness,
    check_assumptions,
    deserialize,
    make_sigma_server,
    make_singleton_server,
    rate,
    serialize,
    storage_ratio,
)
from .verifier import brute_force_k, max_k, spans, verify_witness

__version__ = "0.1.0"
