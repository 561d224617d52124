"""Union-free and a-union-free subfamily extraction with exact desk-scale oracles."""
from .constructions import (
    GridSpec,
    StackSpec,
    barat,
    erdos_shelah,
    layered_poset,
    random_family,
    random_ladder,
    random_poset,
)
from .errors import (
    CapabilityError,
    ContractError,
    InfeasibleError,
    ParseError,
    RegimeError,
    UnionFreeError,
)
from .family import (
    SetFamily,
    as_selection,
    classify_structure,
    is_a_degenerate,
    is_a_union_free,
    is_union_free,
    parse_family,
    serialize_family,
)
from .ladder import (
    Certificate,
    Ladder,
    compute_schedule,
    extract_a_union_free,
    extract_from_family,
    meets_target,
    validate_certificate,
)
from .moser import ExtractionReport, extract_union_free, moser_bound
from .oracle import OracleLimits, expressible_as_union, max_a_union_free_exact, max_union_free_exact
from .poset import (
    FROM_MAXIMAL,
    FROM_MINIMAL,
    LevelDecomposition,
    OrderRelation,
    build_inclusion_order,
    decompose_levels,
    longest_chain,
    restrict_to,
)

__version__ = "0.1.0"
