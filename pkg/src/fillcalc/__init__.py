"""Word-level filling calculus for subdirect products of free groups and
Bestvina-Brady groups: areas, radii, heights, pulling-down transformations,
presentation constructors, and isoperimetric-bound calculators, with exact
brute-force oracles at desk scale."""

from .words import (
    ChargeMap,
    Letter,
    Word,
    charge,
    commutator,
    concat,
    conjugate,
    departure,
    free_reduce,
    freely_equal,
    heights,
    word,
    wpow,
)
from .rewriting import (
    Accounting,
    ApplyRelator,
    DerivationSequence,
    FillingExpression,
    FreeContract,
    FreeExpand,
    GroupPresentation,
    Scheme,
    SchemeRow,
    free_equality_sequence,
    invert_sequence,
    replay_sequence,
    sequence_to_expression,
    validate_expression,
    verify_scheme,
)
from .oracle import (
    AreaResult,
    DirectProductSpec,
    SearchBudget,
    area_exact,
    cayley_distance,
    dehn_sample,
    distortion_sample,
    dp_equal,
    find_filling,
    low_noise_search,
    raag_equal,
    raag_normal_form,
)
from .pulldown import (
    BoundExpr,
    PulldownContext,
    base_filling,
    check_phi_properties,
    compose_bounds,
    conjugation_scheme,
    flatten_expression,
    flatten_word,
    parse_bound,
    phi,
    pulldown_expression,
    relator_filling,
    standard_context,
)
from .constructors import (
    KnmrSpec,
    adapt_basis,
    cyclic_infinite_presentation,
    depth_coabelian,
    fiber_generators,
    fiber_presentation,
    k32_presentations,
    knmr_charge,
    knmr_generators,
    witness_word,
)
from .bestvina_brady import (
    FlagComplex,
    bb_indexed_families,
    bb_phi,
    bb_relator_scheme,
    check_flag,
    dicks_leary_presentation,
    null_homotopy_to_sequence,
    raag_presentation,
    rarea_sample,
    spanning_tree,
    tree_word,
)

__version__ = "0.1.0"
