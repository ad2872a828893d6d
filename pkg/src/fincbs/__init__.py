"""Finite co-Brouwerian semilattices.

Köhler duality between finite posets with partial P-morphisms and finite
co-Brouwerian semilattices, the classification of minimal extensions by
signatures, amalgamation, the Splitting/Density axioms with their finite
witness constructions, and a decision procedure for the equational
theory.
"""

from .amalgam import coamalgamate, pushout_monos
from .axioms import (
    AxiomReport,
    DefeatMeet,
    ExceedTop,
    KillJoinIrreducible,
    density1_witness,
    density2_witness,
    ec_demo_witnesses,
    evaluate_axioms,
    realize_signature_via_axioms,
    splitting_witness,
)
from .catalog import catalog_algebras, named_posets
from .cbs import (
    CbsMorphism,
    FinCbs,
    algebra_from_text,
    algebra_to_text,
    generated_subalgebra,
    ji_components,
    join_irreducibles,
    predecessor,
    validate_cbs,
    validate_cbs_morphism,
    way_below,
)
from .duality import (
    cbs_isomorphic,
    cbs_morphism_dual,
    cbs_to_poset,
    pmorphism_dual,
    poset_to_cbs,
)
from .errors import FincbsError
from .minext import (
    Extension,
    FirstKind,
    SecondKind,
    Signature,
    build_extension,
    enumerate_signatures,
    find_primitive_generators,
    format_signature,
    parse_signature,
    primitive_check,
)
from .pmorph import (
    FiberPartition,
    PMorphism,
    classify,
    compose_pmorphisms,
    decompose_minimal_chain,
    partition_to_pmorphism,
    validate_pmorphism,
)
from .poset import (
    DownSet,
    Poset,
    all_downsets,
    build_poset,
    downset_closure,
    downset_difference,
    find_isomorphism,
    is_isomorphic,
    poset_from_text,
    poset_to_text,
)
from .terms import (
    Diff,
    Join,
    Term,
    Var,
    ZERO,
    Zero,
    eval_term,
    format_term,
    free_cbs,
    normalize_term,
    parse_term,
    parse_term_brouwerian,
    terms_equal,
)

__all__ = [name for name in dir() if not name.startswith("_")]
