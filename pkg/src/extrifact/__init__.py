"""Finite extriangulated categories with negative extensions over A_n.

s-torsion pairs, the factorization systems they induce, silting complexes
and gluing along recollements, all checked on explicit finite data.
"""
from .errors import CapabilityError, DomainError, ExtrifactError, InputError, PreconditionError
from .excat import (
    ExtTriangle,
    Morphism,
    Presentation,
    build_extended_category,
    build_module_category,
    build_product,
    check_negative_structure,
    dualize,
    is_deflation,
    is_inflation,
    load_presentation,
    realize,
    serialize_presentation,
    zero_category,
)
from .factsys import (
    FactSystem,
    Factorization,
    factorize,
    factorize_deflation,
    factorize_inflation,
    fs_to_torsion,
    in_defl_class,
    in_infl_class,
    orthogonal,
    roundtrip_extensional,
    torsion_to_fs,
    verify_fs,
)
from .recoll import (
    RecollementData,
    build_product_recollement,
    check_exactness_hypotheses,
    check_neg_ext_adjoint_iso,
    check_recollement,
    glue_fs,
    glue_torsion,
    load_recollement,
    serialize_recollement,
    triangular_fixture,
)
from .silting import SiltingCandidate, enumerate_silting, is_presilting, is_silting, parse_candidate, silted_pair
from .torsion import SubcatPair, enumerate_s_torsion, in_star, is_s_torsion, verify_s_torsion

__version__ = "0.1.0"
