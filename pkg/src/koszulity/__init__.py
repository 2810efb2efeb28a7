"""Koszulity of finite graded category algebras, decided topologically.

The category algebra of a finite graded category is Koszul exactly when
every morphism's factorization space has reduced cohomology concentrated
in the top possible degree.  This package computes those cohomologies
exactly, derives graded Ext between simple representations two independent
ways, and layers poset, Reiner-Stamate and toric front ends on top.
"""

__version__ = "0.1.0"

from .category import (
    CategoryError,
    FiniteGradedCategory,
    Morphism,
    NonCancellative,
    QuiverPresentation,
    RelationEndpointMismatch,
    SchemaError,
    UnknownObject,
    from_quiver,
    full_subcategory,
    load_category,
    opposite,
    product,
    skeletalize,
    validate,
)
from .factorization import factorization_space, reduced_nerve, verify_cells_bijection
from .homology import (
    RATIONALS,
    BettiProfile,
    Field,
    SemiSimplicialSet,
    check_semisimplicial,
    is_bouquet,
    prime_field,
    reduced_cohomology,
)
from .koszul import (
    ExtQuery,
    KoszulVerdict,
    ext_oracle_resolution,
    ext_simples,
    ext_table,
    generated_in_degree_one,
    is_koszul,
    quadratic_sufficient,
    quadraticity_verdict,
)
from .posets import (
    FinitePoset,
    NotGraded,
    SimplicialComplex,
    complex_betti,
    is_cohen_macaulay,
    is_graded_poset,
    is_locally_CM,
    link,
    order_complex,
    poset_to_category,
    verify_interval_equals_factorization,
)
from .rs import (
    FunctorData,
    IntervalRelation,
    is_almost_discrete_fibration,
    is_discrete_fibration,
    path_poset,
    reduced_incidence_algebra,
    relation_from_fibration,
    rs_quotient,
    verify_rs_axioms,
)
from .toric import (
    ClassGroup,
    NotPointed,
    ToricCollectionSpec,
    is_pointed,
    is_saturated,
    monomials_of_degree,
    skew_category,
    toric_report,
)
