"""Exact-arithmetic classification of simple embedded spheres in 4-manifolds.

The package decides which second-homology classes of a closed
simply-connected 4-manifold are represented by simple (locally flat)
embedded spheres, reports uniqueness where the sufficient rules apply,
and implements the supporting algebra: unimodular symmetric forms over
the integers, group rings of finite cyclic groups and integer Laurent
polynomials with the involution T -> T^(-1), and hermitian forms over
those rings with a bounded congruence search.
"""

__version__ = "0.1.0"

from .classifier import (
    DETERMINED_BY_FORM,
    EXISTS_BY_DEFINITION,
    EXISTS_NO,
    EXISTS_YES,
    NOT_REALIZABLE,
    REALIZABLE,
    UNIQUE_ISOTOPY,
    UNKNOWN,
    FourManifold,
    SphereClassReport,
    classify,
    enumerate_representable,
    exists_simple_sphere,
    ks_condition,
    lw_bound,
    realizable_forms_check,
    uniqueness_status,
)
from .errors import (
    DimensionMismatch,
    DivisibilityViolation,
    NotApplicable,
    NotCharacteristic,
    NotFreeBasis,
    ParseError,
    RingMismatch,
    SpherecalcError,
    ZeroClass,
)
from .groupring import CyclicRing, GroupRingElem, LaurentElem, LaurentRing
from .hermitian import (
    EquivariantIntegerForm,
    HermitianForm,
    PointedHermitianForm,
    augment_form,
    augmented_isometry,
    build_equivariant_form,
    congruence_search,
    extend_integer_form,
    is_nonsingular,
    pointed_congruence_search,
    verify_congruence,
)
from .intlattice import (
    E8_MATRIX,
    H_MATRIX,
    FormInvariants,
    HomologyClass,
    IntersectionForm,
    IsometryResult,
    divisibility,
    form_invariants,
    is_characteristic,
    is_isometric,
    self_intersection,
    signature,
)

__all__ = [
    "__version__",
    "FourManifold",
    "SphereClassReport",
    "classify",
    "enumerate_representable",
    "exists_simple_sphere",
    "ks_condition",
    "lw_bound",
    "realizable_forms_check",
    "uniqueness_status",
    "EXISTS_YES",
    "EXISTS_NO",
    "EXISTS_BY_DEFINITION",
    "UNIQUE_ISOTOPY",
    "DETERMINED_BY_FORM",
    "UNKNOWN",
    "REALIZABLE",
    "NOT_REALIZABLE",
    "GroupRingElem",
    "LaurentElem",
    "CyclicRing",
    "LaurentRing",
    "HermitianForm",
    "PointedHermitianForm",
    "EquivariantIntegerForm",
    "build_equivariant_form",
    "augment_form",
    "augmented_isometry",
    "is_nonsingular",
    "extend_integer_form",
    "congruence_search",
    "pointed_congruence_search",
    "verify_congruence",
    "IntersectionForm",
    "HomologyClass",
    "FormInvariants",
    "IsometryResult",
    "divisibility",
    "self_intersection",
    "is_characteristic",
    "signature",
    "form_invariants",
    "is_isometric",
    "E8_MATRIX",
    "H_MATRIX",
    "SpherecalcError",
    "DimensionMismatch",
    "RingMismatch",
    "NotFreeBasis",
    "ZeroClass",
    "NotCharacteristic",
    "DivisibilityViolation",
    "NotApplicable",
    "ParseError",
]
