"""Central extensions of Z^n by 2-orbifold groups: isomorphism and
profinite isomorphism decisions with checkable witnesses."""

from .coclass import (
    Decomposition,
    ElementaryDivisors,
    ExtensionClass,
    act,
    class_equal,
    decompose,
    elementary_divisors,
    euler_map,
    make_class,
    permute_columns,
    recombine,
    relation_class,
    torsion_quotient,
    zero_class,
)
from .errors import OrbextError
from .groups import (
    AbelianInvariants,
    FiniteGroup,
    HkForm,
    Presentation,
    abelianization,
    count_homs,
    emit_presentation,
    hk_form,
    small_groups,
)
from .orbifold import OrbifoldSignature, SignatureKind, classify_signature, symmetry_group, validate_signature
from .orbits import IntegralWitness, ProfiniteWitness, decide_integral_iso, decide_profinite_iso, verify_witness
from .rigidity import (
    RigidityVerdict,
    classify_rigidity,
    construct_nonrigid_pair,
    stabilize,
    stabilized_integral_witness,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianInvariants",
    "Decomposition",
    "ElementaryDivisors",
    "ExtensionClass",
    "FiniteGroup",
    "HkForm",
    "IntegralWitness",
    "OrbextError",
    "OrbifoldSignature",
    "Presentation",
    "ProfiniteWitness",
    "RigidityVerdict",
    "SignatureKind",
    "abelianization",
    "act",
    "class_equal",
    "classify_rigidity",
    "classify_signature",
    "construct_nonrigid_pair",
    "count_homs",
    "decide_integral_iso",
    "decide_profinite_iso",
    "decompose",
    "elementary_divisors",
    "emit_presentation",
    "euler_map",
    "hk_form",
    "make_class",
    "permute_columns",
    "recombine",
    "relation_class",
    "small_groups",
    "stabilize",
    "stabilized_integral_witness",
    "symmetry_group",
    "torsion_quotient",
    "validate_signature",
    "verify_witness",
    "zero_class",
]
