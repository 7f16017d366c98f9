"""Generic access control models: decision algebras, policy terms, and analyses."""

from acframe.decisions import (
    FOUR,
    THREE,
    TWO,
    Decision,
    DecisionSet,
    OperatorTable,
    apply,
    builtin_operator,
    leq,
    lift_absorbing,
    operator_monotone,
)
from acframe.errors import (
    AcframeError,
    CapacityError,
    DomainError,
    NonMonotoneIdealError,
    PolicySyntaxError,
    UnknownOperatorError,
    ValidationError,
)
from acframe.policy import Atom, ModelInstance, Node, const, evaluate, validate
from acframe.dsl import parse, render
from acframe.vocab import (
    AttributeVocabulary,
    Triple,
    enumerate_multi,
    enumerate_single,
    request_leq,
    sanitize,
    topo_order,
)
from acframe.models import (
    AmUniverse,
    abac_atom_four,
    abac_atom_three,
    am_model,
    make_abac_model,
    test_atom_model,
    tq_term,
)
from acframe.analysis import (
    EquivalenceWitness,
    IdealPolicy,
    MonotonicityReport,
    bounded_synthesis,
    check_monotone_policy,
    compile_complete,
    delta_guard,
    equivalent,
    is_ideal_monotone,
    oplus_operator,
    random_ideal,
    random_monotone_ideal,
    random_term,
    realize_am,
    realize_monotone,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "ModelInstance",
    "Node",
    "const",
    "evaluate",
    "validate",
    "parse",
    "render",
    "FOUR",
    "THREE",
    "TWO",
    "Decision",
    "DecisionSet",
    "OperatorTable",
    "apply",
    "builtin_operator",
    "leq",
    "lift_absorbing",
    "operator_monotone",
    "AcframeError",
    "CapacityError",
    "DomainError",
    "NonMonotoneIdealError",
    "PolicySyntaxError",
    "UnknownOperatorError",
    "ValidationError",
    "AttributeVocabulary",
    "Triple",
    "enumerate_multi",
    "enumerate_single",
    "request_leq",
    "sanitize",
    "topo_order",
    "AmUniverse",
    "abac_atom_four",
    "abac_atom_three",
    "am_model",
    "make_abac_model",
    "test_atom_model",
    "tq_term",
    "EquivalenceWitness",
    "IdealPolicy",
    "MonotonicityReport",
    "bounded_synthesis",
    "check_monotone_policy",
    "compile_complete",
    "delta_guard",
    "equivalent",
    "is_ideal_monotone",
    "oplus_operator",
    "random_ideal",
    "random_monotone_ideal",
    "random_term",
    "realize_am",
    "realize_monotone",
]
