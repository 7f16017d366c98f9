"""Concrete model instances: access matrix, the three ABAC variants, test atoms."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable, Mapping

from acframe.decisions import (
    ALLOW,
    CONFLICT,
    DENY,
    FOUR,
    NA,
    THREE,
    THREE_OPERATORS,
    TWO,
    Decision,
)
from acframe.errors import CapacityError, DomainError
from acframe.policy import Atom, ModelInstance, PolicyTerm, op
from acframe.vocab import (
    REQUEST_BOUND,
    AttributeVocabulary,
    Pair,
    Triple,
    check_identifier,
    count_multi,
    count_single,
    enumerate_multi,
    enumerate_single,
    is_single_valued,
    request_leq,
)

VARIANTS = ("abacm", "abacc", "abac4")

VARIANT_OPERATORS = {
    "abacm": frozenset({"not", "and", "or", "una", "tra"}),
    "abacc": frozenset({"not", "dbd", "or", "c1", "c0", "cna"}),
    "abac4": frozenset({"not", "and", "or", "una", "res_allow", "res_deny"}),
}


@dataclass(frozen=True)
class AmUniverse:
    subjects: tuple[str, ...]
    objects: tuple[str, ...]
    actions: tuple[str, ...]

    def __post_init__(self):
        for label in ("subjects", "objects", "actions"):
            values = tuple(sorted(set(check_identifier(v) for v in getattr(self, label))))
            if not values:
                raise DomainError(f"access matrix universe needs at least one of {label}")
            object.__setattr__(self, label, values)

    def triples(self) -> tuple[Triple, ...]:
        return tuple(Triple(*t) for t in product(self.subjects, self.objects, self.actions))


def am_model(u: AmUniverse) -> ModelInstance:
    """Protection matrix: an atom allows exactly its own triple."""
    triples = u.triples()
    members = frozenset(triples)

    def semantics(atom, q):
        return ALLOW if tuple(atom) == tuple(q) else DENY

    return ModelInstance(
        name="am",
        decision_set=TWO,
        atoms=frozenset(tuple(t) for t in triples),
        atom_semantics=semantics,
        operators=frozenset({"or", "c0"}),
        request_leq=lambda a, b: a == b,
        enumerate_requests=lambda: triples,
        contains=lambda q: isinstance(q, tuple) and len(q) == 3 and Triple(*q) in members,
    )


def _check_atom(atom) -> Pair:
    if not (isinstance(atom, tuple) and len(atom) == 2):
        raise DomainError(f"ABAC atom must be a (name, value) pair, got {atom!r}")
    return atom


def abac_atom_three(atom: Pair, q: frozenset) -> Decision:
    """Match wins: allow if the pair is present, na if the name is absent."""
    name, value = _check_atom(atom)
    if (name, value) in q:
        return ALLOW
    if any(n == name for n, _ in q):
        return DENY
    return NA


def abac_atom_four(atom: Pair, q: frozenset) -> Decision:
    """Four-valued atom: a matching pair alongside a non-matching one is a conflict."""
    name, value = _check_atom(atom)
    match = (name, value) in q
    other = any(n == name and v != value for n, v in q)
    if match and other:
        return CONFLICT
    if match:
        return ALLOW
    if other:
        return DENY
    return NA


def make_abac_model(
    vocab: AttributeVocabulary, variant: str, bound: int = REQUEST_BOUND
) -> ModelInstance:
    if variant not in VARIANTS:
        raise DomainError(f"unknown ABAC variant {variant!r}")
    single = variant == "abacm"
    n = count_single(vocab) if single else count_multi(vocab)
    if n > bound:
        raise CapacityError(f"{variant} request space has {n} requests", bound)
    pairs = frozenset(vocab.pairs())

    def contains(q):
        if not isinstance(q, frozenset) or not q <= pairs:
            return False
        return is_single_valued(q) if single else True

    if single:
        enum = lambda: enumerate_single(vocab, bound)  # noqa: E731
    else:
        enum = lambda: enumerate_multi(vocab, bound)  # noqa: E731

    return ModelInstance(
        name=variant,
        decision_set=FOUR if variant == "abac4" else THREE,
        atoms=pairs,
        atom_semantics=abac_atom_four if variant == "abac4" else abac_atom_three,
        operators=VARIANT_OPERATORS[variant],
        request_leq=request_leq,
        enumerate_requests=enum,
        contains=contains,
        allows_derived=variant in ("abacm", "abacc"),
    )


def test_atom_model(
    tables: Mapping[str, Mapping[Hashable, Decision]], requests=None
) -> ModelInstance:
    """Model over opaque requests whose atoms are given by explicit tables.

    Every three-valued operator is available; requests are ordered by identity.
    """
    if requests is None:
        requests = sorted({q for t in tables.values() for q in t}, key=str)
    requests = tuple(requests)
    for atom, table in tables.items():
        check_identifier(atom)
        missing = [q for q in requests if q not in table]
        if missing:
            raise DomainError(f"test atom {atom} has no decision for request {missing[0]!r}")
        for d in table.values():
            THREE.check(Decision(d))
    frozen = {(a,): {q: Decision(d) for q, d in t.items()} for a, t in tables.items()}
    members = frozenset(requests)
    return ModelInstance(
        name="test",
        decision_set=THREE,
        atoms=frozenset(frozen),
        atom_semantics=lambda atom, q: frozen[atom][q],
        operators=frozenset(THREE_OPERATORS),
        request_leq=lambda a, b: a == b,
        enumerate_requests=lambda: requests,
        contains=lambda q: q in members,
    )


def tq_term(q: frozenset, dset=THREE) -> PolicyTerm:
    """Left-nested conjunction of the request's pairs in sorted order."""
    if not q:
        raise DomainError("t_q is undefined for the empty request")
    pairs = sorted(q)
    term: PolicyTerm = Atom(pairs[0])
    for p in pairs[1:]:
        term = op("and", dset, term, Atom(p))
    return term


test_atom_model.__test__ = False  # keep pytest from collecting this as a test
