"""Policy terms, model instances, and bottom-up evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence, Union

from acframe.decisions import (
    CONSTANTS,
    Decision,
    DecisionSet,
    OperatorTable,
    _apply_unchecked,
    builtin_operator,
)
from acframe.errors import UnknownOperatorError, ValidationError


@dataclass(frozen=True)
class Atom:
    """Leaf naming an atomic policy; its meaning comes from the model."""

    id: tuple[str, ...]


@dataclass(frozen=True)
class Node:
    """Operator application.  Constants are nodes over 0-ary operators."""

    operator: OperatorTable
    children: tuple["PolicyTerm", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


PolicyTerm = Union[Atom, Node]


def const(decision: Decision, dset: DecisionSet) -> Node:
    name = {v: k for k, v in CONSTANTS.items()}[Decision(decision)]
    return Node(builtin_operator(name, dset))


def op(name: str, dset: DecisionSet, *children: PolicyTerm) -> Node:
    """Shorthand for building a node over a built-in operator."""
    return Node(builtin_operator(name, dset), children)


def iter_nodes(term: PolicyTerm) -> Iterable[PolicyTerm]:
    stack = [term]
    while stack:
        t = stack.pop()
        yield t
        if isinstance(t, Node):
            stack.extend(reversed(t.children))


def term_size(term: PolicyTerm) -> int:
    return sum(1 for _ in iter_nodes(term))


def operators_used(term: PolicyTerm) -> set[str]:
    return {t.operator.name for t in iter_nodes(term) if isinstance(t, Node)}


@dataclass(frozen=True, eq=False)
class ModelInstance:
    """Bundle of request space, atoms, atom semantics, operators, decisions.

    ``enumerate_requests`` is called lazily and cached; ``contains`` checks
    membership without materializing the space.  ``allows_derived`` admits
    operator nodes flagged as derived (built by the realizers) even though
    their names are not in ``operators``.
    """

    name: str
    decision_set: DecisionSet
    atoms: frozenset[tuple[str, ...]]
    atom_semantics: Callable[[tuple[str, ...], Hashable], Decision]
    operators: frozenset[str]
    request_leq: Callable[[Hashable, Hashable], bool]
    enumerate_requests: Callable[[], Sequence[Hashable]] = field(repr=False)
    contains: Callable[[Hashable], bool] = field(repr=False)
    allows_derived: bool = False

    def __post_init__(self):
        for name in self.operators:
            builtin_operator(name, self.decision_set)

    @cached_property
    def request_space(self) -> tuple:
        return tuple(self.enumerate_requests())

    def operator(self, name: str) -> OperatorTable:
        if name not in self.operators:
            raise UnknownOperatorError(f"operator {name} not in model {self.name}")
        return builtin_operator(name, self.decision_set)

    def permits(self, table: OperatorTable) -> bool:
        if table.decision_set != self.decision_set:
            return False
        if table.derived:
            return self.allows_derived
        return table.name in self.operators


def validate(model: ModelInstance, term: PolicyTerm) -> list[str]:
    """Diagnostics explaining why ``term`` is not a policy of ``model``.

    An empty list means the term is admissible.
    """
    problems = []
    for t in iter_nodes(term):
        if isinstance(t, Atom):
            if t.id not in model.atoms:
                problems.append(f"unknown atom ({' '.join(t.id)})")
        elif isinstance(t, Node):
            opr = t.operator
            if not model.permits(opr):
                if opr.decision_set != model.decision_set:
                    problems.append(
                        f"operator {opr.name} is over the {opr.decision_set.name}-valued set, "
                        f"model uses {model.decision_set.name}"
                    )
                else:
                    problems.append(f"operator {opr.name} not in model")
            if len(t.children) != opr.arity:
                problems.append(
                    f"arity mismatch: {opr.name} expects {opr.arity} children, got {len(t.children)}"
                )
        else:
            problems.append(f"not a policy term: {t!r}")
    return problems


def check_request(model: ModelInstance, request) -> None:
    if not model.contains(request):
        raise ValidationError(f"request {format_request(request)} is outside the request space")


def evaluate(model: ModelInstance, term: PolicyTerm, request) -> Decision:
    """Evaluate ``term`` on ``request``, validating both first."""
    problems = validate(model, term)
    if problems:
        raise ValidationError(problems)
    check_request(model, request)
    return evaluate_unchecked(model, term, request)


def evaluate_unchecked(model: ModelInstance, term: PolicyTerm, request) -> Decision:
    """Post-order evaluation with an explicit stack; no validation."""
    results: list[Decision] = []
    stack: list[tuple[PolicyTerm, bool]] = [(term, False)]
    sem = model.atom_semantics
    while stack:
        t, expanded = stack.pop()
        if isinstance(t, Atom):
            results.append(sem(t.id, request))
        elif expanded or not t.children:
            k = len(t.children)
            args = tuple(results[len(results) - k:]) if k else ()
            if k:
                del results[-k:]
            results.append(_apply_unchecked(t.operator, args))
        else:
            stack.append((t, True))
            for child in reversed(t.children):
                stack.append((child, False))
    return results[0]


def tabulate_term(model: ModelInstance, term: PolicyTerm) -> tuple[Decision, ...]:
    """Decisions of a validated term over the full request space."""
    problems = validate(model, term)
    if problems:
        raise ValidationError(problems)
    return tuple(evaluate_unchecked(model, term, q) for q in model.request_space)


def format_request(request) -> str:
    if isinstance(request, frozenset):
        return "{" + ", ".join(f"({n},{v})" for n, v in sorted(request)) + "}"
    return repr(tuple(request)) if isinstance(request, tuple) else str(request)
