"""Ideal policies, monotonicity checking, and constructive realizers.

Each realizer is checked per instance rather than trusted: callers (the CLI
and the test suite) compare the produced term against the ideal policy on
every request with :func:`equivalent`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Optional, Sequence, Union

from acframe.decisions import (
    ALLOW,
    DENY,
    NA,
    THREE,
    TWO,
    Decision,
    DecisionSet,
    OperatorTable,
    _apply_unchecked,
)
from acframe.errors import CapacityError, DomainError, NonMonotoneIdealError
from acframe.models import AmUniverse, am_model, make_abac_model, tq_term
from acframe.policy import (
    Atom,
    ModelInstance,
    Node,
    PolicyTerm,
    const,
    evaluate_unchecked,
    format_request,
    op,
    tabulate_term,
)
from acframe.vocab import AttributeVocabulary, topo_order

#: Cap on request pairs an exhaustive monotonicity scan will visit.
PAIR_BOUND = 2**22


@dataclass(frozen=True)
class IdealPolicy:
    """Extensional policy: one decision per request, listed in parallel."""

    requests: tuple
    decisions: tuple[Decision, ...]

    def __post_init__(self):
        object.__setattr__(self, "requests", tuple(self.requests))
        object.__setattr__(self, "decisions", tuple(Decision(d) for d in self.decisions))
        if len(self.requests) != len(self.decisions):
            raise DomainError("ideal policy needs exactly one decision per request")
        if len(set(self.requests)) != len(self.requests):
            raise DomainError("ideal policy lists a request twice")
        object.__setattr__(self, "_index", dict(zip(self.requests, self.decisions)))

    @classmethod
    def from_function(cls, requests: Iterable, fn: Callable) -> "IdealPolicy":
        requests = tuple(requests)
        return cls(requests, tuple(fn(q) for q in requests))

    @classmethod
    def of_term(cls, model: ModelInstance, term: PolicyTerm) -> "IdealPolicy":
        return cls(model.request_space, tabulate_term(model, term))

    def __call__(self, q) -> Decision:
        try:
            return self._index[q]
        except KeyError:
            raise DomainError(f"ideal policy has no decision for {format_request(q)}") from None

    def covers(self, model: ModelInstance) -> None:
        space = model.request_space
        missing = [q for q in space if q not in self._index]
        extra = [q for q in self.requests if not model.contains(q)]
        if missing or extra:
            parts = []
            if missing:
                parts.append("missing " + ", ".join(format_request(q) for q in missing[:10]))
            if extra:
                parts.append("outside space " + ", ".join(format_request(q) for q in extra[:10]))
            raise DomainError("ideal policy does not match the request space: " + "; ".join(parts))


@dataclass(frozen=True)
class MonotonicityReport:
    status: str
    witness: Optional[tuple] = None

    @property
    def monotone(self) -> bool:
        return self.status == "monotone"

    def __post_init__(self):
        if (self.status == "violated") != (self.witness is not None):
            raise DomainError("a witness is present exactly when monotonicity is violated")


@dataclass(frozen=True)
class EquivalenceWitness:
    request: object
    left: Decision
    right: Decision


def _scan(model: ModelInstance, decisions: Sequence[Decision], pair_bound: int) -> MonotonicityReport:
    space = model.request_space
    if len(space) ** 2 > pair_bound:
        raise CapacityError(f"monotonicity scan over {len(space)} requests", pair_bound)
    dset, rleq = model.decision_set, model.request_leq
    for i, q in enumerate(space):
        d = decisions[i]
        for j, q2 in enumerate(space):
            if rleq(q, q2) and not dset.leq(d, decisions[j]):
                return MonotonicityReport("violated", (q, q2, d, decisions[j]))
    return MonotonicityReport("monotone")


def check_monotone_policy(
    model: ModelInstance, term: PolicyTerm, pair_bound: int = PAIR_BOUND
) -> MonotonicityReport:
    """Exhaustively test ``q <= q2 => P(q) <= P(q2)`` over the request space."""
    return _scan(model, tabulate_term(model, term), pair_bound)


def is_ideal_monotone(
    model: ModelInstance, ideal: IdealPolicy, pair_bound: int = PAIR_BOUND
) -> MonotonicityReport:
    ideal.covers(model)
    return _scan(model, [ideal(q) for q in model.request_space], pair_bound)


def random_term(model: ModelInstance, seed: int, max_size: int) -> PolicyTerm:
    """Seeded random term with at most ``max_size`` nodes over the model's language."""
    if max_size < 1:
        raise DomainError("max_size must be at least 1")
    rng = random.Random(seed)
    tables = [model.operator(n) for n in sorted(model.operators)]
    leaves: list[PolicyTerm] = [Atom(a) for a in sorted(model.atoms)]
    leaves += [Node(t) for t in tables if t.arity == 0]
    inner = [t for t in tables if t.arity > 0]
    if not leaves:
        raise DomainError(f"model {model.name} has no atoms or constants")

    def build(budget: int) -> PolicyTerm:
        usable = [t for t in inner if t.arity < budget]
        if not usable or rng.random() < 1 / budget:
            return rng.choice(leaves)
        table = rng.choice(usable)
        # Split the remaining budget so every child gets at least one node.
        rest = budget - 1 - table.arity
        cuts = sorted(rng.randint(0, rest) for _ in range(table.arity - 1))
        shares = [b - a for a, b in zip([0, *cuts], [*cuts, rest])]
        return Node(table, tuple(build(1 + s) for s in shares))

    return build(rng.randint(1, max_size))


def random_ideal(model: ModelInstance, seed: int) -> IdealPolicy:
    rng = random.Random(seed)
    universe = model.decision_set.universe
    return IdealPolicy.from_function(model.request_space, lambda q: rng.choice(universe))


def random_monotone_ideal(model: ModelInstance, seed: int) -> IdealPolicy:
    """Seeded monotone ideal policy over a two- or three-valued model.

    Requests are visited along the model's enumeration (a linear extension of
    the request order).  A request below which some conclusive decision has
    been fixed inherits it; otherwise it draws at random, and a conclusive
    draw is kept only if no request lies above both it and an earlier request
    holding the opposite conclusive decision.
    """
    if model.decision_set not in (TWO, THREE):
        raise DomainError("monotone sampling supports the two- and three-valued sets only")
    rng = random.Random(seed)
    space = model.request_space
    rleq = model.request_leq
    ups = [frozenset(j for j, q2 in enumerate(space) if rleq(q, q2)) for q in space]
    universe = model.decision_set.universe
    decided: list[Decision] = []
    for i in range(len(space)):
        forced = {decided[j] for j in range(i) if i in ups[j] and decided[j] != NA}
        if len(forced) > 1:
            raise AssertionError("request enumeration is not a linear extension")
        if forced:
            decided.append(forced.pop())
            continue
        d = rng.choice(universe)
        if d != NA and any(
            decided[j] not in (NA, d) and ups[j] & ups[i] for j in range(i)
        ):
            d = NA
        decided.append(d)
    ideal = IdealPolicy(space, decided)
    report = is_ideal_monotone(model, ideal)
    if not report.monotone:
        raise AssertionError(f"sampled ideal is not monotone: {report.witness}")
    return ideal


def _or_chain(terms: Sequence[PolicyTerm], dset: DecisionSet) -> PolicyTerm:
    if not terms:
        return const(DENY, dset)
    acc = terms[0]
    for t in terms[1:]:
        acc = op("or", dset, acc, t)
    return acc


def realize_am(u: AmUniverse, ideal: IdealPolicy) -> PolicyTerm:
    """Disjunction of the allowed triples, or the deny constant if none."""
    model = am_model(u)
    ideal.covers(model)
    allowed = []
    for q in model.request_space:
        d = ideal(q)
        if d not in TWO:
            raise DomainError(f"access matrix ideals are two-valued, got {d} at {q}")
        if d == ALLOW:
            allowed.append(Atom(tuple(q)))
    return _or_chain(allowed, TWO)


def oplus_from_values(values: Sequence[Decision], dset: DecisionSet = THREE) -> OperatorTable:
    """Selector operator over ``len(values) - 1`` arguments.

    ``values[0]`` is returned when no argument is ``allow``; otherwise
    ``values[m]`` for the largest ``m`` (1-based) whose argument is ``allow``.
    """
    values = tuple(Decision(v) for v in values)
    if not values:
        raise DomainError("oplus needs at least the empty-request decision")
    for v in values:
        dset.check(v)
    n = len(values) - 1

    def select(args):
        for m in range(len(args), 0, -1):
            if args[m - 1] == ALLOW:
                return values[m]
        return values[0]

    mapping = None
    if n <= 3:
        mapping = {t: select(t) for t in product(dset.universe, repeat=n)}
    return OperatorTable("oplus", n, dset, mapping, rule=select, params=values, derived=True)


def oplus_operator(ideal: IdealPolicy, topo: Sequence) -> OperatorTable:
    """Selector operator for ``ideal`` along the linear extension ``topo``."""
    topo = list(topo)
    if not topo or topo[0] != frozenset():
        raise DomainError("linear extension must start with the empty request")
    return oplus_from_values([ideal(q) for q in topo])


def realize_monotone(vocab: AttributeVocabulary, ideal: IdealPolicy) -> PolicyTerm:
    """Realize a monotone ideal over single-valued requests.

    Returns ``oplus(t_q1, ..., t_qn)`` along the topological order of the
    request space.  Raises :class:`NonMonotoneIdealError` with the first
    violating pair otherwise.
    """
    model = make_abac_model(vocab, "abacm")
    report = is_ideal_monotone(model, ideal)
    if not report.monotone:
        raise NonMonotoneIdealError(report)
    topo = topo_order(model.request_space)
    return Node(oplus_operator(ideal, topo), tuple(tq_term(q) for q in topo[1:]))


def _not(t: PolicyTerm) -> PolicyTerm:
    # not is an involution on three values, so double negations cancel.
    if isinstance(t, Node) and t.operator.name == "not":
        return t.children[0]
    return op("not", THREE, t)


def _and(terms: Sequence[PolicyTerm]) -> PolicyTerm:
    """Kleene conjunction via De Morgan: ``not(or(not a, not b, ...))``."""
    if not terms:
        return const(ALLOW, THREE)
    if len(terms) == 1:
        return terms[0]
    return _not(_or_chain([_not(t) for t in terms], THREE))


def delta_guard(d: Decision) -> Callable[[PolicyTerm], PolicyTerm]:
    """Two-valued indicator of ``d`` over the basis ``{not, dbd, or}``."""
    d = THREE.check(Decision(d))

    def dbd(t):
        return op("dbd", THREE, t)

    if d == ALLOW:
        return lambda x: _and([dbd(x), _not(dbd(_not(x)))])
    if d == DENY:
        return lambda x: dbd(_not(x))
    return lambda x: _not(_or_chain([dbd(x), dbd(_not(x))], THREE))


def exact_match_guard(vocab: AttributeVocabulary, q: frozenset) -> PolicyTerm:
    """Term that is ``allow`` on exactly ``q`` and ``deny`` elsewhere in the multi-valued space."""
    present = {n for n, _ in q}
    guards = []
    for name, values in vocab.attributes:
        if name in present:
            for v in values:
                pair = (name, v)
                guards.append(delta_guard(ALLOW if pair in q else DENY)(Atom(pair)))
        else:
            guards.append(delta_guard(NA)(Atom((name, values[0]))))
    return _and(guards)


def compile_complete(vocab: AttributeVocabulary, ideal: IdealPolicy) -> PolicyTerm:
    """Realize any ideal over multi-valued requests with ``{not, dbd, or}`` and constants."""
    model = make_abac_model(vocab, "abacc")
    ideal.covers(model)
    disjuncts = []
    for q in model.request_space:
        d = ideal(q)
        if d == ALLOW:
            disjuncts.append(exact_match_guard(vocab, q))
        elif d == NA:
            disjuncts.append(_and([exact_match_guard(vocab, q), const(NA, THREE)]))
    return _or_chain(disjuncts, THREE)


Semantics = Union[PolicyTerm, IdealPolicy]


def _decisions(model: ModelInstance, x: Semantics) -> Sequence[Decision]:
    if isinstance(x, IdealPolicy):
        x.covers(model)
        return [x(q) for q in model.request_space]
    return tabulate_term(model, x)


def equivalent(model: ModelInstance, a: Semantics, b: Semantics) -> EquivalenceWitness | None:
    """First request where ``a`` and ``b`` disagree, or ``None`` if none does."""
    for q, da, db in zip(model.request_space, _decisions(model, a), _decisions(model, b)):
        if da != db:
            return EquivalenceWitness(q, da, db)
    return None


def _variables(k: int) -> list[Atom]:
    return [Atom((f"x{i + 1}",)) for i in range(k)]


def term_function(term: PolicyTerm, dset: DecisionSet, arity: int) -> dict:
    """Table induced by a term over formal variables ``x1..xk``."""
    names = {v.id: i for i, v in enumerate(_variables(arity))}
    model = ModelInstance(
        name="formal",
        decision_set=dset,
        atoms=frozenset(names),
        atom_semantics=lambda a, t: t[names[a]],
        operators=frozenset(),
        request_leq=lambda x, y: x == y,
        enumerate_requests=lambda: tuple(product(dset.universe, repeat=arity)),
        contains=lambda t: True,
        allows_derived=True,
    )
    return {t: evaluate_unchecked(model, term, t) for t in model.request_space}


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def bounded_synthesis(
    operators: Iterable[OperatorTable], target: OperatorTable, max_size: int
) -> PolicyTerm | None:
    """Smallest term over ``operators`` and variables ``x1..xk`` computing ``target``.

    Size counts operator nodes (constants included, variables free).  Terms
    are enumerated bottom-up by size, keeping the first term found for each
    distinct induced table, so the result is deterministic.  Returns ``None``
    when nothing of size ``<= max_size`` matches.
    """
    if target.arity > 2:
        raise DomainError("synthesis targets are limited to arity 2")
    dset = target.decision_set
    ops = sorted(set(operators), key=lambda t: (t.arity, t.name))
    for t in ops:
        if t.decision_set != dset:
            raise DomainError(f"operator {t.name} is not over the {dset.name}-valued set")
    inputs = list(product(dset.universe, repeat=target.arity))
    goal = tuple(_apply_unchecked(target, t) for t in inputs)
    seen: dict[tuple, PolicyTerm] = {}
    levels: list[list[tuple[tuple, PolicyTerm]]] = []

    def record(fn, term, level):
        if fn not in seen:
            seen[fn] = term
            level.append((fn, term))

    level0: list = []
    for i, v in enumerate(_variables(target.arity)):
        record(tuple(t[i] for t in inputs), v, level0)
    levels.append(level0)
    if goal in seen:
        return seen[goal]
    for size in range(1, max_size + 1):
        level: list = []
        for table in ops:
            for shares in _compositions(size - 1, table.arity):
                for combo in product(*(levels[s] for s in shares)):
                    fn = tuple(
                        _apply_unchecked(table, tuple(c[0][k] for c in combo))
                        for k in range(len(inputs))
                    )
                    record(fn, Node(table, tuple(c[1] for c in combo)), level)
        levels.append(level)
        if goal in seen:
            return seen[goal]
    return None


def section(table: OperatorTable, position: int, value: Decision) -> OperatorTable:
    """Unary operator obtained by fixing one argument of a binary operator."""
    if table.arity != 2 or position not in (0, 1):
        raise DomainError("sections are taken of binary operators at position 0 or 1")
    dset = table.decision_set

    def fn(d):
        args = (value, d) if position == 0 else (d, value)
        return _apply_unchecked(table, args)

    mapping = {(d,): fn(d) for d in dset.universe}
    return OperatorTable(
        f"{table.name}@{position}={value.value}", 1, dset, mapping, params=(position, value), derived=True
    )
