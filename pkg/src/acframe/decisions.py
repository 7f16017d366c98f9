"""Finite decision sets, their information orders, and the operator algebra.

Decision universes are listed bottom-first: ``na`` leads, so lexicographic
enumeration of argument tuples visits less-informed tuples before
more-informed ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from acframe.errors import CapacityError, DomainError, UnknownOperatorError

#: Largest argument-tuple count an operator may be stored or enumerated with.
EXTENSIONAL_LIMIT = 3**8


class Decision(str, Enum):
    ALLOW = "allow"
    DENY = "deny"
    NA = "na"
    CONFLICT = "conflict"

    @classmethod
    def parse(cls, text: str) -> "Decision":
        """Accept canonical names plus the ``1``/``0`` aliases."""
        key = str(text).strip().lower()
        key = {"1": "allow", "0": "deny"}.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown decision {text!r}") from None

    def __str__(self) -> str:
        return self.value


ALLOW, DENY, NA, CONFLICT = Decision.ALLOW, Decision.DENY, Decision.NA, Decision.CONFLICT


@dataclass(frozen=True)
class DecisionSet:
    name: str
    universe: tuple[Decision, ...]
    order: frozenset[tuple[Decision, Decision]]

    def __contains__(self, d: object) -> bool:
        return d in self.universe

    def check(self, d: Decision) -> Decision:
        if d not in self.universe:
            raise DomainError(f"decision {d!s} is not in the {self.name}-valued set")
        return d

    def leq(self, d1: Decision, d2: Decision) -> bool:
        return (self.check(d1), self.check(d2)) in self.order

    def up_set(self, d: Decision) -> tuple[Decision, ...]:
        """Decisions at or above ``d``, in universe order."""
        return tuple(e for e in self.universe if (d, e) in self.order)

    def is_partial_order(self) -> bool:
        u = self.universe
        refl = all((x, x) in self.order for x in u)
        anti = all(x == y for (x, y) in self.order if (y, x) in self.order)
        trans = all(
            (x, z) in self.order
            for (x, y) in self.order
            for (y2, z) in self.order
            if y == y2
        )
        return refl and anti and trans


def _order(universe: Sequence[Decision], rel: Callable[[Decision, Decision], bool]):
    return frozenset((x, y) for x in universe for y in universe if rel(x, y))


TWO = DecisionSet("two", (ALLOW, DENY), _order((ALLOW, DENY), lambda x, y: x == y))
THREE = DecisionSet(
    "three", (NA, ALLOW, DENY), _order((NA, ALLOW, DENY), lambda x, y: x == y or x == NA)
)
FOUR = DecisionSet(
    "four",
    (NA, ALLOW, DENY, CONFLICT),
    _order((NA, ALLOW, DENY, CONFLICT), lambda x, y: x == NA or x == y or y == CONFLICT),
)

DECISION_SETS = {s.name: s for s in (TWO, THREE, FOUR)}


def leq(dset: DecisionSet, d1: Decision, d2: Decision) -> bool:
    return dset.leq(d1, d2)


@dataclass(frozen=True, eq=False)
class OperatorTable:
    """A named total function ``Dec^arity -> Dec``.

    Either ``mapping`` (extensional) or ``rule`` (computed) must be given;
    when both are present they are checked to agree on every tuple.
    Equality is by identity key ``(name, arity, decision set, params)``.
    """

    name: str
    arity: int
    decision_set: DecisionSet
    mapping: Mapping[tuple[Decision, ...], Decision] | None = None
    rule: Callable[[tuple[Decision, ...]], Decision] | None = field(default=None, repr=False)
    params: tuple = ()
    derived: bool = False

    def __post_init__(self):
        if self.arity < 0:
            raise DomainError("arity must be non-negative")
        if self.mapping is None and self.rule is None:
            raise DomainError(f"operator {self.name} has neither table nor rule")
        if self.mapping is not None:
            tuples = list(product(self.decision_set.universe, repeat=self.arity))
            if len(tuples) > EXTENSIONAL_LIMIT:
                raise CapacityError(f"extensional table for {self.name} too large", EXTENSIONAL_LIMIT)
            missing = [t for t in tuples if t not in self.mapping]
            if missing:
                raise DomainError(f"operator {self.name} undefined on {missing[0]}")
            for t in tuples:
                self.decision_set.check(self.mapping[t])
                if self.rule is not None and self.rule(t) != self.mapping[t]:
                    raise DomainError(f"operator {self.name}: table and rule disagree on {t}")
            object.__setattr__(self, "mapping", dict(self.mapping))

    @property
    def key(self):
        return (self.name, self.arity, self.decision_set.name, self.params)

    @property
    def extensional(self) -> bool:
        return self.mapping is not None

    def __eq__(self, other):
        return isinstance(other, OperatorTable) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __call__(self, *args: Decision) -> Decision:
        return apply(self, args)

    def tuples(self) -> Iterable[tuple[Decision, ...]]:
        n = len(self.decision_set.universe) ** self.arity
        if n > EXTENSIONAL_LIMIT:
            raise CapacityError(f"cannot enumerate {self.name} over {n} tuples", EXTENSIONAL_LIMIT)
        return product(self.decision_set.universe, repeat=self.arity)

    def table(self) -> dict[tuple[Decision, ...], Decision]:
        """Extensional view, materialized from the rule if necessary."""
        if self.mapping is not None:
            return dict(self.mapping)
        return {t: self.rule(t) for t in self.tuples()}


def apply(table: OperatorTable, args: Sequence[Decision]) -> Decision:
    args = tuple(args)
    if len(args) != table.arity:
        raise DomainError(f"{table.name} expects {table.arity} arguments, got {len(args)}")
    for a in args:
        table.decision_set.check(a)
    return _apply_unchecked(table, args)


def _apply_unchecked(table: OperatorTable, args: tuple[Decision, ...]) -> Decision:
    if table.mapping is not None:
        return table.mapping[args]
    return table.rule(args)


def tabulate(name: str, arity: int, dset: DecisionSet, fn: Callable, **kw) -> OperatorTable:
    mapping = {t: fn(*t) for t in product(dset.universe, repeat=arity)}
    return OperatorTable(name, arity, dset, mapping, **kw)


# Three-valued connectives.  Kleene and/or are the intersection operators;
# dov/aov are the union (XACML-style) combinators that skip na.

def _not(d):
    return {ALLOW: DENY, DENY: ALLOW}.get(d, NA)


def _dbd(d):
    return DENY if d == NA else d


def _and(a, b):
    if DENY in (a, b):
        return DENY
    return NA if NA in (a, b) else ALLOW


def _or(a, b):
    if ALLOW in (a, b):
        return ALLOW
    return NA if NA in (a, b) else DENY


def _dov(a, b):
    if DENY in (a, b):
        return DENY
    return ALLOW if ALLOW in (a, b) else NA


def _aov(a, b):
    if ALLOW in (a, b):
        return ALLOW
    return DENY if DENY in (a, b) else NA


def _tra(a, b):
    return b if a == ALLOW else NA


def _una(a, b):
    return a if a == b else NA


def _fst(a, b):
    return a if a != NA else b


_THREE_RULES: dict[str, tuple[int, Callable]] = {
    "not": (1, _not),
    "dbd": (1, _dbd),
    "and": (2, _and),
    "or": (2, _or),
    "dov": (2, _dov),
    "aov": (2, _aov),
    "tra": (2, _tra),
    "una": (2, _una),
    "fst": (2, _fst),
    "c1": (0, lambda: ALLOW),
    "c0": (0, lambda: DENY),
    "cna": (0, lambda: NA),
}

_FOUR_RULES: dict[str, tuple[int, Callable]] = {
    "res_allow": (1, lambda d: ALLOW if d == CONFLICT else d),
    "res_deny": (1, lambda d: DENY if d == CONFLICT else d),
    "c_conflict": (0, lambda: CONFLICT),
}

_TWO_RULES: dict[str, tuple[int, Callable]] = {
    "or": (2, lambda a, b: ALLOW if ALLOW in (a, b) else DENY),
    "c1": (0, lambda: ALLOW),
    "c0": (0, lambda: DENY),
}

THREE_OPERATORS = tuple(_THREE_RULES)
FOUR_OPERATORS = THREE_OPERATORS + tuple(_FOUR_RULES)
TWO_OPERATORS = tuple(_TWO_RULES)
CONSTANTS = {"c1": ALLOW, "c0": DENY, "cna": NA, "c_conflict": CONFLICT}

_CACHE: dict[tuple[str, str], OperatorTable] = {}


def builtin_operator(name: str, dset: DecisionSet) -> OperatorTable:
    """Look up a named operator for ``dset``.

    On the four-valued set the three-valued connectives are available through
    the conflict-absorbing lift, alongside the unary resolution operators.
    """
    key = (name, dset.name)
    if key in _CACHE:
        return _CACHE[key]
    if dset.name == "three" and name in _THREE_RULES:
        arity, fn = _THREE_RULES[name]
        op = tabulate(name, arity, THREE, fn)
    elif dset.name == "four" and name in _THREE_RULES:
        op = lift_absorbing(builtin_operator(name, THREE))
    elif dset.name == "four" and name in _FOUR_RULES:
        arity, fn = _FOUR_RULES[name]
        op = tabulate(name, arity, FOUR, fn)
    elif dset.name == "two" and name in _TWO_RULES:
        arity, fn = _TWO_RULES[name]
        op = tabulate(name, arity, TWO, fn)
    else:
        raise UnknownOperatorError(f"no operator {name!r} for the {dset.name}-valued set")
    _CACHE[key] = op
    return op


def operator_names(dset: DecisionSet) -> tuple[str, ...]:
    return {"two": TWO_OPERATORS, "three": THREE_OPERATORS, "four": FOUR_OPERATORS}[dset.name]


def lift_absorbing(table: OperatorTable) -> OperatorTable:
    """Extend a three-valued operator to four values with ``conflict`` absorbing."""
    if table.decision_set.name != "three":
        raise DomainError(f"can only lift three-valued operators, got {table.decision_set.name}")

    def lifted(args):
        if CONFLICT in args:
            return CONFLICT
        return _apply_unchecked(table, args)

    if len(FOUR.universe) ** table.arity <= EXTENSIONAL_LIMIT:
        mapping = {t: lifted(t) for t in product(FOUR.universe, repeat=table.arity)}
        return OperatorTable(table.name, table.arity, FOUR, mapping, params=table.params)
    return OperatorTable(table.name, table.arity, FOUR, rule=lifted, params=table.params)


def operator_monotone(
    table: OperatorTable, dset: DecisionSet | None = None
) -> tuple[tuple[Decision, ...], tuple[Decision, ...]] | None:
    """Return ``None`` if ``table`` is monotone w.r.t. ``dset``'s order.

    Otherwise return the first pair ``(t, t2)`` with ``t <= t2`` componentwise
    and ``table(t) </= table(t2)``, scanning ``t`` then ``t2`` lexicographically.
    """
    dset = dset or table.decision_set
    values = table.table() if table.extensional else None
    for t in table.tuples():
        out = values[t] if values is not None else table.rule(t)
        for t2 in product(*(dset.up_set(d) for d in t)):
            out2 = values[t2] if values is not None else table.rule(t2)
            if not dset.leq(out, out2):
                return t, t2
    return None
