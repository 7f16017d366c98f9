"""Attribute vocabularies, request spaces, and the inclusion order on requests.

ABAC requests are ``frozenset`` objects of ``(name, value)`` pairs; access
matrix requests are :class:`Triple` values.  Every enumeration is in
canonical order: by size, then lexicographically by sorted pairs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations, product
from math import prod
from typing import Iterable, NamedTuple, Sequence

from acframe.errors import CapacityError, DomainError

#: Default cap on the number of requests any enumeration may produce.
REQUEST_BOUND = 2**20

IDENTIFIER = re.compile(r"^[A-Za-z0-9_.\-]+$")

Pair = tuple[str, str]
PairSet = frozenset


class Triple(NamedTuple):
    s: str
    o: str
    x: str


def check_identifier(text: str) -> str:
    if not isinstance(text, str) or not IDENTIFIER.match(text):
        raise DomainError(f"invalid identifier {text!r}")
    return text


@dataclass(frozen=True)
class AttributeVocabulary:
    attributes: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        names = [n for n, _ in self.attributes]
        if len(set(names)) != len(names):
            raise DomainError("attribute names must be unique")
        normalized = []
        for name, values in self.attributes:
            check_identifier(name)
            values = tuple(sorted(set(check_identifier(v) for v in values)))
            if not values:
                raise DomainError(f"attribute {name} has an empty domain")
            normalized.append((name, values))
        object.__setattr__(self, "attributes", tuple(sorted(normalized)))

    @classmethod
    def from_dict(cls, mapping: dict[str, Iterable[str]]) -> "AttributeVocabulary":
        return cls(tuple((k, tuple(v)) for k, v in mapping.items()))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.attributes)

    def domain(self, name: str) -> tuple[str, ...]:
        for n, values in self.attributes:
            if n == name:
                return values
        raise DomainError(f"unknown attribute {name!r}")

    def pairs(self) -> tuple[Pair, ...]:
        """All well-formed pairs, sorted."""
        return tuple((n, v) for n, values in self.attributes for v in values)

    def is_well_formed(self, pair: Pair) -> bool:
        name, value = pair
        return any(n == name and value in values for n, values in self.attributes)


def request_key(q) -> tuple:
    """Canonical sort key: size first, then sorted contents."""
    if isinstance(q, Triple):
        return (3, tuple(q))
    return (len(q), tuple(sorted(q)))


def sanitize(vocab: AttributeVocabulary, raw: Iterable[Sequence[str]]) -> frozenset:
    """Drop ill-formed pairs and collapse duplicates."""
    pairs = set()
    for item in raw:
        if len(item) != 2:
            continue
        pair = (str(item[0]), str(item[1]))
        if vocab.is_well_formed(pair):
            pairs.add(pair)
    return frozenset(pairs)


def is_single_valued(q: frozenset) -> bool:
    names = [n for n, _ in q]
    return len(names) == len(set(names))


def count_multi(vocab: AttributeVocabulary) -> int:
    return 2 ** len(vocab.pairs())


def count_single(vocab: AttributeVocabulary) -> int:
    return prod(len(values) + 1 for _, values in vocab.attributes)


def enumerate_multi(vocab: AttributeVocabulary, bound: int = REQUEST_BOUND) -> tuple[frozenset, ...]:
    """Every subset of the well-formed pairs."""
    n = count_multi(vocab)
    if n > bound:
        raise CapacityError(f"multi-valued request space has {n} requests", bound)
    pairs = vocab.pairs()
    return tuple(
        frozenset(c) for size in range(len(pairs) + 1) for c in combinations(pairs, size)
    )


def enumerate_single(vocab: AttributeVocabulary, bound: int = REQUEST_BOUND) -> tuple[frozenset, ...]:
    """Every request carrying at most one value per attribute."""
    n = count_single(vocab)
    if n > bound:
        raise CapacityError(f"single-valued request space has {n} requests", bound)
    choices = [[None, *((name, v) for v in values)] for name, values in vocab.attributes]
    space = (frozenset(p for p in combo if p is not None) for combo in product(*choices))
    return tuple(sorted(space, key=request_key))


def request_leq(q, q2) -> bool:
    """Information order: subset inclusion on pair sets, identity on triples."""
    if isinstance(q, Triple) and isinstance(q2, Triple):
        return q == q2
    if isinstance(q, frozenset) and isinstance(q2, frozenset):
        return q <= q2
    raise DomainError("cannot compare requests of different kinds")


def topo_order(requests: Iterable[frozenset]) -> list[frozenset]:
    """Linear extension of inclusion starting from the empty request.

    Sorting by size guarantees ``q_j`` is never a subset of ``q_i`` for
    ``i < j`` unless equal, since proper subsets are strictly smaller.
    """
    reqs = set(requests)
    if frozenset() not in reqs:
        raise DomainError("request set must contain the empty request")
    return sorted(reqs, key=request_key)
