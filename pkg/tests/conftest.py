import contextlib

import pytest

from acframe import AttributeVocabulary, Atom, Node
from acframe.decisions import NA

_ACCEPTANCE: list[tuple[str, bool]] = []


@pytest.fixture
def criterion():
    """Record an acceptance criterion outcome for the terminal summary."""

    @contextlib.contextmanager
    def run(label):
        ok = False
        try:
            yield
            ok = True
        finally:
            _ACCEPTANCE.append((label, ok))
            print(f"{'PASS' if ok else 'FAIL'}  {label}")

    return run


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")


def recursive_eval(model, term, q):
    """Second evaluator, written independently of the library's stack machine."""
    if isinstance(term, Atom):
        return model.atom_semantics(term.id, q)
    assert isinstance(term, Node)
    args = tuple(recursive_eval(model, c, q) for c in term.children)
    op = term.operator
    return op.mapping[args] if op.mapping is not None else op.rule(args)


def brute_subsets(pairs):
    """All subsets by bitmask, independent of the library enumerator."""
    pairs = list(pairs)
    return {frozenset(p for k, p in enumerate(pairs) if mask >> k & 1) for mask in range(2 ** len(pairs))}


def brute_single(pairs):
    return {q for q in brute_subsets(pairs) if len({n for n, _ in q}) == len(q)}


def leq3(x, y):
    return x == y or x == NA


def leq4(x, y):
    return x == NA or x == y or y == "conflict"


def brute_violations(requests, fn, dec_leq):
    """Every (q, q2) with q a subset of q2 and fn(q) not below fn(q2)."""
    return [
        (q, q2)
        for q in requests
        for q2 in requests
        if q <= q2 and not dec_leq(fn(q), fn(q2))
    ]


@pytest.fixture
def role_dept():
    return AttributeVocabulary.from_dict({"role": ["doc", "nurse"], "dept": ["cardio"]})


@pytest.fixture
def role_only():
    return AttributeVocabulary.from_dict({"role": ["doc", "nurse"]})


@pytest.fixture
def four_pairs():
    """|A(N)| = 4, so the multi-valued space has 16 requests."""
    return AttributeVocabulary.from_dict({"role": ["doc", "nurse"], "dept": ["cardio", "onco"]})

