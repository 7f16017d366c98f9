"""Prefix S-expression syntax for policy terms.

::

    term  := "(" op term* ")"
           | "(" "atom" id id? id? ")"
           | "(" "oplus" "(" "table" decision+ ")" term* ")"

``oplus`` carries the selector operator built by the monotone realizer: the
``table`` lists the decision for the empty request followed by one decision
per child.
"""

from __future__ import annotations

import re
from typing import Iterator

from acframe.decisions import THREE, Decision, DecisionSet, builtin_operator, operator_names
from acframe.errors import DomainError, PolicySyntaxError, UnknownOperatorError
from acframe.policy import Atom, Node, PolicyTerm

_TOKEN = re.compile(r"\s+|(?P<open>\()|(?P<close>\))|(?P<id>[A-Za-z0-9_.\-]+)|(?P<bad>.)")


def _tokens(text: str) -> Iterator[tuple[str, str, int, int]]:
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        col = m.start() - line_start + 1
        kind = m.lastgroup
        if kind is None:
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = m.start() + chunk.rfind("\n") + 1
            continue
        if kind == "bad":
            raise PolicySyntaxError(f"unexpected character {m.group()!r}", line, col)
        yield kind, m.group(), line, col
    yield "eof", "", line, len(text) - line_start + 1


class _Parser:
    def __init__(self, text: str, dset: DecisionSet):
        self.toks = list(_tokens(text))
        self.pos = 0
        self.dset = dset

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind: str | None = None):
        tok = self.toks[self.pos]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            expected = {"open": "'('", "close": "')' (unbalanced parentheses?)", "id": "identifier"}
            raise PolicySyntaxError(f"expected {expected.get(kind, kind)}, found {what}", tok[2], tok[3])
        self.pos += 1
        return tok

    def term(self) -> PolicyTerm:
        # Explicit stack: compiled policies nest far deeper than the recursion limit.
        frames: list[list] = []
        while True:
            self.take("open")
            _, head, line, col = self.take("id")
            head = head.lower()
            if head == "atom":
                value: PolicyTerm | None = self.atom(line, col)
            else:
                frames.append(self.open_frame(head, line, col))
                value = None
            while True:
                if value is not None:
                    if not frames:
                        return value
                    frames[-1][1].append(value)
                    value = None
                if self.peek()[0] == "open":
                    break
                self.take("close")
                value = self.close_frame(frames.pop())

    def atom(self, line, col) -> Atom:
        ids = []
        while self.peek()[0] == "id":
            ids.append(self.take("id")[1])
        if not 1 <= len(ids) <= 3:
            raise PolicySyntaxError("atom takes one to three identifiers", line, col)
        self.take("close")
        return Atom(tuple(ids))

    def open_frame(self, head, line, col) -> list:
        if head == "oplus":
            self.take("open")
            _, word, l2, c2 = self.take("id")
            if word.lower() != "table":
                raise PolicySyntaxError("oplus must start with a (table ...) form", l2, c2)
            values = []
            while self.peek()[0] == "id":
                _, text, l3, c3 = self.take("id")
                try:
                    values.append(Decision.parse(text))
                except DomainError as exc:
                    raise PolicySyntaxError(str(exc), l3, c3) from None
            self.take("close")
            return [values, [], line, col]
        if head not in operator_names(self.dset):
            raise PolicySyntaxError(f"unknown operator {head!r}", line, col)
        try:
            table = builtin_operator(head, self.dset)
        except UnknownOperatorError as exc:
            raise PolicySyntaxError(str(exc), line, col) from None
        return [table, [], line, col]

    def close_frame(self, frame) -> Node:
        head, children, line, col = frame
        if isinstance(head, list):
            from acframe.analysis import oplus_from_values

            if len(head) != len(children) + 1:
                raise PolicySyntaxError(
                    f"oplus table needs {len(children) + 1} decisions, got {len(head)}", line, col
                )
            return Node(oplus_from_values(head, self.dset), tuple(children))
        return Node(head, tuple(children))


def parse(text: str, dset: DecisionSet = THREE) -> PolicyTerm:
    """Parse one policy term; operators resolve against ``dset``."""
    p = _Parser(text, dset)
    term = p.term()
    tok = p.peek()
    if tok[0] != "eof":
        raise PolicySyntaxError(f"trailing input {tok[1]!r}", tok[2], tok[3])
    return term


def render(term: PolicyTerm) -> str:
    """Canonical text: single spaces, lowercase operator names."""
    out: list[str] = []
    stack: list[object] = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, str):
            out.append(t)
        elif isinstance(t, Atom):
            out.append("(atom " + " ".join(t.id) + ")")
        elif isinstance(t, Node):
            opr = t.operator
            if opr.derived and opr.name != "oplus":
                raise DomainError(f"derived operator {opr.name} has no textual form")
            head = opr.name
            if opr.name == "oplus":
                head = "oplus (table " + " ".join(d.value for d in opr.params) + ")"
            out.append("(" + head)
            stack.append(")")
            for child in reversed(t.children):
                stack.append(child)
                stack.append(" ")
        else:
            raise DomainError(f"not a policy term: {t!r}")
    return "".join(out)
