"""JSON file formats for vocabularies, requests, universes, ideals, and test atoms."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from acframe.analysis import IdealPolicy
from acframe.decisions import Decision
from acframe.errors import DomainError
from acframe.models import AmUniverse
from acframe.policy import ModelInstance
from acframe.vocab import AttributeVocabulary, Triple, sanitize


def read_json(source: str | Path) -> Any:
    """Load JSON from a file path, or parse ``source`` itself if it is not a file."""
    path = Path(source)
    try:
        is_file = path.is_file()
    except OSError:
        is_file = False
    text = path.read_text(encoding="utf-8") if is_file else str(source)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON in {source}: {exc}") from None


def read_text(source: str | Path) -> str:
    if str(source).lstrip().startswith("("):
        return str(source)
    return Path(source).read_text(encoding="utf-8")


def vocab_from_json(data: Any) -> AttributeVocabulary:
    try:
        attrs = data["attributes"]
        return AttributeVocabulary(tuple((a["name"], tuple(a["values"])) for a in attrs))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed vocabulary JSON: {exc!r}") from None


def vocab_to_json(vocab: AttributeVocabulary) -> dict:
    return {"attributes": [{"name": n, "values": list(v)} for n, v in vocab.attributes]}


def universe_from_json(data: Any) -> AmUniverse:
    try:
        return AmUniverse(tuple(data["subjects"]), tuple(data["objects"]), tuple(data["actions"]))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed access matrix universe JSON: {exc!r}") from None


def test_atoms_from_json(data: Any) -> tuple[dict, list | None]:
    """``{"atoms": {atom: {request: decision}}, "requests": [...]}``; requests optional."""
    try:
        tables = {
            str(a): {str(q): Decision.parse(d) for q, d in table.items()}
            for a, table in data["atoms"].items()
        }
    except (KeyError, TypeError, AttributeError) as exc:
        raise DomainError(f"malformed test atom JSON: {exc!r}") from None
    requests = data.get("requests")
    return tables, None if requests is None else [str(q) for q in requests]


test_atoms_from_json.__test__ = False


def request_from_json(data: Any, model: ModelInstance, vocab: AttributeVocabulary | None = None):
    """Decode a request for ``model``; ABAC pairs are sanitized first."""
    if model.name == "am":
        if isinstance(data, dict):
            try:
                return Triple(str(data["s"]), str(data["o"]), str(data["x"]))
            except KeyError as exc:
                raise DomainError(f"access matrix request missing {exc}") from None
        if isinstance(data, list) and len(data) == 3:
            return Triple(*map(str, data))
        raise DomainError("access matrix requests look like {\"s\": .., \"o\": .., \"x\": ..}")
    if model.name == "test":
        if not isinstance(data, str):
            raise DomainError("test-atom requests are plain strings")
        return data
    if not isinstance(data, list) or not all(isinstance(p, list) for p in data):
        raise DomainError("ABAC requests are lists of [name, value] pairs")
    return sanitize(vocab, data)


def request_to_json(q) -> Any:
    if isinstance(q, Triple):
        return {"s": q.s, "o": q.o, "x": q.x}
    if isinstance(q, frozenset):
        return [list(p) for p in sorted(q)]
    return q


def ideal_from_json(data: Any, model: ModelInstance, vocab: AttributeVocabulary | None = None) -> IdealPolicy:
    """Decode an ideal policy; it must cover the model's request space exactly."""
    try:
        entries = data["entries"]
        decoded = [
            (request_from_json(e["request"], model, vocab), Decision.parse(e["decision"]))
            for e in entries
        ]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed ideal policy JSON: {exc!r}") from None
    table: dict = {}
    for q, d in decoded:
        if q in table and table[q] != d:
            raise DomainError(f"ideal policy gives two decisions for {request_to_json(q)}")
        table[q] = d
    IdealPolicy(tuple(table), tuple(table.values())).covers(model)
    return IdealPolicy(model.request_space, [table[q] for q in model.request_space])


def ideal_to_json(ideal: IdealPolicy) -> dict:
    return {
        "entries": [
            {"request": request_to_json(q), "decision": d.value}
            for q, d in zip(ideal.requests, ideal.decisions)
        ]
    }
