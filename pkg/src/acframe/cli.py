"""Command-line front end.

Exit status: 0 on success (monotone, equivalent), 1 when an analysis comes
back negative (violation, witness, rejected ideal), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import product
from pathlib import Path

from acframe import analysis
from acframe.decisions import DECISION_SETS, Decision, builtin_operator, operator_names
from acframe.dsl import parse, render
from acframe.errors import AcframeError, NonMonotoneIdealError, ValidationError
from acframe.io import (
    ideal_from_json,
    read_json,
    read_text,
    request_from_json,
    request_to_json,
    test_atoms_from_json,
    universe_from_json,
    vocab_from_json,
)
from acframe.models import VARIANTS, am_model, make_abac_model, test_atom_model
from acframe.policy import check_request, evaluate, validate
from acframe.vocab import enumerate_multi, enumerate_single

MODELS = ("am", *VARIANTS, "test")
DISPLAY_ORDER = (Decision.ALLOW, Decision.DENY, Decision.NA, Decision.CONFLICT)


class UsageError(AcframeError):
    pass


class Context:
    """Model plus whatever vocabulary or universe it was built from."""

    def __init__(self, args):
        self.vocab = self.universe = None
        name = args.model
        if name == "am":
            if not args.am:
                raise UsageError("--model am needs --am UNIVERSE.json")
            self.universe = universe_from_json(read_json(args.am))
            self.model = am_model(self.universe)
        elif name == "test":
            if not args.atoms:
                raise UsageError("--model test needs --atoms TABLE.json")
            tables, requests = test_atoms_from_json(read_json(args.atoms))
            self.model = test_atom_model(tables, requests)
        else:
            if not args.vocab:
                raise UsageError(f"--model {name} needs --vocab VOCAB.json")
            self.vocab = vocab_from_json(read_json(args.vocab))
            self.model = make_abac_model(self.vocab, name)

    def policy(self, source: str):
        term = parse(read_text(source), self.model.decision_set)
        problems = validate(self.model, term)
        if problems:
            raise ValidationError(problems)
        return term

    def ideal(self, source: str):
        return ideal_from_json(read_json(source), self.model, self.vocab)

    def semantics(self, source: str):
        """A policy term or an ideal policy, told apart by the leading character."""
        text = source if source.lstrip().startswith(("(", "{")) else Path(source).read_text("utf-8")
        if text.lstrip().startswith("{"):
            return ideal_from_json(json.loads(text), self.model, self.vocab)
        return self.policy(text)


def _witness_json(report) -> str:
    lower, upper, d1, d2 = report.witness
    return json.dumps(
        {
            "lower": request_to_json(lower),
            "upper": request_to_json(upper),
            "lower_decision": d1.value,
            "upper_decision": d2.value,
        }
    )


def cmd_eval(args) -> int:
    ctx = Context(args)
    term = ctx.policy(args.policy)
    request = request_from_json(read_json(args.request), ctx.model, ctx.vocab)
    check_request(ctx.model, request)
    print(evaluate(ctx.model, term, request).value)
    return 0


def cmd_check_monotonic(args) -> int:
    ctx = Context(args)
    report = analysis.check_monotone_policy(ctx.model, ctx.policy(args.policy))
    if report.monotone:
        print("monotone")
        return 0
    print("violated")
    print(_witness_json(report))
    return 1


def _emit(term, args, ctx, ideal) -> int:
    witness = analysis.equivalent(ctx.model, term, ideal)
    if witness is not None:
        raise AssertionError(f"realized policy disagrees with the ideal at {witness.request}")
    text = render(term) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_realize(args) -> int:
    ctx = Context(args)
    ideal = ctx.ideal(args.ideal)
    if args.model == "am":
        term = analysis.realize_am(ctx.universe, ideal)
    elif args.model == "abacm":
        try:
            term = analysis.realize_monotone(ctx.vocab, ideal)
        except NonMonotoneIdealError as exc:
            print("rejected: ideal policy is not monotone", file=sys.stderr)
            print(_witness_json(exc.report))
            return 1
    else:
        raise UsageError("realize supports --model am or abacm; use compile for abacc")
    return _emit(term, args, ctx, ideal)


def cmd_compile(args) -> int:
    if args.model != "abacc":
        raise UsageError("compile targets --model abacc")
    ctx = Context(args)
    ideal = ctx.ideal(args.ideal)
    return _emit(analysis.compile_complete(ctx.vocab, ideal), args, ctx, ideal)


def cmd_equiv(args) -> int:
    ctx = Context(args)
    witness = analysis.equivalent(ctx.model, ctx.semantics(args.left), ctx.semantics(args.right))
    if witness is None:
        print("ok")
        return 0
    print("witness")
    print(
        json.dumps(
            {
                "request": request_to_json(witness.request),
                "left": witness.left.value,
                "right": witness.right.value,
            }
        )
    )
    return 1


def cmd_enumerate(args) -> int:
    if args.am:
        space = universe_from_json(read_json(args.am)).triples()
    elif args.vocab:
        vocab = vocab_from_json(read_json(args.vocab))
        space = enumerate_single(vocab) if args.single else enumerate_multi(vocab)
    else:
        raise UsageError("enumerate needs --vocab or --am")
    for q in space:
        print(json.dumps(request_to_json(q)))
    return 0


def format_table(table) -> list[str]:
    rows = [f"# {table.name}/{table.arity} over {table.decision_set.name}"]
    order = [d for d in DISPLAY_ORDER if d in table.decision_set]
    if table.arity == 0:
        rows.append(table().value)
        return rows
    for args in product(order, repeat=table.arity):
        rows.append("\t".join(a.value for a in args) + "\t" + table(*args).value)
    return rows


def cmd_ops(args) -> int:
    dset = DECISION_SETS[args.set]
    names = [args.name] if args.name else list(operator_names(dset))
    for i, name in enumerate(names):
        table = builtin_operator(name, dset)
        if i:
            print()
        print("\n".join(format_table(table)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="acframe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def model_args(p, models=MODELS):
        p.add_argument("--model", required=True, choices=models)
        p.add_argument("--vocab", help="attribute vocabulary JSON (ABAC models)")
        p.add_argument("--am", help="access matrix universe JSON")
        p.add_argument("--atoms", help="test-atom table JSON (--model test)")

    p = sub.add_parser("eval", help="evaluate a policy on one request")
    model_args(p)
    p.add_argument("--policy", required=True, help="policy DSL file or literal")
    p.add_argument("--request", required=True, help="request JSON file or literal")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check-monotonic", help="exhaustive monotonicity check")
    model_args(p)
    p.add_argument("--policy", required=True)
    p.set_defaults(func=cmd_check_monotonic)

    for name, func, hint in (
        ("realize", cmd_realize, "realize an ideal (am, abacm)"),
        ("compile", cmd_compile, "compile an arbitrary ideal (abacc)"),
    ):
        p = sub.add_parser(name, help=hint)
        model_args(p)
        p.add_argument("--ideal", required=True, help="ideal policy JSON")
        p.add_argument("--out", help="output policy file; stdout if omitted")
        p.set_defaults(func=func)

    p = sub.add_parser("equiv", help="compare two policies or ideals on every request")
    model_args(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("enumerate", help="list a request space in canonical order")
    p.add_argument("--vocab")
    p.add_argument("--am")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--single", action="store_true", help="at most one value per attribute")
    mode.add_argument("--multi", action="store_true", help="any subset of pairs (default)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("ops", help="print operator truth tables")
    p.add_argument("--set", default="three", choices=sorted(DECISION_SETS))
    p.add_argument("--name")
    p.set_defaults(func=cmd_ops)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AcframeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
