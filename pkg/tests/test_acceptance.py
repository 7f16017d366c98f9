"""Acceptance gate: one PASS/FAIL line per criterion.

Every check compares library output against an oracle in this file or in
conftest (recursive evaluation, brute-force order checks), never against the
library's own analysis routines alone.
"""

import json
import os
import subprocess
import sys
from itertools import product

from acframe import AttributeVocabulary, Atom, evaluate, parse, render
from acframe.analysis import (
    IdealPolicy,
    check_monotone_policy,
    compile_complete,
    delta_guard,
    oplus_operator,
    random_ideal,
    random_monotone_ideal,
    random_term,
    realize_am,
    realize_monotone,
    term_function,
)
from acframe.decisions import ALLOW, DENY, FOUR, NA, THREE, builtin_operator, lift_absorbing
from acframe.errors import NonMonotoneIdealError
from acframe.io import ideal_to_json, vocab_to_json
from acframe.models import (
    AmUniverse,
    abac_atom_four,
    abac_atom_three,
    am_model,
    make_abac_model,
    test_atom_model,
)
from acframe.policy import iter_nodes, operators_used, term_size
from acframe.vocab import enumerate_multi, enumerate_single, topo_order
from conftest import brute_violations, leq3, leq4, recursive_eval
from test_decisions import BINARY, UNARY, golden_rows

ROLE_DEPT = AttributeVocabulary.from_dict({"role": ["doc", "nurse"], "dept": ["cardio"]})
FOUR_PAIRS = AttributeVocabulary.from_dict({"role": ["doc", "nurse"], "dept": ["cardio", "onco"]})


def oracle_table(model, term):
    return [recursive_eval(model, term, q) for q in model.request_space]


def test_01_operator_goldens(criterion):
    with criterion("01 operator goldens: 9x2 unary and 9x7 binary entries"):
        checked = 0
        for (d1, d2), unary, binary in golden_rows():
            for name, want in zip(UNARY, unary):
                assert builtin_operator(name, THREE)(d1) == want, (name, d1)
                checked += 1
            for name, want in zip(BINARY, binary):
                assert builtin_operator(name, THREE)(d1, d2) == want, (name, d1, d2)
                checked += 1
        assert checked == 9 * 2 + 9 * 7


def test_02_policy_tree_example(criterion):
    with criterion("02 dbd(dov(A1,A2)) -> allow, dbd(and(A1,A2)) -> deny"):
        model = test_atom_model({"A1": {"q": ALLOW}, "A2": {"q": NA}})
        p1 = parse("(dbd (dov (atom A1) (atom A2)))")
        p2 = parse("(dbd (and (atom A1) (atom A2)))")
        assert recursive_eval(model, p1, "q") == ALLOW
        assert recursive_eval(model, p2, "q") == DENY
        assert (evaluate(model, p1, "q"), evaluate(model, p2, "q")) == (ALLOW, DENY)


def test_03_atom_monotonicity_single_valued(criterion):
    with criterion("03 three-valued atoms monotone over single-valued requests (|Q1| = 24)"):
        vocab = AttributeVocabulary.from_dict({"a": ["x"], "b": ["x", "y"], "c": ["x", "y", "z"]})
        requests = enumerate_single(vocab)
        assert len(vocab.attributes) >= 3 and len(requests) >= 24
        violations = 0
        for atom in vocab.pairs():
            violations += len(brute_violations(requests, lambda q: abac_atom_three(atom, q), leq3))
        assert violations == 0


def test_04_random_abacm_terms_monotone(criterion):
    with criterion("04 1000 random abacm terms (size <= 15) all monotone"):
        model = make_abac_model(ROLE_DEPT, "abacm")
        for seed in range(1000):
            term = random_term(model, seed, 15)
            assert term_size(term) <= 15
            table = dict(zip(model.request_space, oracle_table(model, term)))
            assert not brute_violations(model.request_space, table.__getitem__, leq3), seed
            assert check_monotone_policy(model, term).monotone, seed


def test_05_monotone_ideals_realized(criterion):
    with criterion("05 100 monotone ideals realized exactly; non-monotone ideal rejected"):
        vocabs = [
            ROLE_DEPT,                                                           # 6
            AttributeVocabulary.from_dict({"a": ["x"], "b": ["x"], "c": ["x"]}),  # 8
            AttributeVocabulary.from_dict({"a": ["x", "y"], "b": ["x", "y"]}),    # 9
            AttributeVocabulary.from_dict({"a": ["x", "y"], "b": ["x", "y", "z"]}),  # 12
        ]
        for seed in range(100):
            vocab = vocabs[seed % len(vocabs)]
            model = make_abac_model(vocab, "abacm")
            assert 6 <= len(model.request_space) <= 12
            ideal = random_monotone_ideal(model, seed)
            assert not brute_violations(model.request_space, ideal, leq3)
            term = realize_monotone(vocab, ideal)
            got = oracle_table(model, term)
            assert got == [ideal(q) for q in model.request_space], seed
            assert not brute_violations(model.request_space, dict(zip(model.request_space, got)).__getitem__, leq3)
            assert check_monotone_policy(model, term).monotone

        vocab = AttributeVocabulary.from_dict({"a1": ["v1"], "a2": ["v2"]})
        model = make_abac_model(vocab, "abacm")
        q1, q2 = frozenset({("a1", "v1")}), frozenset({("a1", "v1"), ("a2", "v2")})
        ideal = IdealPolicy.from_function(model.request_space, lambda q: ALLOW if q == q1 else NA)
        try:
            realize_monotone(vocab, ideal)
        except NonMonotoneIdealError as exc:
            lower, upper, d, d2 = exc.report.witness
            assert (lower, upper, d, d2) == (q1, q2, ALLOW, NA)
            assert lower <= upper and not leq3(d, d2)
        else:
            raise AssertionError("non-monotone ideal was realized")


def test_06_compile_complete(criterion):
    with criterion("06 100 arbitrary ideals over 16 multi-valued requests compiled exactly"):
        model = make_abac_model(FOUR_PAIRS, "abacc")
        assert len(model.request_space) == 16 and len(FOUR_PAIRS.pairs()) == 4
        allowed = {"not", "dbd", "or", "c1", "c0", "cna"}
        for seed in range(100):
            ideal = random_ideal(model, seed)
            term = compile_complete(FOUR_PAIRS, ideal)
            assert operators_used(term) <= allowed
            assert {t.id for t in iter_nodes(term) if isinstance(t, Atom)} <= set(FOUR_PAIRS.pairs())
            assert oracle_table(model, term) == [ideal(q) for q in model.request_space], seed


def test_07_multi_valued_witness(criterion):
    with criterion("07 abacc atom (role,doc): witness ({nurse}, {doc,nurse}) with (deny, allow)"):
        vocab = AttributeVocabulary.from_dict({"role": ["doc", "nurse"]})
        model = make_abac_model(vocab, "abacc")
        report = check_monotone_policy(model, Atom(("role", "doc")))
        assert report.witness == (
            frozenset({("role", "nurse")}),
            frozenset({("role", "doc"), ("role", "nurse")}),
            DENY,
            ALLOW,
        )


def test_08_access_matrix(criterion):
    with criterion("08 100 access-matrix ideals over 18 triples realized exactly"):
        u = AmUniverse(("s1", "s2", "s3"), ("o1", "o2", "o3"), ("r", "w"))
        model = am_model(u)
        assert len(model.request_space) == 18
        for seed in range(100):
            ideal = random_ideal(model, seed)
            term = realize_am(u, ideal)
            assert oracle_table(model, term) == [ideal(q) for q in model.request_space], seed


def test_09_four_valued(criterion):
    with criterion("09 four-valued atoms and lifted connectives monotone for the four-valued order"):
        requests = enumerate_multi(FOUR_PAIRS)
        for atom in FOUR_PAIRS.pairs():
            assert not brute_violations(requests, lambda q: abac_atom_four(atom, q), leq4)
        for name in ("not", "and", "or", "una"):
            lifted = lift_absorbing(builtin_operator(name, THREE))
            assert lifted.decision_set is FOUR
            for t in product(FOUR.universe, repeat=lifted.arity):
                for t2 in product(FOUR.universe, repeat=lifted.arity):
                    if all(leq4(a, b) for a, b in zip(t, t2)):
                        assert leq4(lifted(*t), lifted(*t2)), (name, t, t2)


def _small_single_valued_spaces():
    """Every vocabulary shape whose single-valued space has 1 to 4 non-empty requests."""
    shapes = [{"a": ["x"]}, {"a": ["x", "y"]}, {"a": ["x", "y", "z"]}, {"a": ["w", "x", "y", "z"]},
              {"a": ["x"], "b": ["x"]}]
    return [AttributeVocabulary.from_dict(s) for s in shapes]


def test_10_oplus_monotone(criterion):
    # The selector is defined on every tuple in Three^n.  Tuples where two
    # incomparable requests both read allow never arise from a request, but
    # the formula still maps them to the later request's decision; once two
    # incomparable requests carry different decisions, the table can
    # move from a conclusive value to a different one along the order.
    with criterion("10 oplus table monotone over all 3^n tuple pairs for every monotone ideal, n <= 4"):
        failures = []
        for vocab in _small_single_valued_spaces():
            model = make_abac_model(vocab, "abacm")
            space = model.request_space
            topo = topo_order(space)
            n = len(space) - 1
            assert 1 <= n <= 4
            for decisions in product(THREE.universe, repeat=len(space)):
                ideal = IdealPolicy(space, decisions)
                if brute_violations(space, ideal, leq3):
                    continue
                table = oplus_operator(ideal, topo)
                for t in product(THREE.universe, repeat=n):
                    bad = next(
                        (t2 for t2 in product(THREE.universe, repeat=n)
                         if all(leq3(a, b) for a, b in zip(t, t2)) and not leq3(table(*t), table(*t2))),
                        None,
                    )
                    if bad is not None:
                        failures.append((vocab.attributes, decisions, t, bad))
                        break
        if failures:
            attrs, decisions, t, t2 = failures[0]
            raise AssertionError(
                f"{len(failures)} monotone ideals give a non-monotone selector; first: vocabulary "
                f"{attrs}, ideal {[d.value for d in decisions]}, tuple {[d.value for d in t]} "
                f"below {[d.value for d in t2]}"
            )


def test_11_delta_guards(criterion):
    with criterion("11 delta guards: allow exactly on their decision (9 checks)"):
        checks = 0
        for d, x in product(THREE.universe, repeat=2):
            guard = delta_guard(d)(Atom(("x1",)))
            assert operators_used(guard) <= {"not", "dbd", "or"}
            assert term_function(guard, THREE, 1)[(x,)] == (ALLOW if x == d else DENY), (d, x)
            checks += 1
        assert checks == 9


def _cli(args, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    proc = subprocess.run(
        [sys.executable, "-m", "acframe", *args], capture_output=True, env=env, check=True
    )
    return proc.stdout


def test_12_determinism(criterion, tmp_path):
    with criterion("12 realize and compile outputs byte-identical across runs"):
        vocab_path = tmp_path / "vocab.json"
        vocab_path.write_text(json.dumps(vocab_to_json(FOUR_PAIRS)))
        single = make_abac_model(FOUR_PAIRS, "abacm")
        multi = make_abac_model(FOUR_PAIRS, "abacc")
        jobs = []
        for seed in (1, 2):
            m_path = tmp_path / f"monotone{seed}.json"
            m_path.write_text(json.dumps(ideal_to_json(random_monotone_ideal(single, seed))))
            c_path = tmp_path / f"arbitrary{seed}.json"
            c_path.write_text(json.dumps(ideal_to_json(random_ideal(multi, seed))))
            jobs.append(["realize", "--model", "abacm", "--vocab", str(vocab_path), "--ideal", str(m_path)])
            jobs.append(["compile", "--model", "abacc", "--vocab", str(vocab_path), "--ideal", str(c_path)])
        for args in jobs:
            first, second = _cli(args, 0), _cli(args, 12345)
            assert first and first == second, args
        for seed in (1, 2):
            a = render(realize_monotone(FOUR_PAIRS, random_monotone_ideal(single, seed)))
            b = render(realize_monotone(FOUR_PAIRS, random_monotone_ideal(single, seed)))
            assert a == b
            a = render(compile_complete(FOUR_PAIRS, random_ideal(multi, seed)))
            b = render(compile_complete(FOUR_PAIRS, random_ideal(multi, seed)))
            assert a == b
