"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

The lines are printed at the end of a pytest run (see conftest.py) and when
this file is run directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import dataclasses
import itertools
import threading
import time

import pytest

from eqrepair.config import check_equivalence, synthesize_equivalence, validate_configuration
from eqrepair.corpus import available, load
from eqrepair.decompile import Goal, Induction, Intro, Reflexivity, Rewrite, decompile, parse_script, print_script
from eqrepair.decompile import replay, steps
from eqrepair.errors import EqRepairError, TerminationGuardTriggered
from eqrepair.frontend.parser import parse_term
from eqrepair.frontend.syntax import RepairCmd, RepairModuleCmd
from eqrepair.frontend.vernacular import CommandError
from eqrepair.kernel.env import EMPTY, Definition
from eqrepair.kernel.reduce import conv
from eqrepair.kernel.terms import Const, Elim, Lam, app, global_names, mentions
from eqrepair.kernel.typing import check, infer_type
from eqrepair.search import ConstructorMapping, config_from_permutation, find_permutations

import support

SWAP_NAMES = ("app", "rev", "app_nil_r", "app_assoc", "rev_app_distr")

# Timing budgets and case counts.
SWAP_BUDGET_S = 10.0
GUARD_BUDGET_S = 5.0
SYNTHESIS_MAX_LEN = 3
ADD_RANGE = range(0, 9)
MIN_ENUM_INSTANCES = 50

# The append function after the swap, with binder types written out.
SWAPPED_APPEND = """
fun (T : Type0) (l m : New.list T) =>
  Elim(l, fun (l : New.list T) => New.list T -> New.list T) {
    fun (t : T) (_ : New.list T) (IHl : New.list T -> New.list T) (m : New.list T) =>
      Constr(0, New.list T) t (IHl m)
  | fun (m : New.list T) => m
  } m
"""


def record(criterion: int, ok: bool, detail: str) -> None:
    support.ACCEPTANCE[criterion] = (ok, detail)
    print(support.acceptance_line(criterion, ok, detail))


def _term(session, text: str):
    return session.term(parse_term(text))


# ---------------------------------------------------------------------------
# 1. swap end to end


def test_criterion_1_swap_end_to_end():
    start = time.perf_counter()
    s = load("swap")
    s.run(RepairModuleCmd("Old.list", "New.list", SWAP_NAMES))
    elapsed = time.perf_counter() - start

    problems = []
    repaired = {src: new for (_, src), new in s.repaired.items()}
    for name in SWAP_NAMES:
        d = s.env.definition(repaired[name])
        check(s.env, EMPTY, d.body, d.type)
        if mentions(d.type, {"Old.list"}) or mentions(d.body, {"Old.list"}):
            problems.append(f"{d.name} mentions Old.list")
    append = s.env.definition(repaired["app"]).body
    if append != _term(s, SWAPPED_APPEND):
        problems.append("append differs from the expected swapped term")
    if elapsed >= SWAP_BUDGET_S:
        problems.append(f"took {elapsed:.2f}s")
    ok = not problems
    record(1, ok, f"{len(SWAP_NAMES)} definitions in {elapsed:.2f}s" if ok else "; ".join(problems))
    assert ok, problems


# ---------------------------------------------------------------------------
# 2. equivalence synthesis


def _lists_up_to(max_len: int):
    for n in range(max_len + 1):
        yield from itertools.product((0, 1), repeat=n)


def test_criterion_2_equivalence_synthesis():
    s = load("swap")
    (mapping, *_) = find_permutations(s.env, "Old.list", "New.list")
    cfg = config_from_permutation(s.env, "Old.list", "New.list", mapping)
    e = synthesize_equivalence(s.env, cfg)
    typed = check_equivalence(s.env, e, cfg.type_a, cfg.type_b)

    failures, count = [], 0
    for items in _lists_up_to(SYNTHESIS_MAX_LEN):
        count += 1
        old = support.list_term("Old.list", support.NAT, [support.unary(x) for x in items], 0, 1)
        back = support.nf(s.env, app(e.g, support.NAT, app(e.f, support.NAT, old)))
        if back != old:
            failures.append(items)
    # every list of length <= 3 over {0, 1}: 1 + 2 + 4 + 8
    assert count == 15
    ok = typed and not failures
    record(2, ok, f"f/g/section/retraction typed={typed}; g (f l) = l on {count - len(failures)}/{count} lists")
    assert ok, failures


# ---------------------------------------------------------------------------
# 3. decompiler fidelity


def _base_case(s):
    """The nil case of the repaired rev_app_distr, with its context."""
    new = s.repaired[(next(c for c, n in s.repaired if n == "rev_app_distr"), "rev_app_distr")]
    body = s.env.definition(new).body
    ctx, t = EMPTY, body
    while isinstance(t, Lam):
        ctx, t = ctx.push(t.name, t.dom), t.body
    assert isinstance(t, Elim)
    nil_index = [c for c, _ in s.env.inductive("New.list").constructors].index("New.nil")
    return ctx, t.cases[nil_index]


def _shape(script) -> dict:
    seen = {"intro": 0, "induction_branches": [], "rewrite_by": [], "reflexivity_ends": 0}

    def walk(sc):
        items = steps(sc)
        for st in items:
            if isinstance(st, Intro):
                seen["intro"] += 1
            if isinstance(st, Rewrite):
                seen["rewrite_by"].extend(sorted(global_names(st.eq)))
            if isinstance(st, Induction):
                seen["induction_branches"].append(len(st.branches))
                for b in st.branches:
                    walk(b)
        if isinstance(items[-1], Reflexivity):
            seen["reflexivity_ends"] += 1

    walk(script)
    return seen


def _corpus_definitions():
    seen = {}
    for name in available():
        s = load(name)
        for n in s.env.names():
            d = s.env.get(n)
            if isinstance(d, Definition) and n not in seen:
                seen[n] = (s.env, d)
    s = load("swap")
    s.run(RepairModuleCmd("Old.list", "New.list", SWAP_NAMES))
    for n in s.emitted:
        seen[n] = (s.env, s.env.definition(n))
    return seen


def test_criterion_3_decompiler_fidelity():
    s = load("swap")
    s.run(RepairModuleCmd("Old.list", "New.list", SWAP_NAMES))
    ctx, term = _base_case(s)
    goal_type = infer_type(s.env, ctx, term)
    script = decompile(s.env, term, ctx)
    rebuilt = replay(s.env, Goal(ctx, goal_type), script)
    check(s.env, ctx, rebuilt, goal_type)
    shape = _shape(script)
    shape_ok = (
        shape["intro"] >= 1
        and 2 in shape["induction_branches"]
        and "New.app_nil_r" in shape["rewrite_by"]
        and shape["reflexivity_ends"] >= 1
    )

    defs = _corpus_definitions()
    replayed = 0
    failed = []
    for name, (env, d) in defs.items():
        try:
            sc = decompile(env, d.body)
            back = parse_script(print_script(sc, env=env), env)
            assert back == sc
            check(env, EMPTY, replay(env, Goal(EMPTY, d.type), back), d.type)
            replayed += 1
        except (EqRepairError, AssertionError) as err:
            failed.append(f"{name}: {err}")
    ok = shape_ok and not failed
    record(3, ok, f"base case shape ok={shape_ok}; round trip {replayed}/{len(defs)} proof terms")
    assert shape_ok, (shape, print_script(script, env=s.env))
    assert not failed, failed


# ---------------------------------------------------------------------------
# 4. configuration validation


def test_criterion_4_configuration_validation():
    results = {}
    swap = load("swap")
    (mapping, *_) = find_permutations(swap.env, "Old.list", "New.list")
    results["swap (found)"] = validate_configuration(
        swap.env, config_from_permutation(swap.env, "Old.list", "New.list", mapping)
    )
    results["swap (manual)"] = swap.reports["swap_manual"]
    for ind in ("Old.list", "nat"):
        ident = config_from_permutation(
            swap.env, ind, ind, ConstructorMapping(ind, ind, tuple(range(len(swap.env.inductive(ind).constructors))))
        )
        results[f"identity {ind}"] = validate_configuration(swap.env, ident)
    for corpus, cfg in (("constr_refactor", "I_J"), ("packed_vect", "list_vect"), ("nat_to_bin", "nat_N")):
        results[cfg] = load(corpus).reports[cfg]
    passing = [k for k, r in results.items() if r.ok]

    nat = load("nat_to_bin")
    cfg = nat.configs["nat_N"]
    corrupted = dataclasses.replace(cfg, iota_b=(cfg.iota_b[1], cfg.iota_b[0]))
    report = validate_configuration(nat.env, corrupted)
    failed_labels = [r.label for r in report.failed()]
    corrupted_ok = not report.ok and failed_labels and all(l.startswith("iota_ok") for l in failed_labels)

    ok = len(passing) == len(results) and corrupted_ok
    record(4, ok, f"{len(passing)}/{len(results)} configurations pass; corrupted iota fails {failed_labels}")
    assert len(passing) == len(results), {k: r.summary() for k, r in results.items() if not r.ok}
    assert corrupted_ok, report.summary()


# ---------------------------------------------------------------------------
# 5. propositional iota


def test_criterion_5_propositional_iota():
    s = load("nat_to_bin")
    s.run(RepairCmd("nat", "N", "add", "slow_add", "nat_N"))
    d = s.env.definition("slow_add")
    nat_free = not mentions(d.type, {"nat"}) and not mentions(d.body, {"nat"})

    wrong = []
    for a, b in itertools.product(ADD_RANGE, ADD_RANGE):
        out = support.nf(s.env, app(Const("slow_add"), support.binary(a), support.binary(b)))
        if support.decode_binary(out) != a + b or out != support.binary(a + b):
            wrong.append((a, b))
    total = len(ADD_RANGE) ** 2

    s.run(RepairCmd("nat", "N", "add_n_Sm_annot", "add_n_Sm_N", "nat_N"))
    lemma = s.env.definition("add_n_Sm_N")
    statement = _term(s, "forall (n m : N), eq N (N.succ (slow_add n m)) (slow_add n (N.succ m))")
    check(s.env, EMPTY, lemma.body, statement)
    lemma_ok = conv(s.env, EMPTY, lemma.type, statement)

    ok = nat_free and not wrong and lemma_ok
    record(5, ok, f"nat-free={nat_free}; slow_add agrees on {total - len(wrong)}/{total} pairs; add_n_Sm over N typed={lemma_ok}")
    assert ok, wrong


# ---------------------------------------------------------------------------
# 6. transformation properties


CORPUS_PAIRS = [
    ("swap", "swap_manual", list(SWAP_NAMES)),
    ("constr_refactor", "I_J", ["I.flip", "I.is_A", "I.flip_flip"]),
    ("packed_vect", "list_vect", ["length", "singleton"]),
    ("nat_to_bin", "nat_N", ["add", "add_n_Sm", "add_n_Sm_annot"]),
    ("enums", None, ["next", "is_red", "next_next_next"]),
]


def _properties(env, cfg, names, annotations=None) -> list[str]:
    """Type preservation, A-freedom and round-trip normal forms; returns the violations."""
    env, triples = support.round_trip(env, cfg, names, annotations)
    bad = []
    for src, fwd, back in triples:
        d0, d1, d2 = env.definition(src), env.definition(fwd), env.definition(back)
        check(env, EMPTY, d1.body, d1.type)
        if not support.a_free(cfg, d1.type, d1.body):
            bad.append(f"{fwd} mentions A")
        if support.nf(env, d0.type) != support.nf(env, d2.type) or support.nf(env, d0.body) != support.nf(env, d2.body):
            bad.append(f"{src} does not round trip")
    return bad


def _enum_instances():
    for size in (2, 3, 4):
        for perm in itertools.permutations(range(size)):
            for shift in (1, size - 1):
                yield size, perm, shift


def test_criterion_6_transformation_properties():
    bad, pairs = [], 0
    for corpus, cname, names in CORPUS_PAIRS:
        s = load(corpus)
        if cname is None:
            (m, *_) = find_permutations(s.env, "color", "New.color")
            cfg = config_from_permutation(s.env, "color", "New.color", m)
        else:
            cfg = s.configs[cname].completed(s.env)
        bad += _properties(s.env, cfg, names, s.annotations)
        pairs += len(names)

    instances = 0
    for size, perm, shift in _enum_instances():
        text, old, new = support.enum_source(size, perm, shift)
        s = support.fresh_session()
        s.run_text(text)
        (m, *_) = find_permutations(s.env, old, new)
        if m.permutation != perm:
            bad.append(f"{old}: best mapping {m.permutation}, expected {perm}")
            continue
        cfg = config_from_permutation(s.env, old, new, m)
        bad += _properties(s.env, cfg, [f"{old}.rot", f"{old}.is_first", f"{old}.rot_cycle"])
        instances += 1
    ok = not bad and instances >= MIN_ENUM_INSTANCES
    record(6, ok, f"{pairs} corpus pairs and {instances} enum instances; {len(bad)} violations")
    assert ok, bad


# ---------------------------------------------------------------------------
# 7. termination guard


def test_criterion_7_termination_guard():
    s = load("refine_unit")
    outcome: dict = {}

    def run():
        try:
            s.run(RepairCmd("nat", "nat_unit", "double", None, "nat_refined"))
            outcome["result"] = "repaired"
        except CommandError as e:
            outcome["result"] = e.cause

    worker = threading.Thread(target=run, daemon=True)
    start = time.perf_counter()
    worker.start()
    worker.join(GUARD_BUDGET_S)
    elapsed = time.perf_counter() - start
    finished = not worker.is_alive()
    result = outcome.get("result")
    ok = finished and (result == "repaired" or isinstance(result, TerminationGuardTriggered))
    what = type(result).__name__ if isinstance(result, Exception) else result
    record(7, ok, f"finished={finished} in {elapsed:.2f}s with {what}")
    assert ok, result


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(pytest.main([__file__, "-q"]))
