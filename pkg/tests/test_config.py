import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eqrepair.config import (
    check_equivalence,
    equivalence_names,
    register_equivalence,
    synthesize_equivalence,
    validate_configuration,
)
from eqrepair.corpus import load, load_prelude
from eqrepair.frontend.vernacular import Session
from eqrepair.kernel.env import EMPTY
from eqrepair.kernel.terms import Const, Ind, app
from eqrepair.kernel.typing import check

from support import NAT, binary, list_term, nf, unary

CORPUS_CONFIGS = [
    ("swap", "swap_manual"),
    ("constr_refactor", "I_J"),
    ("packed_vect", "list_vect"),
    ("nat_to_bin", "nat_N"),
    ("refine_unit", "nat_refined"),
]


@pytest.mark.parametrize("corpus,name", CORPUS_CONFIGS)
def test_corpus_configurations_validate(corpus, name):
    report = load(corpus).reports[name]
    assert report.ok, report.summary()
    assert {r.status for r in report} == {"pass"}


@pytest.mark.parametrize("corpus,name", CORPUS_CONFIGS)
def test_corpus_configurations_induce_equivalences(corpus, name):
    s = load(corpus)
    cfg = s.configs[name]
    e = synthesize_equivalence(s.env, cfg)
    assert check_equivalence(s.env, e, cfg.type_a, cfg.type_b)


@pytest.mark.parametrize("corpus,name", CORPUS_CONFIGS)
def test_reversing_twice_restores_the_configuration(corpus, name):
    cfg = load(corpus).configs[name]
    again = cfg.reversed().reversed()
    assert dataclasses.replace(again, name=cfg.name) == cfg


def test_reversed_configurations_validate():
    s = load("nat_to_bin")
    assert validate_configuration(s.env, s.configs["nat_N"].reversed()).ok


def test_defaults_are_identity_eta_and_reflexivity():
    s = load("swap")
    cfg = s.configs["swap_manual"].completed(s.env)
    nil = list_term("Old.list", NAT, [], 0, 1)
    assert nf(s.env, app(cfg.eta_a, NAT, nil)) == nil
    assert len(cfg.iota_a) == len(cfg.iota_b) == 2


def test_corrupted_eta_proof_fails_eta_ok():
    s = load("packed_vect")
    cfg = s.configs["list_vect"]
    broken = dataclasses.replace(cfg, eta_ok_b=s.configs["list_vect"].completed(s.env).eta_ok_a)
    failed = [r.label for r in validate_configuration(s.env, broken).failed()]
    # the default iota entries rewrite along eta_ok, so they fail with it
    assert failed == ["eta_ok_b", "iota_ok_b_0", "iota_ok_b_1"]


def test_swapped_iota_entries_fail_iota_ok():
    s = load("nat_to_bin")
    cfg = s.configs["nat_N"]
    report = validate_configuration(s.env, dataclasses.replace(cfg, iota_a=(cfg.iota_a[1], cfg.iota_a[0])))
    assert {r.label for r in report.failed()} == {"iota_ok_a_0", "iota_ok_a_1"}


def test_constructor_count_mismatch_fails_arity():
    s = load("swap")
    cfg = s.configs["swap_manual"]
    report = validate_configuration(s.env, dataclasses.replace(cfg, dep_constr_b=cfg.dep_constr_b[:1]))
    assert "arity" in {r.label for r in report.failed()}


def test_a_side_entries_reversed_is_not_a_valid_eliminator():
    s = load("swap")
    cfg = s.configs["swap_manual"]
    report = validate_configuration(s.env, dataclasses.replace(cfg, dep_elim_b=cfg.dep_elim_a))
    assert "elim_eta_b" in {r.label for r in report.failed()}


AXIOM_IOTA = """
Axiom bool_iota_0 : forall (P : bool -> Type0) (t : P true) (f : P false) (Q : P true -> Type0), Q t -> Q t.
Axiom bool_iota_1 : forall (P : bool -> Type0) (t : P true) (f : P false) (Q : P false -> Type0), Q f -> Q f.
Configure {name} : bool ~ bool := {{
  dep_constr_a := [true; false];
  dep_constr_b := [true; false];
  dep_elim_a := fun (P : bool -> Type0) (t : P true) (f : P false) (b : bool) => Elim(b, P) {{ t | f }};
  dep_elim_b := fun (P : bool -> Type0) (t : P true) (f : P false) (b : bool) => Elim(b, P) {{ t | f }};
  iota_b := [bool_iota_0; bool_iota_1]{trusted}
}}.
"""


@pytest.mark.parametrize(
    "trusted,failing",
    [("", {"iota_ok_b_0", "iota_ok_b_1"}), (";\n  trusted := [iota_ok_b_0]", {"iota_ok_b_1"}),
     (";\n  trusted := [iota_ok_b_0; iota_ok_b_1]", set())],
)
def test_proofs_resting_on_axioms_need_to_be_trusted(trusted, failing):
    s = Session(load_prelude())
    s.run_text(AXIOM_IOTA.format(name="c", trusted=trusted))
    report = s.reports["c"]
    assert {r.label for r in report.failed()} == failing
    assert all("assumption" in r.error for r in report.failed())
    assert report.ok == (not failing)
    if not failing:
        assert report.status("iota_ok_b_1") == "trusted"


def test_registered_equivalences_have_deterministic_names():
    s = load("constr_refactor")
    cfg = s.configs["I_J"]
    env = register_equivalence(s.env, cfg, synthesize_equivalence(s.env, cfg))
    names = equivalence_names(cfg)
    assert names == {k: f"{k}_I_J" for k in ("f", "g", "section", "retraction")}
    for n in names.values():
        d = env.definition(n)
        check(env, EMPTY, d.body, d.type)


def test_check_equivalence_rejects_mismatched_functions():
    s = load("constr_refactor")
    cfg = s.configs["I_J"]
    e = synthesize_equivalence(s.env, cfg)
    assert not check_equivalence(s.env, dataclasses.replace(e, f=e.g), cfg.type_a, cfg.type_b)


# ---------------------------------------------------------------------------
# the synthesized functions against independent oracles


SWAP = load("swap")
SWAP_EQUIV = synthesize_equivalence(SWAP.env, SWAP.configs["swap_manual"])
NAT_N = load("nat_to_bin")
NAT_N_EQUIV = synthesize_equivalence(NAT_N.env, NAT_N.configs["nat_N"])
VECT = load("packed_vect")
VECT_EQUIV = synthesize_equivalence(VECT.env, VECT.configs["list_vect"])


@given(st.lists(st.integers(0, 3), max_size=6))
def test_swap_functions_preserve_elements_and_invert(items):
    elems = [unary(x) for x in items]
    old = list_term("Old.list", NAT, elems, 0, 1)
    new = list_term("New.list", NAT, elems, 1, 0)
    assert nf(SWAP.env, app(SWAP_EQUIV.f, NAT, old)) == new
    assert nf(SWAP.env, app(SWAP_EQUIV.g, NAT, new)) == old


@given(st.integers(0, 40))
def test_unary_to_binary_matches_integer_encoding(k):
    assert nf(NAT_N.env, app(NAT_N_EQUIV.f, unary(k))) == binary(k)
    assert nf(NAT_N.env, app(NAT_N_EQUIV.g, binary(k))) == unary(k)


@given(st.lists(st.integers(0, 2), max_size=5))
def test_packing_a_list_records_its_length(items):
    elems = [unary(x) for x in items]
    old = list_term("Old.list", NAT, elems, 0, 1)
    packed = nf(VECT.env, app(VECT_EQUIV.f, NAT, old))
    length = nf(VECT.env, app(Const("pi_l"), NAT, _vector_family(), packed))
    assert length == unary(len(items))
    assert nf(VECT.env, app(VECT_EQUIV.g, NAT, packed)) == old


def _vector_family():
    from eqrepair.frontend.parser import parse_term, resolve

    return resolve(VECT.env, parse_term("fun (n : nat) => vector nat n"))


def test_sections_are_proofs_about_the_right_functions():
    env = register_equivalence(SWAP.env, SWAP.configs["swap_manual"], SWAP_EQUIV)
    names = equivalence_names(SWAP.configs["swap_manual"])
    section_type = env.definition(names["section"]).type
    assert Ind("Old.list") in _atoms(section_type)


def _atoms(t):
    from eqrepair.kernel.terms import children

    out = {t}
    for c in children(t):
        out |= _atoms(c)
    return out
