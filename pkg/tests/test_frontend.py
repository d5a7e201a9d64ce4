import pytest
from hypothesis import given

from eqrepair.corpus import available, load, load_prelude
from eqrepair.errors import ConfigurationError, DuplicateName, ParseError, UnknownName
from eqrepair.frontend.parser import parse_file, parse_term, resolve
from eqrepair.frontend.printer import print_declaration, print_term
from eqrepair.frontend.syntax import AnnotateCmd, RepairCmd, RepairModuleCmd, Role
from eqrepair.frontend.vernacular import CommandError, Session
from eqrepair.kernel.env import Definition
from eqrepair.kernel.terms import Const, Constr, Ind, app

from strategies import raw_terms
from support import NAT, unary

PRELUDE = load_prelude()


def _corpus_terms():
    for name in available():
        s = load(name)
        for n in s.declared:
            d = s.env.get(n)
            if isinstance(d, Definition):
                yield s.env, n, d


@pytest.mark.parametrize("with_env", [False, True], ids=["raw", "named-constructors"])
def test_printing_then_parsing_corpus_terms_is_identity(with_env):
    count = 0
    for env, _, d in _corpus_terms():
        for t in (d.type, d.body):
            text = print_term(t, env=env if with_env else None)
            assert resolve(env, parse_term(text)) == t, text
            count += 1
    assert count > 40


@given(raw_terms(depth=0, size=4))
def test_printing_then_parsing_generated_terms_is_identity(t):
    assert resolve(PRELUDE, parse_term(print_term(t))) == t
    assert resolve(PRELUDE, parse_term(print_term(t, env=PRELUDE))) == t


def test_constructor_names_print_with_their_parameters():
    refl = app(Constr(0, app(Ind("eq"), NAT, unary(1))))
    assert print_term(refl, env=PRELUDE) == "eq_refl nat (S O)"
    assert print_term(refl) == "Constr(0, eq nat (Constr(1, nat) Constr(0, nat)))"


def test_binders_avoid_capturing_constructor_names():
    t = parse_term("fun (S : nat) => S")
    assert print_term(resolve(PRELUDE, t), env=PRELUDE) == "fun (S : nat) => S"
    shadowing = resolve(PRELUDE, parse_term("fun (S : nat) => Constr(1, nat) S"))
    text = print_term(shadowing, env=PRELUDE)
    assert resolve(PRELUDE, parse_term(text)) == shadowing


def test_parse_errors_carry_line_and_column():
    with pytest.raises(ParseError) as err:
        parse_file("Definition x : nat :=\n  fun (y : nat) => .")
    assert (err.value.line, err.value.column) == (2, 20)


def test_unknown_commands_are_parse_errors():
    with pytest.raises(ParseError, match="unknown command"):
        parse_file("Frobnicate x.")


def test_repair_commands_parse_all_options():
    (cmd,) = parse_file("Repair nat N in add as slow_add using nat_N suggest tactics.")
    assert cmd == RepairCmd("nat", "N", "add", "slow_add", "nat_N", None, True, 1)
    (cmd,) = parse_file("Repair module Old.list New.list in [app, rev] mapping 0.")
    assert cmd == RepairModuleCmd("Old.list", "New.list", ("app", "rev"), None, 0, False, 1)


def test_annotations_parse_paths_and_roles():
    (cmd,) = parse_file("Annotate foo [1; 0; 3] iota 1.")
    assert cmd == AnnotateCmd("foo", (1, 0, 3), Role("iota", 1), 1)
    with pytest.raises(ParseError, match="unknown role"):
        parse_file("Annotate foo [] bogus.")


def test_declarations_print_back_to_the_same_environment():
    s = load("swap")
    text = "\n".join(print_declaration(s.env, n) for n in s.declared)
    again = Session(load_prelude())
    again.run_text(text)
    for n in s.declared:
        assert again.env.lookup(n) == s.env.lookup(n)


def test_session_errors_are_wrapped_with_their_line():
    s = Session(load_prelude())
    with pytest.raises(CommandError) as err:
        s.run_text("Definition two : nat := S (S O).\nDefinition two : nat := O.", "f.pml")
    assert err.value.line == 2
    assert isinstance(err.value.cause, DuplicateName)
    assert str(err.value).startswith("f.pml:2:")


def test_annotating_an_unknown_definition_fails():
    s = Session(load_prelude())
    with pytest.raises(CommandError) as err:
        s.run_text("Annotate nothing [] iota 0.")
    assert isinstance(err.value.cause, UnknownName)


def test_configuration_fields_are_checked():
    s = Session(load_prelude())
    bad_field = "Configure c : bool ~ bool := { dep_constr_a := [true; false]; colour := true }."
    with pytest.raises(CommandError) as err:
        s.run_text(bad_field)
    assert isinstance(err.value.cause, ConfigurationError)
    missing = "Configure c : bool ~ bool := { dep_constr_a := [true; false] }."
    with pytest.raises(CommandError, match="missing"):
        s.run_text(missing)


def test_repair_in_a_file_records_the_new_names():
    s = load("nat_to_bin")
    s.run_text("Repair nat N in add as slow_add using nat_N.")
    assert s.repaired[("nat_N", "add")] == "slow_add"
    assert s.emitted == ["slow_add"]
    assert isinstance(s.env.lookup("slow_add"), Definition)
    assert Const("slow_add") == resolve(s.env, parse_term("slow_add"))
