"""End-to-end runs of the command-line driver.

Golden outputs live in tests/golden; rerun with EQREPAIR_UPDATE_GOLDEN=1 to
rewrite them after an intended change.
"""

import os
from pathlib import Path

import pytest
from click.testing import CliRunner

from eqrepair.corpus import load_prelude
from eqrepair.frontend.cli import main
from eqrepair.frontend.vernacular import Session

GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("EQREPAIR_UPDATE_GOLDEN") == "1"

SWAP_MODULE = ["repair-module", "swap", "--from", "Old.list", "--to", "New.list",
               "--names", "app,rev,app_nil_r,app_assoc,rev_app_distr", "--suggest-tactics"]


def _golden(name: str, text: str) -> None:
    path = GOLDEN / name
    if UPDATE:
        path.write_text(text, encoding="utf-8")
    assert path.exists(), f"missing golden {name}; run with EQREPAIR_UPDATE_GOLDEN=1"
    assert text == path.read_text(encoding="utf-8")


@pytest.fixture
def runner(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("EQREPAIR_CACHE_DIR", raising=False)
    return CliRunner()


def test_check_a_corpus_file(runner):
    result = runner.invoke(main, ["check", "swap"])
    assert result.exit_code == 0
    assert result.output.startswith("ok: ")


def test_check_reports_type_errors(runner, tmp_path):
    (tmp_path / "bad.pml").write_text("Definition x : nat := true.\n")
    result = runner.invoke(main, ["check", "bad.pml"])
    assert result.exit_code == 1
    assert "bad.pml:1:" in result.output


def test_missing_files_are_usage_errors(runner):
    assert runner.invoke(main, ["check", "no_such_file.pml"]).exit_code == 2


def test_module_repair_matches_golden_output(runner, tmp_path):
    result = runner.invoke(main, SWAP_MODULE)
    assert result.exit_code == 0, result.output
    assert "repaired New.rev_app_distr" in result.output
    repaired = (tmp_path / "swap.repaired.pml").read_text()
    _golden("swap.repaired.pml", repaired)
    _golden("swap.qtac", (tmp_path / "swap.qtac").read_text())
    # the emitted file is itself a valid development
    Session(load_prelude()).run_text(repaired, "swap.repaired.pml")


def test_repeated_runs_write_identical_bytes(runner, tmp_path):
    runner.invoke(main, SWAP_MODULE + ["--no-cache"])
    first = (tmp_path / "swap.repaired.pml").read_bytes()
    runner.invoke(main, SWAP_MODULE + ["--no-cache"])
    assert (tmp_path / "swap.repaired.pml").read_bytes() == first


def test_single_repair_with_a_chosen_name(runner, tmp_path):
    result = runner.invoke(
        main, ["repair", "nat_to_bin", "--from", "nat", "--to", "N", "--target", "add", "--as", "slow_add",
               "--config", "nat_N", "-o", "out/bin.pml"],
    )
    assert result.exit_code == 0, result.output
    assert "repaired slow_add" in result.output
    assert "Definition slow_add : N -> N -> N" in (tmp_path / "out" / "bin.repaired.pml").read_text()


def test_search_config_matches_golden_output(runner):
    result = runner.invoke(main, ["search-config", "prelude", "--from", "bool", "--to", "bool"])
    assert result.exit_code == 0
    _golden("search-config-bool.txt", result.output)
    swap = runner.invoke(main, ["search-config", "swap", "--from", "Old.list", "--to", "New.list"])
    assert swap.output == "0: Old.nil -> New.nil, Old.cons -> New.cons\n"


def test_search_without_a_mapping_is_a_type_error(runner):
    result = runner.invoke(main, ["search-config", "prelude", "--from", "nat", "--to", "bool"])
    assert result.exit_code == 1
    assert "no type-correct mapping" in result.output


def test_decompile_matches_golden_output(runner):
    result = runner.invoke(main, ["decompile", "swap", "--name", "rev_app_distr"])
    assert result.exit_code == 0
    _golden("rev_app_distr.qtac", result.output)
    simplified = runner.invoke(main, ["decompile", "swap", "--name", "rev_app_distr", "--simplify"])
    assert simplified.exit_code == 0
    assert len(simplified.output) <= len(result.output)


def test_validate_config_exit_status(runner, tmp_path):
    ok = runner.invoke(main, ["validate-config", "nat_to_bin", "--config", "nat_N"])
    assert ok.exit_code == 0
    assert runner.invoke(main, ["validate-config", "nat_to_bin", "--config", "nope"]).exit_code == 1


def test_out_of_range_mappings_are_usage_errors(runner):
    result = runner.invoke(
        main, ["repair", "swap", "--from", "Old.list", "--to", "New.list", "--target", "app", "--mapping", "5"]
    )
    assert result.exit_code == 2


def test_config_and_mapping_are_exclusive(runner):
    result = runner.invoke(
        main, ["repair", "swap", "--from", "Old.list", "--to", "New.list", "--target", "app",
               "--mapping", "0", "--config", "swap_manual"],
    )
    assert result.exit_code == 2


def test_transformation_failures_exit_with_three(runner, tmp_path):
    src = (
        "Axiom Old.len : forall (T : Type0), Old.list T -> nat.\n"
        "Definition len_nil : nat := Old.len nat (Old.nil nat).\n"
    )
    (tmp_path / "len.pml").write_text(src)
    result = runner.invoke(main, ["repair", "len.pml", "--from", "Old.list", "--to", "New.list", "--target", "len_nil"])
    assert result.exit_code == 3
    assert "Annotate len_nil" in result.output


def test_the_guard_exits_with_three(runner):
    result = runner.invoke(main, ["repair", "refine_unit", "--from", "nat", "--to", "nat_unit", "--target", "double",
                                  "--config", "nat_refined"])
    assert result.exit_code == 3


def test_cache_directory_from_the_environment(runner, tmp_path):
    cache = tmp_path / "cache"
    result = runner.invoke(main, SWAP_MODULE, env={"EQREPAIR_CACHE_DIR": str(cache)})
    assert result.exit_code == 0
    assert any(cache.iterdir())


def test_no_cache_writes_nothing(runner, tmp_path):
    cache = tmp_path / "cache"
    result = runner.invoke(main, SWAP_MODULE + ["--no-cache", "--cache-dir", str(cache)])
    assert result.exit_code == 0
    assert not cache.exists()
