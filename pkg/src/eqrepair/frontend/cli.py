"""Command-line driver.

Exit status: 0 success, 1 type or validation error, 2 usage error,
3 transformation failure.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from ..errors import (
    ConfigurationError,
    DependencyError,
    EqRepairError,
    MappingOutOfRange,
    TransformFailed,
    UnknownName,
)
from .syntax import RepairCmd, RepairModuleCmd
from .vernacular import CommandError, Session

OK, TYPE_ERROR, USAGE, TRANSFORM = 0, 1, 2, 3


def exit_code(err: BaseException) -> int:
    cause = err.cause if isinstance(err, CommandError) else err
    if isinstance(cause, MappingOutOfRange):
        return USAGE
    if isinstance(cause, (TransformFailed, DependencyError)):
        return TRANSFORM
    return TYPE_ERROR


def fail(err: BaseException) -> None:
    click.echo(f"error: {err}", err=True)
    sys.exit(exit_code(err))


def _source(path: str) -> tuple[str, str]:
    p = Path(path)
    if p.exists():
        return p.read_text(encoding="utf-8"), str(p)
    from .. import corpus

    name = p.name[:-4] if p.name.endswith(".pml") else p.name
    if name in corpus.available():
        return corpus.source(name), f"{name}.pml"
    raise click.UsageError(f"no such file: {path}")


def load_session(path: str, cache_dir: str | None = None, use_cache: bool = True) -> Session:
    from ..corpus import load_prelude
    from ..transform import LiftCache

    text, name = _source(path)
    s = Session(None if name.endswith("prelude.pml") else load_prelude())
    s.cache = LiftCache(enabled=use_cache, directory=cache_dir)
    try:
        s.run_text(text, name)
    except EqRepairError as e:
        fail(e)
    return s


def emitted_text(s: Session, header: str) -> str:
    """The session's declarations beyond the prelude, with suggested scripts as comments."""
    from ..corpus import load_prelude
    from .printer import print_declaration

    prelude = load_prelude()
    out = [f"(* {header} *)\n"]
    for n in s.env.names():
        if n in prelude:
            continue
        out.append("\n")
        if n in s.scripts:
            out.append("(* suggested script:\n" + s.scripts[n] + "*)\n")
        out.append(print_declaration(s.env, n))
    extra = sorted(set(s.env.opaque) - set(prelude.opaque))
    if extra:
        out.append("\nOpaque " + " ".join(extra) + ".\n")
    return "".join(out)


def write_outputs(s: Session, source: str, output: str | None, header: str) -> Path:
    base = Path(output) if output else Path(Path(source).name)
    stem = base.name[:-4] if base.name.endswith(".pml") else base.name
    if stem.endswith(".repaired"):
        stem = stem[: -len(".repaired")]
    target = base.with_name(stem + ".repaired.pml")
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(emitted_text(s, header), encoding="utf-8")
    scripts = [n for n in s.emitted if n in s.scripts]
    if scripts:
        sidecar = base.with_name(stem + ".qtac")
        sidecar.write_text("".join(f"(* {n} *)\n{s.scripts[n]}\n" for n in scripts), encoding="utf-8")
    return target


cache_options = [
    click.option("--cache-dir", envvar="EQREPAIR_CACHE_DIR", default=None, help="Persist the lift cache here."),
    click.option("--no-cache", is_flag=True, help="Disable the lift cache."),
]


def with_cache(f):
    for opt in reversed(cache_options):
        f = opt(f)
    return f


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Repair definitions and proofs across type equivalences."""


@main.command()
@click.argument("file")
def check(file: str) -> None:
    """Type check FILE (the prelude is loaded first)."""
    s = load_session(file)
    click.echo(f"ok: {len(s.declared)} declarations")


def _run(s: Session, cmd) -> None:
    try:
        s.run(cmd, "<command line>")
    except EqRepairError as e:
        fail(e)


@main.command()
@click.argument("file")
@click.option("--from", "type_a", required=True, help="The old type.")
@click.option("--to", "type_b", required=True, help="The new type.")
@click.option("--target", required=True, help="Definition to repair.")
@click.option("--as", "as_name", default=None, help="Name for the repaired definition.")
@click.option("--config", default=None, help="Named configuration from FILE.")
@click.option("--mapping", type=int, default=None, help="Index into the found constructor mappings.")
@click.option("--suggest-tactics", is_flag=True, help="Decompile the result into a tactic script.")
@click.option("-o", "--output", default=None, help="Output path (suffix .repaired.pml is added).")
@with_cache
def repair(file, type_a, type_b, target, as_name, config, mapping, suggest_tactics, output, cache_dir, no_cache):
    """Repair one definition of FILE from one type to another."""
    if config is not None and mapping is not None:
        raise click.UsageError("--config and --mapping are mutually exclusive")
    s = load_session(file, cache_dir, not no_cache)
    _run(s, RepairCmd(type_a, type_b, target, as_name, config, mapping, suggest_tactics))
    s.cache.save()
    path = write_outputs(s, file, output, f"repaired from {Path(file).name}: {type_a} to {type_b}")
    for n in s.emitted:
        click.echo(f"repaired {n}")
    click.echo(f"wrote {path}")


@main.command("repair-module")
@click.argument("file")
@click.option("--from", "type_a", required=True)
@click.option("--to", "type_b", required=True)
@click.option("--names", required=True, help="Comma-separated definitions to repair.")
@click.option("--config", default=None)
@click.option("--mapping", type=int, default=None)
@click.option("--suggest-tactics", is_flag=True)
@click.option("-o", "--output", default=None)
@with_cache
def repair_module(file, type_a, type_b, names, config, mapping, suggest_tactics, output, cache_dir, no_cache):
    """Repair several definitions of FILE in dependency order."""
    if config is not None and mapping is not None:
        raise click.UsageError("--config and --mapping are mutually exclusive")
    s = load_session(file, cache_dir, not no_cache)
    targets = tuple(n.strip() for n in names.split(",") if n.strip())
    _run(s, RepairModuleCmd(type_a, type_b, targets, config, mapping, suggest_tactics))
    s.cache.save()
    path = write_outputs(s, file, output, f"repaired from {Path(file).name}: {type_a} to {type_b}")
    for n in s.emitted:
        click.echo(f"repaired {n}")
    click.echo(f"wrote {path}")


@main.command("search-config")
@click.argument("file")
@click.option("--from", "type_a", required=True)
@click.option("--to", "type_b", required=True)
def search_config(file, type_a, type_b):
    """List the constructor mappings between two inductive types, best first."""
    from ..search import find_permutations

    s = load_session(file)
    try:
        maps = find_permutations(s.env, type_a, type_b)
    except (EqRepairError, UnknownName) as e:
        fail(e)
    if not maps:
        click.echo("no type-correct mapping")
        sys.exit(TYPE_ERROR)
    da, db = s.env.inductive(type_a), s.env.inductive(type_b)
    for i, m in enumerate(maps):
        pairs = ", ".join(
            f"{da.constructors[j][0]} -> {db.constructors[k][0]}" for j, k in enumerate(m.permutation)
        )
        click.echo(f"{i}: {pairs}")


@main.command()
@click.argument("file")
@click.option("--name", required=True, help="Definition whose body to decompile.")
@click.option("--simplify", is_flag=True, help="Run the second pass over the script.")
def decompile(file, name, simplify):
    """Print a tactic script that rebuilds the body of NAME."""
    from ..decompile import Goal, simplify_script
    from ..decompile import decompile as run
    from ..decompile import print_script
    from ..kernel.env import EMPTY

    s = load_session(file)
    try:
        d = s.env.definition(name)
        script = run(s.env, d.body)
        if simplify:
            script = simplify_script(s.env, Goal(EMPTY, d.type), script)
    except EqRepairError as e:
        fail(e)
    click.echo(print_script(script, env=s.env), nl=False)


@main.command("validate-config")
@click.argument("file")
@click.option("--config", required=True)
def validate_config(file, config):
    """Check a named configuration against the correctness criteria."""
    s = load_session(file)
    if config not in s.reports:
        fail(ConfigurationError(f"no configuration named {config}"))
    report = s.reports[config]
    click.echo(report.summary())
    sys.exit(OK if report.ok else TYPE_ERROR)


if __name__ == "__main__":  # pragma: no cover
    main()
