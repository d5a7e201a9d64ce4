"""Executes vernacular commands against an evolving environment."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import EqRepairError, UnknownName
from ..kernel.env import GlobalEnv, InductiveDecl
from ..kernel.terms import Term
from ..kernel.typing import add_assumption, add_definition, declare_inductive
from .parser import parse_file, resolve
from .syntax import (
    AnnotateCmd,
    AxiomCmd,
    ConfigureCmd,
    DecompileCmd,
    DefinitionCmd,
    InductiveCmd,
    OpaqueCmd,
    RepairCmd,
    RepairModuleCmd,
    Role,
    Vernacular,
)


class CommandError(EqRepairError):
    """A command failed; wraps the underlying error with its source line."""

    def __init__(self, cause: Exception, filename: str, line: int):
        self.cause = cause
        self.filename = filename
        self.line = line
        super().__init__(f"{filename}:{line}: {type(cause).__name__}: {cause}")


@dataclass
class Session:
    env: GlobalEnv = field(default_factory=GlobalEnv)
    configs: dict = field(default_factory=dict)
    annotations: dict[str, list[tuple[tuple[int, ...], Role]]] = field(default_factory=dict)
    declared: list[str] = field(default_factory=list)
    # (configuration name, source name) -> repaired name
    repaired: dict[tuple[str, str], str] = field(default_factory=dict)
    reports: dict = field(default_factory=dict)
    emitted: list[str] = field(default_factory=list)
    scripts: dict[str, str] = field(default_factory=dict)
    log: list[str] = field(default_factory=list)
    cache: object = None

    def __post_init__(self) -> None:
        if self.env is None:
            self.env = GlobalEnv()

    def run_text(self, text: str, filename: str = "<input>") -> None:
        for cmd in parse_file(text):
            self.run(cmd, filename)

    def run(self, cmd: Vernacular, filename: str = "<input>") -> None:
        try:
            self._dispatch(cmd)
        except EqRepairError as e:
            raise CommandError(e, filename, getattr(cmd, "line", 0)) from e

    def term(self, t: Term, inductives: tuple[str, ...] = ()) -> Term:
        return resolve(self.env, t, inductives)

    def _dispatch(self, cmd: Vernacular) -> None:
        if isinstance(cmd, InductiveCmd):
            own = (cmd.name,)
            decl = InductiveDecl(
                cmd.name,
                tuple((n, self.term(t)) for n, t in cmd.params),
                self.term(cmd.arity),
                tuple((n, self.term(t, own)) for n, t in cmd.constructors),
            )
            self.env = declare_inductive(self.env, decl)
            self.declared.append(cmd.name)
        elif isinstance(cmd, DefinitionCmd):
            self.env = add_definition(self.env, cmd.name, self.term(cmd.type), self.term(cmd.body))
            self.declared.append(cmd.name)
        elif isinstance(cmd, AxiomCmd):
            self.env = add_assumption(self.env, cmd.name, self.term(cmd.type))
            self.declared.append(cmd.name)
        elif isinstance(cmd, OpaqueCmd):
            self.env = self.env.with_opaque(cmd.names)
        elif isinstance(cmd, AnnotateCmd):
            self.env.definition(cmd.name)
            self.annotations.setdefault(cmd.name, []).append((cmd.path, cmd.role))
        elif isinstance(cmd, ConfigureCmd):
            from .commands import run_configure

            run_configure(self, cmd)
        elif isinstance(cmd, (RepairCmd, RepairModuleCmd)):
            from .commands import run_repair

            run_repair(self, cmd)
        elif isinstance(cmd, DecompileCmd):
            from .commands import run_decompile

            run_decompile(self, cmd)
        else:  # pragma: no cover
            raise UnknownName(f"unsupported command {type(cmd).__name__}")
