"""Vernacular command AST."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..kernel.terms import Term


@dataclass(frozen=True)
class Role:
    """A configuration role: ``dep_constr``/``iota`` carry a constructor index."""

    kind: str  # dep_constr | dep_elim | eta | iota | type
    index: int | None = None

    def __str__(self) -> str:
        return self.kind if self.index is None else f"{self.kind} {self.index}"


@dataclass(frozen=True)
class InductiveCmd:
    name: str
    params: tuple[tuple[str, Term], ...]
    arity: Term
    constructors: tuple[tuple[str, Term], ...]
    line: int = 0


@dataclass(frozen=True)
class DefinitionCmd:
    name: str
    type: Term
    body: Term
    line: int = 0


@dataclass(frozen=True)
class AxiomCmd:
    name: str
    type: Term
    line: int = 0


@dataclass(frozen=True)
class OpaqueCmd:
    names: tuple[str, ...]
    line: int = 0


@dataclass(frozen=True)
class ConfigureCmd:
    name: str
    type_a: Term
    type_b: Term
    fields: dict = field(hash=False)
    trusted: tuple[str, ...] = ()
    line: int = 0


@dataclass(frozen=True)
class RepairCmd:
    type_a: str
    type_b: str
    target: str
    as_name: str | None = None
    config: str | None = None
    mapping: int | None = None
    suggest: bool = False
    line: int = 0


@dataclass(frozen=True)
class RepairModuleCmd:
    type_a: str
    type_b: str
    names: tuple[str, ...]
    config: str | None = None
    mapping: int | None = None
    suggest: bool = False
    line: int = 0


@dataclass(frozen=True)
class DecompileCmd:
    name: str
    line: int = 0


@dataclass(frozen=True)
class AnnotateCmd:
    name: str
    path: tuple[int, ...]
    role: Role
    line: int = 0


Vernacular = Union[
    InductiveCmd,
    DefinitionCmd,
    AxiomCmd,
    OpaqueCmd,
    ConfigureCmd,
    RepairCmd,
    RepairModuleCmd,
    DecompileCmd,
    AnnotateCmd,
]
