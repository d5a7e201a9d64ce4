"""Global environment and local typing contexts."""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union

from ..errors import DuplicateName, UnknownInductive, UnknownName
from .terms import Ind, Pi, Term, Var, app, instantiate_many, shift, spine

_versions = itertools.count(1)


@dataclass(frozen=True)
class InductiveDecl:
    """An inductive family.

    Constructor types live under the parameter telescope: ``Var(0)`` in a
    constructor type (outside its own binders) is the last parameter.
    ``arity`` is the index telescope ending in a sort, also under the
    parameters.
    """

    name: str
    params: tuple[tuple[str, Term], ...]
    arity: Term
    constructors: tuple[tuple[str, Term], ...]

    @property
    def n_params(self) -> int:
        return len(self.params)

    @property
    def n_indices(self) -> int:
        n, t = 0, self.arity
        while isinstance(t, Pi):
            n, t = n + 1, t.cod
        return n

    @property
    def sort_level(self) -> int:
        t = self.arity
        while isinstance(t, Pi):
            t = t.cod
        return t.level  # type: ignore[attr-defined]

    def full_arity(self) -> Term:
        """Closed type of the inductive itself: Π params, arity."""
        t = self.arity
        for name, ty in reversed(self.params):
            t = Pi(name, ty, t)
        return t

    def ctor_arity(self, j: int) -> int:
        n, t = 0, self.constructors[j][1]
        while isinstance(t, Pi):
            n, t = n + 1, t.cod
        return n

    def ctor_type(self, j: int, params: Sequence[Term]) -> Term:
        return instantiate_many(self.constructors[j][1], list(params))

    def ctor_names(self) -> list[str]:
        return [c for c, _ in self.constructors]

    def is_recursive_dom(self, dom: Term) -> bool:
        """Whether a constructor argument type is (Π ys.) an instance of this family."""
        while isinstance(dom, Pi):
            dom = dom.cod
        head, _ = spine(dom)
        return isinstance(head, Ind) and head.name == self.name


@dataclass(frozen=True)
class Definition:
    name: str
    type: Term
    body: Term


@dataclass(frozen=True)
class Assumption:
    name: str
    type: Term


Entry = Union[InductiveDecl, Definition, Assumption]


class GlobalEnv:
    """Immutable ordered mapping from identifiers to declarations.

    Every extension returns a new environment.  Each environment carries a
    unique ``version`` and its own normalization memo.
    """

    __slots__ = ("_entries", "_ctors", "opaque", "version", "_memo", "_lock")

    def __init__(
        self,
        entries: Mapping[str, Entry] | None = None,
        ctors: Mapping[str, tuple[str, int]] | None = None,
        opaque: frozenset[str] = frozenset(),
    ):
        self._entries: dict[str, Entry] = dict(entries or {})
        self._ctors: dict[str, tuple[str, int]] = dict(ctors or {})
        self.opaque = frozenset(opaque)
        self.version = next(_versions)
        self._memo: dict = {}
        self._lock = threading.Lock()

    # lookup -----------------------------------------------------------
    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> list[str]:
        return list(self._entries)

    def get(self, name: str) -> Entry | None:
        return self._entries.get(name)

    def lookup(self, name: str) -> Entry:
        try:
            return self._entries[name]
        except KeyError:
            raise UnknownName(f"unknown identifier {name}") from None

    def inductive(self, name: str) -> InductiveDecl:
        e = self._entries.get(name)
        if not isinstance(e, InductiveDecl):
            raise UnknownInductive(f"unknown inductive {name}")
        return e

    def is_inductive(self, name: str) -> bool:
        return isinstance(self._entries.get(name), InductiveDecl)

    def constructor(self, name: str) -> tuple[str, int] | None:
        """Map a constructor name to ``(inductive, index)``."""
        return self._ctors.get(name)

    def type_of_const(self, name: str) -> Term:
        e = self.lookup(name)
        if isinstance(e, InductiveDecl):
            return e.full_arity()
        return e.type

    def unfold(self, name: str) -> Term | None:
        """δ-body of ``name`` if it is a transparent definition."""
        if name in self.opaque:
            return None
        e = self._entries.get(name)
        return e.body if isinstance(e, Definition) else None

    def definition(self, name: str) -> Definition:
        e = self.lookup(name)
        if not isinstance(e, Definition):
            raise UnknownName(f"{name} is not a definition")
        return e

    # extension (unchecked; the checked variants live in typing) ---------
    def _taken(self, name: str) -> bool:
        return name in self._entries or name in self._ctors

    def _with(self, entry: Entry, ctors: Sequence[str] = ()) -> "GlobalEnv":
        if self._taken(entry.name):
            raise DuplicateName(f"{entry.name} is already declared")
        new_ctors = dict(self._ctors)
        for j, c in enumerate(ctors):
            if self._taken(c) or c in new_ctors or c == entry.name:
                raise DuplicateName(f"{c} is already declared")
            new_ctors[c] = (entry.name, j)
        entries = dict(self._entries)
        entries[entry.name] = entry
        return GlobalEnv(entries, new_ctors, self.opaque)

    def with_opaque(self, names: Sequence[str]) -> "GlobalEnv":
        for n in names:
            self.lookup(n)
        return GlobalEnv(self._entries, self._ctors, self.opaque | set(names))

    def without_opaque(self, names: Sequence[str]) -> "GlobalEnv":
        return GlobalEnv(self._entries, self._ctors, self.opaque - set(names))

    def memo(self) -> dict:
        return self._memo

    def position(self, name: str) -> int:
        """Declaration order of ``name`` (later declarations are larger)."""
        pos = self._memo.get("__positions__")
        if pos is None:
            pos = {n: i for i, n in enumerate(self._entries)}
            self._memo["__positions__"] = pos
        return pos.get(name, -1)

    @property
    def lock(self) -> threading.Lock:
        return self._lock

    def depends_on_assumptions(self, t: Term, _seen: set[str] | None = None) -> list[str]:
        """Assumptions reachable from ``t`` through definitions."""
        from .terms import global_names

        seen = _seen if _seen is not None else set()
        found: list[str] = []
        stack = sorted(global_names(t))
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            e = self._entries.get(n)
            if isinstance(e, Assumption):
                found.append(n)
            elif isinstance(e, Definition):
                stack.extend(sorted(global_names(e.body) | global_names(e.type)))
        return sorted(found)


@dataclass(frozen=True)
class Context:
    """Local typing assumptions, innermost last."""

    entries: tuple[tuple[str, Term], ...] = field(default=())

    def push(self, name: str, ty: Term) -> "Context":
        return Context(self.entries + ((name, ty),))

    def extend(self, binders: Sequence[tuple[str, Term]]) -> "Context":
        return Context(self.entries + tuple(binders))

    def __len__(self) -> int:
        return len(self.entries)

    def type_of(self, idx: int) -> Term:
        if idx >= len(self.entries):
            raise IndexError(idx)
        _, ty = self.entries[-1 - idx]
        return shift(ty, idx + 1)

    def name_of(self, idx: int) -> str:
        return self.entries[-1 - idx][0]

    def names(self) -> list[str]:
        return [n for n, _ in self.entries]

    def vars(self) -> list[Term]:
        """``Var`` references to every entry, outermost first."""
        n = len(self.entries)
        return [Var(n - 1 - k) for k in range(n)]


EMPTY = Context()


def ind_applied(decl: InductiveDecl, params: Sequence[Term], indices: Sequence[Term] = ()) -> Term:
    return app(Ind(decl.name), *params, *indices)
