"""Concrete syntax printer.  ``parse(print_term(t))`` is α-equal to ``t``."""

from __future__ import annotations

from typing import Sequence

from ..kernel.terms import (
    App,
    Const,
    Constr,
    Elim,
    Fv,
    Ind,
    Lam,
    Pi,
    Sort,
    Term,
    Var,
    children,
    global_names,
    spine,
    var_occurs,
)

KEYWORDS = frozenset(
    {
        "fun", "forall", "Elim", "Constr", "Inductive", "Definition", "Axiom", "Opaque",
        "Configure", "Repair", "module", "in", "as", "using", "mapping", "suggest",
        "tactics", "Decompile", "Annotate", "Theorem", "Lemma",
    }
)

BINDER, APP, ATOM = 0, 1, 2


def fresh_name(base: str, taken: set[str] | Sequence[str]) -> str:
    if not base or base == "_" or base in KEYWORDS or base.startswith("Type"):
        base = "x"
    name = base
    while name in taken:
        name += "'"
    return name


def constructor_names(t: Term, env) -> set[str]:
    """Names of the constructors occurring in ``t``."""
    out: set[str] = set()

    def go(u: Term) -> None:
        if isinstance(u, Constr):
            head, _ = spine(u.ind)
            if isinstance(head, Ind) and env.is_inductive(head.name):
                out.add(env.inductive(head.name).constructors[u.index][0])
        for c in children(u):
            go(c)

    go(t)
    return out


class _Printer:
    def __init__(self, names: Sequence[str], env=None):
        self.names = list(names)
        self.env = env

    def var(self, i: int) -> str:
        if i < len(self.names):
            return self.names[-1 - i]
        return f"#{i}"

    def bind(self, hint: str, body: Term) -> str:
        taken = set(self.names) | global_names(body)
        if self.env is not None:
            taken |= constructor_names(body, self.env)
        return fresh_name(hint, taken)

    def go(self, t: Term, prec: int) -> str:
        if isinstance(t, Var):
            return self.var(t.idx)
        if isinstance(t, Fv):
            return t.name
        if isinstance(t, Sort):
            return f"Type{t.level}"
        if isinstance(t, (Ind, Const)):
            return t.name
        if isinstance(t, Constr):
            named = self.constructor(t)
            if named is None:
                return f"Constr({t.index}, {self.go(t.ind, BINDER)})"
            return self.applied(named, [], prec)
        if isinstance(t, Elim):
            cases = " | ".join(self.go(c, BINDER) for c in t.cases)
            inner = f" {cases} " if t.cases else " "
            return f"Elim({self.go(t.scrut, BINDER)}, {self.go(t.motive, BINDER)}) {{{inner}}}"
        if isinstance(t, App):
            head, args = spine(t)
            named = self.constructor(head) if isinstance(head, Constr) else None
            if named is not None:
                return self.applied(named, list(args), prec)
            s = " ".join([self.go(head, APP)] + [self.go(a, ATOM) for a in args])
            return s if prec <= APP else f"({s})"
        if isinstance(t, Pi):
            if not var_occurs(t.cod, 0):
                dom = self.go(t.dom, APP)
                self.names.append("_")
                cod = self.go(t.cod, BINDER)
                self.names.pop()
                s = f"{dom} -> {cod}"
            else:
                s = "forall " + self.binders(t, Pi) + ", "
                s += self.rest
            return s if prec == BINDER else f"({s})"
        if isinstance(t, Lam):
            s = "fun " + self.binders(t, Lam) + " => " + self.rest
            return s if prec == BINDER else f"({s})"
        raise ValueError(f"cannot print {type(t).__name__}")

    def constructor(self, t: Constr) -> tuple[str, list[Term]] | None:
        """Constructor name and parameters, when ``t`` can be printed by name."""
        if self.env is None:
            return None
        head, params = spine(t.ind)
        if not (isinstance(head, Ind) and self.env.is_inductive(head.name)):
            return None
        decl = self.env.inductive(head.name)
        if len(params) != len(decl.params) or head.name in self.names:
            return None
        name = decl.constructors[t.index][0]
        return None if name in self.names else (name, list(params))

    def applied(self, named: tuple[str, list[Term]], args: list[Term], prec: int) -> str:
        name, params = named
        parts = [name] + [self.go(a, ATOM) for a in params + args]
        if len(parts) == 1:
            return name
        s = " ".join(parts)
        return s if prec <= APP else f"({s})"

    def binders(self, t: Term, kind: type) -> str:
        """Print a run of binders of one kind; leaves the body text in ``rest``."""
        groups: list[str] = []
        pushed = 0
        while isinstance(t, kind):
            body = t.cod if kind is Pi else t.body  # type: ignore[attr-defined]
            if kind is Pi and pushed and not var_occurs(body, 0):
                break
            name = self.bind(t.name, body)  # type: ignore[attr-defined]
            groups.append(f"({name} : {self.go(t.dom, BINDER)})")  # type: ignore[attr-defined]
            self.names.append(name)
            pushed += 1
            t = body
        self.rest = self.go(t, BINDER)
        del self.names[len(self.names) - pushed :]
        return " ".join(groups)


def print_term(t: Term, names: Sequence[str] = (), env=None) -> str:
    """Render ``t``; ``names`` are the context binder names, outermost first.

    With ``env``, constructors print by name instead of as ``Constr(j, I)``.
    """
    return _Printer(names, env).go(t, BINDER)


def print_declaration(env, name: str) -> str:
    """Vernacular text that re-declares ``name`` as it stands in ``env``."""
    from ..kernel.env import Assumption, Definition, InductiveDecl

    entry = env.lookup(name)
    if isinstance(entry, InductiveDecl):
        names: list[str] = []
        params = []
        for pname, ty in entry.params:
            params.append(f" ({pname} : {print_term(ty, names)})")
            names.append(pname)
        head = f"Inductive {name}{''.join(params)} : {print_term(entry.arity, names)} :="
        ctors = [f"\n| {c} : {print_term(ty, names)}" for c, ty in entry.constructors]
        return head + "".join(ctors) + ".\n"
    if isinstance(entry, Definition):
        return f"Definition {name} : {print_term(entry.type, env=env)} :=\n  {print_term(entry.body, env=env)}.\n"
    if isinstance(entry, Assumption):
        return f"Axiom {name} : {print_term(entry.type, env=env)}.\n"
    raise TypeError(f"cannot print {type(entry).__name__}")
