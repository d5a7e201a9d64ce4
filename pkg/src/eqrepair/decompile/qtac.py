"""Tactic script syntax: AST, printer and parser."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

from ..errors import ParseError
from ..frontend.parser import Parser, resolve
from ..frontend.printer import APP, ATOM, _Printer
from ..kernel.env import GlobalEnv
from ..kernel.terms import Term


@dataclass(frozen=True)
class Intro:
    name: str


@dataclass(frozen=True)
class Intros:
    names: tuple[str, ...]


@dataclass(frozen=True)
class Symmetry:
    pass


@dataclass(frozen=True)
class Reflexivity:
    """Closes ``eq A x y`` when ``x`` and ``y`` are convertible."""


@dataclass(frozen=True)
class Apply:
    term: Term


@dataclass(frozen=True)
class Rewrite:
    """Rewrite with ``eq``: forward turns goal ``P x`` into ``P y`` for
    ``eq A x y``; ``reverse`` turns ``P y`` into ``P x``.  A missing motive
    is inferred by abstracting occurrences in the goal."""

    motive: Term | None
    eq: Term
    reverse: bool = False


@dataclass(frozen=True)
class Induction:
    motive: Term | None
    target: Term
    branches: tuple["Script", ...]


@dataclass(frozen=True)
class Split:
    left: "Script"
    right: "Script"


@dataclass(frozen=True)
class Left:
    pass


@dataclass(frozen=True)
class Right:
    pass


@dataclass(frozen=True)
class Seq:
    """``first. rest``; ``first`` must leave exactly one goal."""

    first: "Tactic"
    rest: "Script"


Tactic = Union[Intro, Intros, Symmetry, Reflexivity, Apply, Rewrite, Left, Right]
Script = Union[Tactic, Induction, Split, Seq]


def seq(*steps: Script) -> Script:
    out = steps[-1]
    for s in reversed(steps[:-1]):
        out = Seq(s, out)  # type: ignore[arg-type]
    return out


def steps(s: Script) -> list[Script]:
    """The linear prefix of ``s`` followed by its final (possibly branching) step."""
    out = []
    while isinstance(s, Seq):
        out.append(s.first)
        s = s.rest
    out.append(s)
    return out


def size(s: Script) -> int:
    if isinstance(s, Seq):
        return size(s.first) + size(s.rest)
    if isinstance(s, Induction):
        return 1 + sum(size(b) for b in s.branches)
    if isinstance(s, Split):
        return 1 + size(s.left) + size(s.right)
    return 1


# ---------------------------------------------------------------------------
# printing


def bullet(level: int) -> str:
    return "-+*"[level % 3] * (level // 3 + 1)


def _atom(t: Term, names: Sequence[str], env=None) -> str:
    return _Printer(names, env).go(t, ATOM)


def _sentence(t: Script, names: list[str], env=None) -> str:
    if isinstance(t, Intro):
        names.append(t.name)
        return f"intro {t.name}."
    if isinstance(t, Intros):
        names.extend(t.names)
        return "intros " + " ".join(t.names) + "."
    if isinstance(t, Symmetry):
        return "symmetry."
    if isinstance(t, Reflexivity):
        return "reflexivity."
    if isinstance(t, Left):
        return "left."
    if isinstance(t, Right):
        return "right."
    if isinstance(t, Apply):
        return f"apply {_Printer(names, env).go(t.term, APP)}."
    if isinstance(t, Rewrite):
        arrow = "<- " if t.reverse else ""
        motive = _atom(t.motive, names, env) + " " if t.motive is not None else ""
        return f"rewrite {arrow}{motive}{_atom(t.eq, names, env)}."
    if isinstance(t, Induction):
        motive = _atom(t.motive, names, env) + " " if t.motive is not None else ""
        return f"induction {motive}{_atom(t.target, names, env)}."
    if isinstance(t, Split):
        return "split."
    raise TypeError(f"not a tactic: {t!r}")


def _print(s: Script, names: list[str], level: int, lines: list[str], lead: str, env=None) -> None:
    parts = []
    for t in steps(s):
        parts.append(_sentence(t, names, env))
    lines.append(lead + " ".join(parts))
    last = steps(s)[-1]
    branches: Sequence[Script] = ()
    if isinstance(last, Induction):
        branches = last.branches
    elif isinstance(last, Split):
        branches = (last.left, last.right)
    pad = "  " * level
    for b in branches:
        _print(b, list(names), level + 1, lines, f"{pad}{bullet(level)} ", env)


def print_script(s: Script, names: Sequence[str] = (), env=None) -> str:
    """Render ``s``; ``names`` are the goal context names, outermost first.

    With ``env``, constructors print by name; parse such scripts with the same env.
    """
    lines: list[str] = []
    _print(s, list(names), 0, lines, "", env)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing

_BULLET = re.compile(r"^(\s*)(-+|\++|\*+)(?=\s)")


@dataclass
class _Bullet:
    text: str
    line: int


class _ScriptParser:
    def __init__(self, text: str, env: GlobalEnv | None):
        self.env = env
        self.chunks: list = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            m = _BULLET.match(raw)
            body = raw
            if m:
                self.chunks.append(_Bullet(m.group(2), lineno))
                body = " " * m.end() + raw[m.end():]
            if body.strip():
                # pad so parse errors report the right line
                p = Parser("\n" * (lineno - 1) + body)
                self.chunks.append(p)
        self.i = 0

    def current(self):
        while self.i < len(self.chunks):
            c = self.chunks[self.i]
            if isinstance(c, Parser) and c.tok.kind == "eof":
                self.i += 1
                continue
            return c
        return None

    def term(self, p: Parser, scope: list[str], atom: bool) -> Term:
        t = p.atom(scope) if atom else p.term(scope)
        return resolve(self.env, t) if self.env is not None else t

    def script(self, level: int, scope: list[str]) -> Script:
        tactics: list[Script] = []
        while True:
            c = self.current()
            if c is None or isinstance(c, _Bullet):
                break
            tac = self.tactic(c, scope)
            if isinstance(tac, (Induction, Split)):
                branches = []
                while isinstance(b := self.current(), _Bullet) and b.text == bullet(level):
                    self.i += 1
                    branches.append(self.script(level + 1, list(scope)))
                if isinstance(tac, Split):
                    if len(branches) != 2:
                        raise ParseError("split needs exactly two branches", *self._pos())
                    tac = Split(branches[0], branches[1])
                else:
                    tac = Induction(tac.motive, tac.target, tuple(branches))
                tactics.append(tac)
                break
            tactics.append(tac)
        if not tactics:
            raise ParseError("empty script", *self._pos())
        return seq(*tactics)

    def _pos(self) -> tuple[int, int]:
        c = self.current()
        if isinstance(c, Parser):
            return c.tok.line, c.tok.col
        if isinstance(c, _Bullet):
            return c.line, 1
        return 0, 0

    def tactic(self, p: Parser, scope: list[str]) -> Script:
        tok = p.tok
        name = p.ident()
        if name == "intro":
            n = p.ident()
            scope.append(n)
            out: Script = Intro(n)
        elif name == "intros":
            names = [p.ident()]
            while p.tok.kind == "id":
                names.append(p.ident())
            scope.extend(names)
            out = Intros(tuple(names))
        elif name in ("symmetry", "reflexivity", "left", "right", "split"):
            out = {"symmetry": Symmetry(), "reflexivity": Reflexivity(), "left": Left(), "right": Right(),
                   "split": Split(Reflexivity(), Reflexivity())}[name]
        elif name == "apply":
            out = Apply(self.term(p, scope, atom=False))
        elif name == "rewrite":
            reverse = p.accept("<-")
            first = self.term(p, scope, atom=True)
            if p.at("."):
                out = Rewrite(None, first, reverse)
            else:
                out = Rewrite(first, self.term(p, scope, atom=True), reverse)
        elif name == "induction":
            first = self.term(p, scope, atom=True)
            if p.at("."):
                out = Induction(None, first, ())
            else:
                out = Induction(first, self.term(p, scope, atom=True), ())
        else:
            raise ParseError(f"unknown tactic {name!r}", tok.line, tok.col)
        p.expect(".")
        return out


def parse_script(text: str, env: GlobalEnv | None = None, names: Sequence[str] = ()) -> Script:
    """Parse printed script text; with ``env``, names are resolved to inductives."""
    sp = _ScriptParser(text, env)
    s = sp.script(0, list(names))
    if sp.current() is not None:
        raise ParseError("unexpected bullet", *sp._pos())
    return s
