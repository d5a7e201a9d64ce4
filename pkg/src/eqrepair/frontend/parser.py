"""Lexer and recursive-descent parser for terms and vernacular files.

Free identifiers parse to ``Const``; :func:`resolve` later turns inductive
and constructor names into ``Ind``/``Constr`` against an environment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from ..errors import ParseError, UnknownName
from ..kernel.env import GlobalEnv
from ..kernel.terms import (
    App,
    Const,
    Constr,
    Elim,
    Ind,
    Lam,
    Pi,
    Sort,
    Term,
    Var,
    app,
    shift,
    spine,
)
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

IDENT = r"[A-Za-z_][A-Za-z0-9_']*(?:\.[A-Za-z_][A-Za-z0-9_']*)*"
_TOKEN = re.compile(
    rf"(?P<ws>\s+)|(?P<num>\d+)|(?P<id>{IDENT})|(?P<sym>:=|=>|->|<-|[(){{}}\[\],:|;.~])"
)
_SORT = re.compile(r"Type(\d+)")

ROLE_KINDS = ("dep_constr", "dep_elim", "eta", "iota", "type")


@dataclass(frozen=True)
class Token:
    kind: str  # id | num | sym | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(s: str) -> None:
        nonlocal line, col
        for ch in s:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1

    while i < n:
        if text.startswith("(*", i):
            depth, j = 0, i
            start = (line, col)
            while j < n:
                if text.startswith("(*", j):
                    depth, j = depth + 1, j + 2
                elif text.startswith("*)", j):
                    depth, j = depth - 1, j + 2
                    if depth == 0:
                        break
                else:
                    j += 1
            if depth:
                raise ParseError("unterminated comment", *start)
            advance(text[i:j])
            i = j
            continue
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "sym" and s == ".":
            nxt = text[m.end() : m.end() + 1]
            if nxt and not nxt.isspace() and not text.startswith("(*", m.end()):
                raise ParseError("'.' must be followed by whitespace", line, col)
        if kind != "ws":
            out.append(Token(kind, s, line, col))  # type: ignore[arg-type]
        advance(s)
        i = m.end()
    out.append(Token("eof", "", line, col))
    return out


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    # token helpers -----------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        t = tok or self.tok
        return ParseError(msg, t.line, t.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("sym", "id") and self.tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        t = self.tok
        self.pos += 1
        return t

    def ident(self) -> str:
        if self.tok.kind != "id":
            raise self.error(f"expected identifier, found {self.tok.text or 'end of input'!r}")
        s = self.tok.text
        self.pos += 1
        return s

    def number(self) -> int:
        if self.tok.kind != "num":
            raise self.error("expected a number")
        v = int(self.tok.text)
        self.pos += 1
        return v

    # terms ---------------------------------------------------------------
    def term(self, scope: list[str]) -> Term:
        if self.at("fun") or self.at("forall"):
            kind = Lam if self.tok.text == "fun" else Pi
            self.pos += 1
            binders = self.binders(scope)
            self.expect("=>" if kind is Lam else ",")
            inner = scope + [n for n, _ in binders]
            body = self.term(inner)
            for name, dom in reversed(binders):
                body = kind(name, dom, body)
            return body
        lhs = self.application(scope)
        if self.accept("->"):
            rhs = self.term(scope + ["_"])
            return Pi("_", lhs, rhs)
        return lhs

    def binders(self, scope: list[str]) -> list[tuple[str, Term]]:
        """``(x y : T) (z : U)`` with types scoped over earlier binders."""
        out: list[tuple[str, Term]] = []
        if not self.at("("):
            raise self.error("expected '(' to open a binder")
        while self.accept("("):
            names = [self.ident()]
            while self.tok.kind == "id":
                names.append(self.ident())
            self.expect(":")
            local = scope + [n for n, _ in out]
            ty = self.term(local)
            self.expect(")")
            for k, n in enumerate(names):
                out.append((n, shift(ty, k)))
        return out

    def application(self, scope: list[str]) -> Term:
        head = self.atom(scope)
        while self._starts_atom():
            head = App(head, self.atom(scope))
        return head

    def _starts_atom(self) -> bool:
        t = self.tok
        if t.kind == "id":
            return t.text not in ("fun", "forall", "in", "as", "using", "mapping", "suggest")
        return t.kind == "sym" and t.text == "("

    def atom(self, scope: list[str]) -> Term:
        t = self.tok
        if t.kind == "sym" and t.text == "(":
            self.pos += 1
            inner = self.term(scope)
            self.expect(")")
            return inner
        if t.kind != "id":
            raise self.error(f"unexpected {t.text or 'end of input'!r}")
        if t.text == "Constr":
            self.pos += 1
            self.expect("(")
            idx = self.number()
            self.expect(",")
            ind = self.term(scope)
            self.expect(")")
            return Constr(idx, ind)
        if t.text == "Elim":
            self.pos += 1
            self.expect("(")
            scrut = self.term(scope)
            self.expect(",")
            motive = self.term(scope)
            self.expect(")")
            self.expect("{")
            cases: list[Term] = []
            if not self.at("}"):
                cases.append(self.term(scope))
                while self.accept("|"):
                    cases.append(self.term(scope))
            self.expect("}")
            return Elim(scrut, motive, tuple(cases))
        if t.text in ("fun", "forall"):
            return self.term(scope)
        self.pos += 1
        m = _SORT.fullmatch(t.text)
        if m:
            return Sort(int(m.group(1)))
        for k in range(len(scope) - 1, -1, -1):
            if scope[k] == t.text and t.text != "_":
                return Var(len(scope) - 1 - k)
        return Const(t.text)

    # vernacular ------------------------------------------------------------
    def file(self) -> list[Vernacular]:
        out: list[Vernacular] = []
        while self.tok.kind != "eof":
            out.append(self.command())
        return out

    def command(self) -> Vernacular:
        t = self.tok
        kw = t.text
        if t.kind != "id":
            raise self.error(f"expected a command, found {t.text!r}")
        self.pos += 1
        if kw == "Inductive":
            cmd = self.inductive(t.line)
        elif kw in ("Definition", "Theorem", "Lemma"):
            name = self.ident()
            self.expect(":")
            ty = self.term([])
            self.expect(":=")
            body = self.term([])
            cmd = DefinitionCmd(name, ty, body, t.line)
        elif kw == "Axiom":
            name = self.ident()
            self.expect(":")
            cmd = AxiomCmd(name, self.term([]), t.line)
        elif kw == "Opaque":
            names = [self.ident()]
            while self.tok.kind == "id":
                names.append(self.ident())
            cmd = OpaqueCmd(tuple(names), t.line)
        elif kw == "Configure":
            cmd = self.configure(t.line)
        elif kw == "Repair":
            cmd = self.repair(t.line)
        elif kw == "Decompile":
            cmd = DecompileCmd(self.ident(), t.line)
        elif kw == "Annotate":
            name = self.ident()
            path = self.int_list()
            cmd = AnnotateCmd(name, tuple(path), self.role(), t.line)
        else:
            raise ParseError(f"unknown command {kw!r}", t.line, t.col)
        self.expect(".")
        return cmd

    def inductive(self, line: int) -> InductiveCmd:
        name = self.ident()
        params = self.binders([]) if self.at("(") else []
        scope = [n for n, _ in params]
        self.expect(":")
        arity = self.term(scope)
        self.expect(":=")
        ctors: list[tuple[str, Term]] = []
        while self.accept("|"):
            cname = self.ident()
            self.expect(":")
            ctors.append((cname, self.term(scope)))
        return InductiveCmd(name, tuple(params), arity, tuple(ctors), line)

    def int_list(self) -> list[int]:
        self.expect("[")
        out: list[int] = []
        if not self.at("]"):
            out.append(self.number())
            while self.accept(";"):
                out.append(self.number())
        self.expect("]")
        return out

    def role(self) -> Role:
        kind = self.ident()
        if kind not in ROLE_KINDS:
            raise self.error(f"unknown role {kind!r}", self.peek(-1))
        if kind in ("dep_constr", "iota"):
            return Role(kind, self.number())
        return Role(kind)

    def configure(self, line: int) -> ConfigureCmd:
        name = self.ident()
        self.expect(":")
        a = self.application([])
        self.expect("~")
        b = self.application([])
        self.expect(":=")
        self.expect("{")
        fields: dict = {}
        trusted: list[str] = []
        while not self.at("}"):
            key_tok = self.tok
            key = self.ident()
            if key in fields or (key == "trusted" and trusted):
                raise ParseError(f"duplicate field {key!r}", key_tok.line, key_tok.col)
            self.expect(":=")
            if key == "trusted":
                self.expect("[")
                if not self.at("]"):
                    trusted.append(self.ident())
                    while self.accept(";"):
                        trusted.append(self.ident())
                self.expect("]")
            elif self.accept("["):
                items: list[Term] = []
                if not self.at("]"):
                    items.append(self.term([]))
                    while self.accept(";"):
                        items.append(self.term([]))
                self.expect("]")
                fields[key] = items
            else:
                fields[key] = self.term([])
            if not self.accept(";"):
                break
        self.expect("}")
        return ConfigureCmd(name, a, b, fields, tuple(trusted), line)

    def repair(self, line: int) -> RepairCmd | RepairModuleCmd:
        module = self.accept("module")
        a = self.ident()
        b = self.ident()
        self.expect("in")
        if module:
            self.expect("[")
            names = [self.ident()]
            while self.accept(",") or self.accept(";"):
                names.append(self.ident())
            self.expect("]")
        else:
            target = self.ident()
        as_name = config = None
        mapping = None
        suggest = False
        while True:
            if not module and self.accept("as"):
                as_name = self.ident()
            elif self.accept("using"):
                config = self.ident()
            elif self.accept("mapping"):
                mapping = self.number()
            elif self.accept("suggest"):
                self.expect("tactics")
                suggest = True
            else:
                break
        if module:
            return RepairModuleCmd(a, b, tuple(names), config, mapping, suggest, line)
        return RepairCmd(a, b, target, as_name, config, mapping, suggest, line)


def parse_file(text: str) -> list[Vernacular]:
    return Parser(text).file()


def parse_term(text: str, scope: Iterable[str] = ()) -> Term:
    p = Parser(text)
    t = p.term(list(scope))
    if p.tok.kind != "eof":
        raise p.error(f"trailing input {p.tok.text!r}")
    return t


# ---------------------------------------------------------------------------
# name resolution


def resolve(env: GlobalEnv, t: Term, inductives: Iterable[str] = ()) -> Term:
    """Turn inductive and constructor names into ``Ind``/``Constr`` nodes.

    A constructor name applied to at least the inductive's parameter count
    becomes ``Constr(j, I params)`` applied to the remaining arguments.
    """
    local = frozenset(inductives)

    def go(u: Term) -> Term:
        if isinstance(u, App) or isinstance(u, Const):
            head, args = spine(u)
            if isinstance(head, Const):
                args = [go(a) for a in args]
                n = head.name
                if n in local or env.is_inductive(n):
                    return app(Ind(n), *args)
                ctor = env.constructor(n)
                if ctor is not None:
                    ind, j = ctor
                    np = env.inductive(ind).n_params
                    if len(args) < np:
                        raise UnknownName(
                            f"constructor {n} needs its {np} parameter(s) supplied explicitly"
                        )
                    return app(Constr(j, app(Ind(ind), *args[:np])), *args[np:])
                if n not in env:
                    raise UnknownName(f"unknown identifier {n}")
                return app(head, *args)
            return app(go(head), *(go(a) for a in args))
        if isinstance(u, Pi):
            return Pi(u.name, go(u.dom), go(u.cod))
        if isinstance(u, Lam):
            return Lam(u.name, go(u.dom), go(u.body))
        if isinstance(u, Constr):
            return Constr(u.index, go(u.ind))
        if isinstance(u, Elim):
            return Elim(go(u.scrut), go(u.motive), tuple(go(c) for c in u.cases))
        return u

    return go(t)
