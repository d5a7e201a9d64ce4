"""Term syntax and de Bruijn machinery.

Terms are immutable dataclasses.  Binder names are printing hints only and
are excluded from equality and hashing, so ``==`` on terms is α-equality.

``Fv`` is a locally-nameless free variable used while *building* terms
programmatically; it never appears in checked terms or parsed source.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, fields
from typing import Callable, Iterable, Sequence


class Term:
    __slots__ = ()

    def __hash__(self) -> int:
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((type(self).__name__,) + self._key())
            object.__setattr__(self, "_h", h)
        return h

    def _key(self) -> tuple:
        raise NotImplementedError

    def __reduce__(self):
        # drop cached hash/bounds: string hashes differ between processes
        return (type(self), tuple(getattr(self, f.name) for f in fields(self)))

    def __repr__(self) -> str:
        from ..frontend.printer import print_term

        try:
            return print_term(self)
        except Exception:  # printing must never mask a real error
            return object.__repr__(self)


@dataclass(frozen=True, eq=True, repr=False)
class Var(Term):
    idx: int

    def __post_init__(self) -> None:
        if self.idx < 0:
            raise ValueError("negative de Bruijn index")

    def _key(self):
        return (self.idx,)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Fv(Term):
    uid: int
    name: str = field(default="x", compare=False)

    def _key(self):
        return (self.uid,)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Sort(Term):
    level: int

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError("negative universe level")

    def _key(self):
        return (self.level,)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Pi(Term):
    name: str = field(compare=False)
    dom: Term
    cod: Term

    def _key(self):
        return (self.dom, self.cod)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Lam(Term):
    name: str = field(compare=False)
    dom: Term
    body: Term

    def _key(self):
        return (self.dom, self.body)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class App(Term):
    fn: Term
    arg: Term

    def _key(self):
        return (self.fn, self.arg)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Ind(Term):
    name: str

    def _key(self):
        return (self.name,)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Constr(Term):
    index: int
    ind: Term  # the inductive applied to its parameters

    def _key(self):
        return (self.index, self.ind)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Elim(Term):
    scrut: Term
    motive: Term
    cases: tuple[Term, ...]

    def _key(self):
        return (self.scrut, self.motive, self.cases)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Const(Term):
    name: str

    def _key(self):
        return (self.name,)

    __hash__ = Term.__hash__


TYPE0 = Sort(0)
TYPE1 = Sort(1)

_uids = itertools.count(1)


def fresh(name: str = "x") -> Fv:
    return Fv(next(_uids), name)


# --------------------------------------------------------------------------
# generic traversal


def children(t: Term) -> list[Term]:
    """Immediate subterms in child-index order (used for annotation paths)."""
    if isinstance(t, (Pi, Lam)):
        return [t.dom, t.cod if isinstance(t, Pi) else t.body]
    if isinstance(t, App):
        return [t.fn, t.arg]
    if isinstance(t, Constr):
        return [t.ind]
    if isinstance(t, Elim):
        return [t.scrut, t.motive, *t.cases]
    return []


def subterm_at(t: Term, path: Sequence[int]) -> Term:
    for i in path:
        kids = children(t)
        if not 0 <= i < len(kids):
            raise IndexError(f"path component {i} out of range")
        t = kids[i]
    return t


def replace_at(t: Term, path: Sequence[int], new: Term) -> Term:
    if not path:
        return new
    i, rest = path[0], path[1:]
    if isinstance(t, Pi):
        return Pi(t.name, replace_at(t.dom, rest, new), t.cod) if i == 0 else Pi(t.name, t.dom, replace_at(t.cod, rest, new))
    if isinstance(t, Lam):
        return Lam(t.name, replace_at(t.dom, rest, new), t.body) if i == 0 else Lam(t.name, t.dom, replace_at(t.body, rest, new))
    if isinstance(t, App):
        return App(replace_at(t.fn, rest, new), t.arg) if i == 0 else App(t.fn, replace_at(t.arg, rest, new))
    if isinstance(t, Constr):
        return Constr(t.index, replace_at(t.ind, rest, new))
    if isinstance(t, Elim):
        parts = [t.scrut, t.motive, *t.cases]
        parts[i] = replace_at(parts[i], rest, new)
        return Elim(parts[0], parts[1], tuple(parts[2:]))
    raise IndexError("path descends into an atom")


def loose_bound(t: Term) -> int:
    """One more than the largest free de Bruijn index (0 when closed)."""
    d = t.__dict__
    b = d.get("_lb")
    if b is not None:
        return b
    if isinstance(t, Var):
        b = t.idx + 1
    elif isinstance(t, (Pi, Lam)):
        b = max(loose_bound(t.dom), loose_bound(children(t)[1]) - 1)
    elif isinstance(t, App):
        b = max(loose_bound(t.fn), loose_bound(t.arg))
    elif isinstance(t, Constr):
        b = loose_bound(t.ind)
    elif isinstance(t, Elim):
        b = max([loose_bound(t.scrut), loose_bound(t.motive), *(loose_bound(c) for c in t.cases)])
    else:
        b = 0
    object.__setattr__(t, "_lb", b)
    return b


def has_fv(t: Term) -> bool:
    d = t.__dict__
    r = d.get("_fv")
    if r is not None:
        return r
    if isinstance(t, Fv):
        r = True
    else:
        r = any(has_fv(c) for c in children(t))
    object.__setattr__(t, "_fv", r)
    return r


def map_vars(t: Term, fn: Callable[[int, int], Term], depth: int = 0) -> Term:
    """Rebuild ``t`` replacing each loose ``Var`` via ``fn(index, depth)``.

    ``fn`` sees the raw index and the binder depth at the occurrence; it is
    only called for indices ``>= depth``.  Closed subterms are shared.
    """
    if loose_bound(t) <= depth:
        return t
    if isinstance(t, Var):
        return fn(t.idx, depth)
    if isinstance(t, Pi):
        return Pi(t.name, map_vars(t.dom, fn, depth), map_vars(t.cod, fn, depth + 1))
    if isinstance(t, Lam):
        return Lam(t.name, map_vars(t.dom, fn, depth), map_vars(t.body, fn, depth + 1))
    if isinstance(t, App):
        return App(map_vars(t.fn, fn, depth), map_vars(t.arg, fn, depth))
    if isinstance(t, Constr):
        return Constr(t.index, map_vars(t.ind, fn, depth))
    if isinstance(t, Elim):
        return Elim(
            map_vars(t.scrut, fn, depth),
            map_vars(t.motive, fn, depth),
            tuple(map_vars(c, fn, depth) for c in t.cases),
        )
    return t


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    if d == 0 or loose_bound(t) <= cutoff:
        return t

    def f(i: int, depth: int) -> Term:
        if i - depth >= cutoff:
            return Var(i + d)
        return Var(i)

    return map_vars(t, f, 0) if cutoff == 0 else _shift_cut(t, d, cutoff)


def _shift_cut(t: Term, d: int, cutoff: int) -> Term:
    def f(i: int, depth: int) -> Term:
        return Var(i + d) if i >= depth + cutoff else Var(i)

    return map_vars(t, f, 0)


def instantiate_many(body: Term, values: Sequence[Term]) -> Term:
    """Substitute the ``n`` innermost binders of ``body``.

    ``values[0]`` replaces the outermost of those binders (``Var(n-1)``) and
    ``values[-1]`` the innermost (``Var(0)``).  Remaining loose indices drop
    by ``n``.
    """
    n = len(values)
    if n == 0 or loose_bound(body) == 0:
        return body

    def f(i: int, depth: int) -> Term:
        k = i - depth
        if k < n:
            return shift(values[n - 1 - k], depth)
        return Var(i - n)

    return map_vars(body, f, 0)


def instantiate(body: Term, value: Term) -> Term:
    return instantiate_many(body, [value])


def abstract_many(t: Term, fvs: Sequence[Fv]) -> Term:
    """Turn ``fvs`` into de Bruijn variables for ``len(fvs)`` new binders.

    ``fvs[0]`` becomes the outermost binder.  Loose indices already present
    in ``t`` are shifted past the new binders.
    """
    n = len(fvs)
    if n == 0:
        return t
    pos = {fv.uid: n - 1 - k for k, fv in enumerate(fvs)}
    return _abstract(t, pos, n, 0)


def _abstract(t: Term, pos: dict[int, int], n: int, depth: int) -> Term:
    if not has_fv(t) and loose_bound(t) <= depth:
        return t
    if isinstance(t, Fv):
        k = pos.get(t.uid)
        return t if k is None else Var(k + depth)
    if isinstance(t, Var):
        return Var(t.idx + n) if t.idx >= depth else t
    if isinstance(t, Pi):
        return Pi(t.name, _abstract(t.dom, pos, n, depth), _abstract(t.cod, pos, n, depth + 1))
    if isinstance(t, Lam):
        return Lam(t.name, _abstract(t.dom, pos, n, depth), _abstract(t.body, pos, n, depth + 1))
    if isinstance(t, App):
        return App(_abstract(t.fn, pos, n, depth), _abstract(t.arg, pos, n, depth))
    if isinstance(t, Constr):
        return Constr(t.index, _abstract(t.ind, pos, n, depth))
    if isinstance(t, Elim):
        return Elim(
            _abstract(t.scrut, pos, n, depth),
            _abstract(t.motive, pos, n, depth),
            tuple(_abstract(c, pos, n, depth) for c in t.cases),
        )
    return t


def abstract(t: Term, fv: Fv) -> Term:
    return abstract_many(t, [fv])


# --------------------------------------------------------------------------
# builders


def app(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def apps(f: Term, args: Iterable[Term]) -> Term:
    return app(f, *args)


def spine(t: Term) -> tuple[Term, list[Term]]:
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def pi(fv: Fv, dom: Term, body: Term) -> Pi:
    return Pi(fv.name, dom, abstract(body, fv))


def lam(fv: Fv, dom: Term, body: Term) -> Lam:
    return Lam(fv.name, dom, abstract(body, fv))


def pis(binders: Sequence[tuple[Fv, Term]], body: Term) -> Term:
    for fv, dom in reversed(binders):
        body = pi(fv, dom, body)
    return body


def lams(binders: Sequence[tuple[Fv, Term]], body: Term) -> Term:
    for fv, dom in reversed(binders):
        body = lam(fv, dom, body)
    return body


def arrow(dom: Term, cod: Term) -> Pi:
    return Pi("_", dom, shift(cod, 1))


def open_pi(t: Pi | Lam, name: str | None = None) -> tuple[Fv, Term]:
    """Open one binder with a fresh ``Fv``; returns the variable and body."""
    x = fresh(name or t.name)
    body = t.cod if isinstance(t, Pi) else t.body
    return x, instantiate(body, x)


def global_names(t: Term) -> set[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, (Const, Ind)):
            out.add(u.name)
        else:
            stack.extend(children(u))
    return out


def mentions(t: Term, names: set[str] | frozenset[str]) -> bool:
    return not global_names(t).isdisjoint(names)


def var_occurs(t: Term, idx: int, depth: int = 0) -> bool:
    if loose_bound(t) <= idx + depth:
        return False
    if isinstance(t, Var):
        return t.idx == idx + depth
    if isinstance(t, (Pi, Lam)):
        a, b = children(t)
        return var_occurs(a, idx, depth) or var_occurs(b, idx, depth + 1)
    return any(var_occurs(c, idx, depth) for c in children(t))


def size(t: Term) -> int:
    return 1 + sum(size(c) for c in children(t))
