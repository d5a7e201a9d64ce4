"""β-only rewriting: full β-normal form and hereditary substitution.

Hereditary substitution reduces exactly the redexes created by the
substitution itself and leaves redexes already present in the substituted
values alone.
"""

from __future__ import annotations

from typing import Sequence

from .terms import App, Constr, Elim, Lam, Pi, Term, Var, app, instantiate, loose_bound, shift, spine


def beta_normalize(t: Term) -> Term:
    head, args = spine(t)
    while isinstance(head, Lam) and args:
        head, more = spine(instantiate(head.body, args[0]))
        args = more + args[1:]
    args = [beta_normalize(a) for a in args]
    if isinstance(head, Lam):
        head = Lam(head.name, beta_normalize(head.dom), beta_normalize(head.body))
    elif isinstance(head, Pi):
        head = Pi(head.name, beta_normalize(head.dom), beta_normalize(head.cod))
    elif isinstance(head, Elim):
        head = Elim(
            beta_normalize(head.scrut),
            beta_normalize(head.motive),
            tuple(beta_normalize(c) for c in head.cases),
        )
    elif isinstance(head, Constr):
        head = Constr(head.index, beta_normalize(head.ind))
    return app(head, *args)


def hered_apply(f: Term, args: Sequence[Term]) -> Term:
    """Apply ``f`` to ``args``, contracting redexes headed by ``f``'s binders."""
    args = list(args)
    while isinstance(f, Lam) and args:
        f = hsubst(f.body, args.pop(0))
    return app(f, *args)


def hsubst(body: Term, value: Term) -> Term:
    """``body[Var 0 := value]`` with hereditary contraction."""
    return _hs(body, value, 0)


def _hs(t: Term, v: Term, depth: int) -> Term:
    if loose_bound(t) <= depth:
        return t
    if isinstance(t, Var):
        if t.idx == depth:
            return shift(v, depth)
        return Var(t.idx - 1) if t.idx > depth else t
    if isinstance(t, App):
        head, args = spine(t)
        new_args = [_hs(a, v, depth) for a in args]
        if isinstance(head, Var) and head.idx == depth:
            return hered_apply(shift(v, depth), new_args)
        return app(_hs(head, v, depth), *new_args)
    if isinstance(t, Lam):
        return Lam(t.name, _hs(t.dom, v, depth), _hs(t.body, v, depth + 1))
    if isinstance(t, Pi):
        return Pi(t.name, _hs(t.dom, v, depth), _hs(t.cod, v, depth + 1))
    if isinstance(t, Constr):
        return Constr(t.index, _hs(t.ind, v, depth))
    if isinstance(t, Elim):
        return Elim(_hs(t.scrut, v, depth), _hs(t.motive, v, depth), tuple(_hs(c, v, depth) for c in t.cases))
    return t
