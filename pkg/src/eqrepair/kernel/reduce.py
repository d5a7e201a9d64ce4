"""Reduction: weak head normal form, full normalization, conversion."""

from __future__ import annotations

from .env import Context, GlobalEnv, InductiveDecl
from .terms import (
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
    instantiate,
    shift,
    spine,
)


def _ih(dom: Term, arg: Term, motive: Term, cases: tuple[Term, ...]) -> Term:
    """Inductive hypothesis for a recursive argument of type ``dom``."""
    binders: list[tuple[str, Term]] = []
    while isinstance(dom, Pi):
        binders.append((dom.name, dom.dom))
        dom = dom.cod
    m = len(binders)
    if m == 0:
        return Elim(arg, motive, cases)
    body: Term = Elim(
        app(shift(arg, m), *(Var(m - 1 - k) for k in range(m))),
        shift(motive, m),
        tuple(shift(c, m) for c in cases),
    )
    for name, d in reversed(binders):
        body = Lam(name, d, body)
    return body


def iota(env: GlobalEnv, scrut: Term, motive: Term, cases: tuple[Term, ...]) -> Term | None:
    """Contract ``Elim(scrut, motive){cases}`` if ``scrut`` is a constructor form."""
    head, args = spine(scrut)
    if not isinstance(head, Constr):
        return None
    ind_head, params = spine(head.ind)
    if not isinstance(ind_head, Ind):
        return None
    decl = env.get(ind_head.name)
    if not isinstance(decl, InductiveDecl):
        return None
    j = head.index
    if (
        len(params) != decl.n_params
        or j >= len(decl.constructors)
        or len(cases) != len(decl.constructors)
        or len(args) != decl.ctor_arity(j)
    ):
        return None
    ty = decl.ctor_type(j, params)
    out: list[Term] = []
    for a in args:
        assert isinstance(ty, Pi)
        out.append(a)
        if decl.is_recursive_dom(ty.dom):
            out.append(_ih(ty.dom, a, motive, cases))
        ty = instantiate(ty.cod, a)
    return app(cases[j], *out)


def whnf(env: GlobalEnv, ctx: Context | None, t: Term, delta: bool = True) -> Term:
    """Weak head normal form.  ``delta=False`` keeps head constants folded.

    Scrutinees of eliminators are always reduced with δ so that ι fires.
    """
    return _whnf(env, t, delta)


def _whnf(env: GlobalEnv, t: Term, delta: bool = True) -> Term:
    stack: list[Term] = []
    while True:
        if isinstance(t, App):
            stack.append(t.arg)
            t = t.fn
        elif isinstance(t, Lam) and stack:
            t = instantiate(t.body, stack.pop())
        elif isinstance(t, Const) and delta:
            body = env.unfold(t.name)
            if body is None:
                break
            t = body
        elif isinstance(t, Elim):
            s = _whnf(env, t.scrut, True)
            r = iota(env, s, t.motive, t.cases)
            if r is None:
                if s is not t.scrut:
                    t = Elim(s, t.motive, t.cases)
                break
            t = r
        else:
            break
    while stack:
        t = App(t, stack.pop())
    return t


def normalize(env: GlobalEnv, ctx: Context | None, t: Term) -> Term:
    return _nf(env, t)


def _nf(env: GlobalEnv, t: Term) -> Term:
    memo = env.memo()
    key = ("nf", t)
    hit = memo.get(key)
    if hit is not None:
        return hit
    w = _whnf(env, t)
    head, args = spine(w)
    if isinstance(head, Lam):
        head = Lam(head.name, _nf(env, head.dom), _nf(env, head.body))
    elif isinstance(head, Pi):
        head = Pi(head.name, _nf(env, head.dom), _nf(env, head.cod))
    elif isinstance(head, Elim):
        head = Elim(_nf(env, head.scrut), _nf(env, head.motive), tuple(_nf(env, c) for c in head.cases))
    elif isinstance(head, Constr):
        head = Constr(head.index, _nf(env, head.ind))
    r = app(head, *(_nf(env, a) for a in args))
    memo[key] = r
    memo[("nf", r)] = r
    return r


def alpha_eq(t1: Term, t2: Term) -> bool:
    return t1 == t2


def conv(env: GlobalEnv, ctx: Context | None, t1: Term, t2: Term) -> bool:
    """Definitional equality (βιδ plus η for functions)."""
    if t1 == t2:
        return True
    memo = env.memo()
    key = ("conv", t1, t2)
    if key in memo:
        return memo[key]
    r = _conv(env, t1, t2)
    memo[key] = r
    return r


def _unfold_head(env: GlobalEnv, t: Term) -> Term | None:
    head, args = spine(t)
    if isinstance(head, Const):
        body = env.unfold(head.name)
        if body is not None:
            return _whnf(env, app(body, *args), False)
    return None


def _conv(env: GlobalEnv, a: Term, b: Term) -> bool:
    a = _whnf(env, a, False)
    b = _whnf(env, b, False)
    while True:
        if a == b:
            return True
        ha, aa = spine(a)
        hb, ab = spine(b)
        ca = isinstance(ha, Const) and env.unfold(ha.name) is not None
        cb = isinstance(hb, Const) and env.unfold(hb.name) is not None
        if not (ca or cb):
            break
        if ca and cb and ha.name == hb.name:  # type: ignore[union-attr]
            if len(aa) == len(ab) and all(conv(env, None, x, y) for x, y in zip(aa, ab)):
                return True
            a, b = _unfold_head(env, a), _unfold_head(env, b)  # type: ignore[assignment]
        elif ca and (not cb or env.position(ha.name) >= env.position(hb.name)):  # type: ignore[union-attr]
            a = _unfold_head(env, a)  # type: ignore[assignment]
        else:
            b = _unfold_head(env, b)  # type: ignore[assignment]
    return _conv_whnf(env, a, b)


def _conv_whnf(env: GlobalEnv, a: Term, b: Term) -> bool:
    if isinstance(a, Lam) and isinstance(b, Lam):
        return conv(env, None, a.dom, b.dom) and conv(env, None, a.body, b.body)
    if isinstance(a, Lam):
        return conv(env, None, a.body, App(shift(b, 1), Var(0)))
    if isinstance(b, Lam):
        return conv(env, None, App(shift(a, 1), Var(0)), b.body)
    if isinstance(a, Sort) or isinstance(b, Sort):
        return a == b
    if isinstance(a, Pi) or isinstance(b, Pi):
        return (
            isinstance(a, Pi)
            and isinstance(b, Pi)
            and conv(env, None, a.dom, b.dom)
            and conv(env, None, a.cod, b.cod)
        )
    ha, aa = spine(a)
    hb, ab = spine(b)
    if len(aa) != len(ab) or not _conv_head(env, ha, hb):
        return False
    return all(conv(env, None, x, y) for x, y in zip(aa, ab))


def _conv_head(env: GlobalEnv, a: Term, b: Term) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, (Var, Ind, Const)):
        return a == b
    if isinstance(a, Constr):
        return a.index == b.index and conv(env, None, a.ind, b.ind)  # type: ignore[attr-defined]
    if isinstance(a, Elim):
        return (
            len(a.cases) == len(b.cases)  # type: ignore[attr-defined]
            and conv(env, None, a.scrut, b.scrut)  # type: ignore[attr-defined]
            and conv(env, None, a.motive, b.motive)  # type: ignore[attr-defined]
            and all(conv(env, None, x, y) for x, y in zip(a.cases, b.cases))  # type: ignore[attr-defined]
        )
    return a == b
