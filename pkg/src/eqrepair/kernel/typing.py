"""Type inference, inductive declarations and eliminator schemes."""

from __future__ import annotations

from typing import Sequence

from ..errors import PositivityViolation, TypeError_, UniverseError
from .env import EMPTY, Assumption, Context, Definition, GlobalEnv, InductiveDecl
from .reduce import conv, whnf
from .terms import (
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
    app,
    fresh,
    global_names,
    instantiate,
    instantiate_many,
    pis,
    spine,
)


def print_term(t, names, env):
    # imported late: the printer itself depends on the kernel
    from ..frontend.printer import print_term as show

    return show(t, names, env)


def _sub(step: int, fn, *args):
    try:
        return fn(*args)
    except TypeError_ as e:
        raise e.at(step) from None


def infer_type(env: GlobalEnv, ctx: Context, t: Term) -> Term:
    """Principal type of ``t`` under ``ctx``; raises TypeError with a path."""
    if isinstance(t, Var):
        if t.idx >= len(ctx):
            raise TypeError_(f"unbound variable #{t.idx}")
        return ctx.type_of(t.idx)
    if isinstance(t, Sort):
        return Sort(t.level + 1)
    if isinstance(t, Pi):
        l1 = _sub(0, sort_of, env, ctx, t.dom)
        l2 = _sub(1, sort_of, env, ctx.push(t.name, t.dom), t.cod)
        return Sort(max(l1, l2))
    if isinstance(t, Lam):
        _sub(0, sort_of, env, ctx, t.dom)
        body_ty = _sub(1, infer_type, env, ctx.push(t.name, t.dom), t.body)
        return Pi(t.name, t.dom, body_ty)
    if isinstance(t, App):
        fn_ty = whnf(env, ctx, _sub(0, infer_type, env, ctx, t.fn))
        if not isinstance(fn_ty, Pi):
            raise TypeError_(f"{print_term(t.fn, ctx.names(), env)} is not a function", (0,))
        arg_ty = _sub(1, infer_type, env, ctx, t.arg)
        if not conv(env, ctx, arg_ty, fn_ty.dom):
            raise TypeError_(
                f"argument {print_term(t.arg, ctx.names(), env)} has type {print_term(arg_ty, ctx.names(), env)}"
                f" but {print_term(fn_ty.dom, ctx.names(), env)} was expected",
                (1,),
            )
        return instantiate(fn_ty.cod, t.arg)
    if isinstance(t, Ind):
        return env.inductive(t.name).full_arity()
    if isinstance(t, Const):
        return env.type_of_const(t.name)
    if isinstance(t, Constr):
        return _infer_constr(env, ctx, t)
    if isinstance(t, Elim):
        return _infer_elim(env, ctx, t)
    if isinstance(t, Fv):
        raise TypeError_(f"unexpected free variable {t.name}")
    raise TypeError_(f"unknown term form {type(t).__name__}")


def _split_ind(env: GlobalEnv, t: Term) -> tuple[InductiveDecl, list[Term]] | None:
    head, args = spine(t)
    if isinstance(head, Ind):
        decl = env.get(head.name)
        if isinstance(decl, InductiveDecl):
            return decl, args
    return None


def _infer_constr(env: GlobalEnv, ctx: Context, t: Constr) -> Term:
    split = _split_ind(env, t.ind)
    if split is None or len(split[1]) != split[0].n_params:
        raise TypeError_("constructor must name an inductive applied to its parameters", (0,))
    decl, params = split
    _sub(0, infer_type, env, ctx, t.ind)
    if not 0 <= t.index < len(decl.constructors):
        raise TypeError_(f"{decl.name} has no constructor {t.index}")
    return decl.ctor_type(t.index, params)


def _infer_elim(env: GlobalEnv, ctx: Context, t: Elim) -> Term:
    scrut_ty = whnf(env, ctx, _sub(0, infer_type, env, ctx, t.scrut))
    split = _split_ind(env, scrut_ty)
    if split is None:
        raise TypeError_(
            f"cannot eliminate a term of type {print_term(scrut_ty, ctx.names(), env)}", (0,)
        )
    decl, args = split
    if len(args) != decl.n_params + decl.n_indices:
        raise TypeError_("scrutinee type is not a full instance of its inductive", (0,))
    params, indices = args[: decl.n_params], args[decl.n_params :]
    if len(t.cases) != len(decl.constructors):
        raise TypeError_(
            f"eliminator over {decl.name} expects {len(decl.constructors)} cases, got {len(t.cases)}"
        )
    motive_ty = _sub(1, infer_type, env, ctx, t.motive)
    level = _motive_level(env, ctx, motive_ty, decl.n_indices + 1)
    if level is None or not conv(env, ctx, motive_ty, motive_type(decl, params, level)):
        raise TypeError_(
            f"motive has type {print_term(motive_ty, ctx.names(), env)}, which does not fit {decl.name}",
            (1,),
        )
    for i, case in enumerate(t.cases):
        got = _sub(2 + i, infer_type, env, ctx, case)
        want = case_type(decl, params, t.motive, i)
        if not conv(env, ctx, got, want):
            raise TypeError_(
                f"case {i} has type {print_term(got, ctx.names(), env)}"
                f" but {print_term(want, ctx.names(), env)} was expected",
                (2 + i,),
            )
    return app(t.motive, *indices, t.scrut)


def _motive_level(env: GlobalEnv, ctx: Context, ty: Term, n: int) -> int | None:
    for _ in range(n):
        ty = whnf(env, ctx, ty)
        if not isinstance(ty, Pi):
            return None
        ctx = ctx.push(ty.name, ty.dom)
        ty = ty.cod
    ty = whnf(env, ctx, ty)
    return ty.level if isinstance(ty, Sort) else None


def sort_of(env: GlobalEnv, ctx: Context, t: Term) -> int:
    """Universe level of the type ``t``; raises if ``t`` is not a type."""
    s = whnf(env, ctx, infer_type(env, ctx, t))
    if not isinstance(s, Sort):
        raise TypeError_(f"{print_term(t, ctx.names(), env)} is not a type")
    return s.level


def check(env: GlobalEnv, ctx: Context, t: Term, ty: Term) -> None:
    got = infer_type(env, ctx, t)
    if not conv(env, ctx, got, ty):
        raise TypeError_(
            f"term has type {print_term(got, ctx.names(), env)} but {print_term(ty, ctx.names(), env)} was expected"
        )


# --------------------------------------------------------------------------
# eliminator schemes


def motive_type(decl: InductiveDecl, params: Sequence[Term], level: int = 0) -> Term:
    """Π indices, Π (x : I params indices), Type_level."""
    ty = instantiate_many(decl.arity, list(params))
    binders: list[tuple[Fv, Term]] = []
    while isinstance(ty, Pi):
        v = fresh(ty.name if ty.name != "_" else "i")
        binders.append((v, ty.dom))
        ty = instantiate(ty.cod, v)
    target = app(Ind(decl.name), *params, *(v for v, _ in binders))
    binders.append((fresh("x"), target))
    return pis(binders, Sort(level))


def case_type(decl: InductiveDecl, params: Sequence[Term], motive: Term, j: int) -> Term:
    """Type of case ``j``: constructor arguments interleaved with hypotheses."""
    ty = decl.ctor_type(j, params)
    binders: list[tuple[Fv, Term]] = []
    args: list[Term] = []
    while isinstance(ty, Pi):
        x = fresh(ty.name if ty.name != "_" else "a")
        binders.append((x, ty.dom))
        args.append(x)
        if decl.is_recursive_dom(ty.dom):
            binders.append((fresh("IH" + x.name), _ih_type(decl, ty.dom, x, motive)))
        ty = instantiate(ty.cod, x)
    _, out = spine(ty)
    result = app(motive, *out[decl.n_params :], app(Constr(j, app(Ind(decl.name), *params)), *args))
    return pis(binders, result)


def _ih_type(decl: InductiveDecl, dom: Term, x: Fv, motive: Term) -> Term:
    ys: list[tuple[Fv, Term]] = []
    while isinstance(dom, Pi):
        y = fresh(dom.name if dom.name != "_" else "y")
        ys.append((y, dom.dom))
        dom = instantiate(dom.cod, y)
    _, out = spine(dom)
    return pis(ys, app(motive, *out[decl.n_params :], app(x, *(y for y, _ in ys))))


def eliminator_type(env: GlobalEnv, ind: str) -> Term:
    """Closed type of the dependent eliminator of ``ind`` (motive in Type0)."""
    decl = env.inductive(ind)
    binders: list[tuple[Fv, Term]] = []
    params: list[Term] = []
    for name, ty in decl.params:
        p = fresh(name)
        binders.append((p, instantiate_many(ty, params) if params else ty))
        params.append(p)
    motive = fresh("P")
    binders.append((motive, motive_type(decl, params, 0)))
    for j, (cname, _) in enumerate(decl.constructors):
        binders.append((fresh("f_" + cname.rsplit(".", 1)[-1]), case_type(decl, params, motive, j)))
    ty = instantiate_many(decl.arity, params)
    idx: list[Term] = []
    while isinstance(ty, Pi):
        v = fresh(ty.name if ty.name != "_" else "i")
        binders.append((v, ty.dom))
        idx.append(v)
        ty = instantiate(ty.cod, v)
    x = fresh("x")
    binders.append((x, app(Ind(decl.name), *params, *idx)))
    return pis(binders, app(motive, *idx, x))


# --------------------------------------------------------------------------
# checked environment extension


def declare_inductive(env: GlobalEnv, decl: InductiveDecl) -> GlobalEnv:
    ctx = EMPTY
    for name, ty in decl.params:
        _checked(f"parameter {name} of {decl.name}", sort_of, env, ctx, ty)
        ctx = ctx.push(name, ty)
    _checked(f"arity of {decl.name}", sort_of, env, ctx, decl.arity)
    tail = decl.arity
    while isinstance(tail, Pi):
        tail = tail.cod
    if not isinstance(tail, Sort):
        raise TypeError_(f"arity of {decl.name} must end in a sort")
    level = tail.level
    extended = env._with(decl, decl.ctor_names())
    for cname, cty in decl.constructors:
        _checked(f"constructor {cname}", sort_of, extended, ctx, cty)
        _check_constructor(extended, decl, ctx, cname, cty, level)
    return extended


def _checked(what: str, fn, *args):
    try:
        return fn(*args)
    except TypeError_ as e:
        raise TypeError_(f"{what}: {e.message}", e.path) from None


def _is_param_var(t: Term, k: int, np: int, depth: int) -> bool:
    return isinstance(t, Var) and t.idx == depth + np - 1 - k


def _check_constructor(
    env: GlobalEnv, decl: InductiveDecl, ctx: Context, cname: str, cty: Term, level: int
) -> None:
    np = decl.n_params
    depth = 0
    ty = cty
    while isinstance(ty, Pi):
        _positive(decl, cname, ty.dom, depth)
        lvl = sort_of(env, ctx, ty.dom)
        if lvl > level:
            raise UniverseError(
                f"constructor {cname} of {decl.name} : Type{level} stores an argument in Type{lvl}"
            )
        ctx = ctx.push(ty.name, ty.dom)
        ty = ty.cod
        depth += 1
    head, args = spine(ty)
    if (
        not isinstance(head, Ind)
        or head.name != decl.name
        or len(args) != np + decl.n_indices
        or not all(_is_param_var(a, k, np, depth) for k, a in enumerate(args[:np]))
    ):
        raise TypeError_(f"constructor {cname} must return {decl.name} applied to its parameters")
    if any(decl.name in global_names(a) for a in args[np:]):
        raise PositivityViolation(f"{decl.name} occurs in an index of constructor {cname}")


def _positive(decl: InductiveDecl, cname: str, dom: Term, depth: int) -> None:
    if decl.name not in global_names(dom):
        return
    while isinstance(dom, Pi):
        if decl.name in global_names(dom.dom):
            raise PositivityViolation(
                f"non strictly positive occurrence of {decl.name} in constructor {cname}"
            )
        dom = dom.cod
        depth += 1
    head, args = spine(dom)
    np = decl.n_params
    if (
        isinstance(head, Ind)
        and head.name == decl.name
        and len(args) == np + decl.n_indices
        and all(_is_param_var(a, k, np, depth) for k, a in enumerate(args[:np]))
        and not any(decl.name in global_names(a) for a in args[np:])
    ):
        return
    raise PositivityViolation(f"non strictly positive occurrence of {decl.name} in constructor {cname}")


def add_definition(env: GlobalEnv, name: str, ty: Term, body: Term) -> GlobalEnv:
    _checked(f"type of {name}", sort_of, env, EMPTY, ty)
    _checked(name, check, env, EMPTY, body, ty)
    return env._with(Definition(name, ty, body))


def add_assumption(env: GlobalEnv, name: str, ty: Term) -> GlobalEnv:
    _checked(f"type of {name}", sort_of, env, EMPTY, ty)
    return env._with(Assumption(name, ty))
