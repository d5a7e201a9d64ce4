"""Proof terms to tactic scripts."""

from __future__ import annotations

from ..errors import EqRepairError
from ..frontend.printer import constructor_names, fresh_name
from ..kernel.env import EMPTY, Context, GlobalEnv
from ..kernel.reduce import whnf
from ..kernel.terms import Const, Constr, Elim, Ind, Lam, Pi, Term, app, global_names, shift, spine, var_occurs
from ..kernel.typing import infer_type
from .qtac import Apply, Induction, Intro, Left, Reflexivity, Rewrite, Right, Script, Seq, Split, Symmetry


def ind_name(t: Term) -> str | None:
    h, _ = spine(t)
    return h.name if isinstance(h, Ind) else None


class _Decompiler:
    def __init__(self, env: GlobalEnv, taken: set[str]):
        self.env = env
        self.taken = taken

    def go(self, ctx: Context, t: Term) -> Script:
        if isinstance(t, Lam):
            name = fresh_name(t.name, self.taken | set(ctx.names()))
            return Seq(Intro(name), self.go(ctx.push(name, t.dom), t.body))
        head, args = spine(t)
        if isinstance(head, Const):
            if head.name == "eq_sym" and len(args) == 4:
                return Seq(Symmetry(), self.go(ctx, args[3]))
            if head.name == "eq_ind_r" and len(args) == 6:
                return Seq(Rewrite(args[2], args[5], reverse=False), self.go(ctx, args[3]))
        if isinstance(head, Constr):
            kind = ind_name(head.ind)
            if kind == "eq" and not args:
                return Reflexivity()
            if kind == "and" and len(args) == 2:
                return Split(self.go(ctx, args[0]), self.go(ctx, args[1]))
            if kind == "or" and len(args) == 1:
                return Seq(Left() if head.index == 0 else Right(), self.go(ctx, args[0]))
        if isinstance(head, Elim) and not args:
            rw = self._rewrite(ctx, head)
            if rw is not None:
                return rw
            return Induction(head.motive, head.scrut, tuple(self.go(ctx, c) for c in head.cases))
        if args:
            return self._apply(ctx, t, head, args)
        return Apply(t)

    def _rewrite(self, ctx: Context, e: Elim) -> Script | None:
        """``Elim(H, fun z _ => P z) { p }`` with ``H : eq A x y`` rewrites right to left."""
        if len(e.cases) != 1:
            return None
        m = e.motive
        if not (isinstance(m, Lam) and isinstance(m.body, Lam)) or var_occurs(m.body.body, 0):
            return None
        try:
            ty = whnf(self.env, ctx, infer_type(self.env, ctx, e.scrut))
        except EqRepairError:
            return None
        if ind_name(ty) != "eq":
            return None
        motive = Lam(m.name, m.dom, shift(m.body.body, -1, 1))
        return Seq(Rewrite(motive, e.scrut, reverse=True), self.go(ctx, e.cases[0]))

    def _apply(self, ctx: Context, t: Term, head: Term, args: list[Term]) -> Script:
        # recurse into the last argument when the rest is a plain implication
        fn = app(head, *args[:-1])
        try:
            ty = whnf(self.env, ctx, infer_type(self.env, ctx, fn))
        except EqRepairError:
            return Apply(t)
        if isinstance(ty, Pi) and not var_occurs(ty.cod, 0):
            return Seq(Apply(fn), self.go(ctx, args[-1]))
        return Apply(t)


def decompile(env: GlobalEnv, t: Term, ctx: Context = EMPTY) -> Script:
    """A tactic script that rebuilds ``t``; falls back to ``apply t``."""
    taken = global_names(t) | constructor_names(t, env) | set(ctx.names())
    return _Decompiler(env, taken).go(ctx, t)
