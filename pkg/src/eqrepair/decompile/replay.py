"""Interpreting tactic scripts as proof-term builders."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import EqRepairError, ReplayFailed
from ..frontend.printer import print_term
from ..kernel.beta import beta_normalize
from ..kernel.env import Context, GlobalEnv
from ..kernel.reduce import conv, whnf
from ..kernel.terms import (
    App,
    Const,
    Constr,
    Elim,
    Ind,
    Lam,
    Pi,
    Term,
    Var,
    app,
    shift,
    spine,
    var_occurs,
)
from ..kernel.typing import case_type, check, infer_type
from .qtac import Apply, Induction, Intro, Intros, Left, Reflexivity, Rewrite, Right, Script, Seq, Split, Symmetry

Builder = Callable[[list[Term]], Term]


@dataclass(frozen=True)
class Goal:
    ctx: Context
    target: Term

    def __str__(self) -> str:
        names = self.ctx.names()
        hyps = ", ".join(f"{n} : {print_term(t, names[:i])}" for i, (n, t) in enumerate(self.ctx.entries))
        shown = print_term(self.target, names)
        return f"{hyps} |- {shown}" if hyps else f"|- {shown}"


def abstract_occurrences(t: Term, sub: Term, depth: int = 0) -> Term:
    """``t`` with one more binder: occurrences of ``sub`` become that binder."""
    if t == shift(sub, depth):
        return Var(depth)
    if isinstance(t, Var):
        return Var(t.idx + 1) if t.idx >= depth else t
    if isinstance(t, App):
        return App(abstract_occurrences(t.fn, sub, depth), abstract_occurrences(t.arg, sub, depth))
    if isinstance(t, Pi):
        return Pi(t.name, abstract_occurrences(t.dom, sub, depth), abstract_occurrences(t.cod, sub, depth + 1))
    if isinstance(t, Lam):
        return Lam(t.name, abstract_occurrences(t.dom, sub, depth), abstract_occurrences(t.body, sub, depth + 1))
    if isinstance(t, Constr):
        return Constr(t.index, abstract_occurrences(t.ind, sub, depth))
    if isinstance(t, Elim):
        return Elim(
            abstract_occurrences(t.scrut, sub, depth),
            abstract_occurrences(t.motive, sub, depth),
            tuple(abstract_occurrences(c, sub, depth) for c in t.cases),
        )
    return t


class _Replayer:
    def __init__(self, env: GlobalEnv):
        self.env = env

    def fail(self, step: str, goal: Goal, detail: str = "") -> ReplayFailed:
        return ReplayFailed(step, str(goal), detail)

    def whnf(self, goal: Goal, t: Term) -> Term:
        return whnf(self.env, goal.ctx, t)

    def infer(self, step: str, goal: Goal, t: Term) -> Term:
        try:
            return infer_type(self.env, goal.ctx, t)
        except EqRepairError as e:
            raise self.fail(step, goal, str(e)) from None

    def inductive_args(self, step: str, goal: Goal, t: Term, name: str | None = None) -> tuple[str, list[Term]]:
        h, args = spine(self.whnf(goal, t))
        if not isinstance(h, Ind) or (name is not None and h.name != name):
            want = name or "an inductive type"
            raise self.fail(step, goal, f"expected {want}")
        return h.name, args

    def run(self, goal: Goal, s: Script) -> Term:
        if isinstance(s, Seq):
            goals, build = self.step(goal, s.first)
            if len(goals) != 1:
                raise self.fail(_name(s.first), goal, f"leaves {len(goals)} goals where one was expected")
            return build([self.run(goals[0], s.rest)])
        goals, build = self.step(goal, s)
        if isinstance(s, (Induction, Split)):
            branches = s.branches if isinstance(s, Induction) else (s.left, s.right)
            if len(branches) != len(goals):
                raise self.fail(_name(s), goal, f"{len(goals)} goals but {len(branches)} branches")
            return build([self.run(g, b) for g, b in zip(goals, branches)])
        if goals:
            raise self.fail(_name(s), goal, f"leaves {len(goals)} goals unsolved")
        return build([])

    def step(self, goal: Goal, tac: Script) -> tuple[list[Goal], Builder]:
        env, ctx, target = self.env, goal.ctx, goal.target
        if isinstance(tac, Intro):
            w = self.whnf(goal, target)
            if not isinstance(w, Pi):
                raise self.fail("intro", goal, "goal is not a product")
            return [Goal(ctx.push(tac.name, w.dom), w.cod)], lambda ps: Lam(tac.name, w.dom, ps[0])
        if isinstance(tac, Intros):
            return self._intros(goal, list(tac.names))
        if isinstance(tac, Symmetry):
            _, (A, x, y) = self.inductive_args("symmetry", goal, target, "eq")
            return [Goal(ctx, app(Ind("eq"), A, y, x))], lambda ps: app(Const("eq_sym"), A, y, x, ps[0])
        if isinstance(tac, Reflexivity):
            _, (A, x, y) = self.inductive_args("reflexivity", goal, target, "eq")
            if not conv(env, ctx, x, y):
                raise self.fail("reflexivity", goal, "sides are not convertible")
            return [], lambda ps: Constr(0, app(Ind("eq"), A, x))
        if isinstance(tac, Apply):
            ty = self.infer("apply", goal, tac.term)
            if conv(env, ctx, ty, target):
                return [], lambda ps: tac.term
            w = self.whnf(goal, ty)
            if isinstance(w, Pi) and not var_occurs(w.cod, 0) and conv(env, ctx, shift(w.cod, -1), target):
                return [Goal(ctx, w.dom)], lambda ps: App(tac.term, ps[0])
            raise self.fail("apply", goal, "the term does not conclude the goal")
        if isinstance(tac, Rewrite):
            return self._rewrite(goal, tac)
        if isinstance(tac, Induction):
            return self._induction(goal, tac)
        if isinstance(tac, Split):
            _, (A, B) = self.inductive_args("split", goal, target, "and")
            return [Goal(ctx, A), Goal(ctx, B)], lambda ps: app(Constr(0, app(Ind("and"), A, B)), ps[0], ps[1])
        if isinstance(tac, (Left, Right)):
            step = "left" if isinstance(tac, Left) else "right"
            _, (A, B) = self.inductive_args(step, goal, target, "or")
            j = 0 if isinstance(tac, Left) else 1
            return [Goal(ctx, (A, B)[j])], lambda ps: app(Constr(j, app(Ind("or"), A, B)), ps[0])
        raise self.fail(type(tac).__name__, goal, "not a tactic")

    def _intros(self, goal: Goal, names: list[str]) -> tuple[list[Goal], Builder]:
        if not names:
            return [goal], lambda ps: ps[0]
        (g,), outer = self.step(goal, Intro(names[0]))
        goals, inner = self._intros(g, names[1:])
        return goals, lambda ps: outer([inner(ps)])

    def _rewrite(self, goal: Goal, tac: Rewrite) -> tuple[list[Goal], Builder]:
        env, ctx = self.env, goal.ctx
        _, (A, x, y) = self.inductive_args("rewrite", goal, self.infer("rewrite", goal, tac.eq), "eq")
        src, dst = (y, x) if tac.reverse else (x, y)
        motive = tac.motive
        if motive is None:
            motive = Lam("z", A, abstract_occurrences(goal.target, src))
        else:
            try:
                check(env, ctx, motive, Pi("_", A, self.infer("rewrite", goal, app(motive, src))))
            except EqRepairError as e:
                raise self.fail("rewrite", goal, f"bad motive: {e}") from None
        if not conv(env, ctx, beta_normalize(app(motive, src)), goal.target):
            raise self.fail("rewrite", goal, "the motive does not match the goal")
        new = Goal(ctx, beta_normalize(app(motive, dst)))
        if not tac.reverse:
            return [new], lambda ps: app(Const("eq_ind_r"), A, y, motive, ps[0], x, tac.eq)
        # Elim over eq: from P x conclude P y
        if isinstance(motive, Lam):
            body = shift(motive.body, 1)
        else:
            body = app(shift(motive, 2), Var(1))
        eq_z = app(Ind("eq"), shift(A, 1), shift(x, 1), Var(0))
        dep = Lam(motive.name if isinstance(motive, Lam) else "z", A, Lam("e", eq_z, body))
        return [new], lambda ps: Elim(tac.eq, dep, (ps[0],))

    def _induction(self, goal: Goal, tac: Induction) -> tuple[list[Goal], Builder]:
        env, ctx = self.env, goal.ctx
        ty = self.infer("induction", goal, tac.target)
        name, args = self.inductive_args("induction", goal, ty)
        decl = env.inductive(name)
        params, indices = args[: decl.n_params], args[decl.n_params :]
        motive = tac.motive
        if motive is None:
            if indices:
                raise self.fail("induction", goal, "cannot infer a motive over an indexed family")
            motive = Lam("x", self.whnf(goal, ty), abstract_occurrences(goal.target, tac.target))
        if not conv(env, ctx, beta_normalize(app(motive, *indices, tac.target)), goal.target):
            raise self.fail("induction", goal, "the motive does not match the goal")
        goals = [Goal(ctx, beta_normalize(case_type(decl, params, motive, j))) for j in range(len(decl.constructors))]
        return goals, lambda ps: Elim(tac.target, motive, tuple(ps))


def _name(s: Script) -> str:
    return type(s).__name__.lower()


def replay(env: GlobalEnv, goal: Goal, script: Script) -> Term:
    """Run ``script`` on ``goal`` and return the proof term it builds."""
    term = _Replayer(env).run(goal, script)
    try:
        check(env, goal.ctx, term, goal.target)
    except EqRepairError as e:
        raise ReplayFailed("qed", str(goal), str(e)) from None
    return term
