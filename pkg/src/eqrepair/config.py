"""Configurations: validation against the correctness criteria and
synthesis of the induced equivalence.

All configuration entries are closed terms.  Every entry first takes the
shared parameters of the two families, so for ``list T`` the constructor
entries look like ``fun (T : Type0) (t : T) (l : list T) => ...``.  The
argument order after the parameters is:

* constructor ``j``: the constructor arguments
* eliminator: motive, one case per constructor, then the target
* eta: the term
* eta_ok: the term; proves ``eq (A ps) (eta ps a) a``
* iota ``j``: motive, cases, constructor arguments, ``Q``, then the proof
  of the reduced form; see :meth:`Side.iota_type`
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

from .errors import EqRepairError, SynthesisFailed, TypeError_
from .kernel.env import EMPTY, GlobalEnv
from .kernel.reduce import conv, whnf
from .kernel.terms import (
    TYPE0,
    Const,
    Elim,
    Fv,
    Pi,
    Sort,
    Term,
    app,
    arrow,
    fresh,
    instantiate,
    lams,
    pis,
)
from .kernel.typing import add_definition, check, infer_type

EQ_SYM = Const("eq_sym")


def _eq(env: GlobalEnv) -> Term:
    from .kernel.terms import Ind

    env.inductive("eq")
    return Ind("eq")


def eq_type(env: GlobalEnv, ty: Term, lhs: Term, rhs: Term) -> Term:
    return app(_eq(env), ty, lhs, rhs)


def eq_refl(env: GlobalEnv, ty: Term, x: Term) -> Term:
    from .kernel.terms import Constr

    return app(Constr(0, app(_eq(env), ty, x)))


def eq_sym(ty: Term, x: Term, y: Term, h: Term) -> Term:
    return app(EQ_SYM, ty, x, y, h)


@dataclass(frozen=True)
class Configuration:
    name: str
    type_a: Term
    type_b: Term
    dep_constr_a: tuple[Term, ...]
    dep_constr_b: tuple[Term, ...]
    dep_elim_a: Term
    dep_elim_b: Term
    eta_a: Term | None = None
    eta_b: Term | None = None
    iota_a: tuple[Term, ...] | None = None
    iota_b: tuple[Term, ...] | None = None
    eta_ok_a: Term | None = None
    eta_ok_b: Term | None = None
    trusted: frozenset[str] = frozenset()

    def reversed(self) -> "Configuration":
        """The same equivalence read from B to A."""
        flip = {"_a": "_b", "_b": "_a"}
        trusted = frozenset(
            (t[:-2] + flip[t[-2:]]) if t[-2:] in flip else _flip_indexed(t) for t in self.trusted
        )
        return Configuration(
            self.name + "_rev",
            self.type_b,
            self.type_a,
            self.dep_constr_b,
            self.dep_constr_a,
            self.dep_elim_b,
            self.dep_elim_a,
            self.eta_b,
            self.eta_a,
            self.iota_b,
            self.iota_a,
            self.eta_ok_b,
            self.eta_ok_a,
            trusted,
        )

    def side(self, env: GlobalEnv, which: str) -> "Side":
        if which == "a":
            return Side(env, self.type_a, self.dep_constr_a, self.dep_elim_a, self.eta_a, self.iota_a, self.eta_ok_a)
        return Side(env, self.type_b, self.dep_constr_b, self.dep_elim_b, self.eta_b, self.iota_b, self.eta_ok_b)

    def completed(self, env: GlobalEnv) -> "Configuration":
        """Fill omitted eta, eta_ok and iota entries with their definitional defaults."""
        a, b = self.side(env, "a"), self.side(env, "b")
        return replace(
            self,
            eta_a=a.eta,
            eta_b=b.eta,
            eta_ok_a=a.eta_ok,
            eta_ok_b=b.eta_ok,
            iota_a=tuple(a.iotas),
            iota_b=tuple(b.iotas),
        )


def _flip_indexed(label: str) -> str:
    head, _, idx = label.rpartition("_")
    if head.endswith("_a"):
        return head[:-2] + "_b_" + idx
    if head.endswith("_b"):
        return head[:-2] + "_a_" + idx
    return label


@dataclass
class CtorArg:
    var: Fv
    type: Term
    recursive: bool


class Side:
    """One side of a configuration with the derived types of its entries."""

    def __init__(
        self,
        env: GlobalEnv,
        ty: Term,
        dep_constrs: Sequence[Term],
        dep_elim: Term,
        eta: Term | None,
        iotas: Sequence[Term] | None,
        eta_ok: Term | None,
    ):
        self.env = env
        self.ty = ty
        self.dep_constrs = list(dep_constrs)
        self.dep_elim = dep_elim
        self.params = family_params(env, ty)
        self.eta = eta if eta is not None else self._default_eta()
        self.eta_ok = eta_ok if eta_ok is not None else self._default_eta_ok()
        self.iotas = list(iotas) if iotas is not None else [self._default_iota(j) for j in range(len(self.dep_constrs))]

    # telescopes -----------------------------------------------------------
    def open_params(self) -> list[tuple[Fv, Term]]:
        """Fresh variables for the family parameters, with their types."""
        binders: list[tuple[Fv, Term]] = []
        t = infer_type(self.env, EMPTY, self.ty)
        for name, _ in self.params:
            t = whnf(self.env, EMPTY, t)
            assert isinstance(t, Pi)
            fv = fresh(name)
            binders.append((fv, t.dom))
            t = instantiate(t.cod, fv)
        return binders

    def A(self, ps: Sequence[Term]) -> Term:
        return app(self.ty, *ps)

    def n(self) -> int:
        return len(self.dep_constrs)

    def ctor_args(self, j: int, ps: Sequence[Term]) -> list[CtorArg]:
        t = infer_type(self.env, EMPTY, self.dep_constrs[j])
        for p in ps:
            t = whnf(self.env, EMPTY, t) if not isinstance(t, Pi) else t
            if not isinstance(t, Pi):
                raise TypeError_(f"constructor entry {j} does not take the family parameters")
            t = instantiate(t.cod, p)
        out: list[CtorArg] = []
        target = self.A(ps)
        while True:
            if not isinstance(t, Pi):
                w = whnf(self.env, EMPTY, t)
                if not isinstance(w, Pi):
                    break
                t = w
            x = fresh(t.name if t.name != "_" else "x")
            out.append(CtorArg(x, t.dom, conv(self.env, EMPTY, t.dom, target)))
            t = instantiate(t.cod, x)
        if not conv(self.env, EMPTY, t, target):
            raise TypeError_(f"constructor entry {j} does not return the configured type")
        return out

    def dc(self, j: int, ps: Sequence[Term], xs: Sequence[Term]) -> Term:
        return app(self.dep_constrs[j], *ps, *xs)

    def elim(self, ps: Sequence[Term], motive: Term, cases: Sequence[Term], target: Term) -> Term:
        return app(self.dep_elim, *ps, motive, *cases, target)

    def eta_app(self, ps: Sequence[Term], a: Term) -> Term:
        return app(self.eta, *ps, a)

    def case_binders(
        self, j: int, ps: Sequence[Term], motive: Term
    ) -> tuple[list[CtorArg], list[tuple[Fv, Term]], dict[int, Fv]]:
        """Constructor arguments interleaved with hypotheses for case ``j``."""
        args = self.ctor_args(j, ps)
        binders: list[tuple[Fv, Term]] = []
        ihs: dict[int, Fv] = {}
        for k, arg in enumerate(args):
            binders.append((arg.var, arg.type))
            if arg.recursive:
                ih = fresh("IH" + arg.var.name)
                ihs[k] = ih
                binders.append((ih, app(motive, arg.var)))
        return args, binders, ihs

    def case_type(self, j: int, ps: Sequence[Term], motive: Term) -> Term:
        args, binders, _ = self.case_binders(j, ps, motive)
        return pis(binders, app(motive, self.dc(j, ps, [a.var for a in args])))

    def motive_type(self, ps: Sequence[Term]) -> Term:
        return arrow(self.A(ps), TYPE0)

    # criterion types ------------------------------------------------------
    def eta_type(self) -> Term:
        ps = self.open_params()
        pv = [p for p, _ in ps]
        a = fresh("a")
        return pis(ps + [(a, self.A(pv))], self.A(pv))

    def elim_eta_type(self) -> Term:
        ps = self.open_params()
        pv = [p for p, _ in ps]
        motive = fresh("P")
        fs = [(fresh(f"f{j}"), self.case_type(j, pv, motive)) for j in range(self.n())]
        a = fresh("a")
        return pis(
            ps + [(motive, self.motive_type(pv))] + fs + [(a, self.A(pv))],
            app(motive, self.eta_app(pv, a)),
        )

    def eta_ok_type(self) -> Term:
        ps = self.open_params()
        pv = [p for p, _ in ps]
        a = fresh("a")
        return pis(ps + [(a, self.A(pv))], eq_type(self.env, self.A(pv), self.eta_app(pv, a), a))

    def rew_back(self, ps: Sequence[Term], motive: Term, a: Term, u: Term) -> Term:
        """Turn ``u : motive a`` into ``motive (eta a)`` along eta_ok."""
        A = self.A(ps)
        ea = self.eta_app(ps, a)
        proof = eq_sym(A, ea, a, app(self.eta_ok, *ps, a))
        z, e = fresh("z"), fresh("e")
        m = lams([(z, A), (e, eq_type(self.env, A, a, z))], app(motive, z))
        return Elim(proof, m, (u,))

    def iota_parts(self, j: int):
        """Binders and both sides of the iota statement for constructor ``j``."""
        ps = self.open_params()
        pv = [p for p, _ in ps]
        motive = fresh("P")
        fs = [(fresh(f"f{k}"), self.case_type(k, pv, motive)) for k in range(self.n())]
        fv = [f for f, _ in fs]
        args = self.ctor_args(j, pv)
        xv = [a.var for a in args]
        c = self.dc(j, pv, xv)
        q = fresh("Q")
        q_ty = arrow(app(motive, self.eta_app(pv, c)), TYPE0)
        reduced_args: list[Term] = []
        for a in args:
            if a.recursive:
                reduced_args.append(self.eta_app(pv, a.var))
                reduced_args.append(self.elim(pv, motive, fv, a.var))
            else:
                reduced_args.append(a.var)
        reduced = self.rew_back(pv, motive, c, app(fv[j], *reduced_args))
        unreduced = self.elim(pv, motive, fv, c)
        binders = ps + [(motive, self.motive_type(pv))] + fs + [(a.var, a.type) for a in args] + [(q, q_ty)]
        return binders, q, reduced, unreduced

    def iota_type(self, j: int) -> Term:
        binders, q, reduced, unreduced = self.iota_parts(j)
        return pis(binders, arrow(app(q, reduced), app(q, unreduced)))

    # definitional defaults -------------------------------------------------
    def _default_eta(self) -> Term:
        ps = self.open_params()
        pv = [p for p, _ in ps]
        a = fresh("a")
        return lams(ps + [(a, self.A(pv))], a)

    def _default_eta_ok(self) -> Term:
        ps = self.open_params()
        pv = [p for p, _ in ps]
        a = fresh("a")
        return lams(ps + [(a, self.A(pv))], eq_refl(self.env, self.A(pv), a))

    def _default_iota(self, j: int) -> Term:
        binders, q, reduced, _ = self.iota_parts(j)
        h = fresh("H")
        return lams(binders + [(h, app(q, reduced))], h)


def family_params(env: GlobalEnv, ty: Term) -> list[tuple[str, Term]]:
    """Parameter telescope of a type family ``Π ps, Type_k``."""
    t = infer_type(env, EMPTY, ty)
    out: list[tuple[str, Term]] = []
    while True:
        t = whnf(env, EMPTY, t)
        if isinstance(t, Sort):
            return out
        if not isinstance(t, Pi):
            raise TypeError_("configured type is not a type family")
        out.append((t.name, t.dom))
        t = t.cod


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class CriterionResult:
    label: str
    status: str  # pass | fail | trusted
    error: str | None = None


@dataclass
class ValidationReport:
    config: str
    results: list[CriterionResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    def failed(self) -> list[CriterionResult]:
        return [r for r in self.results if r.status == "fail"]

    def status(self, label: str) -> str:
        for r in self.results:
            if r.label == label:
                return r.status
        raise KeyError(label)

    def __iter__(self) -> Iterator[CriterionResult]:
        return iter(self.results)

    def summary(self) -> str:
        lines = [f"configuration {self.config}"]
        for r in self.results:
            line = f"  {r.label}: {r.status}"
            if r.error:
                line += f" ({r.error})"
            lines.append(line)
        return "\n".join(lines)


def _params_agree(env: GlobalEnv, pa: list[tuple[str, Term]], pb: list[tuple[str, Term]]) -> bool:
    return len(pa) == len(pb) and all(conv(env, EMPTY, x, y) for (_, x), (_, y) in zip(pa, pb))


def validate_configuration(env: GlobalEnv, cfg: Configuration) -> ValidationReport:
    report = ValidationReport(cfg.name)
    add = report.results.append
    try:
        sa, sb = cfg.side(env, "a"), cfg.side(env, "b")
    except EqRepairError as e:
        add(CriterionResult("types", "fail", str(e)))
        return report
    add(CriterionResult("types", "pass"))

    n = len(sa.dep_constrs)
    arity_ok = n == len(sb.dep_constrs) == len(sa.iotas) == len(sb.iotas)
    if not arity_ok:
        add(CriterionResult("arity", "fail", "sides differ in constructor or iota count"))
    elif not _params_agree(env, sa.params, sb.params):
        add(CriterionResult("arity", "fail", "families take different parameters"))
        arity_ok = False
    else:
        add(CriterionResult("arity", "pass"))

    for tag, side in (("a", sa), ("b", sb)):
        for j in range(len(side.dep_constrs)):
            add(_run(f"dep_constr_{tag}_{j}", cfg, env, lambda: side.ctor_args(j, [p for p, _ in side.open_params()])))
        add(_run(f"eta_{tag}", cfg, env, lambda: check(env, EMPTY, side.eta, side.eta_type())))
        add(_run(f"elim_eta_{tag}", cfg, env, lambda: check(env, EMPTY, side.dep_elim, side.elim_eta_type())))
        add(_proof(f"eta_ok_{tag}", cfg, env, side.eta_ok, lambda: side.eta_ok_type()))
        for j in range(len(side.iotas)):
            add(_proof(f"iota_ok_{tag}_{j}", cfg, env, side.iotas[j], lambda: side.iota_type(j)))

    if arity_ok:
        add(_run("constr_shapes", cfg, env, lambda: _check_shapes(sa, sb)))
    return report


def _check_shapes(sa: Side, sb: Side) -> None:
    """Constructor ``j`` takes the same arguments on both sides, A read as B."""
    ps = [p for p, _ in sa.open_params()]
    for j in range(sa.n()):
        xa, xb = sa.ctor_args(j, ps), sb.ctor_args(j, ps)
        if len(xa) != len(xb):
            raise TypeError_(f"constructor {j} takes {len(xa)} arguments on A but {len(xb)} on B")
        for k, (u, v) in enumerate(zip(xa, xb)):
            if u.recursive != v.recursive:
                raise TypeError_(f"argument {k} of constructor {j} is recursive on one side only")
            if not u.recursive:
                vt = instantiate_args(v.type, xb[:k], xa[:k])
                if not conv(sa.env, EMPTY, u.type, vt):
                    raise TypeError_(f"argument {k} of constructor {j} has different types")


def instantiate_args(t: Term, old: Sequence[CtorArg], new: Sequence[CtorArg]) -> Term:
    from .kernel.terms import abstract_many, instantiate_many

    return instantiate_many(abstract_many(t, [o.var for o in old]), [n.var for n in new])


def _run(label: str, cfg: Configuration, env: GlobalEnv, thunk) -> CriterionResult:
    try:
        thunk()
    except EqRepairError as e:
        return CriterionResult(label, "fail", str(e))
    return CriterionResult(label, "pass")


def _proof(label: str, cfg: Configuration, env: GlobalEnv, proof: Term, want) -> CriterionResult:
    try:
        check(env, EMPTY, proof, want())
    except EqRepairError as e:
        return CriterionResult(label, "fail", str(e))
    if label in cfg.trusted:
        return CriterionResult(label, "trusted")
    axioms = env.depends_on_assumptions(proof)
    if axioms:
        return CriterionResult(label, "fail", f"proof depends on assumption {', '.join(axioms)}")
    return CriterionResult(label, "pass")


# ---------------------------------------------------------------------------
# equivalence synthesis


@dataclass(frozen=True)
class Equivalence:
    f: Term
    g: Term
    section: Term
    retraction: Term


def equivalence_names(cfg: Configuration) -> dict[str, str]:
    return {k: f"{k}_{cfg.name}" for k in ("f", "g", "section", "retraction")}


def _transport_parts(src: Side, dst: Side, pv: list[Fv]) -> tuple[Term, list[Term]]:
    """Motive and cases eliminating ``src`` into ``dst`` constructors."""
    motive = lams([(fresh("_"), src.A(pv))], dst.A(pv))
    cases = []
    for j in range(src.n()):
        args, binders, ihs = src.case_binders(j, pv, motive)
        out = [ihs[k] if a.recursive else a.var for k, a in enumerate(args)]
        cases.append(lams(binders, dst.dc(j, pv, out)))
    return motive, cases


def _transport_fn(src: Side, dst: Side) -> Term:
    """λ ps a. DepElim_src ps (λ _. dst ps) cases a."""
    ps = src.open_params()
    pv = [p for p, _ in ps]
    motive, cases = _transport_parts(src, dst, pv)
    a = fresh("a")
    return lams(ps + [(a, src.A(pv))], src.elim(pv, motive, cases, a))


def _section(env: GlobalEnv, sa: Side, sb: Side, f: Term, g: Term) -> Term:
    """∀ ps a, g (f a) = a, following rewrite-by-eta, induct, expand, reflexivity."""
    ps = sa.open_params()
    pv = [p for p, _ in ps]
    A = sa.A(pv)
    fmot, fcases = _transport_parts(sa, sb, pv)
    gmot, gcases = _transport_parts(sb, sa, pv)

    def gf(x: Term) -> Term:
        return app(g, *pv, app(f, *pv, x))

    a0 = fresh("a")
    P = lams([(a0, A)], eq_type(env, A, gf(a0), a0))
    cases = []
    for j in range(sa.n()):
        args, binders, ihs = sa.case_binders(j, pv, P)
        xs = [a.var for a in args]
        target = sa.dc(j, pv, xs)
        # f's image of the constructor, recursive positions replaced by f's recursion
        ys: list[Term] = []
        for a in args:
            ys.append(sa.elim(pv, fmot, fcases, a.var) if a.recursive else a.var)
        z1 = fresh("z")
        q1 = lams([(z1, sb.A(pv))], eq_type(env, A, app(g, *pv, z1), target))
        z2 = fresh("z")
        q2 = lams([(z2, A)], eq_type(env, A, z2, target))
        # close g-image = target by rewriting each recursive argument with its hypothesis
        proof = eq_refl(env, A, target)
        rec_positions = [k for k, a in enumerate(args) if a.recursive]
        current = list(xs)
        for k in rec_positions:
            x_k = args[k].var
            gx = sb.elim(pv, gmot, gcases, ys[k])
            w = fresh("w")
            e = fresh("e")
            motive_args = list(current)
            motive_args[k] = w
            motive = lams(
                [(w, A), (e, eq_type(env, A, x_k, w))],
                eq_type(env, A, sa.dc(j, pv, motive_args), target),
            )
            proof = Elim(eq_sym(A, gx, x_k, ihs[k]), motive, (proof,))
            current[k] = gx
        step_b = app(sb.iotas[j], *pv, gmot, *gcases, *ys, q2, proof)
        step_a = app(sa.iotas[j], *pv, fmot, *fcases, *xs, q1, step_b)
        cases.append(lams(binders, step_a))
    a = fresh("a")
    d = sa.elim(pv, P, cases, a)
    z, e = fresh("z"), fresh("e")
    rew = Elim(
        app(sa.eta_ok, *pv, a),
        lams([(z, A), (e, eq_type(env, A, sa.eta_app(pv, a), z))], app(P, z)),
        (d,),
    )
    return lams(ps + [(a, A)], rew)


def synthesize_equivalence(env: GlobalEnv, cfg: Configuration) -> Equivalence:
    sa, sb = cfg.side(env, "a"), cfg.side(env, "b")
    f = _transport_fn(sa, sb)
    g = _transport_fn(sb, sa)
    e = Equivalence(f, g, _section(env, sa, sb, f, g), _section(env, sb, sa, g, f))
    for label, term, want in (
        ("f", e.f, fn_type(sa, sb)),
        ("g", e.g, fn_type(sb, sa)),
        ("section", e.section, section_type(env, sa, e.f, e.g)),
        ("retraction", e.retraction, section_type(env, sb, e.g, e.f)),
    ):
        try:
            check(env, EMPTY, term, want)
        except EqRepairError as err:
            raise SynthesisFailed(label, str(err)) from None
    return e


def fn_type(src: Side, dst: Side) -> Term:
    ps = src.open_params()
    pv = [p for p, _ in ps]
    return pis(ps, arrow(src.A(pv), dst.A(pv)))


def section_type(env: GlobalEnv, src: Side, f: Term, g: Term) -> Term:
    ps = src.open_params()
    pv = [p for p, _ in ps]
    a = fresh("a")
    A = src.A(pv)
    return pis(ps + [(a, A)], eq_type(env, A, app(g, *pv, app(f, *pv, a)), a))


def check_equivalence(
    env: GlobalEnv, e: Equivalence, A: Term, B: Term, allow_assumptions: bool = False
) -> bool:
    """Whether all four components type check at their stated types."""
    try:
        sa = _bare_side(env, A)
        sb = _bare_side(env, B)
        wants = (
            (e.f, fn_type(sa, sb)),
            (e.g, fn_type(sb, sa)),
            (e.section, section_type(env, sa, e.f, e.g)),
            (e.retraction, section_type(env, sb, e.g, e.f)),
        )
        for term, want in wants:
            check(env, EMPTY, term, want)
            if not allow_assumptions and env.depends_on_assumptions(term):
                return False
    except EqRepairError:
        return False
    return True


def _bare_side(env: GlobalEnv, ty: Term) -> Side:
    s = Side.__new__(Side)
    s.env = env
    s.ty = ty
    s.params = family_params(env, ty)
    s.dep_constrs = []
    return s


def register_equivalence(env: GlobalEnv, cfg: Configuration, e: Equivalence) -> GlobalEnv:
    """Add f, g, section and retraction as definitions with deterministic names."""
    names = equivalence_names(cfg)
    sa, sb = cfg.side(env, "a"), cfg.side(env, "b")
    f, g = Const(names["f"]), Const(names["g"])
    env = add_definition(env, names["f"], fn_type(sa, sb), e.f)
    env = add_definition(env, names["g"], fn_type(sb, sa), e.g)
    env = add_definition(env, names["section"], section_type(env, sa, f, g), e.section)
    env = add_definition(env, names["retraction"], section_type(env, sb, g, f), e.retraction)
    return env
