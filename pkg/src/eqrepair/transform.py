"""Transport of terms across a configured equivalence.

The transformation walks the source term top down.  At every application
spine it first tries to read the spine as an instance of a configuration
role over A (iota, eliminator, constructor, eta, the type itself); a match
is replaced by the corresponding B role applied to the transported
arguments, contracted by hereditary β.  Everything else is rebuilt
homomorphically.
"""

from __future__ import annotations

import hashlib
import os
import pickle
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .config import Configuration
from .errors import (
    DependencyError,
    EqRepairError,
    TerminationGuardTriggered,
    TransformFailed,
)
from .frontend.printer import print_term
from .frontend.syntax import Role
from .kernel.beta import beta_normalize, hered_apply
from .kernel.env import EMPTY, Context, Definition, GlobalEnv
from .kernel.reduce import conv, normalize, whnf
from .kernel.terms import (
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
    children,
    global_names,
    loose_bound,
    replace_at,
    shift,
    spine,
    subterm_at,
)
from .kernel.typing import add_definition, infer_type

ROLE_ORDER = ("iota", "dep_elim", "dep_constr", "eta", "type")
CACHE_ENV = "EQREPAIR_CACHE_DIR"


# ---------------------------------------------------------------------------
# role patterns


@dataclass(frozen=True)
class RolePattern:
    role: Role
    key: tuple
    nargs: int
    binder_types: tuple[Term, ...]  # binder b's type lives under binders 0..b-1
    body: Term  # pattern; Var(i) at depth 0 is binder k-1-i
    replacement: Term  # closed B-side entry in β-normal form

    @property
    def k(self) -> int:
        return len(self.binder_types)


@dataclass(frozen=True)
class ConfigMatch:
    role: Role
    args: tuple[Term, ...]
    consumed: int  # spine arguments covered by the match


def head_key(head: Term, ncases_hint: int | None = None) -> tuple | None:
    if isinstance(head, Elim):
        return ("elim", len(head.cases))
    if isinstance(head, Constr):
        ind, _ = spine(head.ind)
        return ("constr", head.index, ind.name if isinstance(ind, (Ind, Const)) else None)
    if isinstance(head, Const):
        return ("const", head.name)
    if isinstance(head, Ind):
        return ("ind", head.name)
    if isinstance(head, Lam):
        return ("lam", head)
    return None


def _telescope(env: GlobalEnv, ty: Term, n: int | None = None) -> list[Term]:
    """Domains of the leading Π binders of ``ty`` (all of them when ``n`` is None)."""
    out: list[Term] = []
    while n is None or len(out) < n:
        if not isinstance(ty, Pi):
            w = whnf(env, EMPTY, ty)
            if not isinstance(w, Pi):
                break
            ty = w
        out.append(ty.dom)
        ty = ty.cod
    return out


def _variants(env: GlobalEnv, entry: Term, arity: int) -> list[tuple[tuple[Term, ...], Term]]:
    """Pattern bodies for a closed entry: the literal application, then unfoldings."""
    ty = infer_type(env, EMPTY, entry)
    doms = _telescope(env, ty, arity)
    k = len(doms)
    out = [(tuple(doms), app(entry, *(Var(k - 1 - i) for i in range(k))))]
    seen = {entry}
    cur = entry
    for _ in range(4):
        if isinstance(cur, Const):
            d = env.get(cur.name)
            if not isinstance(d, Definition) or cur.name in env.opaque:
                break
            cur = d.body
            if cur in seen:
                break
            seen.add(cur)
        binders: list[Term] = []
        body = cur
        while isinstance(body, Lam) and len(binders) < k:
            binders.append(body.dom)
            body = body.body
        if len(binders) == k and not isinstance(spine(body)[0], Var) and body != out[0][1]:
            out.append((tuple(binders), body))
        if not isinstance(cur, Const):
            h, args = spine(body)
            if isinstance(h, Const) and len(binders) == k and args == [Var(k - 1 - i) for i in range(k)]:
                cur = h  # η-short alias of another constant
                continue
            break
    return out


def _entry_arity(env: GlobalEnv, entry: Term) -> int:
    return len(_telescope(env, infer_type(env, EMPTY, entry)))


def compile_patterns(env: GlobalEnv, cfg: Configuration) -> dict[tuple, list[RolePattern]]:
    """Index the A-side roles of ``cfg`` by the head of their pattern bodies."""
    from .config import family_params

    cfg = cfg.completed(env)
    n_params = len(family_params(env, cfg.type_a))
    n = len(cfg.dep_constr_a)
    roles: list[tuple[Role, Term, Term, int]] = []
    for j in range(n):
        roles.append((Role("iota", j), cfg.iota_a[j], cfg.iota_b[j], -1))
    roles.append((Role("dep_elim"), cfg.dep_elim_a, cfg.dep_elim_b, -1))
    for j in range(n):
        roles.append((Role("dep_constr", j), cfg.dep_constr_a[j], cfg.dep_constr_b[j], -1))
    roles.append((Role("eta"), cfg.eta_a, cfg.eta_b, -1))
    roles.append((Role("type"), cfg.type_a, cfg.type_b, n_params))

    table: dict[tuple, list[RolePattern]] = {}
    for role, a_entry, b_entry, arity in roles:
        if arity < 0:
            arity = _entry_arity(env, a_entry)
        repl = beta_normalize(b_entry)
        for doms, body in _variants(env, a_entry, arity):
            h, args = spine(body)
            key = head_key(h)
            if key is None:
                continue
            table.setdefault(key, []).append(RolePattern(role, key, len(args), doms, body, repl))
    return table


# ---------------------------------------------------------------------------
# first-order matching


def _match(pat: Term, t: Term, depth: int, sub: dict[int, Term]) -> bool:
    if isinstance(pat, Var):
        if pat.idx >= depth:
            if loose_bound(t) > 0 and _has_var_below(t, depth):
                return False
            val = shift(t, -depth) if depth else t
            slot = pat.idx - depth
            old = sub.get(slot)
            if old is None:
                sub[slot] = val
                return True
            return old == val
        return t == pat
    if type(pat) is not type(t):
        return False
    if isinstance(pat, App):
        return _match(pat.fn, t.fn, depth, sub) and _match(pat.arg, t.arg, depth, sub)  # type: ignore[attr-defined]
    if isinstance(pat, (Lam, Pi)):
        pb = pat.body if isinstance(pat, Lam) else pat.cod
        tb = t.body if isinstance(t, Lam) else t.cod  # type: ignore[attr-defined]
        return _match(pat.dom, t.dom, depth, sub) and _match(pb, tb, depth + 1, sub)  # type: ignore[attr-defined]
    if isinstance(pat, Constr):
        return pat.index == t.index and _match(pat.ind, t.ind, depth, sub)  # type: ignore[attr-defined]
    if isinstance(pat, Elim):
        return (
            len(pat.cases) == len(t.cases)  # type: ignore[attr-defined]
            and _match(pat.scrut, t.scrut, depth, sub)  # type: ignore[attr-defined]
            and _match(pat.motive, t.motive, depth, sub)  # type: ignore[attr-defined]
            and all(_match(p, c, depth, sub) for p, c in zip(pat.cases, t.cases))  # type: ignore[attr-defined]
        )
    return pat == t


def _has_var_below(t: Term, depth: int) -> bool:
    from .kernel.terms import var_occurs

    return any(var_occurs(t, i) for i in range(depth))


# ---------------------------------------------------------------------------
# cache


class LiftCache:
    """Memo table for transported subterms, optionally persisted on disk."""

    FILE = "lift-cache.pkl"

    def __init__(self, enabled: bool = True, directory: str | os.PathLike | None = None):
        self.enabled = enabled
        self.table: dict = {}
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()
        self.directory = Path(directory) if directory else None
        if self.directory is None and os.environ.get(CACHE_ENV):
            self.directory = Path(os.environ[CACHE_ENV])
        if self.enabled and self.directory is not None:
            self.load()

    def get(self, key):
        if not self.enabled:
            return None
        with self._lock:
            val = self.table.get(key)
            if val is None:
                self.misses += 1
            else:
                self.hits += 1
            return val

    def put(self, key, value: Term) -> None:
        if self.enabled:
            with self._lock:
                self.table[key] = value

    def load(self) -> None:
        path = self.directory / self.FILE if self.directory else None
        if path is not None and path.exists():
            try:
                with path.open("rb") as fh:
                    self.table.update(pickle.load(fh))
            except (OSError, pickle.UnpicklingError, EOFError, AttributeError):
                pass  # a corrupt cache is just a cold cache

    def save(self) -> None:
        if not (self.enabled and self.directory):
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        tmp = self.directory / (self.FILE + ".tmp")
        with tmp.open("wb") as fh:
            pickle.dump(self.table, fh)
        tmp.replace(self.directory / self.FILE)


def _fingerprint(cfg: Configuration, renames: dict[str, str]) -> str:
    parts = [cfg.name]
    for v in (
        cfg.type_a, cfg.type_b, *cfg.dep_constr_a, *cfg.dep_constr_b, cfg.dep_elim_a, cfg.dep_elim_b,
        cfg.eta_a, cfg.eta_b, *(cfg.iota_a or ()), *(cfg.iota_b or ()),
    ):
        parts.append(print_term(v) if v is not None else "-")
    parts.extend(f"{k}={v}" for k, v in sorted(renames.items()))
    return hashlib.sha256("\n".join(parts).encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# the transformation


def a_names(cfg: Configuration) -> frozenset[str]:
    h, _ = spine(cfg.type_a)
    return frozenset({h.name}) if isinstance(h, (Ind, Const)) else frozenset()


@dataclass
class LiftState:
    env: GlobalEnv
    cfg: Configuration
    patterns: dict
    renames: dict[str, str]
    cache: LiftCache | None
    fingerprint: str
    forbidden: frozenset[str]
    name: str = "<term>"
    produced: set = field(default_factory=set)
    guard_roles: list = field(default_factory=list)
    self_referential: frozenset = frozenset()
    source: Term | None = None  # the term being transported, for error paths


def make_state(
    env: GlobalEnv,
    cfg: Configuration,
    renames: dict[str, str] | None = None,
    cache: LiftCache | None = None,
    name: str = "<term>",
) -> LiftState:
    cfg = cfg.completed(env)
    patterns = compile_patterns(env, cfg)
    forbidden = a_names(cfg)
    selfref = frozenset(
        p.role for ps in patterns.values() for p in ps if not global_names(p.replacement).isdisjoint(forbidden)
    )
    return LiftState(
        env, cfg, patterns, dict(renames or {}), cache, _fingerprint(cfg, renames or {}), forbidden,
        name, self_referential=selfref,
    )


def unify_config(env: GlobalEnv, cfg: Configuration, t: Term, ctx: Context = EMPTY, state: LiftState | None = None) -> ConfigMatch | None:
    """Read ``t`` (or a prefix of its spine) as an instance of an A-side role."""
    st = state or make_state(env, cfg)
    return _unify(st, ctx, t)


def _unify(st: LiftState, ctx: Context, t: Term) -> ConfigMatch | None:
    head, args = spine(t)
    key = head_key(head)
    cands = st.patterns.get(key) if key is not None else None
    if not cands:
        return None
    for p in sorted(cands, key=lambda p: ROLE_ORDER.index(p.role.kind)):
        if p.nargs > len(args):
            continue
        subject = app(head, *args[: p.nargs])
        sub: dict[int, Term] = {}
        if not _match(p.body, subject, 0, sub):
            continue
        values = _solve(st.env, ctx, p, sub)
        if values is not None:
            return ConfigMatch(p.role, tuple(values), p.nargs)
    return None


def _solve(env: GlobalEnv, ctx: Context, p: RolePattern, sub: dict[int, Term]) -> list[Term] | None:
    """Fill pattern variables not fixed by the body from the types of fixed ones."""
    k = p.k
    progress = True
    while len(sub) < k and progress:
        progress = False
        for b in range(k):
            slot = k - 1 - b
            if slot not in sub:
                continue
            ty_pat = shift(p.binder_types[b], k - b)
            want_unbound = any(
                (k - 1 - c) not in sub for c in range(b) if _mentions_binder(p.binder_types[b], b, c)
            )
            if not want_unbound:
                continue
            try:
                ty = infer_type(env, ctx, sub[slot])
            except EqRepairError:
                continue
            for cand in (ty, whnf(env, ctx, ty), normalize(env, ctx, ty)):
                trial = dict(sub)
                if _match(ty_pat, cand, 0, trial):
                    sub.update(trial)
                    progress = True
                    break
    if len(sub) < k:
        return None
    return [sub[k - 1 - b] for b in range(k)]


def _mentions_binder(ty: Term, b: int, c: int) -> bool:
    from .kernel.terms import var_occurs

    # binder c (< b) is Var(b - 1 - c) inside binder b's type
    return var_occurs(ty, b - 1 - c)


def _lift(st: LiftState, ctx: Context, t: Term, path: tuple[int, ...]) -> Term:
    key = None
    if st.cache is not None and st.cache.enabled:
        key = (st.fingerprint, t, ctx.entries)
        hit = st.cache.get(key)
        if hit is not None:
            return hit
    out = _lift_uncached(st, ctx, t, path)
    if key is not None:
        st.cache.put(key, out)
    return out


def _arg_path(path: tuple[int, ...], n: int, i: int) -> tuple[int, ...]:
    return path + (0,) * (n - 1 - i) + (1,)


def _lift_uncached(st: LiftState, ctx: Context, t: Term, path: tuple[int, ...]) -> Term:
    head, args = spine(t)
    n = len(args)

    expanded = _eta_expand(st, ctx, head, args)
    if expanded is not None:
        return _lift(st, ctx, expanded, path)

    m = _unify(st, ctx, t)
    if m is not None:
        vals = [_lift(st, ctx, v, path) for v in m.args]
        pattern_b = _replacement(st, m.role)
        out = hered_apply(pattern_b, vals)
        st.produced.add(out)
        if m.role in st.self_referential:
            st.guard_roles.append(m.role)
        rest = [_lift(st, ctx, a, _arg_path(path, n, i)) for i, a in enumerate(args) if i >= m.consumed]
        return app(out, *rest)

    if n:
        new_head = _lift(st, ctx, head, path + (0,) * n)
        return app(new_head, *(_lift(st, ctx, a, _arg_path(path, n, i)) for i, a in enumerate(args)))
    if isinstance(t, Pi):
        return Pi(t.name, _lift(st, ctx, t.dom, path + (0,)), _lift(st, ctx.push(t.name, t.dom), t.cod, path + (1,)))
    if isinstance(t, Lam):
        return Lam(t.name, _lift(st, ctx, t.dom, path + (0,)), _lift(st, ctx.push(t.name, t.dom), t.body, path + (1,)))
    if isinstance(t, Elim):
        return Elim(
            _lift(st, ctx, t.scrut, path + (0,)),
            _lift(st, ctx, t.motive, path + (1,)),
            tuple(_lift(st, ctx, c, path + (2 + i,)) for i, c in enumerate(t.cases)),
        )
    if isinstance(t, Constr):
        return Constr(t.index, _lift(st, ctx, t.ind, path + (0,)))
    if isinstance(t, Const):
        if t.name in st.renames:
            return Const(st.renames[t.name])
        if t.name not in st.forbidden:
            ty = st.env.type_of_const(t.name)
            if not global_names(ty).isdisjoint(st.forbidden):
                # arguments of a matched role carry their parent's path, so look the name up instead
                if st.source is not None:
                    found = _first_forbidden(st.source, frozenset({t.name}))
                    path = found[0] if found else path
                raise TransformFailed(
                    f"{t.name} has a type over {', '.join(sorted(st.forbidden))} but plays no configured role",
                    path,
                    _annotation_hint(st, path),
                )
        return t
    return t


def _replacement(st: LiftState, role: Role) -> Term:
    for ps in st.patterns.values():
        for p in ps:
            if p.role == role:
                return p.replacement
    raise KeyError(role)


def _annotation_hint(st: LiftState, path: tuple[int, ...]) -> str:
    # the nearest enclosing application is where an annotation would go
    p = list(path)
    while p and p[-1] == 0:
        p.pop()
    where = ";".join(map(str, p))
    return f"nearest annotation point: Annotate {st.name} [{where}] <role>"


def _eta_expand(st: LiftState, ctx: Context, head: Term, args: list[Term]) -> Term | None:
    """η-expand a configured head applied to fewer arguments than its role needs."""
    key = head_key(head)
    cands = st.patterns.get(key) if key is not None else None
    if not cands:
        return None
    need = min(p.nargs for p in cands)
    if len(args) >= need:
        return None
    # literal lambda heads are β-redexes, not under-applied roles
    if isinstance(head, Lam):
        return None
    t = app(head, *args)
    try:
        ty = infer_type(st.env, ctx, t)
    except EqRepairError:
        return None
    doms = _telescope(st.env, ty, need - len(args))
    missing = len(doms)
    if missing == 0:
        return None
    # the telescope domains are already in de Bruijn position for nested binders
    body = app(shift(t, missing), *(Var(missing - 1 - i) for i in range(missing)))
    names = _binder_names(ty, missing)
    for name, dom in reversed(list(zip(names, doms))):
        body = Lam(name, dom, body)
    return body


def _binder_names(ty: Term, n: int) -> list[str]:
    out = []
    while isinstance(ty, Pi) and len(out) < n:
        out.append(ty.name if ty.name != "_" else "y")
        ty = ty.cod
    while len(out) < n:
        out.append("y")
    return out


def guard_termination(state: LiftState, t: Term) -> bool:
    """False when ``t`` was produced by this transformation or comes from B's own roles."""
    if t in state.produced:
        return False
    for ps in state.patterns.values():
        for p in ps:
            if p.role in state.self_referential and _is_subterm(t, p.replacement):
                return False
    return True


def _is_subterm(t: Term, within: Term) -> bool:
    if t == within:
        return True
    return any(_is_subterm(t, c) for c in children(within))


def _first_forbidden(t: Term, names: frozenset[str], path: tuple[int, ...] = ()) -> tuple[tuple[int, ...], Term] | None:
    if isinstance(t, (Ind, Const)) and t.name in names:
        return path, t
    if global_names(t).isdisjoint(names):
        return None
    for i, c in enumerate(children(t)):
        r = _first_forbidden(c, names, path + (i,))
        if r is not None:
            return r
    return None


def _check_output(st: LiftState, src: Term, out: Term) -> None:
    if not st.forbidden or global_names(out).isdisjoint(st.forbidden):
        return
    if st.guard_roles or not _guard_ok(st, out):
        roles = ", ".join(sorted({str(r) for r in st.guard_roles})) or "B"
        raise TerminationGuardTriggered(
            f"B's configuration mentions {', '.join(sorted(st.forbidden))} ({roles}); "
            "transporting the result again would not terminate"
        )
    where = _first_forbidden(src, st.forbidden)
    path = where[0] if where else ()
    raise TransformFailed(
        f"output still mentions {', '.join(sorted(st.forbidden))}", path, _annotation_hint(st, path)
    )


def _guard_ok(st: LiftState, out: Term) -> bool:
    hit = _first_forbidden(out, st.forbidden)
    return hit is None or guard_termination(st, hit[1])


def transport(
    env: GlobalEnv,
    cfg: Configuration,
    t: Term,
    ctx: Context = EMPTY,
    *,
    renames: dict[str, str] | None = None,
    cache: LiftCache | None = None,
    state: LiftState | None = None,
    check_freedom: bool = True,
) -> Term:
    """Transport ``t`` from A to B.  Use ``cfg.reversed()`` for B to A."""
    st = state or make_state(env, cfg, renames, cache)
    st.source = t
    out = _lift(st, ctx, t, ())
    if check_freedom:
        _check_output(st, t, out)
    return out


# ---------------------------------------------------------------------------
# annotations


def apply_annotations(
    env: GlobalEnv, cfg: Configuration, body: Term, annotations: Iterable[tuple[Sequence[int], Role]], name: str = "<term>"
) -> Term:
    """Rewrite each annotated spine head to the canonical A-side role entry."""
    cfg = cfg.completed(env)
    for path, role in annotations:
        try:
            sub = subterm_at(body, path)
        except IndexError as e:
            raise TransformFailed(f"annotation path does not exist in {name}: {e}", tuple(path)) from None
        head, args = spine(sub)
        entry = _a_entry(cfg, role)
        ctx = _context_at(body, path)
        try:
            ok = conv(env, ctx, infer_type(env, ctx, head), infer_type(env, ctx, entry))
        except EqRepairError:
            ok = False
        if not ok:
            raise TransformFailed(f"annotated subterm does not have the type of {role}", tuple(path))
        body = replace_at(body, path, app(entry, *args))
    return body


def _a_entry(cfg: Configuration, role: Role) -> Term:
    if role.kind == "iota":
        return cfg.iota_a[role.index]  # type: ignore[index]
    if role.kind == "dep_constr":
        return cfg.dep_constr_a[role.index]  # type: ignore[index]
    if role.kind == "dep_elim":
        return cfg.dep_elim_a
    if role.kind == "eta":
        return cfg.eta_a  # type: ignore[return-value]
    return cfg.type_a


def _context_at(t: Term, path: Sequence[int]) -> Context:
    ctx = EMPTY
    for i in path:
        if isinstance(t, (Lam, Pi)) and i == 1:
            ctx = ctx.push(t.name, t.dom)
        t = children(t)[i]
    return ctx


# ---------------------------------------------------------------------------
# definitions and modules


@dataclass(frozen=True)
class RepairedDefinition:
    source: str
    name: str
    type: Term
    body: Term


def repair_definition(
    env: GlobalEnv,
    cfg: Configuration,
    name: str,
    new_name: str,
    *,
    renames: dict[str, str] | None = None,
    annotations: Sequence[tuple[Sequence[int], Role]] = (),
    cache: LiftCache | None = None,
) -> tuple[GlobalEnv, RepairedDefinition]:
    """Transport the type and body of ``name`` and register the result."""
    d = env.definition(name)
    st = make_state(env, cfg, renames, cache, name)
    body = apply_annotations(env, cfg, d.body, annotations, name) if annotations else d.body
    new_type = transport(env, cfg, d.type, state=st)
    new_body = transport(env, cfg, body, state=st)
    try:
        env2 = add_definition(env, new_name, new_type, new_body)
    except EqRepairError as e:
        if isinstance(e, TransformFailed):
            raise
        raise TransformFailed(f"repaired {name} does not type check: {e}") from None
    return env2, RepairedDefinition(name, new_name, new_type, new_body)


class ModuleRepairFailed(TransformFailed):
    def __init__(self, cause: TransformFailed, completed: list[RepairedDefinition], failed: str):
        self.cause = cause
        self.completed = completed
        self.failed_name = failed
        done = ", ".join(r.name for r in completed) or "nothing"
        super().__init__(f"repairing {failed} failed: {cause} (completed: {done})", cause.path, cause.hint)


class ModuleGuardTriggered(ModuleRepairFailed, TerminationGuardTriggered):
    """A module repair stopped by the termination guard."""


def dependency_order(env: GlobalEnv, names: Sequence[str]) -> list[str]:
    """Topologically sort ``names`` by their references to each other."""
    from graphlib import CycleError, TopologicalSorter

    chosen = set(names)
    graph: dict[str, set[str]] = {}
    for n in names:
        d = env.definition(n)
        graph[n] = (global_names(d.body) | global_names(d.type)) & chosen - {n}
    ts = TopologicalSorter(graph)
    try:
        order = list(ts.static_order())
    except CycleError as e:
        raise DependencyError(f"cyclic dependencies among {', '.join(e.args[1])}") from None
    # keep the caller's order among independent definitions
    rank = {n: i for i, n in enumerate(names)}
    done: list[str] = []
    pending = set(order)
    while pending:
        ready = sorted((n for n in pending if graph[n] <= set(done)), key=rank.__getitem__)
        done.append(ready[0])
        pending.discard(ready[0])
    return done


def config_names(cfg: Configuration) -> frozenset[str]:
    """Global names used by the configuration's own entries."""
    names: set[str] = set()
    for v in (
        cfg.type_a, cfg.type_b, *cfg.dep_constr_a, *cfg.dep_constr_b, cfg.dep_elim_a, cfg.dep_elim_b,
        cfg.eta_a, cfg.eta_b, *(cfg.iota_a or ()), *(cfg.iota_b or ()),
    ):
        if v is not None:
            names |= global_names(v)
    return frozenset(names)


def needs_repair(
    env: GlobalEnv,
    cfg: Configuration,
    name: str,
    done: Iterable[str] = (),
    annotations: dict[str, list] | None = None,
) -> list[str]:
    """Definitions reachable from ``name`` that mention A, ``name`` included, dependencies first.

    Annotated bodies are scanned after their annotations are applied, so a
    helper that only appears at annotated positions is not pulled in.
    """
    annotations = annotations or {}
    forbidden = a_names(cfg)
    skip = config_names(cfg) | set(done)
    memo: dict[str, bool] = {}
    order: list[str] = []

    def visit(n: str) -> bool:
        if n in memo:
            return memo[n]
        memo[n] = False
        d = env.get(n)
        if not isinstance(d, Definition) or n in skip:
            return False
        body = d.body
        if annotations.get(n):
            body = apply_annotations(env, cfg, body, annotations[n], n)
        refs = global_names(d.type) | global_names(body)
        hit = not refs.isdisjoint(forbidden)
        for r in sorted(refs):
            if r != n and visit(r):
                hit = True
        memo[n] = hit
        if hit:
            order.append(n)
        return hit

    visit(name)
    if name not in order and isinstance(env.get(name), Definition):
        order.append(name)
    return order


def repair_module(
    env: GlobalEnv,
    cfg: Configuration,
    names: Sequence[str],
    new_name=None,
    *,
    renames: dict[str, str] | None = None,
    annotations: dict[str, list] | None = None,
    cache: LiftCache | None = None,
) -> tuple[GlobalEnv, list[RepairedDefinition]]:
    """Repair ``names`` in dependency order, sharing renames and the cache."""
    if new_name is None:
        new_name = lambda n: n + "_repaired"  # noqa: E731
    renames = dict(renames or {})
    cache = cache if cache is not None else LiftCache()
    out: list[RepairedDefinition] = []
    for n in dependency_order(env, names):
        try:
            env, rd = repair_definition(
                env, cfg, n, new_name(n), renames=renames,
                annotations=(annotations or {}).get(n, ()), cache=cache,
            )
        except TerminationGuardTriggered as e:
            raise ModuleGuardTriggered(e, out, n) from e
        except TransformFailed as e:
            raise ModuleRepairFailed(e, out, n) from e
        renames[n] = rd.name
        out.append(rd)
    cache.save()
    return env, out
