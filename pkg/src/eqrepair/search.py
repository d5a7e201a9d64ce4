"""Discovery of constructor permutations between two inductive types."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .config import Configuration
from .errors import ArityMismatch
from .kernel.env import GlobalEnv, InductiveDecl
from .kernel.terms import (
    App,
    Constr,
    Elim,
    Ind,
    Lam,
    Pi,
    Term,
    app,
    fresh,
    instantiate,
    lams,
)


@dataclass(frozen=True)
class ConstructorMapping:
    """``permutation[j]`` is the B constructor that A constructor ``j`` maps to."""

    source: str
    target: str
    permutation: tuple[int, ...]
    name_matches: int = 0
    distance: int = 0

    def inverse(self) -> tuple[int, ...]:
        inv = [0] * len(self.permutation)
        for j, k in enumerate(self.permutation):
            inv[k] = j
        return tuple(inv)

    def __str__(self) -> str:
        pairs = ", ".join(f"{j}->{k}" for j, k in enumerate(self.permutation))
        return f"[{pairs}]"


def levenshtein(a: str, b: str) -> int:
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def rename_inductive(t: Term, old: str, new: str) -> Term:
    if isinstance(t, Ind):
        return Ind(new) if t.name == old else t
    if isinstance(t, Pi):
        return Pi(t.name, rename_inductive(t.dom, old, new), rename_inductive(t.cod, old, new))
    if isinstance(t, Lam):
        return Lam(t.name, rename_inductive(t.dom, old, new), rename_inductive(t.body, old, new))
    if isinstance(t, App):
        return App(rename_inductive(t.fn, old, new), rename_inductive(t.arg, old, new))
    if isinstance(t, Constr):
        return Constr(t.index, rename_inductive(t.ind, old, new))
    if isinstance(t, Elim):
        return Elim(
            rename_inductive(t.scrut, old, new),
            rename_inductive(t.motive, old, new),
            tuple(rename_inductive(c, old, new) for c in t.cases),
        )
    return t


def _base(name: str) -> str:
    return name.rsplit(".", 1)[-1]


def _same_shape(da: InductiveDecl, db: InductiveDecl) -> bool:
    return (
        len(da.params) == len(db.params)
        and all(x == y for (_, x), (_, y) in zip(da.params, db.params))
        and da.arity == db.arity
    )


def find_permutations(env: GlobalEnv, a: str, b: str) -> list[ConstructorMapping]:
    """All type-correct constructor bijections from ``a`` to ``b``, best first."""
    da, db = env.inductive(a), env.inductive(b)
    if len(da.constructors) != len(db.constructors):
        raise ArityMismatch(
            f"{a} has {len(da.constructors)} constructors but {b} has {len(db.constructors)}"
        )
    if not _same_shape(da, db) or da.n_indices:
        return []
    renamed = [rename_inductive(t, a, b) for _, t in da.constructors]
    n = len(renamed)
    ok = [[renamed[j] == db.constructors[k][1] for k in range(n)] for j in range(n)]
    names_a = [_base(c) for c, _ in da.constructors]
    names_b = [_base(c) for c, _ in db.constructors]
    out = []
    for perm in itertools.permutations(range(n)):
        if all(ok[j][perm[j]] for j in range(n)):
            matches = sum(names_a[j] == names_b[perm[j]] for j in range(n))
            dist = sum(levenshtein(names_a[j], names_b[perm[j]]) for j in range(n))
            out.append(ConstructorMapping(a, b, perm, matches, dist))
    out.sort(key=lambda m: (-m.name_matches, m.distance, m.permutation))
    return out


def _constr_entry(decl: InductiveDecl, target: InductiveDecl, j: int, index: int) -> Term:
    """λ ps xs. Constr(index, target ps) xs, typed by constructor ``j`` of ``decl``."""
    ps = [(fresh(n), None) for n, _ in decl.params]
    binders = []
    pv = []
    for (p, _), (_, ty) in zip(ps, decl.params):
        binders.append((p, _inst(ty, pv)))
        pv.append(p)
    ty = rename_inductive(decl.ctor_type(j, pv), decl.name, target.name)
    xs = []
    while isinstance(ty, Pi):
        x = fresh(ty.name if ty.name != "_" else "x")
        binders.append((x, ty.dom))
        xs.append(x)
        ty = instantiate(ty.cod, x)
    return lams(binders, app(Constr(index, app(Ind(target.name), *pv)), *xs))


def _inst(ty: Term, pv: list) -> Term:
    from .kernel.terms import instantiate_many

    return instantiate_many(ty, pv) if pv else ty


def _elim_entry(env: GlobalEnv, decl: InductiveDecl, order: tuple[int, ...]) -> Term:
    """λ ps P fs a. Elim(a, P){ f[order[0]] | ... }, case types from ``decl``."""
    from .kernel.typing import case_type

    binders = []
    pv = []
    for name, ty in decl.params:
        p = fresh(name)
        binders.append((p, _inst(ty, pv)))
        pv.append(p)
    target = app(Ind(decl.name), *pv)
    motive = fresh("P")
    binders.append((motive, Pi("_", target, _sort0())))
    n = len(decl.constructors)
    # case types in configuration order: configuration case j is native case order[j]
    inv = [0] * n
    for k, j in enumerate(order):
        inv[j] = k
    fs = []
    for j in range(n):
        f = fresh(f"f{j}")
        binders.append((f, case_type(decl, pv, motive, inv[j])))
        fs.append(f)
    a = fresh("a")
    binders.append((a, target))
    return lams(binders, Elim(a, motive, tuple(fs[k] for k in order)))


def _sort0() -> Term:
    from .kernel.terms import TYPE0

    return TYPE0


def config_from_permutation(
    env: GlobalEnv, a: str, b: str, m: ConstructorMapping, name: str | None = None
) -> Configuration:
    da, db = env.inductive(a), env.inductive(b)
    n = len(da.constructors)
    inv = m.inverse()
    return Configuration(
        name or f"{_ident(a)}_{_ident(b)}_{''.join(map(str, m.permutation))}",
        Ind(a),
        Ind(b),
        tuple(_constr_entry(da, da, j, j) for j in range(n)),
        tuple(_constr_entry(da, db, j, m.permutation[j]) for j in range(n)),
        _elim_entry(env, da, tuple(range(n))),
        _elim_entry(env, db, inv),
    ).completed(env)


def _ident(name: str) -> str:
    return name.replace(".", "_")
