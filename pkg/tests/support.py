"""Helpers shared by the test modules: numeral and list builders, enum
generators and the round-trip driver."""

from __future__ import annotations

import itertools

from eqrepair.corpus import load, load_prelude
from eqrepair.frontend.vernacular import Session
from eqrepair.kernel.env import EMPTY
from eqrepair.kernel.reduce import normalize
from eqrepair.kernel.terms import Constr, Ind, Term, app, mentions
from eqrepair.transform import a_names, repair_module

NAT, N_BIN, POSITIVE = Ind("nat"), Ind("N"), Ind("positive")

# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def acceptance_line(criterion: int, ok: bool, detail: str) -> str:
    return f"acceptance criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"


def unary(k: int) -> Term:
    t = Constr(0, NAT)
    for _ in range(k):
        t = app(Constr(1, NAT), t)
    return t


def positive(k: int) -> Term:
    # xI = 0, xO = 1, xH = 2, least significant bit outermost
    if k == 1:
        return Constr(2, POSITIVE)
    return app(Constr(0 if k % 2 else 1, POSITIVE), positive(k // 2))


def binary(k: int) -> Term:
    return Constr(0, N_BIN) if k == 0 else app(Constr(1, N_BIN), positive(k))


def decode_binary(t: Term) -> int:
    """Read a closed normal N back as an int; the oracle side of the slow_add checks."""
    from eqrepair.kernel.terms import spine

    head, args = spine(t)
    assert isinstance(head, Constr) and head.ind == N_BIN, t
    if head.index == 0:
        return 0

    def pos(p: Term) -> int:
        h, a = spine(p)
        assert isinstance(h, Constr) and h.ind == POSITIVE, p
        if h.index == 2:
            return 1
        return 2 * pos(a[0]) + (1 if h.index == 0 else 0)

    return pos(args[0])


def list_term(ind: str, elem_type: Term, items: list[Term], nil: int, cons: int) -> Term:
    lst = Ind(ind)
    t = app(Constr(nil, app(lst, elem_type)))
    for x in reversed(items):
        t = app(Constr(cons, app(lst, elem_type)), x, t)
    return t


def nf(env, t: Term) -> Term:
    return normalize(env, EMPTY, t)


def fresh_session(name: str | None = None) -> Session:
    return load(name) if name else Session(load_prelude())


def round_trip(env, cfg, names, annotations=None):
    """Repair ``names`` along ``cfg`` and back again.

    Returns the environment and, per name, (original, forward, backward)
    definition names.
    """
    env, fwd = repair_module(env, cfg, names, lambda n: n + "__fwd", annotations=annotations or {})
    env, back = repair_module(env, cfg.reversed(), [r.name for r in fwd], lambda n: n + "__back")
    return env, [(r.source, r.name, b.name) for r, b in zip(fwd, back)]


def a_free(cfg, *terms: Term) -> bool:
    names = a_names(cfg)
    return not any(mentions(t, names) for t in terms)


_enum_ids = itertools.count()


def enum_source(size: int, permutation: tuple[int, ...], shift: int = 1) -> tuple[str, str, str]:
    """Vernacular for an enum, a reordered copy and three functions over the original.

    ``permutation[j]`` is the position in the new type of old constructor ``j``.
    Returns (text, old type name, new type name).
    """
    uid = next(_enum_ids)
    old, new = f"E{uid}", f"New.E{uid}"
    ctors = [f"c{uid}_{j}" for j in range(size)]
    new_order = [None] * size
    for j, k in enumerate(permutation):
        new_order[k] = ctors[j]
    lines = [f"Inductive {old} : Type0 :="]
    lines += [f"| {c} : {old}" for c in ctors]
    lines[-1] += "."
    lines.append(f"Inductive {new} : Type0 :=")
    lines += [f"| New.{c} : {new}" for c in new_order]
    lines[-1] += "."
    rotated = " | ".join(ctors[(j + shift) % size] for j in range(size))
    lines.append(
        f"Definition {old}.rot : {old} -> {old} := "
        f"fun (e : {old}) => Elim(e, fun (_ : {old}) => {old}) {{ {rotated} }}."
    )
    firsts = " | ".join("true" if j == 0 else "false" for j in range(size))
    lines.append(
        f"Definition {old}.is_first : {old} -> bool := "
        f"fun (e : {old}) => Elim(e, fun (_ : {old}) => bool) {{ {firsts} }}."
    )
    # rotating ``size`` times is the identity, case by case
    iterated = "e"
    for _ in range(size):
        iterated = f"{old}.rot ({iterated})"
    refls = " | ".join(f"eq_refl {old} {c}" for c in ctors)
    lines.append(
        f"Lemma {old}.rot_cycle : forall (e : {old}), eq {old} ({iterated}) e := "
        f"fun (e : {old}) => Elim(e, fun (e : {old}) => eq {old} ({iterated}) e) {{ {refls} }}."
    )
    return "\n".join(lines) + "\n", old, new
