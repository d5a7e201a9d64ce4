"""Second pass over decompiled scripts: shorter scripts that still replay."""

from __future__ import annotations

from dataclasses import replace
from typing import Iterable, Iterator, Sequence

from ..errors import EqRepairError
from ..kernel.env import GlobalEnv
from .qtac import Induction, Intro, Intros, Rewrite, Script, Seq, Split, size
from .replay import Goal, replay

Path = tuple[int, ...]


def merge_intros(s: Script) -> Script:
    if isinstance(s, Seq):
        rest = merge_intros(s.rest)
        if isinstance(s.first, (Intro, Intros)):
            names = (s.first.name,) if isinstance(s.first, Intro) else s.first.names
            if isinstance(rest, Seq) and isinstance(rest.first, Intros):
                return Seq(Intros(names + rest.first.names), rest.rest)
            if isinstance(rest, Seq) and isinstance(rest.first, Intro):
                return Seq(Intros(names + (rest.first.name,)), rest.rest)
            if isinstance(rest, (Intro, Intros)):
                more = (rest.name,) if isinstance(rest, Intro) else rest.names
                return Intros(names + more)
        return Seq(s.first, rest)
    if isinstance(s, Induction):
        return replace(s, branches=tuple(merge_intros(b) for b in s.branches))
    if isinstance(s, Split):
        return Split(merge_intros(s.left), merge_intros(s.right))
    return s


def _children(s: Script) -> list[Script]:
    if isinstance(s, Seq):
        return [s.first, s.rest]
    if isinstance(s, Induction):
        return list(s.branches)
    if isinstance(s, Split):
        return [s.left, s.right]
    return []


def _rebuild(s: Script, kids: Sequence[Script]) -> Script:
    if isinstance(s, Seq):
        return Seq(kids[0], kids[1])  # type: ignore[arg-type]
    if isinstance(s, Induction):
        return replace(s, branches=tuple(kids))
    if isinstance(s, Split):
        return Split(kids[0], kids[1])
    return s


def positions(s: Script, path: Path = ()) -> Iterator[tuple[Path, Script]]:
    yield path, s
    for i, c in enumerate(_children(s)):
        yield from positions(c, path + (i,))


def get_at(s: Script, path: Path) -> Script:
    for i in path:
        s = _children(s)[i]
    return s


def replace_at(s: Script, path: Path, new: Script) -> Script:
    if not path:
        return new
    kids = _children(s)
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return _rebuild(s, kids)


def replays(env: GlobalEnv, goal: Goal, s: Script) -> bool:
    try:
        replay(env, goal, s)
    except EqRepairError:
        return False
    return True


def simplify_script(
    env: GlobalEnv, goal: Goal, s: Script, hints: Iterable[Script | tuple[str, Script]] = ()
) -> Script:
    """Merge intro chains, drop motives replay can infer, and try hint scripts.

    Every change is kept only if the whole script still replays at ``goal``.
    """
    s = merge_intros(s)
    for path, node in list(positions(s)):
        if isinstance(node, (Rewrite, Induction)) and node.motive is not None:
            trial = replace_at(s, path, replace(node, motive=None))
            if replays(env, goal, trial):
                s = trial
    hint_scripts = [h[1] if isinstance(h, tuple) else h for h in hints]
    if hint_scripts:
        s = _use_hints(env, goal, s, hint_scripts)
    return s


def _use_hints(env: GlobalEnv, goal: Goal, s: Script, hints: list[Script]) -> Script:
    # outermost subtrees first, so one hint can absorb a whole branch
    changed = True
    while changed:
        changed = False
        for path, node in positions(s):
            if path and path[-1] == 0 and isinstance(get_at(s, path[:-1]), Seq):
                continue  # the head of a sequence is a single step, not a subproof
            for h in hints:
                if h == node or size(h) > size(node):
                    continue
                trial = replace_at(s, path, h)
                if replays(env, goal, trial):
                    s, changed = trial, True
                    break
            if changed:
                break
    return s
