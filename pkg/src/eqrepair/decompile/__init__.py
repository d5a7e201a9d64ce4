"""Proof terms to tactic scripts and back."""

from .decompiler import decompile
from .qtac import (
    Apply,
    Induction,
    Intro,
    Intros,
    Left,
    Reflexivity,
    Rewrite,
    Right,
    Script,
    Seq,
    Split,
    Symmetry,
    parse_script,
    print_script,
    seq,
    size,
    steps,
)
from .replay import Goal, replay
from .simplify import simplify_script

__all__ = [
    "Apply", "Goal", "Induction", "Intro", "Intros", "Left", "Reflexivity", "Rewrite", "Right",
    "Script", "Seq", "Split", "Symmetry", "decompile", "parse_script", "print_script", "replay",
    "seq", "simplify_script", "size", "steps",
]
