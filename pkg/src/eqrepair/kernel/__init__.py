"""Core type theory: terms, environments, reduction and typing."""

from .env import EMPTY, Assumption, Context, Definition, GlobalEnv, InductiveDecl
from .reduce import alpha_eq, conv, normalize, whnf
from .terms import (
    TYPE0,
    TYPE1,
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
)
from .typing import (
    add_assumption,
    add_definition,
    case_type,
    check,
    declare_inductive,
    eliminator_type,
    infer_type,
    motive_type,
)

__all__ = [
    "EMPTY", "Assumption", "Context", "Definition", "GlobalEnv", "InductiveDecl",
    "alpha_eq", "conv", "normalize", "whnf", "TYPE0", "TYPE1", "App", "Const",
    "Constr", "Elim", "Fv", "Ind", "Lam", "Pi", "Sort", "Term", "Var",
    "add_assumption", "add_definition", "case_type", "check", "declare_inductive",
    "eliminator_type", "infer_type", "motive_type",
]
