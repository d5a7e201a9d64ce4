"""Bundled vernacular sources: the prelude and the case studies."""

from __future__ import annotations

from importlib import resources

from ..kernel.env import GlobalEnv


def source(name: str) -> str:
    """Text of a bundled ``.pml`` file, e.g. ``source("swap")``."""
    if not name.endswith(".pml"):
        name += ".pml"
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def available() -> list[str]:
    return sorted(
        p.name[:-4] for p in resources.files(__package__).iterdir() if p.name.endswith(".pml")
    )


_PRELUDE: GlobalEnv | None = None


def load_prelude(env: GlobalEnv | None = None) -> GlobalEnv:
    """Extend ``env`` (empty by default) with the standard library."""
    global _PRELUDE
    from ..frontend.vernacular import Session

    if env is None or len(env) == 0:
        if _PRELUDE is None:
            s = Session()
            s.run_text(source("prelude"), "prelude.pml")
            _PRELUDE = s.env
        return _PRELUDE
    s = Session(env)
    s.run_text(source("prelude"), "prelude.pml")
    return s.env


def load(name: str, with_prelude: bool = True):
    """Run a bundled file in a fresh session and return the session."""
    from ..frontend.vernacular import Session

    s = Session(load_prelude() if with_prelude and name != "prelude" else None)
    s.run_text(source(name), f"{name}.pml")
    return s
