"""Configure, Repair and Decompile commands."""

from __future__ import annotations

from ..config import Configuration, ValidationReport, validate_configuration
from ..errors import ConfigurationError, MappingOutOfRange
from ..kernel.terms import Const, Ind, Term, spine
from ..search import config_from_permutation, find_permutations
from ..transform import LiftCache, needs_repair, repair_module
from .syntax import ConfigureCmd, DecompileCmd, RepairCmd, RepairModuleCmd

LIST_FIELDS = ("dep_constr_a", "dep_constr_b", "iota_a", "iota_b")
TERM_FIELDS = ("dep_elim_a", "dep_elim_b", "eta_a", "eta_b", "eta_ok_a", "eta_ok_b")


def build_configuration(session, cmd: ConfigureCmd) -> Configuration:
    fields = {}
    for key, value in cmd.fields.items():
        if key in LIST_FIELDS:
            if not isinstance(value, list):
                raise ConfigurationError(f"{key} takes a list of terms")
            fields[key] = tuple(session.term(v) for v in value)
        elif key in TERM_FIELDS:
            if isinstance(value, list):
                raise ConfigurationError(f"{key} takes a single term")
            fields[key] = session.term(value)
        else:
            raise ConfigurationError(f"unknown configuration field {key!r}")
    for key in ("dep_constr_a", "dep_constr_b", "dep_elim_a", "dep_elim_b"):
        if key not in fields:
            raise ConfigurationError(f"configuration {cmd.name} is missing {key}")
    return Configuration(
        cmd.name,
        session.term(cmd.type_a),
        session.term(cmd.type_b),
        trusted=frozenset(cmd.trusted),
        **fields,
    )


def run_configure(session, cmd: ConfigureCmd) -> None:
    if cmd.name in session.configs:
        raise ConfigurationError(f"configuration {cmd.name} already exists")
    cfg = build_configuration(session, cmd)
    report = validate_configuration(session.env, cfg)
    session.configs[cmd.name] = cfg
    session.reports[cmd.name] = report
    session.log.append(f"configured {cmd.name}: {report.summary()}")


def _head_name(t: Term) -> str | None:
    h, _ = spine(t)
    return h.name if isinstance(h, (Ind, Const)) else None


def choose_configuration(session, a: str, b: str, config: str | None, mapping: int | None) -> Configuration:
    """The named configuration, or the ``mapping``-th automatically found swap."""
    if config is not None:
        if config not in session.configs:
            raise ConfigurationError(f"no configuration named {config}")
        cfg = session.configs[config]
        report: ValidationReport = session.reports.get(config) or validate_configuration(session.env, cfg)
        if not report.ok:
            raise ConfigurationError(f"configuration {config} does not validate: {report.summary()}")
        ends = (_head_name(cfg.type_a), _head_name(cfg.type_b))
        if ends == (a, b):
            return cfg
        if ends == (b, a):
            return cfg.reversed()
        raise ConfigurationError(f"configuration {config} relates {ends[0]} and {ends[1]}, not {a} and {b}")
    if not (session.env.is_inductive(a) and session.env.is_inductive(b)):
        raise ConfigurationError(f"no configuration given and {a}, {b} are not both inductive types")
    maps = find_permutations(session.env, a, b)
    if not maps:
        raise ConfigurationError(f"no constructor mapping between {a} and {b}")
    k = 0 if mapping is None else mapping
    if not 0 <= k < len(maps):
        raise MappingOutOfRange(f"mapping index out of range: {k} (found {len(maps)})")
    return config_from_permutation(session.env, a, b, maps[k])


def derived_name(target: str, b: str) -> str:
    if "." in b:
        return b.rsplit(".", 1)[0] + "." + target.rsplit(".", 1)[-1]
    return f"{target}_{b.replace('.', '_')}"


def _cache(session) -> LiftCache:
    if session.cache is None:
        session.cache = LiftCache()
    return session.cache


def _renames(session, cfg: Configuration) -> dict[str, str]:
    return {old: new for (c, old), new in session.repaired.items() if c == cfg.name}


def run_repair(session, cmd: RepairCmd | RepairModuleCmd) -> None:
    cfg = choose_configuration(session, cmd.type_a, cmd.type_b, cmd.config, cmd.mapping)
    cfg = cfg.completed(session.env)
    renames = _renames(session, cfg)
    # dependencies that mention A are repaired along with the targets
    targets = [cmd.target] if isinstance(cmd, RepairCmd) else list(cmd.names)
    names: list[str] = []
    for t in targets:
        names += [n for n in needs_repair(session.env, cfg, t, renames, session.annotations) if n not in names]

    def new_name(n: str) -> str:
        if isinstance(cmd, RepairCmd) and n == cmd.target and cmd.as_name:
            return cmd.as_name
        return derived_name(n, cmd.type_b)

    session.env, done = repair_module(
        session.env, cfg, names, new_name,
        renames=renames, annotations=session.annotations, cache=_cache(session),
    )
    for rd in done:
        session.repaired[(cfg.name, rd.source)] = rd.name
        session.emitted.append(rd.name)
        session.log.append(f"repaired {rd.source} as {rd.name}")
        if cmd.suggest:
            _suggest(session, rd.name)


def _suggest(session, name: str) -> None:
    from ..decompile import decompile, print_script

    d = session.env.definition(name)
    session.scripts[name] = print_script(decompile(session.env, d.body), env=session.env)


def run_decompile(session, cmd: DecompileCmd) -> None:
    _suggest(session, cmd.name)
    session.log.append(f"decompiled {cmd.name}")
