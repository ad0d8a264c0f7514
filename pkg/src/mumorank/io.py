"""CSV hyperedge tables, JSON run configs and report serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field

from .config import PREFERENCE_MODES, SolverConfig
from .exceptions import ConfigError, InputFormatError, UnknownNodeError
from .hypergraph import MultimodalHypergraph

CONFIG_KEYS = {"damping", "preferred", "preference_mode", "nodes", "solver", "simulation"}
SOLVER_KEYS = {"tolerance", "max_iterations"}
SIMULATION_KEYS = {"steps", "seed", "walkers", "burn_in", "threshold"}


@dataclass(frozen=True)
class HyperedgeTable:
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    @property
    def M(self) -> int:
        return len(self.header)


def parse_hyperedge_csv(text: str) -> HyperedgeTable:
    """Parse one-hyperedge-per-row CSV; the header names the modalities.

    Fields are stripped of surrounding whitespace. Blank lines are skipped.
    """
    reader = csv.reader(io.StringIO(text))
    header = None
    rows = []
    for record in reader:
        line = reader.line_num
        if not record or all(not f.strip() for f in record) and len(record) <= 1:
            continue
        fields = tuple(f.strip() for f in record)
        if header is None:
            if any(not f for f in fields):
                raise InputFormatError("empty modality name in header", line)
            dupes = sorted(n for n, c in Counter(fields).items() if c > 1)
            if dupes:
                raise InputFormatError(f"duplicate header names {dupes}", line)
            header = fields
            continue
        if len(fields) != len(header):
            raise InputFormatError(
                f"expected {len(header)} fields, got {len(fields)}", line
            )
        if any(not f for f in fields):
            raise InputFormatError("empty field", line)
        rows.append(fields)
    if header is None:
        raise InputFormatError("empty file")
    return HyperedgeTable(header, tuple(rows))


def dump_hyperedge_csv(table) -> str:
    """Serialize a :class:`HyperedgeTable` or hypergraph back to CSV text."""
    if isinstance(table, MultimodalHypergraph):
        table = HyperedgeTable(table.modalities, tuple(table.rows()))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    writer.writerows(table.rows)
    return buf.getvalue()


@dataclass(frozen=True)
class RunConfig:
    damping: dict[str, float]
    preferred: dict[str, list[str]] = field(default_factory=dict)
    preference_mode: str = "hub_preferring"
    tolerance: float = 1e-12
    max_iterations: int = 100_000
    nodes: dict[str, list[str]] | None = None
    simulation: dict = field(default_factory=dict)

    @property
    def solver(self) -> SolverConfig:
        return SolverConfig(tol=self.tolerance, max_iter=self.max_iterations)

    def to_dict(self) -> dict:
        out = {
            "damping": dict(self.damping),
            "preferred": {k: list(v) for k, v in self.preferred.items()},
            "preference_mode": self.preference_mode,
            "solver": {"tolerance": self.tolerance, "max_iterations": self.max_iterations},
        }
        if self.nodes is not None:
            out["nodes"] = {k: list(v) for k, v in self.nodes.items()}
        if self.simulation:
            out["simulation"] = dict(self.simulation)
        return out


def _label_map(value, key):
    if not isinstance(value, dict):
        raise ConfigError(f"{key!r} must be an object mapping modality names to label lists")
    out = {}
    for name, labels in value.items():
        if isinstance(labels, str) or not isinstance(labels, list):
            raise ConfigError(f"{key}.{name} must be a list of labels")
        if not all(isinstance(x, str) and x.strip() for x in labels):
            raise ConfigError(f"{key}.{name} must contain non-empty strings")
        out[name] = [x.strip() for x in labels]
    return out


def parse_config(text: str, modalities=None) -> RunConfig:
    """Parse and validate a JSON run config, filling defaults.

    When ``modalities`` is given, unknown modality names are rejected here;
    label existence is checked later by :func:`bind_config`.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    if "damping" not in doc:
        raise ConfigError("config requires 'damping'")
    damping = doc["damping"]
    if not isinstance(damping, dict) or not damping:
        raise ConfigError("'damping' must be a non-empty object of modality -> value")
    zetas = {}
    for name, value in damping.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"damping.{name} must be a number")
        if not 0.0 <= float(value) <= 1.0:
            raise ConfigError(f"damping.{name}={value} outside [0, 1]")
        zetas[name] = float(value)

    preferred = _label_map(doc.get("preferred", {}), "preferred")
    nodes = _label_map(doc["nodes"], "nodes") if "nodes" in doc else None
    mode = doc.get("preference_mode", "hub_preferring")
    if mode not in PREFERENCE_MODES:
        raise ConfigError(f"preference_mode must be one of {PREFERENCE_MODES}, got {mode!r}")

    solver = doc.get("solver", {})
    if not isinstance(solver, dict) or set(solver) - SOLVER_KEYS:
        raise ConfigError(f"'solver' accepts only {sorted(SOLVER_KEYS)}")
    tol = solver.get("tolerance", 1e-12)
    max_iter = solver.get("max_iterations", 100_000)
    if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not tol > 0:
        raise ConfigError("solver.tolerance must be a positive number")
    if isinstance(max_iter, bool) or not isinstance(max_iter, int) or max_iter < 1:
        raise ConfigError("solver.max_iterations must be a positive integer")

    simulation = doc.get("simulation", {})
    if not isinstance(simulation, dict) or set(simulation) - SIMULATION_KEYS:
        raise ConfigError(f"'simulation' accepts only {sorted(SIMULATION_KEYS)}")

    if modalities is not None:
        known = set(modalities)
        for section, names in (("damping", zetas), ("preferred", preferred), ("nodes", nodes or {})):
            bad = sorted(set(names) - known)
            if bad:
                raise ConfigError(f"unknown modality names in {section}: {bad}")
        missing = [m for m in modalities if m not in zetas]
        if missing:
            raise ConfigError(f"damping missing for modalities {missing}")

    return RunConfig(zetas, preferred, mode, float(tol), int(max_iter), nodes, dict(simulation))


def build_hypergraph(table: HyperedgeTable, config: RunConfig | None = None,
                     allow_multi=False) -> MultimodalHypergraph:
    """Hypergraph from a table; a config ``nodes`` roster is authoritative for its modalities."""
    roster = None
    if config is not None and config.nodes:
        bad = sorted(set(config.nodes) - set(table.header))
        if bad:
            raise ConfigError(f"unknown modality names in nodes: {bad}")
        inferred = [dict() for _ in table.header]
        for row in table.rows:
            for i, label in enumerate(row):
                inferred[i].setdefault(label, None)
        roster = [
            config.nodes[name] if name in config.nodes else list(inferred[i])
            for i, name in enumerate(table.header)
        ]
    return MultimodalHypergraph(table.header, table.rows, nodes=roster, allow_multi=allow_multi)


def bind_config(config: RunConfig, graph: MultimodalHypergraph):
    """Resolve config names against ``graph``; returns ``(damping, preferred)``."""
    known = set(graph.modalities)
    for section, names in (("damping", config.damping), ("preferred", config.preferred)):
        bad = sorted(set(names) - known)
        if bad:
            raise ConfigError(f"unknown modality names in {section}: {bad}")
    missing = [m for m in graph.modalities if m not in config.damping]
    if missing:
        raise ConfigError(f"damping missing for modalities {missing}")
    for name, labels in config.preferred.items():
        for label in labels:
            try:
                graph.node(name, label)
            except UnknownNodeError:
                raise ConfigError(f"preferred node {label!r} not found in modality {name!r}") from None
    damping = [config.damping[m] for m in graph.modalities]
    return damping, dict(config.preferred)


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = format(obj, ".17g")
        return text
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_encode(obj[k], indent, level + 1)}"
                 for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "tolist"):
        return _encode(obj.tolist(), indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(report: dict, indent: int = 2) -> str:
    """JSON with sorted keys and floats written to 17 significant digits."""
    return _encode(report, indent, 0) + "\n"
