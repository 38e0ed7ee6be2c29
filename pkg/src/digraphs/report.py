"""Plain-data views of library objects and the two textual renderings used by
the command line (YAML for people, ``key=value`` lines for machines)."""

from typing import Any, Iterable
import json

import yaml

from digraphs.algebra import FiniteAlgebra, TermTable
from digraphs.digraph import Digraph


def digraph_dict(g: Digraph) -> dict:
    return {
        "name": g.name,
        "vertices": g.n,
        "edge_count": len(g.edges),
        "reflexive": g.is_reflexive,
        "edges": [f"{u}->{v}" for u, v in g.sorted_edges()],
    }


def algebra_dict(a: FiniteAlgebra) -> dict:
    return {
        "name": a.name,
        "size": a.size,
        "ops": [{"name": op.name, "arity": op.arity} for op in a.ops],
    }


def table_dict(t: TermTable, **extra: Any) -> dict:
    return {"arity": t.arity, "size": t.size, "table": " ".join(map(str, t.table)), **extra}


def render_adjacency(g: Digraph) -> str:
    """One line per vertex: ``u ──▶ v w``, with double edges marked ``*``."""
    lines = []
    for u in range(g.n):
        targets = [v for v in range(g.n) if (u, v) in g.edges]
        marked = [f"{v}{'*' if (v, u) in g.edges and v != u else ''}" for v in targets]
        lines.append(f"{u} ──▶ {' '.join(marked) if marked else '∅'}")
    lines += ["", "Legend:", "  v*  edge back to the source as well (double edge)"]
    return "\n".join(lines)


def render_human(record: dict) -> str:
    return yaml.safe_dump(record, sort_keys=False, allow_unicode=True, default_flow_style=False)


def _flatten(prefix: str, value: Any) -> Iterable[tuple[str, str]]:
    if isinstance(value, dict):
        for key, inner in value.items():
            yield from _flatten(f"{prefix}.{key}" if prefix else str(key), inner)
    elif isinstance(value, bool):
        yield prefix, "true" if value else "false"
    elif value is None:
        yield prefix, "none"
    elif isinstance(value, (list, tuple)):
        yield prefix, json.dumps(value, separators=(",", ":"), ensure_ascii=False)
    else:
        yield prefix, str(value)


def render_machine(record: dict) -> str:
    """``key=value`` lines closed by a lone ``end``; nested keys are dotted."""
    lines = [f"{key}={value}" for key, value in _flatten("", record)]
    lines.append("end")
    return "\n".join(lines) + "\n"
