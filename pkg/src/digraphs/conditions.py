"""Identity systems read off freely generated digraphs, the rho operator and
equivalence-collapse reports."""

from dataclasses import dataclass, field
from itertools import product
from typing import Literal, Optional
import logging

import numpy as np

from digraphs.algebra import (
    FiniteAlgebra,
    FreeDigraph,
    TermTable,
    evaluate_pointwise,
    freely_generated_digraph,
    parse_term,
)
from digraphs.connectivity import equivalence, find_path, radical
from digraphs.constants import (
    CYCLE_SOURCE_PATTERN,
    CYCLE_TARGET_PATTERN,
    DEFAULT_BUDGET,
    DEFAULT_FREE_BUDGET,
    DEFAULT_MAX_N,
    ENDPOINTS,
)
from digraphs.digraph import Digraph, VertexMap, induced, is_retract
from digraphs.errors import DomainError, FalsifiedError, ParseError
from digraphs.gallery import cycle, gallery

logger = logging.getLogger(__name__)

Endpoint = Literal["y", "z"]

LEFT = CYCLE_SOURCE_PATTERN  # (x,x,y,y,z,z)
RIGHT = CYCLE_TARGET_PATTERN  # (x,y,y,z,z,x)


@dataclass(frozen=True)
class IdentityWitness:
    """Terms t_1..t_n, s_1..s_n and the symmetric path x = v_0, ..., v_n they
    realise in the digraph freely generated by the reflexive 3-cycle."""

    n: int
    t_terms: tuple[TermTable, ...]
    s_terms: tuple[TermTable, ...]
    path: tuple[int, ...]
    endpoint: Endpoint = "y"

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"identity chains have length at least 1, got {self.n}")
        if len(self.t_terms) != self.n or len(self.s_terms) != self.n:
            raise DomainError(
                f"chain of length {self.n} needs {self.n} t-terms and {self.n} s-terms"
            )
        if self.path and len(self.path) != self.n + 1:
            raise DomainError(f"path {self.path} does not have length {self.n}")
        if self.endpoint not in ENDPOINTS:
            raise DomainError(f"endpoint must be one of {sorted(ENDPOINTS)}, got {self.endpoint!r}")


def check_identity_system(a: FiniteAlgebra, w: IdentityWitness) -> bool:
    for t in (*w.t_terms, *w.s_terms):
        if t.arity != 6 or t.size != a.size:
            raise DomainError(
                f"identity terms must be 6-ary over {a.size} elements, got arity {t.arity} size {t.size}"
            )
    end = ENDPOINTS[w.endpoint]
    ts, ss = w.t_terms, w.s_terms
    for xyz in product(range(a.size), repeat=3):
        left = [xyz[i] for i in LEFT]
        right = [xyz[i] for i in RIGHT]
        if ts[0](*left) != xyz[0]:
            return False
        for i in range(w.n):
            if ts[i](*left) != ss[i](*right) or ss[i](*left) != ts[i](*right):
                return False
            if i > 0 and ts[i](*left) != ts[i - 1](*right):
                return False
        if ts[-1](*right) != xyz[end]:
            return False
    return True


def _cycle_seed_edges() -> list[tuple[int, int]]:
    return list(zip(CYCLE_SOURCE_PATTERN, CYCLE_TARGET_PATTERN))


def free_cycle_digraph(a: FiniteAlgebra, budget: int = DEFAULT_FREE_BUDGET) -> FreeDigraph:
    """The digraph freely generated by the reflexive 3-cycle, seeded in the
    order of the six variable pairs (x,x),(x,y),(y,y),(y,z),(z,z),(z,x)."""
    return freely_generated_digraph(a, cycle(3), budget, seed_edges=_cycle_seed_edges())


def _edge_terms(a: FiniteAlgebra, fd: FreeDigraph) -> dict[tuple[int, int], np.ndarray]:
    """6-ary table for every edge, replaying its derivation from the seed pairs."""
    seed_position: dict[tuple[int, int], int] = {}
    for j, (u, v) in enumerate(fd.seed_edges):
        seed_position.setdefault((fd.generators[u], fd.generators[v]), j)
    tables: list[np.ndarray] = []
    for edge, derivation in zip(fd.edge_order, fd.derivations):
        if derivation is None:
            tables.append(TermTable.projection(a.size, 6, seed_position[edge]).array)
        else:
            op_index, parents = derivation
            tables.append(
                evaluate_pointwise(a.ops[op_index].table.array, a.size, [tables[p] for p in parents])
            )
    return dict(zip(fd.edge_order, tables))


def _realises(a: FiniteAlgebra, fd: FreeDigraph, t: TermTable, edge: tuple[int, int]) -> bool:
    for xyz in product(range(a.size), repeat=3):
        cell = (xyz[0] * a.size + xyz[1]) * a.size + xyz[2]
        if t(*(xyz[i] for i in LEFT)) != fd.free.element_tables[edge[0]].table[cell]:
            return False
        if t(*(xyz[i] for i in RIGHT)) != fd.free.element_tables[edge[1]].table[cell]:
            return False
    return True


def search_identity_witness(
    a: FiniteAlgebra,
    endpoint: Endpoint = "y",
    max_n: int = DEFAULT_MAX_N,
    budget: int = DEFAULT_FREE_BUDGET,
) -> Optional[IdentityWitness]:
    if endpoint not in ENDPOINTS:
        raise DomainError(f"endpoint must be one of {sorted(ENDPOINTS)}, got {endpoint!r}")
    if max_n < 1:
        raise DomainError(f"max_n must be at least 1, got {max_n}")
    fd = free_cycle_digraph(a, budget)
    start, goal = fd.generators[0], fd.generators[ENDPOINTS[endpoint]]
    path = find_path(fd.digraph, start, goal, "symmetric")
    if path is None:
        logger.debug("no symmetric path from x to %s in %s", endpoint, fd.digraph.name)
        return None
    if len(path) == 1:
        path = [start, start]
    if len(path) - 1 > max_n:
        logger.debug("shortest symmetric path has length %d > %d", len(path) - 1, max_n)
        return None

    tables = _edge_terms(a, fd)
    t_terms, s_terms = [], []
    for u, v in zip(path, path[1:]):
        forward = TermTable.from_array(a.size, 6, tables[(u, v)])
        backward = TermTable.from_array(a.size, 6, tables[(v, u)])
        if not (_realises(a, fd, forward, (u, v)) and _realises(a, fd, backward, (v, u))):
            raise FalsifiedError(f"replayed terms do not realise the edges between {u} and {v}")
        t_terms.append(forward)
        s_terms.append(backward)
    witness = IdentityWitness(len(path) - 1, tuple(t_terms), tuple(s_terms), tuple(path), endpoint)
    if not check_identity_system(a, witness):
        raise FalsifiedError(f"witness along {path} fails the identity system of {a.name}")
    return witness


def rho_digraph(g: Digraph) -> Digraph:
    """x -> y iff x -> u and u <-> y for some u."""
    symmetric = [g.out_masks[y] & g.in_masks[y] for y in range(g.n)]
    edges = frozenset(
        (x, y) for x in range(g.n) for y in range(g.n) if g.out_masks[x] & symmetric[y]
    )
    return Digraph(f"rho({g.name})", g.n, edges)


# --- collapse reports ----------------------------------------------------


@dataclass(frozen=True)
class CollapseReport:
    coincide: dict[str, bool]
    obstructions: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"coincide": dict(self.coincide), "obstructions": list(self.obstructions)}


def collapse_report(g: Digraph) -> CollapseReport:
    weak = equivalence(g, "weak")
    strong = equivalence(g, "strong")
    extreme = equivalence(g, "extreme")
    rad = radical(g).result
    coincide = {
        "weak=strong": weak == strong,
        "strong=radical": strong == rad,
        "radical=extreme": rad == extreme,
        "weak=extreme": weak == extreme,
        "strong=extreme": strong == extreme,
        "weak=radical": weak == rad,
    }
    obstructions = []
    if g.is_reflexive:
        if not coincide["weak=extreme"]:
            obstructions.append("hagemann-mitschke")
        if not (coincide["strong=extreme"] and coincide["radical=extreme"]):
            obstructions.append("hobby-mckenzie")
        if not coincide["strong=radical"]:
            obstructions.append("taylor")
    return CollapseReport(coincide, obstructions)


@dataclass(frozen=True)
class FreeCycleReport:
    free: FreeDigraph
    extremely_connected: bool

    def as_dict(self) -> dict:
        return {
            "vertices": self.free.digraph.n,
            "edges": len(self.free.digraph.edges),
            "generators": list(self.free.generators),
            "extremely_connected": self.extremely_connected,
        }


def free_cycle_report(a: FiniteAlgebra, n: int, budget: int = DEFAULT_FREE_BUDGET) -> FreeCycleReport:
    """Whether the weak component of the generators of the digraph freely
    generated by the reflexive n-cycle is extremely connected."""
    fd = freely_generated_digraph(a, cycle(n), budget)
    weak = equivalence(fd.digraph, "weak")
    extreme = equivalence(fd.digraph, "extreme")
    home = weak.block_index[fd.generators[0]]
    component = weak.blocks[home]
    connected = all(extreme.same_block(component[0], v) for v in component)
    return FreeCycleReport(fd, connected)


def d_retract_check(
    a: FiniteAlgebra,
    free_budget: int = DEFAULT_FREE_BUDGET,
    budget: int = DEFAULT_BUDGET,
) -> Optional[tuple[VertexMap, VertexMap]]:
    """Retraction of the idempotent component of the digraph freely generated
    by D onto D. Finding one shows the variety of ``a`` is not Hobby-McKenzie."""
    d = gallery("D")
    fd = freely_generated_digraph(a, d, free_budget)
    weak = equivalence(fd.digraph, "weak")
    home = weak.blocks[weak.block_index[fd.generators[0]]]
    component = induced(fd.digraph, home)
    return is_retract(d, component, budget)


# --- witness text format -------------------------------------------------


def format_witness(w: IdentityWitness) -> str:
    size = w.t_terms[0].size
    lines = [f"witness n={w.n} endpoint={w.endpoint}"]
    for t in (*w.t_terms, *w.s_terms):
        lines.append(f"term 6 {size}")
        lines.append("table " + " ".join(map(str, t.table)))
    lines.append("path " + " ".join(map(str, w.path)))
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> IdentityWitness:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty witness")
    header = dict(tok.split("=", 1) for tok in lines[0].split()[1:] if "=" in tok)
    if not lines[0].startswith("witness") or "n" not in header or not header["n"].isdigit():
        raise ParseError("expected 'witness n=<n> endpoint=<y|z>'", 1)
    n = int(header["n"])
    endpoint = header.get("endpoint", "y")
    blocks = lines[1 : 1 + 4 * n]
    if len(blocks) != 4 * n:
        raise ParseError(f"witness of length {n} needs {2 * n} term blocks")
    terms = [parse_term("\n".join(blocks[i : i + 2])) for i in range(0, 4 * n, 2)]
    path: tuple[int, ...] = ()
    rest = lines[1 + 4 * n :]
    if rest:
        tokens = rest[0].split()
        if tokens[0] != "path":
            raise ParseError(f"expected 'path ...', got {rest[0]!r}", 2 + 4 * n)
        try:
            path = tuple(int(tok) for tok in tokens[1:])
        except ValueError as e:
            raise ParseError("non-integer path vertex", 2 + 4 * n) from e
    return IdentityWitness(n, tuple(terms[:n]), tuple(terms[n:]), path, endpoint)
