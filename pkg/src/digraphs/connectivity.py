"""Weak, strong, extreme and radical equivalences of digraphs, H-equivalences,
explicit paths and the Hagemann-Mitschke return-path bound."""

from dataclasses import dataclass, field
from typing import Literal, Optional
import logging

import networkx as nx

from digraphs.constants import DEFAULT_BUDGET, DEFAULT_ORACLE_CAP
from digraphs.digraph import (
    Digraph,
    HomomorphismSearch,
    is_antisymmetric,
    quotient,
    to_networkx,
)
from digraphs.errors import BudgetExceededError, DomainError, FalsifiedError
from digraphs.partition import Partition, set_partitions

logger = logging.getLogger(__name__)

EquivalenceKind = Literal["weak", "strong", "extreme"]
PathMode = Literal["oriented", "directed", "symmetric"]


def _from_components(n: int, components) -> Partition:
    labels = [0] * n
    for i, component in enumerate(components):
        for v in component:
            labels[v] = i
    return Partition.from_labels(labels)


def _symmetric_graph(g: Digraph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(g.n))
    graph.add_edges_from(g.double_edges)
    return graph


def equivalence(g: Digraph, kind: EquivalenceKind) -> Partition:
    if kind == "weak":
        components = nx.weakly_connected_components(to_networkx(g))
    elif kind == "strong":
        components = nx.strongly_connected_components(to_networkx(g))
    elif kind == "extreme":
        components = nx.connected_components(_symmetric_graph(g))
    else:
        raise DomainError(f"unknown equivalence kind {kind!r}")
    return _from_components(g.n, components)


@dataclass(frozen=True)
class RadicalTrace:
    """The strictly increasing chain nu_0 < nu_1 < ... of lifted extreme
    equivalences; ``result`` is its last member.

    The stable stage is not repeated: the chain stops at the first partition
    whose quotient lifts back to itself, so a fixpoint reached at once gives
    a single stage.
    """

    stages: tuple[Partition, ...]

    @property
    def result(self) -> Partition:
        return self.stages[-1]


def radical(g: Digraph) -> RadicalTrace:
    stage = equivalence(g, "extreme")
    stages = [stage]
    while True:
        lifted = stage.lift(equivalence(quotient(g, stage), "extreme"))
        if lifted.num_blocks == stage.num_blocks:
            break
        stage = lifted
        stages.append(stage)
    logger.debug("radical equivalence of %s stabilised after %d stages", g.name, len(stages))
    return RadicalTrace(tuple(stages))


def smallest_antisymmetric_oracle(
    g: Digraph, cap: int = DEFAULT_ORACLE_CAP
) -> Partition:
    """Brute force: the least partition whose quotient is antisymmetric."""
    if not g.is_reflexive:
        raise DomainError(f"oracle requires a reflexive digraph, {g.name} is not")
    if g.n > cap:
        raise BudgetExceededError(f"oracle on {g.n} vertices", cap, 0)

    candidates = [p for p in set_partitions(g.n) if is_antisymmetric(quotient(g, p))]
    least = [p for p in candidates if all(p.refines(q) for q in candidates)]
    if len(least) != 1:
        raise FalsifiedError(
            f"{g.name}: {len(least)} refinement-least antisymmetric quotients "
            f"among {len(candidates)} candidates"
        )
    return least[0]


def h_equivalence(g: Digraph, h: Digraph, budget: int = DEFAULT_BUDGET) -> Partition:
    """Transitive closure of 'lie in the range of a common homomorphism h -> g'."""
    if h.n == 0:
        raise DomainError("H-equivalence needs a nonempty digraph H")
    pairs = []
    for phi in HomomorphismSearch(h, g, budget=budget):
        first = phi.image[0]
        pairs.extend((first, v) for v in phi.image[1:])
    return Partition.from_pairs(g.n, pairs)


def _mode_graph(g: Digraph, mode: PathMode) -> nx.DiGraph:
    if mode == "directed":
        return to_networkx(g)
    if mode == "oriented":
        graph = to_networkx(g)
        graph.add_edges_from((v, u) for u, v in g.edges)
        return graph
    if mode == "symmetric":
        return _symmetric_graph(g).to_directed()
    raise DomainError(f"unknown path mode {mode!r}")


def find_path(g: Digraph, a: int, b: int, mode: PathMode) -> Optional[list[int]]:
    """Shortest path of the given mode; lexicographically least among the shortest."""
    for v in (a, b):
        if not 0 <= v < g.n:
            raise DomainError(f"vertex {v} out of range 0..{g.n - 1}")
    graph = _mode_graph(g, mode)
    distance = nx.shortest_path_length(graph, target=b)
    if a not in distance:
        return None
    path = [a]
    while path[-1] != b:
        here = path[-1]
        path.append(
            min(w for w in graph.successors(here) if distance.get(w) == distance[here] - 1)
        )
    return path


def hm_bound(g: Digraph) -> Optional[int]:
    """Least n >= 1 such that every edge a->b has a directed (b,a)-path of
    length <= n-1. The empty digraph has no edges and gets 1."""
    if not g.is_reflexive:
        raise DomainError(f"hm_bound requires a reflexive digraph, {g.name} is not")
    graph = to_networkx(g)
    distances = dict(nx.all_pairs_shortest_path_length(graph))
    longest = 0
    for a, b in g.edges:
        back = distances[b].get(a)
        if back is None:
            return None
        longest = max(longest, back)
    return longest + 1


@dataclass(frozen=True)
class ChainReport:
    extreme: Partition
    radical: Partition
    strong: Partition
    weak: Partition
    inclusions: dict[str, bool] = field(default_factory=dict)
    strong_quotient_antisymmetric: bool = True
    radical_quotient_antisymmetric: bool = True

    @property
    def holds(self) -> bool:
        return (
            all(self.inclusions.values())
            and self.strong_quotient_antisymmetric
            and self.radical_quotient_antisymmetric
        )

    def as_dict(self) -> dict:
        return {
            "extreme": str(self.extreme),
            "radical": str(self.radical),
            "strong": str(self.strong),
            "weak": str(self.weak),
            "inclusions": dict(self.inclusions),
            "strong_quotient_antisymmetric": self.strong_quotient_antisymmetric,
            "radical_quotient_antisymmetric": self.radical_quotient_antisymmetric,
            "holds": self.holds,
        }


def verify_chain(g: Digraph) -> ChainReport:
    extreme = equivalence(g, "extreme")
    rad = radical(g).result
    strong = equivalence(g, "strong")
    weak = equivalence(g, "weak")
    report = ChainReport(
        extreme=extreme,
        radical=rad,
        strong=strong,
        weak=weak,
        inclusions={
            "extreme<=radical": extreme.refines(rad),
            "radical<=strong": rad.refines(strong),
            "strong<=weak": strong.refines(weak),
        },
        strong_quotient_antisymmetric=is_antisymmetric(quotient(g, strong)),
        radical_quotient_antisymmetric=is_antisymmetric(quotient(g, rad)),
    )
    if not report.holds:
        logger.error("equivalence chain violated on %s: %s", g.name, report.as_dict())
    return report
