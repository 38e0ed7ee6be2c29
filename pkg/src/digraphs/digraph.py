from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Mapping, Optional
import logging
import random

import networkx as nx

from digraphs.constants import DEFAULT_BUDGET
from digraphs.errors import BudgetExceededError, DomainError, ParseError
from digraphs.partition import Partition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Digraph:
    """A finite digraph on vertices 0..n-1. Loops are ordinary edges."""

    name: str
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"vertex count must be non-negative, got {self.n}")
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DomainError(
                    f"edge ({u},{v}) of {self.name!r} leaves vertex range 0..{self.n - 1}"
                )

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        name: str = "g",
        reflexive: bool = False,
    ) -> "Digraph":
        pairs = {(int(u), int(v)) for u, v in edges}
        if reflexive:
            pairs.update((v, v) for v in range(n))
        return cls(name, n, frozenset(pairs))

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
        return tuple(masks)

    @cached_property
    def in_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def loop_mask(self) -> int:
        return sum(1 << v for v in range(self.n) if (v, v) in self.edges)

    @cached_property
    def is_reflexive(self) -> bool:
        return self.loop_mask == (1 << self.n) - 1

    @cached_property
    def double_edges(self) -> frozenset[tuple[int, int]]:
        """Pairs u != v with both u->v and v->u."""
        return frozenset((u, v) for u, v in self.edges if u != v and (v, u) in self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


@dataclass(frozen=True)
class VertexMap:
    source_size: int
    target_size: int
    image: tuple[int, ...]

    def __post_init__(self):
        if len(self.image) != self.source_size:
            raise DomainError(
                f"vertex map has {len(self.image)} images for {self.source_size} vertices"
            )
        if any(not 0 <= a < self.target_size for a in self.image):
            raise DomainError(f"vertex map {self.image} leaves target range")

    def __call__(self, v: int) -> int:
        return self.image[v]

    def compose(self, inner: "VertexMap") -> "VertexMap":
        """``self`` after ``inner``."""
        if inner.target_size != self.source_size:
            raise DomainError("vertex maps are not composable")
        return VertexMap(
            inner.source_size, self.target_size, tuple(self.image[a] for a in inner.image)
        )

    def is_identity(self) -> bool:
        return self.source_size == self.target_size and self.image == tuple(
            range(self.source_size)
        )

    def is_injective(self) -> bool:
        return len(set(self.image)) == len(self.image)


# --- text format ---------------------------------------------------------


def parse_digraph(text: str) -> Digraph:
    """Parse the line-oriented digraph format (``digraph``/``vertices``/``edges``/``end``)."""
    name: Optional[str] = None
    n: Optional[int] = None
    reflexive = False
    edges: set[tuple[int, int]] = set()
    section = "header"

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if section == "done":
            raise ParseError(f"content after 'end': {line!r}", lineno)
        if section == "edges":
            if tokens == ["end"]:
                section = "done"
                continue
            if len(tokens) != 2:
                raise ParseError(f"edge line needs two vertices, got {line!r}", lineno)
            try:
                u, v = int(tokens[0]), int(tokens[1])
            except ValueError as e:
                raise ParseError(f"non-integer vertex in {line!r}", lineno) from e
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"vertex out of range 0..{n - 1} in {line!r}", lineno)
            edges.add((u, v))
            continue

        keyword = tokens[0]
        if keyword == "digraph" and name is None:
            if len(tokens) != 2:
                raise ParseError("expected 'digraph <name>'", lineno)
            name = tokens[1]
        elif keyword == "vertices" and name is not None and n is None:
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise ParseError("expected 'vertices <n>'", lineno)
            n = int(tokens[1])
        elif keyword == "reflexive" and n is not None and len(tokens) == 1:
            reflexive = True
        elif keyword == "edges" and n is not None and len(tokens) == 1:
            section = "edges"
        else:
            raise ParseError(f"unexpected line {line!r}", lineno)

    if section != "done":
        raise ParseError("missing 'end'")
    return Digraph.from_edges(n, edges, name=name, reflexive=reflexive)


def format_digraph(g: Digraph) -> str:
    lines = [f"digraph {g.name}", f"vertices {g.n}"]
    if g.is_reflexive and g.n:
        lines.append("reflexive")
    lines.append("edges")
    for u, v in g.sorted_edges():
        if u == v and g.is_reflexive:
            continue
        lines.append(f"{u} {v}")
    lines.append("end")
    return "\n".join(lines) + "\n"


# --- constructions -------------------------------------------------------


def quotient(g: Digraph, p: Partition) -> Digraph:
    if p.n != g.n:
        raise DomainError(f"partition on {p.n} elements does not cover {g.n} vertices")
    bi = p.block_index
    return Digraph(
        f"{g.name}/~", p.num_blocks, frozenset((bi[u], bi[v]) for u, v in g.edges)
    )


def power(g: Digraph, k: int, budget: int = DEFAULT_BUDGET) -> Digraph:
    """The k-th categorical power; vertices are k-tuples in lexicographic order."""
    if k < 1:
        raise DomainError(f"power exponent must be positive, got {k}")
    if g.n**k > budget or len(g.edges) ** k > budget:
        raise BudgetExceededError(f"power {g.name}^{k}", budget, 0)

    def index(coords: Iterable[int]) -> int:
        i = 0
        for c in coords:
            i = i * g.n + c
        return i

    edges = frozenset(
        (index(u for u, _ in combo), index(v for _, v in combo))
        for combo in product(g.sorted_edges(), repeat=k)
    )
    return Digraph(f"{g.name}^{k}", g.n**k, edges)


def induced(g: Digraph, subset: Iterable[int]) -> Digraph:
    vertices = sorted(set(subset))
    for v in vertices:
        if not 0 <= v < g.n:
            raise DomainError(f"vertex {v} out of range 0..{g.n - 1}")
    position = {v: i for i, v in enumerate(vertices)}
    return Digraph(
        f"{g.name}[{','.join(map(str, vertices))}]",
        len(vertices),
        frozenset(
            (position[u], position[v])
            for u, v in g.edges
            if u in position and v in position
        ),
    )


def is_antisymmetric(g: Digraph) -> bool:
    return not g.double_edges


def is_homomorphism(h: Digraph, g: Digraph, image: tuple[int, ...]) -> bool:
    return len(image) == h.n and all((image[u], image[v]) in g.edges for u, v in h.edges)


# --- homomorphism search -------------------------------------------------


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class HomomorphismSearch:
    """Backtracking over h's vertices in index order with forward checking.

    Domains are bitmasks over g's vertices. Assigning ``u = a`` intersects the
    domains of later successors with ``out(a)`` and of later predecessors with
    ``in(a)``. Without ``rng`` values are tried in increasing order, so maps come
    out in lexicographic order of their image arrays.
    """

    def __init__(
        self,
        h: Digraph,
        g: Digraph,
        fixed: Optional[Mapping[int, int]] = None,
        budget: int = DEFAULT_BUDGET,
        rng: Optional[random.Random] = None,
    ):
        if budget < 1:
            raise DomainError(f"budget must be positive, got {budget}")
        self.h = h
        self.g = g
        self.fixed = dict(fixed or {})
        self.budget = budget
        self.rng = rng
        self.expansions = 0
        self.solutions = 0
        for u, a in self.fixed.items():
            if not (0 <= u < h.n and 0 <= a < g.n):
                raise DomainError(f"fixed pair {u}->{a} out of range")

        self._succ = [[] for _ in range(h.n)]
        self._pred = [[] for _ in range(h.n)]
        for u, v in h.sorted_edges():
            if v > u:
                self._succ[u].append(v)
            elif v < u:
                self._pred[v].append(u)

    def _initial_domains(self) -> Optional[list[int]]:
        h, g = self.h, self.g
        full = (1 << g.n) - 1
        domains = [full] * h.n
        for u in range(h.n):
            if (u, u) in h.edges:
                domains[u] &= g.loop_mask
        for u, a in self.fixed.items():
            domains[u] &= 1 << a
        for u, a in self.fixed.items():
            for x, y in h.edges:
                if x == u:
                    domains[y] &= g.out_masks[a]
                if y == u:
                    domains[x] &= g.in_masks[a]
        if any(d == 0 for d in domains):
            return None
        return domains

    def __iter__(self) -> Iterator[VertexMap]:
        h, g = self.h, self.g
        domains = self._initial_domains()
        if domains is None:
            return
        image = [0] * h.n
        out_masks, in_masks = g.out_masks, g.in_masks

        def visit(u: int) -> Iterator[VertexMap]:
            if u == h.n:
                self.solutions += 1
                yield VertexMap(h.n, g.n, tuple(image))
                return
            values = _bits(domains[u])
            if self.rng is not None:
                self.rng.shuffle(values)
            for a in values:
                self.expansions += 1
                if self.expansions > self.budget:
                    logger.warning(
                        "homomorphism search %s -> %s exhausted budget %d after %d maps",
                        h.name, g.name, self.budget, self.solutions,
                    )
                    raise BudgetExceededError(
                        f"homomorphisms {h.name} -> {g.name}", self.budget, self.solutions
                    )
                image[u] = a
                saved: list[tuple[int, int]] = []
                alive = True
                for v in self._succ[u]:
                    old = domains[v]
                    new = old & out_masks[a]
                    if new != old:
                        saved.append((v, old))
                        domains[v] = new
                    if not new:
                        alive = False
                        break
                if alive:
                    for v in self._pred[u]:
                        old = domains[v]
                        new = old & in_masks[a]
                        if new != old:
                            saved.append((v, old))
                            domains[v] = new
                        if not new:
                            alive = False
                            break
                if alive:
                    yield from visit(u + 1)
                for v, old in reversed(saved):
                    domains[v] = old

        yield from visit(0)
        logger.debug(
            "homomorphism search %s -> %s: %d maps, %d expansions",
            h.name, g.name, self.solutions, self.expansions,
        )


def enumerate_homomorphisms(
    h: Digraph,
    g: Digraph,
    fixed: Optional[Mapping[int, int]] = None,
    budget: int = DEFAULT_BUDGET,
) -> Iterator[VertexMap]:
    """Every edge-preserving map h -> g extending ``fixed``, lexicographically."""
    return iter(HomomorphismSearch(h, g, fixed, budget))


def is_retract(
    h: Digraph, g: Digraph, budget: int = DEFAULT_BUDGET
) -> Optional[tuple[VertexMap, VertexMap]]:
    """First (coretraction, retraction) pair with retraction . coretraction = id_h."""
    used = 0
    outer = HomomorphismSearch(h, g, budget=budget)
    try:
        for beta in outer:
            if not beta.is_injective():
                continue
            remaining = budget - used - outer.expansions
            if remaining < 1:
                raise BudgetExceededError(f"retract {h.name} of {g.name}", budget, 0)
            inner = HomomorphismSearch(
                g, h, fixed={b: v for v, b in enumerate(beta.image)}, budget=remaining
            )
            try:
                alpha = next(iter(inner), None)
            finally:
                used += inner.expansions
            if alpha is not None:
                assert alpha.compose(beta).is_identity()
                return beta, alpha
    except BudgetExceededError as e:
        raise BudgetExceededError(f"retract {h.name} of {g.name}", budget, e.count) from e
    return None


# --- networkx bridge and generators ---------------------------------------


def to_networkx(g: Digraph) -> nx.DiGraph:
    graph = nx.DiGraph(name=g.name)
    graph.add_nodes_from(range(g.n))
    graph.add_edges_from(g.sorted_edges())
    return graph


def is_isomorphic(a: Digraph, b: Digraph) -> bool:
    if a.n != b.n or len(a.edges) != len(b.edges):
        return False
    return nx.is_isomorphic(to_networkx(a), to_networkx(b))


def random_reflexive(n: int, density: float = 0.3, seed: Optional[int] = None) -> Digraph:
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < density]
    return Digraph.from_edges(n, edges, name=f"rand{n}", reflexive=True)


def reflexive_digraphs(n: int) -> Iterator[Digraph]:
    """All 2^(n(n-1)) reflexive digraphs on n labelled vertices."""
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    for mask in range(1 << len(pairs)):
        yield Digraph.from_edges(
            n,
            (pair for i, pair in enumerate(pairs) if mask >> i & 1),
            name=f"r{n}_{mask}",
            reflexive=True,
        )
