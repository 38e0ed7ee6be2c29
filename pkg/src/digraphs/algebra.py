"""Finite algebras given by full operation tables.

Closures (subuniverses, free algebras, term clones, edge sets of generated
digraphs) all run on one semi-naive worklist over numpy vectors: an element
of A^L is a length-L array and an operation acts on it coordinatewise.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Optional, Sequence
import logging

import numpy as np

from digraphs.connectivity import equivalence
from digraphs.constants import DEFAULT_FREE_BUDGET, DEFAULT_TERM_BUDGET, MAX_TABLE_CELLS
from digraphs.digraph import Digraph
from digraphs.errors import BudgetExceededError, DomainError, FalsifiedError, ParseError
from digraphs.partition import Partition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TermTable:
    """An explicit ``arity``-ary function on 0..size-1, first argument most significant."""

    size: int
    arity: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.arity < 0 or self.size < 1:
            raise DomainError(f"bad term shape size={self.size} arity={self.arity}")
        if len(self.table) != self.size**self.arity:
            raise DomainError(
                f"table has {len(self.table)} entries, expected {self.size}^{self.arity}"
            )
        if any(not 0 <= x < self.size for x in self.table):
            raise DomainError(f"table value out of range 0..{self.size - 1}")

    @classmethod
    def projection(cls, size: int, arity: int, coordinate: int) -> "TermTable":
        """The ``coordinate``-th projection (0-based)."""
        return cls(
            size,
            arity,
            tuple(args[coordinate] for args in product(range(size), repeat=arity)),
        )

    @classmethod
    def from_array(cls, size: int, arity: int, values: np.ndarray) -> "TermTable":
        return cls(size, arity, tuple(int(x) for x in values))

    def index(self, args: Sequence[int]) -> int:
        if len(args) != self.arity:
            raise DomainError(f"{self.arity}-ary table applied to {len(args)} arguments")
        i = 0
        for x in args:
            if not 0 <= x < self.size:
                raise DomainError(f"argument {x} out of range 0..{self.size - 1}")
            i = i * self.size + x
        return i

    def __call__(self, *args: int) -> int:
        return self.table[self.index(args)]

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64)

    def diagonal(self) -> "TermTable":
        return TermTable(self.size, 1, tuple(self(*(x,) * self.arity) for x in range(self.size)))

    def is_idempotent(self) -> bool:
        return all(self(*(x,) * self.arity) == x for x in range(self.size))


def apply(t: TermTable, args: Sequence[int]) -> int:
    return t.table[t.index(args)]


@dataclass(frozen=True)
class Operation:
    name: str
    table: TermTable

    @property
    def arity(self) -> int:
        return self.table.arity

    def __call__(self, *args: int) -> int:
        return self.table(*args)


@dataclass(frozen=True)
class FiniteAlgebra:
    name: str
    size: int
    ops: tuple[Operation, ...]

    def __post_init__(self):
        if not self.ops:
            raise DomainError(f"algebra {self.name} has no operations")
        for op in self.ops:
            if op.arity < 1:
                raise DomainError(f"nullary operation {op.name} is not supported")
            if op.table.size != self.size:
                raise DomainError(
                    f"operation {op.name} is over {op.table.size} elements, algebra has {self.size}"
                )

    @classmethod
    def from_tables(cls, name: str, size: int, tables: Iterable[tuple[str, int, Sequence[int]]]):
        return cls(
            name,
            size,
            tuple(Operation(op, TermTable(size, arity, tuple(values))) for op, arity, values in tables),
        )

    def op(self, name: str) -> Operation:
        for op in self.ops:
            if op.name == name:
                return op
        raise DomainError(f"algebra {self.name} has no operation {name!r}")

    def is_idempotent(self) -> bool:
        return all(op.table.is_idempotent() for op in self.ops)


# --- text format ---------------------------------------------------------


def parse_algebra(text: str) -> FiniteAlgebra:
    name: Optional[str] = None
    size: Optional[int] = None
    ops: list[tuple[str, int, list[int]]] = []
    pending: Optional[tuple[str, int, list[int], int]] = None
    done = False

    def close_pending(lineno: int):
        nonlocal pending
        if pending is None:
            return
        op, arity, values, start = pending
        if len(values) != size**arity:
            raise ParseError(
                f"table of {op} has {len(values)} values, expected {size}^{arity} = {size**arity}",
                start,
            )
        ops.append((op, arity, values))
        pending = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if done:
            raise ParseError(f"content after 'end': {line!r}", lineno)
        tokens = line.split()
        keyword = tokens[0]

        if keyword == "algebra" and name is None:
            if len(tokens) != 2:
                raise ParseError("expected 'algebra <name>'", lineno)
            name = tokens[1]
        elif keyword == "size" and name is not None and size is None:
            if len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                raise ParseError("expected 'size <s>' with s >= 1", lineno)
            size = int(tokens[1])
        elif keyword == "op" and size is not None:
            close_pending(lineno)
            if len(tokens) != 3 or not tokens[2].isdigit():
                raise ParseError("expected 'op <name> <arity>'", lineno)
            if int(tokens[2]) == 0:
                raise ParseError(f"nullary operation {tokens[1]} is not supported", lineno)
            pending = (tokens[1], int(tokens[2]), [], -1)
        elif keyword == "table" and pending is not None and pending[3] == -1:
            pending = (pending[0], pending[1], _parse_values(tokens[1:], size, lineno), lineno)
        elif keyword == "end" and len(tokens) == 1 and size is not None:
            close_pending(lineno)
            done = True
        elif pending is not None and pending[3] != -1 and keyword.lstrip("-").isdigit():
            # continuation of a long table
            pending[2].extend(_parse_values(tokens, size, lineno))
        else:
            raise ParseError(f"unexpected line {line!r}", lineno)

    if not done:
        raise ParseError("missing 'end'")
    if pending is not None:
        raise ParseError(f"operation {pending[0]} has no table")
    if not ops:
        raise ParseError(f"algebra {name} declares no operations")
    return FiniteAlgebra.from_tables(name, size, ops)


def _parse_values(tokens: Sequence[str], size: int, lineno: int) -> list[int]:
    try:
        values = [int(tok) for tok in tokens]
    except ValueError as e:
        raise ParseError("non-integer table value", lineno) from e
    for x in values:
        if not 0 <= x < size:
            raise ParseError(f"table value {x} out of range 0..{size - 1}", lineno)
    return values


def format_algebra(a: FiniteAlgebra) -> str:
    lines = [f"algebra {a.name}", f"size {a.size}"]
    for op in a.ops:
        lines.append(f"op {op.name} {op.arity}")
        lines.append("table " + " ".join(map(str, op.table.table)))
    lines.append("end")
    return "\n".join(lines) + "\n"


def format_term(t: TermTable) -> str:
    return f"term {t.arity} {t.size}\ntable " + " ".join(map(str, t.table)) + "\n"


def parse_term(text: str) -> TermTable:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 2:
        raise ParseError("expected 'term <arity> <size>' followed by 'table ...'")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "term" or not all(x.isdigit() for x in header[1:]):
        raise ParseError("expected 'term <arity> <size>'", 1)
    arity, size = int(header[1]), int(header[2])
    body = lines[1].split()
    if body[0] != "table":
        raise ParseError("expected 'table ...'", 2)
    values = _parse_values(body[1:], size, 2)
    for lineno, extra in enumerate(lines[2:], start=3):
        values.extend(_parse_values(extra.split(), size, lineno))
    if len(values) != size**arity:
        raise ParseError(f"term table has {len(values)} values, expected {size**arity}")
    return TermTable(size, arity, tuple(values))


# --- closure engine ------------------------------------------------------


def evaluate_pointwise(op: np.ndarray, size: int, args: Sequence[np.ndarray]) -> np.ndarray:
    index = np.zeros_like(args[0])
    for x in args:
        index = index * size + x
    return op[index]


@dataclass
class Closure:
    """Result of a worklist closure. ``derivations[i]`` is None for seeds and
    ``(op_index, parent_indices)`` for derived elements."""

    elements: list[np.ndarray]
    derivations: list[Optional[tuple[int, tuple[int, ...]]]]

    def keys(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in e) for e in self.elements]


def close(
    seeds: Sequence[np.ndarray],
    ops: Sequence[TermTable],
    size: int,
    budget: int,
    what: str = "closure",
) -> Closure:
    """Least superset of ``seeds`` closed under ``ops`` acting coordinatewise.

    Seeds keep their order (duplicates dropped); every later round appends its
    new elements sorted lexicographically, so indices are reproducible.
    """
    elements: list[np.ndarray] = []
    derivations: list[Optional[tuple[int, tuple[int, ...]]]] = []
    index: dict[bytes, int] = {}
    for seed in seeds:
        seed = np.asarray(seed, dtype=np.int64)
        key = seed.tobytes()
        if key not in index:
            index[key] = len(elements)
            elements.append(seed)
            derivations.append(None)

    frontier = 0
    rounds = 0
    while frontier < len(elements):
        known = len(elements)
        fresh: dict[bytes, tuple[np.ndarray, tuple[int, tuple[int, ...]]]] = {}
        for op_index, op in enumerate(ops):
            for parents in product(range(known), repeat=op.arity):
                if max(parents) < frontier:
                    continue
                value = evaluate_pointwise(op.array, size, [elements[i] for i in parents])
                key = value.tobytes()
                if key in index or key in fresh:
                    continue
                fresh[key] = (value, (op_index, parents))
                if known + len(fresh) > budget:
                    logger.warning("%s exceeded %d elements", what, budget)
                    raise BudgetExceededError(what, budget, known + len(fresh))
        for key, (value, derivation) in sorted(fresh.items(), key=lambda kv: kv[1][0].tolist()):
            index[key] = len(elements)
            elements.append(value)
            derivations.append(derivation)
        frontier = known
        rounds += 1
    logger.debug("%s: %d elements after %d rounds", what, len(elements), rounds)
    return Closure(elements, derivations)


# --- subuniverses, compatibility, congruences ---------------------------


def _check_elements(a: FiniteAlgebra, elements: Iterable[int]) -> list[int]:
    out = list(elements)
    for x in out:
        if not 0 <= x < a.size:
            raise DomainError(f"element {x} out of range 0..{a.size - 1} of {a.name}")
    return out


def subuniverse_closure(a: FiniteAlgebra, seed: Iterable[int]) -> frozenset[int]:
    start = _check_elements(a, seed)
    if not start:
        raise DomainError("subuniverse closure needs a nonempty seed")
    result = close(
        [np.array([x]) for x in start],
        [op.table for op in a.ops],
        a.size,
        a.size,
        f"subuniverse of {a.name}",
    )
    return frozenset(int(e[0]) for e in result.elements)


def edge_closure(a: FiniteAlgebra, edges: Iterable[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    """The subuniverse of a^2 generated by ``edges``."""
    seeds = [np.array(edge) for edge in sorted(set(edges))]
    if not seeds:
        return frozenset()
    for edge in seeds:
        _check_elements(a, edge)
    result = close(seeds, [op.table for op in a.ops], a.size, a.size**2, f"edges in {a.name}^2")
    return frozenset((int(e[0]), int(e[1])) for e in result.elements)


def is_compatible(g: Digraph, a: FiniteAlgebra) -> bool:
    if g.n != a.size:
        raise DomainError(f"digraph has {g.n} vertices, algebra {a.name} has {a.size} elements")
    edges = g.sorted_edges()
    for op in a.ops:
        for combo in product(edges, repeat=op.arity):
            image = (
                op.table.table[op.table.index([u for u, _ in combo])],
                op.table.table[op.table.index([v for _, v in combo])],
            )
            if image not in g.edges:
                logger.debug("%s breaks %s: %s -> %s", op.name, g.name, combo, image)
                return False
    return True


def is_congruence(a: FiniteAlgebra, p: Partition) -> bool:
    """Checks one coordinate at a time; transitivity gives the full condition."""
    if p.n != a.size:
        raise DomainError(f"partition on {p.n} elements, algebra {a.name} has {a.size}")
    bi = p.block_index
    for op in a.ops:
        t = op.table
        for args in product(range(a.size), repeat=op.arity):
            value = bi[t.table[t.index(args)]]
            for i, x in enumerate(args):
                for y in p.blocks[bi[x]]:
                    if y == x:
                        continue
                    changed = args[:i] + (y,) + args[i + 1 :]
                    if bi[t.table[t.index(changed)]] != value:
                        return False
    return True


def subalgebra(a: FiniteAlgebra, seed: Iterable[int]) -> tuple[FiniteAlgebra, list[int]]:
    """The subalgebra generated by ``seed``, re-indexed by increasing element."""
    elements = sorted(subuniverse_closure(a, seed))
    position = {x: i for i, x in enumerate(elements)}
    m = len(elements)
    ops = []
    for op in a.ops:
        values = tuple(
            position[op.table(*(elements[i] for i in args))]
            for args in product(range(m), repeat=op.arity)
        )
        ops.append(Operation(op.name, TermTable(m, op.arity, values)))
    return FiniteAlgebra(f"{a.name}<{','.join(map(str, elements))}>", m, tuple(ops)), elements


def power_algebra(a: FiniteAlgebra, m: int) -> FiniteAlgebra:
    """Direct power a^m; element i is the m-tuple of its base-``size`` digits."""
    if m < 1:
        raise DomainError(f"power exponent must be positive, got {m}")
    size = a.size**m
    for op in a.ops:
        if size**op.arity > MAX_TABLE_CELLS:
            raise BudgetExceededError(f"{a.name}^{m} table for {op.name}", MAX_TABLE_CELLS)
    tuples = np.array(list(product(range(a.size), repeat=m)), dtype=np.int64).reshape(size, m)
    weights = a.size ** np.arange(m - 1, -1, -1, dtype=np.int64)
    ops = []
    for op in a.ops:
        combos = np.array(list(product(range(size), repeat=op.arity)), dtype=np.int64)
        coords = [tuples[combos[:, j]] for j in range(op.arity)]
        values = evaluate_pointwise(op.table.array, a.size, coords) @ weights
        ops.append(Operation(op.name, TermTable.from_array(size, op.arity, values)))
    return FiniteAlgebra(f"{a.name}^{m}", size, tuple(ops))


def generated_digraph(a: FiniteAlgebra, seed: Digraph, embedding: Sequence[int]) -> Digraph:
    """The seed-generated digraph: edges form the subuniverse of a^2 generated
    by the seed's edges mapped through ``embedding``."""
    embedding = _check_elements(a, embedding)
    if len(embedding) != seed.n:
        raise DomainError(f"embedding lists {len(embedding)} elements for {seed.n} vertices")
    generated = subuniverse_closure(a, embedding) if embedding else frozenset()
    if len(generated) != a.size:
        raise DomainError(
            f"{sorted(embedding)} does not generate {a.name}; it generates the proper "
            f"subuniverse {sorted(generated)}"
        )
    edges = edge_closure(a, ((embedding[u], embedding[v]) for u, v in seed.edges))
    return Digraph(f"{a.name}[{seed.name}]", a.size, edges)


# --- free algebras -------------------------------------------------------


@dataclass(frozen=True)
class FreeAlgebraResult:
    algebra: FiniteAlgebra
    generators: tuple[int, ...]
    element_tables: tuple[TermTable, ...]


def _clone_closure(a: FiniteAlgebra, k: int, budget: int, what: str) -> tuple[Closure, list[int]]:
    if k < 1:
        raise DomainError(f"need at least one generator, got {k}")
    if a.size**k > budget:
        raise BudgetExceededError(f"{what}: tables of length {a.size}^{k}", budget, 0)
    projections = [TermTable.projection(a.size, k, i).array for i in range(k)]
    closure = close(projections, [op.table for op in a.ops], a.size, budget, what)
    lookup = {e.tobytes(): i for i, e in enumerate(closure.elements)}
    return closure, [lookup[p.tobytes()] for p in projections]


def free_algebra(a: FiniteAlgebra, k: int, budget: int = DEFAULT_FREE_BUDGET) -> FreeAlgebraResult:
    """Free algebra on k generators in the variety of ``a``, as the subalgebra
    of a^(a^k) generated by the k projections."""
    closure, generators = _clone_closure(a, k, budget, f"free algebra of {a.name} on {k}")
    m = len(closure.elements)
    lookup = {e.tobytes(): i for i, e in enumerate(closure.elements)}
    ops = []
    for op in a.ops:
        if m**op.arity > MAX_TABLE_CELLS:
            raise BudgetExceededError(f"free algebra table for {op.name}", MAX_TABLE_CELLS, m)
        values = tuple(
            lookup[evaluate_pointwise(op.table.array, a.size, [closure.elements[i] for i in args]).tobytes()]
            for args in product(range(m), repeat=op.arity)
        )
        ops.append(Operation(op.name, TermTable(m, op.arity, values)))
    tables = tuple(TermTable.from_array(a.size, k, e) for e in closure.elements)
    logger.debug("free algebra of %s on %d generators has %d elements", a.name, k, m)
    return FreeAlgebraResult(
        algebra=FiniteAlgebra(f"F_{a.name}({k})", m, tuple(ops)),
        generators=tuple(generators),
        element_tables=tables,
    )


def term_tables(
    a: FiniteAlgebra,
    arity: int,
    idempotent_only: bool = False,
    budget: int = DEFAULT_TERM_BUDGET,
) -> list[TermTable]:
    """All ``arity``-ary term operations of ``a`` in discovery order."""
    closure, _ = _clone_closure(a, arity, budget, f"{arity}-ary terms of {a.name}")
    tables = [TermTable.from_array(a.size, arity, e) for e in closure.elements]
    if idempotent_only:
        tables = [t for t in tables if t.is_idempotent()]
    return tables


@dataclass(frozen=True)
class FreeDigraph:
    """The digraph freely generated by ``seed`` in the variety of a base algebra.

    ``edge_order`` lists edges in closure order and ``derivations`` parallels
    it: None for (images of) seed edges, else the operation index and parent
    edge positions, which lets callers rebuild the term behind each edge.
    """

    digraph: Digraph
    free: FreeAlgebraResult
    generators: tuple[int, ...]
    seed_edges: tuple[tuple[int, int], ...]
    edge_order: tuple[tuple[int, int], ...]
    derivations: tuple[Optional[tuple[int, tuple[int, ...]]], ...]


def freely_generated_digraph(
    a: FiniteAlgebra,
    seed: Digraph,
    budget: int = DEFAULT_FREE_BUDGET,
    seed_edges: Optional[Sequence[tuple[int, int]]] = None,
) -> FreeDigraph:
    """Edge closure of the seed's edges (on generators) inside F^2.

    ``seed_edges`` fixes the order of the seed pairs (default: sorted edges).
    """
    fr = free_algebra(a, seed.n, budget)
    gens = fr.generators
    pairs = list(seed_edges) if seed_edges is not None else seed.sorted_edges()
    for u, v in pairs:
        if (u, v) not in seed.edges:
            raise DomainError(f"({u},{v}) is not an edge of {seed.name}")
    f = fr.algebra
    closure = close(
        [np.array((gens[u], gens[v])) for u, v in pairs],
        [op.table for op in f.ops],
        f.size,
        max(budget, 1),
        f"free digraph of {seed.name} in {a.name}",
    )
    order = tuple((int(e[0]), int(e[1])) for e in closure.elements)
    return FreeDigraph(
        digraph=Digraph(f"F_{a.name}[{seed.name}]", f.size, frozenset(order)),
        free=fr,
        generators=gens,
        seed_edges=tuple(pairs),
        edge_order=order,
        derivations=tuple(closure.derivations),
    )


def weak_component_labels(fr: FreeAlgebraResult, fg: Digraph) -> dict[int, TermTable]:
    """Label every weak block of ``fg`` by the unary term u(x) = t(x,...,x)."""
    if fg.n != fr.algebra.size:
        raise DomainError("digraph is not over the free algebra's universe")
    weak = equivalence(fg, "weak")
    labels: dict[int, TermTable] = {}
    for v, block in enumerate(weak.block_index):
        label = fr.element_tables[v].diagonal()
        known = labels.setdefault(block, label)
        if known != label:
            raise FalsifiedError(
                f"weak component {block} of {fg.name} mixes diagonals {known.table} and {label.table}"
            )
    return labels
