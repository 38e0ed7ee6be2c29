"""Polymorphism search, major-subset analysis and Olšák terms."""

from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from typing import Iterator, Optional
import logging
import random

from digraphs.algebra import FiniteAlgebra, Operation, TermTable, term_tables
from digraphs.constants import DEFAULT_BUDGET, DEFAULT_TERM_BUDGET, MAJOR_MAX_ARITY
from digraphs.digraph import Digraph, HomomorphismSearch, power
from digraphs.errors import BudgetExceededError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PolymorphismQuery:
    """``limit`` caps the number of tables; ``seed`` shuffles the value order
    per cell so repeated runs sample different parts of the search tree."""

    digraph: Digraph
    arity: int
    idempotent: bool = False
    limit: Optional[int] = None
    budget: int = DEFAULT_BUDGET
    seed: Optional[int] = None

    def __post_init__(self):
        if self.arity < 1:
            raise DomainError(f"arity must be at least 1, got {self.arity}")
        if self.budget < 1:
            raise DomainError(f"budget must be positive, got {self.budget}")
        if self.limit is not None and self.limit < 1:
            raise DomainError(f"limit must be positive, got {self.limit}")


@dataclass(frozen=True)
class PolymorphismResult:
    tables: list[TermTable]
    truncated: bool
    expansions: int


def _diagonal_cell(n: int, k: int, x: int) -> int:
    return sum(x * n**j for j in range(k))


def _search(q: PolymorphismQuery) -> HomomorphismSearch:
    g, k = q.digraph, q.arity
    fixed = {_diagonal_cell(g.n, k, x): x for x in range(g.n)} if q.idempotent else None
    return HomomorphismSearch(
        power(g, k, q.budget),
        g,
        fixed=fixed,
        budget=q.budget,
        rng=random.Random(q.seed) if q.seed is not None else None,
    )


def _tables(search: HomomorphismSearch, q: PolymorphismQuery) -> Iterator[TermTable]:
    for count, phi in enumerate(search, start=1):
        yield TermTable(q.digraph.n, q.arity, phi.image)
        if q.limit is not None and count >= q.limit:
            return


def find_polymorphisms(q: PolymorphismQuery) -> Iterator[TermTable]:
    """Polymorphisms as homomorphisms power(g, k) -> g, one table cell per
    vertex of the power; with ``idempotent`` the diagonal cells are pre-assigned."""
    return _tables(_search(q), q)


def collect_polymorphisms(q: PolymorphismQuery) -> PolymorphismResult:
    search = _search(q)
    tables: list[TermTable] = []
    truncated = False
    try:
        tables.extend(_tables(search, q))
    except BudgetExceededError:
        truncated = True
    logger.debug(
        "%d-ary polymorphisms of %s: %d tables, %d expansions%s",
        q.arity, q.digraph.name, len(tables), search.expansions,
        " (truncated)" if truncated else "",
    )
    return PolymorphismResult(tables, truncated, search.expansions)


def polymorphism_algebra(
    g: Digraph,
    arity: int,
    idempotent: bool = True,
    limit: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
) -> FiniteAlgebra:
    """The algebra on g's vertices whose basic operations are its polymorphisms."""
    result = collect_polymorphisms(PolymorphismQuery(g, arity, idempotent, limit, budget))
    if result.truncated:
        raise BudgetExceededError(f"{arity}-ary polymorphisms of {g.name}", budget, len(result.tables))
    if not result.tables:
        raise DomainError(f"{g.name} has no {arity}-ary polymorphisms")
    return FiniteAlgebra(
        f"Pol{arity}({g.name})",
        g.n,
        tuple(Operation(f"p{i}", t) for i, t in enumerate(result.tables)),
    )


def is_projection(t: TermTable) -> Optional[int]:
    """1-based coordinate i if t is the i-th projection."""
    for i in range(t.arity):
        if t == TermTable.projection(t.size, t.arity, i):
            return i + 1
    return None


# --- major subsets -------------------------------------------------------


@dataclass(frozen=True)
class MajorFamily:
    arity: int
    subsets: frozenset[frozenset[int]]
    least: Optional[frozenset[int]] = field(default=None)

    def as_lists(self) -> list[list[int]]:
        return sorted(sorted(s) for s in self.subsets)


def filter_check(m: MajorFamily) -> bool:
    if not m.subsets:
        return False
    for s in m.subsets:
        for j in range(1, m.arity + 1):
            if j not in s and s | {j} not in m.subsets:
                return False
    return all(s & u in m.subsets for s in m.subsets for u in m.subsets)


def major_subsets(t: TermTable) -> MajorFamily:
    if t.size != 3:
        raise DomainError(f"major subsets are defined on a 3-element universe, got {t.size}")
    if not t.is_idempotent():
        raise DomainError("major subsets need an idempotent operation")
    if t.arity > MAJOR_MAX_ARITY:
        raise BudgetExceededError(f"major subsets of a {t.arity}-ary table", MAJOR_MAX_ARITY)
    subsets = frozenset(
        frozenset(i + 1 for i, c in enumerate(args) if c == 2)
        for args, value in zip(product(range(3), repeat=t.arity), t.table)
        if value == 2
    )
    family = MajorFamily(t.arity, subsets)
    if filter_check(family):
        family = MajorFamily(t.arity, subsets, reduce(frozenset.intersection, subsets))
    return family


def meet_restriction_check(t: TermTable, m: MajorFamily) -> bool:
    """On arguments from {0,2}, t is the meet of the coordinates in ``m.least``."""
    if m.least is None or not filter_check(m):
        raise DomainError("meet restriction needs a filter of major subsets")
    if m.arity != t.arity:
        raise DomainError(f"family of arity {m.arity} for a {t.arity}-ary table")
    for args in product((0, 2), repeat=t.arity):
        top = all(args[i - 1] == 2 for i in m.least)
        if (t(*args) == 2) != top:
            return False
    return True


# --- Olšák terms ---------------------------------------------------------


def olsak_check(t: TermTable, size: Optional[int] = None) -> bool:
    """o(x,x,x,y,y,y) = o(x,y,y,x,x,y) = o(y,x,y,x,y,x) with o idempotent."""
    if t.arity != 6:
        raise DomainError(f"Olšák terms are 6-ary, got arity {t.arity}")
    if size is not None and size != t.size:
        raise DomainError(f"table over {t.size} elements checked against size {size}")
    if not t.is_idempotent():
        return False
    for x, y in product(range(t.size), repeat=2):
        first = t(x, x, x, y, y, y)
        if t(x, y, y, x, x, y) != first or t(y, x, y, x, y, x) != first:
            return False
    return True


def olsak_search(a: FiniteAlgebra, budget: int = DEFAULT_TERM_BUDGET) -> Optional[TermTable]:
    candidates = term_tables(a, 6, idempotent_only=True, budget=budget)
    for t in candidates:
        if olsak_check(t):
            return t
    logger.debug("no Olšák term among %d idempotent 6-ary terms of %s", len(candidates), a.name)
    return None
