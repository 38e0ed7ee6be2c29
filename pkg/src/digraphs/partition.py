from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence
import re

from networkx.utils import UnionFind

from digraphs.errors import DomainError, ParseError


@dataclass(frozen=True)
class Partition:
    """An equivalence relation on 0..n-1 in canonical block form.

    Block ids are assigned in order of least element, so two partitions are
    equal as relations iff their ``block_index`` tuples are equal.
    """

    block_index: tuple[int, ...]

    def __post_init__(self):
        seen = 0
        for b in self.block_index:
            if b > seen or b < 0:
                raise DomainError(
                    f"block_index {self.block_index} is not in canonical form"
                )
            if b == seen:
                seen += 1

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        ids: dict = {}
        return cls(tuple(ids.setdefault(label, len(ids)) for label in labels))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int) -> "Partition":
        labels = [-1] * n
        for i, block in enumerate(blocks):
            members = list(block)
            if not members:
                raise DomainError("empty block in partition")
            for v in members:
                if not 0 <= v < n:
                    raise DomainError(f"element {v} out of range 0..{n - 1}")
                if labels[v] != -1:
                    raise DomainError(f"element {v} appears in two blocks")
                labels[v] = i
        missing = [v for v, label in enumerate(labels) if label == -1]
        if missing:
            raise DomainError(f"partition does not cover elements {missing}")
        return cls.from_labels(labels)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Partition":
        """Equivalence generated by ``pairs`` (union-find)."""
        uf = UnionFind(range(n))
        for a, b in pairs:
            uf.union(a, b)
        return cls.from_labels([uf[v] for v in range(n)])

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @classmethod
    def full(cls, n: int) -> "Partition":
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.block_index)

    @cached_property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for v, b in enumerate(self.block_index):
            out[b].append(v)
        return tuple(tuple(block) for block in out)

    @cached_property
    def num_blocks(self) -> int:
        return max(self.block_index, default=-1) + 1

    def same_block(self, a: int, b: int) -> bool:
        return self.block_index[a] == self.block_index[b]

    def refines(self, other: "Partition") -> bool:
        """True iff every block of self lies inside a block of ``other``."""
        if self.n != other.n:
            raise DomainError(f"partitions on {self.n} and {other.n} elements")
        image: dict[int, int] = {}
        for b, c in zip(self.block_index, other.block_index):
            if image.setdefault(b, c) != c:
                return False
        return True

    def join(self, other: "Partition") -> "Partition":
        if self.n != other.n:
            raise DomainError(f"partitions on {self.n} and {other.n} elements")
        pairs = [(block[0], v) for p in (self, other) for block in p.blocks for v in block]
        return Partition.from_pairs(self.n, pairs)

    def lift(self, coarse: "Partition") -> "Partition":
        """Pull a partition of self's blocks back to the ground set."""
        if coarse.n != self.num_blocks:
            raise DomainError(
                f"partition on {coarse.n} blocks cannot lift through {self.num_blocks} blocks"
            )
        return Partition.from_labels([coarse.block_index[b] for b in self.block_index])

    def __str__(self) -> str:
        inner = ",".join("{" + ",".join(map(str, block)) + "}" for block in self.blocks)
        return "{" + inner + "}"


_BLOCK_RE = re.compile(r"\{([^{}]*)\}")
_BLOCK_LIST_RE = re.compile(r"\s*(\{[^{}]*\}\s*(,\s*\{[^{}]*\}\s*)*)?")


def parse_partition(text: str, n: int | None = None) -> Partition:
    """Parse ``{{0,1},{2}}``. ``n`` defaults to the largest element plus one."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ParseError(f"partition must be written as {{{{...}},...}}: {text!r}")
    if not _BLOCK_LIST_RE.fullmatch(body[1:-1]):
        raise ParseError(f"blocks must be comma separated: {text!r}")
    blocks = []
    for raw in _BLOCK_RE.findall(body[1:-1]):
        try:
            blocks.append([int(tok) for tok in raw.replace(" ", "").split(",") if tok])
        except ValueError as e:
            raise ParseError(f"non-integer element in block {{{raw}}}") from e
    if n is None:
        n = max((v for block in blocks for v in block), default=-1) + 1
    return Partition.from_blocks(blocks, n)


def set_partitions(n: int) -> Iterator[Partition]:
    """All partitions of 0..n-1 as restricted growth strings, in lexicographic order."""
    if n == 0:
        yield Partition(())
        return
    labels = [0] * n

    def extend(i: int, top: int) -> Iterator[Partition]:
        if i == n:
            yield Partition(tuple(labels))
            return
        for b in range(top + 2):
            labels[i] = b
            yield from extend(i + 1, max(top, b))

    labels[0] = 0
    yield from extend(1, 0)
