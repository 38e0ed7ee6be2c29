"""Named reference digraphs and bundled algebras.

Anything that accepts a digraph or an algebra also accepts ``@name``:
``@D``, ``@K``, ``@N``, ``@C3`` (any ``C<n>``), ``@fig3`` and the bundled
algebras ``@sl2``, ``@z2aff``, ``@chain3meet``, ``@set2``, ``@trivial``.
"""

from typing import Optional
import re

from digraphs.algebra import FiniteAlgebra, parse_algebra
from digraphs.digraph import Digraph, parse_digraph
from digraphs.errors import DomainError

D_TEXT = """\
digraph D
vertices 3
reflexive
edges
0 1
1 0
1 2
2 0
end
"""

K_TEXT = """\
digraph K
vertices 4
reflexive
edges
0 1
1 0
1 2
2 3
3 2
3 0
end
"""

N_TEXT = """\
digraph N
vertices 2
reflexive
edges
0 1
1 0
end
"""

# Digraph freely generated by the reflexive 3-cycle in semilattices.
# 0=x 1=y 2=z 3=xy 4=yz 5=zx 6=xyz
FIG3_TEXT = """\
digraph fig3
vertices 7
reflexive
edges
0 1
0 3
1 2
1 4
2 0
2 5
3 1
3 4
3 5
3 6
4 2
4 3
4 5
4 6
5 0
5 3
5 4
5 6
6 3
6 4
6 5
end
"""

FIG3_LABELS = ("x", "y", "z", "xy", "yz", "zx", "xyz")

_DIGRAPHS = {"D": D_TEXT, "K": K_TEXT, "N": N_TEXT, "fig3": FIG3_TEXT}

_ALGEBRAS = {
    "sl2": """\
algebra sl2
size 2
op meet 2
table 0 0 0 1
end
""",
    "z2aff": """\
algebra z2aff
size 2
op mal 3
table 0 1 1 0 1 0 0 1
end
""",
    "chain3meet": """\
algebra chain3meet
size 3
op meet 2
table 0 0 0 0 1 1 0 1 2
end
""",
    # the variety of sets
    "set2": """\
algebra set2
size 2
op id 1
table 0 1
end
""",
    "trivial": """\
algebra trivial
size 1
op id 1
table 0
end
""",
}

_CYCLE_RE = re.compile(r"^C(\d+)$")


def cycle(n: int) -> Digraph:
    """Reflexive directed n-cycle 0->1->...->n-1->0."""
    if n < 1:
        raise DomainError(f"cycle length must be at least 1, got {n}")
    return Digraph.from_edges(n, ((i, (i + 1) % n) for i in range(n)), name=f"C{n}", reflexive=True)


def gallery(name: str, size: Optional[int] = None) -> Digraph:
    if name == "C":
        if size is None:
            raise DomainError("gallery 'C' needs a size")
        return cycle(size)
    if match := _CYCLE_RE.match(name):
        return cycle(int(match.group(1)))
    if name not in _DIGRAPHS:
        raise DomainError(f"unknown gallery digraph {name!r}; known: {', '.join(gallery_names())}")
    return parse_digraph(_DIGRAPHS[name])


def gallery_names() -> list[str]:
    return [*_DIGRAPHS, "C<n>"]


def bundled_algebra(name: str) -> FiniteAlgebra:
    if name not in _ALGEBRAS:
        raise DomainError(f"unknown bundled algebra {name!r}; known: {', '.join(bundled_names())}")
    return parse_algebra(_ALGEBRAS[name])


def bundled_names() -> list[str]:
    return list(_ALGEBRAS)


def digraph_from_text(text: str) -> Digraph:
    """``@name`` or digraph text."""
    stripped = text.strip()
    if stripped.startswith("@"):
        return gallery(stripped[1:])
    return parse_digraph(text)


def algebra_from_text(text: str) -> FiniteAlgebra:
    """``@name`` or algebra text."""
    stripped = text.strip()
    if stripped.startswith("@"):
        return bundled_algebra(stripped[1:])
    return parse_algebra(text)
