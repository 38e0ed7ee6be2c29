from mcp.server.fastmcp import FastMCP
from typing import Annotated
from pydantic import Field

from digraphs.algebra import (
    format_algebra,
    free_algebra,
    freely_generated_digraph,
    generated_digraph,
    is_compatible,
    is_congruence,
    subuniverse_closure,
    term_tables,
    weak_component_labels,
)
from digraphs.digraph import format_digraph
from digraphs.gallery import algebra_from_text, digraph_from_text
from digraphs.partition import parse_partition
from digraphs.report import algebra_dict, digraph_dict, table_dict
from digraphs.settings import Settings
from tools.digraph import DIGRAPH_DESCRIPTION

ALGEBRA_DESCRIPTION = (
    "Algebra text (algebra/size/op/table/end) or a bundled reference such as @sl2, @z2aff, @chain3meet, @set2, @trivial"
)


def register_algebra_tools(mcp: FastMCP, settings: Settings) -> None:
    @mcp.tool()
    async def describe_algebra(
        algebra: Annotated[str, Field(description=ALGEBRA_DESCRIPTION)],
    ) -> dict:
        """Summarise an algebra and return it in algebra text format."""
        a = algebra_from_text(algebra)
        return {**algebra_dict(a), "idempotent": a.is_idempotent(), "text": format_algebra(a)}

    @mcp.tool()
    async def subuniverse(
        algebra: Annotated[str, Field(description=ALGEBRA_DESCRIPTION)],
        seed: Annotated[list[int], Field(description="Nonempty list of generating elements")],
    ) -> dict:
        """Least subset containing the seed and closed under every operation."""
        return {"subuniverse": sorted(subuniverse_closure(algebra_from_text(algebra), seed))}

    @mcp.tool()
    async def check_compatibility(
        digraph: Annotated[str, Field(description=DIGRAPH_DESCRIPTION)],
        algebra: Annotated[str, Field(description=ALGEBRA_DESCRIPTION)],
    ) -> dict:
        """Whether the edge set is closed under every operation acting coordinatewise."""
        return {"compatible": is_compatible(digraph_from_text(digraph), algebra_from_text(algebra))}

    @mcp.tool()
    async def check_congruence(
        algebra: Annotated[str, Field(description=ALGEBRA_DESCRIPTION)],
        partition: Annotated[str, Field(description="Partition of the universe, e.g. {{0,1},{2}}")],
    ) -> dict:
        """Whether the partition is preserved by every operation."""
        a = algebra_from_text(algebra)
        return {"congruence": is_congruence(a, parse_partition(partition, a.size))}

    @mcp.tool()
    async def generate_digraph(
        algebra: Annotated[str, Field(description=ALGEBRA_DESCRIPTION)],
        seed: Annotated[str, Field(description="Seed digraph. " + DIGRAPH_DESCRIPTION)],
        embedding: Annotated[
            list[int],
            Field(description="Element assigned to each seed vertex; together they must generate the algebra"),
        ],
    ) -> dict:
        """Digraph on the algebra whose edges are generated by the embedded seed edges."""
        g = generated_digraph(algebra_from_text(algebra), digraph_from_text(seed), embedding)
        return {**digraph_dict(g), "text": format_digraph(g)}

    @mcp.tool()
    async def free_algebra_summary(
        algebra: Annotated[str, Field(description=ALGEBRA_DESCRIPTION)],
        generators: Annotated[int, Field(description="Number of free generators k")],
    ) -> dict:
        """Free algebra on k generators in the variety of the algebra, built from k-ary term tables."""
        fr = free_algebra(algebra_from_text(algebra), generators, settings.free_budget)
        return {
            "size": fr.algebra.size,
            "generators": list(fr.generators),
            "elements": [" ".join(map(str, t.table)) for t in fr.element_tables],
        }

    @mcp.tool()
    async def free_digraph(
        algebra: Annotated[str, Field(description=ALGEBRA_DESCRIPTION)],
        seed: Annotated[str, Field(description="Seed digraph P. " + DIGRAPH_DESCRIPTION)],
    ) -> dict:
        """Compatible digraph freely generated by the seed in the variety of the algebra,
        with generator positions and the unary label of each weak component."""
        a = algebra_from_text(algebra)
        fd = freely_generated_digraph(a, digraph_from_text(seed), settings.free_budget)
        labels = weak_component_labels(fd.free, fd.digraph)
        return {
            **digraph_dict(fd.digraph),
            "generators": list(fd.generators),
            "component_labels": {str(b): " ".join(map(str, t.table)) for b, t in labels.items()},
            "text": format_digraph(fd.digraph),
        }

    @mcp.tool()
    async def list_term_tables(
        algebra: Annotated[str, Field(description=ALGEBRA_DESCRIPTION)],
        arity: Annotated[int, Field(description="Arity of the term operations")],
        idempotent_only: Annotated[bool, Field(description="Keep only t with t(x,...,x) = x")] = False,
        limit: Annotated[int, Field(description="Maximum number of tables returned. Default is 50.")] = 50,
    ) -> dict:
        """Term operations of the given arity in discovery order; `count` is the full number."""
        tables = term_tables(algebra_from_text(algebra), arity, idempotent_only, settings.term_budget)
        return {"count": len(tables), "tables": [table_dict(t) for t in tables[:limit]]}
