from mcp.server.fastmcp import FastMCP
from typing import Annotated, Literal, Optional
from pydantic import Field

from digraphs.digraph import (
    HomomorphismSearch,
    format_digraph,
    induced,
    is_antisymmetric,
    is_retract,
    power,
    quotient,
)
from digraphs.errors import BudgetExceededError
from digraphs.gallery import bundled_names, digraph_from_text, gallery_names
from digraphs.partition import parse_partition
from digraphs.report import digraph_dict, render_adjacency
from digraphs.settings import Settings

DIGRAPH_DESCRIPTION = (
    "Digraph text (digraph/vertices/[reflexive]/edges/end) or a gallery reference such as @D, @K, @N, @C3, @fig3"
)


def register_digraph_tools(mcp: FastMCP, settings: Settings) -> None:
    @mcp.tool()
    async def list_gallery() -> dict:
        """List the built-in digraph names and bundled algebra names usable as @name references."""
        return {"digraphs": gallery_names(), "algebras": bundled_names()}

    @mcp.tool()
    async def describe_digraph(
        digraph: Annotated[str, Field(description=DIGRAPH_DESCRIPTION)],
    ) -> dict:
        """Summarise a digraph: size, edges, reflexivity, antisymmetry and an adjacency listing."""
        g = digraph_from_text(digraph)
        return {
            **digraph_dict(g),
            "antisymmetric": is_antisymmetric(g),
            "adjacency": render_adjacency(g),
        }

    @mcp.tool()
    async def transform_digraph(
        digraph: Annotated[str, Field(description=DIGRAPH_DESCRIPTION)],
        action: Annotated[
            Literal["quotient", "power", "induced"],
            Field(description="quotient by a partition, k-th categorical power, or induced subdigraph"),
        ],
        partition: Annotated[
            Optional[str], Field(description="Required for 'quotient', e.g. {{0,1},{2}}")
        ] = None,
        k: Annotated[Optional[int], Field(description="Required for 'power'")] = None,
        vertices: Annotated[
            Optional[list[int]], Field(description="Required for 'induced'")
        ] = None,
    ) -> dict:
        """Build a quotient, power or induced subdigraph. Returns the summary plus
        the result in digraph text format."""
        g = digraph_from_text(digraph)
        if action == "quotient":
            if not partition:
                raise ValueError("`partition` is required for 'quotient' action")
            result = quotient(g, parse_partition(partition, g.n))
        elif action == "power":
            if k is None:
                raise ValueError("`k` is required for 'power' action")
            result = power(g, k, settings.budget)
        elif action == "induced":
            if vertices is None:
                raise ValueError("`vertices` is required for 'induced' action")
            result = induced(g, vertices)
        else:
            raise ValueError(f"Unknown action: {action}")
        return {**digraph_dict(result), "text": format_digraph(result)}

    @mcp.tool()
    async def enumerate_homomorphisms(
        source: Annotated[str, Field(description="Source digraph H. " + DIGRAPH_DESCRIPTION)],
        target: Annotated[str, Field(description="Target digraph G. " + DIGRAPH_DESCRIPTION)],
        fixed: Annotated[
            Optional[dict[int, int]],
            Field(description="Optional partial map {source vertex: target vertex} to extend"),
        ] = None,
        limit: Annotated[int, Field(description="Maximum number of maps to return. Default is 100.")] = 100,
    ) -> dict:
        """Edge-preserving maps H -> G in lexicographic order of their image arrays.
        `truncated` is true when the limit or the expansion budget cut the list short."""
        h, g = digraph_from_text(source), digraph_from_text(target)
        search = HomomorphismSearch(h, g, fixed, settings.budget)
        maps: list[list[int]] = []
        truncated = False
        try:
            for phi in search:
                if len(maps) == limit:
                    truncated = True
                    break
                maps.append(list(phi.image))
        except BudgetExceededError:
            truncated = True
        return {"count": len(maps), "truncated": truncated, "maps": maps, "expansions": search.expansions}

    @mcp.tool()
    async def find_retraction(
        subdigraph: Annotated[str, Field(description="Digraph H to retract onto. " + DIGRAPH_DESCRIPTION)],
        digraph: Annotated[str, Field(description="Ambient digraph G. " + DIGRAPH_DESCRIPTION)],
    ) -> dict:
        """Find the first coretraction beta: H -> G and retraction alpha: G -> H with alpha(beta(v)) = v."""
        pair = is_retract(digraph_from_text(subdigraph), digraph_from_text(digraph), settings.budget)
        if pair is None:
            return {"retract": False}
        beta, alpha = pair
        return {"retract": True, "coretraction": list(beta.image), "retraction": list(alpha.image)}
