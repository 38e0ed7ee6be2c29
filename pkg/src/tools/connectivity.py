from mcp.server.fastmcp import FastMCP
from typing import Annotated, Literal
from pydantic import Field

from digraphs.connectivity import (
    equivalence,
    find_path,
    h_equivalence,
    hm_bound,
    radical,
    smallest_antisymmetric_oracle,
    verify_chain,
)
from digraphs.gallery import digraph_from_text
from digraphs.settings import Settings
from tools.digraph import DIGRAPH_DESCRIPTION


def register_connectivity_tools(mcp: FastMCP, settings: Settings) -> None:
    @mcp.tool()
    async def connectivity_equivalence(
        digraph: Annotated[str, Field(description=DIGRAPH_DESCRIPTION)],
        kind: Annotated[
            Literal["weak", "strong", "extreme", "radical"],
            Field(description="weak (oriented paths), strong (directed both ways), extreme (double-edge paths) or radical"),
        ],
    ) -> dict:
        """Partition of the vertices into components of the given kind, written
        like {{0,1},{2}}. For 'radical' the increasing chain of stages is returned too."""
        g = digraph_from_text(digraph)
        if kind == "radical":
            trace = radical(g)
            return {
                "kind": kind,
                "partition": str(trace.result),
                "stages": [str(stage) for stage in trace.stages],
            }
        p = equivalence(g, kind)
        return {"kind": kind, "partition": str(p), "blocks": p.num_blocks}

    @mcp.tool()
    async def h_equivalence_partition(
        digraph: Annotated[str, Field(description="Digraph G. " + DIGRAPH_DESCRIPTION)],
        h: Annotated[str, Field(description="Test digraph H, e.g. @N, @D or @K")],
    ) -> dict:
        """Transitive closure of 'both vertices lie in the image of one homomorphism H -> G'."""
        p = h_equivalence(digraph_from_text(digraph), digraph_from_text(h), settings.budget)
        return {"partition": str(p), "blocks": p.num_blocks}

    @mcp.tool()
    async def shortest_path(
        digraph: Annotated[str, Field(description=DIGRAPH_DESCRIPTION)],
        source: Annotated[int, Field(description="Start vertex")],
        target: Annotated[int, Field(description="End vertex")],
        mode: Annotated[
            Literal["oriented", "directed", "symmetric"],
            Field(description="oriented ignores direction, directed follows edges, symmetric uses double edges only"),
        ] = "directed",
    ) -> dict:
        """Lexicographically least shortest path of the given mode, or found=false."""
        path = find_path(digraph_from_text(digraph), source, target, mode)
        if path is None:
            return {"found": False}
        return {"found": True, "length": len(path) - 1, "path": path}

    @mcp.tool()
    async def return_path_bound(
        digraph: Annotated[str, Field(description="A reflexive digraph. " + DIGRAPH_DESCRIPTION)],
    ) -> dict:
        """Least n such that every edge a->b has a directed path back from b to a of
        length at most n-1; bound is null when some edge has no return path."""
        return {"bound": hm_bound(digraph_from_text(digraph))}

    @mcp.tool()
    async def check_equivalence_chain(
        digraph: Annotated[str, Field(description=DIGRAPH_DESCRIPTION)],
        with_oracle: Annotated[
            bool,
            Field(description="Also compare radical with the brute-force least antisymmetric quotient (small reflexive digraphs only)"),
        ] = False,
    ) -> dict:
        """Verify extreme <= radical <= strong <= weak and that the strong quotient is antisymmetric."""
        g = digraph_from_text(digraph)
        report = verify_chain(g).as_dict()
        if with_oracle:
            oracle = smallest_antisymmetric_oracle(g, settings.oracle_cap)
            report["oracle"] = str(oracle)
            report["radical_is_least"] = report["radical"] == str(oracle)
        return report
