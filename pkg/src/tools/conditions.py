from mcp.server.fastmcp import FastMCP
from typing import Annotated, Literal, Optional
from pydantic import Field

from digraphs.conditions import (
    check_identity_system,
    collapse_report,
    d_retract_check,
    format_witness,
    free_cycle_report,
    parse_witness,
    rho_digraph,
    search_identity_witness,
)
from digraphs.digraph import format_digraph
from digraphs.gallery import algebra_from_text, digraph_from_text
from digraphs.report import digraph_dict
from digraphs.settings import Settings
from tools.algebra import ALGEBRA_DESCRIPTION
from tools.digraph import DIGRAPH_DESCRIPTION


def register_conditions_tools(mcp: FastMCP, settings: Settings) -> None:
    @mcp.tool()
    async def identity_witness(
        algebra: Annotated[str, Field(description=ALGEBRA_DESCRIPTION)],
        action: Annotated[
            Literal["search", "check"],
            Field(description="search for a witness, or check a given witness text"),
        ] = "search",
        endpoint: Annotated[
            Literal["y", "z"], Field(description="Generator the symmetric path must reach")
        ] = "y",
        max_n: Annotated[Optional[int], Field(description="Longest chain to accept")] = None,
        witness: Annotated[
            Optional[str], Field(description="Required for 'check': witness text as produced by 'search'")
        ] = None,
    ) -> dict:
        """Terms t_1..t_n, s_1..s_n with t_1(x,x,y,y,z,z) = x, t_i(x,x,y,y,z,z) = s_i(x,y,y,z,z,x),
        s_i(x,x,y,y,z,z) = t_i(x,y,y,z,z,x), t_i(x,x,y,y,z,z) = t_{i-1}(x,y,y,z,z,x) and
        t_n(x,y,y,z,z,x) equal to the endpoint variable."""
        a = algebra_from_text(algebra)
        if action == "check":
            if not witness:
                raise ValueError("`witness` is required for 'check' action")
            return {"holds": check_identity_system(a, parse_witness(witness))}
        found = search_identity_witness(a, endpoint, max_n or settings.max_n, settings.free_budget)
        if found is None:
            return {"found": False}
        return {"found": True, "n": found.n, "path": list(found.path), "witness": format_witness(found)}

    @mcp.tool()
    async def rho(
        digraph: Annotated[str, Field(description=DIGRAPH_DESCRIPTION)],
    ) -> dict:
        """Digraph with x -> y iff some u has x -> u, u -> y and y -> u."""
        g = rho_digraph(digraph_from_text(digraph))
        return {**digraph_dict(g), "text": format_digraph(g)}

    @mcp.tool()
    async def collapse(
        digraph: Annotated[str, Field(description=DIGRAPH_DESCRIPTION)],
    ) -> dict:
        """Which of the weak, strong, radical and extreme equivalences coincide, and for
        reflexive digraphs which variety classes a compatible algebra cannot belong to."""
        return collapse_report(digraph_from_text(digraph)).as_dict()

    @mcp.tool()
    async def free_cycle(
        algebra: Annotated[str, Field(description=ALGEBRA_DESCRIPTION)],
        n: Annotated[int, Field(description="Length of the reflexive directed cycle used as seed")],
    ) -> dict:
        """Digraph freely generated by the reflexive n-cycle and whether the weak component
        of its generators is extremely connected."""
        return free_cycle_report(algebra_from_text(algebra), n, settings.free_budget).as_dict()

    @mcp.tool()
    async def d_retract(
        algebra: Annotated[str, Field(description=ALGEBRA_DESCRIPTION)],
    ) -> dict:
        """Look for a retraction of the idempotent component of the digraph freely generated
        by D onto D; one exists only outside Hobby-McKenzie varieties."""
        pair = d_retract_check(algebra_from_text(algebra), settings.free_budget, settings.budget)
        if pair is None:
            return {"retract": False}
        beta, alpha = pair
        return {"retract": True, "coretraction": list(beta.image), "retraction": list(alpha.image)}
