from mcp.server.fastmcp import FastMCP
from typing import Annotated, Optional
from pydantic import Field

from digraphs.algebra import TermTable
from digraphs.gallery import algebra_from_text, digraph_from_text
from digraphs.polymorph import (
    PolymorphismQuery,
    collect_polymorphisms,
    filter_check,
    is_projection,
    major_subsets,
    meet_restriction_check,
    olsak_check,
    olsak_search,
)
from digraphs.report import table_dict
from digraphs.settings import Settings
from tools.algebra import ALGEBRA_DESCRIPTION
from tools.digraph import DIGRAPH_DESCRIPTION


def _table(values: list[int], size: int, arity: int) -> TermTable:
    return TermTable(size, arity, tuple(values))


def register_polymorph_tools(mcp: FastMCP, settings: Settings) -> None:
    @mcp.tool()
    async def find_polymorphisms(
        digraph: Annotated[str, Field(description=DIGRAPH_DESCRIPTION)],
        arity: Annotated[int, Field(description="Arity k of the polymorphisms")],
        idempotent: Annotated[bool, Field(description="Only idempotent polymorphisms")] = True,
        limit: Annotated[Optional[int], Field(description="Stop after this many tables")] = 100,
        seed: Annotated[
            Optional[int], Field(description="Shuffle the value order to sample other parts of the search")
        ] = None,
    ) -> dict:
        """Operations G^k -> G preserving the edge relation, as tables in lexicographic
        argument order. Each table is flagged with its projection coordinate, if any."""
        result = collect_polymorphisms(
            PolymorphismQuery(digraph_from_text(digraph), arity, idempotent, limit, settings.budget, seed)
        )
        return {
            "count": len(result.tables),
            "truncated": result.truncated,
            "expansions": result.expansions,
            "tables": [table_dict(t, projection=is_projection(t)) for t in result.tables],
        }

    @mcp.tool()
    async def analyse_major_subsets(
        table: Annotated[list[int], Field(description="Values of an idempotent operation on {0,1,2}")],
        arity: Annotated[int, Field(description="Arity of the operation")],
    ) -> dict:
        """Major subsets {i : c_i = 2} over argument tuples c with t(c) = 2, whether they
        form a filter, and whether t agrees with the meet of its least major subset on {0,2}."""
        t = _table(table, 3, arity)
        family = major_subsets(t)
        is_filter = filter_check(family)
        return {
            "subsets": family.as_lists(),
            "filter": is_filter,
            "least": sorted(family.least) if family.least is not None else None,
            "meet_restriction": meet_restriction_check(t, family) if is_filter else None,
        }

    @mcp.tool()
    async def olsak_term(
        algebra: Annotated[
            Optional[str], Field(description="Search the algebra's 6-ary terms. " + ALGEBRA_DESCRIPTION)
        ] = None,
        table: Annotated[
            Optional[list[int]], Field(description="Check this 6-ary table instead of searching")
        ] = None,
        size: Annotated[Optional[int], Field(description="Universe size; required with 'table'")] = None,
    ) -> dict:
        """Check a 6-ary table for o(x,x,x,y,y,y) = o(x,y,y,x,x,y) = o(y,x,y,x,y,x), or
        search the idempotent 6-ary terms of an algebra for the first one that satisfies it."""
        if table is not None:
            if size is None:
                raise ValueError("`size` is required with `table`")
            return {"olsak": olsak_check(_table(table, size, 6))}
        if algebra is None:
            raise ValueError("either `algebra` or `table` is required")
        found = olsak_search(algebra_from_text(algebra), settings.term_budget)
        return {"found": found is not None, "term": table_dict(found) if found else None}
