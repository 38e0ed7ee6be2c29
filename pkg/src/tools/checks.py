from mcp.server.fastmcp import FastMCP
from typing import Annotated, Optional
from pydantic import Field

from digraphs.checks import CHECKS, run_checks
from digraphs.settings import Settings


def register_checks_tools(mcp: FastMCP, settings: Settings) -> None:
    @mcp.tool()
    async def run_acceptance_checks(
        only: Annotated[
            Optional[list[str]],
            Field(description=f"Subset of checks to run; any of {', '.join(CHECKS)}"),
        ] = None,
    ) -> dict:
        """Run the reproducible check suite. Returns one entry per check and
        `passed` = true only if every selected check passes."""
        results = run_checks(settings, only)
        return {
            "passed": all(r.passed for r in results),
            "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
        }
