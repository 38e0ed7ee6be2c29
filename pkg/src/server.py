from dotenv import load_dotenv
from mcp.server.fastmcp import FastMCP

from digraphs.settings import Settings, configure_logging
from tools.algebra import register_algebra_tools
from tools.checks import register_checks_tools
from tools.conditions import register_conditions_tools
from tools.connectivity import register_connectivity_tools
from tools.digraph import register_digraph_tools
from tools.polymorph import register_polymorph_tools

load_dotenv()

# Budgets and log level come from DIGRAPHS_* variables; default log level is ERROR
settings = Settings.from_env()
configure_logging(settings)

mcp = FastMCP(
    "Digraph Connectivity",
    instructions="""
        Help users compute connectivity equivalences, polymorphisms, free algebras and
        identity witnesses for finite digraphs and algebras. Digraph and algebra
        arguments accept the text formats or @name references (see list_gallery).
        For every user query:
        1. Select the single most relevant tool for the question.
        2. Invoke only that one tool; do not call any others.
        """,
)

# e.g. DIGRAPHS_MCP_DISABLED_TOOLS=checks
DISABLED_TOOLS = settings.mcp_disabled_tools

if "digraph" not in DISABLED_TOOLS:
    register_digraph_tools(mcp, settings)
if "connectivity" not in DISABLED_TOOLS:
    register_connectivity_tools(mcp, settings)
if "algebra" not in DISABLED_TOOLS:
    register_algebra_tools(mcp, settings)
if "polymorph" not in DISABLED_TOOLS:
    register_polymorph_tools(mcp, settings)
if "conditions" not in DISABLED_TOOLS:
    register_conditions_tools(mcp, settings)
if "checks" not in DISABLED_TOOLS:
    register_checks_tools(mcp, settings)

if __name__ == "__main__":
    mcp.run(transport="stdio")
