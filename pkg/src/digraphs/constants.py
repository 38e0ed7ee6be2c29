# Default search and closure budgets
DEFAULT_BUDGET = 10_000_000
DEFAULT_FREE_BUDGET = 50_000
DEFAULT_TERM_BUDGET = 200_000
DEFAULT_ORACLE_CAP = 8
DEFAULT_MAX_N = 16

# Major-subset extraction scans all 3^k tuples
MAJOR_MAX_ARITY = 12

# Largest operation table materialised for a free algebra (elements^arity)
MAX_TABLE_CELLS = 4_000_000

# Variable patterns of the six seed pairs (x,x),(x,y),(y,y),(y,z),(z,z),(z,x)
# of the directed 3-cycle on {x, y, z}, as generator indices.
CYCLE_SOURCE_PATTERN = (0, 0, 1, 1, 2, 2)
CYCLE_TARGET_PATTERN = (0, 1, 1, 2, 2, 0)

ENDPOINTS = {"y": 1, "z": 2}

# Exit codes of the command-line front end
EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
