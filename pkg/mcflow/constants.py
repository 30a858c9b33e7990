from __future__ import annotations

VERSION = "0.3.0"

# Network document format tag.
DOCUMENT_VERSION = "mcflow/1"

# Reserved id of the return arc e (t -> s) in every enhanced network.
RETURN_ARC_ID = "e"

# Node ids added by embed_requirements.
EMBED_SOURCE = "s"
EMBED_SPLIT = "s'"
EMBED_SINK = "t"

DEFAULT_BUDGET = 1_000_000
DEFAULT_BRANCH_BUDGET = 100_000
DEFAULT_EMBED_BOUND = 16
DEFAULT_EPS = "1/8"
DEFAULT_UPPER = "8"
MAX_UPPER_DOUBLINGS = 64

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

DEFAULT_FILL = "#d62728"
DEFAULT_EDGE = "#000000"
DEFAULT_GRID = "#bbbbbb"


USAGE_EXAMPLES = """\
Usage examples:
  # Check a network document and print diagnostics
  python multicommodity-flow.py validate fixtures/exnet.json

  # Outer bounds on the feasible flow values (canonical vertex lists)
  python multicommodity-flow.py total-capacity fixtures/exnet.json
  python multicommodity-flow.py pairwise-capacity fixtures/exnet.json --format json

  # Exact feasible values by gluing local flows (integer points of polygons)
  python multicommodity-flow.py mutual-capacity fixtures/exnet.json --discretize

  # Is a flow value feasible? (exit 1 when it is not)
  python multicommodity-flow.py decide fixtures/exnet.json --value 1,2

  # Binary search for the largest multiple of a commodity ratio
  python multicommodity-flow.py ratio-max fixtures/box3.json --ratio 1,1 --upper 8 --eps 1/4 --integer

  # Reproduce the gluing vs brute-force operation counts on the chain network
  python multicommodity-flow.py bench --chain --U 1,2,4,8

  # Draw the three regions of a 2-commodity network
  python multicommodity-flow.py plot fixtures/exnet.json --out exnet.svg
"""
