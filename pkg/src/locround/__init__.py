"""Deterministic local rounding of fractional graph problems.

Library layout:

- ``graph``: multigraphs, d2-multigraphs, set cover instances, ingestion
- ``sim``: synchronous round engine with LOCAL/CONGEST bit accounting
- ``coloring``: proper / weighted defective / average defective colorings
- ``rounding``: the generic rounding framework (step, schedule, preprocessing)
- ``mis``: derandomized Luby iterations to a maximal independent set
- ``indepset``: weighted independent set approximations and maximal matching
- ``setcover``: O(log s)-approximate set cover
- ``oracle``: brute-force and exact-LP ground truth for testing
- ``cli``: command-line entry points

The hot kernels live in ``locround._kernel`` (compiled extension with a
pure-Python fallback selected at import).
"""

from ._kernel import BACKEND as kernel_backend

__all__ = ["kernel_backend"]
__version__ = "0.1.0"
