"""
rankgap: exact rank and border rank bounds for truncated polynomial
algebras A_(d,n) = C[x_1..x_n]/(x_1^d..x_n^d) and W-state tensor powers.

Lower bounds, tables and certificates are exact; the CP decomposition
search in rankgap.cpd is numerical evidence for upper bounds only.
"""

from .bounds import (
    algebra_report,
    blaser_bound,
    table1,
    table2,
    wstate_bound,
    wstate_report,
)
from .const import VERSION as __version__

__all__ = [
    "__version__",
    "algebra_report",
    "blaser_bound",
    "table1",
    "table2",
    "wstate_bound",
    "wstate_report",
]
