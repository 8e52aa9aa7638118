"""Constants for rankgap tests."""

from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"

TABLE1_CSV = FIXTURES / "table1.csv"
TABLE2_CSV = FIXTURES / "table2.csv"

# (d, n) pairs whose structure tensors are small enough for exact rank checks
CONCISE_CASES = [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2), (2, 3)]

# settings of the full-length searches behind the slow tests
SEARCH_ALS_CONFIG = {"max_iters": 2000, "restarts": 20, "seed": 0, "target": 1e-10}
