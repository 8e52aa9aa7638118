"""Constants for rankgap."""

# Base package constants
NAME = "rankgap"
VERSION = "0.1.0"

# Output formats
FORMAT_TEXT = "text"
FORMAT_CSV = "csv"
FORMAT_STRUCTURED = "structured"
FORMATS = [FORMAT_TEXT, FORMAT_CSV, FORMAT_STRUCTURED]

# Configuration keys
CONF_COMMAND = "command"
CONF_FORMAT = "format"
CONF_OUTPUT = "output"
CONF_SEED = "seed"
CONF_COLOR = "color"
CONF_BUDGETS = "budgets"

CONF_STRUCTURE_DIM = "structure_dim"
CONF_RANK_CHECK_DIM = "rank_check_dim"
CONF_EXPONENT_DIGITS = "exponent_digits"
CONF_DENSE_ENTRIES = "dense_entries"

CONF_MAX_ITERS = "max_iters"
CONF_TOL = "tol"
CONF_RESTARTS = "restarts"
CONF_REBALANCE = "rebalance"
CONF_TARGET = "target"
CONF_STALL_WINDOW = "stall_window"
CONF_LINESEARCH = "linesearch"

# Defaults
DEFAULT_STRUCTURE_DIM = 256
DEFAULT_RANK_CHECK_DIM = 64
DEFAULT_EXPONENT_DIGITS = 100_000
# entries of the largest structure tensor within the default dimension budget
DEFAULT_DENSE_ENTRIES = DEFAULT_STRUCTURE_DIM**3

DEFAULT_MAX_ITERS = 2000
DEFAULT_TOL = 1e-12
DEFAULT_RESTARTS = 20
DEFAULT_SEED = 0
DEFAULT_STALL_WINDOW = 10
LSTSQ_RCOND = 1e-12
# extrapolated steps start after this many sweeps and jump by sweep ** (1 / power)
LINESEARCH_WARMUP = 5
LINESEARCH_POWER = 3

# Environment
ENV_SIZE_BUDGET = "RANKGAP_SIZE_BUDGET"
ENV_COLOR = "RANKGAP_COLOR"
ENV_NO_COLOR = "NO_COLOR"

# Exit codes
EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

NUMERICAL_NOTE = "numerical evidence only, not an exact certificate"

STARTUP_MESSAGE = f"""
-------------------------------------------------------------------
{NAME}
Version: {VERSION}
Rank and border rank bounds for A_(d,n) and W-state tensor powers.
If you have any issues with this you need to open an issue
in the project tracker.
-------------------------------------------------------------------
"""
