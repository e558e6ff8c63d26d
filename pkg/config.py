# =============================================
# Penner toolkit runtime configuration
# =============================================
# Settings live here as module constants; nothing is read from the
# environment. Every value below can be overridden per run by a CLI flag.

# Truncation order of t-series when `--order` is not given
DEFAULT_ORDER = 16

# Double-scaling defaults: mu large enough that the q = 4 tail term
# (~ |B_8| / mu^7) stays far below 1e-7
DEFAULT_MU = 10.0
DEFAULT_Q_MAX = 3

# Continuum series truncation
DEFAULT_G_MAX = 8
DEFAULT_K_MAX = 8
DEFAULT_M_MAX = 8

# Working precision (decimal digits) of the mpmath oracle
ORACLE_DPS = 50

# Significant digits for floating output
FLOAT_DIGITS = 17

# Verification reports print this many mismatching coefficients in full
MAX_REPORTED_MISMATCHES = 5

# Worker count for the O(N) double-scaling sum; 1 = serial reference order
DEFAULT_WORKERS = 1

# Logging
LOG_LEVEL = "WARNING"
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
SLOW_COMMAND_SECONDS = 2.0
