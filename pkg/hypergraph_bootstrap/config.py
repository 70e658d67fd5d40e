"""
Configuration settings for hypergraph-bootstrap.

Values are read from the environment (an optional ``.env`` file in the working
directory is loaded first). CLI flags override them where relevant.
"""

import os

from dotenv import load_dotenv

load_dotenv()

_def_bool = lambda v: str(v).strip().lower() in ("1", "true", "yes", "on")

# Logging
# -------
# Root log level applied by the CLI. Library modules only create named loggers.
LOG_LEVEL = os.environ.get("HB_LOG_LEVEL", "INFO").strip().upper()
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Memory
# ------
# Budget for dense edge stores and the naive engine's k-set table. A dense
# store over C(n, r) keys costs one byte per key.
MEMORY_BUDGET_MIB = int(os.environ.get("HB_MEMORY_BUDGET_MIB", "256"))
MEMORY_BUDGET_BYTES = MEMORY_BUDGET_MIB * 1024 * 1024

# Edge store selection: "hashed", "dense" or "auto". With "auto" the dense
# store is used whenever C(n, r) bytes fit MEMORY_BUDGET_BYTES.
EDGE_STORE = os.environ.get("HB_EDGE_STORE", "auto").strip().lower()

# Edge keys must fit a signed 64-bit integer so that they can index numpy
# arrays directly.
KEY_BITS = int(os.environ.get("HB_KEY_BITS", "63"))

# Engine
# ------
ENGINE = os.environ.get("HB_ENGINE", "incremental").strip().lower()

# Seed for random test-corpus generation.
DEFAULT_SEED = int(os.environ.get("HB_DEFAULT_SEED", "0"))

# Show tqdm progress bars for scans and long runs.
PROGRESS = _def_bool(os.environ.get("HB_PROGRESS", "false"))
