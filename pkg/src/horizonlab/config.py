from pathlib import Path

from starlette.config import Config

try:
    config = Config('.env')
except FileNotFoundError:
    config = Config()

# Runtime.
LOG_LEVEL       = config("LOG_LEVEL",       cast=str,   default="INFO")
HORIZONLAB_CACHE = config("HORIZONLAB_CACHE", cast=str,
                          default=str(Path.home() / ".cache" / "horizonlab"))

# Outputs.
CSV_DIGITS      = config("CSV_DIGITS",      cast=int,   default=17)

# Cost model.
TRANSCENDENTAL_WEIGHT = config("TRANSCENDENTAL_WEIGHT", cast=int, default=20)

# Eigensolver.
JACOBI_TOL        = config("JACOBI_TOL",        cast=float, default=1e-12)
JACOBI_MAX_SWEEPS = config("JACOBI_MAX_SWEEPS", cast=int,   default=64)
MAX_MATRIX_DIM    = config("MAX_MATRIX_DIM",    cast=int,   default=4096)
RITZ_EXEC_LIMIT   = config("RITZ_EXEC_LIMIT",   cast=int,   default=12)

# Propagation.
SERIES_CHUNK      = config("SERIES_CHUNK",      cast=int,   default=1024)

# Harness.
INDENT            = config("INDENT",            cast=int,   default=2)
