from .utils import utcnow, sha256sum, fmt_real, stable_key
from .csvio import write_csv, read_csv, check_header, column
