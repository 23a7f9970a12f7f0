"""Utils."""
import datetime as dt
import hashlib
from pathlib import Path
from typing import Any

from horizonlab import config


def utcnow() -> dt.datetime:
    """Timezone aware current UTC time."""
    return dt.datetime.now(dt.UTC)


def fmt_real(x: float | int, digits: int | None = None) -> str:
    """Format a real with enough significant digits to round-trip through text."""
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return format(float(x), f".{digits or config.CSV_DIGITS}g")


def sha256sum(path: Path | str) -> str:
    """Hex digest of a file content."""
    h = hashlib.sha256()
    with open(path, 'rb') as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def stable_key(*parts: Any) -> str:
    """Content address of a tuple of scalars."""
    text = "|".join(fmt_real(p) if isinstance(p, float) else str(p) for p in parts)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()
