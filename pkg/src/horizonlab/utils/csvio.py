"""CSV reading and writing with the output conventions of every module.

UTF-8, comma separated, mandatory header row, LF line endings, reals written with
``config.CSV_DIGITS`` significant digits.
"""
import csv
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Tuple

from horizonlab.exceptions import FormatError, OutputError
from .utils import fmt_real


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, float)):
        return fmt_real(value)
    return str(value)


def write_csv(path: Path | str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write rows under header, creating parent directories."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                if len(row) != len(header):
                    raise FormatError(
                        f"Row of length {len(row)} does not match header {','.join(header)}."
                    )
                writer.writerow([_cell(v) for v in row])
    except OSError as e:
        raise OutputError("Could not write CSV file.", path=str(path)) from e
    return path


def read_csv(path: Path | str, expected: Sequence[str] | None = None) -> Tuple[List[str], List[List[str]]]:
    """Read a CSV file, returns header and raw rows.

    :param expected: columns that must be present, checked in order of appearance.
    :raises FormatError: missing file, empty file or missing column.
    """
    path = Path(path)
    if not path.is_file():
        raise FormatError(f"CSV file not found: {path}")
    with open(path, encoding='utf-8', newline='') as f:
        rows = list(csv.reader(f))
    if not rows:
        raise FormatError(f"Empty CSV file: {path}")
    header, body = rows[0], rows[1:]
    if expected is not None:
        check_header(header, expected, path)
    return header, body


def check_header(header: Sequence[str], expected: Sequence[str], path: Path | str = "") -> None:
    """Raise FormatError naming the first expected column absent from header."""
    for column in expected:
        if column not in header:
            raise FormatError(f"Missing column '{column}' in {path}")


def column(header: Sequence[str], rows: Sequence[Sequence[str]], name: str) -> List[float]:
    """Parse one column as floats."""
    check_header(header, [name])
    idx = list(header).index(name)
    try:
        return [float(r[idx]) for r in rows]
    except (ValueError, IndexError) as e:
        raise FormatError(f"Malformed value in column '{name}'.") from e
