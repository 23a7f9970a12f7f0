from __future__ import annotations
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, Iterable, Sequence

from horizonlab.component import HarnessManager
from horizonlab.exceptions import FormatError
from horizonlab.utils import read_csv, sha256sum, write_csv

if TYPE_CHECKING:
    from horizonlab.api import Harness


class ResultsManager(HarnessManager):
    """Owns one run's output directory and the list of files emitted in it."""
    def __init__(self, app: Harness, out_dir: Path | str) -> None:
        super().__init__(app=app)
        self.out_dir = Path(out_dir)
        self.files: Dict[str, Path] = {}

    @property
    def location(self) -> Path:
        return self.out_dir

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        """Write a CSV file, then read its header back against the declared one."""
        path = write_csv(self.path(name), header, rows)
        written, _ = read_csv(path, header)
        if list(written) != list(header):
            raise FormatError(f"{path} header {written} differs from {list(header)}.")
        return self.track(path)

    def track(self, path: Path) -> Path:
        self.files[path.name] = path
        self.logger.info("Wrote %s", path)
        return path

    def hashes(self) -> Dict[str, str]:
        """SHA-256 of every tracked file, by file name in sorted order."""
        return {name: sha256sum(self.files[name]) for name in sorted(self.files)}
