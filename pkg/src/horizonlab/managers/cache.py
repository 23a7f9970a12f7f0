from __future__ import annotations
import json
import os
import threading
from pathlib import Path
from typing import TYPE_CHECKING

from horizonlab import config
from horizonlab.component import HarnessManager
from horizonlab.costmeter.ledger import CostLedger
from horizonlab.exceptions import FormatError, OutputError
from horizonlab.ritz.hamiltonian import ModelHamiltonian
from horizonlab.ritz.study import RitzResult, ritz_solve
from horizonlab.spectral import SpectralModel, read_spectrum, write_spectrum
from horizonlab.utils import stable_key

if TYPE_CHECKING:
    from horizonlab.api import Harness


LEDGER_FIELDS = ("adds", "muls", "divs", "evals")


class CacheManager(HarnessManager):
    """Content addressed store of Ritz spectra.

    An entry is a spectrum CSV named after the hash of (model, coupling, D, solver
    tolerance) with a JSON side-car holding the operation counters of the solve.
    """
    def __init__(self, app: Harness, root: Path | str | None = None, enabled: bool = True) -> None:
        super().__init__(app=app)
        self.root = Path(root if root is not None else config.HORIZONLAB_CACHE)
        self.enabled = enabled
        self._lock = threading.Lock()

    @property
    def location(self) -> Path:
        return self.root

    @staticmethod
    def key(h: ModelHamiltonian, D: int, tol: float) -> str:
        return stable_key("ritz", h.kind.value, *h.omega, h.coupling, h.hbar, D, tol)

    def entry(self, key: str) -> tuple[Path, Path]:
        folder = self.root / key[:2]
        return folder / f"{key}.csv", folder / f"{key}.json"

    def _load(self, h: ModelHamiltonian, D: int, csv_path: Path, meta_path: Path,
              mantissa_bits: int) -> RitzResult:
        energies = read_spectrum(csv_path, hbar=h.hbar).energies
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        ledger = CostLedger(mantissa_bits, **{f: int(meta[f]) for f in LEDGER_FIELDS})
        ledger.model_cost = ledger.recompute()
        return RitzResult(basis_dim=D, eigenvalues=energies.copy(),
                          matrix_dim=h.matrix_dim(D), op_count=ledger)

    def _store(self, result: RitzResult, csv_path: Path, meta_path: Path, key: str) -> None:
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        tmp = csv_path.parent / f"{key}.{threading.get_ident()}.csv.tmp"
        write_spectrum(tmp, SpectralModel.equal(result.eigenvalues))
        meta = {f: getattr(result.op_count, f) for f in LEDGER_FIELDS}
        meta["key"] = key
        tmp_meta = meta_path.parent / f"{key}.{threading.get_ident()}.json.tmp"
        try:
            tmp_meta.write_text(json.dumps(meta, indent=config.INDENT), encoding="utf-8")
            os.replace(tmp, csv_path)
            os.replace(tmp_meta, meta_path)
        except OSError as e:
            raise OutputError("Could not store cache entry.", path=str(csv_path)) from e

    def ritz(self, h: ModelHamiltonian, D: int, mantissa_bits: int = 53) -> RitzResult:
        """Full Ritz spectrum at D states per mode, read from cache when present."""
        if not self.enabled:
            return ritz_solve(h, D, mantissa_bits=mantissa_bits)
        key = self.key(h, D, config.JACOBI_TOL)
        csv_path, meta_path = self.entry(key)
        if csv_path.is_file() and meta_path.is_file():
            try:
                result = self._load(h, D, csv_path, meta_path, mantissa_bits)
                self.logger.info("Spectrum cache hit: %s D=%d (%s)", h.kind, D, key[:12])
                return result
            except (FormatError, KeyError, ValueError, json.JSONDecodeError):
                self.logger.warning("Discarding unreadable cache entry %s", csv_path)
        self.logger.info("Spectrum cache miss: %s D=%d", h.kind, D)
        result = ritz_solve(h, D, mantissa_bits=mantissa_bits)
        with self._lock:
            self._store(result, csv_path, meta_path, key)
        return result
