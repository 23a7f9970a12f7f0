"""Experiment configuration files and run manifests.

Configurations are TOML documents:

    experiment = "horizon"
    output_dir = "results/horizon"

    [parameters]
    seed = 1
    dEs = [1e-2, 1e-3]

`--set key=value` overrides are parsed as TOML values, falling back to plain strings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Sequence

import tomlkit
from marshmallow.exceptions import ValidationError
from tomlkit.exceptions import TOMLKitError

from horizonlab import config
from horizonlab.exceptions import ConfigValidationError, FormatError, OutputError
from horizonlab.schemas import ExperimentConfigSchema, RunManifestSchema


def _keys(messages: Dict[str, Any] | List[Any]) -> tuple[str, ...]:
    return tuple(sorted(messages)) if isinstance(messages, dict) else ()


def parse_value(text: str) -> Any:
    """TOML scalar or array, else the raw string."""
    try:
        return tomlkit.parse(f"v = {text}").unwrap()["v"]
    except TOMLKitError:
        return text


def parse_override(item: str) -> tuple[str, Any]:
    key, sep, value = item.partition("=")
    if not sep or not key.strip():
        raise ConfigValidationError(f"Override '{item}' is not of the form key=value.", (item,))
    return key.strip(), parse_value(value.strip())


@dataclass
class ExperimentConfig:
    experiment: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    output_dir: str = "results"

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> ExperimentConfig:
        try:
            loaded = ExperimentConfigSchema().load(data)
        except ValidationError as ve:
            raise ConfigValidationError(str(ve.messages), _keys(ve.messages)) from ve
        return cls(**loaded)

    def to_dict(self) -> Dict[str, Any]:
        return ExperimentConfigSchema().dump(self)

    def dumps(self) -> str:
        return tomlkit.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> ExperimentConfig:
        try:
            data = tomlkit.parse(text).unwrap()
        except TOMLKitError as e:
            raise ConfigValidationError(f"Malformed configuration: {e}") from e
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: Path | str) -> ExperimentConfig:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise FormatError(f"Cannot read configuration file {path}.") from e
        return cls.loads(text)

    def with_overrides(
        self,
        sets: Sequence[str] = (),
        seed: int | None = None,
        output_dir: str | Path | None = None,
    ) -> ExperimentConfig:
        """Copy with flag values applied over file values."""
        parameters = dict(self.parameters)
        parameters.update(parse_override(item) for item in sets)
        if seed is not None:
            parameters["seed"] = seed
        return ExperimentConfig(
            experiment=self.experiment,
            parameters=parameters,
            output_dir=str(output_dir) if output_dir is not None else self.output_dir,
        )


@dataclass
class RunManifest:
    """What ran, with which tool version, when, and the SHA-256 of every emitted file."""
    experiment: str
    config: Dict[str, Any]
    version: str
    started: datetime
    finished: datetime
    files: Dict[str, str]
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return RunManifestSchema().dump(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> RunManifest:
        try:
            return cls(**RunManifestSchema().load(data))
        except ValidationError as ve:
            raise FormatError(f"Malformed manifest: {ve.messages}") from ve

    def write(self, path: Path | str) -> Path:
        path = Path(path)
        try:
            path.write_text(
                json.dumps(self.to_dict(), indent=config.INDENT, sort_keys=True) + "\n",
                encoding="utf-8",
            )
        except OSError as e:
            raise OutputError("Could not write manifest.", path=str(path)) from e
        return path

    @classmethod
    def read(cls, path: Path | str) -> RunManifest:
        try:
            return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as e:
            raise FormatError(f"Cannot read manifest {path}.") from e

    def experiment_config(self) -> ExperimentConfig:
        """Configuration reproducing this run."""
        return ExperimentConfig.from_dict(self.config)
