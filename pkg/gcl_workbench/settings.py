from __future__ import annotations
"""Workbench settings persistence helpers."""

from dataclasses import dataclass
import json
from pathlib import Path

from .worklists import CHAOTIC, STRATEGY_NAMES

WORKLIST_CHOICES = (*STRATEGY_NAMES, CHAOTIC)
# dot is only valid for program graphs
FORMAT_CHOICES = ("table", "json")


@dataclass
class WorkbenchSettings:
    """Defaults applied to every run unless a command-line flag overrides them."""

    max_steps: int = 200
    path_length_limit: int = 12
    dnf_clause_limit: int = 64
    basic_variable_limit: int = 12
    default_worklist: str = "fifo"
    default_format: str = "table"
    seed: int = 0


_COUNTS = ("max_steps", "path_length_limit", "dnf_clause_limit", "basic_variable_limit")


class SettingsStorage:
    """JSON-backed persistence for :class:`WorkbenchSettings`."""

    def __init__(self, storage_path: str | Path | None = None):
        if storage_path is None:
            storage_path = Path.home() / ".gclwb_settings.json"
        self._path = Path(storage_path)

    @property
    def path(self) -> Path:
        return self._path

    def load(self) -> WorkbenchSettings:
        if not self._path.exists():
            return WorkbenchSettings()
        try:
            data = json.loads(self._path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return WorkbenchSettings()
        if not isinstance(data, dict):
            return WorkbenchSettings()
        counts = {}
        for name in _COUNTS:
            default = getattr(WorkbenchSettings, name)
            try:
                value = int(data.get(name, default))
            except (TypeError, ValueError):
                value = default
            if value <= 0:
                value = default
            counts[name] = value
        default_worklist = data.get("default_worklist", WorkbenchSettings.default_worklist)
        if default_worklist not in WORKLIST_CHOICES:
            default_worklist = WorkbenchSettings.default_worklist
        default_format = data.get("default_format", WorkbenchSettings.default_format)
        if default_format not in FORMAT_CHOICES:
            default_format = WorkbenchSettings.default_format
        try:
            seed = int(data.get("seed", WorkbenchSettings.seed))
        except (TypeError, ValueError):
            seed = WorkbenchSettings.seed
        return WorkbenchSettings(
            **counts,
            default_worklist=default_worklist,
            default_format=default_format,
            seed=seed,
        )

    def save(self, settings: WorkbenchSettings) -> None:
        payload = {name: max(int(getattr(settings, name)), 1) for name in _COUNTS}
        payload["default_worklist"] = settings.default_worklist or WorkbenchSettings.default_worklist
        payload["default_format"] = settings.default_format or WorkbenchSettings.default_format
        payload["seed"] = int(settings.seed)
        try:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
        except OSError:
            # Persist best-effort; ignore filesystem issues.
            return
