"""Run configuration shared by the verification harnesses and the CLI."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field

from .enumeration import DEFAULT_CEILINGS

SCHEMA_VERSION = 1
CHECKPOINT_ENV = "BIPEXTREMAL_CHECKPOINT_DIR"


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = 1e-10
    ceilings: dict = field(default_factory=lambda: dict(DEFAULT_CEILINGS))
    workers: int = 1
    checkpoint_dir: str | None = None
    shard: tuple[int, int] | None = None
    output_format: str = "json-lines"
    include_disconnected: bool = False

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.workers < 1:
            raise ValueError(f"worker count must be at least 1, got {self.workers}")
        if self.output_format not in ("json-lines", "tsv"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.shard is not None:
            i, m = self.shard
            if m < 1 or not 0 <= i < m:
                raise ValueError(f"bad shard {i}/{m}")

    def resolved_checkpoint_dir(self) -> str | None:
        return self.checkpoint_dir or os.environ.get(CHECKPOINT_ENV) or None

    def run_hash(self, theorem: str, params: dict) -> str:
        """Fingerprint of everything that can change a run's results."""
        payload = {
            "schema": SCHEMA_VERSION,
            "theorem": theorem,
            "params": params,
            "tolerance": repr(self.tolerance),
            "ceilings": self.ceilings,
            "shard": list(self.shard) if self.shard else None,
            "include_disconnected": self.include_disconnected,
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def run_id(self, theorem: str, params: dict) -> str:
        """Names the checkpoint file: what is being run, not how."""
        payload = {"theorem": theorem, "params": params,
                   "shard": list(self.shard) if self.shard else None}
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:20]

    def to_dict(self) -> dict:
        return asdict(self)
