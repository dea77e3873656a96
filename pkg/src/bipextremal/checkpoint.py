"""Resumable progress files for verification runs.

A checkpoint records the run fingerprint, the shard, how far the stream has
been consumed (stream index, position, last canonical key) and the partial
aggregate. Files are replaced atomically so an interrupt never leaves a
half-written checkpoint behind.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

from .config import SCHEMA_VERSION


class CheckpointError(RuntimeError):
    """A checkpoint exists but cannot be used for this run."""

    def __init__(self, message, path):
        super().__init__(f"{message}: {path}")
        self.path = path


@dataclass
class Progress:
    stream: int = 0
    position: int = -1  # index of the last folded item in the stream
    last_key: str | None = None
    state: dict | None = None


def checkpoint_path(directory: str, run_id: str) -> str:
    return os.path.join(directory, f"run-{run_id}.json")


def save(path: str, run_hash: str, shard, progress: Progress) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "run_hash": run_hash,
        "shard": list(shard) if shard else None,
        "stream": progress.stream,
        "position": progress.position,
        "last_key": progress.last_key,
        "state": progress.state,
    }
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ckpt-")
    with os.fdopen(fd, "w") as fh:
        json.dump(payload, fh, sort_keys=True)
    os.replace(tmp, path)


def load(path: str, run_hash: str) -> Progress | None:
    """Progress stored at ``path``, ``None`` if there is no file."""
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            payload = json.load(fh)
        if payload.get("schema_version") != SCHEMA_VERSION:
            raise CheckpointError("unsupported checkpoint schema", path)
        if payload["run_hash"] != run_hash:
            raise CheckpointError("checkpoint belongs to a different configuration", path)
        return Progress(payload["stream"], payload["position"], payload["last_key"], payload["state"])
    except CheckpointError:
        raise
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CheckpointError(f"corrupt checkpoint ({exc})", path) from exc


def clear(path: str) -> None:
    if os.path.exists(path):
        os.remove(path)
