"""Shard plumbing for exhaustive sums.

Evaluators split their index space into shards by fixing the top bits of the
enumeration index.  Each shard is a pure function of its index, so the caller
may hand shards to any ``map``-like callable (the builtin ``map``, or
``ThreadPoolExecutor.map``).  Partial results are combined with exact addition
in shard order, hence the total never depends on the worker count.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

Mapper = Callable[[Callable[[int], Any], Iterable[int]], Iterable[Any]]

CHECKPOINT_FORMAT = "ramsey-formulas-checkpoint"
CHECKPOINT_VERSION = 1


def default_shard_bits(total_bits: int, max_shard_bits: int = 20, min_shards_bits: int = 2) -> int:
    """Bits fixed per shard: enough that a shard walks at most 2**max_shard_bits items."""
    bits = max(min_shards_bits, total_bits - max_shard_bits)
    return max(0, min(bits, total_bits))


def shard_range(shard: int, total_bits: int, shard_bits: int) -> tuple[int, int]:
    """Half-open index range ``[lo, hi)`` covered by ``shard``."""
    width = 1 << (total_bits - shard_bits)
    return shard * width, (shard + 1) * width


class Checkpoint:
    """Versioned JSON file holding finished shard partials.

    ``key`` identifies the computation; a file written for different
    parameters is rejected rather than silently mixed in.
    """

    def __init__(self, path: str | os.PathLike, key: dict, total_bits: int, shard_bits: int,
                 encode: Callable[[Any], Any], decode: Callable[[Any], Any]):
        self.path = Path(path)
        self.key = key
        self.total_bits = total_bits
        self.shard_bits = shard_bits
        self.encode = encode
        self.decode = decode
        self.partials: dict[int, Any] = {}
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        data = json.loads(self.path.read_text())
        if data.get("format") != CHECKPOINT_FORMAT or data.get("version") != CHECKPOINT_VERSION:
            raise ValueError(f"{self.path}: not a version {CHECKPOINT_VERSION} checkpoint")
        if data["key"] != self.key or data["shard_bits"] != self.shard_bits:
            raise ValueError(f"{self.path}: checkpoint belongs to a different computation")
        for shard, entry in data["shards"].items():
            self.partials[int(shard)] = self.decode(entry["partial"])

    def record(self, shard: int, partial: Any) -> None:
        self.partials[shard] = partial
        self._save()

    def _save(self) -> None:
        shards = {}
        for shard in sorted(self.partials):
            lo, hi = shard_range(shard, self.total_bits, self.shard_bits)
            shards[str(shard)] = {"range": [str(lo), str(hi)], "partial": self.encode(self.partials[shard])}
        payload = {
            "format": CHECKPOINT_FORMAT,
            "version": CHECKPOINT_VERSION,
            "key": self.key,
            "total_bits": self.total_bits,
            "shard_bits": self.shard_bits,
            "shards": shards,
        }
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        tmp.write_text(json.dumps(payload, indent=1, sort_keys=True))
        os.replace(tmp, self.path)


def run_shards(task: Callable[[int], Any], shards: Sequence[int], mapper: Mapper | None = None,
               checkpoint: Checkpoint | None = None) -> list[Any]:
    """Evaluate ``task`` on every shard and return partials in shard order."""
    mapper = mapper or map
    done = dict(checkpoint.partials) if checkpoint is not None else {}
    pending = [s for s in shards if s not in done]
    for shard, partial in zip(pending, mapper(task, pending)):
        done[shard] = partial
        if checkpoint is not None:
            checkpoint.record(shard, partial)
    return [done[s] for s in shards]
