"""Tracked-constant store.

Every constant_tracked scenario pins one number: the constant its own
runner measured at a fixed provenance point (prime, dim, trials, seed).
Runs at the provenance point must reproduce the stored constant exactly
(drift detection); runs elsewhere must stay within the slack factor for
upper-tracked constants, or at or above the constant for floor-tracked
ones.

The store also keeps a hash of the runner source.  If the runner
changes, every previously stored constant is suspect, so the hash is
checked before any scenario executes and a mismatch aborts the run.
Regenerate with ``fflab baseline --regen``.
"""

from __future__ import annotations

import hashlib
import inspect
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..errors import FFLabError

SCHEMA = "fflab-baselines/1"

# Fixed project constant.  Changing it requires regenerating baselines.
SLACK = 2.0

_DEFAULT_PATH = Path(__file__).parent / "baselines.json"


class BaselineMismatch(FFLabError):
    """Stored oracle hash does not match the current runner source."""


class BaselineMissing(FFLabError):
    """No stored entry for a constant-tracked scenario."""


def oracle_hash(fn) -> str:
    src = inspect.getsource(fn)
    return hashlib.sha256(src.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class BaselineEntry:
    constant: float
    prime: int
    dim: int
    trials: int
    seed: int
    oracle_hash: str

    def provenance(self) -> tuple:
        return (self.prime, self.dim, self.trials, self.seed)


class BaselineStore:
    def __init__(self, entries: dict, slack: float = SLACK,
                 path: Optional[Path] = None):
        self.entries = dict(entries)
        self.slack = slack
        self.path = path or _DEFAULT_PATH

    @classmethod
    def load(cls, path: Optional[Path] = None) -> "BaselineStore":
        path = Path(path) if path else _DEFAULT_PATH
        if not path.exists():
            return cls({}, SLACK, path)
        doc = json.loads(path.read_text())
        if doc.get("schema") != SCHEMA:
            raise FFLabError(f"unexpected baseline schema {doc.get('schema')!r}")
        entries = {
            sid: BaselineEntry(
                constant=e["constant"], prime=e["prime"], dim=e["dim"],
                trials=e["trials"], seed=e["seed"],
                oracle_hash=e["oracle_hash"],
            )
            for sid, e in doc["entries"].items()
        }
        return cls(entries, doc.get("slack", SLACK), path)

    def save(self, path: Optional[Path] = None) -> None:
        path = Path(path) if path else self.path
        doc = {
            "schema": SCHEMA,
            "slack": self.slack,
            "entries": {
                sid: {
                    "constant": e.constant,
                    "prime": e.prime,
                    "dim": e.dim,
                    "trials": e.trials,
                    "seed": e.seed,
                    "oracle_hash": e.oracle_hash,
                }
                for sid, e in sorted(self.entries.items())
            },
        }
        path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")

    def entry(self, sid: str) -> BaselineEntry:
        if sid not in self.entries:
            raise BaselineMissing(
                f"no baseline entry for {sid}; run "
                f"`fflab baseline --regen --ids {sid}` to create one"
            )
        return self.entries[sid]

    def verify(self, sid: str, runner) -> None:
        """Abort before running anything when the runner source changed."""
        e = self.entry(sid)
        h = oracle_hash(runner)
        if h != e.oracle_hash:
            raise BaselineMismatch(
                f"{sid}: runner source hash {h[:12]} does not match stored "
                f"{e.oracle_hash[:12]}; regenerate with "
                f"`fflab baseline --regen --ids {sid}`"
            )
