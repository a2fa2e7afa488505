"""Run manifests: parameter capture plus content digests of every output.

A manifest makes a run reproducible: replaying it re-executes the recorded
subcommand with the recorded flags and verifies that every output file
hashes to the recorded digest.
"""

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Dict

from . import __version__


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    subcommand: str
    parameters: Dict
    version: str = __version__
    wall_time_s: float = 0.0
    outputs: Dict[str, str] = field(default_factory=dict)

    def record_output(self, path):
        self.outputs[str(path)] = file_digest(path)

    def write(self, path):
        payload = {
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "version": self.version,
            "wall_time_s": self.wall_time_s,
            "outputs": self.outputs,
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            payload = json.load(fh)
        return cls(
            subcommand=payload["subcommand"],
            parameters=payload["parameters"],
            version=payload.get("version", "unknown"),
            wall_time_s=payload.get("wall_time_s", 0.0),
            outputs=payload.get("outputs", {}),
        )

    def verify_outputs(self):
        """Map of path -> bool (digest matches)."""
        return {p: file_digest(p) == d for p, d in self.outputs.items()}


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        return False
