"""Versioned JSON reports and the seeded random generator.

Randomised sweeps draw from ``numpy.random.Generator(Philox(seed))``.
Philox is counter based: the stream for a seed is fixed by the algorithm
(Philox4x64-10) and does not depend on platform or process state.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__

SCHEMA = "gl2modp.report/1"
OUTPUT_DIR_ENV = "GL2MODP_OUTPUT_DIR"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class Report:
    command: str
    config: dict
    results: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    anchor: str | None = None
    _t0: float = field(default_factory=time.perf_counter, repr=False)

    def check(self, name: str, passed: bool, **detail) -> bool:
        entry = {"name": name, "passed": bool(passed)}
        if detail:
            entry["detail"] = detail
        self.checks.append(entry)
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def body(self) -> dict:
        """Everything except timing; deterministic for a fixed config."""
        out = {
            "schema": SCHEMA,
            "version": __version__,
            "command": self.command,
            "config": self.config,
            "config_hash": config_hash({"command": self.command, **self.config}),
            "results": self.results,
            "checks": self.checks,
            "passed": self.passed,
        }
        if self.anchor is not None:
            out["anchor"] = self.anchor
        return out

    def to_dict(self) -> dict:
        out = self.body()
        out["timing"] = {"seconds": round(time.perf_counter() - self._t0, 4)}
        return out


def dumps(data: dict) -> str:
    return json.dumps(data, sort_keys=True, default=_default)


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def pretty(data: dict) -> str:
    """A plain-text rendering of a report."""
    lines = [f"{data['command']}  (schema {data['schema']}, v{data['version']}, config {data['config_hash']})"]
    if "anchor" in data:
        lines.append(f"  anchor: {data['anchor']}")
    for key, val in data["results"].items():
        text = json.dumps(val, sort_keys=True, default=_default)
        if len(text) > 100:
            text = text[:97] + "..."
        lines.append(f"  {key}: {text}")
    for c in data["checks"]:
        lines.append(f"  [{'PASS' if c['passed'] else 'FAIL'}] {c['name']}")
    lines.append(f"  overall: {'PASS' if data['passed'] else 'FAIL'}")
    if "timing" in data:
        lines.append(f"  time: {data['timing']['seconds']} s")
    return "\n".join(lines)


def output_path(name: str | None) -> str | None:
    """Resolve an output file name against the output-directory variable."""
    if name is None:
        return None
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(name):
        os.makedirs(base, exist_ok=True)
        return os.path.join(base, name)
    return name
