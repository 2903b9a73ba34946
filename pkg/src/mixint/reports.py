"""Verification reports shared by all inequality campaigns."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

INEQUALITIES = (
    "isoperimetric",
    "brunn_minkowski",
    "af_corollary",
    "alexandrov",
    "moment_lemma",
    "polynomiality",
    "v_properties",
    "closure",
    "oracle",
)


def _canonical(obj):
    if hasattr(obj, "to_dict"):
        return _canonical(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _canonical(obj.tolist())
    if isinstance(obj, (float, np.floating)):
        return repr(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def digest(*objs) -> str:
    """Short stable identifier of the inputs to a computation."""
    payload = json.dumps(_canonical(list(objs)), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class TrialRecord:
    trial: int
    margin: float
    inputs_digest: str


@dataclass
class VerifyReport:
    """Outcome of one campaign; it passes iff worst_margin >= -tolerance."""

    inequality: str
    trials: int
    seed: int
    tolerance: float
    records: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    status: str = "checked"

    def __post_init__(self):
        if self.inequality not in INEQUALITIES:
            raise ValueError(f"unknown inequality {self.inequality!r}")

    def add(self, trial: int, margin: float, inputs_digest: str) -> None:
        self.records.append(TrialRecord(trial, float(margin), inputs_digest))

    @property
    def worst_margin(self) -> float:
        return min((r.margin for r in self.records), default=math.inf)

    @property
    def failures(self) -> list:
        return [r for r in self.records if not r.margin >= -self.tolerance]

    @property
    def passed(self) -> bool:
        return self.status == "checked" and self.worst_margin >= -self.tolerance

    def to_dict(self, version: str | None = None) -> dict:
        from . import __version__

        return {
            "property": self.inequality,
            "trials": self.trials,
            "worst_margin": _jsonable(self.worst_margin),
            "failures": [{"trial": r.trial, "inputs_digest": r.inputs_digest, "margin": r.margin} for r in self.failures],
            "seed": self.seed,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "status": self.status,
            "details": {k: _jsonable(v) for k, v in sorted(self.details.items())},
            "version": version or __version__,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["trial", "margin", "inputs_digest"])
        for r in self.records:
            writer.writerow([r.trial, repr(r.margin), r.inputs_digest])
        return buf.getvalue()


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in sorted(v.items())}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, float)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v
