"""JSON report documents: versioned, deterministic, and round-trippable."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import Graph
from .io import to_graph6
from .states import RealState
from .transfer import SignPartition, TransferReport

SCHEMA_VERSION = "pairwalk.report/1"


class ReportError(ValueError):
    pass


def encode(x):
    """Plain JSON data for numbers and containers; complex -> [re, im], Fraction -> "p/q"."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if not math.isfinite(x):
            raise ReportError(f"non-finite value {x} cannot be serialized")
        return x
    if isinstance(x, np.ndarray):
        return [encode(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    raise ReportError(f"cannot serialize {type(x).__name__}")


def decode_complex(v) -> complex | None:
    return None if v is None else complex(v[0], v[1])


def decode_fraction(v) -> Fraction | None:
    return None if v is None else Fraction(v)


def state_label(u: RealState | None) -> str | None:
    if u is None:
        return None
    if u.pair is not None:
        return str(u.pair)
    nz = np.flatnonzero(np.abs(u.vector) > 1e-12)
    if len(nz) == 1:
        return f"e{nz[0]}"
    return "[" + ", ".join(f"{x:.12g}" for x in u.vector) + "]"


def partition_record(sp: SignPartition | None):
    if sp is None:
        return None
    return {"plus": [float(x) for x in sp.plus], "minus": [float(x) for x in sp.minus]}


def transfer_record(rep: TransferReport, **extra) -> dict:
    """Flatten a TransferReport into JSON-ready fields (fixed key order)."""
    cls = rep.classification
    rec = {
        "verdict": rep.verdict,
        "source": state_label(rep.source),
        "target": state_label(rep.target) if rep.target is not None and rep.target is not rep.source else None,
        "time": rep.time,
        "time_symbolic": rep.symbolic,
        "time_fraction": rep.time_fraction,
        "phase": rep.phase,
        "certification": rep.certification,
        "classification": cls.describe() if cls is not None else None,
        "delta": rep.delta,
        "sign_partition": partition_record(rep.sign_partition),
        "oracle_fidelity": rep.oracle_fidelity,
        "eigenvalue": rep.eigenvalue,
        "notes": list(rep.notes),
    }
    rec.update(extra)
    return encode(rec)


def graph_summary(X: Graph, **extra) -> dict:
    weighted = X.is_weighted
    edges = [[u, v, w] if weighted else [u, v] for u, v, w in X.edges]
    rec = {"n": X.n, "m": X.m, "edges": edges, "weighted": weighted}
    if not weighted:
        rec["graph6"] = to_graph6(X)
    rec.update(extra)
    return encode(rec)


@dataclass
class ReportDocument:
    command: str
    graph: dict | None = None
    config: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)  # section name -> list of records
    diagnostics: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    schema: str = SCHEMA_VERSION

    def add(self, section: str, record: dict) -> None:
        self.results.setdefault(section, []).append(encode(record))

    def as_dict(self) -> dict:
        return {
            "schema": self.schema,
            "command": self.command,
            "graph": encode(self.graph),
            "config": encode(self.config),
            "results": {k: encode(self.results[k]) for k in sorted(self.results)},
            "diagnostics": [str(d) for d in self.diagnostics],
            "timing": encode(self.timing),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.as_dict(), indent=indent, sort_keys=True, allow_nan=False)

    @classmethod
    def from_dict(cls, d: dict) -> "ReportDocument":
        if d.get("schema") != SCHEMA_VERSION:
            raise ReportError(f"unsupported report schema {d.get('schema')!r}")
        return cls(d["command"], d.get("graph"), d.get("config", {}), d.get("results", {}),
                   list(d.get("diagnostics", [])), d.get("timing", {}), d["schema"])

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReportDocument):
            return NotImplemented
        return self.as_dict() == other.as_dict()
