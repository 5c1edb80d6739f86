"""Scenario reports: a JSON document and its plain-text mirror."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .rng import RNG_ALGORITHM

REPORT_SCHEMA_VERSION = "1"


def matrix_to_json(M) -> dict:
    A = np.asarray(M, dtype=complex)
    return {"re": A.real.tolist(), "im": A.imag.tolist()}


def matrix_from_json(obj) -> np.ndarray:
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    return re + 1j * im


def _plain(x):
    """Convert numpy scalars and arrays into JSON-native values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


@dataclass
class Report:
    scenario: str
    tasks: list[dict] = field(default_factory=list)
    seeds: dict = field(default_factory=dict)
    rng_algorithm: str = RNG_ALGORITHM
    version: str = ""
    schema: str = REPORT_SCHEMA_VERSION
    generated_at: str | None = None

    def __post_init__(self):
        if not self.version:
            from . import __version__

            self.version = __version__

    def stamp(self) -> "Report":
        self.generated_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return self

    def task(self, name: str) -> dict:
        for t in self.tasks:
            if t["task"] == name:
                return t
        raise KeyError(name)

    def to_dict(self, include_timestamp: bool = True) -> dict:
        out = {
            "schema": self.schema,
            "scenario": self.scenario,
            "version": self.version,
            "rng_algorithm": self.rng_algorithm,
            "seeds": _plain(self.seeds),
            "tasks": _plain(self.tasks),
        }
        if include_timestamp:
            out["generated_at"] = self.generated_at
        return out

    def to_json(self, include_timestamp: bool = True, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(include_timestamp), indent=indent, sort_keys=True, allow_nan=False)

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        return cls(
            scenario=data["scenario"],
            tasks=data["tasks"],
            seeds=data.get("seeds", {}),
            rng_algorithm=data.get("rng_algorithm", RNG_ALGORITHM),
            version=data.get("version", ""),
            schema=data.get("schema", REPORT_SCHEMA_VERSION),
            generated_at=data.get("generated_at"),
        )

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        lines = [f"scenario: {self.scenario}", f"version: {self.version}  rng: {self.rng_algorithm}"]
        if self.seeds:
            lines.append("seeds: " + ", ".join(f"{k}={v}" for k, v in sorted(self.seeds.items())))
        for t in self.tasks:
            lines.append("")
            lines.append(f"== {t['task']} ==")
            lines.extend(_TEXT[t["task"]](t))
        return "\n".join(lines) + "\n"


def _fmt_matrix(obj, indent="  ") -> list[str]:
    M = matrix_from_json(obj)
    rows = []
    for row in M:
        cells = []
        for z in row:
            if abs(z.imag) < 5e-13:
                cells.append(f"{z.real:+.4f}")
            else:
                cells.append(f"{z.real:+.4f}{z.imag:+.4f}i")
        rows.append(indent + "  ".join(f"{c:>16}" for c in cells))
    return rows


def _text_reduce(t):
    out = []
    if t.get("keep") is not None:
        out.append(f"reduced from dims {t['source_dims']} to subsystems {t['keep']}")
    out.append("state:")
    out += _fmt_matrix(t["state"])
    out.append(f"purity {t['purity']:.6f}   negativity {t['negativity']:.6f}   PPT verdict {t['ppt_verdict']}")
    if t.get("schmidt_coefficients") is not None:
        out.append("Schmidt coefficients " + ", ".join(f"{x:.6f}" for x in t["schmidt_coefficients"]))
    return out


def _text_simulate(t):
    out = []
    for run in t["runs"]:
        out.append(f"basis {run['basis']}  shots {run['shots']}  seed {run['seed']}  stream {run['stream']}")
        for label in run["counts"]:
            out.append(f"  {label:>14}  {run['counts'][label]:>9}  freq {run['frequencies'][label]:.5f}"
                       f"  prob {run['probabilities'][label]:.5f}")
    return out


def _text_assess(t):
    lo, hi = t["min_negativity"], t["max_negativity"]
    out = [
        f"verdict: {t['verdict']}",
        f"constraints: " + ", ".join(f"<{c['observable']}>={c['value']:.6g}" for c in t["constraints"]),
        f"common product eigenbasis: {t['basis_analysis']} ({t['basis_reason']})",
        f"min negativity {lo['value']:.6g} (residual {lo['residual']:.2e}, {lo['source']})",
        f"max negativity {hi['value']:.6g} (residual {hi['residual']:.2e}, {hi['source']})",
    ]
    if t.get("certificate") is not None:
        out.append("separable certificate:")
        out += _fmt_matrix(t["certificate"])
    return out


def _text_tomography(t):
    out = [f"settings {', '.join(t['settings'])}  shots/setting {t['shots_per_setting']}  seed {t['seed']}  mode {t['mode']}"]
    out.append("estimate:")
    out += _fmt_matrix(t["estimate"])
    out.append(f"estimate negativity {t['negativity']:.6f}")
    if t.get("trace_distance_to_source") is not None:
        out.append(f"trace distance to source {t['trace_distance_to_source']:.6f}")
    return out


_TEXT = {"reduce": _text_reduce, "simulate": _text_simulate, "assess": _text_assess, "tomography": _text_tomography}
