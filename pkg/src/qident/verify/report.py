"""Check outcome records and their JSON serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

SCHEMA_VERSION = 1

PASS = "pass"
FAIL = "fail"
SKIP = "skipped"


@dataclass
class CheckReport:
    id: str
    paper_anchor: str
    mode: str  # "formal" | "formal-sampled" | "analytic"
    status: str  # pass | fail | skipped(<reason>)
    elapsed_ms: int = 0
    order: Optional[int] = None
    points: Optional[int] = None
    witness: Optional[dict] = None

    def ok(self) -> bool:
        return self.status == PASS

    def skipped(self) -> bool:
        return self.status.startswith(SKIP)

    def to_dict(self, stable: bool = False) -> dict:
        d = {
            "id": self.id,
            "paper_anchor": self.paper_anchor,
            "mode": self.mode,
            "status": self.status,
            "elapsed_ms": 0 if stable else self.elapsed_ms,
        }
        # exactly one of order/points describes the work done
        if self.order is not None:
            d["order"] = self.order
        if self.points is not None:
            d["points"] = self.points
        if self.witness is not None:
            d["witness"] = self.witness
        return d

    def text_line(self, stable: bool = False) -> str:
        scope = ""
        if self.order is not None:
            scope = f", N={self.order}"
        if self.points is not None:
            scope += f", points={self.points}"
        ms = "" if stable else f", {self.elapsed_ms}ms"
        line = f"[{self.status.upper():<4}] {self.id} ({self.mode}{scope}{ms})"
        if self.witness and self.status != PASS:
            line += f"  witness: {_short(self.witness)}"
        return line


def _short(witness: dict, cap: int = 160) -> str:
    s = json.dumps(witness, sort_keys=True)
    return s if len(s) <= cap else s[: cap - 3] + "..."


def reports_to_json(reports, config: Optional[dict] = None, stable: bool = False) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "reports": [r.to_dict(stable=stable) for r in reports],
    }
    if config is not None:
        doc["config"] = config
    return json.dumps(doc, indent=2, sort_keys=True)


def reports_to_text(reports, stable: bool = False) -> str:
    lines = [r.text_line(stable=stable) for r in reports]
    npass = sum(1 for r in reports if r.ok())
    nfail = sum(1 for r in reports if not r.ok() and not r.skipped())
    nskip = sum(1 for r in reports if r.skipped())
    lines.append(f"{npass} passed, {nfail} failed, {nskip} skipped")
    return "\n".join(lines)
