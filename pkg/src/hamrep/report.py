"""Uniform check reports.

Every verification routine in the toolkit reports through `CheckReport` so
the CLI can render one PASS/FAIL line per check and serialize the full
evidence as JSON with a stable field set.
"""

from __future__ import annotations

import dataclasses
import json
import math
from typing import Any


def sanitize(obj: Any) -> Any:
    """Coerce numpy scalars/arrays and tuples into plain JSON-friendly types."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if hasattr(obj, "tolist"):
        return sanitize(obj.tolist())
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    return str(obj)


@dataclasses.dataclass
class CheckReport:
    """Outcome of one named check.

    Parameters
    ----------
    check : str
        Stable identifier of the check ("hlc", "steiner_lipschitz", ...).
    worst_margin : float
        The worst observed slack; positive means violation for pass/fail
        checks, and is informational for verdict-only checks.
    verdict : str
        "pass", "fail", or a free-text verdict for checks that classify
        rather than gate.
    witnesses : list
        Small dicts locating the worst offenders (coordinates, values).
    """

    check: str
    worst_margin: float
    verdict: str
    witnesses: list = dataclasses.field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict != "fail"

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "worst_margin": sanitize(float(self.worst_margin)),
            "verdict": self.verdict,
            "witnesses": sanitize(self.witnesses),
        }

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.check}: worst_margin={self.worst_margin:.6g} ({self.verdict})"


def reports_to_json(reports: list[CheckReport], **extra: Any) -> str:
    doc = {"schema": 1, "reports": [r.to_dict() for r in reports]}
    doc.update({k: sanitize(v) for k, v in extra.items()})
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
