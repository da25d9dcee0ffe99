"""Verdict containers returned by every checking operation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
UNAVAILABLE = "unavailable"


def _plain(value):
    # numpy scalars / tuples -> JSON-friendly python values
    if hasattr(value, "item") and not isinstance(value, (list, tuple, dict)):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value


@dataclass
class Report:
    """Per-law verdicts with witnesses.

    ``verdicts`` maps a law name (``"A1"``, ``"M2"``, ``"additive"``, ...) to
    one of ``pass``/``fail``/``unavailable``. ``witnesses`` holds the first
    (lexicographically smallest) counterexample for each failed law.
    ``info`` carries non-verdict observations such as the A4 witness.
    """

    subject: str
    verdicts: dict[str, str] = field(default_factory=dict)
    witnesses: dict[str, dict[str, Any]] = field(default_factory=dict)
    info: dict[str, Any] = field(default_factory=dict)

    def record(self, law: str, witness: dict | None) -> None:
        if witness is None:
            self.verdicts.setdefault(law, PASS)
        else:
            self.verdicts[law] = FAIL
            self.witnesses.setdefault(law, _plain(witness))

    def unavailable(self, law: str, reason: str) -> None:
        self.verdicts[law] = UNAVAILABLE
        self.info.setdefault("unavailable", {})[law] = reason

    @property
    def passed(self) -> bool:
        return all(v == PASS for v in self.verdicts.values())

    @property
    def failed(self) -> list[str]:
        return [k for k, v in self.verdicts.items() if v == FAIL]

    def first_witness(self):
        for law in self.failed:
            return law, self.witnesses[law]
        return None

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "verdicts": dict(self.verdicts),
            "witnesses": _plain(self.witnesses),
            "info": _plain(self.info),
        }

    def __bool__(self):
        return self.passed


# kept as an alias: single-law checks read better with this name
ValidationReport = Report
