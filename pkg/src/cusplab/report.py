"""Machine-readable verification reports: one CheckRow per check.

Rows render canonically (sorted keys, exact value strings), so two runs with
the same grid, seed and budget emit byte-identical files.  Wall-clock timings
are therefore zeroed in the canonical output; pass zero_millis=False to keep
the measured values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = ["CheckRow", "render_params", "emit", "summarize"]

FIELDS = ("check_id", "params", "expected", "computed", "provenance", "status", "millis")


def render_params(params: dict) -> str:
    return ",".join(f"{k}={params[k]}" for k in sorted(params))


@dataclass
class CheckRow:
    check_id: str
    params: dict
    expected: str
    computed: str
    provenance: str            # PAPER | TRIVIAL | DERIVED
    status: str                # pass | fail | skipped
    millis: int = 0

    @classmethod
    def make(cls, check_id: str, params: dict, expected, computed,
             provenance: str, millis: int = 0) -> "CheckRow":
        e, c = str(expected), str(computed)
        return cls(check_id, dict(params), e, c, provenance,
                   "pass" if e == c else "fail", millis)

    @classmethod
    def skipped(cls, check_id: str, params: dict, expected, provenance: str,
                reason: str = "budget_exceeded") -> "CheckRow":
        return cls(check_id, dict(params), str(expected), reason, provenance, "skipped", 0)

    def sort_key(self):
        return (self.check_id, render_params(self.params))


def emit(rows, fmt: str = "json-lines", out=None, zero_millis: bool = True) -> str:
    """Serialize rows deterministically; returns the text and optionally writes it."""
    ordered = sorted(rows, key=lambda r: r.sort_key())
    lines = []
    if fmt == "json-lines":
        for r in ordered:
            obj = {
                "check_id": r.check_id,
                "params": render_params(r.params),
                "expected": r.expected,
                "computed": r.computed,
                "provenance": r.provenance,
                "status": r.status,
                "millis": 0 if zero_millis else r.millis,
            }
            lines.append(json.dumps(obj, separators=(", ", ": ")))
    elif fmt == "tsv":
        lines.append("\t".join(FIELDS))
        for r in ordered:
            lines.append("\t".join([
                r.check_id, render_params(r.params), r.expected, r.computed,
                r.provenance, r.status, str(0 if zero_millis else r.millis)]))
    else:
        raise ValueError(f"unknown format {fmt!r}")
    text = "\n".join(lines) + ("\n" if lines else "")
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def summarize(rows) -> tuple[int, int, int]:
    npass = sum(1 for r in rows if r.status == "pass")
    nfail = sum(1 for r in rows if r.status == "fail")
    nskip = sum(1 for r in rows if r.status == "skipped")
    return npass, nfail, nskip
