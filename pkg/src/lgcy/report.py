"""Machine-readable run reports and their JSON / CSV / pretty renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__

SCHEMA_VERSION = 1
VERDICTS = ("pass", "fail", "skipped")

PRETTY_LABELS = {
    "C": "C",
    "R(W)_0": "R(W)_0",
    "R(W)_0+C": "R(W)_0 ⊕ C",
    "0": "0",
}


def jsonable(obj: Any) -> Any:
    """Recursively convert Fractions (to "a/b" strings) and tuples for JSON."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


@dataclass
class Check:
    name: str
    verdict: str
    witness: Any = None

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"bad verdict {self.verdict!r}")

    @classmethod
    def of(cls, name: str, ok: bool, witness: Any = None) -> Check:
        return cls(name, "pass" if ok else "fail", jsonable(witness))

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict, "witness": jsonable(self.witness)}


@dataclass
class Report:
    input: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    frobenius: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    timings_ms: dict = field(default_factory=dict)
    version: str = __version__
    entries: list = field(default_factory=list)  # batch runs only

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.verdict == "fail"]

    @property
    def passed(self) -> bool:
        return not self.failed

    def to_dict(self) -> dict:
        out = {
            "version": self.version,
            "schema_version": SCHEMA_VERSION,
            "input": jsonable(self.input),
            "certificates": jsonable(self.certificates),
            "tables": jsonable(self.tables),
            "frobenius": jsonable(self.frobenius),
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.entries:
            out["entries"] = jsonable(self.entries)
        out["timings_ms"] = jsonable(self.timings_ms)
        return out

    def body(self) -> dict:
        """Everything except timings: identical inputs give identical bodies."""
        d = self.to_dict()
        d.pop("timings_ms")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Report:
        if d.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema_version')!r}")
        return cls(
            input=d.get("input", {}),
            certificates=d.get("certificates", {}),
            tables=d.get("tables", {}),
            frobenius=d.get("frobenius", {}),
            checks=[Check(c["name"], c["verdict"], c.get("witness")) for c in d.get("checks", [])],
            timings_ms=d.get("timings_ms", {}),
            version=d["version"],
            entries=d.get("entries", []),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Report):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def table_payload(kind: str, index_names: list[str], entries: list[tuple]) -> dict:
    """entries: (index tuple, dim, label)."""
    return {
        "kind": kind,
        "index_names": list(index_names),
        "entries": [{"index": list(idx), "dim": dim, "label": label} for idx, dim, label in entries],
    }


def emit_json(r: Report) -> bytes:
    return (json.dumps(r.to_dict(), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def parse_json(data: bytes | str) -> Report:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return Report.from_dict(json.loads(data))


def table_csv(table: dict) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(table["index_names"]) + ["dim"])
    for e in table["entries"]:
        w.writerow(list(e["index"]) + [e["dim"]])
    return buf.getvalue().encode("utf-8")


def emit_csv_tables(r: Report) -> dict[str, bytes]:
    """One CSV document per table."""
    return {name: table_csv(t) for name, t in r.tables.items()}


def emit_csv(r: Report) -> bytes:
    chunks = []
    for name, data in emit_csv_tables(r).items():
        chunks.append(f"# {name}\n".encode("utf-8") + data)
    return b"\n".join(chunks)


def _scalar(v) -> bool:
    return isinstance(v, (str, int, float, bool)) or v is None


def emit_pretty(r: Report) -> bytes:
    lines = [f"lgcy {r.version}"]
    if r.input:
        lines.append(f"input: {r.input.get('poly')}  (n = {r.input.get('n')})")
    for name, cert in r.certificates.items():
        if isinstance(cert, dict) and "message" in cert:
            lines.append(f"certificate {name}: {cert['message']}")
    for name, t in r.tables.items():
        lines.append("")
        lines.append(f"[{name}]")
        for e in t["entries"]:
            idx = ",".join(str(i) for i in e["index"])
            label = PRETTY_LABELS.get(e["label"], e["label"])
            shown = f"{label} (dim {e['dim']})" if label not in ("C", "0") else label
            lines.append(f"  {t['index_names'] and ','.join(t['index_names'])}={idx}: {shown}")
    if r.frobenius:
        lines.append("")
        lines.append("[frobenius]")
        for k, v in r.frobenius.items():
            if _scalar(v):
                lines.append(f"  {k}: {v}")
            elif isinstance(v, dict):
                for k2, v2 in v.items():
                    if _scalar(v2):
                        lines.append(f"  {k}.{k2}: {v2}")
    if r.entries:
        lines.append("")
        lines.append("[entries]")
        for i, e in enumerate(r.entries):
            lines.append(f"  {i}: {e.get('input', {}).get('poly')}  exit {e.get('exit_code')}")
    if r.checks:
        lines.append("")
        lines.append("[checks]")
        for c in r.checks:
            lines.append(f"  {c.verdict.upper():7s} {c.name}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_report(r: Report, fmt: str) -> bytes:
    if fmt == "json":
        return emit_json(r)
    if fmt == "csv":
        return emit_csv(r)
    if fmt == "pretty":
        return emit_pretty(r)
    raise ValueError(f"unsupported format {fmt!r}")
