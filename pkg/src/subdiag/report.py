"""Versioned key-value reports.

A report is a header line followed by ``key=value`` lines in insertion
order.  Backslashes and newlines in values are escaped, so every report
parses back to an equal one.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

FORMAT = "subdiag-report"
VERSION = 1
HEADER = f"# {FORMAT} v{VERSION}"


class ReportFormatError(ValueError):
    pass


def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace("\n", "\\n")


def _unescape(value: str) -> str:
    out, it = [], iter(value)
    for c in it:
        if c == "\\":
            nxt = next(it, "")
            out.append("\n" if nxt == "n" else nxt)
        else:
            out.append(c)
    return "".join(out)


@dataclass
class Report:
    fields: dict[str, str] = field(default_factory=dict)
    version: int = VERSION

    def add(self, key: str, value) -> None:
        if "=" in key or "\n" in key or not key:
            raise ReportFormatError(f"bad key {key!r}")
        if key in self.fields:
            raise ReportFormatError(f"duplicate key {key!r}")
        self.fields[key] = str(value)

    def update(self, prefix: str, mapping: dict) -> None:
        for k, v in mapping.items():
            self.add(f"{prefix}{k}", v)

    def __getitem__(self, key: str) -> str:
        return self.fields[key]

    def __contains__(self, key: str) -> bool:
        return key in self.fields

    def to_text(self) -> str:
        return HEADER + "\n" + "".join(f"{k}={_escape(v)}\n" for k, v in self.fields.items())

    def to_json(self) -> str:
        return json.dumps({"format": FORMAT, "version": self.version, "fields": self.fields},
                          indent=2)


def parse_report(text: str) -> Report:
    lines = text.split("\n")
    if not lines or not lines[0].startswith(f"# {FORMAT} v"):
        raise ReportFormatError("missing report header")
    try:
        version = int(lines[0].rsplit("v", 1)[1])
    except ValueError:
        raise ReportFormatError("bad version in header") from None
    rep = Report(version=version)
    for line in lines[1:]:
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ReportFormatError(f"not a key=value line: {line!r}")
        rep.add(key, _unescape(value))
    return rep
