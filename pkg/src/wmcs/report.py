"""Reports: named verdicts, witnesses, CSV tables and provenance, serialized deterministically."""
from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__

_UNSET = object()
_RATIONAL = re.compile(r"-?\d+(/\d+)?")


def jsonable(x: Any) -> Any:
    """Plain JSON data; rationals become ``"p/q"`` strings and sets become sorted lists."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return str(Fraction(x).limit_denominator())
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        items = [jsonable(v) for v in x]
        return sorted(items, key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


def _norm(x: Any) -> Any:
    # 1, "1" and "2/2" compare equal
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int) or (isinstance(x, str) and _RATIONAL.fullmatch(x)):
        return ("q", str(Fraction(x)))
    if isinstance(x, list):
        return [_norm(v) for v in x]
    if isinstance(x, dict):
        return {k: _norm(v) for k, v in x.items()}
    return x


@dataclass
class Verdict:
    name: str
    value: Any
    expected: Any = _UNSET

    @property
    def asserted(self) -> bool:
        return self.expected is not _UNSET

    @property
    def passed(self) -> bool | None:
        if not self.asserted:
            return None
        return _norm(jsonable(self.value)) == _norm(jsonable(self.expected))

    def to_json(self) -> dict:
        out = {"name": self.name, "value": jsonable(self.value)}
        if self.asserted:
            out["expected"] = jsonable(self.expected)
            out["pass"] = self.passed
        return out


@dataclass
class Table:
    header: list[str]
    rows: list[list[Any]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for r in self.rows:
            w.writerow([_cell(c) for c in r])
        return buf.getvalue()


def _cell(c: Any) -> str:
    v = jsonable(c)
    return v if isinstance(v, str) else json.dumps(v)


@dataclass
class Report:
    kind: str
    provenance: dict = field(default_factory=dict)
    verdicts: list[Verdict] = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    tables: dict[str, Table] = field(default_factory=dict)

    def add(self, name: str, value: Any, expected: Any = _UNSET) -> Verdict:
        v = Verdict(name, value, expected)
        self.verdicts.append(v)
        return v

    def get(self, name: str) -> Verdict | None:
        for v in self.verdicts:
            if v.name == name:
                return v
        return None

    def assert_values(self, expect: dict) -> None:
        """Attach expected values; a name with no computed verdict fails."""
        for name, exp in expect.items():
            v = self.get(name)
            if v is None:
                v = self.add(name, None)
                v.value = _MissingValue()
            v.expected = exp

    @property
    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if v.asserted and not v.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        asserted = [v for v in self.verdicts if v.asserted]
        return {
            "tool": "wmcs",
            "version": __version__,
            "kind": self.kind,
            "provenance": jsonable(self.provenance),
            "verdicts": [v.to_json() for v in self.verdicts],
            "witnesses": jsonable(self.witnesses),
            "summary": {"asserted": len(asserted), "failed": len(self.failures)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def write(self, out_dir: str | Path) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(self.to_json(), encoding="utf-8")
        for name, table in sorted(self.tables.items()):
            (out / f"{name}.csv").write_text(table.to_csv(), encoding="utf-8")
        return out / "report.json"

    def text_table(self, width: int = 60) -> str:
        rows = [("verdict", "value", "expected", "status")]
        for v in self.verdicts:
            val = _short(jsonable(v.value), width)
            exp = _short(jsonable(v.expected), width) if v.asserted else ""
            status = "" if not v.asserted else ("PASS" if v.passed else "FAIL")
            rows.append((v.name, val, exp, status))
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        n_fail = len(self.failures)
        n_asserted = sum(1 for v in self.verdicts if v.asserted)
        lines.append(f"{self.kind}: {n_asserted - n_fail}/{n_asserted} asserted verdicts pass")
        return "\n".join(lines)


class _MissingValue:
    def __repr__(self) -> str:
        return "<missing>"


def _short(v: Any, width: int) -> str:
    s = v if isinstance(v, str) else json.dumps(v)
    return s if len(s) <= width else s[: width - 3] + "..."
