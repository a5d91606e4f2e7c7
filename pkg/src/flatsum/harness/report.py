"""Report records and deterministic JSON/CSV emission."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Union

from ..errors import IoFailure

Number = Union[int, float]


@dataclass(frozen=True)
class RatioRecord:
    """One evaluated instance.

    Identity suites store |lhs|, |rhs| and the deviation in ``lhs``,
    ``bound`` and ``ratio``; sweeps store |lhs|, the bound expression and
    their ratio.
    """

    q: int
    chi: Optional[tuple[int, ...]]
    h: Optional[Number]
    r: Optional[int]
    lhs: float
    bound: float
    ratio: Optional[float]
    extra: tuple[tuple[str, object], ...] = ()
    asserted: bool = False
    passed: bool = True

    @property
    def chi_label(self) -> str:
        if self.chi is None:
            return ""
        return f"q={self.q};labels={','.join(map(str, self.chi))}"

    def sort_key(self) -> tuple:
        return (
            self.q,
            self.chi if self.chi is not None else (),
            -1 if self.h is None else self.h,
            0 if self.r is None else self.r,
            tuple((k, str(v)) for k, v in self.extra),
        )


@dataclass
class Report:
    suite: str
    kind: str  # "identity" or "ratio"
    params: dict
    records: list[RatioRecord] = field(default_factory=list)

    def __post_init__(self):
        self.records = sorted(self.records, key=RatioRecord.sort_key)

    @property
    def passed(self) -> bool:
        return all(rec.passed for rec in self.records)

    @property
    def summary_key(self) -> str:
        return "max_dev" if self.kind == "identity" else "max_ratio"

    @property
    def summary(self) -> float:
        vals = [rec.ratio for rec in self.records if rec.ratio is not None]
        return max(vals, default=0.0)

    def failures(self) -> list[RatioRecord]:
        return [rec for rec in self.records if not rec.passed]

    def to_json_obj(self) -> dict:
        rhs_key, dev_key = ("rhs", "deviation") if self.kind == "identity" else ("bound", "ratio")
        records = []
        for rec in self.records:
            row = {
                "q": rec.q,
                "chi": rec.chi_label,
                "H": _num(rec.h),
                "r": rec.r,
                "lhs": _num(rec.lhs),
                rhs_key: _num(rec.bound),
                dev_key: _num(rec.ratio),
            }
            for key, value in rec.extra:
                row[key] = _num(value)
            row["asserted"] = rec.asserted
            row["pass"] = rec.passed
            records.append(row)
        return {
            "suite": self.suite,
            "params": _plain(self.params),
            "records": records,
            self.summary_key: _num(self.summary),
            "pass": self.passed,
        }


def _num(x):
    """Round floats to 12 significant digits; leave everything else alone."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            return None
        y = float(f"{x:.12g}")
        return 0.0 if y == 0 else y
    return x


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return _num(obj)


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        v = _num(x)
        return "" if v is None else f"{v:.12g}"
    return str(x)


CSV_COLUMNS = ("q", "chi", "H", "r", "lhs", "bound_or_rhs", "deviation_or_ratio")


def render_report(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_json_obj(), indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in report.records:
            writer.writerow(
                [rec.q, rec.chi_label, _cell(rec.h), _cell(rec.r), _cell(rec.lhs), _cell(rec.bound), _cell(rec.ratio)]
            )
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def write_text(text: str, destination=None) -> None:
    if destination in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write report to {destination}: {exc}") from exc


def emit_report(report: Report, fmt: str = "json", destination=None) -> None:
    """Serialize ``report`` to a path, or to standard output when None or '-'."""
    write_text(render_report(report, fmt), destination)
