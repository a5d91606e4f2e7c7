"""Regenerate the golden regression reports under tests/golden/.

Run from the repository root: ``python scripts/make_golden.py``.
Each theorem target is swept with default flags over q <= 1000; the CSV
report is stored verbatim and the JSON report is pinned by its sha256.
"""

import hashlib
import json
from pathlib import Path

from flatsum.harness import SweepConfig, render_report, run_bound_sweep

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"
TARGETS = ("theorem1", "theorem2", "theorem3")
Q_MAX = 1000


def golden_config() -> SweepConfig:
    return SweepConfig(q_max=Q_MAX)


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for target in TARGETS:
        report = run_bound_sweep(target, golden_config())
        text_json = render_report(report, "json")
        text_csv = render_report(report, "csv")
        (GOLDEN / f"{target}.csv").write_text(text_csv, encoding="utf-8", newline="")
        meta = {
            "target": target,
            "params": report.to_json_obj()["params"],
            "max_ratio": report.to_json_obj()["max_ratio"],
            "records": len(report.records),
            "json_sha256": hashlib.sha256(text_json.encode()).hexdigest(),
        }
        (GOLDEN / f"{target}.meta.json").write_text(json.dumps(meta, indent=1) + "\n", encoding="utf-8")
        print(f"{target}: max_ratio {meta['max_ratio']} over {meta['records']} records")


if __name__ == "__main__":
    main()
