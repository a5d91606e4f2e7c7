from .config import SweepConfig, h_values, sample_pairs, sample_residues, sample_unit_pairs
from .report import RatioRecord, Report, emit_report, render_report
from .suites import SUITES, run_identity_suite
from .sweeps import TARGETS, burgess_ratio, max_interval_sum, run_bound_sweep

__all__ = [
    "SUITES",
    "TARGETS",
    "RatioRecord",
    "Report",
    "SweepConfig",
    "burgess_ratio",
    "emit_report",
    "h_values",
    "max_interval_sum",
    "render_report",
    "run_bound_sweep",
    "run_identity_suite",
    "sample_pairs",
    "sample_residues",
    "sample_unit_pairs",
]
