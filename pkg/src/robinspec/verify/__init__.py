"""Inequality, identity and comparison checks with machine-readable reports."""

from .checks import (
    PAYNE_SCHAEFER_BOUND,
    CenterResult,
    center_fixed_point,
    classical_checks,
    faber_krahn_robin,
    gap_bound_general,
    is_ball,
    reverse_holder,
    rm_lower_bound,
    theorem11_bound,
)
from .chiti import (
    ChitiComparison,
    chiti_comparison,
    chiti_reports,
    lemma32_report,
    lemma32_residual,
    top_cap_measure,
)
from .common import CaseData, case_data
from .corpora import (
    equimeasurability_reports,
    hardy_littlewood_reports,
    radial_identity_reports,
    random_functions,
    reflection_reports,
)
from .reports import (
    SLACK_CONSTANT,
    InequalityReport,
    make_report,
    reports_to_csv,
    reports_to_json,
    slack_fraction,
    to_json_text,
)
from .sweep import SweepRow, ratio_sweep, sweep_reports, sweep_to_csv

__all__ = [
    "PAYNE_SCHAEFER_BOUND", "CenterResult", "center_fixed_point", "classical_checks",
    "faber_krahn_robin", "gap_bound_general", "is_ball", "reverse_holder", "rm_lower_bound",
    "theorem11_bound", "ChitiComparison", "chiti_comparison", "chiti_reports", "lemma32_report",
    "lemma32_residual", "top_cap_measure", "CaseData", "case_data", "equimeasurability_reports",
    "hardy_littlewood_reports", "radial_identity_reports", "random_functions",
    "reflection_reports", "SLACK_CONSTANT", "InequalityReport", "make_report", "reports_to_csv",
    "reports_to_json", "slack_fraction", "to_json_text", "SweepRow", "ratio_sweep",
    "sweep_reports", "sweep_to_csv",
]
