"""Exact Shapley values, formal explanations and relevancy for Boolean classifiers."""

from .audit import (
    IssueReport,
    RankingDiagnostics,
    all_irrelevant_dominate,
    detect_issues,
    rank_features,
    ranking_diagnostics,
    wrong_pairs,
)
from .core import (
    ArityError,
    AuditError,
    BooleanFunction,
    ConstantFunctionError,
    ExplanationProblem,
    FormatError,
    evaluate,
    feature_set,
    features_of,
    make_problem,
    parse_point,
    parse_tt,
    render_tt,
)
from .importance import ImportanceVector, axp_importance
from .scan import ScanConfig, ScanSummary, merge, scan_functions
from .shapley import ShapleyVector, phi, shapley_all, shapley_value
from .xplain import (
    ExplanationSet,
    SigmaTable,
    enumerate_axps,
    enumerate_cxps,
    explain,
    relevancy_all,
    relevant,
    sigma_build,
    waxp,
    wcxp,
)

__version__ = "0.1.0"
