"""Identity verification: registry, runners, and report serialization."""

from .report import (
    CheckReport,
    FAIL,
    PASS,
    SCHEMA_VERSION,
    SKIP,
    reports_to_json,
    reports_to_text,
)
from .registry import (
    AnalyticOpts,
    IdentityCheck,
    base_env,
    build_registry,
    get_registry,
    registry_list,
)
from .runner import (
    EPS_DEFAULT,
    TAIL_DEFAULT,
    run_analytic,
    run_formal,
    run_mutations,
    run_reductions,
    run_suite,
)

__all__ = [
    "AnalyticOpts",
    "CheckReport",
    "EPS_DEFAULT",
    "FAIL",
    "IdentityCheck",
    "PASS",
    "SCHEMA_VERSION",
    "SKIP",
    "TAIL_DEFAULT",
    "base_env",
    "build_registry",
    "get_registry",
    "registry_list",
    "reports_to_json",
    "reports_to_text",
    "run_analytic",
    "run_formal",
    "run_mutations",
    "run_reductions",
    "run_suite",
]
