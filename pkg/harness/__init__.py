from .report import TheoremReport, write_json_report
from .section2 import check_section_2
from .theorems import (
    check_thm_1_1,
    check_thm_1_2,
    check_thm_1_3,
    check_thm_1_4,
    check_thm_3_4,
    common_zero_residuals,
    corollary_beta_sequence,
    estimate_gap,
    verify_thm_1_1,
    verify_thm_1_2,
    verify_thm_1_3,
    verify_thm_1_4,
    verify_thm_3_4,
)
from .trials import TrialConfig, random_instance

__all__ = [
    "TheoremReport",
    "TrialConfig",
    "write_json_report",
    "random_instance",
    "estimate_gap",
    "check_thm_1_1",
    "check_thm_1_2",
    "check_thm_1_3",
    "check_thm_1_4",
    "check_thm_3_4",
    "check_section_2",
    "corollary_beta_sequence",
    "common_zero_residuals",
    "verify_thm_1_1",
    "verify_thm_1_2",
    "verify_thm_1_3",
    "verify_thm_1_4",
    "verify_thm_3_4",
]
