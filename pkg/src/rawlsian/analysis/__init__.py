"""Diagnostics for random assignments."""

from .bvn import BvnDecomposition, CorollaryReport, bvn_decompose, corollary_check, support_max_rank, trading_cycle
from .efficiency import OracleDisagreement, SdEfficiencyReport, improving_cycle, sd_efficient
from .egalitarian import EgalitarianReport, egalitarian_check, egalitarian_uniform_relaxation
from .envy import EnvyReport, PairwiseComparison, compare_assignments, envy_report
from .manipulation import (
    ManipulationReport,
    SwapAxiomReport,
    obvious_manipulability_probe,
    pointwise_worst_case,
    swap_axiom_check,
)
from .rank import RankDistribution, rank_distribution, rank_dominates, rank_efficient

__all__ = [
    "BvnDecomposition",
    "CorollaryReport",
    "EgalitarianReport",
    "EnvyReport",
    "ManipulationReport",
    "OracleDisagreement",
    "PairwiseComparison",
    "RankDistribution",
    "SdEfficiencyReport",
    "SwapAxiomReport",
    "bvn_decompose",
    "compare_assignments",
    "corollary_check",
    "egalitarian_check",
    "egalitarian_uniform_relaxation",
    "envy_report",
    "improving_cycle",
    "obvious_manipulability_probe",
    "pointwise_worst_case",
    "rank_distribution",
    "rank_dominates",
    "rank_efficient",
    "sd_efficient",
    "support_max_rank",
    "swap_axiom_check",
]
