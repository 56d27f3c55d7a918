"""
coprimatch: coprime matchings of integer intervals

A Python package for constructing coprime matchings between intervals,
certifying their absence with Hall witnesses, and checking the counting
estimates that surround them.

Features:
- Sieve-backed arithmetic (omega, phi, odd squarefree parts) in exact rationals
- Hopcroft-Karp matching, Koenig covers and Hall witnesses on bitset graphs
- Parity-split coprime matchings with fallbacks and minimum-defect bijections
- Exact lemma checks, the Jacobsthal function and lonely runner verdicts
- Deterministic interval-pair scans with CSV/JSON output
"""

from coprimatch.errors import (
    CapacityError,
    CoprimatchError,
    DomainError,
    InconsistencyError,
    SieveRangeError,
)
from coprimatch.config import OutputFormat, RunConfig, SieveSettings
from coprimatch.number_theory import (
    FactorSieve,
    Factorization,
    build_sieve,
    check_omega_bound,
    check_phi_log_bound,
    f_value,
    odd_squarefree_part,
    omega,
    phi,
    phi_ratio,
    radical,
    shared_sieve,
    sweep_omega_bound,
    sweep_phi_log_bound,
    two_coprime,
)
from coprimatch.intervals import Progression
from coprimatch.matching import (
    BipartiteGraph,
    MatchingResult,
    PropositionVerdict,
    Relation,
    build_graph,
    hall_witness,
    max_cross_independent,
    max_matching,
    min_vertex_cover,
    verify_proposition,
)
from coprimatch.coprime_matcher import (
    CoprimeMatching,
    FailureCertificate,
    MatchMethod,
    detect_blockers,
    find_coprime_matching,
    match_even_length,
    match_odd_opposite,
    near_coprime_match,
)
from coprimatch.lemma_lab import (
    LemmaReport,
    coprime_count_lower_bound,
    final_count_check,
    iwaniec_progression_probe,
    iwaniec_window_probe,
    jbound_probe,
    partner_count_check,
    phi_ratio_sum,
    phi_tail_count,
    single_prime_exclusion_check,
    slogmlarge_count,
    smlarge_count,
    zeta_constant_check,
)
from coprimatch.jacobsthal import (
    GapWitness,
    erdos_witness_search,
    jacobsthal_g,
    longest_noncoprime_run,
    primorials,
)
from coprimatch.lonely_runner import (
    RunnerInstance,
    RunnerVerdict,
    bp_regime_scan,
    certified_grid_check,
    check_lonely,
)
from coprimatch.scan import IntervalScanPipeline, ScanConfig, ScanResult
from coprimatch.api import match_intervals, lonely_runner, scan_rows_to_dataframe, export_scan

__version__ = "0.1.0"

__all__ = [
    # Errors
    "CoprimatchError",
    "CapacityError",
    "DomainError",
    "InconsistencyError",
    "SieveRangeError",
    # Configuration
    "OutputFormat",
    "RunConfig",
    "SieveSettings",
    # Number theory
    "FactorSieve",
    "Factorization",
    "build_sieve",
    "shared_sieve",
    "omega",
    "phi",
    "phi_ratio",
    "radical",
    "odd_squarefree_part",
    "f_value",
    "two_coprime",
    "check_omega_bound",
    "check_phi_log_bound",
    "sweep_omega_bound",
    "sweep_phi_log_bound",
    # Intervals and matching
    "Progression",
    "BipartiteGraph",
    "MatchingResult",
    "PropositionVerdict",
    "Relation",
    "build_graph",
    "max_matching",
    "min_vertex_cover",
    "max_cross_independent",
    "hall_witness",
    "verify_proposition",
    # Coprime matchings
    "CoprimeMatching",
    "FailureCertificate",
    "MatchMethod",
    "detect_blockers",
    "find_coprime_matching",
    "match_even_length",
    "match_odd_opposite",
    "near_coprime_match",
    # Lemma checks
    "LemmaReport",
    "smlarge_count",
    "slogmlarge_count",
    "phi_ratio_sum",
    "phi_tail_count",
    "zeta_constant_check",
    "coprime_count_lower_bound",
    "single_prime_exclusion_check",
    "jbound_probe",
    "partner_count_check",
    "iwaniec_window_probe",
    "iwaniec_progression_probe",
    "final_count_check",
    # Jacobsthal
    "GapWitness",
    "jacobsthal_g",
    "longest_noncoprime_run",
    "erdos_witness_search",
    "primorials",
    # Lonely runner
    "RunnerInstance",
    "RunnerVerdict",
    "check_lonely",
    "certified_grid_check",
    "bp_regime_scan",
    # Scans and API
    "IntervalScanPipeline",
    "ScanConfig",
    "ScanResult",
    "match_intervals",
    "lonely_runner",
    "scan_rows_to_dataframe",
    "export_scan",
]
