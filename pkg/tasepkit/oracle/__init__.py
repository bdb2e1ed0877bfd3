"""Brute-force references for the determinant formulas.

Enumerations are exact and small; every one of them raises
:class:`~tasepkit.oracle.enumerate.OracleLimitError` past its size cap.
"""

from .cycles import (
    cluster_sum,
    cluster_term,
    cycle_decomposition,
    cycle_lemma_allows,
    is_compact_cluster_cycle,
    perm_expansion_terms,
    permutation_sign,
)
from .enumerate import (
    NPath,
    OracleLimitError,
    enumerate_green,
    enumerate_measure_marginal,
    enumerate_npath,
    iter_npaths,
    npath_weight,
)

__all__ = [
    "NPath",
    "OracleLimitError",
    "enumerate_green",
    "enumerate_npath",
    "enumerate_measure_marginal",
    "iter_npaths",
    "npath_weight",
    "perm_expansion_terms",
    "permutation_sign",
    "cycle_decomposition",
    "cycle_lemma_allows",
    "is_compact_cluster_cycle",
    "cluster_term",
    "cluster_sum",
]
