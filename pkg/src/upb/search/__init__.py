"""Exhaustive classification of qubit UPBs of a given size.

Step 1 enumerates size profiles that survive necessary conditions, step 2
searches each profile for actual UPB graphs, step 3 removes equivalent
copies with :mod:`upb.canon`.
"""

from .profiles import (
    ProfileConstraints,
    SizeTable,
    enumerate_profiles,
    feasible_sizes,
    guaranteed_cover,
    prune_reverse_combine,
    prune_search_reduce,
    register_search_result,
)
from .placement import search_profile
from .driver import SearchReport, full_search, read_catalog, write_catalog

__all__ = [
    "ProfileConstraints",
    "SizeTable",
    "enumerate_profiles",
    "feasible_sizes",
    "guaranteed_cover",
    "prune_reverse_combine",
    "prune_search_reduce",
    "register_search_result",
    "search_profile",
    "SearchReport",
    "full_search",
    "read_catalog",
    "write_catalog",
]
