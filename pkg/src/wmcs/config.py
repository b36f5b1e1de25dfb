"""Enumeration caps. ``WMCS_MAX_ELEMENTS`` overrides the poset size cap."""
import os

DEFAULT_MAX_ELEMENTS = 64
MAX_EXHAUSTIVE_SUBLATTICE = 12
MAX_PROFILES = 10**6
MAX_STABLE_SET_CONTRACTS = 10
MAX_T_FIXPOINT_CONTRACTS = 6
MAX_AXIOM_EXHAUSTIVE = 12
MAX_DIVISIONS = 12


def max_elements() -> int:
    raw = os.environ.get("WMCS_MAX_ELEMENTS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return DEFAULT_MAX_ELEMENTS
