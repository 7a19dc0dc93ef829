from __future__ import annotations

from hypothesis import strategies as st

from ordgames.btree import FiniteBTree
from ordgames.ordinal import Ordinal


def _make_ordinal(pairs) -> Ordinal:
    # dedupe exponents, keep the first coefficient for each, sort descending
    seen = {}
    for exponent, coefficient in pairs:
        seen.setdefault(exponent, coefficient)
    terms = sorted(seen.items(), key=lambda ec: ec[0], reverse=True)
    return Ordinal(terms)


def ordinals(height: int = 2, max_terms: int = 3, max_coeff: int = 4) -> st.SearchStrategy[Ordinal]:
    """Random CNF ordinals with nesting depth at most ``height``."""
    if height == 0:
        return st.integers(0, max_coeff).map(Ordinal)
    exponent = ordinals(height - 1, max_terms, max_coeff)
    pairs = st.lists(
        st.tuples(exponent, st.integers(1, max_coeff)), min_size=0, max_size=max_terms
    )
    return pairs.map(_make_ordinal)


small_labels = st.integers(1, 5).map(Ordinal)


def finite_btrees(max_paths: int = 6, max_len: int = 4) -> st.SearchStrategy[FiniteBTree]:
    path = st.lists(small_labels, min_size=1, max_size=max_len).map(tuple)
    return st.lists(path, min_size=0, max_size=max_paths).map(FiniteBTree.closure)
