"""Shared test oracles, deliberately simpler than the library code paths."""

from __future__ import annotations


def enumerate_mis(adj_masks: list[int]) -> int:
    """Maximum independent set size by pruned exhaustive recursion.

    Branches on the lowest-index remaining vertex with no bounding function;
    the only pruning is the domination rule (a vertex with no remaining
    neighbors is always taken), which preserves exactness.  Independent of the
    library's branch-and-bound: different branching order, no count bound.
    """
    n = len(adj_masks)

    def grow(avail: int) -> int:
        best = 0
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            if adj_masks[v] & avail & ~low == 0:
                # no remaining neighbors: taking v is never worse
                avail ^= low
                best += 1
                continue
            with_v = grow(avail & ~(adj_masks[v] | low))
            without_v = grow(avail ^ low)
            return best + max(1 + with_v, without_v)
        return best

    return grow((1 << n) - 1)
