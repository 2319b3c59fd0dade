"""
Exact cycle counts in bipartite (multi)graphs.

``count_cycles`` runs a depth-first search for closed paths.  A cycle is
reported only from its smallest node (the root) and only in the direction
whose second node is smaller than its last node, so each cycle is counted
once.  Branches are cut when they reach a node below the root or a node
whose distance back to the root, inside the nodes above the root, exceeds
the remaining length budget.

``brute_force_census`` is a deliberately naive, pure-Python oracle for
small graphs.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from math import comb

import numpy as np
from numba import njit

from .graph import BipartiteMultigraph

BRUTE_FORCE_MAX_NODES = 24
DEBUG_LISTING_CAP = 10_000


@dataclass(frozen=True)
class CycleCensus:
    """Cycle counts ``N_c`` for every even ``4 <= c <= max_length``."""

    max_length: int
    counts: dict[int, int]
    chordless_counts: dict[int, int] | None = None
    two_cycle_count: int = 0

    def __post_init__(self):
        expected = set(range(4, self.max_length + 1, 2))
        if set(self.counts) != expected:
            raise ValueError("counts must cover every even length in [4, max_length]")
        if self.chordless_counts is not None:
            if set(self.chordless_counts) != expected:
                raise ValueError("chordless counts must use the same lengths as counts")
            if any(self.chordless_counts[c] > self.counts[c] for c in expected):
                raise ValueError("chordless count exceeds total count")

    def girth(self) -> int | None:
        """Shortest counted length, or ``None`` if no cycle up to ``max_length``."""
        if self.two_cycle_count:
            return 2
        return next((c for c in sorted(self.counts) if self.counts[c]), None)

    def as_rows(self, chordless: bool = False) -> list[dict]:
        src = self.chordless_counts if chordless else self.counts
        if src is None:
            raise ValueError("census has no chordless counts")
        return [{"c": c, "count": src[c]} for c in sorted(src)]


def _check_length(max_length: int) -> None:
    if max_length < 4 or max_length % 2:
        raise ValueError(f"max_length must be even and at least 4, got {max_length}")


@njit(cache=True, nogil=True)
def _dfs_census(indptr, nbr, mult, max_len, chordless, list_cap):
    n = indptr.size - 1
    counts = np.zeros(max_len + 1, np.int64)
    ccounts = np.zeros(max_len + 1, np.int64)
    listing = np.full((list_cap, max_len), -1, np.int64)
    n_listed = 0
    far = max_len + 1
    dist = np.full(n, far, np.int64)
    pos = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    path = np.empty(max_len + 1, np.int64)
    weight = np.empty(max_len + 1, np.int64)
    cursor = np.empty(max_len + 1, np.int64)
    half = max_len // 2
    for r in range(n):
        # distances to r inside nodes >= r, up to half the length budget
        head = 0
        tail = 1
        queue[0] = r
        dist[r] = 0
        while head < tail:
            x = queue[head]
            head += 1
            if dist[x] >= half:
                continue
            for k in range(indptr[x], indptr[x + 1]):
                y = nbr[k]
                if y > r and dist[y] == far:
                    dist[y] = dist[x] + 1
                    queue[tail] = y
                    tail += 1

        path[0] = r
        pos[r] = 0
        weight[0] = 1
        cursor[0] = indptr[r]
        d = 0
        while d >= 0:
            x = path[d]
            if cursor[d] < indptr[x + 1]:
                k = cursor[d]
                cursor[d] += 1
                y = nbr[k]
                if y == r:
                    if d >= 3 and path[1] < path[d]:
                        length = d + 1
                        counts[length] += weight[d] * mult[k]
                        if chordless and weight[d] * mult[k] == 1:
                            clean = True
                            for i in range(length):
                                a = path[i]
                                prev = path[i - 1] if i > 0 else path[length - 1]
                                nxt = path[i + 1] if i + 1 < length else path[0]
                                for t in range(indptr[a], indptr[a + 1]):
                                    b = nbr[t]
                                    if pos[b] >= 0 and b != prev and b != nxt:
                                        clean = False
                                        break
                                if not clean:
                                    break
                            if clean:
                                ccounts[length] += 1
                        if n_listed < list_cap:
                            for i in range(length):
                                listing[n_listed, i] = path[i]
                            n_listed += 1
                elif y > r and pos[y] < 0 and d + 1 < max_len and dist[y] <= max_len - d - 1:
                    d += 1
                    path[d] = y
                    pos[y] = d
                    weight[d] = weight[d - 1] * mult[k]
                    cursor[d] = indptr[y]
            else:
                pos[x] = -1
                d -= 1
        for i in range(tail):
            dist[queue[i]] = far
    return counts, ccounts, listing[:n_listed]


def _run(g: BipartiteMultigraph, max_length: int, chordless: bool, list_cap: int = 0):
    indptr, nbr, mult = g.simple_adjacency
    return _dfs_census(indptr, nbr, mult, max_length, chordless, list_cap)


def census_any(g: BipartiteMultigraph, max_length: int, chordless: bool = False) -> CycleCensus:
    """
    Census that also accepts multigraphs.

    A cycle of length >= 4 through node pairs joined by several parallel
    edges is counted once per choice of edges; a cycle using such a pair is
    never chordless.
    """
    _check_length(max_length)
    counts, ccounts, _ = _run(g, max_length, chordless)
    lengths = range(4, max_length + 1, 2)
    return CycleCensus(
        max_length=max_length,
        counts={c: int(counts[c]) for c in lengths},
        chordless_counts={c: int(ccounts[c]) for c in lengths} if chordless else None,
        two_cycle_count=multigraph_two_cycles(g),
    )


def count_cycles(g: BipartiteMultigraph, max_length: int, chordless: bool = False) -> CycleCensus:
    """Exact ``N_c`` for every even ``c <= max_length`` of a simple graph."""
    _check_length(max_length)
    if not g.simple_flag:
        raise ValueError("count_cycles needs a simple graph; use multigraph_two_cycles or brute_force_census")
    return census_any(g, max_length, chordless)


def count_chordless_cycles(g: BipartiteMultigraph, max_length: int) -> dict[int, int]:
    return count_cycles(g, max_length, chordless=True).chordless_counts


def list_cycles(
    g: BipartiteMultigraph, max_length: int, limit: int = DEBUG_LISTING_CAP
) -> list[tuple[int, ...]]:
    """
    Debug listing of at most ``limit`` cycles as global node-id tuples.

    The order and exact selection are not part of any stable contract.
    """
    _check_length(max_length)
    if not g.simple_flag:
        raise ValueError("list_cycles needs a simple graph")
    limit = min(limit, DEBUG_LISTING_CAP)
    _, _, listing = _run(g, max_length, False, limit)
    return [tuple(int(x) for x in row if x >= 0) for row in listing]


def multigraph_two_cycles(g: BipartiteMultigraph) -> int:
    """Unordered pairs of parallel edges: sum of C(multiplicity, 2)."""
    return sum(comb(m, 2) for m in g.multiplicities.values())


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

def brute_force_census(g: BipartiteMultigraph, max_length: int) -> CycleCensus:
    """
    Exhaustive census for graphs with at most 24 nodes.

    All cycles: every closed sequence of distinct nodes is generated from
    every start and in both directions, weighted by the product of edge
    multiplicities, and the total divided by ``2c``.  Chordless cycles: the
    distinct node sets hosting a cycle whose induced subgraph has exactly as
    many edges as nodes.
    """
    _check_length(max_length)
    n = g.num_nodes
    if n > BRUTE_FORCE_MAX_NODES:
        raise ValueError(f"brute force is limited to {BRUTE_FORCE_MAX_NODES} nodes, graph has {n}")
    mult: dict[tuple[int, int], int] = Counter()
    for u, w in g.edges:
        a, b = u, g.n_u + w
        mult[(a, b)] += 1
        mult[(b, a)] += 1
    adj = {v: sorted({b for (a, b) in mult if a == v}) for v in range(n)}

    sequences = Counter()
    host_sets: set[frozenset[int]] = set()

    def extend(seq, wt):
        last = seq[-1]
        for nxt in adj[last]:
            if nxt == seq[0] and len(seq) >= 4:
                sequences[len(seq)] += wt * mult[(last, nxt)]
                host_sets.add(frozenset(seq))
            elif nxt not in seq and len(seq) < max_length:
                extend(seq + (nxt,), wt * mult[(last, nxt)])

    for start in range(n):
        extend((start,), 1)

    counts = {}
    for c in range(4, max_length + 1, 2):
        total = sequences[c]
        if total % (2 * c):
            raise AssertionError(f"closed sequences of length {c} not divisible by {2 * c}")
        counts[c] = total // (2 * c)

    chordless = {c: 0 for c in range(4, max_length + 1, 2)}
    for s in host_sets:
        induced = sum(mult[(a, b)] for a, b in itertools.permutations(s, 2)) // 2
        if induced == len(s):
            chordless[len(s)] += 1
    return CycleCensus(
        max_length=max_length,
        counts=counts,
        chordless_counts=chordless,
        two_cycle_count=multigraph_two_cycles(g),
    )
