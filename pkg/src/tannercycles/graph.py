"""
Bipartite Tanner-graph types, validation, girth and file I/O.

Nodes are indexed from 0 within each part.  Where a single node space is
needed (adjacency arrays, cycle listings) U-node ``i`` has global id ``i``
and W-node ``j`` has global id ``n_u + j``.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
from numba import njit

INF = -1
"""Exponent-matrix sentinel for "no edge" (the all-zero block)."""

MAX_PROTOGRAPH_PART = 64


@dataclass(frozen=True)
class BipartiteMultigraph:
    """
    Bipartite multigraph with parts U (``n_u`` nodes) and W (``n_w`` nodes).

    ``edges`` is a tuple of ``(u, w)`` pairs; repeated pairs are parallel
    edges.  ``simple_flag`` is computed when not given.  The constructor does
    not check index ranges so that :func:`validate` can report problems on
    hand-built instances; use :meth:`from_edges` for a checked build.
    """

    n_u: int
    n_w: int
    edges: tuple[tuple[int, int], ...]
    simple_flag: bool | None = None

    def __post_init__(self):
        edges = tuple((int(u), int(w)) for u, w in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.simple_flag is None:
            object.__setattr__(self, "simple_flag", len(set(edges)) == len(edges))

    @classmethod
    def from_edges(cls, n_u: int, n_w: int, edges: Iterable[Sequence[int]]) -> BipartiteMultigraph:
        g = cls(n_u, n_w, tuple(tuple(e) for e in edges))
        problems = validate(g)
        if problems:
            raise ValueError("; ".join(problems))
        return g

    @classmethod
    def from_arrays(cls, n_u: int, n_w: int, us: np.ndarray, ws: np.ndarray) -> BipartiteMultigraph:
        return cls(n_u, n_w, tuple(zip(us.tolist(), ws.tolist())))

    @classmethod
    def complete(cls, a: int, b: int) -> BipartiteMultigraph:
        return cls(a, b, tuple((u, w) for u in range(a) for w in range(b)))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_nodes(self) -> int:
        return self.n_u + self.n_w

    @cached_property
    def u_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n_u
        for u, _ in self.edges:
            deg[u] += 1
        return tuple(deg)

    @cached_property
    def w_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n_w
        for _, w in self.edges:
            deg[w] += 1
        return tuple(deg)

    @cached_property
    def multiplicities(self) -> Counter:
        return Counter(self.edges)

    @cached_property
    def edge_array(self) -> np.ndarray:
        arr = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        arr.setflags(write=False)
        return arr

    @cached_property
    def adjacency(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR arrays ``(indptr, neighbor, edge_id)`` over global node ids."""
        n = self.num_nodes
        arr = self.edge_array
        src = np.concatenate([arr[:, 0], arr[:, 1] + self.n_u])
        dst = np.concatenate([arr[:, 1] + self.n_u, arr[:, 0]])
        eid = np.concatenate([np.arange(len(arr)), np.arange(len(arr))]).astype(np.int64)
        order = np.lexsort((eid, dst, src))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return indptr, dst[order].astype(np.int64), eid[order]

    @cached_property
    def simple_adjacency(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR of the underlying simple graph plus edge multiplicities."""
        n = self.num_nodes
        mult = self.multiplicities
        pairs = sorted(mult)
        src = [u for u, _ in pairs] + [w + self.n_u for _, w in pairs]
        dst = [w + self.n_u for _, w in pairs] + [u for u, _ in pairs]
        wt = [mult[p] for p in pairs] * 2
        src_a = np.array(src, dtype=np.int64)
        dst_a = np.array(dst, dtype=np.int64)
        wt_a = np.array(wt, dtype=np.int64)
        order = np.lexsort((dst_a, src_a))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src_a, minlength=n), out=indptr[1:])
        return indptr, dst_a[order], wt_a[order]

    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    def same_graph(self, other: BipartiteMultigraph) -> bool:
        """Equality up to edge ordering."""
        return (
            self.n_u == other.n_u
            and self.n_w == other.n_w
            and self.multiplicities == other.multiplicities
        )


@dataclass(frozen=True)
class DegreeSequence:
    """Per-part node degrees of a configuration-model ensemble."""

    u_degrees: tuple[int, ...]
    w_degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "u_degrees", tuple(int(d) for d in self.u_degrees))
        object.__setattr__(self, "w_degrees", tuple(int(d) for d in self.w_degrees))
        if any(d < 1 for d in self.u_degrees + self.w_degrees):
            raise ValueError("degrees must be positive integers")

    @classmethod
    def biregular(cls, n: int, d_u: int, d_w: int) -> DegreeSequence:
        if (n * d_u) % d_w:
            raise ValueError(f"n*d_u = {n * d_u} is not divisible by d_w = {d_w}")
        return cls((d_u,) * n, (d_w,) * (n * d_u // d_w))

    @property
    def eta(self) -> int:
        if not self.is_balanced:
            raise ValueError(
                f"degree sums differ: {sum(self.u_degrees)} != {sum(self.w_degrees)}"
            )
        return sum(self.u_degrees)

    @property
    def is_balanced(self) -> bool:
        return sum(self.u_degrees) == sum(self.w_degrees)

    @property
    def min_degree(self) -> int:
        return min(self.u_degrees + self.w_degrees)


@dataclass(frozen=True)
class EdgeDistribution:
    """
    Edge-perspective degree distribution.

    ``lam[d]`` (``rho[d]``) is the fraction of edges attached to U (W) nodes
    of degree ``d``.  Note the polynomial convention ``lambda(x) = sum
    lam_i x^(i-1)``: a term ``0.4286 x^2`` means ``lam[3] = 0.4286``.
    """

    lam: Mapping[int, float]
    rho: Mapping[int, float]

    def __post_init__(self):
        for name, dist in (("lam", self.lam), ("rho", self.rho)):
            if not dist or any(d < 1 or f < 0 for d, f in dist.items()):
                raise ValueError(f"{name} must map positive degrees to non-negative fractions")
        object.__setattr__(self, "lam", {int(d): float(f) for d, f in self.lam.items() if f > 0})
        object.__setattr__(self, "rho", {int(d): float(f) for d, f in self.rho.items() if f > 0})

    @classmethod
    def from_polynomials(cls, lam_coeffs: Sequence[float], rho_coeffs: Sequence[float]) -> EdgeDistribution:
        """Coefficient lists indexed by power of x (index i -> degree i+1)."""
        return cls(
            {i + 1: c for i, c in enumerate(lam_coeffs) if c},
            {i + 1: c for i, c in enumerate(rho_coeffs) if c},
        )

    def node_fractions(self, side: str) -> dict[int, float]:
        dist = self.lam if side == "u" else self.rho
        inv = {d: f / d for d, f in dist.items()}
        total = sum(inv.values())
        return {d: v / total for d, v in inv.items()}

    def realize(self, n: int) -> tuple[DegreeSequence, list[str]]:
        """
        Integer degree sequence with ``n`` U-nodes.

        Node counts per degree are rounded by the largest-remainder method on
        both sides; any residual difference between the two edge totals is
        absorbed by moving single W-nodes one degree step.  Returns the
        sequence and a list of human-readable adjustment notes.
        """
        notes: list[str] = []
        u_counts = _largest_remainder(self.node_fractions("u"), n)
        u_deg = [d for d in sorted(u_counts, reverse=True) for _ in range(u_counts[d])]
        eta = sum(u_deg)
        avg_w = 1.0 / sum(f / d for d, f in self.rho.items())
        m = max(1, round(eta / avg_w))
        w_counts = _largest_remainder(self.node_fractions("w"), m)
        w_deg = [d for d in sorted(w_counts, reverse=True) for _ in range(w_counts[d])]
        slack = eta - sum(w_deg)
        # raise the lowest-degree nodes or lower the highest-degree ones
        for i in range(abs(slack)):
            if slack > 0:
                w_deg[-1 - i % len(w_deg)] += 1
            else:
                w_deg[i % len(w_deg)] -= 1
        if slack:
            notes.append(f"moved {abs(slack)} W-node degree(s) by {1 if slack > 0 else -1:+d} to balance edge totals")
        if min(w_deg) < 1:
            raise ValueError("cannot balance degree sums")
        return DegreeSequence(tuple(u_deg), tuple(sorted(w_deg, reverse=True))), notes


def _largest_remainder(fractions: Mapping[int, float], total: int) -> dict[int, int]:
    raw = {d: f * total for d, f in fractions.items()}
    counts = {d: int(math.floor(v)) for d, v in raw.items()}
    short = total - sum(counts.values())
    for d in sorted(raw, key=lambda d: (-(raw[d] - counts[d]), d))[:short]:
        counts[d] += 1
    return {d: c for d, c in counts.items() if c}


@dataclass(frozen=True)
class Protograph(BipartiteMultigraph):
    """Simple base graph; edge ids are the positions in ``edges``."""

    def __post_init__(self):
        super().__post_init__()
        problems = validate(self)
        if problems:
            raise ValueError("; ".join(problems))
        if not self.simple_flag:
            raise ValueError("protograph must not have parallel edges")
        if self.n_u > MAX_PROTOGRAPH_PART or self.n_w > MAX_PROTOGRAPH_PART:
            raise ValueError(f"protograph parts are limited to {MAX_PROTOGRAPH_PART} nodes")

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def to_json(self) -> str:
        return json.dumps({"n_u": self.n_u, "n_w": self.n_w, "edges": [list(e) for e in self.edges]})

    @classmethod
    def from_json(cls, text: str) -> Protograph:
        data = json.loads(text)
        try:
            return cls(int(data["n_u"]), int(data["n_w"]), tuple(tuple(e) for e in data["edges"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed protograph JSON: {exc}") from None


@dataclass(frozen=True)
class ExponentMatrix:
    """Cyclic-lift shifts: ``rows[w][u]`` in ``[0, N)`` or :data:`INF`."""

    N: int
    rows: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if self.N < 1:
            raise ValueError("lifting degree N must be positive")
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError("exponent matrix rows have different lengths")
        for r in rows:
            for x in r:
                if x != INF and not 0 <= x < self.N:
                    raise ValueError(f"exponent entry {x} outside [0, {self.N})")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def shift(self, u: int, w: int) -> int:
        return self.rows[w][u]

    def edge_shifts(self, base: Protograph) -> list[int]:
        """Shift per base edge id; raises if the matrix disagrees with ``base``."""
        check_exponent_matrix(base, self)
        return [self.rows[w][u] for u, w in base.edges]

    @classmethod
    def from_edge_shifts(cls, base: Protograph, N: int, shifts: Sequence[int]) -> ExponentMatrix:
        rows = [[INF] * base.n_u for _ in range(base.n_w)]
        for (u, w), p in zip(base.edges, shifts):
            rows[w][u] = int(p)
        return cls(N, tuple(tuple(r) for r in rows))

    def to_json(self) -> str:
        return json.dumps({"N": self.N, "rows": [list(r) for r in self.rows]})

    @classmethod
    def from_json(cls, text: str) -> ExponentMatrix:
        data = json.loads(text)
        try:
            return cls(int(data["N"]), tuple(tuple(r) for r in data["rows"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed exponent-matrix JSON: {exc}") from None


def check_exponent_matrix(base: Protograph, P: ExponentMatrix) -> None:
    if P.shape != (base.n_w, base.n_u):
        raise ValueError(f"exponent matrix shape {P.shape} does not match base ({base.n_w}, {base.n_u})")
    present = set(base.edges)
    for w, row in enumerate(P.rows):
        for u, x in enumerate(row):
            if ((u, w) in present) != (x != INF):
                raise ValueError(f"exponent entry ({w}, {u}) = {x} disagrees with base edge set")


def validate(g: BipartiteMultigraph) -> list[str]:
    """All invariant violations of ``g``; empty when the graph is well formed."""
    problems = []
    if g.n_u < 0 or g.n_w < 0:
        problems.append("negative part size")
    if any(not 0 <= u < g.n_u for u, _ in g.edges):
        problems.append("u_index out of range")
    if any(not 0 <= w < g.n_w for _, w in g.edges):
        problems.append("w_index out of range")
    has_parallel = len(set(g.edges)) != len(g.edges)
    if g.simple_flag and has_parallel:
        problems.append("parallel edge contradicts simple_flag")
    if not g.simple_flag and not has_parallel:
        problems.append("simple_flag is false but no parallel edge exists")
    return problems


# ---------------------------------------------------------------------------
# girth
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _girth_kernel(indptr, nbr, eid):
    n = indptr.size - 1
    big = np.int64(1) << 62
    best = big
    dist = np.full(n, -1, np.int64)
    pedge = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    for r in range(n):
        head = 0
        tail = 1
        queue[0] = r
        dist[r] = 0
        while head < tail:
            x = queue[head]
            head += 1
            # nothing shorter can be closed beyond this depth
            if 2 * dist[x] + 1 >= best:
                break
            for k in range(indptr[x], indptr[x + 1]):
                e = eid[k]
                if e == pedge[x]:
                    continue
                y = nbr[k]
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    pedge[y] = e
                    queue[tail] = y
                    tail += 1
                else:
                    length = dist[x] + dist[y] + 1
                    if length < best:
                        best = length
        for i in range(tail):
            dist[queue[i]] = -1
            pedge[queue[i]] = -1
    return best


def girth(g: BipartiteMultigraph) -> int | float:
    """Length of the shortest cycle; parallel edges form 2-cycles; ``math.inf`` for forests."""
    if g.num_edges == 0:
        return math.inf
    indptr, nbr, eid = g.adjacency
    best = int(_girth_kernel(indptr, nbr, eid))
    return math.inf if best >= (1 << 62) else best


# ---------------------------------------------------------------------------
# alist
# ---------------------------------------------------------------------------

class AlistParseError(ValueError):
    """Base class for malformed alist input."""


class AlistHeaderError(AlistParseError):
    pass


class AlistIndexError(AlistParseError):
    pass


class AlistDegreeError(AlistParseError):
    pass


def write_alist(g: BipartiteMultigraph) -> str:
    """
    Serialize in the sparse parity-check ``alist`` layout.

    Columns are U-nodes (variable nodes), rows are W-nodes (check nodes);
    neighbor lists are 1-based and zero-padded to the maximum degree.
    """
    u_nbrs: list[list[int]] = [[] for _ in range(g.n_u)]
    w_nbrs: list[list[int]] = [[] for _ in range(g.n_w)]
    for u, w in g.edges:
        u_nbrs[u].append(w + 1)
        w_nbrs[w].append(u + 1)
    max_u = max((len(x) for x in u_nbrs), default=0)
    max_w = max((len(x) for x in w_nbrs), default=0)

    def padded(lst, width):
        # a lone 0 keeps the line non-empty when the part has no edges
        return " ".join(str(x) for x in sorted(lst) + [0] * (max(width, 1) - len(lst)))

    lines = [
        f"{g.n_u} {g.n_w}",
        f"{max_u} {max_w}",
        " ".join(str(len(x)) for x in u_nbrs),
        " ".join(str(len(x)) for x in w_nbrs),
    ]
    lines += [padded(x, max_u) for x in u_nbrs]
    lines += [padded(x, max_w) for x in w_nbrs]
    return "\n".join(lines) + "\n"


def read_alist(text: str) -> BipartiteMultigraph:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    try:
        rows_int = [[int(tok) for tok in row] for row in rows]
    except ValueError as exc:
        raise AlistHeaderError(f"non-integer token: {exc}") from None
    if len(rows_int) < 4 or len(rows_int[0]) != 2 or len(rows_int[1]) != 2:
        raise AlistHeaderError("alist needs 'n m' and 'max_col max_row' header lines")
    n, m = rows_int[0]
    max_u, max_w = rows_int[1]
    if n < 0 or m < 0:
        raise AlistHeaderError("negative dimensions")
    u_deg, w_deg = rows_int[2], rows_int[3]
    if len(u_deg) != n or len(w_deg) != m:
        raise AlistHeaderError(f"degree lists have lengths {len(u_deg)}, {len(w_deg)}; expected {n}, {m}")
    if len(rows_int) != 4 + n + m:
        raise AlistHeaderError(f"expected {4 + n + m} non-empty lines, found {len(rows_int)}")
    if max(u_deg, default=0) != max_u or max(w_deg, default=0) != max_w:
        raise AlistDegreeError("maximum degrees do not match the degree lists")

    def neighbors(line, deg, limit, what, idx):
        if deg < 0 or len(line) < deg:
            raise AlistDegreeError(f"{what} {idx + 1}: lists {len(line)} neighbors, degree says {deg}")
        head, pad = line[:deg], line[deg:]
        if any(x != 0 for x in pad):
            raise AlistDegreeError(f"{what} {idx + 1}: more neighbors than its degree {deg}")
        for x in head:
            if not 1 <= x <= limit:
                raise AlistIndexError(f"{what} {idx + 1}: neighbor index {x} outside 1..{limit}")
        return [x - 1 for x in head]

    from_u = Counter()
    for u in range(n):
        for w in neighbors(rows_int[4 + u], u_deg[u], m, "column", u):
            from_u[(u, w)] += 1
    from_w = Counter()
    for w in range(m):
        for u in neighbors(rows_int[4 + n + w], w_deg[w], n, "row", w):
            from_w[(u, w)] += 1
    if from_u != from_w:
        raise AlistDegreeError("column and row neighbor lists describe different edge sets")
    edges = sorted(from_u.elements())
    return BipartiteMultigraph(n, m, tuple(edges))
