"""
Tailless backtrackless closed (TBC) walks in a protograph.

A walk is a cyclic sequence of steps ``(edge_id, sign)`` where ``sign`` is
+1 for a U->W traversal and -1 for W->U.  Two walks are the same class when
they differ by a rotation or a reversal.  The *rooted* count of length ``c``
is the number of step sequences whose first step is a U->W traversal; a
class of repetition ``r`` (a length-``c/r`` walk repeated ``r`` times) has
``c/r`` rooted sequences, so ``rooted / c`` weighs periodic classes by
``1/r``.

Lifts: a class whose shift sum is zero mod ``N`` and that has no proper
closed sub-segment of zero shift lifts to ``N/r`` distinct cycles of a
cyclic ``N``-lift.  Zero-permutation (ZP) walks cross every edge equally
often in both directions, so their shift is zero for every exponent matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np
from numba import njit

from .graph import INF, ExponentMatrix, Protograph

DEFAULT_ENUMERATION_CAP = 10_000_000

T1, T2, T3 = 0, 1, 2
NON_PRIME_ZP_NOTE = (
    "ZP walks that contain a ZP TBC subwalk are counted in T2; "
    "subwalks are contiguous cyclic segments"
)


class EnumerationCapError(RuntimeError):
    """The rooted walk count exceeds the configured enumeration cap."""


def _check_c(c: int) -> None:
    if c < 4 or c % 2:
        raise ValueError(f"walk length must be even and at least 4, got {c}")


# ---------------------------------------------------------------------------
# walk types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TbcWalk:
    base: Protograph = field(repr=False, compare=False)
    steps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        steps = tuple((int(e), int(s)) for e, s in self.steps)
        object.__setattr__(self, "steps", steps)
        c = len(steps)
        if c < 2 or c % 2:
            raise ValueError("a TBC walk has positive even length")
        for i, (e, s) in enumerate(steps):
            if not 0 <= e < self.base.num_edges:
                raise ValueError(f"edge id {e} not in base")
            if s not in (1, -1):
                raise ValueError("step signs must be +1 or -1")
            nxt_e, nxt_s = steps[(i + 1) % c]
            if nxt_e == e:
                what = "tail" if i == c - 1 else "backtrack"
                raise ValueError(f"{what} at step {i}: edge {e} repeated")
            if nxt_s == s:
                raise ValueError("orientations must alternate")
            if self._end(i) != self._start((i + 1) % c):
                raise ValueError(f"steps {i} and {(i + 1) % c} do not share a node")

    def _start(self, i: int) -> int:
        e, s = self.steps[i]
        u, w = self.base.edges[e]
        return u if s == 1 else self.base.n_u + w

    def _end(self, i: int) -> int:
        e, s = self.steps[i]
        u, w = self.base.edges[e]
        return self.base.n_u + w if s == 1 else u

    @classmethod
    def from_nodes(cls, base: Protograph, nodes: Sequence[int]) -> TbcWalk:
        """Walk through global node ids; a repeated closing node is dropped."""
        nodes = list(nodes)
        if len(nodes) > 1 and nodes[0] == nodes[-1]:
            nodes.pop()
        steps = []
        for i, a in enumerate(nodes):
            b = nodes[(i + 1) % len(nodes)]
            if a < base.n_u <= b:
                key, sign = (a, b - base.n_u), 1
            elif b < base.n_u <= a:
                key, sign = (b, a - base.n_u), -1
            else:
                raise ValueError(f"nodes {a} and {b} are in the same part")
            if key not in base.edge_index:
                raise ValueError(f"no base edge between nodes {a} and {b}")
            steps.append((base.edge_index[key], sign))
        return cls(base, tuple(steps))

    @classmethod
    def from_rooted_edges(cls, base: Protograph, edges: Sequence[int]) -> TbcWalk:
        """Edge ids of a walk whose first step is a U->W traversal."""
        return cls(base, tuple((int(e), 1 if i % 2 == 0 else -1) for i, e in enumerate(edges)))

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def edge_sequence(self) -> tuple[tuple[int, int], ...]:
        return self.steps

    @cached_property
    def nodes(self) -> tuple[int, ...]:
        """Global id of the node each step leaves from."""
        return tuple(self._start(i) for i in range(self.length))

    @cached_property
    def canonical_key(self) -> tuple[tuple[int, int], ...]:
        """Minimum over all rotations of the walk and its reversal; orientation 0 is U->W."""
        fwd = [(e, 0 if s == 1 else 1) for e, s in self.steps]
        rev = [(e, 1 - o) for e, o in reversed(fwd)]
        c = self.length
        return min(tuple(seq[t:] + seq[:t]) for seq in (fwd, rev) for t in range(c))

    @cached_property
    def repetition(self) -> int:
        c = self.length
        for p in range(2, c + 1, 2):
            if c % p == 0 and all(self.steps[i] == self.steps[(i + p) % c] for i in range(c)):
                return c // p
        return 1

    def rooted_edges(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.canonical_key)

    def node_labels(self, one_based: bool = True) -> list[int]:
        off = 1 if one_based else 0
        nodes = [x + off for x in self.nodes]
        return nodes + nodes[:1]


@dataclass(frozen=True)
class ShiftSignature:
    net_multiplicity: dict[int, int]
    degree: int
    weight: int
    multiplicity_classes: dict[int, frozenset[int]]


@dataclass(frozen=True)
class WalkPartition:
    c: int
    rooted: int
    classes: int
    T1: int
    T2: int
    T3: int
    weighted: tuple[Fraction, Fraction, Fraction]
    prime_zp: tuple[TbcWalk, ...] | None = None
    note: str = NON_PRIME_ZP_NOTE

    @property
    def T(self) -> Fraction:
        return Fraction(self.rooted, self.c)

    def as_dict(self) -> dict:
        out = {
            "c": self.c,
            "rooted": self.rooted,
            "T": f"{self.T.numerator}/{self.T.denominator}",
            "classes": self.classes,
            "T1": self.T1,
            "T2": self.T2,
            "T3": self.T3,
            "note": self.note,
        }
        if self.prime_zp is not None:
            out["prime_zp"] = [w.node_labels(one_based=False) for w in self.prime_zp]
        return out


# ---------------------------------------------------------------------------
# single-walk operations
# ---------------------------------------------------------------------------

def shift_signature(w: TbcWalk) -> ShiftSignature:
    net: dict[int, int] = {}
    for e, s in w.steps:
        net[e] = net.get(e, 0) + s
    classes: dict[int, set[int]] = {}
    for e, v in net.items():
        if v:
            classes.setdefault(abs(v), set()).add(e)
    return ShiftSignature(
        net_multiplicity=net,
        degree=max((abs(v) for v in net.values()), default=0),
        weight=len(classes),
        multiplicity_classes={k: frozenset(v) for k, v in sorted(classes.items())},
    )


def is_zp(w: TbcWalk) -> bool:
    return shift_signature(w).weight == 0


def _closed_segments(w: TbcWalk):
    """Proper cyclic sub-segments ``(start, length)`` that are themselves TBC walks."""
    c = w.length
    nodes = w.nodes
    for s in range(c):
        for length in range(4, c, 2):
            end = (s + length) % c
            if nodes[s] == nodes[end] and w.steps[s][0] != w.steps[(end - 1) % c][0]:
                yield s, length


def _has_zero_subwalk(w: TbcWalk, value) -> bool:
    c = w.length
    return any(
        value([w.steps[(s + i) % c] for i in range(length)]) == 0
        for s, length in _closed_segments(w)
    )


def _net_weight(steps) -> int:
    net: dict[int, int] = {}
    for e, s in steps:
        net[e] = net.get(e, 0) + s
    return sum(1 for v in net.values() if v)


def is_prime_zp(w: TbcWalk) -> bool:
    """ZP walk without a ZP TBC walk among its proper closed cyclic segments."""
    return is_zp(w) and not _has_zero_subwalk(w, _net_weight)


def walk_shift_value(w: TbcWalk, P: ExponentMatrix) -> int:
    """Signed shift sum along ``w`` (+p for U->W, -p for W->U) reduced mod ``N``."""
    return _shift_sum(w.steps, w.base, P) % P.N


def _shift_sum(steps, base: Protograph, P: ExponentMatrix) -> int:
    total = 0
    for e, s in steps:
        u, wn = base.edges[e]
        p = P.rows[wn][u]
        if p == INF:
            raise RuntimeError(f"walk edge {e} has an INF exponent entry")
        total += s * p
    return total


def has_zero_shift_subwalk(w: TbcWalk, P: ExponentMatrix) -> bool:
    return _has_zero_subwalk(w, lambda steps: _shift_sum(steps, w.base, P) % P.N)


# ---------------------------------------------------------------------------
# rooted counting
# ---------------------------------------------------------------------------

def rooted_tbc_count(base: Protograph, c: int) -> int:
    """
    Number of TBC step sequences of length ``c`` starting with a U->W step.

    Dynamic programming over ``(current node, previous edge)`` states from
    every root edge, with taillessness checked when the walk closes.
    """
    _check_c(c)
    u_inc, w_inc = _incidence_lists(base)
    total = 0
    for e0, (u0, w0) in enumerate(base.edges):
        # state: previous edge id -> number of walks; parity tells the side
        states = {e0: 1}
        for step in range(1, c):
            nxt: dict[int, int] = {}
            at_w = step % 2 == 1
            for prev, cnt in states.items():
                u, w = base.edges[prev]
                for f in (w_inc[w] if at_w else u_inc[u]):
                    if f != prev:
                        nxt[f] = nxt.get(f, 0) + cnt
            states = nxt
        total += sum(cnt for f, cnt in states.items() if f != e0 and base.edges[f][0] == u0)
    return total


def tbc_count(base: Protograph, c: int) -> Fraction:
    return Fraction(rooted_tbc_count(base, c), c)


def _incidence_lists(base: Protograph) -> tuple[list[list[int]], list[list[int]]]:
    u_inc: list[list[int]] = [[] for _ in range(base.n_u)]
    w_inc: list[list[int]] = [[] for _ in range(base.n_w)]
    for e, (u, w) in enumerate(base.edges):
        u_inc[u].append(e)
        w_inc[w].append(e)
    return u_inc, w_inc


# ---------------------------------------------------------------------------
# class enumeration kernel
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _classify(seq, c, eu, ew, shifts, N, net, loc, zloc):
    """Returns ``(zp, has_zp_sub, lifts)`` for the rooted sequence ``seq``."""
    for j in range(c):
        net[seq[j]] += 1 if j % 2 == 0 else -1
    zp = True
    for j in range(c):
        if net[seq[j]] != 0:
            zp = False
    for j in range(c):
        net[seq[j]] = 0

    total = 0
    if N > 0:
        for j in range(c):
            total += shifts[seq[j]] if j % 2 == 0 else -shifts[seq[j]]
    lifts = N > 0 and total % N == 0

    has_zp_sub = False
    has_zero_sub = False
    for s in range(c):
        nz = 0
        acc = 0
        for length in range(1, c):
            j = (s + length - 1) % c
            e = seq[j]
            sign = 1 if j % 2 == 0 else -1
            before = loc[e]
            loc[e] = before + sign
            if before == 0:
                nz += 1
            elif loc[e] == 0:
                nz -= 1
            if N > 0:
                acc += sign * shifts[e]
            if length >= 4 and length % 2 == 0:
                end = (s + length) % c
                same = eu[seq[s]] == eu[seq[end]] if s % 2 == 0 else ew[seq[s]] == ew[seq[end]]
                if same and seq[s] != e:
                    if nz == 0:
                        has_zp_sub = True
                    if N > 0 and acc % N == 0:
                        has_zero_sub = True
        for length in range(1, c):
            loc[seq[(s + length - 1) % c]] = 0
        if has_zp_sub and (N == 0 or has_zero_sub):
            break
    return zp, has_zp_sub, lifts and not has_zero_sub


@njit(cache=True, nogil=True)
def _scan_classes(eu, ew, u_ptr, u_edges, w_ptr, w_edges, c, shifts, N, store_mode, buf):
    """
    Enumerate canonical TBC classes of length ``c``.

    Returns ``(stats, lift_hist, n_stored)`` where ``stats[k, r]`` counts
    classes of partition ``k`` (T1, T2, T3) with repetition ``r`` and
    ``lift_hist[r]`` counts classes that lift to cycles under ``shifts``.
    ``store_mode`` 1 stores every class, 2 only prime ZP classes.
    """
    E = eu.size
    stats = np.zeros((3, c + 1), np.int64)
    lift_hist = np.zeros(c + 1, np.int64)
    n_stored = 0
    seq = np.empty(c, np.int64)
    cursor = np.empty(c, np.int64)
    net = np.zeros(E, np.int64)
    loc = np.zeros(E, np.int64)
    zloc = np.zeros(E, np.int64)
    for e0 in range(E):
        u0 = eu[e0]
        seq[0] = e0
        i = 1
        cursor[1] = w_ptr[ew[e0]]
        while i >= 1:
            if i % 2 == 1:
                node = ew[seq[i - 1]]
                stop = w_ptr[node + 1]
            else:
                node = eu[seq[i - 1]]
                stop = u_ptr[node + 1]
            if cursor[i] >= stop:
                i -= 1
                continue
            f = w_edges[cursor[i]] if i % 2 == 1 else u_edges[cursor[i]]
            cursor[i] += 1
            # a canonical representative starts with its smallest edge id
            if f == seq[i - 1] or f < e0:
                continue
            seq[i] = f
            if i < c - 1:
                i += 1
                cursor[i] = u_ptr[eu[f]] if i % 2 == 0 else w_ptr[ew[f]]
                continue
            if eu[f] != u0 or f == e0:
                continue

            # canonical: no even rotation of seq or its reversal is smaller
            canonical = True
            for rev in range(2):
                for t in range(0, c, 2):
                    if rev == 0 and t == 0:
                        continue
                    for j in range(c):
                        if rev == 0:
                            a = seq[(j + t) % c]
                        else:
                            a = seq[(c - 1 - j - t) % c]
                        if a != seq[j]:
                            if a < seq[j]:
                                canonical = False
                            break
                    if not canonical:
                        break
                if not canonical:
                    break
            if not canonical:
                continue

            rep = 1
            for p in range(2, c + 1, 2):
                if c % p == 0:
                    periodic = True
                    for j in range(c):
                        if seq[j] != seq[(j + p) % c]:
                            periodic = False
                            break
                    if periodic:
                        rep = c // p
                        break

            zp, has_zp_sub, lifts = _classify(seq, c, eu, ew, shifts, N, net, loc, zloc)
            if has_zp_sub:
                part = 1
            elif zp:
                part = 0
            else:
                part = 2
            stats[part, rep] += 1
            if lifts:
                lift_hist[rep] += 1
            if (store_mode == 1 or (store_mode == 2 and part == 0)) and n_stored < buf.shape[0]:
                for j in range(c):
                    buf[n_stored, j] = seq[j]
                n_stored += 1
    return stats, lift_hist, n_stored


def _kernel_inputs(base: Protograph):
    arr = base.edge_array
    eu = arr[:, 0].copy()
    ew = arr[:, 1].copy()
    u_inc, w_inc = _incidence_lists(base)

    def csr(lists):
        ptr = np.zeros(len(lists) + 1, np.int64)
        np.cumsum([len(x) for x in lists], out=ptr[1:])
        flat = np.array([e for x in lists for e in x], dtype=np.int64)
        return ptr, flat

    u_ptr, u_edges = csr(u_inc)
    w_ptr, w_edges = csr(w_inc)
    return eu, ew, u_ptr, u_edges, w_ptr, w_edges


def _check_cap(base: Protograph, c: int, cap: int) -> int:
    rooted = rooted_tbc_count(base, c)
    if rooted > cap:
        raise EnumerationCapError(
            f"{rooted} rooted TBC walks of length {c} exceed the enumeration cap {cap}"
        )
    return rooted


def _scan(base: Protograph, c: int, shifts=None, N: int = 0, store_mode: int = 0):
    inputs = _kernel_inputs(base)
    sh = np.zeros(base.num_edges, np.int64) if shifts is None else np.asarray(shifts, np.int64)
    empty = np.zeros((0, c), np.int64)
    stats, lift_hist, _ = _scan_classes(*inputs, c, sh, N, 0, empty)
    if store_mode == 0:
        return stats, lift_hist, empty
    size = int(stats.sum()) if store_mode == 1 else int(stats[0].sum())
    buf = np.zeros((size, c), np.int64)
    _, _, n = _scan_classes(*inputs, c, sh, N, store_mode, buf)
    return stats, lift_hist, buf[:n]


def enumerate_tbc_classes(
    base: Protograph, c: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[TbcWalk]:
    """One canonical representative (rooted at a U->W step) per class."""
    _check_c(c)
    _check_cap(base, c, cap)
    _, _, buf = _scan(base, c, store_mode=1)
    return [TbcWalk.from_rooted_edges(base, row.tolist()) for row in buf]


@lru_cache(maxsize=256)
def _partition_cached(base: Protograph, c: int, cap: int, list_prime_zp: bool) -> WalkPartition:
    rooted = _check_cap(base, c, cap)
    stats, _, buf = _scan(base, c, store_mode=2 if list_prime_zp else 0)
    weighted = tuple(
        sum((Fraction(int(stats[k, r]), r) for r in range(1, c + 1) if stats[k, r]), Fraction(0))
        for k in range(3)
    )
    if sum(weighted) != Fraction(rooted, c):
        raise AssertionError("class enumeration disagrees with the rooted walk count")
    prime = None
    if list_prime_zp:
        prime = tuple(TbcWalk.from_rooted_edges(base, row.tolist()) for row in buf)
    return WalkPartition(
        c=c,
        rooted=rooted,
        classes=int(stats.sum()),
        T1=int(stats[0].sum()),
        T2=int(stats[1].sum()),
        T3=int(stats[2].sum()),
        weighted=weighted,
        prime_zp=prime,
    )


def partition_walks(
    base: Protograph, c: int, cap: int = DEFAULT_ENUMERATION_CAP, list_prime_zp: bool = False
) -> WalkPartition:
    """
    Split the classes of length ``c`` into T1 (prime ZP), T2 (containing a
    ZP TBC subwalk, which includes non-prime ZP walks) and T3 (the rest).
    """
    _check_c(c)
    return _partition_cached(base, c, cap, list_prime_zp)


def lifted_cycle_count(
    base: Protograph, P: ExponentMatrix, c: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> int:
    """
    Number of ``c``-cycles in the cyclic lift defined by ``P``, from the walks
    of the base alone: ``N * sum over lifting classes of 1/r``.
    """
    _check_c(c)
    _check_cap(base, c, cap)
    shifts = P.edge_shifts(base)
    _, lift_hist, _ = _scan(base, c, shifts=shifts, N=P.N)
    total = sum(Fraction(P.N * int(lift_hist[r]), r) for r in range(1, c + 1))
    if total.denominator != 1:
        raise AssertionError(f"non-integral lifted cycle count {total}")
    return int(total)
