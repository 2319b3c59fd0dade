"""
Seeded samplers for the random Tanner-graph ensembles.

* configuration model: uniform perfect matching of U-cells to W-cells
  (multigraph, parallel edges allowed);
* simple graphs: configuration samples conditioned on having no parallel
  edge, by rejection, which is exactly uniform over simple graphs with the
  given degrees;
* random N-lifts: an independent uniform permutation per base edge;
* random cyclic N-lifts: an independent uniform shift per base edge.

Lifted node ``v`` of copy ``i`` gets index ``v * N + i`` in its part.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numba import njit

from .graph import BipartiteMultigraph, DegreeSequence, ExponentMatrix, Protograph
from .rng import RngStream, from_kernel_state, randbelow, shuffle_inplace, to_kernel_state

DEFAULT_MAX_ATTEMPTS = 100_000


class SamplingError(RuntimeError):
    """Rejection sampling ran out of attempts."""


class EnsembleKind(enum.Enum):
    CONFIGURATION = "configuration"
    SIMPLE = "simple"
    RANDOM_LIFT = "random-lift"
    CYCLIC_LIFT = "cyclic-lift"


@dataclass(frozen=True)
class EnsembleSpec:
    kind: EnsembleKind
    degree_sequence: DegreeSequence | None = None
    protograph: Protograph | None = None
    lifting_degree: int | None = None
    max_attempts: int = DEFAULT_MAX_ATTEMPTS

    def __post_init__(self):
        lift = self.kind in (EnsembleKind.RANDOM_LIFT, EnsembleKind.CYCLIC_LIFT)
        if lift:
            if self.protograph is None or self.lifting_degree is None:
                raise ValueError(f"{self.kind.value} needs a protograph and a lifting degree")
            if self.degree_sequence is not None:
                raise ValueError(f"{self.kind.value} takes no degree sequence")
            if self.lifting_degree < 1:
                raise ValueError("lifting degree must be positive")
        else:
            if self.degree_sequence is None:
                raise ValueError(f"{self.kind.value} needs a degree sequence")
            if self.protograph is not None or self.lifting_degree is not None:
                raise ValueError(f"{self.kind.value} takes no protograph or lifting degree")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")

    def describe(self) -> dict:
        out = {"kind": self.kind.value}
        if self.degree_sequence is not None:
            seq = self.degree_sequence
            out.update(n_u=len(seq.u_degrees), n_w=len(seq.w_degrees), eta=seq.eta)
        if self.protograph is not None:
            out.update(base=self.protograph.to_json(), N=self.lifting_degree)
        return out


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _match_cells(u_cells, w_cells, n_u, max_du, state, reject_parallel, max_attempts):
    """
    Fisher-Yates shuffle of the W-cells against the U-cells in canonical order.

    Position ``i`` is final once the loop has passed it, so with
    ``reject_parallel`` an attempt is abandoned at the first fixed pair that
    repeats an earlier one.  Returns ``(perm, attempts, state, ok)``.
    """
    eta = u_cells.size
    perm = np.empty(eta, np.int64)
    seen = np.empty((n_u, max(max_du, 1)), np.int64)
    fill = np.zeros(n_u, np.int64)
    attempts = 0
    while attempts < max_attempts:
        attempts += 1
        for i in range(eta):
            perm[i] = i
        fill[:] = 0
        ok = True
        for i in range(eta - 1, -1, -1):
            if i > 0:
                j, state = randbelow(state, i + 1)
                tmp = perm[i]
                perm[i] = perm[j]
                perm[j] = tmp
            if reject_parallel:
                u = u_cells[i]
                w = w_cells[perm[i]]
                for t in range(fill[u]):
                    if seen[u, t] == w:
                        ok = False
                        break
                if not ok:
                    break
                seen[u, fill[u]] = w
                fill[u] += 1
        if ok:
            return perm, attempts, state, True
    return perm, attempts, state, False


@njit(cache=True, nogil=True)
def _random_lift_kernel(bu, bw, N, state):
    E = bu.size
    us = np.empty(E * N, np.int64)
    ws = np.empty(E * N, np.int64)
    perm = np.empty(N, np.int64)
    for e in range(E):
        for i in range(N):
            perm[i] = i
        state = shuffle_inplace(perm, state)
        for i in range(N):
            us[e * N + i] = bu[e] * N + i
            ws[e * N + i] = bw[e] * N + perm[i]
    return us, ws, state


@njit(cache=True, nogil=True)
def _cyclic_shifts_kernel(E, N, state):
    shifts = np.empty(E, np.int64)
    for e in range(E):
        shifts[e], state = randbelow(state, N)
    return shifts, state


# ---------------------------------------------------------------------------
# public samplers
# ---------------------------------------------------------------------------

def _cells(seq: DegreeSequence) -> tuple[np.ndarray, np.ndarray]:
    if not seq.is_balanced:
        raise ValueError(
            f"degree sums differ: {sum(seq.u_degrees)} != {sum(seq.w_degrees)}"
        )
    u_cells = np.repeat(np.arange(len(seq.u_degrees), dtype=np.int64), seq.u_degrees)
    w_cells = np.repeat(np.arange(len(seq.w_degrees), dtype=np.int64), seq.w_degrees)
    return u_cells, w_cells


def configuration_matching(seq: DegreeSequence, rng: RngStream) -> np.ndarray:
    """Uniform random matching: U-cell ``i`` is paired with W-cell ``perm[i]``."""
    u_cells, w_cells = _cells(seq)
    perm, _, state, _ = _match_cells(
        u_cells, w_cells, len(seq.u_degrees), max(seq.u_degrees, default=0),
        to_kernel_state(rng), False, 1,
    )
    from_kernel_state(rng, state)
    return perm


def sample_configuration(seq: DegreeSequence, rng: RngStream) -> BipartiteMultigraph:
    """Configuration-model multigraph with the exact degrees of ``seq``."""
    u_cells, w_cells = _cells(seq)
    perm = configuration_matching(seq, rng)
    return BipartiteMultigraph.from_arrays(
        len(seq.u_degrees), len(seq.w_degrees), u_cells, w_cells[perm]
    )


def sample_simple(
    seq: DegreeSequence, rng: RngStream, max_attempts: int = DEFAULT_MAX_ATTEMPTS
) -> BipartiteMultigraph:
    """
    Uniform simple bipartite graph with degrees ``seq`` by rejection.

    Each attempt is a configuration sample; it is discarded as soon as a
    parallel edge is fixed, which changes how much of the stream an attempt
    consumes but not the distribution of the accepted graph.
    """
    if max_attempts < 1:
        raise ValueError("max_attempts must be at least 1")
    u_cells, w_cells = _cells(seq)
    perm, attempts, state, ok = _match_cells(
        u_cells, w_cells, len(seq.u_degrees), max(seq.u_degrees, default=0),
        to_kernel_state(rng), True, max_attempts,
    )
    from_kernel_state(rng, state)
    if not ok:
        raise SamplingError(
            f"no simple graph after {attempts} attempts; degree sequence too dense for rejection"
        )
    return BipartiteMultigraph(
        len(seq.u_degrees), len(seq.w_degrees),
        tuple(zip(u_cells.tolist(), w_cells[perm].tolist())), simple_flag=True,
    )


def _base_arrays(base: Protograph) -> tuple[np.ndarray, np.ndarray]:
    arr = base.edge_array
    return arr[:, 0].copy(), arr[:, 1].copy()


def sample_random_lift(base: Protograph, N: int, rng: RngStream) -> BipartiteMultigraph:
    if N < 1:
        raise ValueError("lifting degree must be positive")
    bu, bw = _base_arrays(base)
    us, ws, state = _random_lift_kernel(bu, bw, N, to_kernel_state(rng))
    from_kernel_state(rng, state)
    return BipartiteMultigraph(
        base.n_u * N, base.n_w * N, tuple(zip(us.tolist(), ws.tolist())), simple_flag=True
    )


def lift_from_exponent(base: Protograph, P: ExponentMatrix) -> BipartiteMultigraph:
    """Cyclic lift with edges ``(u^i, w^((i + p) mod N))`` for every base edge."""
    shifts = P.edge_shifts(base)
    N = P.N
    edges = [
        (u * N + i, w * N + (i + p) % N)
        for (u, w), p in zip(base.edges, shifts)
        for i in range(N)
    ]
    return BipartiteMultigraph(base.n_u * N, base.n_w * N, tuple(edges), simple_flag=True)


def sample_exponent_matrix(base: Protograph, N: int, rng: RngStream) -> ExponentMatrix:
    if N < 1:
        raise ValueError("lifting degree must be positive")
    shifts, state = _cyclic_shifts_kernel(base.num_edges, N, to_kernel_state(rng))
    from_kernel_state(rng, state)
    return ExponentMatrix.from_edge_shifts(base, N, shifts.tolist())


def sample_cyclic_lift(
    base: Protograph, N: int, rng: RngStream
) -> tuple[BipartiteMultigraph, ExponentMatrix]:
    P = sample_exponent_matrix(base, N, rng)
    return lift_from_exponent(base, P), P


def draw(spec: EnsembleSpec, rng: RngStream) -> tuple[BipartiteMultigraph, ExponentMatrix | None]:
    """One sample of ``spec``; the exponent matrix is returned for cyclic lifts."""
    kind = spec.kind
    if kind is EnsembleKind.CONFIGURATION:
        return sample_configuration(spec.degree_sequence, rng), None
    if kind is EnsembleKind.SIMPLE:
        return sample_simple(spec.degree_sequence, rng, spec.max_attempts), None
    if kind is EnsembleKind.RANDOM_LIFT:
        return sample_random_lift(spec.protograph, spec.lifting_degree, rng), None
    return sample_cyclic_lift(spec.protograph, spec.lifting_degree, rng)
