"""Independent sets on torus grid graphs.

Constructors (random greedy, packing-guided greedy), a deterministic local
search built on compiled (1,2)-swap moves with plateau perturbations, an exact
branch-and-bound for tiny instances, and the density bound |M|/(n*m) that a
validated set certifies.

Wall-clock limits are expressed as deterministic move budgets so identical
(graph, config) inputs give bit-identical outputs on any machine: the
configured time limit is converted at a fixed calibration rate and the search
counts elementary steps instead of reading a clock.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import BinaryIO

import numpy as np

from . import solver_kernel as _kernel
from .croft import croft_optimum
from .grid_graph import TorusGraph, neighbors
from .torus import displacement_norms

# Calibration rate for converting a time limit into a move budget.
MOVES_PER_SECOND = 100_000

# Best published upper bound on the plane density; a certified lower bound
# above it would contradict known mathematics and must abort loudly.
DENSITY_CEILING = 0.2470

# Plateau-perturbation cadence: shake a box after this many non-improving
# moves, and reload the incumbent after this many consecutive dry shakes.
SHAKE_EVERY = 4000
RELOAD_AFTER = 6


@dataclass(frozen=True)
class IndependentSet:
    """Membership bit vector over the n*m grid vertices, row-major."""

    n: int
    m: int
    membership: np.ndarray

    def __post_init__(self) -> None:
        mem = np.ascontiguousarray(self.membership, dtype=np.uint8)
        if mem.ndim != 1 or mem.shape[0] != self.n * self.m:
            raise ValueError(
                f"membership length {mem.size} does not match {self.n}x{self.m} grid"
            )
        mem.setflags(write=False)
        object.__setattr__(self, "membership", mem)

    @property
    def size(self) -> int:
        return int(self.membership.sum())

    def vertices(self) -> list[tuple[int, int]]:
        """Member cells as sorted (i, j) pairs."""
        return [divmod(int(v), self.m) for v in np.flatnonzero(self.membership)]

    @classmethod
    def from_vertices(
        cls, n: int, m: int, cells: "list[tuple[int, int]]"
    ) -> "IndependentSet":
        mem = np.zeros(n * m, dtype=np.uint8)
        for i, j in cells:
            if not (0 <= i < n and 0 <= j < m):
                raise ValueError(f"cell ({i}, {j}) outside {n}x{m} grid")
            mem[i * m + j] = 1
        return cls(n, m, mem)


@dataclass(frozen=True)
class SolverConfig:
    seed: int = 1
    time_limit: float = 100.0
    restarts: int = 3
    plateau_moves: int = 2_000_000

    def __post_init__(self) -> None:
        if not self.time_limit > 0:
            raise ValueError(f"time_limit must be positive, got {self.time_limit}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.plateau_moves < 0:
            raise ValueError(f"plateau_moves must be >= 0, got {self.plateau_moves}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")

    @property
    def move_budget(self) -> int:
        return int(self.time_limit * MOVES_PER_SECOND)


def validate(g: TorusGraph, s: IndependentSet) -> bool:
    """True iff no edge of g has both endpoints in s.  O(size * degree)."""
    n, m = g.spec.n, g.spec.m
    if (s.n, s.m) != (n, m):
        raise ValueError(
            f"set is on a {s.n}x{s.m} grid, graph is {n}x{m}"
        )
    mem = s.membership
    idx = np.flatnonzero(mem)
    if idx.size == 0:
        return True
    i, j = np.divmod(idx, m)
    for si, tj in g.offsets:
        w = ((i + si) % n) * m + ((j + tj) % m)
        if np.any(mem[w]):
            return False
    return True


def _fill_order(g: TorusGraph, order: np.ndarray) -> np.ndarray:
    """Maximal set built by inserting along `order` wherever independent."""
    n, m = g.spec.n, g.spec.m
    oi, oj = g.offset_arrays()
    in_set = np.zeros(n * m, dtype=np.uint8)
    tau = np.zeros(n * m, dtype=np.int32)
    _kernel._fill_in_order(n, m, oi, oj, in_set, tau, order)
    return in_set


def greedy(g: TorusGraph, seed: int) -> IndependentSet:
    """Maximal independent set from a seed-determined random vertex order."""
    order = _kernel._shuffled_order(g.num_vertices, np.uint64(seed))
    return IndependentSet(g.spec.n, g.spec.m, _fill_order(g, order))


def packing_centers(g: TorusGraph) -> int:
    """Number of packing nuclei the torus area suggests (hexagon-cell sized)."""
    x_star, _ = croft_optimum()
    cell = (1.0 + x_star) ** 2 * math.sin(math.pi / 3)
    return max(1, round(g.spec.torus.area / cell))


def packed_greedy(g: TorusGraph, seed: int = 0) -> IndependentSet:
    """Maximal set grown outward from evenly spaced nuclei.

    Dense solutions on these graphs organize into round clusters around a
    small number of centers; a random-order greedy start often freezes with
    the wrong cluster count.  This constructor places k centers on the
    diagonal sublattice (c/k, c/k) and inserts vertices in order of torus
    distance to the nearest center, which biases the fill toward the right
    cluster geometry.  Deterministic; `seed` is accepted for signature
    uniformity with greedy() but the order does not depend on it.
    """
    n, m = g.spec.n, g.spec.m
    t = g.spec.torus
    k = packing_centers(g)
    v = np.arange(n * m)
    fx = (v // m) / n
    fy = (v % m) / m
    dmin = np.full(n * m, np.inf)
    for c in range(k):
        center = c / k
        dmin = np.minimum(dmin, displacement_norms(t, fx - center, fy - center))
    order = np.argsort(dmin, kind="stable").astype(np.int64)
    return IndependentSet(n, m, _fill_order(g, order))


def local_search(g: TorusGraph, start: IndependentSet, cfg: SolverConfig) -> IndependentSet:
    """Best set found by (1,2)-swap local search with plateau perturbations.

    Runs cfg.restarts sequential restarts over one shared move budget: the
    first continues from `start` (made maximal first), later ones from fresh
    random-order greedy sets seeded with cfg.seed + restart index.  Results
    merge by size, ties by lowest-lexicographic membership vector, so the
    outcome is independent of restart scheduling.
    """
    if not validate(g, start):
        raise ValueError("start set is not independent")
    n, m = g.spec.n, g.spec.m
    oi, oj = g.offset_arrays()
    off_mask = g.offset_mask()
    shake_radius = min(12, (min(n, m) - 1) // 2)
    total_budget = cfg.move_budget
    used = 0
    best_mem = start.membership.copy()
    best_key = (int(best_mem.sum()), _neg_bytes(best_mem))
    for r in range(cfg.restarts):
        remaining = total_budget - used
        if remaining <= 0:
            break
        if r == 0:
            in_set = start.membership.copy()
            tau = _kernel._tau_of(n, m, oi, oj, in_set)
            order = _kernel._shuffled_order(n * m, np.uint64(cfg.seed))
            _kernel._fill_in_order(n, m, oi, oj, in_set, tau, order)
        else:
            order = _kernel._shuffled_order(n * m, np.uint64(cfg.seed + r))
            in_set = _fill_order(g, order)
        mem, size, spent = _kernel._search(
            n,
            m,
            oi,
            oj,
            off_mask,
            in_set,
            np.uint64(cfg.seed + r),
            remaining,
            cfg.plateau_moves,
            SHAKE_EVERY,
            shake_radius,
            RELOAD_AFTER,
        )
        used += spent
        key = (size, _neg_bytes(mem))
        if key > best_key:
            best_key = key
            best_mem = mem
    return IndependentSet(n, m, best_mem)


def _neg_bytes(mem: np.ndarray) -> bytes:
    # complement so that tuple-max picks the lexicographically lowest vector
    return bytes(255 - b for b in mem.tobytes())


def exact_mis(g: TorusGraph) -> IndependentSet:
    """Maximum independent set by branch-and-bound over bitmasks.

    Branches on the highest-degree remaining vertex (ties to the lowest
    index), prunes with the remaining-vertex-count bound.  Guarded to
    n*m <= 100 vertices; worst case is exponential.
    """
    nm = g.num_vertices
    if nm > 100:
        raise ValueError(f"exact search is capped at 100 vertices, got {nm}")
    adj = [0] * nm
    for v in range(nm):
        for w in neighbors(g, v):
            adj[v] |= 1 << w
    best_mask = 0
    best_count = 0

    def descend(avail: int, chosen: int, count: int) -> None:
        nonlocal best_mask, best_count
        if count > best_count:
            best_count = count
            best_mask = chosen
        if count + avail.bit_count() <= best_count:
            return
        pick = -1
        pick_deg = -1
        a = avail
        while a:
            low = a & -a
            v = low.bit_length() - 1
            a ^= low
            d = (adj[v] & avail).bit_count()
            if d > pick_deg:
                pick_deg = d
                pick = v
        if pick_deg == 0:
            count += avail.bit_count()
            if count > best_count:
                best_count = count
                best_mask = chosen | avail
            return
        descend(avail & ~(adj[pick] | (1 << pick)), chosen | (1 << pick), count + 1)
        descend(avail & ~(1 << pick), chosen, count)

    descend((1 << nm) - 1, 0, 0)
    mem = np.zeros(nm, dtype=np.uint8)
    for v in range(nm):
        if best_mask >> v & 1:
            mem[v] = 1
    return IndependentSet(g.spec.n, g.spec.m, mem)


def density_bound(set_size: int, n: int, m: int) -> float:
    """The plane-density lower bound |M|/(n*m) certified by Theorem-style
    transfer from a validated independent set on a qualifying graph."""
    if not 0 <= set_size <= n * m:
        raise ValueError(f"set size {set_size} outside [0, {n * m}]")
    return set_size / (n * m)


def check_density_ceiling(bound: float) -> None:
    """Abort if a computed lower bound exceeds the published upper bound.

    Such a value cannot be mathematics; it is a construction bug (wrong edge
    set, broken validation) and silently reporting it would be worse than
    crashing.
    """
    if bound > DENSITY_CEILING:
        raise RuntimeError(
            f"density bound {bound:.6f} exceeds the known upper bound "
            f"{DENSITY_CEILING}; the graph or solution construction is broken "
            "and must be re-verified independently"
        )


def solve_instance(g: TorusGraph, cfg: SolverConfig) -> IndependentSet:
    """End-to-end solve: exact on tiny graphs, otherwise seeded local search."""
    if g.num_vertices <= 100:
        result = exact_mis(g)
    else:
        result = local_search(g, packed_greedy(g, cfg.seed), cfg)
    if not validate(g, result):
        raise RuntimeError("solver produced a dependent set; kernel is broken")
    check_density_ceiling(density_bound(result.size, g.spec.n, g.spec.m))
    return result


def save_solution(s: IndependentSet, sink: BinaryIO) -> None:
    """Write `<n> <m> <size>` then one sorted `i j` line per member."""
    sink.write(f"{s.n} {s.m} {s.size}\n".encode("ascii"))
    for i, j in s.vertices():
        sink.write(f"{i} {j}\n".encode("ascii"))


def load_solution(source: BinaryIO) -> IndependentSet:
    """Parse the solution format written by save_solution."""
    lines = source.read().decode("ascii").split("\n")
    header = lines[0].split()
    if len(header) != 3:
        raise ValueError(f"malformed solution header: {lines[0]!r}")
    n, m, size = (int(x) for x in header)
    cells = []
    for line in lines[1:]:
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"malformed solution line: {line!r}")
        cells.append((int(parts[0]), int(parts[1])))
    if len(cells) != size:
        raise ValueError(f"header promises {size} members, file has {len(cells)}")
    return IndependentSet.from_vertices(n, m, cells)
