"""Compiled inner loops of the independent-set search.

Internal module: everything here works on flat arrays describing a
shift-invariant graph (offset arrays oi/oj plus a flat offset-membership mask)
and a membership byte vector.  The public solver API lives in `mis`.

The search keeps, for every vertex, the number of its neighbors currently in
the set (tau).  A queue holds vertices that just became 1-tight (tau == 1,
outside the set); each such vertex admits a possible (1,2)-swap through its
unique blocking member, found and applied in O(degree).  When the queue runs
dry the walk makes random size-neutral (1,1)-swaps, periodically shakes a whole
box of the grid (remove and randomized greedy refill), and reloads the best
known set after repeatedly unproductive shakes.  All randomness comes from a
hand-rolled xorshift64* generator so results are reproducible across platforms
given (seed, move budget).
"""

from __future__ import annotations

import numpy as np
from numba import njit

_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True, nogil=True, inline="always")
def _rng_next(state):
    state ^= state >> np.uint64(12)
    state ^= (state << np.uint64(25)) & _MASK64
    state ^= state >> np.uint64(27)
    return state


@njit(cache=True, nogil=True, inline="always")
def _rng_below(state, bound):
    state = _rng_next(state)
    r = (state * np.uint64(2685821657736338717)) >> np.uint64(32)
    return state, np.int64(r % np.uint64(bound))


@njit(cache=True, nogil=True)
def _mix_seed(seed):
    # splitmix64 step; xorshift state must be nonzero
    z = (np.uint64(seed) + np.uint64(0x9E3779B97F4A7C15)) & _MASK64
    z = ((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)) & _MASK64
    z = ((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)) & _MASK64
    z = z ^ (z >> np.uint64(31))
    if z == np.uint64(0):
        z = np.uint64(0xDEADBEEF)
    return z


@njit(cache=True, nogil=True, inline="always")
def _nbr(v, n, m, oi, oj, t):
    i = v // m
    j = v - i * m
    i2 = i + oi[t]
    if i2 >= n:
        i2 -= n
    j2 = j + oj[t]
    if j2 >= m:
        j2 -= m
    return i2 * m + j2


@njit(cache=True, nogil=True, inline="always")
def _adjacent(u, w, n, m, off_mask):
    iu = u // m
    ju = u - iu * m
    iw = w // m
    jw = w - iw * m
    di = iw - iu
    if di < 0:
        di += n
    dj = jw - ju
    if dj < 0:
        dj += m
    return off_mask[di * m + dj]


@njit(cache=True, nogil=True)
def _insert(v, n, m, oi, oj, in_set, tau):
    in_set[v] = 1
    for t in range(len(oi)):
        tau[_nbr(v, n, m, oi, oj, t)] += 1


@njit(cache=True, nogil=True, inline="always")
def _enqueue(w, queue, in_queue, qtail, cap):
    if in_queue[w] == 0:
        in_queue[w] = 1
        queue[qtail] = w
        qtail += 1
        if qtail == cap:
            qtail = 0
    return qtail


@njit(cache=True, nogil=True)
def _remove_tracked(u, n, m, oi, oj, in_set, tau, queue, in_queue, qtail, cap):
    # removal is the only event that can make a vertex 1-tight
    in_set[u] = 0
    for t in range(len(oi)):
        w = _nbr(u, n, m, oi, oj, t)
        tau[w] -= 1
        if in_set[w] == 0 and tau[w] == 1:
            qtail = _enqueue(w, queue, in_queue, qtail, cap)
    return qtail


@njit(cache=True, nogil=True)
def _tau_of(n, m, oi, oj, in_set):
    nm = n * m
    tau = np.zeros(nm, dtype=np.int32)
    for v in range(nm):
        if in_set[v] == 1:
            for t in range(len(oi)):
                tau[_nbr(v, n, m, oi, oj, t)] += 1
    return tau


@njit(cache=True, nogil=True)
def _fill_in_order(n, m, oi, oj, in_set, tau, order):
    added = 0
    for idx in range(len(order)):
        v = order[idx]
        if in_set[v] == 0 and tau[v] == 0:
            _insert(v, n, m, oi, oj, in_set, tau)
            added += 1
    return added


@njit(cache=True, nogil=True)
def _shuffled_order(nm, seed):
    state = _mix_seed(seed)
    order = np.empty(nm, dtype=np.int64)
    for v in range(nm):
        order[v] = v
    for v in range(nm - 1, 0, -1):
        state, j = _rng_below(state, v + 1)
        order[v], order[j] = order[j], order[v]
    return order


@njit(cache=True, nogil=True)
def _search(
    n,
    m,
    oi,
    oj,
    off_mask,
    in_set,
    seed,
    budget,
    plateau_moves,
    shake_every,
    shake_radius,
    reload_after,
):
    """Improve the given set in place; return (best membership, size, moves used).

    Every accepted elementary step (flip, queue pop, failed sampling attempt)
    counts as one move, so the loop always terminates within `budget` and the
    plateau exit (no best-improvement within `plateau_moves`) is well defined.
    """
    nm = n * m
    K = len(oi)
    cap = nm + 1
    tau = np.zeros(nm, dtype=np.int32)
    size = 0
    for v in range(nm):
        if in_set[v] == 1:
            size += 1
            for t in range(K):
                tau[_nbr(v, n, m, oi, oj, t)] += 1
    queue = np.empty(cap, dtype=np.int64)
    in_queue = np.zeros(nm, dtype=np.uint8)
    qhead = 0
    qtail = 0
    for v in range(nm):
        if in_set[v] == 0 and tau[v] == 1:
            qtail = _enqueue(v, queue, in_queue, qtail, cap)
    best = in_set.copy()
    best_size = size
    state = _mix_seed(seed)
    side = 2 * shake_radius + 1
    box = np.empty(side * side, dtype=np.int64)
    moves = 0
    moves_at_best = 0
    stagnation = 0
    dry_shakes = 0
    while moves < budget and moves - moves_at_best <= plateau_moves:
        if qhead != qtail:
            # a vertex that recently became 1-tight: try the (1,2)-swap
            # through its unique blocking member
            x = queue[qhead]
            qhead += 1
            if qhead == cap:
                qhead = 0
            in_queue[x] = 0
            moves += 1
            if in_set[x] == 1 or tau[x] != 1:
                continue
            u = -1
            for t in range(K):
                w = _nbr(x, n, m, oi, oj, t)
                if in_set[w] == 1:
                    u = w
                    break
            y = -1
            for t in range(K):
                w = _nbr(u, n, m, oi, oj, t)
                if w != x and in_set[w] == 0 and tau[w] == 1:
                    if not _adjacent(x, w, n, m, off_mask):
                        y = w
                        break
            if y < 0:
                continue
            qtail = _remove_tracked(
                u, n, m, oi, oj, in_set, tau, queue, in_queue, qtail, cap
            )
            _insert(x, n, m, oi, oj, in_set, tau)
            _insert(y, n, m, oi, oj, in_set, tau)
            size += 1
            moves += 3
            for t in range(K):
                w = _nbr(u, n, m, oi, oj, t)
                if in_set[w] == 0 and tau[w] == 0:
                    _insert(w, n, m, oi, oj, in_set, tau)
                    size += 1
                    moves += 1
            if size > best_size:
                best_size = size
                best[:] = in_set[:]
                moves_at_best = moves
                stagnation = 0
                dry_shakes = 0
            continue
        if stagnation >= shake_every:
            # perturb a whole box: remove members, refill in random order
            if reload_after > 0 and dry_shakes >= reload_after:
                dry_shakes = 0
                in_set[:] = best[:]
                tau[:] = 0
                size = best_size
                for v in range(nm):
                    if in_set[v] == 1:
                        for t in range(K):
                            tau[_nbr(v, n, m, oi, oj, t)] += 1
            state, ci = _rng_below(state, n)
            state, cj = _rng_below(state, m)
            nb = 0
            for di in range(-shake_radius, shake_radius + 1):
                i2 = ci + di
                if i2 >= n:
                    i2 -= n
                elif i2 < 0:
                    i2 += n
                for dj in range(-shake_radius, shake_radius + 1):
                    j2 = cj + dj
                    if j2 >= m:
                        j2 -= m
                    elif j2 < 0:
                        j2 += m
                    v = i2 * m + j2
                    box[nb] = v
                    nb += 1
                    if in_set[v] == 1:
                        qtail = _remove_tracked(
                            v, n, m, oi, oj, in_set, tau, queue, in_queue, qtail, cap
                        )
                        size -= 1
                        moves += 1
            for a in range(nb - 1, 0, -1):
                state, b = _rng_below(state, a + 1)
                box[a], box[b] = box[b], box[a]
            for a in range(nb):
                v = box[a]
                if in_set[v] == 0 and tau[v] == 0:
                    _insert(v, n, m, oi, oj, in_set, tau)
                    size += 1
                    moves += 1
            for a in range(nb):
                v = box[a]
                if in_set[v] == 0 and tau[v] == 1:
                    qtail = _enqueue(v, queue, in_queue, qtail, cap)
            moves += 1
            stagnation = 0
            dry_shakes += 1
            if size > best_size:
                best_size = size
                best[:] = in_set[:]
                moves_at_best = moves
                dry_shakes = 0
            continue
        # plateau walk: swap a random 1-tight vertex with its blocking member
        x = np.int64(-1)
        for _ in range(32):
            state, cand = _rng_below(state, nm)
            if in_set[cand] == 0 and tau[cand] == 1:
                x = cand
                break
        if x >= 0:
            u = -1
            for t in range(K):
                w = _nbr(x, n, m, oi, oj, t)
                if in_set[w] == 1:
                    u = w
                    break
            qtail = _remove_tracked(
                u, n, m, oi, oj, in_set, tau, queue, in_queue, qtail, cap
            )
            _insert(x, n, m, oi, oj, in_set, tau)
            moves += 2
            stagnation += 1
            for t in range(K):
                w = _nbr(u, n, m, oi, oj, t)
                if in_set[w] == 0 and tau[w] == 0:
                    _insert(w, n, m, oi, oj, in_set, tau)
                    size += 1
                    moves += 1
            if size > best_size:
                best_size = size
                best[:] = in_set[:]
                moves_at_best = moves
                stagnation = 0
                dry_shakes = 0
        else:
            # no 1-tight vertex sampled: force a random blocked vertex in
            x = np.int64(-1)
            for _ in range(64):
                state, cand = _rng_below(state, nm)
                if in_set[cand] == 0 and tau[cand] >= 2:
                    x = cand
                    break
            moves += 1
            stagnation += 1
            if x < 0:
                continue
            # insert x first so tau screens its neighborhood out of the
            # refills below, then evict its blocking members one by one
            _insert(x, n, m, oi, oj, in_set, tau)
            size += 1
            moves += 1
            for t in range(K):
                w = _nbr(x, n, m, oi, oj, t)
                if in_set[w] == 1:
                    qtail = _remove_tracked(
                        w, n, m, oi, oj, in_set, tau, queue, in_queue, qtail, cap
                    )
                    size -= 1
                    moves += 1
                    for t2 in range(K):
                        w2 = _nbr(w, n, m, oi, oj, t2)
                        if in_set[w2] == 0 and tau[w2] == 0:
                            _insert(w2, n, m, oi, oj, in_set, tau)
                            size += 1
                            moves += 1
            if size > best_size:
                best_size = size
                best[:] = in_set[:]
                moves_at_best = moves
                stagnation = 0
                dry_shakes = 0
    return best, best_size, moves
