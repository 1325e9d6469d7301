"""Compiled inner loops.

Every walk visits subsets in binary-reflected Gray-code order: step ``i``
toggles bit ``ctz(i)``, so the subset at step ``i`` of a shard is
``top | (i ^ (i >> 1))``.  All kernels are ``nogil`` so shards can run on
threads; each one only writes to the output arrays it is given.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True, inline="always")
def _ctz(i):
    c = 0
    while (i & 1) == 0:
        i >>= 1
        c += 1
    return c


@njit(cache=True, nogil=True)
def walk_mult_keys(col_edges, n_edges, period, bpow, top, low_bits, out_keys, out_parity):
    """Walk U over ``top | gray(i)``; record the residue histogram key of the multiplicities.

    key(U) = sum over edges e of bpow[mult(e, U) % period], a base-(C(n,2)+1)
    encoding of how many edges fall in each residue class.
    """
    n_cols = col_edges.shape[0]
    c = col_edges.shape[1]
    mult = np.zeros(n_edges, dtype=np.int64)
    parity = 0
    for s in range(n_cols):
        if (top >> s) & 1:
            parity ^= 1
            for t in range(c):
                mult[col_edges[s, t]] += 1
    key = 0
    for e in range(n_edges):
        key += bpow[mult[e] % period]
    out_keys[0] = key
    out_parity[0] = parity
    state = top
    steps = 1 << low_bits
    for i in range(1, steps):
        s = _ctz(i)
        if (state >> s) & 1:
            for t in range(c):
                e = col_edges[s, t]
                key -= bpow[mult[e] % period]
                mult[e] -= 1
                key += bpow[mult[e] % period]
        else:
            for t in range(c):
                e = col_edges[s, t]
                key -= bpow[mult[e] % period]
                mult[e] += 1
                key += bpow[mult[e] % period]
        state ^= 1 << s
        parity ^= 1
        out_keys[i] = key
        out_parity[i] = parity


@njit(cache=True, nogil=True)
def walk_incidence_counts(col_edges, n_edges, period, top, low_bits, counts):
    """Double Gray walk: H over ``top | gray(i)``, G over all edge sets.

    counts[|E(H)| % 2, |E(G)|, i(G,H) % period] is incremented once per pair.
    """
    n_cols = col_edges.shape[0]
    c = col_edges.shape[1]
    mult = np.zeros(n_edges, dtype=np.int64)
    parity = 0
    for s in range(n_cols):
        if (top >> s) & 1:
            parity ^= 1
            for t in range(c):
                mult[col_edges[s, t]] += 1
    h_state = top
    g_steps = 1 << n_edges
    for i in range(1 << low_bits):
        if i > 0:
            s = _ctz(i)
            delta = -1 if (h_state >> s) & 1 else 1
            for t in range(c):
                mult[col_edges[s, t]] += delta
            h_state ^= 1 << s
            parity ^= 1
        g = 0
        ecount = 0
        inc = 0
        counts[parity, 0, 0] += 1
        for j in range(1, g_steps):
            e = _ctz(j)
            if (g >> e) & 1:
                ecount -= 1
                inc -= mult[e]
            else:
                ecount += 1
                inc += mult[e]
            g ^= 1 << e
            counts[parity, ecount, inc % period] += 1


@njit(cache=True, nogil=True)
def walk_kernel_hist(basis_vars, basis_len, var_col, n_cols, state, low_bits, hist, trace):
    """Gray walk over the span of the low ``low_bits`` basis vectors, starting at ``state``.

    Maintains per-column one-counts and the number of empty columns; hist[empty]
    counts elements.  If ``trace`` is nonempty, trace[i] receives the empty count
    at step i.
    """
    col_count = np.zeros(n_cols, dtype=np.int64)
    for v in range(state.shape[0]):
        if state[v]:
            col_count[var_col[v]] += 1
    empty = 0
    for s in range(n_cols):
        if col_count[s] == 0:
            empty += 1
    do_trace = trace.shape[0] > 0
    hist[empty] += 1
    if do_trace:
        trace[0] = empty
    for i in range(1, 1 << low_bits):
        b = _ctz(i)
        for t in range(basis_len[b]):
            v = basis_vars[b, t]
            col = var_col[v]
            if state[v]:
                state[v] = 0
                col_count[col] -= 1
                if col_count[col] == 0:
                    empty += 1
            else:
                state[v] = 1
                if col_count[col] == 0:
                    empty -= 1
                col_count[col] += 1
        hist[empty] += 1
        if do_trace:
            trace[i] = empty


@njit(cache=True, nogil=True)
def row_restricted_signed_sum(col_edges, col_last, table, n_edges, allow_full):
    """Signed count of sub-incidence matrices with row-count restrictions, by inclusion-exclusion.

    Each edge row is labelled free (0), forced-empty (1) or forced-full (2, only if
    ``allow_full``); labels 1 and 2 carry weight -1.  A column contributes
    table[code] where code = sum_t label(edge_t) * 3**t, the signed count of its
    admissible patterns compatible with the labels.  Depth-first over edges in
    slot order; a column's factor is applied once its last edge is labelled, and
    branches with a zero factor are pruned.  Returns the total as int64.
    """
    n_cols = col_edges.shape[0]
    c = col_edges.shape[1]
    # columns closing at each edge
    closing_start = np.zeros(n_edges + 1, dtype=np.int64)
    for s in range(n_cols):
        closing_start[col_last[s] + 1] += 1
    for e in range(n_edges):
        closing_start[e + 1] += closing_start[e]
    closing = np.zeros(n_cols, dtype=np.int64)
    fill = closing_start.copy()
    for s in range(n_cols):
        closing[fill[col_last[s]]] = s
        fill[col_last[s]] += 1
    pw = np.ones(c, dtype=np.int64)
    for t in range(1, c):
        pw[t] = pw[t - 1] * 3
    max_label = 2 if allow_full else 1
    label = np.zeros(n_edges, dtype=np.int64)
    weight = np.ones(n_edges + 1, dtype=np.int64)  # weight[d]: product before edge d
    total = 0
    d = 0
    label[0] = -1
    while d >= 0:
        label[d] += 1
        if label[d] > max_label:
            d -= 1
            continue
        w = weight[d]
        if label[d] > 0:
            w = -w
        for idx in range(closing_start[d], closing_start[d + 1]):
            s = closing[idx]
            code = 0
            for t in range(c):
                code += label[col_edges[s, t]] * pw[t]
            w *= table[code]
            if w == 0:
                break
        if w == 0:
            continue
        if d == n_edges - 1:
            total += w
            continue
        weight[d + 1] = w
        d += 1
        label[d] = -1
    return total
