"""Compiled inner loops over partner arrays.

A chord diagram on ``m = 2n`` slots is passed as an int64 array ``partner``
with ``partner[partner[i]] == i``.  Chords are indexed by the rank of their
smaller endpoint.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def first_endpoints(partner):
    m = partner.shape[0]
    out = np.empty(m // 2, np.int64)
    k = 0
    for i in range(m):
        if partner[i] > i:
            out[k] = i
            k += 1
    return out


@njit(cache=True)
def _rotation_less(seq, k, reflect, ref):
    # compare the rotation of seq (optionally reflected) starting at k with ref
    m = seq.shape[0]
    for j in range(m):
        if reflect:
            i = (k - j) % m
            v = (m - seq[i]) % m
        else:
            v = seq[(k + j) % m]
        if v < ref[j]:
            return True
        if v > ref[j]:
            return False
    return False


@njit(cache=True)
def matching_is_canonical(partner):
    """True when the offset sequence is least among its rotations and reflections."""
    m = partner.shape[0]
    off = np.empty(m, np.int64)
    for i in range(m):
        off[i] = (partner[i] - i) % m
    for k in range(m):
        if k > 0 and _rotation_less(off, k, False, off):
            return False
        if _rotation_less(off, k, True, off):
            return False
    return True


@njit(cache=True)
def face_count(partner, flat):
    """Number of boundary faces of the ribbon graph; ``flat`` is per chord."""
    m = partner.shape[0]
    if m == 0:
        return 1
    sigma = np.empty(2 * m, np.int64)
    firsts = first_endpoints(partner)
    order = np.empty(4, np.int64)
    for c in range(m // 2):
        a = firsts[c]
        b = partner[a]
        oa = 2 * a
        ia = 2 * ((a - 1) % m) + 1
        ob = 2 * b
        ib = 2 * ((b - 1) % m) + 1
        order[0] = oa
        order[2] = ia
        if flat[c] > 0:
            order[1] = ob
            order[3] = ib
        else:
            order[1] = ib
            order[3] = ob
        for k in range(4):
            sigma[order[k]] = order[(k + 1) % 4]
    seen = np.zeros(2 * m, np.bool_)
    faces = 0
    for d in range(2 * m):
        if seen[d]:
            continue
        faces += 1
        x = d
        while not seen[x]:
            seen[x] = True
            x = sigma[x ^ 1]
    return faces


@njit(cache=True)
def planar_masks(partner):
    """Sign masks (bit set means flat sign -1) giving a genus zero carrier."""
    m = partner.shape[0]
    n = m // 2
    out = []
    flat = np.empty(n, np.int64)
    for mask in range(1 << n):
        for c in range(n):
            flat[c] = -1 if (mask >> c) & 1 else 1
        if face_count(partner, flat) == n + 2:
            out.append(mask)
    return out


@njit(cache=True)
def _grow(buf, used, need):
    if used + need <= buf.shape[0]:
        return buf
    cap = max(2 * buf.shape[0], used + need)
    fresh = np.empty(cap, np.int64)
    fresh[:used] = buf[:used]
    return fresh


@njit(cache=True)
def collect_matchings(n, canonical, even_only):
    """All perfect matchings on 2n slots, flattened row by row."""
    m = 2 * n
    buf = np.empty(1024, np.int64)
    used = 0
    if n == 0:
        return buf[:0]
    partner = -np.ones(m, np.int64)
    low = np.zeros(n, np.int64)
    cand = np.zeros(n, np.int64)
    depth = 0
    low[0] = 0
    cand[0] = 0
    while depth >= 0:
        p = low[depth]
        q = cand[depth]
        if q != p:
            partner[p] = -1
            partner[q] = -1
        found = -1
        for c in range(q + 1, m):
            if partner[c] < 0 and (not even_only or (c - p) % 2 == 1):
                found = c
                break
        if found < 0:
            depth -= 1
            continue
        cand[depth] = found
        partner[p] = found
        partner[found] = p
        if depth == n - 1:
            if not canonical or matching_is_canonical(partner):
                buf = _grow(buf, used, m)
                buf[used:used + m] = partner
                used += m
            continue
        nxt = p + 1
        while partner[nxt] >= 0:
            nxt += 1
        depth += 1
        low[depth] = nxt
        cand[depth] = nxt
    return buf[:used]


@njit(cache=True)
def parallel_dp(partner):
    """Largest pairwise non-crossing chord set by an interval recursion.

    Returns a boolean array over chords.
    """
    m = partner.shape[0]
    n = m // 2
    best = np.zeros((m + 1, m + 1), np.int64)
    # best[i, j] covers slots i..j-1
    for length in range(2, m + 1):
        for i in range(0, m - length + 1):
            j = i + length
            v = best[i + 1, j]
            p = partner[i]
            if i < p < j:
                w = 1 + best[i + 1, p] + best[p + 1, j]
                if w > v:
                    v = w
            best[i, j] = v
    firsts = first_endpoints(partner)
    rank = np.zeros(m, np.int64)
    for c in range(n):
        rank[firsts[c]] = c
    chosen = np.zeros(n, np.bool_)
    stack_i = np.empty(m + 1, np.int64)
    stack_j = np.empty(m + 1, np.int64)
    top = 0
    stack_i[0] = 0
    stack_j[0] = m
    top = 1
    while top > 0:
        top -= 1
        i = stack_i[top]
        j = stack_j[top]
        if j - i < 2:
            continue
        p = partner[i]
        if i < p < j and best[i, j] == 1 + best[i + 1, p] + best[p + 1, j]:
            chosen[rank[i]] = True
            stack_i[top] = i + 1
            stack_j[top] = p
            stack_i[top + 1] = p + 1
            stack_j[top + 1] = j
            top += 2
        else:
            stack_i[top] = i + 1
            stack_j[top] = j
            top += 1
    return chosen


@njit(cache=True)
def crossing_masks(partner):
    m = partner.shape[0]
    n = m // 2
    firsts = first_endpoints(partner)
    masks = np.zeros(n, np.int64)
    for x in range(n):
        a = firsts[x]
        b = partner[a]
        for y in range(x + 1, n):
            c = firsts[y]
            d = partner[c]
            if (a < c < b) != (a < d < b):
                masks[x] |= 1 << y
                masks[y] |= 1 << x
    return masks


@njit(cache=True)
def parallel_brute(partner):
    """Largest independent chord set by enumerating every independent subset.

    Returns the winning chord bitmask.
    """
    n = partner.shape[0] // 2
    cross = crossing_masks(partner)
    masks = np.zeros(n + 1, np.int64)
    nxt = np.zeros(n + 1, np.int64)
    best = 0
    best_mask = 0
    d = 0
    while d >= 0:
        v = nxt[d]
        while v < n and (cross[v] & masks[d]) != 0:
            v += 1
        if v >= n:
            d -= 1
            continue
        nxt[d] = v + 1
        d += 1
        masks[d] = masks[d - 1] | (1 << v)
        nxt[d] = v + 1
        if d > best:
            best = d
            best_mask = masks[d]
    return best_mask


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def parallel_sweep(n, first_partner, max_len):
    """Compare the two parallel-set routines on every matching of 2n slots
    with ``partner[0] == first_partner`` and no chord longer than ``max_len``.

    Returns (matchings checked, disagreements).
    """
    m = 2 * n
    partner = -np.ones(m, np.int64)
    low = np.zeros(n, np.int64)
    cand = np.zeros(n, np.int64)
    checked = 0
    bad = 0
    depth = 0
    while depth >= 0:
        p = low[depth]
        q = cand[depth]
        if q != p:
            partner[p] = -1
            partner[q] = -1
        found = -1
        start = q + 1
        for c in range(start, m):
            if partner[c] >= 0:
                continue
            if depth == 0 and c != first_partner:
                continue
            span = c - p
            if min(span, m - span) > max_len:
                continue
            found = c
            break
        if found < 0:
            depth -= 1
            continue
        cand[depth] = found
        partner[p] = found
        partner[found] = p
        if depth == n - 1:
            checked += 1
            chosen = parallel_dp(partner)
            k = 0
            for c in range(n):
                if chosen[c]:
                    k += 1
            if k != _popcount(parallel_brute(partner)):
                bad += 1
            continue
        nxt = p + 1
        while partner[nxt] >= 0:
            nxt += 1
        depth += 1
        low[depth] = nxt
        cand[depth] = nxt
    return checked, bad


@njit(cache=True)
def bracket_counts(partner, writhe):
    """Histogram of states by (number of A-smoothings, number of loops).

    ``writhe`` is per chord.  The A-smoothing at a positive crossing is the
    orientation-respecting one.
    """
    m = partner.shape[0]
    n = m // 2
    firsts = first_endpoints(partner)
    counts = np.zeros((n + 1, n + 2), np.int64)
    pair = np.empty(2 * m, np.int64)
    seen = np.zeros(2 * m, np.bool_)
    for state in range(1 << n):
        n_a = 0
        for c in range(n):
            a = firsts[c]
            b = partner[a]
            out_a = 2 * a
            in_a = 2 * ((a - 1) % m) + 1
            out_b = 2 * b
            in_b = 2 * ((b - 1) % m) + 1
            use_b = (state >> c) & 1
            if not use_b:
                n_a += 1
            oriented = (writhe[c] > 0) != (use_b == 1)
            if oriented:
                pair[in_a] = out_b
                pair[out_b] = in_a
                pair[in_b] = out_a
                pair[out_a] = in_b
            else:
                pair[in_a] = in_b
                pair[in_b] = in_a
                pair[out_a] = out_b
                pair[out_b] = out_a
        for x in range(2 * m):
            seen[x] = False
        loops = 0
        for x in range(2 * m):
            if seen[x]:
                continue
            loops += 1
            y = x
            while True:
                seen[y] = True
                z = y ^ 1
                seen[z] = True
                y = pair[z]
                if y == x:
                    break
        counts[n_a, loops] += 1
    return counts
