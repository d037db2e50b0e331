"""Jitted core of the backtracking search.

Covers exhaustive mode with a rational exponent threshold; everything else
runs on the pure-Python engine in `search`. Both engines walk the identical
tree in the identical order and must report identical node counts.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def dfs_kernel(K, t_num, t_den, MD, floor, word, trynext, maxused,
               node_len, node_link, node_edge, u_prevlast, u_parent,
               S, best_word, ctl, limit_nodes):
    """Iterative DFS over canonical rich words avoiding exponents >= t.

    ctl packs the mutable scalars: [depth, last, nn, nodes, best_len,
    cap_hit, done, unused]. The call is resumable: state lives entirely in
    the passed arrays, and the function returns when the tree below `floor`
    is exhausted (done=1) or `limit_nodes` is reached (done=0).
    """
    d = ctl[0]
    last = ctl[1]
    nn = ctl[2]
    nodes = ctl[3]
    best_len = ctl[4]
    cap_hit = ctl[5]
    done = 0
    while True:
        if nodes >= limit_nodes:
            break
        a = -1
        if d >= MD:
            cap_hit = 1
        else:
            a = trynext[d]
            cap = maxused[d] + 1
            if cap > K - 1:
                cap = K - 1
            if a > cap:
                a = -1
        if a < 0:
            if d == floor:
                done = 1
                break
            d -= 1
            last = u_prevlast[d]
            nn -= 1
            node_edge[u_parent[d], word[d]] = -1
            continue
        trynext[d] = a + 1
        word[d] = a
        # longest palindromic suffix X of the old word with word[d-|X|-1] == a
        cur = last
        while True:
            l = node_len[cur]
            if d - l - 1 >= 0 and word[d - l - 1] == a:
                break
            cur = node_link[cur]
        if node_edge[cur, a] >= 0:
            continue  # palindrome aXa seen before: extension is not rich
        l = node_len[cur]
        newlen = l + 2
        if newlen == 1:
            lnk = 1
        else:
            c2 = node_link[cur]
            while True:
                l2 = node_len[c2]
                if d - l2 - 1 >= 0 and word[d - l2 - 1] == a:
                    break
                c2 = node_link[c2]
            lnk = node_edge[c2, a]
        # longest-periodic-suffix row update; reject on exponent >= t
        ok = True
        for p in range(1, d + 1):
            if word[d] == word[d - p]:
                s = S[d, p - 1] + 1
                S[d + 1, p - 1] = s
                if t_den * s >= t_num * p:
                    ok = False
                    break
            else:
                S[d + 1, p - 1] = p
        if not ok:
            continue
        S[d + 1, d] = d + 1
        node_len[nn] = newlen
        node_link[nn] = lnk
        node_edge[cur, a] = nn
        u_prevlast[d] = last
        u_parent[d] = cur
        last = nn
        nn += 1
        if maxused[d] > a:
            maxused[d + 1] = maxused[d]
        else:
            maxused[d + 1] = a
        d += 1
        trynext[d] = 0
        nodes += 1
        if d > best_len:
            best_len = d
            for i in range(d):
                best_word[i] = word[i]
    ctl[0] = d
    ctl[1] = last
    ctl[2] = nn
    ctl[3] = nodes
    ctl[4] = best_len
    ctl[5] = cap_hit
    ctl[6] = done
    return done
