"""Independent brute-force reimplementations used as test oracles.

Nothing here imports the move-law or table code under test; component
growth is a plain two-color BFS, which provably coincides with the
chains' alternating closure on proper colorings (the only states the
couplings ever see).
"""

import random
from fractions import Fraction

import numpy as np


def numpy_brute_count(G, k, perm_seed=0):
    """Order-permuted vectorized proper-coloring count.

    Vertex v is assigned digit position perm[v]; the count is invariant
    under the relabeling, so agreement across seeds is part of the check.
    """
    m = G.m
    perm = list(range(m))
    random.Random(perm_seed).shuffle(perm)
    states = np.arange(k ** m, dtype=np.int64)
    digits = [((states // (k ** perm[v])) % k).astype(np.int8) for v in range(m)]
    ok = np.ones(k ** m, dtype=bool)
    for v in range(m):
        for w in G.nbrs[v]:
            if w > v:
                ok &= digits[v] != digits[w]
    return int(ok.sum())


def two_color_component(G, assign, v, c):
    a = assign[v]
    if a == c:
        return frozenset({v})
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for w in G.nbrs[u]:
            if w not in seen and assign[w] in (a, c):
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def brute_flip_law(G, assign, k, fp):
    """Move distribution of one flip proposal from a proper coloring.

    Keys are (members, frozenset of the two colors); the missing mass is
    the null move.
    """
    mk = G.m * k
    law = {}
    for v in range(G.m):
        for c in range(1, k + 1):
            members = two_color_component(G, assign, v, c)
            s = len(members)
            q = fp.p(s)
            if q == 0:
                continue
            key = (members, frozenset((assign[v], c)))
            law[key] = law.get(key, Fraction(0)) + Fraction(q, s * mk)
    return law


def apply_move(assign, members, colors):
    if len(colors) < 2:
        return list(assign)
    a, b = sorted(colors)
    out = list(assign)
    for u in members:
        if out[u] == a:
            out[u] = b
        elif out[u] == b:
            out[u] = a
    return out
