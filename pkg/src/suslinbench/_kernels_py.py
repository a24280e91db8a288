"""Pure-Python kernels over index arrays of a leveled tree.

Nodes are indexed 0..N-1 in (level, tag) order.  ``level[i]`` is the level,
``parent[i]`` the parent index (-1 at level 0), ``rank[i]`` the position of
the node's tag within its level, and ``anc[i][l]`` the ancestor of ``i`` at
level ``l`` (-1 above ``level[i]``).  Comparison results use -1/0/1.

Signatures match the compiled module ``_kernels`` exactly.
"""
import numpy as np


def ancestor_table(level, parent, height):
    level = [int(v) for v in level]
    parent = [int(v) for v in parent]
    n = len(level)
    anc = np.full((n, max(height, 1)), -1, dtype=np.int32)
    for i in range(n):
        j = i
        while j >= 0:
            anc[i, level[j]] = j
            j = parent[j]
    return anc


def lex_matrix(level, rank, anc):
    level = [int(v) for v in level]
    rank = [int(v) for v in rank]
    anc = anc.tolist()
    n = len(level)
    out = np.zeros((n, n), dtype=np.int8)
    for a in range(n):
        la = level[a]
        pa = anc[a]
        for b in range(n):
            if a == b:
                continue
            lb = level[b]
            pb = anc[b]
            if la <= lb and pb[la] == a:
                out[a, b] = -1
                continue
            if lb < la and pa[lb] == b:
                out[a, b] = 1
                continue
            k = 0
            while pa[k] == pb[k]:
                k += 1
            out[a, b] = -1 if rank[pa[k]] < rank[pb[k]] else 1
    return out


def order_violations(cmp, limit):
    """Trichotomy and transitivity failures of a comparison matrix."""
    m = cmp.tolist()
    n = len(m)
    found = []
    for a in range(n):
        if m[a][a] != 0:
            found.append((0, a, a, a))
        for b in range(n):
            if a != b and (m[a][b] == 0 or m[a][b] != -m[b][a]):
                found.append((0, a, b, b))
            if len(found) >= limit:
                return found
    for a in range(n):
        ra = m[a]
        for b in range(n):
            if ra[b] != -1:
                continue
            rb = m[b]
            for c in range(n):
                if rb[c] == -1 and ra[c] != -1:
                    found.append((1, a, b, c))
                    if len(found) >= limit:
                        return found
    return found


def meet_violations(cmp, level, anc, limit):
    """Quadruples (a, b, c, d): a < c < b lexically, c lower than a and b, d <= a, b not below c."""
    m = cmp.tolist()
    level = [int(v) for v in level]
    anc = anc.tolist()
    n = len(level)
    found = []
    for a in range(n):
        la = level[a]
        pa = anc[a]
        for b in range(n):
            if b == a:
                continue
            lb = level[b]
            pb = anc[b]
            top = la if la < lb else lb
            common = 0
            while common <= top and pa[common] == pb[common]:
                common += 1
            for c in range(n):
                lc = level[c]
                if lc >= la or lc >= lb:
                    continue
                if m[a][c] != -1 or m[c][b] != -1:
                    continue
                for k in range(lc, common):
                    found.append((a, b, c, pa[k]))
                    if len(found) >= limit:
                        return found
    return found
