# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see _kernels_py for the reference semantics."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def ancestor_table(level, parent, int height):
    cdef int[:] lv = np.ascontiguousarray(level, dtype=np.int32)
    cdef int[:] par = np.ascontiguousarray(parent, dtype=np.int32)
    cdef Py_ssize_t n = lv.shape[0]
    anc_arr = np.full((n, max(height, 1)), -1, dtype=np.int32)
    cdef int[:, :] anc = anc_arr
    cdef Py_ssize_t i
    cdef int j
    for i in range(n):
        j = <int>i
        while j >= 0:
            anc[i, lv[j]] = j
            j = par[j]
    return anc_arr


def lex_matrix(level, rank, anc_in):
    cdef int[:] lv = np.ascontiguousarray(level, dtype=np.int32)
    cdef int[:] rk = np.ascontiguousarray(rank, dtype=np.int32)
    cdef int[:, :] anc = np.ascontiguousarray(anc_in, dtype=np.int32)
    cdef Py_ssize_t n = lv.shape[0]
    out_arr = np.zeros((n, n), dtype=np.int8)
    cdef signed char[:, :] out = out_arr
    cdef Py_ssize_t a, b
    cdef int la, lb, k
    for a in range(n):
        la = lv[a]
        for b in range(n):
            if a == b:
                continue
            lb = lv[b]
            if la <= lb and anc[b, la] == a:
                out[a, b] = -1
                continue
            if lb < la and anc[a, lb] == b:
                out[a, b] = 1
                continue
            k = 0
            while anc[a, k] == anc[b, k]:
                k += 1
            if rk[anc[a, k]] < rk[anc[b, k]]:
                out[a, b] = -1
            else:
                out[a, b] = 1
    return out_arr


def order_violations(cmp_in, Py_ssize_t limit):
    cdef signed char[:, :] m = np.ascontiguousarray(cmp_in, dtype=np.int8)
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t a, b, c
    found = []
    for a in range(n):
        if m[a, a] != 0:
            found.append((0, a, a, a))
        for b in range(n):
            if a != b and (m[a, b] == 0 or m[a, b] != -m[b, a]):
                found.append((0, a, b, b))
            if len(found) >= limit:
                return found
    for a in range(n):
        for b in range(n):
            if m[a, b] != -1:
                continue
            for c in range(n):
                if m[b, c] == -1 and m[a, c] != -1:
                    found.append((1, a, b, c))
                    if len(found) >= limit:
                        return found
    return found


def meet_violations(cmp_in, level, anc_in, Py_ssize_t limit):
    cdef signed char[:, :] m = np.ascontiguousarray(cmp_in, dtype=np.int8)
    cdef int[:] lv = np.ascontiguousarray(level, dtype=np.int32)
    cdef int[:, :] anc = np.ascontiguousarray(anc_in, dtype=np.int32)
    cdef Py_ssize_t n = lv.shape[0]
    cdef Py_ssize_t a, b, c
    cdef int la, lb, lc, top, common, k
    found = []
    for a in range(n):
        la = lv[a]
        for b in range(n):
            if b == a:
                continue
            lb = lv[b]
            top = la if la < lb else lb
            common = 0
            while common <= top and anc[a, common] == anc[b, common]:
                common += 1
            for c in range(n):
                lc = lv[c]
                if lc >= la or lc >= lb:
                    continue
                if m[a, c] != -1 or m[c, b] != -1:
                    continue
                for k in range(lc, common):
                    found.append((a, b, c, anc[a, k]))
                    if len(found) >= limit:
                        return found
    return found
